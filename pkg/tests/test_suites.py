from __future__ import annotations

import json

import numpy as np
import pandas as pd
import pytest

from src.lie.functions import FUNCTION_REGISTRY, InvariantFunction
from src.main import EXIT_OK, EXIT_USAGE, main
from src.suites.config import RunConfig, Tolerances
from src.suites.coordinator import VerificationCoordinator, lower_check, upper_check
from src.suites.report import to_plain
from src.utils.metrics import compare_groups, summarize_checks, summarize_run


def _run(command, **kwargs):
    config = RunConfig(command=command, **kwargs)
    coordinator = VerificationCoordinator(config)
    return coordinator, coordinator.run()


def test_tolerance_overrides():
    tol = Tolerances().updated(["fd=1e-6", "angle = 2e-7"])
    assert tol.fd == 1e-6
    assert tol.angle == 2e-7
    assert tol.algebraic == Tolerances().algebraic


@pytest.mark.parametrize("item", ["bogus=1", "fd", "fd=abc", "fd=-1e-3", "fd=0"])
def test_bad_tolerance_overrides(item):
    with pytest.raises(ValueError):
        Tolerances().updated([item])


@pytest.mark.parametrize(
    "kwargs",
    [
        {"command": "plot"},
        {"n_samples": 0},
        {"fd_step": 0.1},
        {"fd_step": 0.0},
        {"flow_steps": 0},
        {"seed": -1},
        {"seed": 2**64},
        {"function_name": "det"},
    ],
)
def test_run_config_validation(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs)


def test_checks():
    assert upper_check("x", [1e-13, 1e-12], 1e-12).passed
    assert not upper_check("x", [2e-12], 1e-12).passed
    assert lower_check("y", [1e-3, 1e-2], 1e-9).passed
    assert not lower_check("y", [1e-10], 1e-9).passed
    assert upper_check("empty", [], 0.0).passed


def test_summaries():
    df = pd.DataFrame({"sample": [0, 1], "defect": [1e-13, 3e-13]})
    summary = summarize_run(df)
    assert summary["samples"] == 2.0
    assert summary["max_defect"] == pytest.approx(3e-13)
    assert "max_sample" not in summary
    table = compare_groups({"SU2": df, "T2": df})
    assert list(table.index) == ["SU2", "T2"]
    assert summarize_checks([]).empty
    checks = summarize_checks([upper_check("a", [0.0], 1.0), upper_check("b", [2.0], 1.0)])
    assert checks.loc["a", "passed"] and not checks.loc["b", "passed"]


def test_to_plain_splits_complex_arrays():
    plain = to_plain({"m": np.array([[1 + 2j]]), "x": np.float64(0.5), "flag": np.bool_(True)})
    assert plain == {"m": {"real": [[1.0]], "imag": [[2.0]]}, "x": 0.5, "flag": True}


def test_surface_command(tmp_path):
    out = tmp_path / "surface.json"
    assert main(["surface", "--pattern", "torus1", "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["schema_version"] == "1.0"
    assert report["command"] == "surface"
    assert report["passed"]
    assert report["payload"]["surface"]["euler_characteristic"] == -1
    assert report["payload"]["chart"]["boundary_words"] == ["b a b^-1 a^-1"]


@pytest.mark.parametrize(
    "argv",
    [
        ["surface", "--pattern", "no_such_pattern"],
        ["verify", "--tol", "bogus=1"],
        ["verify", "--pattern", "torus_closed"],
        ["verify", "--group", "E8"],
        ["verify", "--samples", "0"],
        ["flow", "--function", "nope"],
        ["bracket", "--function", "nope"],
    ],
)
def test_usage_errors(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path / "r.json")]) == EXIT_USAGE
    assert not (tmp_path / "r.json").exists()


def test_non_invariant_function_is_a_usage_error(monkeypatch, tmp_path):
    corner = InvariantFunction("corner_entry", lambda g: float(np.real(g[0, 0])))
    monkeypatch.setitem(FUNCTION_REGISTRY, corner.name, corner)
    out = tmp_path / "r.json"
    assert main(["flow", "--function", corner.name, "--samples", "1", "--out", str(out)]) == EXIT_USAGE
    assert not out.exists()


def test_reports_are_reproducible(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "--pattern", "ngon3", "--samples", "3", "--seed", "0x2A"]
    assert main(argv + ["--out", str(first)]) == EXIT_OK
    assert main(argv + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_two_gon_form_is_zero(tmp_path):
    _, result = _run("verify", pattern_path="ngon2", n_samples=2, output_path=tmp_path / "r.json")
    assert result.passed
    assert np.all(result.payload["omega"] == 0.0)


def test_verify_torus(tmp_path):
    coordinator, result = _run("verify", n_samples=3, output_path=tmp_path / "r.json")
    names = {check.name for check in result.checks}
    assert {"d_omega", "moment", "kernel_formula", "triangulation_invariance", "interior_vertex_invariance"} <= names
    assert "mapping_class_torus_s" in names
    assert result.passed, [c for c in result.checks if not c.passed]
    assert result.samples["moment_defect_abs"].max() < 1e-10
    log = coordinator.get_event_log()
    assert list(log.columns) == ["step", "suite", "message"]
    assert log["step"].is_monotonic_increasing


def test_interior_vertex_skips_kernel_checks(tmp_path):
    coordinator, result = _run("verify", pattern_path="hexagon_boundary", n_samples=2, output_path=tmp_path / "r.json")
    names = {check.name for check in result.checks}
    assert "kernel_formula" not in names
    assert "min_degeneracy" not in names
    assert {"d_omega", "moment", "rank_identity"} <= names
    assert coordinator.get_event_log()["message"].str.contains("interior vertices").any()


@pytest.mark.parametrize("command", ["flow", "bracket", "groupoid", "dirac"])
def test_suites_pass_on_torus(command, tmp_path):
    _, result = _run(command, n_samples=2, flow_steps=100, output_path=tmp_path / "r.json")
    assert result.checks
    assert result.passed, [c for c in result.checks if not c.passed]


def test_dirac_on_even_cycle_logs_missing_bivector(tmp_path):
    coordinator, result = _run("dirac", pattern_path="ngon4", n_samples=2, output_path=tmp_path / "r.json")
    assert "bivector" not in result.payload
    assert coordinator.get_event_log()["message"].str.contains("no bivector").any()
    assert result.passed
