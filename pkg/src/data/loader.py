"""Utilities for loading stock gluing patterns, group descriptions and intersection data."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

from src.dynamics.bracket import BracketData
from src.dynamics.flows import IntersectionData
from src.errors import PatternError
from src.lie.models import MODEL_REGISTRY, LieGroupModel, get_model, model_from_description
from src.surface.pattern import GluingPattern, parse_pattern

DATA_DIR = Path(__file__).resolve().parents[2] / "data"
PATTERN_DIR = DATA_DIR / "patterns"
GROUP_DIR = DATA_DIR / "groups"
INTERSECTION_DIR = DATA_DIR / "intersections"


def list_stock_patterns() -> List[str]:
    return sorted(p.stem for p in PATTERN_DIR.glob("*.pat"))


def resolve_pattern_path(name_or_path: str | Path) -> Path:
    """A stock pattern name (``torus1``) or a path to a ``.pat`` file."""
    path = Path(name_or_path)
    if path.suffix == ".pat" and path.exists():
        return path
    stock = PATTERN_DIR / f"{name_or_path}.pat"
    if stock.exists():
        return stock
    raise PatternError(f"No pattern file {name_or_path!r}; stock patterns: {', '.join(list_stock_patterns())}")


def load_pattern(name_or_path: str | Path) -> GluingPattern:
    return parse_pattern(resolve_pattern_path(name_or_path).read_text(encoding="utf-8"))


def load_group(name_or_path: str) -> LieGroupModel:
    """Stock model (``SU2``), a description stored under data/groups (``so3``) or a JSON path."""
    if name_or_path in MODEL_REGISTRY:
        return get_model(name_or_path)
    stock = GROUP_DIR / f"{name_or_path}.json"
    if stock.exists():
        return model_from_description(json.loads(stock.read_text(encoding="utf-8")))
    return get_model(name_or_path)


@dataclass(frozen=True)
class IntersectionSet:
    pattern: str
    flows: Tuple[IntersectionData, ...]
    brackets: Tuple[BracketData, ...]


def _bracket_data(item: dict) -> BracketData:
    """Either explicit crossings [sign, alpha_path, beta_path] or beta given by segments."""
    if "segments" in item:
        return BracketData.from_segments(item["alpha"], item["segments"], item["signs"])
    crossings = [tuple(c) for c in item["crossings"]]
    if any(len(c) != 3 for c in crossings):
        raise PatternError("Each crossing needs a sign, an alpha conjugator and a beta conjugator")
    return BracketData.of(item["alpha"], item["beta"], crossings)


def load_intersections(name_or_path: str | Path) -> IntersectionSet:
    """Flow and bracket data for a pattern, keyed like the stock pattern files."""
    path = Path(name_or_path)
    if not (path.suffix == ".json" and path.exists()):
        path = INTERSECTION_DIR / f"{Path(name_or_path).stem}.json"
    if not path.exists():
        raise PatternError(f"No intersection data for {name_or_path!r}")
    raw = json.loads(path.read_text(encoding="utf-8"))
    flows = tuple(
        IntersectionData.of(item["target"], item["segments"], item["signs"], item["loop"])
        for item in raw.get("flows", [])
    )
    brackets = tuple(_bracket_data(item) for item in raw.get("brackets", []))
    return IntersectionSet(raw.get("pattern", path.stem), flows, brackets)
