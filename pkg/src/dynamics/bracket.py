"""Goldman's formula for the bracket of two loop functions."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence, Tuple

from src.errors import WordError
from src.lie.functions import InvariantFunction, phi_dot
from src.moduli.chart import ModuliChart, ModuliPoint, word_endpoints
from src.moduli.holonomy import holonomy
from src.surface.words import Word, as_word, free_reduce, invert_word


@dataclass(frozen=True)
class Crossing:
    """One transverse crossing of alpha and beta.

    Both loops are re-based at the crossing by conjugation:
    a_i = alpha_path alpha alpha_path^-1 and b_i = beta_path beta beta_path^-1,
    two loops at a common vertex.
    """

    sign: int
    alpha_path: Word = ()
    beta_path: Word = ()

    def rebased(self, alpha: Word, beta: Word) -> Tuple[Word, Word]:
        return (
            free_reduce(self.alpha_path + alpha + invert_word(self.alpha_path)),
            free_reduce(self.beta_path + beta + invert_word(self.beta_path)),
        )


@dataclass(frozen=True)
class BracketData:
    """Transverse crossings of two loops with their signs and re-basing conjugators."""

    alpha: Word
    beta: Word
    crossings: Tuple[Crossing, ...]

    @classmethod
    def of(
        cls,
        alpha: "Word | str",
        beta: "Word | str",
        crossings: Sequence[Tuple[int, "Word | str", "Word | str"]],
    ) -> "BracketData":
        return cls(
            as_word(alpha),
            as_word(beta),
            tuple(Crossing(int(s), as_word(a), as_word(b)) for s, a, b in crossings),
        )

    @classmethod
    def from_segments(
        cls,
        alpha: "Word | str",
        segments: Sequence["Word | str"],
        signs: Sequence[int],
    ) -> "BracketData":
        """beta = b_0 ... b_l crossing alpha between b_(i-1) and b_i with sign signs[i-1].

        At crossing i, beta is re-based along its prefix P = b_0 ... b_(i-1): b_i = P^-1 beta P.
        """
        parts = tuple(as_word(s) for s in segments)
        if len(parts) != len(signs) + 1:
            raise WordError("Need exactly one more segment than crossing signs")
        beta = free_reduce(tuple(letter for part in parts for letter in part))
        crossings = []
        prefix: Word = ()
        for part, sign in zip(parts[:-1], signs):
            prefix = prefix + part
            crossings.append(Crossing(int(sign), (), invert_word(free_reduce(prefix))))
        return cls(as_word(alpha), beta, tuple(crossings))

    def rebase(self, loop: "Word | str | None" = None) -> "BracketData":
        """Prefix both conjugators of every crossing with one closed loop; the bracket does not change.

        Without a loop each crossing uses its own re-based beta, which is closed at the right vertex.
        """
        crossings = []
        for c in self.crossings:
            extra = as_word(loop) if loop is not None else c.rebased(self.alpha, self.beta)[1]
            crossings.append(Crossing(c.sign, extra + c.alpha_path, extra + c.beta_path))
        return replace(self, crossings=tuple(crossings))

    def validate(self, chart: ModuliChart) -> None:
        for name, word in (("alpha", self.alpha), ("beta", self.beta)):
            source, target = word_endpoints(chart, word)
            if source != target:
                raise WordError(f"{name} is not a closed loop")
        for crossing in self.crossings:
            if crossing.sign not in (1, -1):
                raise WordError("Crossing signs must be +1 or -1")
            moved_alpha, moved_beta = crossing.rebased(self.alpha, self.beta)
            ends_a = word_endpoints(chart, moved_alpha) if moved_alpha else None
            ends_b = word_endpoints(chart, moved_beta) if moved_beta else None
            for ends in (ends_a, ends_b):
                if ends is not None and ends[0] != ends[1]:
                    raise WordError("Re-based loop is not closed")
            if ends_a is not None and ends_b is not None and ends_a[0] != ends_b[0]:
                raise WordError(f"Re-based loops sit at vertices {ends_a[0]} and {ends_b[0]}")


def goldman_bracket(
    chart: ModuliChart,
    point: ModuliPoint,
    data: BracketData,
    phi: InvariantFunction,
    psi: InvariantFunction,
) -> float:
    """sum_i eps_i <phi_dot(kappa(a_i)), psi_dot(kappa(b_i))> over the re-based crossings."""
    data.validate(chart)
    model = chart.model
    total = 0.0
    for crossing in data.crossings:
        moved_alpha, moved_beta = crossing.rebased(data.alpha, data.beta)
        xi = phi_dot(model, phi, holonomy(chart, point, moved_alpha))
        zeta = phi_dot(model, psi, holonomy(chart, point, moved_beta))
        total += crossing.sign * model.inner(xi, zeta)
    return total
