"""Artin-Schreier extensions of k((t)): standard form and ramification jump."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import PrecisionError
from .ffield import Field
from .series import LaurentSeries


@dataclass(frozen=True)
class ReducedForm:
    """``sum c_l t^{-l}`` over l >= 1 prime to p: the canonical representative
    of a modulo ``d^p - d`` shifts and k[[t]]."""

    field: Field
    terms: dict[int, int] = dc_field(default_factory=dict)
    proven_prec: int = 0

    def __post_init__(self):
        p = self.field.p
        for l, c in self.terms.items():
            if l < 1 or l % p == 0 or c == 0:
                raise ValueError(f"invalid reduced term {c} t^-{l}")

    @property
    def jump(self) -> int:
        return max(self.terms, default=0)

    def __eq__(self, other):
        if not isinstance(other, ReducedForm):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def as_series(self, prec: int = 0) -> LaurentSeries:
        return LaurentSeries.from_dict(self.field, {-l: c for l, c in self.terms.items()}, prec)

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        return " + ".join(f"({F.format(c)})t^-{l}" for l, c in sorted(self.terms.items(), reverse=True))


def reduce_polar(field: Field, polar: dict[int, int]) -> dict[int, int]:
    """Reduce a polar part ``{l: c}`` meaning ``sum c t^{-l}`` (l >= 1).

    Deepest poles first: ``c t^{-ps}`` becomes ``c^{1/p} t^{-s}``, which is
    the same class modulo ``d^p - d`` with ``d = c^{1/p} t^{-s}``.
    """
    p = field.p
    work = {l: c for l, c in polar.items() if c and l >= 1}
    out: dict[int, int] = {}
    add, root = field.add, field.pth_root
    while work:
        l = max(work)
        c = work.pop(l)
        if l % p:
            out[l] = c
            continue
        s = l // p
        merged = add(work.get(s, 0), root(c))
        if merged:
            work[s] = merged
        else:
            work.pop(s, None)
    return out


def as_reduce(a: LaurentSeries) -> ReducedForm:
    if a.prec < 0:
        raise PrecisionError(
            f"series known only mod t^{a.prec}; the coefficients of t^{a.prec}..t^-1 are needed")
    polar = {-k: c for k, c in a.terms().items() if k < 0}
    return ReducedForm(a.field, reduce_polar(a.field, polar), a.prec)


def as_jump(a: LaurentSeries) -> int:
    """The unique ramification jump of k((t))(y)/k((t)), y^p - y = a; 0 if trivial."""
    return as_reduce(a).jump
