"""Generic jumps h_r on the families T_r and their growth in r.

For r > max(1, j), with j the pivot index of a normalized cover and L = rm+n,
the generic jump is

    p does not divide m:  L - j      if p does not divide L - j,
                          L - j - 1  otherwise;
    p divides m:          L - j.

Smaller r have no closed form; their values are measured by enumeration
or sampling.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .cover import (TANGENT, CoverSpec, CurveJet, enumeration_cap, count_jets,
                    jump, jump_table, pivot_index)
from .errors import DomainError, VerificationError

CASE_PRIME = "p∤m, p∤(rm+n-j)"
CASE_DIVIDES = "p∤m, p|(rm+n-j)"
CASE_PM = "p|m"


@dataclass(frozen=True)
class GenericReport:
    r: int
    h_r: int
    j: int
    case: str | None
    witness: CurveJet | None
    closed_form: bool
    criterion_holds: bool | None = None

    @property
    def slope(self) -> Fraction:
        return Fraction(self.h_r, self.r)

    def to_dict(self) -> dict:
        return {
            "r": self.r, "h_r": self.h_r, "j": self.j, "case": self.case,
            "closed_form": self.closed_form,
            "witness": self.witness.to_text() if self.witness else None,
            "criterion_holds": self.criterion_holds,
            "slope": [self.slope.numerator, self.slope.denominator],
        }


def closed_form_range(cover: CoverSpec, j: int | None = None) -> int:
    """The closed form applies for r strictly greater than this value."""
    if j is None:
        j = pivot_index(cover)
    return max(1, j)


def closed_form(cover: CoverSpec, r: int, j: int | None = None) -> tuple[int, str]:
    if j is None:
        j = pivot_index(cover)
    p, L = cover.p, r * cover.m + cover.n
    if cover.m % p == 0:
        return L - j, CASE_PM
    if (L - j) % p:
        return L - j, CASE_PRIME
    return L - j - 1, CASE_DIVIDES


def _jet(cover: CoverSpec, r: int, head) -> CurveJet:
    _, length = cover.family(r)
    head = list(head)
    return CurveJet(cover.field, TANGENT, r, tuple(head + [0] * (length - len(head))))


def _criterion_jets(cover: CoverSpec, r: int, j: int) -> list[CurveJet]:
    """beta_r = 1, beta_{r+1} = b with theta_{0,j+1} - m theta_{0j} b != 0, rest 0."""
    F = cover.field
    t1, t0 = cover.theta0(j + 1), cover.theta0(j)
    mt0 = F.mul(cover.m % F.p, t0)
    return [_jet(cover, r, [1, b]) for b in F.elements() if F.sub(t1, F.mul(mt0, b))]


def _find_witness(cover: CoverSpec, r: int, h: int, first: list[CurveJet], seed: int,
                  trials: int) -> tuple[CurveJet | None, bool | None]:
    """A jet with jump h: the given candidates, then short scans, then random jets.

    The flag tells whether every candidate attains h (None without candidates).
    """
    hits = [jet for jet in first if jump(cover, jet) == h]
    criterion = len(hits) == len(first) if first else None
    if hits:
        return hits[0], criterion
    F = cover.field
    for b0 in F.nonzero_elements():
        for b1 in F.elements():
            jet = _jet(cover, r, [b0, b1])
            if jump(cover, jet) == h:
                return jet, criterion
    rng = random.Random(seed)
    _, length = cover.family(r)
    for _ in range(trials):
        jet = _random_jet(cover, r, length, rng)
        if jump(cover, jet) == h:
            return jet, criterion
    return None, criterion


def _random_jet(cover: CoverSpec, r: int, length: int, rng: random.Random) -> CurveJet:
    F = cover.field
    coeffs = [rng.randrange(1, F.q)] + [rng.randrange(F.q) for _ in range(length - 1)]
    return CurveJet(F, TANGENT, r, tuple(coeffs))


def generic_jump(cover: CoverSpec, r: int, fallback: str | None = None, trials: int = 2000,
                 seed: int = 0, cap: int | None = None) -> GenericReport:
    """h_r from the closed form, with a verified witness jet.

    Outside the closed-form range ``fallback`` chooses the measurement:
    ``"exhaustive"`` (exact over the coefficient field) or ``"sampled"``
    (a lower bound from ``trials`` random jets).
    """
    j = pivot_index(cover)
    if r > closed_form_range(cover, j):
        cover.check_certified(r)
        h, case = closed_form(cover, r, j)
        first = _criterion_jets(cover, r, j) if case == CASE_DIVIDES else [_jet(cover, r, [1])]
        witness, criterion = _find_witness(cover, r, h, first, seed, trials)
        if witness is None:
            raise VerificationError(
                f"no jet over {cover.field} attains the generic jump {h} on T_{r}; "
                "try a larger field")
        return GenericReport(r, h, j, case, witness, True,
                             criterion if case == CASE_DIVIDES else None)
    if fallback == "exhaustive":
        h, witness = _exhaustive_max(cover, r, cap)
    elif fallback == "sampled":
        h, witness = _sampled_max(cover, r, trials, seed)
    else:
        raise DomainError(
            f"r={r} is outside the closed-form range r > {closed_form_range(cover, j)}; "
            "choose an exhaustive or sampled fallback")
    return GenericReport(r, h, j, None, witness, False)


def _exhaustive_max(cover: CoverSpec, r: int, cap: int | None = None) -> tuple[int, CurveJet]:
    kind, _ = cover.family(r)
    table = jump_table(cover, r, cap)
    coeffs, h = max(table.items(), key=lambda kv: kv[1])
    return h, CurveJet(cover.field, kind, r, coeffs)


def _sampled_max(cover: CoverSpec, r: int, trials: int, seed: int) -> tuple[int, CurveJet]:
    cover.check_certified(r)
    kind, length = cover.family(r)
    rng = random.Random(seed)
    F = cover.field
    best = None
    for _ in range(max(trials, 1)):
        if kind == TANGENT:
            jet = _random_jet(cover, r, length, rng)
        else:
            jet = CurveJet.transversal(F, [rng.randrange(F.q) for _ in range(length)])
        h = jump(cover, jet)
        if best is None or h > best[0]:
            best = (h, jet)
    return best


def generic_jump_sampled(cover: CoverSpec, r: int, trials: int = 1000, seed: int = 0,
                         exhaustive: bool = False, cap: int | None = None) -> int:
    """Largest jump seen on ``trials`` random jets of T_r (a lower bound for
    h_r), or the exact maximum over the field with ``exhaustive``."""
    if exhaustive:
        return _exhaustive_max(cover, r, cap)[0]
    return _sampled_max(cover, r, trials, seed)[0]


@dataclass(frozen=True)
class SlopeRow:
    r: int
    h_r: int
    closed_form: bool

    @property
    def slope(self) -> Fraction:
        return Fraction(self.h_r, self.r)


@dataclass(frozen=True)
class AsymptoteTable:
    m: int
    n: int
    j: int
    rows: tuple[SlopeRow, ...]

    @property
    def limit(self) -> int:
        return self.m

    def to_tsv(self) -> str:
        lines = ["r\th_r\tnum\tden"]
        for row in self.rows:
            s = row.slope
            lines.append(f"{row.r}\t{row.h_r}\t{s.numerator}\t{s.denominator}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "m": self.m, "n": self.n, "j": self.j, "limit": self.limit,
            "rows": [{"r": row.r, "h_r": row.h_r, "num": row.slope.numerator,
                      "den": row.slope.denominator, "closed_form": row.closed_form}
                     for row in self.rows],
        }, indent=2, sort_keys=True) + "\n"


def envelope_ok(cover: CoverSpec, r: int, h: int, j: int) -> bool:
    """|h/r - m| <= (n+j+1)/r and L-j-1 <= h <= L-j, in exact arithmetic."""
    L = r * cover.m + cover.n
    close = abs(Fraction(h, r) - cover.m) <= Fraction(cover.n + j + 1, r)
    return close and L - j - 1 <= h <= L - j


def asymptotic_slope(cover: CoverSpec, r_max: int, small_r: str = "exhaustive",
                     trials: int = 1000, seed: int = 0, cap: int | None = None) -> AsymptoteTable:
    """Rows (r, h_r, h_r/r) for r = 1..r_max; the limit of h_r/r is m.

    Rows with r above the closed-form range are checked against the
    envelope.  Smaller r are measured (``small_r`` is ``"exhaustive"``,
    ``"sampled"`` or ``"skip"``); exhaustive measurement switches to sampling
    when the jet space exceeds the cap.
    """
    if r_max < 1:
        raise DomainError("r_max must be >= 1")
    j = pivot_index(cover)
    lo = closed_form_range(cover, j)
    rows = []
    for r in range(1, r_max + 1):
        if r > lo:
            h, _ = closed_form(cover, r, j)
            if not envelope_ok(cover, r, h, j):  # pragma: no cover - guards the formula
                raise VerificationError(f"h_{r}={h} violates the slope envelope")
            rows.append(SlopeRow(r, h, True))
            continue
        if small_r == "skip":
            continue
        kind, length = cover.family(r)
        mode = small_r
        if mode == "exhaustive" and count_jets(cover.field, kind, length) > enumeration_cap(cap):
            mode = "sampled"
        h = generic_jump(cover, r, fallback=mode, trials=trials, seed=seed, cap=cap).h_r
        rows.append(SlopeRow(r, h, False))
    return AsymptoteTable(cover.m, cover.n, j, tuple(rows))
