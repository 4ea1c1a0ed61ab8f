"""Exhaustive checks of the four structural statements on one cover.

Each checker walks the admissible r (those with rm+n at most ``max_length``)
and returns one :class:`Check` per r.  Jump tables are shared through a
:class:`ScanCache` so several checks on the same cover enumerate jets once.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .asympt import closed_form, closed_form_range, envelope_ok
from .cover import CoverSpec, jump_table, pivot_index, sufficient_jet_order
from .errors import DomainError, VerificationError
from .strata import verify_semicontinuity

THEOREMS = ("usu", "semicont", "gener", "asymp")


@dataclass(frozen=True)
class Check:
    theorem: str
    r: int
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{self.theorem}\tr={self.r}\t{'ok' if self.ok else 'FAIL'}\t{self.detail}"


@dataclass
class ScanCache:
    cap: int | None = None
    tables: dict = dc_field(default_factory=dict)

    def table(self, cover: CoverSpec, r: int) -> dict:
        key = (id(cover), r)
        if key not in self.tables:
            self.tables[key] = (cover, jump_table(cover, r, self.cap))
        return self.tables[key][1]


def admissible_r(cover: CoverSpec, max_length: int, r_min: int = 1) -> list[int]:
    """r >= r_min with rm+n <= max_length."""
    out, r = [], r_min
    while r * cover.m + cover.n <= max_length:
        out.append(r)
        r += 1
    return out


def check_usu(cover: CoverSpec, max_length: int = 6, cache: ScanCache | None = None) -> list[Check]:
    cache = cache or ScanCache()
    out = []
    for r in admissible_r(cover, max_length):
        bound = sufficient_jet_order(cover, r, "bound")
        try:
            s = sufficient_jet_order(cover, r, "exhaustive", table=cache.table(cover, r))
            out.append(Check("usu", r, True, f"s={s} bound={bound}"))
        except VerificationError as exc:
            out.append(Check("usu", r, False, str(exc)))
    return out


def check_semicont(cover: CoverSpec, max_length: int = 6,
                   cache: ScanCache | None = None) -> list[Check]:
    cache = cache or ScanCache()
    out = []
    for r in admissible_r(cover, max_length):
        rep = verify_semicontinuity(cover, r, cap=cache.cap)
        out.append(Check("semicont", r, rep.ok, rep.summary()))
    return out


def check_gener(cover: CoverSpec, max_length: int = 6, cache: ScanCache | None = None) -> list[Check]:
    cache = cache or ScanCache()
    out = []
    for r in admissible_r(cover, max_length):
        top = max(cache.table(cover, r).values())
        bound = cover.jump_bound(r)
        out.append(Check("gener", r, top <= bound, f"max_h={top} bound={bound}"))
    return out


def check_asymp(cover: CoverSpec, max_length: int = 8, cache: ScanCache | None = None) -> list[Check]:
    """Closed form against the exhaustive maximum, plus the slope envelope."""
    cache = cache or ScanCache()
    j = pivot_index(cover)
    out = []
    for r in admissible_r(cover, max_length, closed_form_range(cover, j) + 1):
        h, case = closed_form(cover, r, j)
        top = max(cache.table(cover, r).values())
        env = envelope_ok(cover, r, h, j)
        slope = Fraction(h, r)
        out.append(Check("asymp", r, top == h and env,
                         f"closed={h} exhaustive={top} slope={slope} case={case}"))
    return out


CHECKERS = {"usu": check_usu, "semicont": check_semicont, "gener": check_gener,
            "asymp": check_asymp}


def run_theorem(theorem: str, cover: CoverSpec, max_length: int | None = None,
                cache: ScanCache | None = None) -> list[Check]:
    if theorem not in CHECKERS:
        raise DomainError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    if max_length is None:
        max_length = 8 if theorem == "asymp" else 6
    return CHECKERS[theorem](cover, max_length, cache)
