"""Artin-Schreier covers of k[[T, U]] and their restrictions to curve germs.

A cover is ``x^p - x = a`` with ``a`` a Laurent polynomial in T, U whose poles
lie on the branch divisor: T=0, and U=0 as well when ``d == 2``.  Regular
curve germs are given by their Weierstrass coefficients:

* transversal (d=1, r=1): ``U = alpha_1 T + alpha_2 T^2 + ...``
* tangent (r >= 2, or d=2): ``T = beta_r U^r + beta_{r+1} U^{r+1} + ...``, beta_r != 0
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from dataclasses import dataclass, replace
from functools import cached_property

from .errors import (CapExceeded, DomainError, PrecisionError, UnramifiedError,
                     VerificationError)
from .ffield import Field
from .local import ReducedForm, as_reduce
from .series import BivariateLaurent, LaurentSeries, parse_element_list

TRANSVERSAL = "transversal"
TANGENT = "tangent"

CAP_ENV = "ASRAMIFY_ENUM_CAP"
DEFAULT_CAP = 1_000_000


def enumeration_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get(CAP_ENV, DEFAULT_CAP))


@dataclass(frozen=True)
class CoverSpec:
    field: Field
    d: int
    a: BivariateLaurent
    m: int
    n: int
    normalized: bool = False

    @property
    def p(self) -> int:
        return self.field.p

    def family(self, r: int) -> tuple[str, int]:
        """Jet kind and the jet length that certifies every jump in T_r."""
        if r < 1:
            raise DomainError(f"r must be >= 1, got {r}")
        if self.d == 1 and r == 1:
            return TRANSVERSAL, self.m
        return TANGENT, r * self.m + self.n

    def jump_bound(self, r: int) -> int:
        """Upper bound for every jump on T_r: m for transversal curves, rm+n otherwise."""
        return self.m if self.d == 1 and r == 1 else r * self.m + self.n

    def tail_valuations(self, r: int) -> list[int]:
        """Lowest possible valuation of each unknown-tail generator on a curve of T_r."""
        kind, _ = self.family(r)
        if kind == TANGENT:
            return [r * x + y for x, y in self.a.tail_generators()]
        return [x + y for x, y in self.a.tail_generators()]

    def check_certified(self, r: int) -> None:
        bad = [v for v in self.tail_valuations(r) if v < 0]
        if bad:
            raise PrecisionError(
                f"the stored precision of a does not determine jumps on T_{r}: "
                f"the unknown tail can reach u^{min(bad)}")

    @cached_property
    def _by_T(self) -> dict[int, list[tuple[int, int]]]:
        groups = defaultdict(list)
        for (i, j), c in self.a.terms.items():
            groups[i].append((j, c))
        return dict(sorted(groups.items()))

    @cached_property
    def _by_U(self) -> dict[int, list[tuple[int, int]]]:
        groups = defaultdict(list)
        for (i, j), c in self.a.terms.items():
            groups[j].append((i, c))
        return dict(sorted(groups.items()))

    def theta0(self, j: int) -> int:
        """theta_{0j}: the coefficient of T^{-m} U^{j-n} in a."""
        return self.a.terms.get((-self.m, j - self.n), 0)

    def __str__(self):
        return f"cover over {self.field}: d={self.d}, m={self.m}, n={self.n}, a={self.a!r}"


def make_cover(a: BivariateLaurent, d: int, normalized: bool = False) -> CoverSpec:
    """Validate branch data and wrap ``a`` without changing it."""
    if d not in (1, 2):
        raise DomainError(f"d must be 1 or 2, got {d}")
    if a.is_zero():
        raise UnramifiedError("a = 0 defines the trivial cover")
    m, n = a.pole_T, a.pole_U
    if m < 1:
        raise UnramifiedError("a has no pole along T=0")
    if d == 1 and n:
        raise DomainError("d=1 but a has a pole along U=0")
    if d == 2 and n == 0:
        raise UnramifiedError("d=2 but a has no pole along U=0")
    return CoverSpec(a.field, d, a, m, n, normalized)


# -- normalization --------------------------------------------------------------

def _shift(a: dict, D: list[tuple[int, int, int]], field: Field) -> dict:
    """a - D^p + D for D given as a list of monomials (i, j, c)."""
    p = field.p
    out = dict(a)
    for i, j, c in D:
        key = (i * p, j * p)
        out[key] = field.sub(out.get(key, 0), field.frob(c))
        out[(i, j)] = field.add(out.get((i, j), 0), c)
    return {k: v for k, v in out.items() if v}


def _u_step(terms: dict, field: Field):
    """Lower the U-pole when p | n and the U^{-n} column is a p-th power."""
    p = field.p
    n = max([0] + [-j for _, j in terms])
    if n == 0 or n % p:
        return None
    column = {i: c for (i, j), c in terms.items() if j == -n}
    if any(i % p for i in column):
        return None
    root = field.pth_root
    return [(i // p, -n // p, root(c)) for i, c in column.items()]


def _t_step(terms: dict, field: Field):
    """Lower the T-pole when p | m and the T^{-m} row is a p-th power."""
    p = field.p
    m = max([0] + [-i for i, _ in terms])
    if m == 0 or m % p:
        return None
    row = {j: c for (i, j), c in terms.items() if i == -m}
    if any(j % p for j in row):
        return None
    root = field.pth_root
    return [(-m // p, j // p, root(c)) for j, c in row.items()]


def _pivot(terms: dict, field: Field, d: int) -> int | None:
    """Smallest j with theta_{0j} != 0, and j != n mod p when p | m."""
    p = field.p
    m = max([0] + [-i for i, _ in terms])
    n = max([0] + [-j for _, j in terms]) if d == 2 else 0
    row = sorted(j + n for (i, j) in terms if i == -m)
    if m % p:
        return row[0] if row else None
    for j in row:
        if (j - n) % p:
            return j
    return None


def _theta_step(terms: dict, field: Field, d: int):
    """For p | m, clear theta_{0i} for i below the pivot (those i are = n mod p)."""
    p = field.p
    m = max([0] + [-i for i, _ in terms])
    if m == 0 or m % p:
        return None
    j = _pivot(terms, field, d)
    if j is None:
        return None
    n = max([0] + [-jj for _, jj in terms]) if d == 2 else 0
    below = [(y, c) for (x, y), c in terms.items() if x == -m and y + n < j]
    if not below:
        return None
    root = field.pth_root
    return [(-m // p, y // p, root(c)) for y, c in below]


def cover_normalize(a: BivariateLaurent, d: int) -> CoverSpec:
    """An equivalent datum ``a + D^p - D`` with minimal U-pole, minimal T-pole,
    and, when p | m, theta_{0i} = 0 below the pivot index.

    The reductions act on the listed terms; ``D`` is always an exact Laurent
    polynomial, so any unknown tail of ``a`` is carried over unchanged.
    """
    field = a.field
    make_cover(a, d)
    terms = dict(a.terms)
    seen = 0
    while True:
        step = (_u_step(terms, field) if d == 2 else None) or _t_step(terms, field) \
            or _theta_step(terms, field, d)
        if step is None:
            break
        terms = _shift(terms, step, field)
        if not terms:
            raise UnramifiedError("a is a D^p - D shift of 0: the cover is trivial")
        seen += 1
        if seen > 10_000:  # pragma: no cover - (m, n) decreases every round
            raise RuntimeError("normalization did not terminate")
    out = BivariateLaurent(field, terms, a.prec, a.clear)
    if d == 2 and out.pole_U == 0:
        raise UnramifiedError("after reduction a has no pole along U=0: the cover is unramified there")
    if out.pole_T == 0:
        raise UnramifiedError("after reduction a has no pole along T=0: the cover is unramified there")
    cover = make_cover(out, d, normalized=True)
    if _pivot(cover.a.terms, field, d) is None:
        raise PrecisionError("no pivot index found for the normalized cover")
    return cover


def is_normalized(cover: CoverSpec) -> bool:
    """Whether no normalization step applies to the listed terms."""
    t, F = cover.a.terms, cover.field
    return not ((cover.d == 2 and _u_step(t, F)) or _t_step(t, F) or _theta_step(t, F, cover.d))


def pivot_index(cover: CoverSpec) -> int:
    """j: minimal with theta_{0j} != 0 (and j != n mod p when p | m)."""
    j = _pivot(cover.a.terms, cover.field, cover.d)
    if j is None:
        raise DomainError("no pivot index: the cover is not normalized")
    if cover.m % cover.p == 0 and any(cover.theta0(i) for i in range(j)):
        raise DomainError("p | m but theta_{0i} != 0 below the pivot; normalize first")
    return j


# -- theta matrix ------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaMatrix:
    field: Field
    r: int
    m: int
    n: int
    values: tuple[tuple[int, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.values), len(self.values[0]) if self.values else 0

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.values[i][j]


def theta_extract(cover: CoverSpec, r: int) -> ThetaMatrix:
    """theta_{ij} for 0 <= i < m+n, 0 <= j < rm+n: the coefficient of T^{i-m} U^{j-n}."""
    cover.check_certified(r)
    m, n = cover.m, cover.n
    rows, cols = m + n, r * m + n
    a = cover.a
    values = tuple(tuple(a.coefficient(i - m, j - n) for j in range(cols)) for i in range(rows))
    return ThetaMatrix(cover.field, r, m, n, values)


# -- curve jets -------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveJet:
    """Weierstrass coefficients of a regular curve germ.

    ``coeffs`` holds alpha_1..alpha_M (transversal, ``r == 1``) or
    beta_r..beta_{r+M-1} (tangent).
    """

    field: Field
    kind: str
    r: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in (TRANSVERSAL, TANGENT):
            raise DomainError(f"unknown jet kind {self.kind!r}")
        if self.kind == TRANSVERSAL and self.r != 1:
            raise DomainError("transversal jets have r = 1")
        if self.kind == TANGENT:
            if self.r < 1:
                raise DomainError("tangent jets need r >= 1")
            if not self.coeffs or self.coeffs[0] == 0:
                raise DomainError("tangent jet needs beta_r != 0")

    @classmethod
    def transversal(cls, field: Field, alphas) -> CurveJet:
        return cls(field, TRANSVERSAL, 1, tuple(alphas))

    @classmethod
    def tangent(cls, field: Field, r: int, betas) -> CurveJet:
        return cls(field, TANGENT, r, tuple(betas))

    @property
    def M(self) -> int:
        return len(self.coeffs)

    @property
    def start(self) -> int:
        """Exponent of the first stored coefficient."""
        return 1 if self.kind == TRANSVERSAL else self.r

    def extended(self, extra) -> CurveJet:
        return replace(self, coeffs=self.coeffs + tuple(extra))

    def truncated(self, M: int) -> CurveJet:
        return replace(self, coeffs=self.coeffs[:M])

    def series(self) -> LaurentSeries:
        """The parametrization: u(t) for transversal jets, t(u) for tangent ones."""
        return LaurentSeries(self.field, self.start, self.coeffs, self.start + self.M)

    def to_text(self) -> str:
        body = ",".join(self.field.format(c) for c in self.coeffs)
        return f"x:{body}" if self.kind == TRANSVERSAL else f"t:{self.r}:{body}"

    @classmethod
    def from_text(cls, field: Field, text: str) -> CurveJet:
        from .errors import ParseError
        parts = text.strip().split(":")
        try:
            if parts[0] == "x" and len(parts) == 2:
                return cls.transversal(field, parse_element_list(field, parts[1]))
            if parts[0] == "t" and len(parts) == 3:
                return cls.tangent(field, int(parts[1]), parse_element_list(field, parts[2]))
        except ValueError:
            pass
        raise ParseError(f"bad jet {text!r}; expected x:<a1>,... or t:<r>:<b_r>,...")

    def __str__(self):
        return self.to_text()


def _check_family(cover: CoverSpec, jet: CurveJet) -> None:
    cover.field.check(jet.field)
    if jet.kind == TRANSVERSAL and cover.d == 2:
        raise DomainError("d=2 covers use tangent jets (T = beta_r U^r + ...) for every r")
    if jet.kind == TANGENT and cover.d == 1 and jet.r == 1:
        raise DomainError("for d=1, curves transversal to T=0 use the transversal form U = alpha_1 T + ...")


def restrict_to_curve(cover: CoverSpec, jet: CurveJet) -> LaurentSeries:
    """The image of a in k((u)) (tangent) or k((t)) (transversal).

    The result is certified below its ``prec``, which is computed from the
    jet length, the terms dropped because they land in k[[.]], and the
    unknown tail of ``a``; a result not certified through exponent -1 raises
    :class:`PrecisionError`.
    """
    _check_family(cover, jet)
    F = cover.field
    r = jet.r
    acc: dict[int, int] = defaultdict(int)
    bounds = list(cover.tail_valuations(r))
    add, mul = F.add, F.mul
    if jet.kind == TANGENT:
        # T -> g(u) = beta_r u^r + ..., U -> u; group terms by the power of T
        g = jet.series()
        power, e = None, 0
        for x, col in cover._by_T.items():
            live = [(y, c) for y, c in col if r * x + y < 0]
            bounds.extend(r * x + y for y, c in col if r * x + y >= 0)
            if not live:
                continue
            if x == 0:
                for y, c in live:
                    acc[y] = add(acc[y], c)
                continue
            if power is None:
                power, e = g ** x, x
            while e < x:
                power, e = power * g, e + 1
            _accumulate(acc, power, live, add, mul)
            bounds.extend(power.prec + y for y, _ in live)
    else:
        # T -> t, U -> h(t) = alpha_1 t + ...; group terms by the power of U
        h = jet.series()
        power = None
        e = 0
        for y, row in cover._by_U.items():
            live = [(x, c) for x, c in row if x + y < 0]
            bounds.extend(x + y for x, c in row if x + y >= 0)
            if not live:
                continue
            if y == 0:
                for x, c in live:
                    acc[x] = add(acc[x], c)
                continue
            if power is None:
                power, e = h ** y, y
            while e < y:
                power, e = power * h, e + 1
            _accumulate(acc, power, live, add, mul)
            bounds.extend(power.prec + x for x, _ in live)
    prec = min(bounds) if bounds else 0
    if prec < 0:
        raise PrecisionError(
            f"restriction to {jet} is certified only mod u^{prec}; a longer jet or more precision in a is needed")
    return LaurentSeries.from_dict(F, acc, prec)


def _accumulate(acc, series: LaurentSeries, monomials, add, mul) -> None:
    base = series.val
    coeffs = series.coeffs
    for shift, c in monomials:
        for k, s in enumerate(coeffs):
            if s:
                key = base + k + shift
                acc[key] = add(acc[key], mul(c, s))


@dataclass(frozen=True)
class JumpReport:
    h: int
    reduced: ReducedForm
    jet: CurveJet


def jump_on_curve(cover: CoverSpec, jet: CurveJet) -> JumpReport:
    reduced = as_reduce(restrict_to_curve(cover, jet))
    return JumpReport(reduced.jump, reduced, jet)


def jump(cover: CoverSpec, jet: CurveJet) -> int:
    return as_reduce(restrict_to_curve(cover, jet)).jump


# -- intersection numbers -------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionOrder:
    value: int
    exact: bool

    def __str__(self):
        return str(self.value) if self.exact else f">={self.value}"


def intersection_order(j1: CurveJet, j2: CurveJet) -> IntersectionOrder:
    """(F.F') for two germs of one Weierstrass family, or a lower bound if
    the stored jets agree."""
    j1.field.check(j2.field)
    if j1.kind != j2.kind or j1.r != j2.r:
        raise DomainError("intersection_order needs jets of the same kind and r")
    M = min(j1.M, j2.M)
    for k in range(M):
        if j1.coeffs[k] != j2.coeffs[k]:
            return IntersectionOrder(j1.start + k, True)
    return IntersectionOrder(j1.start + M, False)


# -- exhaustive jet scans -------------------------------------------------------------------

def count_jets(field: Field, kind: str, length: int) -> int:
    if kind == TANGENT:
        return (field.q - 1) * field.q ** max(length - 1, 0)
    return field.q ** length


def iter_jets(field: Field, kind: str, r: int, length: int, cap: int | None = None):
    """Every jet of the family with ``length`` stored coefficients, in
    lexicographic order of the coefficient tuple."""
    total = count_jets(field, kind, length)
    cap = enumeration_cap(cap)
    if total > cap:
        raise CapExceeded(f"{total} jets exceed the enumeration cap {cap} (set {CAP_ENV} or --cap)")
    elems = field.elements()
    if kind == TANGENT:
        lead = [a for a in elems if a]
        for head in lead:
            for rest in itertools.product(elems, repeat=length - 1):
                yield CurveJet(field, TANGENT, r, (head,) + rest)
    else:
        for coeffs in itertools.product(elems, repeat=length):
            yield CurveJet(field, TRANSVERSAL, 1, coeffs)


def jump_table(cover: CoverSpec, r: int, cap: int | None = None) -> dict[tuple[int, ...], int]:
    """h for every jet of T_r at the certifying length."""
    cover.check_certified(r)
    kind, length = cover.family(r)
    return {jet.coeffs: jump(cover, jet) for jet in iter_jets(cover.field, kind, r, length, cap)}


def sufficient_jet_order(cover: CoverSpec, r: int, mode: str = "bound",
                         cap: int | None = None, table: dict | None = None) -> int:
    """Smallest s such that curves of T_r meeting with multiplicity >= s+1
    have equal jumps.

    ``bound`` returns the a priori bound (m+1)r - 1 (d=1) or (m+1)r + n
    (d=2).  ``exhaustive`` computes the exact value over the coefficient
    field and checks it against the bound.
    """
    bound = (cover.m + 1) * r - 1 if cover.d == 1 else (cover.m + 1) * r + cover.n
    if mode == "bound":
        return bound
    if mode != "exhaustive":
        raise DomainError(f"mode must be 'bound' or 'exhaustive', got {mode!r}")
    if table is None:
        table = jump_table(cover, r, cap)
    kind, length = cover.family(r)
    start = 1 if kind == TRANSVERSAL else r
    s = None
    if len(set(table.values())) <= 1:
        s = 0
    else:
        for k in range(1, length + 1):
            seen: dict[tuple[int, ...], int] = {}
            if all(seen.setdefault(key[:k], h) == h for key, h in table.items()):
                s = start + k - 1
                break
    if s is None:  # pragma: no cover - the full jet always determines h
        raise VerificationError("jump is not determined by the certifying jet")
    if s > bound:
        raise VerificationError(f"exhaustive sufficient order {s} exceeds the bound {bound}")
    return s
