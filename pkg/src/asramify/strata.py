"""Symbolic jump strata on jet space.

Restricting ``a`` to the germ ``T = beta_r U^r (1 + X_1 U + X_2 U^2 + ...)``
gives ``beta_r^{-m} u^{-(rm+n)} sum_i F_i(X_0, ..., X_i) u^i`` modulo k[[u]],
where X_0 = beta_r and X_k = beta_{r+k}/beta_r.  Reducing to standard form
collects ``G_l = sum_nu (beta_r^{-m} F_{rm+n-p^nu l})^{p^-nu}`` in front of
``u^{-l}``, so the jump is the largest l with G_l != 0.  G_l is only a
pointwise function (it takes p-th roots); the polynomial objects are the
cleared forms

    S_l = X_0^N sum_nu (X_0^{-m} F_{i(nu)}(X_0, X_1/X_0, ...))^{p^(N_l - nu)}

in the raw coefficients X_k = beta_{r+k}, which vanish exactly where G_l does.
Transversal germs ``U = alpha_1 T + ...`` (d = 1, r = 1) work the same way
with F_i(X_1, ..., X_i), X_k = alpha_k, and no clearing.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field as dc_field

from .cover import (TANGENT, TRANSVERSAL, CoverSpec, CurveJet, ThetaMatrix,
                    iter_jets, jump, theta_extract)
from .errors import DomainError, PrecisionError, VerificationError
from .ffield import Field


class MultiPoly:
    """Sparse (Laurent) polynomial in X_0..X_{V-1} over a finite field.

    Exponents may be negative; :meth:`is_polynomial` tells whether the value is
    a genuine polynomial.  ``first_var`` only affects printing: transversal
    systems never use X_0.
    """

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms=None):
        self.field = field
        self.nvars = nvars
        clean = {}
        if terms:
            add = field.add
            for exps, c in (terms.items() if isinstance(terms, dict) else terms):
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise DomainError(f"exponent vector {exps} has length != {nvars}")
                clean[exps] = add(clean.get(exps, 0), c)
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def constant(cls, field: Field, nvars: int, c: int) -> MultiPoly:
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, field: Field, nvars: int, k: int, power: int = 1) -> MultiPoly:
        exps = [0] * nvars
        exps[k] = power
        return cls(field, nvars, {tuple(exps): 1})

    def _new(self, terms: dict) -> MultiPoly:
        out = MultiPoly.__new__(MultiPoly)
        out.field, out.nvars = self.field, self.nvars
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def _check(self, other: MultiPoly) -> None:
        self.field.check(other.field)
        if self.nvars != other.nvars:
            raise DomainError("polynomials over different variable sets")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: MultiPoly) -> MultiPoly:
        self._check(other)
        add = self.field.add
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = add(out.get(k, 0), c)
        return self._new(out)

    def __neg__(self) -> MultiPoly:
        neg = self.field.neg
        return self._new({k: neg(c) for k, c in self.terms.items()})

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def __mul__(self, other) -> MultiPoly:
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        mul, add = self.field.mul, self.field.add
        out: dict[tuple[int, ...], int] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = add(out.get(k, 0), mul(ca, cb))
        return self._new(out)

    def scale(self, c: int) -> MultiPoly:
        mul = self.field.mul
        return self._new({k: mul(c, v) for k, v in self.terms.items()})

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise DomainError("negative power of a polynomial")
        p = self.field.p
        a = 0
        while k and k % p == 0:
            k //= p
            a += 1
        acc = MultiPoly.constant(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            k >>= 1
            if k:
                base = base * base
        return acc.frobenius(a) if a else acc

    def frobenius(self, k: int = 1) -> MultiPoly:
        """f^(p^k): coefficients to the p^k and exponents times p^k."""
        if k == 0:
            return self
        F = self.field
        pk = F.p ** k
        return self._new({tuple(e * pk for e in exps): F.frob(c, k) for exps, c in self.terms.items()})

    def times_monomial(self, exps) -> MultiPoly:
        return self._new({tuple(x + y for x, y in zip(k, exps)): c for k, c in self.terms.items()})

    def ratio_substitute(self) -> MultiPoly:
        """f(X_0, X_1/X_0, ..., X_{V-1}/X_0)."""
        out = {}
        for k, c in self.terms.items():
            out[(k[0] - sum(k[1:]),) + k[1:]] = c
        return self._new(out)

    def min_exponent(self, var: int) -> int:
        return min((k[var] for k in self.terms), default=0)

    def is_polynomial(self) -> bool:
        return all(e >= 0 for k in self.terms for e in k)

    def variables(self) -> set[int]:
        return {v for k in self.terms for v, e in enumerate(k) if e}

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def evaluate(self, point) -> int:
        F = self.field
        mul, add, pw = F.mul, F.add, F.pow
        acc = 0
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = mul(v, pw(x, e))
                    if v == 0:
                        break
            acc = add(acc, v)
        return acc

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def to_lines(self, first_var: int = 0) -> list[str]:
        F = self.field
        return [f"{F.format(c)} : " + " ".join(str(e) for e in k[first_var:])
                for k, c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(f"X{v}" + (f"^{e}" if e != 1 else "") for v, e in enumerate(k) if e)
            cs = F.format(c)
            parts.append(mono if c == 1 and mono else (f"({cs})*{mono}" if mono else f"({cs})"))
        return " + ".join(parts)


def mp_arith(f: MultiPoly, g, op: str) -> MultiPoly:
    """add, mul, pow_k (g is the integer k) or frobenius_k (g is k)."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "pow_k":
        return f ** g
    if op == "frobenius_k":
        return f.frobenius(g)
    raise DomainError(f"unknown polynomial operation {op!r}")


# -- truncated tau-series with polynomial coefficients -------------------------------

def _ps_mul(a: list[MultiPoly], b: list[MultiPoly], L: int) -> list[MultiPoly]:
    zero = MultiPoly(a[0].field, a[0].nvars)
    out = [zero] * L
    for i, x in enumerate(a[:L]):
        if x.is_zero():
            continue
        for j in range(L - i):
            if not b[j].is_zero():
                out[i + j] = out[i + j] + x * b[j]
    return out


def _ps_inv_unit(w: list[MultiPoly], L: int) -> list[MultiPoly]:
    """1/w for w with constant term 1."""
    out = [w[0]] + [MultiPoly(w[0].field, w[0].nvars)] * (L - 1)
    for k in range(1, L):
        acc = MultiPoly(w[0].field, w[0].nvars)
        for i in range(1, k + 1):
            if not w[i].is_zero() and not out[k - i].is_zero():
                acc = acc + w[i] * out[k - i]
        out[k] = -acc
    return out


def _ps_pow(w: list[MultiPoly], k: int, L: int) -> list[MultiPoly]:
    F, V = w[0].field, w[0].nvars
    if k < 0:
        return _ps_pow(_ps_inv_unit(w, L), -k, L)
    acc = [MultiPoly.constant(F, V, 1)] + [MultiPoly(F, V)] * (L - 1)
    base = w
    while k:
        if k & 1:
            acc = _ps_mul(acc, base, L)
        k >>= 1
        if k:
            base = _ps_mul(base, base, L)
    return acc


def compute_F(theta: ThetaMatrix, cover: CoverSpec, r: int) -> list[MultiPoly]:
    """F_0..F_{L-1} with L = rm+n (tangent) or m (transversal, d=1 and r=1)."""
    if theta.r != r:
        raise DomainError(f"theta was extracted for r={theta.r}, not {r}")
    F = cover.field
    m, n = cover.m, cover.n
    if cover.d == 1 and r == 1:
        L = m
        V = m + 1
        # Y = X_1 + X_2 tau + ... + X_m tau^{m-1}
        Y = [MultiPoly.var(F, V, k + 1) for k in range(L)]
        total = [MultiPoly(F, V)] * L
        Ypow = [MultiPoly.constant(F, V, 1)] + [MultiPoly(F, V)] * (L - 1)
        for j in range(m):
            for i in range(m):
                c = theta[i, j]
                if c and i + j < L:
                    shifted = [MultiPoly(F, V)] * (i + j) + [q.scale(c) for q in Ypow[:L - i - j]]
                    total = [x + y for x, y in zip(total, shifted)]
            Ypow = _ps_mul(Ypow, Y, L)
        out = total
        offset = 1
    else:
        L = r * m + n
        V = L
        W = [MultiPoly.constant(F, V, 1)] + [MultiPoly.var(F, V, k) for k in range(1, L)]
        total = [MultiPoly(F, V)] * L
        Wpow = _ps_pow(W, -m, L)
        for i in range(m + n):
            head = [MultiPoly(F, V)] * L
            X0i = MultiPoly.var(F, V, 0, i)
            for j in range(L):
                c = theta[i, j]
                if c and r * i + j < L:
                    head[r * i + j] = X0i.scale(c)
            if any(not h.is_zero() for h in head):
                prod = _ps_mul(head, Wpow, L)
                total = [x + y for x, y in zip(total, prod)]
            Wpow = _ps_mul(Wpow, W, L)
        out = total
        offset = 0
    for i, f in enumerate(out):
        # tangent F_i uses X_0..X_i; transversal F_i uses X_1..X_i
        bad = {v for v in f.variables() if v > i or v < offset}
        if bad:
            raise VerificationError(f"F_{i} involves variables {sorted(bad)} beyond X_{i}")
    return out


# -- strata systems ----------------------------------------------------------------------

@dataclass(frozen=True)
class ClearedPoly:
    l: int
    N: int
    N_l: int
    poly: MultiPoly


@dataclass
class StrataSystem:
    cover: CoverSpec
    r: int
    kind: str
    L: int
    F: list[MultiPoly]
    theta: ThetaMatrix
    _cleared: dict[int, ClearedPoly] = dc_field(default_factory=dict, repr=False)

    @property
    def field(self) -> Field:
        return self.cover.field

    @property
    def first_var(self) -> int:
        return 1 if self.kind == TRANSVERSAL else 0

    @property
    def nvars(self) -> int:
        return self.F[0].nvars if self.F else (self.L if self.kind == TANGENT else self.L + 1)

    def levels(self) -> list[int]:
        """The l with 1 <= l <= L and p prime to l."""
        p = self.field.p
        return [l for l in range(1, self.L + 1) if l % p]

    def N_l(self, l: int) -> int:
        p, nu = self.field.p, 0
        while self.L - p ** (nu + 1) * l >= 0:
            nu += 1
        return nu

    def indices(self, l: int) -> list[int]:
        """i(nu) = L - p^nu l for nu = 0..N_l."""
        p = self.field.p
        return [self.L - p ** nu * l for nu in range(self.N_l(l) + 1)]

    def jet_length(self) -> int:
        return self.L if self.kind == TANGENT else max(self.L - 1, 0)

    def point(self, jet: CurveJet) -> list[int]:
        """Raw coordinates of a jet in the variables of the cleared polynomials."""
        self._check_jet(jet)
        if self.kind == TANGENT:
            return list(jet.coeffs[:self.L])
        need = self.nvars - 1
        coeffs = list(jet.coeffs[:need]) + [0] * max(0, need - jet.M)
        return [0] + coeffs

    def _check_jet(self, jet: CurveJet) -> None:
        self.field.check(jet.field)
        if jet.kind != self.kind or jet.r != self.r:
            raise DomainError(f"jet {jet} is not in the family of this system (r={self.r}, {self.kind})")
        if jet.M < self.jet_length():
            raise PrecisionError(f"jet of length {jet.M} is shorter than the required {self.jet_length()}")

    def F_values(self, jet: CurveJet) -> list[int]:
        self._check_jet(jet)
        F = self.field
        if self.kind == TANGENT:
            b0 = jet.coeffs[0]
            inv = F.inv(b0)
            pt = [b0] + [F.mul(b, inv) for b in jet.coeffs[1:self.L]]
        else:
            pt = [0] + list(jet.coeffs[:self.L]) + [0] * max(0, self.L - jet.M)
            pt = pt[:self.nvars]
        return [f.evaluate(pt) for f in self.F]

    def eval_G(self, jet: CurveJet) -> dict[int, int]:
        Fv = self.F_values(jet)
        F = self.field
        scale = F.pow(jet.coeffs[0], -self.cover.m) if self.kind == TANGENT else 1
        out = {}
        for l in self.levels():
            acc = 0
            for nu, i in enumerate(self.indices(l)):
                v = F.mul(scale, Fv[i])
                if v:
                    acc = F.add(acc, F.root(v, nu))
            out[l] = acc
        return out

    def top_level(self, jet: CurveJet) -> int:
        """max{l : G_l != 0}, or 0."""
        G = self.eval_G(jet)
        return max((l for l, v in G.items() if v), default=0)

    def cleared(self, l: int) -> ClearedPoly:
        if l in self._cleared:
            return self._cleared[l]
        if l < 1 or l > self.L or l % self.field.p == 0:
            raise DomainError(f"level {l} is outside 1..{self.L} or divisible by p")
        idx = self.indices(l)
        Nl = len(idx) - 1
        V = self.nvars
        acc = MultiPoly(self.field, V)
        for nu, i in enumerate(idx):
            f = self.F[i]
            if self.kind == TANGENT:
                shift = [0] * V
                shift[0] = -self.cover.m
                f = f.ratio_substitute().times_monomial(shift)
            acc = acc + f.frobenius(Nl - nu)
        N = max(0, -acc.min_exponent(0)) if self.kind == TANGENT else 0
        if N:
            shift = [0] * V
            shift[0] = N
            acc = acc.times_monomial(shift)
        if not acc.is_polynomial():  # pragma: no cover - N clears X_0 and nothing else is negative
            raise VerificationError(f"S_{l} is not a polynomial after clearing")
        out = ClearedPoly(l, N, Nl, acc)
        self._cleared[l] = out
        return out


def strata_system(cover: CoverSpec, r: int) -> StrataSystem:
    theta = theta_extract(cover, r)
    Fs = compute_F(theta, cover, r)
    kind, _ = cover.family(r)
    L = r * cover.m + cover.n if kind == TANGENT else cover.m
    return StrataSystem(cover, r, kind, L, Fs, theta)


def eval_G(system: StrataSystem, jet: CurveJet) -> dict[int, int]:
    return system.eval_G(jet)


def clear_strata_polys(system: StrataSystem, s: int) -> list[ClearedPoly]:
    """S_l for s+1 <= l <= L, p prime to l.  Their common zeros are {h <= s}."""
    if not 0 <= s <= system.L:
        raise DomainError(f"s must lie in 0..{system.L}")
    return [system.cleared(l) for l in system.levels() if l > s]


def stratum_contains(system: StrataSystem, s: int, jet: CurveJet) -> bool:
    G = system.eval_G(jet)
    return all(v == 0 for l, v in G.items() if l > s)


# -- exhaustive semi-continuity check ------------------------------------------------------

@dataclass
class SemicontinuityReport:
    r: int
    kind: str
    L: int
    jets: int = 0
    jump_counts: Counter = dc_field(default_factory=Counter)
    stratum_sizes: dict[int, int] = dc_field(default_factory=dict)
    oracle_failures: int = 0
    set_failures: int = 0
    oracle_mismatches: list = dc_field(default_factory=list)
    set_mismatches: list = dc_field(default_factory=list)
    nesting_ok: bool = True
    max_jump: int = 0

    @property
    def ok(self) -> bool:
        return not self.oracle_failures and not self.set_failures and self.nesting_ok

    def summary(self) -> str:
        counts = " ".join(f"h={h}:{c}" for h, c in sorted(self.jump_counts.items()))
        status = "ok" if self.ok else "FAIL"
        return (f"r={self.r} {self.kind} L={self.L} jets={self.jets} {counts} "
                f"oracle_mismatches={self.oracle_failures} "
                f"set_mismatches={self.set_failures} nesting={'ok' if self.nesting_ok else 'FAIL'} {status}")


def verify_semicontinuity(cover: CoverSpec, r: int, s: int | None = None,
                          cap: int | None = None, system: StrataSystem | None = None,
                          max_examples: int = 10) -> SemicontinuityReport:
    """Enumerate T_r at the certifying length and compare, for every s (or
    the given one), {h <= s}, the common zeros of the cleared S_l, and
    :func:`stratum_contains`.  Also checks jump == max{l : G_l != 0}."""
    system = system or strata_system(cover, r)
    kind, length = cover.family(r)
    levels = system.levels()
    cleared = {l: system.cleared(l) for l in levels}
    svals = range(system.L + 1) if s is None else [s]
    rep = SemicontinuityReport(r, kind, system.L)
    sizes = defaultdict(int)
    for jet in iter_jets(cover.field, kind, r, length, cap):
        rep.jets += 1
        h = jump(cover, jet)
        rep.jump_counts[h] += 1
        rep.max_jump = max(rep.max_jump, h)
        G = system.eval_G(jet)
        top = max((l for l, v in G.items() if v), default=0)
        if top != h:
            rep.oracle_failures += 1
            if len(rep.oracle_mismatches) < max_examples:
                rep.oracle_mismatches.append((jet.to_text(), h, top))
        pt = system.point(jet)
        S_zero = {l: cleared[l].poly.evaluate(pt) == 0 for l in levels}
        prev = None
        for sv in svals:
            in_h = h <= sv
            in_S = all(S_zero[l] for l in levels if l > sv)
            in_G = all(G[l] == 0 for l in levels if l > sv)
            if in_h:
                sizes[sv] += 1
            if not (in_h == in_S == in_G):
                rep.set_failures += 1
                if len(rep.set_mismatches) < max_examples:
                    rep.set_mismatches.append((jet.to_text(), sv, in_h, in_S, in_G))
            if prev is not None and prev and not in_h:
                rep.nesting_ok = False
            prev = in_h
    rep.stratum_sizes = {sv: sizes[sv] for sv in svals}
    return rep
