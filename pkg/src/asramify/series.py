"""Truncated Laurent series in one variable and bivariate Laurent polynomials.

A :class:`LaurentSeries` is known modulo ``t^prec``.  Every operation
propagates the precision soundly, and reading a coefficient at or beyond the
precision raises :class:`PrecisionError` instead of returning zero.

A :class:`BivariateLaurent` is a finite sum of terms ``c T^i U^j`` together
with an optional unknown tail: if ``prec`` is set to ``(I, J)`` with clearing
exponents ``(m0, n0)``, the true element differs from the listed terms by
something in ``T^{-m0} U^{-n0} (T^I, U^J)``.  ``prec=None`` means exact.
"""

from __future__ import annotations

from collections import defaultdict

from .errors import DomainError, ParseError, PrecisionError
from .ffield import Field, FieldElement


class LaurentSeries:
    """``sum_{k >= val} c_k t^k + O(t^prec)`` with packed-int coefficients.

    The stored ``val`` is the true valuation: the leading stored coefficient
    is nonzero, unless every known coefficient vanishes, in which case the
    series is the zero series to precision and ``val == prec``.
    """

    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field: Field, val: int, coeffs, prec: int):
        coeffs = list(coeffs)
        del coeffs[max(prec - val, 0):]
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        if k == len(coeffs):
            val, coeffs = prec, []
        else:
            val += k
            coeffs = coeffs[k:]
            coeffs.extend([0] * (prec - val - len(coeffs)))
        self.field = field
        self.val = val
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, prec: int) -> LaurentSeries:
        return cls(field, prec, (), prec)

    @classmethod
    def monomial(cls, field: Field, c: int, k: int, prec: int) -> LaurentSeries:
        return cls(field, k, (c,), prec)

    @classmethod
    def from_dict(cls, field: Field, terms: dict[int, int], prec: int) -> LaurentSeries:
        terms = {k: c for k, c in terms.items() if c and k < prec}
        if not terms:
            return cls.zero(field, prec)
        lo = min(terms)
        coeffs = [0] * (prec - lo)
        for k, c in terms.items():
            coeffs[k - lo] = c
        return cls(field, lo, coeffs, prec)

    @classmethod
    def variable(cls, field: Field, prec: int) -> LaurentSeries:
        return cls.monomial(field, 1, 1, prec)

    # -- inspection ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> int:
        if k >= self.prec:
            raise PrecisionError(f"coefficient of t^{k} requested, series known mod t^{self.prec}")
        if k < self.val:
            return 0
        return self.coeffs[k - self.val]

    def lead(self) -> int:
        if not self.coeffs:
            raise PrecisionError("leading coefficient of a series that vanishes to its precision")
        return self.coeffs[0]

    def terms(self) -> dict[int, int]:
        return {self.val + i: c for i, c in enumerate(self.coeffs) if c}

    @property
    def rel_prec(self) -> int:
        return self.prec - self.val

    # -- ring operations ----------------------------------------------------------

    def _check(self, other: LaurentSeries) -> None:
        self.field.check(other.field)

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        self._check(other)
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val, prec)
        out = [0] * (prec - lo)
        for k, c in enumerate(self.coeffs):
            i = self.val + k - lo
            if i >= len(out):
                break
            out[i] = c
        add = self.field.add
        for k, c in enumerate(other.coeffs):
            i = other.val + k - lo
            if i >= len(out):
                break
            if c:
                out[i] = add(out[i], c)
        return LaurentSeries(self.field, lo, out, prec)

    def __neg__(self) -> LaurentSeries:
        neg = self.field.neg
        return LaurentSeries(self.field, self.val, [neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other: LaurentSeries) -> LaurentSeries:
        return self + (-other)

    def __mul__(self, other) -> LaurentSeries:
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        prec = min(self.prec + other.val, other.prec + self.val)
        val = self.val + other.val
        n = prec - val
        if n <= 0 or not self.coeffs or not other.coeffs:
            return LaurentSeries.zero(self.field, prec)
        out = [0] * n
        mul, add = self.field.mul, self.field.add
        b = other.coeffs
        for i, x in enumerate(self.coeffs[:n]):
            if not x:
                continue
            for j in range(min(len(b), n - i)):
                y = b[j]
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
        return LaurentSeries(self.field, val, out, prec)

    def scale(self, c: int) -> LaurentSeries:
        if c == 0:
            return LaurentSeries.zero(self.field, self.prec)
        mul = self.field.mul
        return LaurentSeries(self.field, self.val, [mul(c, x) for x in self.coeffs], self.prec)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by t^k."""
        return LaurentSeries(self.field, self.val + k, self.coeffs, self.prec + k)

    def truncate(self, prec: int) -> LaurentSeries:
        if prec >= self.prec:
            return self
        return LaurentSeries(self.field, self.val, self.coeffs, prec)

    def inverse(self) -> LaurentSeries:
        if not self.coeffs:
            raise PrecisionError("cannot invert a series with no known nonzero coefficient")
        F = self.field
        c0inv = F.inv(self.coeffs[0])
        n = len(self.coeffs)
        a = [F.mul(c0inv, c) for c in self.coeffs]
        # b = 1/(1 + a_1 t + ...), b_k = -sum_{i=1..k} a_i b_{k-i}
        b = [1] + [0] * (n - 1)
        mul, add, neg = F.mul, F.add, F.neg
        for k in range(1, n):
            acc = 0
            for i in range(1, k + 1):
                ai = a[i]
                if ai:
                    bk = b[k - i]
                    if bk:
                        acc = add(acc, mul(ai, bk))
            b[k] = neg(acc)
        b = [mul(c0inv, x) for x in b]
        return LaurentSeries(F, -self.val, b, -self.val + n)

    def frobenius(self, k: int = 1) -> LaurentSeries:
        """The p^k-th power: exponents and precision scale by p^k."""
        F = self.field
        pk = F.p ** k
        terms = {e * pk: F.frob(c, k) for e, c in self.terms().items()}
        return LaurentSeries.from_dict(F, terms, self.prec * pk)

    def __pow__(self, k: int) -> LaurentSeries:
        F = self.field
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return LaurentSeries(F, 0, (1,), self.rel_prec)
        a = 0
        while k % F.p == 0:
            k //= F.p
            a += 1
        acc = None
        base = self
        while k:
            if k & 1:
                acc = base if acc is None else acc * base
            k >>= 1
            if k:
                base = base * base
        return acc.frobenius(a) if a else acc

    def substitute(self, g: LaurentSeries) -> LaurentSeries:
        """The composition self(g(u)) with rigorously propagated precision."""
        self._check(g)
        if g.is_zero():
            if self.val < 0 or self.prec < 0:
                raise PrecisionError("substituting a series with unknown leading term into a pole")
            gv = g.prec
        else:
            gv = g.val
        if gv < 1:
            raise DomainError("substituted series must have positive valuation")
        F = self.field
        # the error term O(t^prec) lands in O(u^(prec * val(g)))
        prec = self.prec * gv
        acc = LaurentSeries.zero(F, prec)
        terms = self.terms()
        if not terms:
            return acc
        one = LaurentSeries(F, 0, (1,), prec)
        lo = min(terms)
        power = one if lo == 0 else g ** lo
        for e in range(lo, self.prec):
            c = terms.get(e)
            if c:
                acc = acc + power.scale(c)
            if e + 1 < self.prec:
                power = one if e + 1 == 0 else power * g
        return acc

    # -- comparisons / text ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.field == other.field and self.val == other.val
                and self.prec == other.prec and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.val, self.prec, self.coeffs))

    def agrees_with(self, other: LaurentSeries) -> bool:
        """Equality of the coefficients both series know."""
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val, prec)
        return all(self.coefficient(k) == other.coefficient(k) for k in range(lo, prec))

    def to_text(self) -> str:
        body = ",".join(self.field.format(c) for c in self.coeffs)
        return f"{self.val}:{self.prec}:{body}"

    @classmethod
    def from_text(cls, field: Field, text: str) -> LaurentSeries:
        try:
            val_s, prec_s, body = text.strip().split(":", 2)
            val, prec = int(val_s), int(prec_s)
        except ValueError:
            raise ParseError(f"bad series text {text!r}; expected val:prec:coeffs") from None
        coeffs = parse_element_list(field, body)
        if len(coeffs) != prec - val:
            raise ParseError(f"series {text!r} needs {prec - val} coefficients, got {len(coeffs)}")
        return cls(field, val, coeffs, prec)

    def __repr__(self):
        return f"LaurentSeries({self.to_text()})"

    def __str__(self):
        F = self.field
        parts = []
        for k, c in sorted(self.terms().items()):
            cs = F.format(c)
            coef = "" if c == 1 and k != 0 else (f"({cs})" if F.e > 1 else cs)
            parts.append(coef if k == 0 else f"{coef}t^{k}")
        parts.append(f"O(t^{self.prec})")
        return " + ".join(parts)


def parse_element_list(field: Field, body: str) -> list[int]:
    """Parse a flat comma list of F_p digits, e digits per element."""
    body = body.strip()
    if not body:
        return []
    digits = body.split(",")
    if len(digits) % field.e:
        raise ParseError(f"coordinate count {len(digits)} is not a multiple of e={field.e}")
    return [field.parse(",".join(digits[i:i + field.e])) for i in range(0, len(digits), field.e)]


def format_element_list(field: Field, values) -> str:
    return ",".join(field.format(v) for v in values)


# -- spec-level aliases ------------------------------------------------------------

def ls_arith(s: LaurentSeries, t: LaurentSeries, op: str) -> LaurentSeries:
    if op == "add":
        return s + t
    if op == "sub":
        return s - t
    if op == "mul":
        return s * t
    raise DomainError(f"unknown series operation {op!r}")


def ls_invert(s: LaurentSeries) -> LaurentSeries:
    return s.inverse()


def ls_pow(s: LaurentSeries, k: int) -> LaurentSeries:
    return s ** k


def ls_substitute(s: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    return s.substitute(g)


class BivariateLaurent:
    """Sparse Laurent polynomial in T, U plus an optional unknown tail."""

    __slots__ = ("field", "terms", "prec", "clear")

    def __init__(self, field: Field, terms, prec: tuple[int, int] | None = None,
                 clear: tuple[int, int] | None = None):
        """``terms`` is a dict ``{(i, j): c}`` or an iterable of ``(i, j, c)``."""
        if isinstance(terms, dict):
            terms = [(i, j, c) for (i, j), c in terms.items()]
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for i, j, c in terms:
            if isinstance(c, FieldElement):
                field.check(c.field)
                c = c.value
            key = (int(i), int(j))
            acc[key] = field.add(acc[key], c)
        self.field = field
        self.terms = {k: v for k, v in sorted(acc.items()) if v}
        if prec is not None and clear is None:
            clear = (self.pole_T, self.pole_U)
        self.prec = tuple(prec) if prec is not None else None
        self.clear = tuple(clear) if prec is not None else None

    @property
    def pole_T(self) -> int:
        return max([0] + [-i for i, _ in self.terms])

    @property
    def pole_U(self) -> int:
        return max([0] + [-j for _, j in self.terms])

    def is_zero(self) -> bool:
        return not self.terms

    def known(self, i: int, j: int) -> bool:
        """Whether the coefficient of T^i U^j is certified."""
        if self.prec is None:
            return True
        (I, J), (m0, n0) = self.prec, self.clear
        return i + m0 < I and j + n0 < J

    def coefficient(self, i: int, j: int) -> int:
        if not self.known(i, j):
            raise PrecisionError(f"coefficient of T^{i} U^{j} is beyond the certified precision")
        return self.terms.get((i, j), 0)

    def tail_generators(self) -> list[tuple[int, int]]:
        """Monomials generating the k[[T,U]]-module that contains the unknown tail."""
        if self.prec is None:
            return []
        (I, J), (m0, n0) = self.prec, self.clear
        return [(I - m0, -n0), (-m0, J - n0)]

    def _same(self, terms) -> BivariateLaurent:
        return BivariateLaurent(self.field, terms, self.prec, self.clear)

    def __add__(self, other: BivariateLaurent) -> BivariateLaurent:
        self.field.check(other.field)
        items = list(self._items()) + list(other._items())
        if other.prec is None:
            return self._same(items)
        if self.prec is not None and (self.prec, self.clear) != (other.prec, other.clear):
            raise PrecisionError("adding bivariate elements with different tails")
        return BivariateLaurent(self.field, items, other.prec, other.clear)

    def __neg__(self) -> BivariateLaurent:
        return self._same([(i, j, self.field.neg(c)) for (i, j), c in self.terms.items()])

    def __sub__(self, other: BivariateLaurent) -> BivariateLaurent:
        return self + (-other)

    def _items(self):
        return ((i, j, c) for (i, j), c in self.terms.items())

    def frobenius(self, k: int = 1) -> BivariateLaurent:
        """p^k-th power of an exact element (a sum of monomials in characteristic p)."""
        if self.prec is not None:
            raise PrecisionError("Frobenius of an element with an unknown tail")
        F = self.field
        pk = F.p ** k
        return BivariateLaurent(F, [(i * pk, j * pk, F.frob(c, k)) for (i, j), c in self.terms.items()])

    def wp(self) -> BivariateLaurent:
        """The Artin-Schreier operator D -> D^p - D."""
        return self.frobenius(1) - self

    def slice(self, which: str) -> LaurentSeries:
        """The restriction to T=0 (series in U) or U=0 (series in T)."""
        if which not in ("T=0", "U=0"):
            raise DomainError(f"slice must be 'T=0' or 'U=0', got {which!r}")
        axis = 0 if which == "T=0" else 1
        if any(k[axis] < 0 for k in self.terms):
            raise DomainError(f"slice {which} hits a pole; clear it first")
        other = 1 - axis
        picked = {k[other]: c for k, c in self.terms.items() if k[axis] == 0}
        if self.prec is None:
            prec = max(picked, default=-1) + 1
        else:
            lim = (self.prec[0] - self.clear[0], self.prec[1] - self.clear[1])
            if self.clear[axis] > 0 or lim[axis] <= 0:
                raise PrecisionError(f"slice {which} is not certified by the stored precision")
            prec = lim[other]
        return LaurentSeries.from_dict(self.field, picked, prec)

    def monomial_times(self, i: int, j: int) -> BivariateLaurent:
        """Multiply by T^i U^j (the tail moves with it)."""
        terms = [(a + i, b + j, c) for (a, b), c in self.terms.items()]
        if self.prec is None:
            return BivariateLaurent(self.field, terms)
        return BivariateLaurent(self.field, terms, self.prec, (self.clear[0] - i, self.clear[1] - j))

    def __eq__(self, other):
        if not isinstance(other, BivariateLaurent):
            return NotImplemented
        return (self.field == other.field and self.terms == other.terms
                and self.prec == other.prec and self.clear == other.clear)

    def __repr__(self):
        F = self.field
        body = " + ".join(f"({F.format(c)})T^{i}U^{j}" for (i, j), c in self.terms.items()) or "0"
        tail = "" if self.prec is None else f" + O(T^-{self.clear[0]} U^-{self.clear[1]} (T^{self.prec[0]}, U^{self.prec[1]}))"
        return f"BivariateLaurent({body}{tail})"

    def to_lines(self) -> list[str]:
        return [f"{i} {j} {self.field.format(c)}" for (i, j), c in self.terms.items()]


def biv_slice(a: BivariateLaurent, which: str) -> LaurentSeries:
    return a.slice(which)
