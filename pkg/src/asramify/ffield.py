"""Finite fields F_{p^e} with Frobenius, p-th roots, enumeration and sampling.

Elements are stored as packed integers ``v = c_0 + c_1 p + ... + c_{e-1} p^{e-1}``
where ``(c_0, ..., c_{e-1})`` are the coordinates in the power basis of the
modulus.  The hot paths of the library (series, polynomials, jet scans) work
on these integers directly through the :class:`Field` methods; the
:class:`FieldElement` wrapper gives operator syntax for interactive use.
"""

from __future__ import annotations

import itertools
import random
from functools import cached_property

from .errors import DomainError, FieldError, FieldZeroDivision

# fields up to this size get log/exp tables
TABLE_LIMIT = 1 << 16
# additive tables for odd p are q*q entries
ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p as coefficient lists, low to high -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _x_pow_pk_mod(f: list[int], p: int, k: int) -> list[int]:
    """X^(p^k) mod f by k successive p-th powerings."""
    x = _pmod([0, 1], f, p)
    for _ in range(k):
        acc = [1]
        base = x
        n = p
        while n:
            if n & 1:
                acc = _pmod(_pmul(acc, base, p), f, p)
            base = _pmod(_pmul(base, base, p), f, p)
            n >>= 1
        x = acc
    return x


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a polynomial over F_p (coefficients low to high)."""
    f = _trim([c % p for c in f])
    e = len(f) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    if _psub(_x_pow_pk_mod(f, p, e), [0, 1], p) != []:
        return False
    for q in _prime_factors(e):
        h = _psub(_x_pow_pk_mod(f, p, e // q), [0, 1], p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


class Field:
    """The finite field F_p[X]/(modulus) with p^e elements."""

    def __init__(self, p: int, e: int, modulus: list[int] | tuple[int, ...]):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if e < 1:
            raise FieldError(f"extension degree must be >= 1, got {e}")
        mod = _trim([int(c) % p for c in modulus])
        if len(mod) - 1 != e:
            raise FieldError(f"modulus has degree {len(mod) - 1}, expected {e}")
        if not is_irreducible(mod, p):
            raise FieldError("reducible modulus")
        inv_lead = pow(mod[-1], p - 2, p)
        self.p = p
        self.e = e
        self.modulus = tuple(c * inv_lead % p for c in mod)
        self.q = p ** e
        self._build()

    # -- construction ---------------------------------------------------------

    def _build(self) -> None:
        p, q = self.p, self.q
        if q <= TABLE_LIMIT:
            exp, log = self._log_tables()
            self._exp = exp
            self._log = log
        else:
            self._exp = self._log = None
        if p == 2:
            self.add = self.sub = int.__xor__
            self.neg = _identity
        elif q <= ADD_TABLE_LIMIT:
            add = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
            neg = [self._neg_slow(a) for a in range(q)]
            sub = [[add[a][neg[b]] for b in range(q)] for a in range(q)]
            self.add = lambda a, b: add[a][b]
            self.sub = lambda a, b: sub[a][b]
            self.neg = neg.__getitem__
        else:
            self.add = self._add_slow
            self.neg = self._neg_slow
            self.sub = lambda a, b: self._add_slow(a, self._neg_slow(b))
        if self._exp is not None:
            q1 = q - 1
            exp, log = self._exp, self._log

            def mul(a, b):
                if a == 0 or b == 0:
                    return 0
                return exp[log[a] + log[b]]

            self.mul = mul
            self._frob_table = [0] + [exp[(log[a] * p) % q1] for a in range(1, q)]
            self._root_table = [0] * q
            for a in range(q):
                self._root_table[self._frob_table[a]] = a
        else:
            self.mul = self._mul_slow
            self._frob_table = self._root_table = None

    def _log_tables(self):
        q1 = self.q - 1
        order_factors = _prime_factors(q1) if q1 > 1 else []
        for g in range(1, self.q):
            if all(self._pow_slow(g, q1 // f) != 1 for f in order_factors):
                break
        else:  # pragma: no cover - every finite field has a generator
            raise FieldError("no multiplicative generator found")
        exp = [0] * (2 * q1 + 1)
        log = [0] * self.q
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, g)
        for i in range(q1, 2 * q1 + 1):
            exp[i] = exp[i - q1]
        self.generator = g
        return exp, log

    # -- coordinates ------------------------------------------------------------

    def coords(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coords(self, coords) -> int:
        coords = list(coords)
        if len(coords) > self.e:
            raise FieldError(f"expected at most {self.e} coordinates, got {len(coords)}")
        v = 0
        for c in reversed(coords):
            v = v * self.p + int(c) % self.p
        return v

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_{p^e}."""
        return n % self.p

    # -- slow reference arithmetic on coordinates ----------------------------

    def _add_slow(self, a: int, b: int) -> int:
        return self.from_coords(x + y for x, y in zip(self.coords(a), self.coords(b)))

    def _neg_slow(self, a: int) -> int:
        return self.from_coords(-x for x in self.coords(a))

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _pmul(list(self.coords(a)), list(self.coords(b)), self.p)
        return self.from_coords(_pmod(prod, list(self.modulus), self.p))

    def _pow_slow(self, a: int, n: int) -> int:
        acc = 1
        while n:
            if n & 1:
                acc = self._mul_slow(acc, a)
            a = self._mul_slow(a, a)
            n >>= 1
        return acc

    # -- arithmetic on packed integers -----------------------------------------

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldZeroDivision("inverse of zero in finite field")
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._pow_slow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if a == 0:
            return 1 if n == 0 else 0
        if self._exp is not None:
            return self._exp[(self._log[a] * n) % (self.q - 1)]
        return self._pow_slow(a, n % (self.q - 1))

    def frob(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        k %= self.e
        if self._frob_table is not None:
            t = self._frob_table
            for _ in range(k):
                a = t[a]
            return a
        return self._pow_slow(a, self.p ** k)

    def pth_root(self, a: int) -> int:
        if self._root_table is not None:
            return self._root_table[a]
        return self.frob(a, self.e - 1)

    def root(self, a: int, k: int) -> int:
        """The unique b with b^(p^k) = a."""
        return self.frob(a, (-k) % self.e)

    # -- enumeration, sampling, serialization -------------------------------

    def elements(self) -> list[int]:
        """All elements, lexicographic in the coordinate vector (c_0 first)."""
        return [self.from_coords(c) for c in itertools.product(range(self.p), repeat=self.e)]

    def nonzero_elements(self) -> list[int]:
        return [a for a in self.elements() if a]

    def random_element(self, rng: random.Random, nonzero: bool = False) -> int:
        if nonzero:
            return rng.randrange(1, self.q)
        return rng.randrange(self.q)

    def format(self, a: int) -> str:
        return ",".join(str(c) for c in self.coords(a))

    def parse(self, text: str) -> int:
        parts = [s for s in text.strip().split(",") if s.strip() != ""]
        if len(parts) != self.e:
            raise FieldError(f"field element {text!r} needs {self.e} coordinate(s)")
        try:
            digits = [int(s) for s in parts]
        except ValueError:
            raise FieldError(f"bad field element {text!r}") from None
        if any(not 0 <= d < self.p for d in digits):
            raise FieldError(f"coordinate out of range in {text!r}")
        return self.from_coords(digits)

    def element(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            self.check(value.field)
            return value
        if isinstance(value, str):
            return FieldElement(self, self.parse(value))
        if isinstance(value, (tuple, list)):
            return FieldElement(self, self.from_coords(value))
        return FieldElement(self, self.from_int(int(value)))

    @cached_property
    def gen(self) -> FieldElement:
        """The class of X in F_p[X]/(modulus)."""
        return FieldElement(self, self.from_coords([0, 1]) if self.e > 1 else self.from_int(-self.modulus[0]))

    # -- identity -------------------------------------------------------------

    def check(self, other: Field) -> None:
        if other is not self and other != self:
            raise FieldError(f"mixed fields: {self} and {other}")

    def __eq__(self, other):
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"Field(p={self.p}, e={self.e}, modulus={list(self.modulus)})"

    def __str__(self):
        return f"F_{self.q}" if self.e == 1 else f"F_{self.p}^{self.e}"

    def __reduce__(self):
        return (Field, (self.p, self.e, list(self.modulus)))


def _identity(a):
    return a


class FieldElement:
    """Immutable element of a :class:`Field` with operator syntax."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        if not 0 <= value < field.q:
            raise FieldError(f"packed value {value} out of range for {field}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.coords(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            self.field.check(other.field)
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(b, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.value, n))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.value))

    def frobenius(self, k: int = 1) -> FieldElement:
        return FieldElement(self.field, self.field.frob(self.value, k))

    def pth_root(self) -> FieldElement:
        return FieldElement(self.field, self.field.pth_root(self.value))

    def __repr__(self):
        return f"FieldElement({self.field}, {self.field.format(self.value)})"

    def __str__(self):
        return self.field.format(self.value)


# -- spec-level operations ------------------------------------------------------

def ff_make(p: int, e: int = 1, modulus=None, seed: int = 0) -> Field:
    """Build F_{p^e}.  Without a modulus, draw random monic polynomials from
    ``random.Random(seed)`` until one is irreducible."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    if modulus is None:
        rng = random.Random(seed)
        while True:
            cand = [rng.randrange(p) for _ in range(e)] + [1]
            if is_irreducible(cand, p):
                modulus = cand
                break
    return Field(p, e, modulus)


def ff_arith(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise DomainError(f"unknown field operation {op!r}")


def ff_frobenius(x: FieldElement, k: int = 1) -> FieldElement:
    if k < 0:
        raise DomainError("Frobenius exponent must be >= 0")
    return x.frobenius(k)


def ff_pth_root(x: FieldElement) -> FieldElement:
    return x.pth_root()


def ff_enumerate(field: Field) -> list[FieldElement]:
    return [FieldElement(field, a) for a in field.elements()]


def ff_random(field: Field, seed: int) -> FieldElement:
    return FieldElement(field, random.Random(seed).randrange(field.q))
