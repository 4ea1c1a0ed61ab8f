"""Text formats: cover files, curve files and strata system export.

Cover file (UTF-8, one directive per line, ``#`` starts a comment)::

    p 2
    e 2
    modulus 1 1 1
    d 1
    term -1 0 1,0
    prec 30 30
    normalized 0        # optional; 1 asks to check instead of normalize

``term i j c`` adds c T^i U^j.  ``prec I J`` says T^m U^n a is known modulo
(T^I, U^J), with m, n the pole orders of the listed terms.

Curve file: ``term i j c`` lines with i, j >= 0 giving a regular germ
f(T, U) = sum c T^i U^j; it is converted to Weierstrass form on loading.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .cover import CoverSpec, CurveJet, cover_normalize, is_normalized, make_cover
from .errors import (AsramifyError, BranchComponentError, DomainError, FieldError, ParseError,
                     PrecisionError)
from .ffield import Field
from .series import BivariateLaurent, LaurentSeries
from .strata import StrataSystem, clear_strata_polys


@dataclass(frozen=True)
class CoverFile:
    p: int
    e: int
    modulus: tuple[int, ...]
    d: int
    terms: tuple[tuple[int, int, tuple[int, ...]], ...]
    prec: tuple[int, int]
    normalized: bool | None = None

    def field(self) -> Field:
        return Field(self.p, self.e, list(self.modulus))

    def to_bivariate(self, field: Field | None = None) -> BivariateLaurent:
        F = field or self.field()
        terms = [(i, j, F.from_coords(list(c))) for i, j, c in self.terms]
        return BivariateLaurent(F, terms, self.prec)

    def to_cover(self) -> CoverSpec:
        a = self.to_bivariate()
        if self.normalized:
            cover = make_cover(a, self.d, normalized=True)
            if not is_normalized(cover):
                raise DomainError("file declares 'normalized 1' but a normalization step applies")
            return cover
        return cover_normalize(a, self.d)

    def to_text(self) -> str:
        lines = [f"p {self.p}", f"e {self.e}", "modulus " + " ".join(map(str, self.modulus)),
                 f"d {self.d}"]
        lines += [f"term {i} {j} " + ",".join(map(str, c)) for i, j, c in self.terms]
        lines.append(f"prec {self.prec[0]} {self.prec[1]}")
        if self.normalized is not None:
            lines.append(f"normalized {int(self.normalized)}")
        return "\n".join(lines) + "\n"


_SINGLE = ("p", "e", "modulus", "d", "prec", "normalized")


def _ints(tokens, lineno: int, what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"{what}: expected integers, got {' '.join(tokens)!r}", lineno) from None


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def parse_cover_file(text: str) -> CoverFile:
    """Parse cover-file text; syntax and field errors carry the line number."""
    seen: dict[str, tuple[int, list[str]]] = {}
    terms = []
    for lineno, tok in _lines(text):
        key, args = tok[0], tok[1:]
        if key == "term":
            if len(args) != 3:
                raise ParseError("term needs: term <i> <j> <element>", lineno)
            i, j = _ints(args[:2], lineno, "term exponents")
            terms.append((lineno, i, j, args[2]))
        elif key in _SINGLE:
            if key in seen:
                raise ParseError(f"duplicate '{key}' line", lineno)
            seen[key] = (lineno, args)
        else:
            raise ParseError(f"unknown directive {key!r}", lineno)
    for key in ("p", "e", "modulus", "d", "prec"):
        if key not in seen:
            raise ParseError(f"missing required '{key}' line")
    if not terms:
        raise ParseError("at least one 'term' line is required")

    def single(key: str, count: int | None = 1) -> list[int]:
        lineno, args = seen[key]
        if count is not None and len(args) != count:
            raise ParseError(f"'{key}' takes {count} value(s)", lineno)
        return _ints(args, lineno, key)

    (p,), (e,), (d,) = single("p"), single("e"), single("d")
    modulus = single("modulus", None)
    I, J = single("prec", 2)
    if d not in (1, 2):
        raise ParseError(f"d must be 1 or 2, got {d}", seen["d"][0])
    try:
        field = Field(p, e, modulus)
    except FieldError as exc:
        line = seen["p"][0] if "characteristic" in str(exc) else seen["modulus"][0]
        raise ParseError(str(exc), line) from None
    normalized = None
    if "normalized" in seen:
        (flag,) = single("normalized")
        if flag not in (0, 1):
            raise ParseError("normalized must be 0 or 1", seen["normalized"][0])
        normalized = bool(flag)
    parsed = []
    for lineno, i, j, elem in terms:
        if d == 1 and j < 0:
            raise ParseError("d=1 covers have no pole along U=0 (need j >= 0)", lineno)
        try:
            c = field.parse(elem)
        except FieldError as exc:
            raise ParseError(str(exc), lineno) from None
        parsed.append((i, j, field.coords(c)))
    return CoverFile(p, e, tuple(modulus), d, tuple(parsed), (I, J), normalized)


def cover_file_from(cover: CoverSpec, prec: tuple[int, int] | None = None) -> CoverFile:
    """Serialize a cover's datum (as stored, with its tail)."""
    F, a = cover.field, cover.a
    if prec is None:
        if a.prec is None:
            raise PrecisionError("exact datum: give the precision to record")
        if a.clear != (a.pole_T, a.pole_U):
            raise PrecisionError("the tail is not anchored at the pole orders of the listed terms")
        prec = a.prec
    terms = tuple((i, j, F.coords(c)) for (i, j), c in a.terms.items())
    return CoverFile(F.p, F.e, tuple(F.modulus), cover.d, terms, tuple(prec),
                     True if cover.normalized else None)


def parse_cover(source: str) -> CoverSpec:
    """Path or text to a normalized :class:`CoverSpec`."""
    return parse_cover_file(_read(source)).to_cover()


def _read(source: str) -> str:
    if "\n" in source:
        return source
    try:
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise AsramifyError(f"cannot read {source}: {exc.strerror}") from None


# -- curve files ---------------------------------------------------------------------

def parse_curve_terms(field: Field, text: str) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for lineno, tok in _lines(text):
        if tok[0] != "term" or len(tok) != 4:
            raise ParseError("curve files contain only 'term <i> <j> <element>' lines", lineno)
        i, j = _ints(tok[1:3], lineno, "term exponents")
        if i < 0 or j < 0:
            raise ParseError("curve equations are power series: need i, j >= 0", lineno)
        try:
            c = field.parse(tok[3])
        except FieldError as exc:
            raise ParseError(str(exc), lineno) from None
        out[(i, j)] = field.add(out.get((i, j), 0), c)
    return {k: v for k, v in out.items() if v}


def _solve(field: Field, f: dict[tuple[int, int], int], prec: int) -> LaurentSeries:
    """phi with f(T, phi(T)) = 0 mod T^prec, given f(0,0) = 0 and df/dU(0,0) != 0."""
    c = f[(0, 1)]
    neg_inv = field.neg(field.inv(c))
    rest = {k: v for k, v in f.items() if k != (0, 1)}
    t = LaurentSeries.variable(field, prec)
    phi = LaurentSeries.zero(field, prec)
    one = LaurentSeries.monomial(field, 1, 0, prec)
    for _ in range(prec):
        acc = LaurentSeries.zero(field, prec)
        for (i, j), v in rest.items():
            term = (t ** i if i else one) * (phi ** j if j else one)
            acc = acc + term.truncate(prec).scale(v)
        nxt = acc.truncate(prec).scale(neg_inv)
        if nxt == phi:
            break
        phi = nxt
    return phi


def curve_to_jet(field: Field, f: dict[tuple[int, int], int], cover: CoverSpec,
                 r_hint: int | None = None) -> CurveJet:
    """Weierstrass normal form of the germ f = 0, long enough for ``cover``.

    Dividing f by the unit of the preparation theorem gives U - phi(T)
    (transversal to T=0) or T - psi(U); only the series phi or psi matter.
    """
    if f.get((0, 0)):
        raise DomainError("the curve does not pass through the origin")
    fu, ft = f.get((0, 1), 0), f.get((1, 0), 0)
    if not fu and not ft:
        raise DomainError("the curve is singular at the origin")
    if not any(i == 0 for i, _ in f):
        raise BranchComponentError("the curve is the branch component T=0")
    if cover.d == 2 and not any(j == 0 for _, j in f):
        raise BranchComponentError("the curve is the branch component U=0")
    if cover.d == 1 and fu:
        length = cover.family(1)[1]
        phi = _solve(field, f, length + 1)
        return CurveJet.transversal(field, [phi.coefficient(k) for k in range(1, length + 1)])
    if not ft:
        raise DomainError("the curve is tangent to U=0; it lies in no family T_r of this cover")
    swapped = {(j, i): v for (i, j), v in f.items()}
    # the order of psi is the U-order of f(0, U)
    r = min(j for i, j in f if i == 0)
    if r_hint is not None and r_hint != r:
        raise DomainError(f"the curve lies in T_{r}, not T_{r_hint}")
    length = cover.family(r)[1]
    psi = _solve(field, swapped, r + length)
    return CurveJet.tangent(field, r, [psi.coefficient(k) for k in range(r, r + length)])


def load_curve(source: str, cover: CoverSpec) -> CurveJet:
    return curve_to_jet(cover.field, parse_curve_terms(cover.field, _read(source)), cover)


# -- strata export --------------------------------------------------------------------

def export_system(system: StrataSystem, s: int) -> str:
    """Header (r, m, n, p, e, N per level) then one block per cleared polynomial."""
    F, cover = system.field, system.cover
    polys = clear_strata_polys(system, s)
    first = system.first_var
    names = " ".join(f"X{k}" for k in range(first, system.nvars))
    lines = [f"r {system.r}", f"m {cover.m}", f"n {cover.n}", f"p {F.p}", f"e {F.e}",
             f"kind {system.kind}", f"s {s}", f"vars {names}"]
    lines += [f"N {c.l} {c.N} {c.N_l}" for c in polys]
    for c in polys:
        lines.append(f"S {c.l} {len(c.poly.terms)}")
        lines += c.poly.to_lines(first)
    return "\n".join(lines) + "\n"


def corpus_paths() -> list[str]:
    """The bundled covers over F_4, sorted by name."""
    root = resources.files("asramify") / "corpus"
    return sorted(str(p) for p in root.iterdir() if p.name.endswith(".cover"))


__all__ = ["CoverFile", "parse_cover_file", "parse_cover", "cover_file_from", "parse_curve_terms",
           "curve_to_jet", "load_curve", "export_system", "corpus_paths"]
