"""Slow reference computations written without the package's series code.

Series are dicts {exponent: packed coefficient}; only the field tables are
shared with the code under test.
"""

import itertools


def poly_mul(F, a, b, lim):
    """Product of dict series, dropping exponents >= lim."""
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j < lim:
                out[i + j] = F.add(out.get(i + j, 0), F.mul(x, y))
    return {k: v for k, v in out.items() if v}


def poly_add(F, a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = F.add(out.get(k, 0), v)
    return {k: v for k, v in out.items() if v}


def poly_pow(F, a, k, lim):
    out = {0: 1}
    for _ in range(k):
        out = poly_mul(F, out, a, lim)
    return out


def unit_inverse(F, a, lim):
    """1/a for a power series with a[0] != 0, mod t^lim, by solving term by term."""
    inv0 = F.inv(a[0])
    out = {0: inv0}
    for n in range(1, lim):
        acc = 0
        for k in range(1, n + 1):
            acc = F.add(acc, F.mul(a.get(k, 0), out.get(n - k, 0)))
        c = F.mul(F.neg(acc), inv0)
        if c:
            out[n] = c
    return out


def polar_min_pole(F, polar, depth):
    """Smallest pole order among a + d^p - d, d = sum_{1<=s<=depth} c_s t^-s.

    ``polar`` maps pole order l >= 1 to its coefficient.  d^p is computed by
    naive multiplication, not Frobenius.
    """
    p = F.p
    best = None
    base = {-l: c for l, c in polar.items() if c}
    for cs in itertools.product(F.elements(), repeat=depth):
        d = {-(s + 1): c for s, c in enumerate(cs) if c}
        dp = {0: 1}
        for _ in range(p):
            dp = poly_mul(F, dp, d, 1)
        total = poly_add(F, poly_add(F, base, dp), {k: F.neg(v) for k, v in d.items()})
        poles = [-k for k, v in total.items() if k < 0 and v]
        order = max(poles, default=0)
        best = order if best is None else min(best, order)
    return best


def quotient_dimension(F, f, N):
    """dim_k k[[t]]/(f) computed as N - rank of multiplication by f on k[t]/(t^N).

    Valid when the true dimension is below N.
    """
    rows = []
    for k in range(N):
        shifted = {i + k: c for i, c in f.items() if i + k < N}
        rows.append([shifted.get(i, 0) for i in range(N)])
    return N - _rank(F, rows)


def _rank(F, rows):
    rows = [list(r) for r in rows]
    rank, col, n = 0, 0, len(rows[0]) if rows else 0
    while rank < len(rows) and col < n:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def restrict_naive(F, terms, jet_kind, r, coeffs, lim):
    """Polar part of a restricted to the curve, by plain dict arithmetic.

    Tangent: T = sum beta_{r+k} u^{r+k}, U = u.  Transversal: T = t,
    U = sum alpha_k t^k.  Returns coefficients of exponents < lim.
    """
    out = {}
    if jet_kind == "tangent":
        w = {k: c for k, c in enumerate(coeffs) if c}  # T = u^r * w(u)
        for (i, j), c in terms.items():
            shift = r * i + j
            if shift >= lim:
                continue
            base = unit_inverse(F, w, lim - shift) if i < 0 else w
            factor = poly_pow(F, base, abs(i), lim - shift)
            for k, v in factor.items():
                if k + shift < lim:
                    out[k + shift] = F.add(out.get(k + shift, 0), F.mul(c, v))
    else:
        phi = {k + 1: c for k, c in enumerate(coeffs) if c}
        for (i, j), c in terms.items():
            factor = poly_pow(F, phi, j, lim - i)
            for k, v in factor.items():
                if k + i < lim:
                    out[k + i] = F.add(out.get(k + i, 0), F.mul(c, v))
    return {k: v for k, v in out.items() if v}
