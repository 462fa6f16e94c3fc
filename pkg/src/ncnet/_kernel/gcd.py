"""Multivariate gcd over the integers, built on the kernel primitives.

Uses the primitive pseudo-remainder sequence: a polynomial is viewed as
univariate in its highest occurring variable with polynomial coefficients,
split into content and primitive part, and the PRS runs on the primitive
parts.  Sizes in this project are small so no subresultant refinement is
needed.
"""

from math import gcd as igcd

from . import backend as K

NVARS = K.NVARS


def int_content(a):
    g = 0
    for c in a.values():
        g = igcd(g, c)
        if g == 1:
            return 1
    return g


def _main_var(a, b):
    for v in range(NVARS - 1, -1, -1):
        if any(e[v] for e in a) or any(e[v] for e in b):
            return v
    return None


def _to_univariate(a, v):
    """Split off variable v: dict degree -> polynomial in remaining vars."""
    out = {}
    for exp, c in a.items():
        d = exp[v]
        rest = exp[:v] + (0,) + exp[v + 1 :]
        coeff = out.setdefault(d, {})
        s = coeff.get(rest, 0) + c
        if s:
            coeff[rest] = s
        else:
            del coeff[rest]
    return {d: c for d, c in out.items() if c}


def _from_univariate(ua, v):
    out = {}
    for d, coeff in ua.items():
        for exp, c in coeff.items():
            full = exp[:v] + (d,) + exp[v + 1 :]
            out[full] = c
    return out


def _uni_content(ua):
    cont = {}
    for coeff in ua.values():
        cont = p_gcd(cont, coeff)
        if cont == {K.ZERO_EXP: 1}:
            return cont
    return cont


def _uni_scale(ua, p):
    return {d: K.p_mul(c, p) for d, c in ua.items()}


def _uni_divexact(ua, p):
    out = {}
    for d, c in ua.items():
        q = K.p_divexact(c, p)
        if q is None:
            raise ArithmeticError("inexact division in gcd content removal")
        out[d] = q
    return out


def _uni_prem(ua, ub, v):
    """Pseudo-remainder of ua by ub (univariate in v, poly coefficients)."""
    da = max(ua)
    db = max(ub)
    lb = ub[db]
    r = dict(ua)
    while r:
        dr = max(r)
        if dr < db:
            break
        lr = r[dr]
        # r <- lb*r - lr*x^(dr-db)*ub
        r = {d: K.p_mul(c, lb) for d, c in r.items()}
        for d, c in ub.items():
            dd = d + dr - db
            s = K.p_sub(r.get(dd, {}), K.p_mul(c, lr))
            if s:
                r[dd] = s
            else:
                r.pop(dd, None)
    return r


def _min_exp(a):
    it = iter(a)
    first = next(it)
    lo = list(first)
    for exp in it:
        for i, e in enumerate(exp):
            if e < lo[i]:
                lo[i] = e
    return tuple(lo)


def _strip_monomial(a):
    """Factor a = monomial * primitive-in-exponents part."""
    lo = _min_exp(a)
    if not any(lo):
        return lo, a
    stripped = {tuple(e - m for e, m in zip(exp, lo)): c for exp, c in a.items()}
    return lo, stripped


def p_gcd(a, b):
    """gcd of two integer polynomials, positive leading coefficient."""
    if not a:
        return _pos(dict(b))
    if not b:
        return _pos(dict(a))
    ca, cb = int_content(a), int_content(b)
    cg = igcd(ca, cb)
    lo_a, a2 = _strip_monomial(a)
    lo_b, b2 = _strip_monomial(b)
    mono = tuple(min(x, y) for x, y in zip(lo_a, lo_b))
    # integer-primitive, exponent-primitive parts: gcd(a,b) = cg*x^mono*gcd(pa,pb)
    pa = a2 if ca == 1 else {e: c // ca for e, c in a2.items()}
    pb = b2 if cb == 1 else {e: c // cb for e, c in b2.items()}
    if len(pa) == 1 or len(pb) == 1:
        return {mono: cg}
    supp_a = {v for exp in pa for v in range(K.NVARS) if exp[v]}
    supp_b = {v for exp in pb for v in range(K.NVARS) if exp[v]}
    if not supp_a & supp_b:
        return {mono: cg}
    # cheap wins: one primitive part dividing the other
    if len(pa) >= len(pb) and K.p_divexact(pa, pb) is not None:
        return _pos(K.p_mul(_pos(pb), {mono: cg}))
    if len(pb) > len(pa) and K.p_divexact(pb, pa) is not None:
        return _pos(K.p_mul(_pos(pa), {mono: cg}))
    g = _heugcd(pa, pb)
    if g is None:
        g = _prs_gcd(pa, pb)
    g = _pos(g)
    cont_g = int_content(g)
    if cont_g > 1:
        g = {e: c // cont_g for e, c in g.items()}
    g = K.p_mul(g, {mono: cg})
    return _pos(g)


def _prs_gcd(pa, pb):
    """Primitive pseudo-remainder sequence; exact but can blow up."""
    v = _main_var(pa, pb)
    ua, ub = _to_univariate(pa, v), _to_univariate(pb, v)
    cua, cub = _uni_content(ua), _uni_content(ub)
    cont = p_gcd(cua, cub)
    ua, ub = _uni_divexact(ua, cua), _uni_divexact(ub, cub)
    if max(ua) < max(ub):
        ua, ub = ub, ua
    while ub:
        r = _uni_prem(ua, ub, v)
        ua, ub = ub, r
        if ub:
            cr = _uni_content(ub)
            ub = _uni_divexact(ub, cr)
    return K.p_mul(_from_univariate(ua, v), cont)


def _maxnorm(p):
    return max(abs(c) for c in p.values())


def _eval_var(p, v, xi):
    out: dict = {}
    for exp, c in p.items():
        key = exp[:v] + (0,) + exp[v + 1 :]
        val = out.get(key, 0) + c * xi ** exp[v]
        out[key] = val
    return {k: c for k, c in out.items() if c}


def _interpolate(h, v, xi):
    """Balanced base-xi digits of h become the coefficients of variable v."""
    half = xi // 2
    H: dict = {}
    k = 0
    while h:
        digit = {}
        rest = {}
        for exp, c in h.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                digit[exp[:v] + (k,) + exp[v + 1 :]] = r
            q = (c - r) // xi
            if q:
                rest[exp] = q
        H.update(digit)
        h = rest
        k += 1
        if k > 512:
            return None
    return H


def _heugcd(f, g, depth=0):
    """Heuristic gcd by integer evaluation; None when it fails to verify.

    Division-checked candidates are genuine common divisors; growing the
    evaluation point makes the reconstruction faithful, at which point the
    candidate is the gcd (Char-Geddes-Gonnet).
    """
    supp = sorted(
        {v for exp in f for v in range(K.NVARS) if exp[v]}
        | {v for exp in g for v in range(K.NVARS) if exp[v]}
    )
    if not supp:
        return {K.ZERO_EXP: igcd(f.get(K.ZERO_EXP, 0), g.get(K.ZERO_EXP, 0))}
    v = min(supp, key=lambda u: max(max(e[u] for e in f), max(e[u] for e in g)))
    xi = 2 * min(_maxnorm(f), _maxnorm(g)) + 4
    for _ in range(8):
        fv = _eval_var(f, v, xi)
        gv = _eval_var(g, v, xi)
        if fv and gv:
            h = _heugcd(fv, gv, depth + 1)
            if h is not None and h:
                # keep integer content: it encodes outer-variable factors
                H = _interpolate(h, v, xi)
                if H and K.p_divexact(f, H) is not None and K.p_divexact(g, H) is not None:
                    return H
        xi = xi * 73794 // 27011 + 4
    return None


def _pos(p):
    if p and K.p_lead(p)[1] < 0:
        return K.p_neg(p)
    return p
