"""Pure-Python kernel for multivariate integer polynomials.

A polynomial in the variables (lam, mu, nu, t) is a dict mapping exponent
tuples of length NVARS to nonzero int coefficients; the zero polynomial is
the empty dict.  Term order is degree-lex with lam < mu < nu < t (total
degree first, then exponents compared from t down to lam).

The functions here are mirrored by the optional Cython module ``_cypoly``;
keep both implementations behaviourally identical.
"""

NVARS = 4

ZERO_EXP = (0,) * NVARS


def deglex_key(exp):
    return (sum(exp), exp[::-1])


def p_add(a, b):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for exp, c in b.items():
        s = out.get(exp, 0) + c
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


def p_neg(a):
    return {exp: -c for exp, c in a.items()}


def p_sub(a, b):
    if not b:
        return dict(a)
    out = dict(a)
    for exp, c in b.items():
        s = out.get(exp, 0) - c
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


def p_mul(a, b):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        e0, e1, e2, e3 = ea
        for eb, cb in b.items():
            exp = (e0 + eb[0], e1 + eb[1], e2 + eb[2], e3 + eb[3])
            s = out.get(exp, 0) + ca * cb
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def p_mul_int(a, c):
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    return {exp: k * c for exp, k in a.items()}


def p_lead(a):
    """Leading (exponent, coeff) in deglex order; a must be nonzero."""
    exp = max(a, key=deglex_key)
    return exp, a[exp]


def p_divexact(a, b):
    """Exact quotient a // b, or None when b does not divide a."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    eb, cb = p_lead(b)
    q = {}
    r = dict(a)
    while r:
        er, cr = p_lead(r)
        qe = tuple(x - y for x, y in zip(er, eb))
        if any(x < 0 for x in qe):
            return None
        qc, rem = divmod(cr, cb)
        if rem:
            return None
        q[qe] = qc
        for e2, c2 in b.items():
            exp = tuple(x + y for x, y in zip(qe, e2))
            s = r.get(exp, 0) - qc * c2
            if s:
                r[exp] = s
            else:
                r.pop(exp, None)
    return q
