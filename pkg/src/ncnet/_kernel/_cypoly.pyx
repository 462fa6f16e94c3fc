# cython: boundscheck=False, wraparound=False
"""Cython mirror of the pure-Python polynomial kernel (pypoly.py).

Same dict-of-exponent-tuples representation; the win is loop and call
overhead, coefficients stay arbitrary-precision Python ints.
"""

NVARS = 4

ZERO_EXP = (0, 0, 0, 0)


def deglex_key(exp):
    return (exp[0] + exp[1] + exp[2] + exp[3], exp[::-1])


def p_add(dict a, dict b):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    for exp, c in b.items():
        s = out.get(exp, 0) + c
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


def p_neg(dict a):
    cdef dict out = {}
    for exp, c in a.items():
        out[exp] = -c
    return out


def p_sub(dict a, dict b):
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    for exp, c in b.items():
        s = out.get(exp, 0) - c
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return out


def p_mul(dict a, dict b):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef tuple ea, eb, exp
    for ea, ca in a.items():
        for eb, cb in b.items():
            exp = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3])
            s = out.get(exp, 0) + ca * cb
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def p_mul_int(dict a, c):
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    cdef dict out = {}
    for exp, k in a.items():
        out[exp] = k * c
    return out


def p_lead(dict a):
    cdef tuple best = None
    best_key = None
    for exp in a:
        key = (exp[0] + exp[1] + exp[2] + exp[3], exp[::-1])
        if best is None or key > best_key:
            best = exp
            best_key = key
    return best, a[best]


def p_divexact(dict a, dict b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    eb, cb = p_lead(b)
    cdef dict q = {}
    cdef dict r = dict(a)
    cdef tuple er, qe, exp
    while r:
        er, cr = p_lead(r)
        qe = (er[0] - eb[0], er[1] - eb[1], er[2] - eb[2], er[3] - eb[3])
        if qe[0] < 0 or qe[1] < 0 or qe[2] < 0 or qe[3] < 0:
            return None
        qc, rem = divmod(cr, cb)
        if rem:
            return None
        q[qe] = qc
        for e2, c2 in b.items():
            exp = (qe[0] + e2[0], qe[1] + e2[1], qe[2] + e2[2], qe[3] + e2[3])
            s = r.get(exp, 0) - qc * c2
            if s:
                r[exp] = s
            else:
                r.pop(exp, None)
    return q
