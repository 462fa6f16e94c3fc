"""r-matrices, twisted commutators, Yang-Baxter checks, and the formal
triple-bracket quasi-Jacobi test.

r-matrix entries are stored in the abstract slot variables (lam, mu) and
instantiated by simultaneous substitution wherever a different variable
pair is needed, e.g. (mu, nu) inside the Yang-Baxter equations.
"""

from __future__ import annotations

from fractions import Fraction

from .bracket import BracketError, BracketTable
from .matrices import ElementMatrix
from .scalars import HALF, LAM, MU, ONE, ZERO, SpectralScalar
from .words import PathWord, TensorElement


class RMatrix:
    """Size-n r-matrix: finitely supported map (i,j,k,l) -> scalar in (lam, mu)."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries: dict):
        if n < 1:
            raise ValueError("r-matrix size must be at least 1")
        self.n = n
        self.entries = {k: v for k, v in entries.items() if not v.is_zero()}

    def entry(self, i, j, k, l) -> SpectralScalar:
        return self.entries.get((i, j, k, l), ZERO)

    def instantiate(self, var1: str, var2: str) -> dict:
        """Entries with slot variables renamed to (var1, var2)."""
        mapping = {"lam": var1, "mu": var2}
        return {k: v.substitute(mapping) for k, v in self.entries.items()}

    def entry_at(self, i, j, k, l, var1: str, var2: str) -> SpectralScalar:
        v = self.entries.get((i, j, k, l))
        if v is None:
            return ZERO
        return v.substitute({"lam": var1, "mu": var2})


class RhoMatrix:
    """Ansatz form r = sum rho_mn E_mn boxtimes E_nm."""

    __slots__ = ("n", "rho")

    def __init__(self, n: int, rho):
        self.n = n
        self.rho = rho  # callable (m, k) -> SpectralScalar in (lam, mu)

    def value(self, m: int, k: int) -> SpectralScalar:
        return self.rho(m, k)

    def expand(self) -> RMatrix:
        entries = {}
        for m in range(1, self.n + 1):
            for k in range(1, self.n + 1):
                v = self.rho(m, k)
                if not v.is_zero():
                    entries[(m, k, k, m)] = v
        return RMatrix(self.n, entries)


def disk_r(n: int) -> RMatrix:
    """r_n = 1/2 sum_{i<j} (E_ji boxtimes E_ij - E_ij boxtimes E_ji)."""
    if n < 1:
        raise ValueError("r-matrix size must be at least 1")
    entries = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            entries[(j, i, i, j)] = HALF
            entries[(i, j, j, i)] = -HALF
    return RMatrix(n, entries)


def disk_rho(n: int) -> RhoMatrix:
    def rho(m, k):
        if m > k:
            return HALF
        if m < k:
            return -HALF
        return ZERO

    return RhoMatrix(n, rho)


def trig_rho(n: int) -> RhoMatrix:
    """rho_{mk}: lam/(mu-lam) below the diagonal pair order, mu/(mu-lam) above,
    (mu+lam)/(2(mu-lam)) on it."""
    denom = MU - LAM

    def rho(m, k):
        if m < k:
            return LAM / denom
        if m > k:
            return MU / denom
        return HALF * (MU + LAM) / denom

    return RhoMatrix(n, rho)


def trig_r(n: int) -> RMatrix:
    return trig_rho(n).expand()


def twisted_commutator(
    r: RMatrix,
    r_out: RMatrix,
    B: ElementMatrix,
    var1: str = "lam",
    var2: str = "mu",
) -> BracketTable:
    """r (B_L(var1) boxtimes B_R(var2)) - ((B_L boxtimes B_R) r_out)^tau.

    Cell ((a1,a3),(b1,b3)) = sum r^{b1b2}_{a1a2} (B(var1)_{a2a3} (x) B(var2)_{b2b3})
    - sum (B(var2)_{b1b2} (x) B(var1)_{a1a2}) r_out^{b2b3}_{a2a3}.
    """
    m, n = B.nrows, B.ncols
    if r.n != m or r_out.n != n:
        raise BracketError(
            f"r-matrix sizes ({r.n}, {r_out.n}) do not match matrix shape {m}x{n}"
        )
    B1 = B if var1 == "lam" else B.substitute({"lam": var1})
    B2 = B.substitute({"lam": var2})
    rin = r.instantiate(var1, var2)
    rout = r_out.instantiate(var1, var2)
    cells = {}
    for a1 in range(1, m + 1):
        for a3 in range(1, n + 1):
            for b1 in range(1, m + 1):
                for b3 in range(1, n + 1):
                    cell = TensorElement.zero(
                        (B2.row_objs[b1 - 1], B1.col_objs[a3 - 1]),
                        (B1.row_objs[a1 - 1], B2.col_objs[b3 - 1]),
                    )
                    for (i, j, k, l), c in rin.items():
                        if i != a1 or k != b1:
                            continue
                        a2, b2 = j, l
                        cell = cell + TensorElement.outer(B1[a2, a3], B2[b2, b3], c)
                    for (i, j, k, l), c in rout.items():
                        if j != a3 or l != b3:
                            continue
                        a2, b2 = i, k
                        cell = cell - TensorElement.outer(B2[b1, b2], B1[a1, a2], c)
                    cells[((a1, a3), (b1, b3))] = cell
    return BracketTable((m, n), (m, n), cells)


def verify_rmatrix_theorem(net, params=None) -> list:
    """Compare <<B(lam), B(mu)>> against the twisted commutator.

    Disk networks use the constant r-matrices, cylindrical ones the
    trigonometric family.  Returns the list of differing cells (empty on
    success), each as (cell, expected, actual).
    """
    from .bracket import BracketParams, Engine, NetworkSystem, matrix_db_spectral

    if params is None:
        params = BracketParams.standard()
    engine = Engine(NetworkSystem(net), params)
    B = net.boundary_matrix()
    lhs = matrix_db_spectral(engine, B)
    make = disk_r if net.surface == "disk" else trig_r
    rhs = twisted_commutator(make(B.nrows), make(B.ncols), B)
    out = []
    for key in sorted(lhs.keys()):
        if lhs[key] != rhs[key]:
            out.append((key, str(rhs[key]), str(lhs[key])))
    return out


# -- sufficient conditions: skew symmetry and quasi Yang-Baxter --------------


def check_skew(r: RMatrix) -> list:
    """r^{b1b2}_{a1a2}(lam,mu) + r^{a1a2}_{b1b2}(mu,lam) = 0 for all indices."""
    bad = []
    n = r.n
    swapped = r.instantiate("mu", "lam")
    for a1 in range(1, n + 1):
        for a2 in range(1, n + 1):
            for b1 in range(1, n + 1):
                for b2 in range(1, n + 1):
                    s = r.entry(a1, a2, b1, b2) + swapped.get((b1, b2, a1, a2), ZERO)
                    if not s.is_zero():
                        bad.append(((a1, a2, b1, b2), str(s)))
    return bad


QUARTER = SpectralScalar.from_fraction(Fraction(1, 4))


def check_qybe_in(r: RMatrix) -> list:
    """First quasi Yang-Baxter equation, with the -1/4 delta right-hand side."""
    n = r.n
    r_mn = r.instantiate("mu", "nu")  # slots (mu, nu)
    r_lm = r.instantiate("lam", "mu")
    r_nl = r.instantiate("nu", "lam")
    bad = []
    for a1 in range(1, n + 1):
        for a3 in range(1, n + 1):
            for b1 in range(1, n + 1):
                for b3 in range(1, n + 1):
                    for c1 in range(1, n + 1):
                        for c3 in range(1, n + 1):
                            acc = ZERO
                            for x in range(1, n + 1):
                                acc = acc + r_mn.get((b1, x, c1, c3), ZERO) * r_lm.get(
                                    (a1, a3, x, b3), ZERO
                                )
                                acc = acc + r_nl.get((c1, x, a1, a3), ZERO) * r_mn.get(
                                    (b1, b3, x, c3), ZERO
                                )
                                acc = acc + r_lm.get((a1, x, b1, b3), ZERO) * r_nl.get(
                                    (c1, c3, x, a3), ZERO
                                )
                            if a1 == b1 == c1 and a1 == a3 and b1 == b3 and c1 == c3:
                                acc = acc + QUARTER
                            if not acc.is_zero():
                                bad.append(
                                    (((a1, a3), (b1, b3), (c1, c3)), str(acc))
                                )
    return bad


def check_qybe_out(r: RMatrix) -> list:
    """Second quasi Yang-Baxter equation, with the +1/4 delta right-hand side.

    First term reads sum_x r_{a2a4}^{c2 x}(lam,nu) r_{b2b4}^{x c4}(mu,nu),
    as forced by the uncombined triple-bracket expansion (the combined
    display transposes the first factor's index pairs, which skew-symmetry
    shows to be a misprint).
    """
    n = r.n
    r_ln = r.instantiate("lam", "nu")
    r_mn = r.instantiate("mu", "nu")
    r_ml = r.instantiate("mu", "lam")
    r_nl = r.instantiate("nu", "lam")
    r_nm = r.instantiate("nu", "mu")
    r_lm = r.instantiate("lam", "mu")
    bad = []
    for a2 in range(1, n + 1):
        for a4 in range(1, n + 1):
            for b2 in range(1, n + 1):
                for b4 in range(1, n + 1):
                    for c2 in range(1, n + 1):
                        for c4 in range(1, n + 1):
                            acc = ZERO
                            for x in range(1, n + 1):
                                acc = acc + r_ln.get((a2, a4, c2, x), ZERO) * r_mn.get(
                                    (b2, b4, x, c4), ZERO
                                )
                                acc = acc + r_ml.get((b2, b4, a2, x), ZERO) * r_nl.get(
                                    (c2, c4, x, a4), ZERO
                                )
                                acc = acc + r_nm.get((c2, c4, b2, x), ZERO) * r_lm.get(
                                    (a2, a4, x, b4), ZERO
                                )
                            if a4 == b4 == c4 and a2 == a4 and b2 == b4 and c2 == c4:
                                acc = acc - QUARTER
                            if not acc.is_zero():
                                bad.append(
                                    (((a2, a4), (b2, b4), (c2, c4)), str(acc))
                                )
    return bad


def check_r_conditions(r: RMatrix, r_out: RMatrix | None = None) -> dict:
    """Skew symmetry plus both quasi Yang-Baxter equations; returns defects."""
    if r_out is None:
        r_out = r
    return {
        "skew_in": check_skew(r),
        "skew_out": check_skew(r_out),
        "qybe_in": check_qybe_in(r),
        "qybe_out": check_qybe_out(r_out),
    }


def rho_identity(rho: RhoMatrix) -> list:
    """rho_{b1c1}(mu,nu) rho_{a1c1}(lam,mu) + rho_{c1a1}(nu,lam) rho_{b1a1}(mu,nu)
    + rho_{a1b1}(lam,mu) rho_{c1b1}(nu,lam) + 1/4 delta_{a1b1} delta_{a1c1} = 0,
    checked for every index triple."""
    bad = []
    n = rho.n

    def at(m, k, v1, v2):
        return rho.value(m, k).substitute({"lam": v1, "mu": v2})

    for a in range(1, n + 1):
        for b in range(1, n + 1):
            for c in range(1, n + 1):
                acc = (
                    at(b, c, "mu", "nu") * at(a, c, "lam", "mu")
                    + at(c, a, "nu", "lam") * at(b, a, "mu", "nu")
                    + at(a, b, "lam", "mu") * at(c, b, "nu", "lam")
                )
                if a == b == c:
                    acc = acc + QUARTER
                if not acc.is_zero():
                    bad.append(((a, b, c), str(acc)))
    return bad


# -- formal Lax matrix and the triple-bracket quasi-Jacobi identity -----------


class FormalLaxContext:
    """Formal square Lax matrix B(lam)_{ij} = sum_k h_{ij}(k) lam^k.

    Homogeneous components are one-dimensional: each (i, j, k) owns one free
    generator.  The double bracket of two entries is prescribed by the
    twisted commutator with the supplied r-matrices, so nested (triple)
    brackets can be computed symbolically on entry atoms.
    """

    def __init__(self, n: int, window: range):
        if n < 1:
            raise ValueError("size must be at least 1")
        self.n = n
        self.window = list(window)

    def atoms(self):
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                yield (i, j)


def _pair_bracket_atoms(ctx, r_in: dict, r_out: dict, x, y):
    """<<B(u)_{x}, B(v)_{y}>> as a dict (atom, atom) -> scalar.

    x = (i, j, var); atoms in the output keep their variables.
    """
    (a1, a3, u) = x
    (b1, b3, v) = y
    out: dict = {}
    for (i, j, k, l), c in r_in.items():
        if i != a1 or k != b1:
            continue
        key = ((j, a3, u), (l, b3, v))
        out[key] = out.get(key, ZERO) + c
    for (i, j, k, l), c in r_out.items():
        if j != a3 or l != b3:
            continue
        key = ((b1, k, v), (a1, i, u))
        out[key] = out.get(key, ZERO) - c
    return {k: c for k, c in out.items() if not c.is_zero()}


_VAR_OF = {"lam": 0, "mu": 1, "nu": 2}


def triple_bracket(ctx: FormalLaxContext, r: RMatrix, r_out: RMatrix, x, y, z) -> dict:
    """<<B(lam)_x, B(mu)_y, B(nu)_z>> as a dict (atom,atom,atom) -> scalar.

    Computed as the cyclic sum of nested brackets with
    <<a, b (x) c>>_L = <<a, b>> (x) c and sigma the cyclic slot rotation
    u1 (x) u2 (x) u3 -> u3 (x) u1 (x) u2.
    """
    A = (x[0], x[1], "lam")
    Bb = (y[0], y[1], "mu")
    C = (z[0], z[1], "nu")

    def pair(p, q):
        vs = (p[2], q[2])
        return _pair_bracket_atoms(
            ctx, r.instantiate(*vs), r_out.instantiate(*vs), p, q
        )

    def nested(p, q, s):
        # <<p, <<q, s>>>>_L with the third slot riding along
        out: dict = {}
        for (u, v), c in pair(q, s).items():
            for (w1, w2), c2 in pair(p, u).items():
                key = (w1, w2, v)
                out[key] = out.get(key, ZERO) + c * c2
        return out

    def rot(term_dict, times):
        out: dict = {}
        for (u1, u2, u3), c in term_dict.items():
            key = (u1, u2, u3)
            for _ in range(times):
                key = (key[2], key[0], key[1])
            out[key] = out.get(key, ZERO) + c
        return out

    total: dict = {}
    for part in (
        nested(A, Bb, C),
        rot(nested(Bb, C, A), 1),
        rot(nested(C, A, Bb), 2),
    ):
        for key, c in part.items():
            total[key] = total.get(key, ZERO) + c
    return {k: c for k, c in total.items() if not c.is_zero()}


def trivector_rhs(ctx: FormalLaxContext, x, y, z) -> dict:
    """Action of the quasi-Jacobi right-hand side trivector on an atom triple."""
    A = (x[0], x[1], "lam")
    Bb = (y[0], y[1], "mu")
    C = (z[0], z[1], "nu")
    out: dict = {}
    if x[0] == y[0] == z[0]:
        out[(A, Bb, C)] = -QUARTER
    if x[1] == y[1] == z[1]:
        key = (C, A, Bb)
        out[key] = out.get(key, ZERO) + QUARTER
    return {k: c for k, c in out.items() if not c.is_zero()}


def _expand_atoms(ctx: FormalLaxContext, table: dict) -> dict:
    """Expand atom triples into generator monomials h_{ij}(k) tensor cubes."""
    out: dict = {}
    for ((i1, j1, v1), (i2, j2, v2), (i3, j3, v3)), c in table.items():
        for k1 in ctx.window:
            for k2 in ctx.window:
                for k3 in ctx.window:
                    coeff = (
                        c
                        * SpectralScalar.var(v1, k1)
                        * SpectralScalar.var(v2, k2)
                        * SpectralScalar.var(v3, k3)
                    )
                    key = ((i1, j1, k1), (i2, j2, k2), (i3, j3, k3))
                    s = out.get(key, ZERO) + coeff
                    if s.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = s
    return out


def quasi_jacobi_check(ctx: FormalLaxContext, r: RMatrix, r_out: RMatrix) -> list:
    """LHS (triple bracket) minus RHS (trivector) on every entry triple.

    Skew symmetry of both r-matrices is a precondition (the cancellation of
    the mixed terms in the triple bracket relies on it).  Returns the list
    of defective entry triples with their nonzero generator monomials.
    """
    if check_skew(r) or check_skew(r_out):
        raise BracketError("quasi-Jacobi check requires skew-symmetric r-matrices")
    bad = []
    atoms = list(ctx.atoms())
    for x in atoms:
        for y in atoms:
            for z in atoms:
                lhs = _expand_atoms(ctx, triple_bracket(ctx, r, r_out, x, y, z))
                rhs = _expand_atoms(ctx, trivector_rhs(ctx, x, y, z))
                keys = set(lhs) | set(rhs)
                defect = {}
                for key in keys:
                    d = lhs.get(key, ZERO) - rhs.get(key, ZERO)
                    if not d.is_zero():
                        defect[key] = str(d)
                if defect:
                    bad.append(((x, y, z), defect))
    return bad
