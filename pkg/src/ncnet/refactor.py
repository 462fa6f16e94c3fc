"""Truncated refactorization dynamics on abstract free matrix generators.

The setting: B = 1 + X for an N x N matrix of free generators X_ij, the
disk r-matrix bracket on entries, everything truncated at a fixed word
degree D.  Implements the interpolating Hamiltonian, its flow identity,
exp(t log B), and noncommutative Gaussian factorization.
"""

from __future__ import annotations

from fractions import Fraction

from .bracket import BracketError, BracketTable, Engine, FreeSystem
from .matrices import ElementMatrix
from .rmatrix import disk_r, disk_rho, twisted_commutator
from .scalars import SpectralScalar
from .words import CyclicElement, Element, LoopMix, PathWord, cyclic_reduce


def _frac(p, q=1) -> SpectralScalar:
    return SpectralScalar.from_fraction(Fraction(p, q))


class FreeMatrixContext:
    """N x N free generators X_ij of degree one, truncation degree D."""

    def __init__(self, N: int, D: int = 6):
        if not 1 <= N <= 9:
            raise ValueError("size must be between 1 and 9")
        self.N = N
        self.D = D
        self.objs = [f"p{i}" for i in range(1, N + 1)]
        self.labels = {
            (i, j): f"x{i}{j}" for i in range(1, N + 1) for j in range(1, N + 1)
        }
        entries = []
        for i in range(1, N + 1):
            row = []
            for j in range(1, N + 1):
                w = PathWord(self.objs[i - 1], self.objs[j - 1], (self.labels[(i, j)],))
                row.append(Element.of_word(w))
            entries.append(row)
        self.X = ElementMatrix(self.objs, self.objs, entries)
        self.B = ElementMatrix.identity(self.objs) + self.X
        self._table = twisted_commutator(disk_r(N), disk_r(N), self.B)
        gens = {
            self.labels[(i, j)]: (self.objs[i - 1], self.objs[j - 1])
            for i in range(1, N + 1)
            for j in range(1, N + 1)
        }
        pair_table = {}
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                for k in range(1, N + 1):
                    for l in range(1, N + 1):
                        cell = self._table[((i, j), (k, l))]
                        pair_table[(self.labels[(i, j)], self.labels[(k, l)])] = cell
        self.engine = Engine(FreeSystem(gens, pair_table))
        self.rho = disk_rho(N)

    # -- truncation helpers ---------------------------------------------------

    def trunc(self, m: ElementMatrix, degree: int | None = None) -> ElementMatrix:
        d = self.D if degree is None else degree
        return m.map_entries(lambda e: e.truncate(d))

    def tmul(self, a: ElementMatrix, b: ElementMatrix, degree: int | None = None):
        return self.trunc(a * b, degree)

    def generator_bracket_table(self) -> BracketTable:
        """<<X_ij, X_kl>> for all entries; degrees 0, 1, 2 are realized."""
        return self._table

    # -- series ----------------------------------------------------------------

    def log_B(self) -> ElementMatrix:
        """sum_{k=1}^{D} (-1)^{k+1}/k X^k, matrix powers truncated at D."""
        out = ElementMatrix.zero(self.objs, self.objs)
        power = ElementMatrix.identity(self.objs)
        for k in range(1, self.D + 1):
            power = self.tmul(power, self.X)
            out = out + power.scale(_frac((-1) ** (k + 1), k))
        return out

    def hamiltonian(self) -> LoopMix:
        """1/2 tr (log B)^2, computed twice and cross-checked.

        The two series -- the squared logarithm and the harmonic-number form
        sum (-1)^(k+1) c_k/(k+1) tr (B-1)^(k+1) -- must agree identically
        term by term; a mismatch is a hard internal failure.
        """
        L = self.log_B()
        h1 = self.tmul(L, L).trace_mix().scale(_frac(1, 2)).truncate(self.D)
        h2 = LoopMix()
        power = self.X
        c_k = Fraction(0)
        for k in range(1, self.D):
            c_k += Fraction(1, k)
            power = self.tmul(power, self.X)  # X^(k+1)
            coeff = _frac((-1) ** (k + 1) * c_k.numerator, (k + 1) * c_k.denominator)
            h2 = h2 + power.trace_mix().scale(coeff)
        h2 = h2.truncate(self.D)
        if h1 != h2:
            raise BracketError("Hamiltonian series forms disagree; internal error")
        return h1

    # -- flow ---------------------------------------------------------------------

    def m_tilde(self) -> ElementMatrix:
        """Mtilde_{b1b2} = rho_{b2b1} (log B)_{b1b2} with the constant disk rho."""
        L = self.log_B()
        entries = []
        for i in range(1, self.N + 1):
            row = []
            for j in range(1, self.N + 1):
                row.append(L[i, j].scale(self.rho.value(j, i)))
            entries.append(row)
        return ElementMatrix(self.objs, self.objs, entries)

    def poisson_with_hamiltonian(self, target: ElementMatrix, degree: int) -> ElementMatrix:
        h = self.hamiltonian()
        entries = [
            [self.engine.h0(h, e).truncate(degree) for e in row]
            for row in target.entries
        ]
        return ElementMatrix(target.row_objs, target.col_objs, entries)

    def flow_rhs(self) -> tuple:
        """({H, B}, Mtilde, defects): the flow identity holds through D - 2."""
        deg = self.D - 2
        lhs = self.poisson_with_hamiltonian(self.B, deg)
        M = self.m_tilde()
        rhs = self.trunc(M * self.B - self.B * M, deg)
        defects = []
        for i in range(1, self.N + 1):
            for j in range(1, self.N + 1):
                if lhs[i, j] != rhs[i, j]:
                    defects.append(((i, j), str(rhs[i, j]), str(lhs[i, j])))
        return lhs, M, defects

    def flow_defect_at(self, degree: int) -> list:
        """Entries where {H, B} and the commutator differ at a given degree.

        Empty through degree D: because the in- and out-r-matrices coincide
        here, the degree-0 component of the generator bracket cancels, so
        truncating H at D only pollutes degrees D+1 and above.
        """
        lhs = self.poisson_with_hamiltonian(self.B, degree)
        M = self.m_tilde()
        rhs = self.trunc(M * self.B - self.B * M, degree)
        out = []
        for i in range(1, self.N + 1):
            for j in range(1, self.N + 1):
                if lhs[i, j] != rhs[i, j]:
                    out.append((i, j))
        return out

    def truncation_gap_demo(self) -> list:
        """Controlled experiment for the degree bookkeeping.

        Bracketing with H truncated one degree short (D - 1) must break the
        flow identity exactly at degree D: the dropped degree-D loops feed
        degree D through the single-degree-drop bracket components.  Returns
        the mismatching entries (expected nonempty for D >= 3, N >= 2).
        """
        h_short = self.hamiltonian().truncate(self.D - 1)
        M = self.m_tilde()
        rhs = self.trunc(M * self.B - self.B * M, self.D)
        out = []
        for i in range(1, self.N + 1):
            for j in range(1, self.N + 1):
                lhs = self.engine.h0(h_short, self.B[i, j]).truncate(self.D)
                if lhs != rhs[i, j]:
                    out.append((i, j))
        return out


class TPoly:
    """Polynomial in t with matrix coefficients, truncated in t and degree."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FreeMatrixContext, coeffs: dict):
        self.ctx = ctx
        self.coeffs = {k: m for k, m in coeffs.items() if not m.is_zero()}

    def __getitem__(self, k: int) -> ElementMatrix:
        got = self.coeffs.get(k)
        if got is None:
            return ElementMatrix.zero(self.ctx.objs, self.ctx.objs)
        return got

    def tdegrees(self):
        return sorted(self.coeffs)

    def __add__(self, other: "TPoly") -> "TPoly":
        out = dict(self.coeffs)
        for k, m in other.coeffs.items():
            out[k] = out[k] + m if k in out else m
        return TPoly(self.ctx, out)

    def __sub__(self, other: "TPoly") -> "TPoly":
        neg = {k: m.scale(_frac(-1)) for k, m in other.coeffs.items()}
        return self + TPoly(self.ctx, neg)

    def __mul__(self, other: "TPoly") -> "TPoly":
        ctx = self.ctx
        out: dict = {}
        for k1, m1 in self.coeffs.items():
            for k2, m2 in other.coeffs.items():
                k = k1 + k2
                if k > ctx.D:
                    continue
                prod = ctx.tmul(m1, m2)
                out[k] = out[k] + prod if k in out else prod
        return TPoly(ctx, out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    @staticmethod
    def constant(ctx: FreeMatrixContext, m: ElementMatrix) -> "TPoly":
        return TPoly(ctx, {0: m})

    @staticmethod
    def one(ctx: FreeMatrixContext) -> "TPoly":
        return TPoly.constant(ctx, ElementMatrix.identity(ctx.objs))

    def entry(self, i: int, j: int) -> dict:
        return {k: m[i, j] for k, m in self.coeffs.items() if not m[i, j].is_zero()}

    def derivative(self) -> "TPoly":
        out = {}
        for k, m in self.coeffs.items():
            if k >= 1:
                out[k - 1] = m.scale(_frac(k))
        return TPoly(self.ctx, out)


def _exp_series(ctx: FreeMatrixContext, L: ElementMatrix) -> TPoly:
    coeffs = {0: ElementMatrix.identity(ctx.objs)}
    power = ElementMatrix.identity(ctx.objs)
    fact = 1
    for k in range(1, ctx.D + 1):
        power = ctx.tmul(power, L)
        fact *= k
        coeffs[k] = power.scale(_frac(1, fact))
    return TPoly(ctx, coeffs)


def exp_tlog(ctx: FreeMatrixContext) -> TPoly:
    """G(t) = sum_k t^k (log B)^k / k!, truncated at t-degree D."""
    return _exp_series(ctx, ctx.log_B())


def gauss_factor(G: TPoly) -> tuple:
    """Factor G = g_+^(-1) g_- with g_+ unitriangular upper, g_- lower.

    Solves U_{ij} = -P_{ij} - (U P)_{ij} (P = G - 1) degree by degree in t;
    g_+ = 1 + U is exactly unitriangular and the above-diagonal entries of
    g_- = g_+ G vanish through the truncation degree.
    """
    ctx = G.ctx
    if G[0] != ElementMatrix.identity(ctx.objs):
        raise BracketError("Gaussian factorization needs G = 1 + positive part")
    P = G - TPoly.one(ctx)
    U = TPoly(ctx, {})
    for d in range(1, ctx.D + 1):
        rhs = P[d].scale(_frac(-1))
        correction = (U * P)[d]
        target = rhs - correction
        # keep the strictly upper part only
        entries = []
        for i in range(1, ctx.N + 1):
            row = []
            for j in range(1, ctx.N + 1):
                if i < j:
                    row.append(target[i, j])
                else:
                    row.append(Element.zero(ctx.objs[i - 1], ctx.objs[j - 1]))
            entries.append(row)
        U = U + TPoly(ctx, {d: ElementMatrix(ctx.objs, ctx.objs, entries)})
    g_plus = TPoly.one(ctx) + U
    g_minus = g_plus * G
    return g_plus, g_minus


def _series_inverse(g: TPoly) -> TPoly:
    """(1 + V)^(-1) = sum (-V)^k for V with positive t-degree."""
    ctx = g.ctx
    V = g - TPoly.one(ctx)
    if 0 in V.coeffs:
        raise BracketError("series inverse needs unit constant term")
    out = TPoly.one(ctx)
    term = TPoly.one(ctx)
    negV = TPoly(ctx, {k: m.scale(_frac(-1)) for k, m in V.coeffs.items()})
    for _ in range(ctx.D):
        term = term * negV
        if term.is_zero():
            break
        out = out + term
    return out


def _binom_half(D: int) -> list:
    """binom(-1/2, j) for j = 0..D."""
    out = [Fraction(1)]
    for j in range(1, D + 1):
        out.append(out[-1] * Fraction(-(2 * j - 1), 2 * j))
    return out


def _diag_inv_sqrt(g: TPoly) -> TPoly:
    """Inverse square root of the diagonal part of a triangular series.

    Each diagonal entry is 1 + (positive t-degree), so the binomial series
    applies; powers of a single element commute, making the root two-sided.
    """
    ctx = g.ctx
    V = TPoly(
        ctx,
        {
            k: ElementMatrix(
                ctx.objs,
                ctx.objs,
                [
                    [
                        m[i, j]
                        if i == j
                        else Element.zero(ctx.objs[i - 1], ctx.objs[j - 1])
                        for j in range(1, ctx.N + 1)
                    ]
                    for i in range(1, ctx.N + 1)
                ],
            )
            for k, m in g.coeffs.items()
        },
    )
    X = V - TPoly.one(ctx)
    out = TPoly.one(ctx)
    term = TPoly.one(ctx)
    for j, c in enumerate(_binom_half(ctx.D)):
        if j == 0:
            continue
        term = term * X
        if term.is_zero():
            break
        out = out + TPoly(ctx, {k: m.scale(_frac(c.numerator, c.denominator)) for k, m in term.coeffs.items()})
    return out


def refactor_solution(ctx: FreeMatrixContext) -> tuple:
    """Triangular factors whose conjugation of B solves the interpolating flow.

    Factor e^{-t log B} = g_+^(-1) g_- and rebalance the diagonal so that
    diag(g_-) = diag(g_+)^(-1); then g_+ B g_+^(-1) = g_- B g_-^(-1) obeys
    d/dt B_t = {H, B_t}.  (With the unimodular normalization, or with the
    factorization of e^{+t log B} on this side, the time-one flow identity
    fails by commutators with the diagonal of log B_t; both exact symbolic
    and classical numerical checks force this convention.)
    """
    L = ctx.log_B()
    Gneg = _exp_series(ctx, L.scale(_frac(-1)))
    g_plus, g_minus = gauss_factor(Gneg)
    D = _diag_inv_sqrt(g_minus)
    return D * g_plus, D * g_minus


def strictly_upper_defects(g: TPoly) -> list:
    """(t-degree, entry) pairs where an above-diagonal entry is nonzero."""
    ctx = g.ctx
    out = []
    for k, m in g.coeffs.items():
        for i in range(1, ctx.N + 1):
            for j in range(i + 1, ctx.N + 1):
                if not m[i, j].is_zero():
                    out.append((k, (i, j)))
    return sorted(out)


def verify_flow(ctx: FreeMatrixContext) -> dict:
    """The three refactorization-flow assertions, all exact up to truncation.

    (a) d/dt B_t = {H, B_t} per t-coefficient through degree D - 2;
    (b) g_+ B g_+^(-1) = g_- B g_-^(-1) through degree D;
    (c) cyclic traces of B_t^k are t-independent through degree D (k <= 3).
    """
    if ctx.D < 3:
        raise BracketError("flow verification needs D >= 3")
    g_plus, g_minus = refactor_solution(ctx)
    B0 = TPoly.constant(ctx, ctx.B)
    Bt = g_plus * B0 * _series_inverse(g_plus)

    deg = ctx.D - 2
    dBt = Bt.derivative()
    flow_defects = []
    for k in range(0, ctx.D):
        lhs = dBt[k].map_entries(lambda e: e.truncate(deg))
        rhs = ctx.poisson_with_hamiltonian(Bt[k], deg)
        for i in range(1, ctx.N + 1):
            for j in range(1, ctx.N + 1):
                if lhs[i, j] != rhs[i, j]:
                    flow_defects.append((k, (i, j)))

    Bt_minus = g_minus * B0 * _series_inverse(g_minus)
    conj_defects = []
    for k in set(Bt.tdegrees()) | set(Bt_minus.tdegrees()):
        diff = Bt[k] - Bt_minus[k]
        if not diff.is_zero():
            conj_defects.append(k)

    trace_defects = []
    for k in (1, 2, 3):
        power = TPoly.one(ctx)
        for _ in range(k):
            power = power * Bt
        base = cyclic_reduce(ctx.trunc(ctx.B.power(k)).trace_mix())
        for d in power.tdegrees():
            reduced = cyclic_reduce(power[d].trace_mix())
            want = base if d == 0 else CyclicElement()
            if reduced != want:
                trace_defects.append((k, d))

    return {
        "flow_defects": sorted(set(flow_defects)),
        "conjugation_defects": sorted(conj_defects),
        "trace_defects": trace_defects,
        "gplus_upper": strictly_upper_defects(g_minus),
        "ok": not flow_defects and not conj_defects and not trace_defects
        and not strictly_upper_defects(g_minus),
    }
