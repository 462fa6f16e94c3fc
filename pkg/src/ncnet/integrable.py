"""Torus trace Hamiltonians, the Lax equation, and involutivity checks."""

from __future__ import annotations

from .bracket import BracketParams, Engine, NetworkSystem
from .matrices import ElementMatrix
from .network import TorusContext
from .rmatrix import trig_rho
from .scalars import SpectralScalar
from .words import CyclicElement, LoopMix, cyclic_reduce, identity_word


class TorusSystem:
    """Bracket engine plus cached measurement powers for one glued torus."""

    def __init__(self, ctx: TorusContext, params: BracketParams | None = None):
        self.ctx = ctx
        self.engine = Engine(NetworkSystem(ctx), params)
        self.B = ctx.matrix()
        self._powers = {0: ElementMatrix.identity(self.B.row_objs), 1: self.B}
        self.rho = trig_rho(ctx.size)

    def power(self, k: int) -> ElementMatrix:
        got = self._powers.get(k)
        if got is None:
            got = self.power(k - 1) * self.B
            self._powers[k] = got
        return got

    # -- trace Hamiltonians ---------------------------------------------------

    def trace_power(self, k: int) -> LoopMix:
        """tr B(lam)^k as a sum of loops (k = 0 gives the identity loops)."""
        if k == 0:
            mix = LoopMix()
            for obj in dict.fromkeys(self.B.row_objs):
                mix._add_term(identity_word(obj), SpectralScalar.from_int(1))
            return mix
        return self.power(k).trace_mix()

    def hamiltonians(self, k: int) -> dict:
        """H_{kj}: the lam^j coefficients of tr B(lam)^k, cyclically reduced."""
        return {
            (k, j): cyclic_reduce(mix)
            for j, mix in self.trace_power(k).decompose_by_var("lam").items()
        }

    # -- Lax form -------------------------------------------------------------

    def lax_M(self, k: int) -> ElementMatrix:
        """M(lam,mu;k)_{b1b2} = k rho_{b2b1}(lam,mu) (B(lam)^k)_{b1b2}."""
        if k < 1:
            raise ValueError("lax_M needs k >= 1")
        Bk = self.power(k)
        n = self.ctx.size
        entries = []
        for b1 in range(1, n + 1):
            row = []
            for b2 in range(1, n + 1):
                coeff = self.rho.value(b2, b1) * SpectralScalar.from_int(k)
                row.append(Bk[b1, b2].scale(coeff))
            entries.append(row)
        return ElementMatrix(Bk.row_objs, Bk.col_objs, entries)

    def h0_with_trace(self, k: int, target: ElementMatrix) -> ElementMatrix:
        """{tr B(lam)^k, target} entrywise (target already in its own variable)."""
        h = self.trace_power(k)
        entries = [
            [self.engine.h0(h, e) for e in row] for row in target.entries
        ]
        return ElementMatrix(target.row_objs, target.col_objs, entries)

    # -- theorem checks ---------------------------------------------------------

    def verify_lax(self, k: int) -> list:
        """{tr B(lam)^k, B(mu)} = M B(mu) - B(mu) M; returns differing entries."""
        Bmu = self.B.substitute({"lam": "mu"})
        lhs = self.h0_with_trace(k, Bmu)
        M = self.lax_M(k)
        rhs = M * Bmu - Bmu * M
        return _matrix_defects(lhs, rhs)

    def verify_power_flow(self, k: int, l: int) -> list:
        """{tr B(lam)^k, B(mu)^l} = M B(mu)^l - B(mu)^l M (the induction step)."""
        Bl = self.power(l).substitute({"lam": "mu"})
        lhs = self.h0_with_trace(k, Bl)
        M = self.lax_M(k)
        rhs = M * Bl - Bl * M
        return _matrix_defects(lhs, rhs)

    def verify_involutivity(self, k: int, l: int) -> dict:
        """<tr B(lam)^k, tr B(mu)^l> must vanish in the cyclic space.

        Also reports whether some pre-reduction H0 bracket was nonzero, so a
        pass cannot be vacuous, and checks the intermediate power-flow
        identity.
        """
        power_defects = self.verify_power_flow(k, l)
        h = self.trace_power(k)
        g = self.trace_power(l)
        g_mu = LoopMix({w: c.substitute({"lam": "mu"}) for w, c in g.terms.items()})
        pre = self.engine.h0(h, g_mu)
        lie = cyclic_reduce(pre)
        return {
            "power_flow_defects": power_defects,
            "pre_reduction_nonzero": not pre.is_zero(),
            "lie_bracket": lie,
            "ok": not power_defects and lie.is_zero(),
        }

    def hamiltonian_lie_brackets(self, k: int, l: int) -> dict:
        """<H_kj, H_lj'> for all coefficient pairs present (all must vanish)."""
        out = {}
        hk = {
            j: mix for j, mix in self.trace_power(k).decompose_by_var("lam").items()
        }
        hl = {
            j: mix for j, mix in self.trace_power(l).decompose_by_var("lam").items()
        }
        for j1, m1 in hk.items():
            for j2, m2 in hl.items():
                out[(j1, j2)] = cyclic_reduce(self.engine.h0(m1, m2))
        return out


def _matrix_defects(lhs: ElementMatrix, rhs: ElementMatrix) -> list:
    out = []
    for i in range(1, lhs.nrows + 1):
        for j in range(1, lhs.ncols + 1):
            if lhs[i, j] != rhs[i, j]:
                out.append(((i, j), str(rhs[i, j]), str(lhs[i, j])))
    return out
