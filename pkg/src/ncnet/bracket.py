"""The double bracket: local vertex rules, Leibniz engine, and induced brackets.

Two independent evaluators are provided.  The Leibniz engine expands words
into full edge paths (identity-labeled edges included) and sums the local
vertex rules over all position pairs; db_direct evaluates the geometric
merge/split formula for boundary-to-boundary paths.  They must agree, and
the test suite checks that they do.
"""

from __future__ import annotations

from fractions import Fraction

from .matrices import ElementMatrix
from .scalars import ONE, ZERO, SpectralScalar
from .words import (
    CompositionError,
    CyclicElement,
    CyclicWord,
    Element,
    LoopMix,
    PathWord,
    TensorElement,
    cyclic_reduce,
    identity_word,
)


class BracketError(ValueError):
    pass


class AmbiguousPathError(BracketError):
    pass


def _scal(x) -> SpectralScalar:
    if isinstance(x, SpectralScalar):
        return x
    return SpectralScalar.from_fraction(Fraction(x))


class BracketParams:
    """The six local constants; the bracket of boundary paths only sees
    W = w12 + w13 - w23 and B = b12 + b13 - b23."""

    __slots__ = ("w12", "w13", "w23", "b12", "b13", "b23")

    def __init__(self, w12=0, w13=0, w23=0, b12=0, b13=0, b23=0):
        self.w12 = _scal(w12)
        self.w13 = _scal(w13)
        self.w23 = _scal(w23)
        self.b12 = _scal(b12)
        self.b13 = _scal(b13)
        self.b23 = _scal(b23)

    @classmethod
    def standard(cls) -> "BracketParams":
        """Twisted ribbon choice: W = 1/2, B = -1/2 via w12 = 1/2, b12 = -1/2."""
        return cls(w12=Fraction(1, 2), b12=Fraction(-1, 2))

    @property
    def W(self) -> SpectralScalar:
        return self.w12 + self.w13 - self.w23

    @property
    def B(self) -> SpectralScalar:
        return self.b12 + self.b13 - self.b23

    def as_dict(self) -> dict:
        return {k: str(getattr(self, k)) for k in self.__slots__}


class NetworkSystem:
    """Generator system backed by a network (or torus context).

    Tokens are Edge objects; expansion turns a label word into the unique
    underlying edge path, including the silent identity-labeled edges.
    """

    def __init__(self, ctx):
        self.ctx = ctx
        self._jump_from = {snk: src for snk, src in ctx.seam_jumps()}
        self._vinfo = {
            v.id: v for v in ctx.internal if v.color in ("white", "black")
        }
        self._expand_cache: dict = {}

    def rep(self, vertex_id: str) -> str:
        return self.ctx.rep(vertex_id)

    # -- expansion ---------------------------------------------------------

    def expand(self, word: PathWord) -> tuple:
        got = self._expand_cache.get(word)
        if got is None:
            got = self._expand(word)
            self._expand_cache[word] = got
        return got

    def _expand(self, word: PathWord) -> tuple:
        if not word.labels:
            return ()
        edges = []
        try:
            named = [self.ctx.label_to_edge[lab] for lab in word.labels]
        except KeyError as exc:
            raise BracketError(f"unknown generator label {exc} in {word}") from exc
        edges.extend(self._back_chain(named[0].tail))
        edges.append(named[0])
        for prev, nxt in zip(named, named[1:]):
            edges.extend(self._idpath(prev.head, nxt.tail))
            edges.append(nxt)
        edges.extend(self._fwd_chain(named[-1].head))
        if self.rep(edges[0].tail) != word.source or self.rep(edges[-1].head) != word.target:
            raise BracketError(
                f"word {word} does not anchor at its endpoints"
                f" ({self.rep(edges[0].tail)} -> {self.rep(edges[-1].head)})"
            )
        return tuple(edges)

    def _back_chain(self, v: str) -> list:
        out = []
        seen = {v}
        while True:
            ids = [e for e in self.ctx.in_edges.get(v, ()) if e.is_identity()]
            if not ids:
                return out[::-1]
            if len(ids) > 1:
                raise AmbiguousPathError(f"multiple identity edges into {v}")
            e = ids[0]
            if e.tail in seen:
                raise AmbiguousPathError(f"identity cycle at {e.tail}")
            out.append(e)
            v = e.tail
            seen.add(v)

    def _fwd_chain(self, v: str) -> list:
        out = []
        seen = {v}
        while True:
            ids = [e for e in self.ctx.out_edges.get(v, ()) if e.is_identity()]
            if not ids:
                return out
            if len(ids) > 1:
                raise AmbiguousPathError(f"multiple identity edges out of {v}")
            e = ids[0]
            if e.head in seen:
                raise AmbiguousPathError(f"identity cycle at {e.head}")
            out.append(e)
            v = e.head
            seen.add(v)

    def _idpath(self, u: str, v: str) -> list:
        """The unique directed identity path u -> v (seam jumps allowed)."""
        found: list = []

        def walk(cur, path, seen):
            if len(found) > 1:
                return
            if cur == v:
                found.append(list(path))
                return
            nxt = self._jump_from.get(cur)
            if nxt is not None and nxt not in seen:
                walk(nxt, path, seen | {nxt})
            for e in self.ctx.out_edges.get(cur, ()):
                if e.is_identity() and e.head not in seen:
                    path.append(e)
                    walk(e.head, path, seen | {e.head})
                    path.pop()

        walk(u, [], {u})
        if not found:
            raise BracketError(f"no identity path from {u} to {v}")
        if len(found) > 1:
            raise AmbiguousPathError(f"ambiguous identity path from {u} to {v}")
        return found[0]

    # -- slicing -----------------------------------------------------------

    def word_of(self, tokens, source: str, target: str) -> PathWord:
        labels = tuple(e.label for e in tokens if not e.is_identity())
        return PathWord(source, target, labels)

    def _edge_word(self, *edges) -> PathWord:
        labels = tuple(e.label for e in edges if not e.is_identity())
        return PathWord(self.rep(edges[0].tail), self.rep(edges[-1].head), labels)

    # -- local rules ---------------------------------------------------------

    def pair_bracket(self, e, f, params: BracketParams) -> TensorElement | None:
        """Sum of local-rule contributions over all shared colored vertices.

        Output lives in Hom(s(f), t(e)) (x) Hom(s(e), t(f)); the self-bracket
        of a generator is zero.
        """
        if e.id == f.id:
            return None
        slot1 = (self.rep(f.tail), self.rep(e.head))
        slot2 = (self.rep(e.tail), self.rep(f.head))
        out = TensorElement.zero(slot1, slot2)
        hit = False
        for vid in {e.tail, e.head} & {f.tail, f.head}:
            v = self._vinfo.get(vid)
            if v is None:
                continue
            contrib = self._vertex_rule(v, e, f, params)
            if contrib is not None:
                out = out + contrib
                hit = True
        if not hit:
            return None
        return out

    def _vertex_rule(self, v, e, f, params: BracketParams) -> TensorElement | None:
        pe, pf = v.ccw.index(e.id), v.ccw.index(f.id)
        if pe == pf:
            raise BracketError(f"edges {e.id}, {f.id} coincide at {v.id}")
        if pe > pf:
            flipped = self._vertex_rule(v, f, e, params)
            return None if flipped is None else -flipped.tau()
        slot = (pe, pf)
        edges = [self.ctx.edge_by_id[i] for i in v.ccw]
        one_v = Element.one(self.rep(v.id))
        if v.color == "white":
            x1, x2, x3 = edges
            if slot == (0, 1):
                coeff, left, right = params.w12, self._elem(x1), self._elem(x2)
            elif slot == (0, 2):
                coeff, left, right = params.w13, self._elem(x3, x1), one_v
            else:
                coeff, left, right = params.w23, self._elem(x3, x2), one_v
        else:
            y1, y2, y3 = edges
            if slot == (0, 1):
                coeff, left, right = params.b12, self._elem(y2), self._elem(y1)
            elif slot == (0, 2):
                coeff, left, right = params.b13, one_v, self._elem(y1, y3)
            else:
                coeff, left, right = params.b23, one_v, self._elem(y2, y3)
        if coeff.is_zero():
            return TensorElement.zero(
                (left.source, left.target), (right.source, right.target)
            )
        return TensorElement.outer(left, right, coeff)

    def _elem(self, *edges) -> Element:
        return Element.of_word(self._edge_word(*edges))


class FreeSystem:
    """Generator system on abstract free generators with a fixed bracket table.

    Used for the formal contexts where the generator brackets do not come
    from a graph (they are prescribed by an r-matrix instead).
    """

    def __init__(self, generators: dict, table: dict):
        """generators: label -> (source, target); table: (lab1, lab2) -> TensorElement."""
        self.generators = dict(generators)
        self.table = dict(table)
        self._tokens = {
            lab: _FreeToken(lab, st[0], st[1]) for lab, st in self.generators.items()
        }

    def rep(self, obj: str) -> str:
        return obj

    def expand(self, word: PathWord) -> tuple:
        try:
            return tuple(self._tokens[lab] for lab in word.labels)
        except KeyError as exc:
            raise BracketError(f"unknown generator {exc} in {word}") from exc

    def word_of(self, tokens, source: str, target: str) -> PathWord:
        return PathWord(source, target, tuple(t.label for t in tokens))

    def pair_bracket(self, t1, t2, params=None) -> TensorElement | None:
        return self.table.get((t1.label, t2.label))


class _FreeToken:
    __slots__ = ("label", "tail", "head")

    def __init__(self, label, tail, head):
        self.label = label
        self.tail = tail
        self.head = head

    def is_identity(self):
        return False

    @property
    def id(self):
        return self.label


class Engine:
    """Leibniz-expansion evaluator of the double bracket over a generator system."""

    def __init__(self, system, params: BracketParams | None = None):
        self.system = system
        self.params = params if params is not None else BracketParams.standard()
        self._word_cache: dict = {}

    # -- word-level bracket -----------------------------------------------

    def db_words(self, wf: PathWord, wg: PathWord) -> TensorElement:
        key = (wf, wg)
        got = self._word_cache.get(key)
        if got is None:
            got = self._db_words(wf, wg)
            self._word_cache[key] = got
        return got

    def _db_words(self, wf: PathWord, wg: PathWord) -> TensorElement:
        sys = self.system
        ef = sys.expand(wf)
        eg = sys.expand(wg)
        out = TensorElement.zero((wg.source, wf.target), (wf.source, wg.target))
        for i, tf in enumerate(ef):
            for j, tg in enumerate(eg):
                br = sys.pair_bracket(tf, tg, self.params)
                if br is None or br.is_zero():
                    continue
                gpre = sys.word_of(eg[:j], wg.source, br.slot1[0])
                fpost = sys.word_of(ef[i + 1 :], br.slot1[1], wf.target)
                fpre = sys.word_of(ef[:i], wf.source, br.slot2[0])
                gpost = sys.word_of(eg[j + 1 :], br.slot2[1], wg.target)
                for (u1, u2), c in br.terms.items():
                    out._add_term(
                        gpre.concat(u1).concat(fpost),
                        fpre.concat(u2).concat(gpost),
                        c,
                    )
        return out

    # -- element-level bracket ----------------------------------------------

    def db(self, f: Element, g: Element) -> TensorElement:
        out = TensorElement.zero((g.source, f.target), (f.source, g.target))
        for wf, cf in f.terms.items():
            for wg, cg in g.terms.items():
                c = cf * cg
                if c.is_zero():
                    continue
                br = self.db_words(wf, wg)
                for key, cv in br.terms.items():
                    out._add_term(key[0], key[1], cv * c)
        return out

    # -- induced brackets -----------------------------------------------------

    def h0(self, h, g):
        """{h, g} = mu o <<h, g>>; every word of h must be a loop."""
        h_terms = h.terms if isinstance(h, (Element, LoopMix)) else dict(h)
        if isinstance(g, LoopMix):
            out_mix = LoopMix()
            for wg, cg in g.terms.items():
                part = self._h0_into(h_terms, wg, cg)
                for w, c in part.terms.items():
                    out_mix._add_term(w, c)
            return out_mix
        out = Element.zero(g.source, g.target)
        for wg, cg in g.terms.items():
            part = self._h0_into(h_terms, wg, cg)
            out = out + part
        return out

    def _h0_into(self, h_terms: dict, wg: PathWord, cg) -> Element:
        out = Element.zero(wg.source, wg.target)
        acc = out.terms
        for wh, ch in h_terms.items():
            if not wh.is_loop():
                raise BracketError(f"H0 bracket needs a loop, got {wh}")
            c = ch * cg
            if c.is_zero():
                continue
            br = self.db_words(wh, wg)
            for (u1, u2), cv in br.terms.items():
                w = u1.concat(u2)
                s = acc.get(w, ZERO) + cv * c
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
        return out

    def lie(self, x, y) -> CyclicElement:
        """<x, y> = cyclic reduction of the H0 bracket of representatives."""
        hx = self._as_loop_mix(x)
        hy = self._as_loop_mix(y)
        return cyclic_reduce(self.h0(hx, hy))

    def _as_loop_mix(self, x) -> LoopMix:
        if isinstance(x, LoopMix):
            return x
        if isinstance(x, Element):
            return LoopMix.of_element(x)
        if isinstance(x, CyclicElement):
            mix = LoopMix()
            for cw, c in x.terms.items():
                mix._add_term(self.representative(cw), c)
            return mix
        raise TypeError(f"cannot take loops from {type(x).__name__}")

    def representative(self, cw: CyclicWord) -> PathWord:
        if not cw.labels:
            return identity_word(cw.base)
        return self._rep_word(cw.labels)

    def _rep_word(self, labels: tuple) -> PathWord:
        sys = self.system
        if isinstance(sys, FreeSystem):
            src = sys.generators[labels[0]][0]
            tgt = sys.generators[labels[-1]][1]
        else:
            src = sys.rep(sys.ctx.label_to_edge[labels[0]].tail)
            tgt = sys.rep(sys.ctx.label_to_edge[labels[-1]].head)
        if src != tgt:
            raise BracketError(f"cyclic word {labels} does not close up")
        return PathWord(src, tgt, labels)


def db_direct(system: NetworkSystem, wf: PathWord, wg: PathWord, W, B) -> TensorElement:
    """Merge/split evaluation: sum over shared vertices of alpha * (g'f'' (x) f'g'').

    Only boundary-to-boundary orientation-respecting paths are accepted.  At
    a black merge alpha is +B when f arrives on the first ccw slot and -B on
    the second; at a white split +W/-W by f's outgoing slot (the sign flip is
    forced by skew-symmetry).  The white-merge/black-split rows cannot occur
    for orientation-respecting paths on valid networks.
    """
    W, B = _scal(W), _scal(B)
    ctx = system.ctx
    ef = system.expand(wf)
    eg = system.expand(wg)
    for w, edges in ((wf, ef), (wg, eg)):
        if edges:
            tail_v = ctx.vertex_by_id[edges[0].tail]
            head_v = ctx.vertex_by_id[edges[-1].head]
            for v in (tail_v, head_v):
                if not hasattr(v, "role"):
                    raise BracketError(f"{w} is not a boundary-to-boundary path")
    out = TensorElement.zero((wg.source, wf.target), (wf.source, wg.target))
    # vertex -> (in_edge_index, out_edge_index) per path
    passes_f = _passes(ef)
    passes_g = _passes(eg)
    colored = {v.id: v for v in ctx.internal if v.color in ("white", "black")}
    for vid, (fi, fo) in passes_f.items():
        v = colored.get(vid)
        if v is None or vid not in passes_g:
            continue
        gi, go = passes_g[vid]
        fin, fout = ef[fi], ef[fo]
        gin, gout = eg[gi], eg[go]
        merge = fin.id != gin.id and fout.id == gout.id
        split = fin.id == gin.id and fout.id != gout.id
        if not (merge or split):
            continue
        if merge:
            # white merge cannot occur for orientation-respecting paths
            sign = 1 if v.ccw.index(fin.id) == 0 else -1
            alpha = (B if v.color == "black" else W) * sign
        else:
            # black split cannot occur for orientation-respecting paths;
            # the first argument exiting on the first ccw slot carries +W
            sign = 1 if v.ccw.index(fout.id) == 0 else -1
            alpha = (W if v.color == "white" else B) * sign
        cut_f, cut_g = fo, go  # f = f'_V f''_V with the out edge opening f''
        fpre = system.word_of(ef[:cut_f], wf.source, system.rep(vid))
        fpost = system.word_of(ef[cut_f:], system.rep(vid), wf.target)
        gpre = system.word_of(eg[:cut_g], wg.source, system.rep(vid))
        gpost = system.word_of(eg[cut_g:], system.rep(vid), wg.target)
        out._add_term(gpre.concat(fpost), fpre.concat(gpost), alpha)
    return out


def _passes(edges) -> dict:
    """vertex id -> (index of incoming edge, index of outgoing edge)."""
    out = {}
    for i in range(len(edges) - 1):
        # consecutive edges meet at head(e_i); seam jumps never sit at a
        # colored vertex, so only the direct junction matters here
        if edges[i].head == edges[i + 1].tail:
            out[edges[i].head] = (i, i + 1)
    return out


class BracketTable:
    """Full bracket of two matrices: cell ((i,j),(k,l)) = <<x_ij, y_kl>>.

    Tables multiply like the box-tensor of two matrices over the tensor
    algebra: (T S)[(i,j),(k,l)] = sum_{p,q} T[(i,p),(k,q)] S[(p,j),(q,l)].
    """

    __slots__ = ("row_shape", "col_shape", "cells")

    def __init__(self, row_shape: tuple, col_shape: tuple, cells: dict):
        self.row_shape = row_shape  # (rows of X, cols of X)
        self.col_shape = col_shape  # (rows of Y, cols of Y)
        self.cells = cells

    def __getitem__(self, key):
        return self.cells[key]

    def keys(self):
        return self.cells.keys()

    def __sub__(self, other: "BracketTable") -> "BracketTable":
        if self.row_shape != other.row_shape or self.col_shape != other.col_shape:
            raise BracketError("bracket table shapes differ")
        cells = {}
        for key in self.cells:
            cells[key] = self.cells[key] - other.cells[key]
        return BracketTable(self.row_shape, self.col_shape, cells)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.cells.values())

    def defects(self) -> list:
        return [key for key, c in sorted(self.cells.items()) if not c.is_zero()]

    def __eq__(self, other):
        return (
            isinstance(other, BracketTable)
            and self.row_shape == other.row_shape
            and self.col_shape == other.col_shape
            and self.cells == other.cells
        )

    def __mul__(self, other: "BracketTable") -> "BracketTable":
        if self.row_shape[1] != other.row_shape[0] or self.col_shape[1] != other.col_shape[0]:
            raise BracketError("bracket table product shape mismatch")
        rows = (self.row_shape[0], other.row_shape[1])
        cols = (self.col_shape[0], other.col_shape[1])
        cells: dict = {}
        for i in range(1, rows[0] + 1):
            for j in range(1, rows[1] + 1):
                for k in range(1, cols[0] + 1):
                    for l in range(1, cols[1] + 1):
                        acc = None
                        for p in range(1, self.row_shape[1] + 1):
                            for q in range(1, self.col_shape[1] + 1):
                                a = self.cells[((i, p), (k, q))]
                                b = other.cells[((p, j), (q, l))]
                                if a.is_zero() or b.is_zero():
                                    continue
                                term = a * b
                                acc = term if acc is None else acc + term
                        if acc is None:
                            acc = _zero_cell(self, other, i, j, k, l)
                        cells[((i, j), (k, l))] = acc
        return BracketTable(rows, cols, cells)


def _zero_cell(t1: BracketTable, t2: BracketTable, i, j, k, l) -> TensorElement:
    a = t1.cells[((i, 1), (k, 1))]
    b = t2.cells[((1, j), (1, l))]
    return TensorElement.zero((a.slot1[0], b.slot1[1]), (a.slot2[0], b.slot2[1]))


def matrix_db(engine: Engine, X: ElementMatrix, Y: ElementMatrix) -> BracketTable:
    """Cellwise double bracket of two matrices over the same category."""
    cells = {}
    for i in range(1, X.nrows + 1):
        for j in range(1, X.ncols + 1):
            for k in range(1, Y.nrows + 1):
                for l in range(1, Y.ncols + 1):
                    cells[((i, j), (k, l))] = engine.db(X[i, j], Y[k, l])
    return BracketTable((X.nrows, X.ncols), (Y.nrows, Y.ncols), cells)


def matrix_db_spectral(engine: Engine, B: ElementMatrix, var2: str = "mu") -> BracketTable:
    """<<B(lam), B(var2)>>: the second copy carries its spectral data in var2."""
    return matrix_db(engine, B, B.substitute({"lam": var2}))


def table_LR(X: ElementMatrix, Y: ElementMatrix) -> BracketTable:
    """X_L boxtimes Y_R: cell ((i,j),(k,l)) = X_ij (x) Y_kl."""
    cells = {}
    for i in range(1, X.nrows + 1):
        for j in range(1, X.ncols + 1):
            for k in range(1, Y.nrows + 1):
                for l in range(1, Y.ncols + 1):
                    cells[((i, j), (k, l))] = TensorElement.outer(X[i, j], Y[k, l])
    return BracketTable((X.nrows, X.ncols), (Y.nrows, Y.ncols), cells)


def table_RL(X: ElementMatrix, Y: ElementMatrix) -> BracketTable:
    """X_R boxtimes Y_L: cell ((i,j),(k,l)) = Y_kl (x) X_ij."""
    cells = {}
    for i in range(1, X.nrows + 1):
        for j in range(1, X.ncols + 1):
            for k in range(1, Y.nrows + 1):
                for l in range(1, Y.ncols + 1):
                    t = TensorElement.outer(Y[k, l], X[i, j])
                    cells[((i, j), (k, l))] = t
    return BracketTable((X.nrows, X.ncols), (Y.nrows, Y.ncols), cells)


def matrix_power_db(engine: Engine, X: ElementMatrix, k: int, l: int) -> BracketTable:
    """<<X^k, Y^l>> with Y = X(mu), via the matrix double Leibniz expansion."""
    if X.row_objs != X.col_objs:
        raise BracketError("matrix powers need a square matrix over one object list")
    Y = X.substitute({"lam": "mu"})
    core = matrix_db(engine, X, Y)
    Xp = [ElementMatrix.identity(X.row_objs)]
    Yp = [ElementMatrix.identity(Y.row_objs)]
    for _ in range(max(k, l)):
        Xp.append(Xp[-1] * X)
        Yp.append(Yp[-1] * Y)
    total: BracketTable | None = None
    for i in range(k):
        for j in range(l):
            part = table_RL(Xp[i], Yp[j]) * core * table_LR(Xp[k - 1 - i], Yp[l - 1 - j])
            total = part if total is None else _table_add(total, part)
    if total is None:
        raise BracketError("powers must be at least 1")
    return total


def _table_add(a: BracketTable, b: BracketTable) -> BracketTable:
    cells = {key: a.cells[key] + b.cells[key] for key in a.cells}
    return BracketTable(a.row_shape, a.col_shape, cells)


def generator_bracket(net, params: BracketParams, e_id: str, f_id: str) -> TensorElement:
    """Local bracket of two edges: sum of vertex-rule contributions."""
    sys = NetworkSystem(net)
    try:
        e = net.edge_by_id[e_id]
        f = net.edge_by_id[f_id]
    except KeyError as exc:
        raise BracketError(f"unknown edge id {exc}") from exc
    got = sys.pair_bracket(e, f, params)
    if got is None:
        slot1 = (sys.rep(f.tail), sys.rep(e.head))
        slot2 = (sys.rep(e.tail), sys.rep(f.head))
        return TensorElement.zero(slot1, slot2)
    return got

    def _anchor(self, label):  # pragma: no cover - helper kept for clarity
        raise NotImplementedError
