"""Perfect planar and cylindrical networks: validation, measurement, gluing.

A network is combinatorial: directed edges, univalent boundary vertices,
trivalent colored internal vertices (counter-clockwise edge order with the
distinguished edge last), plus 2-valent through-points created by gluing.
Per-edge signed cut crossings stand in for the geometric cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .matrices import ElementMatrix
from .scalars import ONE, SpectralScalar, lam_power
from .words import Element, PathWord

IDENTITY_LABEL = "identity"


class NetworkError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    label: str | None = None  # None or "identity" means silent wire
    cut: int = 0

    def is_identity(self) -> bool:
        return self.label is None or self.label == IDENTITY_LABEL


@dataclass(frozen=True)
class BoundaryVertex:
    id: str
    role: str  # "source" | "sink"
    index: int  # 1-based position within its role


@dataclass(frozen=True)
class InternalVertex:
    id: str
    color: str  # "white" | "black" | "through"
    ccw: tuple  # edge ids, distinguished edge last; through-points list (in, out)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


class Network:
    def __init__(
        self,
        surface: str,
        boundary: Iterable[BoundaryVertex],
        internal: Iterable[InternalVertex],
        edges: Iterable[Edge],
    ):
        self.surface = surface
        self.boundary = list(boundary)
        self.internal = list(internal)
        self.edges = list(edges)
        self._index()

    def _index(self):
        self.edge_by_id = {e.id: e for e in self.edges}
        self.vertex_by_id: dict = {}
        for b in self.boundary:
            self.vertex_by_id[b.id] = b
        for v in self.internal:
            self.vertex_by_id[v.id] = v
        self.label_to_edge = {}
        for e in self.edges:
            if not e.is_identity():
                self.label_to_edge.setdefault(e.label, e)
        self.out_edges: dict = {v: [] for v in self.vertex_by_id}
        self.in_edges: dict = {v: [] for v in self.vertex_by_id}
        for e in self.edges:
            if e.tail in self.out_edges:
                self.out_edges[e.tail].append(e)
            if e.head in self.in_edges:
                self.in_edges[e.head].append(e)
        self.sources = sorted(
            (b for b in self.boundary if b.role == "source"), key=lambda b: b.index
        )
        self.sinks = sorted(
            (b for b in self.boundary if b.role == "sink"), key=lambda b: b.index
        )
        self._build_reps()

    def _build_reps(self):
        """Object classes: identity-labeled edges identify their endpoints."""
        parent = {v: v for v in self.vertex_by_id}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e.is_identity() and e.tail in parent and e.head in parent:
                ra, rb = find(e.tail), find(e.head)
                if ra != rb:
                    lo, hi = sorted((ra, rb))
                    parent[hi] = lo
        self._rep = {v: find(v) for v in parent}

    def rep(self, vertex_id: str) -> str:
        return self._rep[vertex_id]

    # -- queries -------------------------------------------------------------

    @property
    def n_sources(self) -> int:
        return len(self.sources)

    @property
    def n_sinks(self) -> int:
        return len(self.sinks)

    def seam_jumps(self) -> list:
        return []

    def is_acyclic(self) -> bool:
        state: dict = {}

        def visit(v):
            state[v] = 1
            for e in self.out_edges.get(v, ()):
                s = state.get(e.head)
                if s == 1:
                    return False
                if s is None and not visit(e.head):
                    return False
            state[v] = 2
            return True

        return all(state.get(v) == 2 or visit(v) for v in list(self.vertex_by_id))

    # -- validation ------------------------------------------------------------

    def validate(self) -> list:
        """Check all structural invariants; returns a list of violations."""
        out: list[Violation] = []
        seen_ids = set()
        for vid in [b.id for b in self.boundary] + [v.id for v in self.internal]:
            if vid in seen_ids:
                out.append(Violation("dup-vertex", f"duplicate vertex id {vid}"))
            seen_ids.add(vid)
        eids = set()
        labels = set()
        for e in self.edges:
            if e.id in eids:
                out.append(Violation("dup-edge", f"duplicate edge id {e.id}"))
            eids.add(e.id)
            for end in (e.tail, e.head):
                if end not in self.vertex_by_id:
                    out.append(
                        Violation("bad-endpoint", f"edge {e.id} touches unknown vertex {end}")
                    )
            if not e.is_identity():
                if e.label in labels:
                    out.append(
                        Violation("dup-label", f"generator label {e.label} reused on {e.id}")
                    )
                labels.add(e.label)
            if self.surface == "disk" and e.cut != 0:
                out.append(
                    Violation("cut-on-disk", f"edge {e.id} has cut {e.cut} on a disk")
                )
        if self.surface not in ("disk", "cylinder"):
            out.append(Violation("bad-surface", f"unknown surface {self.surface}"))

        for b in self.boundary:
            deg_in = len(self.in_edges.get(b.id, ()))
            deg_out = len(self.out_edges.get(b.id, ()))
            if deg_in + deg_out != 1:
                out.append(
                    Violation("boundary-valence", f"boundary vertex {b.id} is not univalent")
                )
                continue
            if b.role == "source" and deg_out != 1:
                out.append(
                    Violation("role-mismatch", f"source {b.id} has an incoming edge")
                )
            if b.role == "sink" and deg_in != 1:
                out.append(
                    Violation("role-mismatch", f"sink {b.id} has an outgoing edge")
                )
        for role, group in (("source", self.sources), ("sink", self.sinks)):
            want = list(range(1, len(group) + 1))
            got = [b.index for b in group]
            if got != want:
                out.append(
                    Violation("bad-indexing", f"{role} indices {got} are not 1..{len(group)}")
                )

        for v in self.internal:
            ins = [e for e in self.in_edges.get(v.id, ())]
            outs = [e for e in self.out_edges.get(v.id, ())]
            deg = len(ins) + len(outs)
            if v.color == "through":
                if len(ins) != 1 or len(outs) != 1:
                    out.append(
                        Violation("through-valence", f"through-point {v.id} is not 1-in 1-out")
                    )
                continue
            if deg != 3:
                out.append(
                    Violation("valence", f"internal vertex {v.id} has degree {deg}")
                )
                continue
            if not ins:
                out.append(Violation("internal-source", f"internal vertex {v.id} is a source"))
                continue
            if not outs:
                out.append(Violation("internal-sink", f"internal vertex {v.id} is a sink"))
                continue
            if v.color == "white":
                if len(ins) != 1:
                    out.append(
                        Violation("color", f"white vertex {v.id} must have one incoming edge")
                    )
                elif len(v.ccw) != 3 or v.ccw[2] != ins[0].id:
                    out.append(
                        Violation(
                            "ccw-order",
                            f"white vertex {v.id}: incoming edge must be last in ccw",
                        )
                    )
            elif v.color == "black":
                if len(outs) != 1:
                    out.append(
                        Violation("color", f"black vertex {v.id} must have one outgoing edge")
                    )
                elif len(v.ccw) != 3 or v.ccw[2] != outs[0].id:
                    out.append(
                        Violation(
                            "ccw-order",
                            f"black vertex {v.id}: outgoing edge must be last in ccw",
                        )
                    )
            else:
                out.append(Violation("color", f"unknown color {v.color} on {v.id}"))
            if len(v.ccw) == 3 and set(v.ccw) != {e.id for e in ins + outs}:
                out.append(
                    Violation("ccw-edges", f"ccw list of {v.id} does not match incident edges")
                )

        if not self.is_acyclic():
            out.append(Violation("cycle", "network contains an oriented cycle"))
        return out

    def require_valid(self):
        bad = self.validate()
        if bad:
            raise NetworkError("; ".join(str(v) for v in bad))

    # -- boundary measurement ----------------------------------------------------

    def boundary_matrix(self) -> ElementMatrix:
        """b_ij = sum over source_i -> sink_j paths of lam^cut * labels."""
        if not self.is_acyclic():
            raise NetworkError("boundary measurement needs an acyclic network")
        row_objs = [self.rep(b.id) for b in self.sources]
        col_objs = [self.rep(b.id) for b in self.sinks]
        entries = []
        for i, src in enumerate(self.sources):
            reach: dict[str, Element] = {
                src.id: Element.one(row_objs[i])
            }
            for v in self._topo_order():
                cur = reach.get(v)
                if cur is None:
                    continue
                for e in self.out_edges.get(v, ()):
                    stepped = _step(cur, e, self.rep(e.head))
                    prev = reach.get(e.head)
                    reach[e.head] = stepped if prev is None else prev + stepped
            row = []
            for j, snk in enumerate(self.sinks):
                got = reach.get(snk.id)
                row.append(got if got is not None else Element.zero(row_objs[i], col_objs[j]))
            entries.append(row)
        return ElementMatrix(row_objs, col_objs, entries)

    def _topo_order(self) -> list:
        indeg = {v: len(self.in_edges.get(v, ())) for v in self.vertex_by_id}
        queue = sorted(v for v, d in indeg.items() if d == 0)
        order = []
        while queue:
            v = queue.pop(0)
            order.append(v)
            for e in self.out_edges.get(v, ()):
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    queue.append(e.head)
        return order


def _step(elem: Element, e: Edge, new_target: str) -> Element:
    out = Element.zero(elem.source, new_target)
    coeff = lam_power(e.cut) if e.cut else ONE
    for w, c in elem.terms.items():
        labels = w.labels if e.is_identity() else w.labels + (e.label,)
        nw = PathWord(w.source, new_target, labels)
        c2 = c * coeff if e.cut else c
        prev = out.terms.get(nw)
        out.terms[nw] = c2 if prev is None else prev + c2
    out.terms = {w: c for w, c in out.terms.items() if not c.is_zero()}
    return out


def glue(g1: Network, g2: Network) -> Network:
    """Identify g1's sinks with g2's sources (in index order).

    Each identified point becomes a 2-valent through-point; it contributes
    no bracket terms.  Vertex, edge and label namespaces must be disjoint.
    """
    if g1.surface != g2.surface:
        raise NetworkError(f"cannot glue {g1.surface} to {g2.surface}")
    if g1.n_sinks != g2.n_sources:
        raise NetworkError(
            f"arity mismatch: {g1.n_sinks} sinks glued to {g2.n_sources} sources"
        )
    clash = set(g1.vertex_by_id) & set(g2.vertex_by_id)
    if clash:
        raise NetworkError(f"vertex ids shared between pieces: {sorted(clash)}")
    eclash = set(g1.edge_by_id) & set(g2.edge_by_id)
    if eclash:
        raise NetworkError(f"edge ids shared between pieces: {sorted(eclash)}")
    lclash = set(g1.label_to_edge) & set(g2.label_to_edge)
    if lclash:
        raise NetworkError(f"generator labels shared between pieces: {sorted(lclash)}")

    drop = {}  # g2 source vertex id -> junction id (reuses g1 sink id)
    through = []
    for snk, src in zip(g1.sinks, g2.sources):
        drop[src.id] = snk.id
        e_in = g1.in_edges[snk.id][0]
        e_out = g2.out_edges[src.id][0]
        through.append(InternalVertex(snk.id, "through", (e_in.id, e_out.id)))

    edges = list(g1.edges)
    for e in g2.edges:
        tail = drop.get(e.tail, e.tail)
        head = drop.get(e.head, e.head)
        edges.append(Edge(e.id, tail, head, e.label, e.cut))
    boundary = [b for b in g1.boundary if b.role == "source"] + [
        b for b in g2.boundary if b.role == "sink"
    ]
    internal = list(g1.internal) + list(g2.internal) + through
    out = Network(g1.surface, boundary, internal, edges)
    out.glue_map = drop  # piece vertex id -> junction id, for lifting elements
    return out


def glue_chain(pieces: list) -> Network:
    net = pieces[0]
    for nxt in pieces[1:]:
        net = glue(net, nxt)
    return net


class TorusContext:
    """A cylinder with its boundary circles glued, matching sink_j to source_j.

    Only object identification changes: generator brackets stay those of the
    cylinder, while composition and loop detection honor the seam.
    """

    def __init__(self, net: Network):
        if net.surface != "cylinder":
            raise NetworkError("torus gluing needs a cylindrical network")
        if net.n_sources != net.n_sinks:
            raise NetworkError(
                f"torus gluing needs matching boundary counts,"
                f" got {net.n_sources} sources and {net.n_sinks} sinks"
            )
        self.net = net
        self.size = net.n_sources
        parent: dict = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for snk, src in zip(net.sinks, net.sources):
            ra, rb = find(net.rep(snk.id)), find(net.rep(src.id))
            if ra != rb:
                lo, hi = sorted((ra, rb))
                parent[hi] = lo
        self._extra = {v: find(net.rep(v)) for v in net.vertex_by_id}
        self._jumps = [(snk.id, src.id) for snk, src in zip(net.sinks, net.sources)]

    def rep(self, vertex_id: str) -> str:
        return self._extra[vertex_id]

    def seam_jumps(self) -> list:
        return self._jumps

    # delegate the graph structure to the underlying cylinder
    @property
    def surface(self):
        return self.net.surface

    @property
    def edge_by_id(self):
        return self.net.edge_by_id

    @property
    def label_to_edge(self):
        return self.net.label_to_edge

    @property
    def vertex_by_id(self):
        return self.net.vertex_by_id

    @property
    def internal(self):
        return self.net.internal

    @property
    def out_edges(self):
        return self.net.out_edges

    @property
    def in_edges(self):
        return self.net.in_edges

    def lift_element(self, e: Element) -> Element:
        remap = self._lift_obj
        out = Element(remap(e.source), remap(e.target))
        for w, c in e.terms.items():
            nw = PathWord(remap(w.source), remap(w.target), w.labels)
            prev = out.terms.get(nw)
            s = c if prev is None else prev + c
            out.terms[nw] = s
        out.terms = {w: c for w, c in out.terms.items() if not c.is_zero()}
        return out

    def _lift_obj(self, obj: str) -> str:
        # obj is a cylinder class representative, which is itself a vertex id
        return self._extra[obj]

    def matrix(self) -> ElementMatrix:
        """The N x N boundary measurement matrix with seam-composable entries."""
        b = self.net.boundary_matrix()
        row_objs = [self._lift_obj(o) for o in b.row_objs]
        col_objs = [self._lift_obj(o) for o in b.col_objs]
        if row_objs != col_objs:
            raise NetworkError("seam identification failed to square the matrix")
        entries = [[self.lift_element(e) for e in row] for row in b.entries]
        return ElementMatrix(row_objs, col_objs, entries)
