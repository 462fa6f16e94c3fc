"""Decomposition of a network into elementary one-vertex pieces.

Repeatedly peels a white or black vertex adjacent to the sink boundary (such
a vertex exists for every valid acyclic network; its absence certifies an
oriented cycle).  Cylindrical networks may need the sink numbering rotated
past the cut between peels; those rotations are recorded as wiring layers.
Regluing the recorded layers reproduces the boundary measurement matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .network import (
    BoundaryVertex,
    Edge,
    InternalVertex,
    Network,
    NetworkError,
    glue_chain,
)
from .fixtures import rotation_layer


@dataclass
class WhitePeel:
    pos: int  # upper sink position of the split pair
    width: int  # sink count before the peel (piece layer maps width-1 -> width)
    upper: tuple  # (labels, cut) of the arc into sink pos
    lower: tuple  # (labels, cut) of the arc into sink pos+1


@dataclass
class BlackPeel:
    pos: int
    width: int  # sink count before the peel (piece layer maps width+1 -> width)
    out: tuple  # (labels, cut) of the arc into sink pos


@dataclass
class RotationPeel:
    direction: int  # +1 or -1, matching rotation_layer
    width: int


@dataclass
class Residual:
    width: int
    # per sink position: (source position, labels, cut)
    wires: list


class _Arc:
    __slots__ = ("labels", "cut", "tail")

    def __init__(self, labels, cut, tail):
        self.labels = tuple(labels)
        self.cut = cut
        self.tail = tail  # ("src", pos) or internal vertex id

    def data(self):
        return (self.labels, self.cut)


def decompose(net: Network) -> list:
    """Peel the network into [Residual, piece, piece, ...] in glue order."""
    bad = net.validate()
    if bad:
        raise NetworkError("; ".join(str(v) for v in bad))

    nodes, sink_arcs = _core(net)
    records = []
    rotations_in_a_row = 0
    while nodes:
        step = _find_peel(net, nodes, sink_arcs)
        if step is None:
            if net.surface == "cylinder" and rotations_in_a_row < len(sink_arcs):
                _rotate(sink_arcs, records)
                rotations_in_a_row += 1
                continue
            raise NetworkError(
                "no peelable vertex found; the combinatorial data is not a"
                " planar/cylindrical embedding"
            )
        rotations_in_a_row = 0
        records.append(_apply_peel(step, nodes, sink_arcs))

    wires = []
    for pos, arc in enumerate(sink_arcs, start=1):
        if not isinstance(arc.tail, tuple):
            raise NetworkError("residual network is not a wire layer")
        wires.append((arc.tail[1], arc.labels, arc.cut))
    records.append(Residual(len(sink_arcs), wires))
    return records[::-1]


def _core(net: Network):
    """Contract through-point chains into arcs between colored/boundary nodes."""
    colored = {v.id: v for v in net.internal if v.color in ("white", "black")}
    through = {v.id: v for v in net.internal if v.color == "through"}
    src_pos = {b.id: b.index for b in net.sources}

    arc_of_edge = {}  # first edge id -> _Arc + terminal head info
    head_of_arc = {}

    def walk(e):
        labels = []
        cut = 0
        cur = e
        while True:
            if not cur.is_identity():
                labels.append(cur.label)
            cut += cur.cut
            head = cur.head
            if head in through:
                out_id = through[head].ccw[1]
                cur = net.edge_by_id[out_id]
                continue
            if head in colored or any(b.id == head for b in net.boundary):
                return labels, cut, head
            # identity chains may pass boundary-less vertices only via through
            raise NetworkError(f"arc walk stranded at {head}")

    nodes = {}
    sink_head = {}
    starts = []
    for b in net.sources:
        starts.append((("src", b.index), net.out_edges[b.id][0]))
    for vid, v in colored.items():
        for eid in v.ccw:
            e = net.edge_by_id[eid]
            if e.tail == vid:
                starts.append((vid, e))
    for tail, e in starts:
        labels, cut, head = walk(e)
        arc = _Arc(labels, cut, tail)
        arc_of_edge[e.id] = arc
        head_of_arc[id(arc)] = head

    for vid, v in colored.items():
        ins, outs = [], []
        for eid in v.ccw:
            e = net.edge_by_id[eid]
            if e.tail == vid:
                outs.append(arc_of_edge[eid])
        nodes[vid] = {"color": v.color, "ccw": v.ccw, "outs": outs}

    # incoming arcs per node, in ccw slot order
    incoming = {}
    for arc in arc_of_edge.values():
        head = head_of_arc[id(arc)]
        incoming.setdefault(head, []).append(arc)
    for vid, v in colored.items():
        slots = []
        for eid in v.ccw:
            e = net.edge_by_id[eid]
            if e.tail == vid:
                continue
            # find the arc whose walk terminates through this edge: walk
            # backwards through through-points to the arc's first edge
            slots.append(_arc_ending_with(net, e, arc_of_edge, through))
        nodes[vid]["ins"] = slots

    sink_arcs = []
    for b in net.sinks:
        e = net.in_edges[b.id][0]
        sink_arcs.append(_arc_ending_with(net, e, arc_of_edge, through))
    return nodes, sink_arcs


def _arc_ending_with(net: Network, e: Edge, arc_of_edge, through):
    cur = e
    while cur.tail in through:
        cur = net.edge_by_id[through[cur.tail].ccw[0]]
    return arc_of_edge[cur.id]


def _find_peel(net, nodes, sink_arcs):
    """Type-1 white peel preferred, then type-2 black; smallest id breaks ties."""
    pos_of = {id(a): p for p, a in enumerate(sink_arcs, start=1)}
    whites, blacks = [], []
    for vid in sorted(nodes):
        info = nodes[vid]
        if info["color"] == "white":
            p1 = pos_of.get(id(info["outs"][0]))
            p2 = pos_of.get(id(info["outs"][1]))
            if p1 is None or p2 is None:
                continue
            # ccw slot 0 (x1) must feed the lower sink, slot 1 (x2) the upper;
            # a reversed pair straddles the cut and resolves after rotation
            if p2 + 1 == p1:
                whites.append(("white", vid, p2))
        else:
            p = pos_of.get(id(info["outs"][0]))
            if p is not None:
                blacks.append(("black", vid, p))
    if whites:
        return whites[0]
    if blacks:
        return blacks[0]
    return None


def _apply_peel(step, nodes, sink_arcs):
    kind, vid, pos = step
    info = nodes.pop(vid)
    width = len(sink_arcs)
    if kind == "white":
        upper = sink_arcs[pos - 1]
        lower = sink_arcs[pos]
        alpha = info["ins"][0]
        sink_arcs[pos - 1 : pos + 1] = [alpha]
        return WhitePeel(pos, width, upper.data(), lower.data())
    gamma = sink_arcs[pos - 1]
    alpha, beta = info["ins"]
    sink_arcs[pos - 1 : pos] = [alpha, beta]
    return BlackPeel(pos, width, gamma.data())


def _rotate(sink_arcs, records):
    """Move the cut past one sink: current net = (rotated rest) # R+."""
    width = len(sink_arcs)
    # rest sink i maps to current sink (width if i == 1 else i - 1), and the
    # wrapped strand carries one extra crossing
    last = sink_arcs[-1]
    last.cut -= 1
    sink_arcs[:] = [last] + sink_arcs[:-1]
    records.append(RotationPeel(1, width))


# -- regluing -------------------------------------------------------------------


def reglue(records: list, surface: str) -> Network:
    layers = []
    for idx, rec in enumerate(records):
        prefix = f"R{idx}."
        if isinstance(rec, Residual):
            layers.append(_wire_net(rec, prefix, surface))
        elif isinstance(rec, RotationPeel):
            layers.append(rotation_layer(rec.width, rec.direction, prefix))
        elif isinstance(rec, WhitePeel):
            layers.append(_white_net(rec, prefix, surface))
        else:
            layers.append(_black_net(rec, prefix, surface))
    return glue_chain(layers)


def _chain_edges(prefix, name, tail, head, labels, cut, edges, internal):
    """Materialize an arc as edges with through-points between segments."""
    if not labels:
        edges.append(Edge(f"{prefix}{name}", tail, head, None, cut))
        return f"{prefix}{name}"
    cur = tail
    first_id = None
    for i, lab in enumerate(labels):
        nxt = head if i == len(labels) - 1 else f"{prefix}{name}.t{i}"
        eid = lab
        edges.append(Edge(eid, cur, nxt, lab, cut if i == 0 else 0))
        if first_id is None:
            first_id = eid
        if nxt != head:
            internal.append(InternalVertex(nxt, "through", (eid, labels[i + 1])))
        cur = nxt
    return first_id


def _last_edge_id(prefix, name, labels):
    return f"{prefix}{name}" if not labels else labels[-1]


def _wire_net(rec: Residual, prefix: str, surface: str) -> Network:
    boundary = []
    edges: list = []
    internal: list = []
    n_src = max((w[0] for w in rec.wires), default=0)
    for i in range(1, n_src + 1):
        boundary.append(BoundaryVertex(f"{prefix}s{i}", "source", i))
    for j, (src, labels, cut) in enumerate(rec.wires, start=1):
        boundary.append(BoundaryVertex(f"{prefix}t{j}", "sink", j))
        _chain_edges(prefix, f"w{j}", f"{prefix}s{src}", f"{prefix}t{j}", labels, cut, edges, internal)
    return Network(surface, boundary, internal, edges)


def _white_net(rec: WhitePeel, prefix: str, surface: str) -> Network:
    w_in = rec.width - 1
    boundary = [BoundaryVertex(f"{prefix}s{i}", "source", i) for i in range(1, w_in + 1)]
    boundary += [BoundaryVertex(f"{prefix}t{j}", "sink", j) for j in range(1, rec.width + 1)]
    edges: list = []
    internal: list = []
    vx = f"{prefix}W"
    j = rec.pos
    for i in range(1, w_in + 1):
        if i < j:
            edges.append(Edge(f"{prefix}p{i}", f"{prefix}s{i}", f"{prefix}t{i}"))
        elif i == j:
            e3 = f"{prefix}x3"
            edges.append(Edge(e3, f"{prefix}s{i}", vx))
            up = _chain_edges(prefix, "x2", vx, f"{prefix}t{j}", *rec.upper, edges, internal)
            lo = _chain_edges(prefix, "x1", vx, f"{prefix}t{j + 1}", *rec.lower, edges, internal)
            internal.append(InternalVertex(vx, "white", (lo, up, e3)))
        else:
            edges.append(Edge(f"{prefix}p{i}", f"{prefix}s{i}", f"{prefix}t{i + 1}"))
    return Network(surface, boundary, internal, edges)


def _black_net(rec: BlackPeel, prefix: str, surface: str) -> Network:
    w_in = rec.width + 1
    boundary = [BoundaryVertex(f"{prefix}s{i}", "source", i) for i in range(1, w_in + 1)]
    boundary += [BoundaryVertex(f"{prefix}t{j}", "sink", j) for j in range(1, rec.width + 1)]
    edges: list = []
    internal: list = []
    vx = f"{prefix}B"
    j = rec.pos
    for i in range(1, w_in + 1):
        if i < j:
            edges.append(Edge(f"{prefix}p{i}", f"{prefix}s{i}", f"{prefix}t{i}"))
        elif i == j:
            e1 = f"{prefix}y1"
            e2 = f"{prefix}y2"
            edges.append(Edge(e1, f"{prefix}s{i}", vx))
            edges.append(Edge(e2, f"{prefix}s{i + 1}", vx))
            out = _chain_edges(prefix, "y3", vx, f"{prefix}t{j}", *rec.out, edges, internal)
            internal.append(InternalVertex(vx, "black", (e1, e2, out)))
        elif i > j + 1:
            edges.append(Edge(f"{prefix}p{i}", f"{prefix}s{i}", f"{prefix}t{i - 1}"))
    return Network(surface, boundary, internal, edges)


def fingerprint(matrix) -> list:
    """Object-name-independent form of a measurement matrix for comparison."""
    out = []
    for row in matrix.entries:
        out.append(
            [
                tuple(sorted((w.labels, str(c)) for w, c in e.terms.items()))
                for e in row
            ]
        )
    return out


def verify_decompose(net: Network) -> list:
    """Peel, reglue, and compare measurement matrices; defects on mismatch."""
    records = decompose(net)
    rebuilt = reglue(records, net.surface)
    bad = rebuilt.validate()
    if bad:
        return [("reglue-invalid", "; ".join(str(v) for v in bad))]
    want = fingerprint(net.boundary_matrix())
    got = fingerprint(rebuilt.boundary_matrix())
    if want != got:
        return [("matrix-mismatch", f"{len(records)} records")]
    return []
