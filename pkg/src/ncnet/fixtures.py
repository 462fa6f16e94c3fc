"""Bundled example networks and seeded random network generators.

Conventions for elementary pieces (matching the displayed measurement
matrices):

* white split (one in, two out): ccw = (x1, x2, x3) with x3 the incoming
  edge; x2 exits to the upper sink, x1 to the lower one, so B = (x3x2, x3x1).
* black merge (two in, one out): ccw = (y1, y2, y3) with y3 the outgoing
  edge; y1 comes from the upper source, so B = (y1y3; y2y3)^T.

Random networks are stacks of layers glued sink-to-source: a layer is a
single white/black piece among parallel identity wires, or (on a cylinder)
a rotation layer whose wrapping wire crosses the cut once.
"""

from __future__ import annotations

import random

from .network import BoundaryVertex, Edge, InternalVertex, Network, glue_chain


def gamma_white(prefix: str = "", surface: str = "disk") -> Network:
    """Single white vertex: source p3, sinks p2 (upper), p1 (lower)."""
    p = prefix
    return Network(
        surface,
        [
            BoundaryVertex(f"{p}p3", "source", 1),
            BoundaryVertex(f"{p}p2", "sink", 1),
            BoundaryVertex(f"{p}p1", "sink", 2),
        ],
        [InternalVertex(f"{p}w0", "white", (f"{p}x1", f"{p}x2", f"{p}x3"))],
        [
            Edge(f"{p}x3", f"{p}p3", f"{p}w0", f"{p}x3"),
            Edge(f"{p}x2", f"{p}w0", f"{p}p2", f"{p}x2"),
            Edge(f"{p}x1", f"{p}w0", f"{p}p1", f"{p}x1"),
        ],
    )


def gamma_black(prefix: str = "", surface: str = "disk", cut_on_y2: int = 0) -> Network:
    """Single black vertex: sources q1 (upper), q2; sink q3.

    With cut_on_y2 = 1 and the sources swapped this is the cut-crossing
    variant; see gamma_black_cut.
    """
    p = prefix
    return Network(
        surface,
        [
            BoundaryVertex(f"{p}q1", "source", 1),
            BoundaryVertex(f"{p}q2", "source", 2),
            BoundaryVertex(f"{p}q3", "sink", 1),
        ],
        [InternalVertex(f"{p}b0", "black", (f"{p}y1", f"{p}y2", f"{p}y3"))],
        [
            Edge(f"{p}y1", f"{p}q1", f"{p}b0", f"{p}y1"),
            Edge(f"{p}y2", f"{p}q2", f"{p}b0", f"{p}y2", cut_on_y2),
            Edge(f"{p}y3", f"{p}b0", f"{p}q3", f"{p}y3"),
        ],
    )


def gamma_black_cut(prefix: str = "") -> Network:
    """Cylindrical black piece whose y2 edge crosses the cut.

    The crossing permutes the source numbering: source 1 reaches the vertex
    through y2 (picking up lam), source 2 through y1, so B = (lam y2y3; y1y3).
    """
    p = prefix
    return Network(
        "cylinder",
        [
            BoundaryVertex(f"{p}q1", "source", 1),
            BoundaryVertex(f"{p}q2", "source", 2),
            BoundaryVertex(f"{p}q3", "sink", 1),
        ],
        [InternalVertex(f"{p}b0", "black", (f"{p}y1", f"{p}y2", f"{p}y3"))],
        [
            Edge(f"{p}y1", f"{p}q2", f"{p}b0", f"{p}y1"),
            Edge(f"{p}y2", f"{p}q1", f"{p}b0", f"{p}y2", 1),
            Edge(f"{p}y3", f"{p}b0", f"{p}q3", f"{p}y3"),
        ],
    )


def fig1() -> Network:
    """The four-vertex disk network with B = (d, dc; ad, b+adc).

    Boundary stubs are identity-labeled so the measurement matrix carries
    exactly the displayed words.
    """
    return Network(
        "disk",
        [
            BoundaryVertex("u1", "source", 1),
            BoundaryVertex("u2", "source", 2),
            BoundaryVertex("v1", "sink", 1),
            BoundaryVertex("v2", "sink", 2),
        ],
        [
            # i1 (black): stub from source 1 and edge a merge into d
            InternalVertex("i1", "black", ("s1", "a", "d")),
            # i2 (white): stub from source 2 splits into a (upper) and b (lower)
            InternalVertex("i2", "white", ("b", "a", "s2")),
            # i3 (black): c and b merge into the sink-2 stub
            InternalVertex("i3", "black", ("c", "b", "s3")),
            # i4 (white): d splits into the sink-1 stub (upper) and c (lower)
            InternalVertex("i4", "white", ("c", "s4", "d")),
        ],
        [
            Edge("s1", "u1", "i1"),
            Edge("s2", "u2", "i2"),
            Edge("s3", "i3", "v2"),
            Edge("s4", "i4", "v1"),
            Edge("a", "i2", "i1", "a"),
            Edge("b", "i2", "i3", "b"),
            Edge("c", "i4", "i3", "c"),
            Edge("d", "i1", "i4", "d"),
        ],
    )


def wire_layer(width: int, prefix: str, surface: str = "disk") -> Network:
    """Parallel identity wires (glueing against it leaves matrices unchanged)."""
    boundary = []
    edges = []
    for i in range(1, width + 1):
        boundary.append(BoundaryVertex(f"{prefix}s{i}", "source", i))
        boundary.append(BoundaryVertex(f"{prefix}t{i}", "sink", i))
        edges.append(Edge(f"{prefix}w{i}", f"{prefix}s{i}", f"{prefix}t{i}"))
    return Network(surface, boundary, [], edges)


def split_layer(
    width: int, pos: int, prefix: str, surface: str = "disk", named_wires: bool = False
) -> Network:
    """width wires in, width+1 out; a white piece splits wire `pos`."""
    boundary = [BoundaryVertex(f"{prefix}s{i}", "source", i) for i in range(1, width + 1)]
    boundary += [BoundaryVertex(f"{prefix}t{j}", "sink", j) for j in range(1, width + 2)]
    edges = []
    vx = f"{prefix}W"
    for i in range(1, width + 1):
        if i < pos:
            edges.append(_wire(prefix, i, i, named_wires))
        elif i == pos:
            edges.append(Edge(f"{prefix}x3", f"{prefix}s{i}", vx, f"{prefix}x3"))
            edges.append(Edge(f"{prefix}x2", vx, f"{prefix}t{i}", f"{prefix}x2"))
            edges.append(Edge(f"{prefix}x1", vx, f"{prefix}t{i + 1}", f"{prefix}x1"))
        else:
            edges.append(_wire(prefix, i, i + 1, named_wires))
    internal = [InternalVertex(vx, "white", (f"{prefix}x1", f"{prefix}x2", f"{prefix}x3"))]
    return Network(surface, boundary, internal, edges)


def merge_layer(
    width: int, pos: int, prefix: str, surface: str = "disk", named_wires: bool = False
) -> Network:
    """width wires in, width-1 out; a black piece merges wires pos, pos+1."""
    boundary = [BoundaryVertex(f"{prefix}s{i}", "source", i) for i in range(1, width + 1)]
    boundary += [BoundaryVertex(f"{prefix}t{j}", "sink", j) for j in range(1, width)]
    edges = []
    vx = f"{prefix}B"
    for i in range(1, width + 1):
        if i < pos:
            edges.append(_wire(prefix, i, i, named_wires))
        elif i == pos:
            edges.append(Edge(f"{prefix}y1", f"{prefix}s{i}", vx, f"{prefix}y1"))
            edges.append(Edge(f"{prefix}y2", f"{prefix}s{i + 1}", vx, f"{prefix}y2"))
            edges.append(Edge(f"{prefix}y3", vx, f"{prefix}t{i}", f"{prefix}y3"))
        elif i > pos + 1:
            edges.append(_wire(prefix, i, i - 1, named_wires))
    internal = [InternalVertex(vx, "black", (f"{prefix}y1", f"{prefix}y2", f"{prefix}y3"))]
    return Network(surface, boundary, internal, edges)


def rotation_layer(width: int, direction: int, prefix: str) -> Network:
    """Cylindrical twist: every wire shifts one position.

    direction=+1: source 1 wraps past the cut (crossing +1) to sink `width`;
    direction=-1: source `width` wraps backwards (crossing -1) to sink 1.
    """
    boundary = [BoundaryVertex(f"{prefix}s{i}", "source", i) for i in range(1, width + 1)]
    boundary += [BoundaryVertex(f"{prefix}t{j}", "sink", j) for j in range(1, width + 1)]
    edges = []
    for i in range(1, width + 1):
        if direction > 0:
            j = width if i == 1 else i - 1
            cut = 1 if i == 1 else 0
        else:
            j = 1 if i == width else i + 1
            cut = -1 if i == width else 0
        edges.append(Edge(f"{prefix}w{i}", f"{prefix}s{i}", f"{prefix}t{j}", None, cut))
    return Network("cylinder", boundary, [], edges)


def _wire(prefix: str, i: int, j: int, named: bool) -> Edge:
    label = f"{prefix}w{i}" if named else None
    return Edge(f"{prefix}w{i}", f"{prefix}s{i}", f"{prefix}t{j}", label)


def glued_pair(surface: str = "disk") -> Network:
    """Black piece glued into a white piece: a 2x2 measurement matrix."""
    return glue_chain([gamma_black("g1.", surface), gamma_white("g2.", surface)])


def torus_fixture():
    """The glued cylinder used for Lax/involutivity checks (N = 2).

    gamma_black_cut # gamma_white on a cylinder; B(lam) is 2x2 with one
    cut-crossing strand.
    """
    from .network import TorusContext

    net = glue_chain([gamma_black_cut("g1."), gamma_white("g2.", "cylinder")])
    return TorusContext(net)


def random_planar(seed: int, max_internal: int = 6, surface: str = "disk") -> Network:
    """Seeded random acyclic layered network with at most max_internal vertices."""
    rng = random.Random(seed)
    width = rng.randint(1, 3)
    layers = [_entry_layer(width, "L0.", surface, rng)]
    n_internal = 0
    step = 1
    while n_internal < max_internal:
        if rng.random() < 0.25 and n_internal > 0:
            break
        roll = rng.random()
        prefix = f"L{step}."
        if width == 1 or (roll < 0.5 and width < 4):
            pos = rng.randint(1, width)
            layers.append(split_layer(width, pos, prefix, surface))
            width += 1
        else:
            pos = rng.randint(1, width - 1)
            layers.append(merge_layer(width, pos, prefix, surface))
            width -= 1
        n_internal += 1
        step += 1
    return glue_chain(layers)


def random_cylindrical(seed: int, max_internal: int = 5) -> Network:
    """Seeded random cylindrical network with cut crossings in {-1, 0, 1}."""
    rng = random.Random(seed)
    width = rng.randint(1, 3)
    layers = [_entry_layer(width, "L0.", "cylinder", rng)]
    n_internal = 0
    step = 1
    rotations = 0
    while True:
        roll = rng.random()
        prefix = f"L{step}."
        if roll < 0.3 and width >= 2 and rotations < 2:
            layers.append(rotation_layer(width, rng.choice((1, -1)), prefix))
            rotations += 1
        elif n_internal >= max_internal:
            break
        elif width == 1 or (roll < 0.65 and width < 4):
            pos = rng.randint(1, width)
            layers.append(split_layer(width, pos, prefix, "cylinder"))
            width += 1
            n_internal += 1
        else:
            pos = rng.randint(1, width - 1)
            layers.append(merge_layer(width, pos, prefix, "cylinder"))
            width -= 1
            n_internal += 1
        step += 1
        if n_internal >= max_internal and rng.random() < 0.6:
            break
    return glue_chain(layers)


def _entry_layer(width: int, prefix: str, surface: str, rng: random.Random) -> Network:
    # named wires so that the first layer's paths carry generators
    boundary = [BoundaryVertex(f"{prefix}s{i}", "source", i) for i in range(1, width + 1)]
    boundary += [BoundaryVertex(f"{prefix}t{i}", "sink", i) for i in range(1, width + 1)]
    edges = [
        Edge(f"{prefix}e{i}", f"{prefix}s{i}", f"{prefix}t{i}", f"{prefix}e{i}")
        for i in range(1, width + 1)
    ]
    return Network(surface, boundary, [], edges)
