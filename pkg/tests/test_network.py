"""Network validation, boundary measurement, gluing, decomposition."""

import random

import pytest

from ncnet import fixtures as F
from ncnet.decompose import Residual, decompose, fingerprint, reglue, verify_decompose
from ncnet.network import (
    BoundaryVertex,
    Edge,
    InternalVertex,
    Network,
    NetworkError,
    TorusContext,
    glue,
    glue_chain,
)
from ncnet.serialize import serialize_matrix


def test_fig1_valid_and_measured(fig1):
    assert fig1.validate() == []
    assert serialize_matrix(fig1.boundary_matrix()) == [
        ["1 * d", "1 * d.c"],
        ["1 * a.d", "1 * b + 1 * a.d.c"],
    ]


def test_elementary_measurements(gamma_white, gamma_black, gamma_black_cut):
    assert serialize_matrix(gamma_white.boundary_matrix()) == [["1 * x3.x2", "1 * x3.x1"]]
    assert serialize_matrix(gamma_black.boundary_matrix()) == [["1 * y1.y3"], ["1 * y2.y3"]]
    assert serialize_matrix(gamma_black_cut.boundary_matrix()) == [
        ["lam * y2.y3"],
        ["1 * y1.y3"],
    ]


def test_internal_source_violation():
    net = Network(
        "disk",
        [BoundaryVertex(f"t{i}", "sink", i) for i in (1, 2, 3)],
        [InternalVertex("v", "white", ("e1", "e2", "e3"))],
        [Edge(f"e{i}", "v", f"t{i}", f"e{i}") for i in (1, 2, 3)],
    )
    codes = {v.code for v in net.validate()}
    assert "internal-source" in codes


def test_white_ccw_order_violation():
    # incoming edge first instead of last
    net = Network(
        "disk",
        [
            BoundaryVertex("s", "source", 1),
            BoundaryVertex("t1", "sink", 1),
            BoundaryVertex("t2", "sink", 2),
        ],
        [InternalVertex("v", "white", ("e3", "e1", "e2"))],
        [
            Edge("e3", "s", "v", "e3"),
            Edge("e2", "v", "t1", "e2"),
            Edge("e1", "v", "t2", "e1"),
        ],
    )
    codes = {v.code for v in net.validate()}
    assert "ccw-order" in codes


def test_cut_on_disk_violation():
    net = Network(
        "disk",
        [BoundaryVertex("s", "source", 1), BoundaryVertex("t", "sink", 1)],
        [],
        [Edge("e", "s", "t", "e", cut=1)],
    )
    assert any(v.code == "cut-on-disk" for v in net.validate())


def test_cycle_detection():
    net = Network(
        "disk",
        [BoundaryVertex("s", "source", 1), BoundaryVertex("t", "sink", 1)],
        [
            InternalVertex("a", "black", ("in", "loop2", "loop1")),
            InternalVertex("b", "white", ("out", "loop2", "loop1")),
        ],
        [
            Edge("in", "s", "a", "in"),
            Edge("loop1", "a", "b", "loop1"),
            Edge("loop2", "b", "a", "loop2"),
            Edge("out", "b", "t", "out"),
        ],
    )
    assert any(v.code == "cycle" for v in net.validate())
    with pytest.raises(NetworkError):
        net.boundary_matrix()
    with pytest.raises(NetworkError):
        decompose(net)


def test_gluing_homomorphism_fixture_pair(gamma_black, gamma_white):
    g1 = F.gamma_black("L.")
    g2 = F.gamma_white("R.")
    glued = glue(g1, g2)
    assert glued.validate() == []
    assert fingerprint(glued.boundary_matrix()) == fingerprint(
        g1.boundary_matrix() * _relabel_product(g1, g2)
    )


def _relabel_product(g1, g2):
    # measurement entries of the second piece with endpoints reconciled to
    # the first piece's sink classes, for forming the matrix product
    m2 = g2.boundary_matrix()
    b1 = g1.boundary_matrix()
    from ncnet.words import Element, PathWord

    rows = list(b1.col_objs)
    entries = []
    for i, robj in enumerate(rows):
        row = []
        for j in range(m2.ncols):
            src = m2.row_objs[i]
            e = m2.entries[i][j]
            moved = Element(robj, e.target)
            for w, c in e.terms.items():
                moved.terms[PathWord(robj, w.target, w.labels)] = c
            row.append(moved)
        entries.append(row)
    from ncnet.matrices import ElementMatrix

    return ElementMatrix(rows, m2.col_objs, entries)


def test_gluing_homomorphism_random():
    rng = random.Random(100)
    count = 0
    while count < 25:
        seed = rng.randint(0, 10_000)
        g1 = F.random_planar(seed, max_internal=3)
        g2 = F.random_planar(seed + 50_000, max_internal=3)
        if g1.n_sinks != g2.n_sources:
            continue
        count += 1
        glued = glue(_prefixed(g1, "A"), _prefixed(g2, "B"))
        assert glued.validate() == []
        left = fingerprint(glued.boundary_matrix())
        prod = _matrix_product_fingerprint(g1, g2)
        assert left == prod, seed


def _prefixed(net, tag):
    return Network(
        net.surface,
        [BoundaryVertex(f"{tag}{b.id}", b.role, b.index) for b in net.boundary],
        [
            InternalVertex(f"{tag}{v.id}", v.color, tuple(f"{tag}{e}" for e in v.ccw))
            for v in net.internal
        ],
        [
            Edge(
                f"{tag}{e.id}",
                f"{tag}{e.tail}",
                f"{tag}{e.head}",
                None if e.is_identity() else f"{tag}{e.label}",
                e.cut,
            )
            for e in net.edges
        ],
    )


def _matrix_product_fingerprint(g1, g2):
    """Label-level product of the two measurement matrices."""
    m1 = fingerprint(g1.boundary_matrix())
    m2 = fingerprint(g2.boundary_matrix())
    from ncnet.serialize import parse_scalar

    out = []
    for row in m1:
        out_row = []
        for j in range(len(m2[0])):
            acc = {}
            for k, cell in enumerate(row):
                for labels1, c1 in cell:
                    for labels2, c2 in m2[k][j]:
                        lab = tuple(f"A{x}" for x in labels1) + tuple(
                            f"B{x}" for x in labels2
                        )
                        c = parse_scalar(c1) * parse_scalar(c2)
                        acc[lab] = acc.get(lab) + c if lab in acc else c
            out_row.append(
                tuple(sorted((lab, str(c)) for lab, c in acc.items() if not c.is_zero()))
            )
        out.append(out_row)
    return out


def test_glue_identity_wires(gamma_black):
    wires = F.wire_layer(1, "W.")
    glued = glue(F.gamma_black("g."), wires)
    assert fingerprint(glued.boundary_matrix()) == fingerprint(
        F.gamma_black("g.").boundary_matrix()
    )


def test_glue_arity_mismatch(gamma_black, gamma_white):
    with pytest.raises(NetworkError):
        glue(F.gamma_white("a."), F.gamma_white("b."))  # 2 sinks vs 1 source


def test_torus_single_loop_edge():
    net = Network(
        "cylinder",
        [BoundaryVertex("s1", "source", 1), BoundaryVertex("t1", "sink", 1)],
        [],
        [Edge("e", "s1", "t1", "e", cut=1)],
    )
    ctx = TorusContext(net)
    B = ctx.matrix()
    (word,) = B[1, 1].terms
    assert word.is_loop() and word.labels == ("e",)


def test_torus_requires_cylinder(fig1):
    with pytest.raises(NetworkError):
        TorusContext(fig1)


def test_torus_requires_matching_counts(gamma_black_cut):
    with pytest.raises(NetworkError):
        TorusContext(gamma_black_cut)  # 2 sources vs 1 sink


def test_torus_power_composability(torus):
    B2 = torus.matrix().power(2)
    assert all(w.is_loop() for w in B2[1, 1].terms)


def test_disk_windings_vanish(fig1):
    B = fig1.boundary_matrix()
    for row in B.entries:
        for e in row:
            for c in e.terms.values():
                assert c.degree_in("lam") == 0 and not any(
                    exp[0] for exp in c.den
                )


def test_decompose_base_case(gamma_white):
    records = decompose(gamma_white)
    assert len(records) == 2 and isinstance(records[0], Residual)
    assert verify_decompose(gamma_white) == []


def test_decompose_fig1_four_pieces(fig1):
    records = decompose(fig1)
    pieces = [r for r in records if not isinstance(r, Residual)]
    assert len(pieces) == 4
    assert verify_decompose(fig1) == []


def test_decompose_reglue_fixtures(named_fixtures):
    for name, net in named_fixtures.items():
        assert verify_decompose(net) == [], name


def test_decompose_reglue_random():
    for seed in range(20):
        assert verify_decompose(F.random_planar(seed)) == [], ("planar", seed)
    for seed in range(10):
        assert verify_decompose(F.random_cylindrical(seed)) == [], ("cyl", seed)


def test_random_networks_valid():
    for seed in range(30):
        assert F.random_planar(seed).validate() == []
        assert F.random_cylindrical(seed).validate() == []
