"""Free path algebra: concatenation, tensors, cyclic space."""

import random

import pytest

from ncnet.scalars import HALF, ONE, SpectralScalar
from ncnet.words import (
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


def w(src, tgt, *labels):
    return PathWord(src, tgt, tuple(labels))


def el(word, coeff=ONE):
    return Element.of_word(word, coeff)


def test_concat_juxtaposition(fig1):
    # b11 * (leg through c) gives the b12 word of the four-vertex example
    B = fig1.boundary_matrix()
    (wd,) = B[1, 1].terms
    (wdc,) = B[1, 2].terms
    leg = el(w(wd.target, wdc.target, "c"))
    assert el(wd) * leg == el(wdc)


def test_identity_unit_laws():
    f = el(w("A", "B", "p", "q"))
    one_a = Element.one("A")
    one_b = Element.one("B")
    assert one_a * f == f
    assert f * one_b == f


def test_concat_endpoint_mismatch():
    f = el(w("p1", "q1", "a"))
    g = el(w("q2", "q1", "b"))
    with pytest.raises(CompositionError):
        f * g


def test_concat_associative_random():
    rng = random.Random(3)
    objs = ["A", "B", "C", "D"]
    for _ in range(200):
        lens = [rng.randint(0, 6) for _ in range(3)]
        pts = [rng.choice(objs) for _ in range(4)]
        words = []
        for i, L in enumerate(lens):
            labels = tuple(f"g{i}{j}" for j in range(L))
            src, tgt = pts[i], pts[i + 1]
            if L == 0:
                tgt = src
                pts[i + 1] = src
            words.append(el(w(src, tgt, *labels), SpectralScalar.from_int(rng.randint(1, 5))))
        f, g, h = words
        assert (f * g) * h == f * (g * h)


def test_tensor_componentwise_product():
    f = el(w("A", "B", "f"))
    g = el(w("C", "D", "g"))
    h = el(w("B", "B", "h"))
    m = el(w("D", "D", "m"))
    fg = TensorElement.outer(f, g)
    hm = TensorElement.outer(h, m)
    assert fg * hm == TensorElement.outer(f * h, g * m)


def test_tau_involution():
    x = TensorElement.outer(el(w("A", "B", "f")), el(w("C", "D", "g")), HALF)
    assert x.tau().tau() == x
    assert x.tau() == TensorElement.outer(el(w("C", "D", "g")), el(w("A", "B", "f")), HALF)


def test_unit_sandwich():
    a = el(w("A", "B", "a"))
    b = el(w("C", "D", "b"))
    a1 = TensorElement.outer(a, Element.one("C"))
    b1 = TensorElement.outer(Element.one("B"), b)
    assert a1 * b1 == TensorElement.outer(a, b)


def test_sandwich_commutes():
    def lmul1(u, x):
        return TensorElement.outer(u, Element.one(x.slot2[0])) * x

    def lmul2(v, x):
        return TensorElement.outer(Element.one(x.slot1[0]), v) * x

    rng = random.Random(5)
    for _ in range(50):
        x = TensorElement.outer(
            el(w("A", "B", f"p{rng.randint(0, 3)}")),
            el(w("C", "D", f"q{rng.randint(0, 3)}")),
            SpectralScalar.from_int(rng.randint(1, 4)),
        )
        u = el(w("Z", "A", "u"))
        v = el(w("Y", "C", "v"))
        assert lmul1(u, lmul2(v, x)) == lmul2(v, lmul1(u, x))


def test_cyclic_rotation_classes():
    a = w("A", "A", "c", "a", "b")
    b = w("B", "B", "a", "b", "c")
    assert CyclicWord.of_word(a) == CyclicWord.of_word(b)
    assert cyclic_reduce(el(a)) == cyclic_reduce(el(b))


def test_cyclic_fg_equals_gf():
    # f: A -> B and g: B -> A, so both fg and gf are loops
    rng = random.Random(9)
    for _ in range(200):
        k, l = rng.randint(0, 3), rng.randint(0, 3)
        mid = "B" if (k and l) else "A"  # identities force a common base
        f = w("A", mid, *(f"x{i}" for i in range(k))) if k else identity_word("A")
        g = w(mid, "A", *(f"y{i}" for i in range(l))) if l else identity_word(mid)
        fg = el(f) * el(g)
        gf = el(g) * el(f)
        assert cyclic_reduce(fg) == cyclic_reduce(gf)


def test_cyclic_empty_loop_keeps_object():
    one_v = Element.one("V")
    one_w = Element.one("W")
    assert cyclic_reduce(one_v) != cyclic_reduce(one_w)
    assert cyclic_reduce(one_v).terms  # the class of the empty loop at V


def test_cyclic_rejects_non_loops():
    with pytest.raises(CompositionError):
        cyclic_reduce(el(w("A", "B", "a")))


def test_loopmix_rejects_open_words():
    with pytest.raises(CompositionError):
        LoopMix({w("A", "B", "a"): ONE})


def test_element_endpoint_enforcement():
    with pytest.raises(CompositionError):
        Element("A", "B", {identity_word("A"): ONE})
    with pytest.raises(CompositionError):
        PathWord("A", "B", ())


def test_shortlex_term_order():
    e = el(w("A", "A", "a", "d", "c")) + el(w("A", "A", "b"))
    assert str(e) == "1 * b + 1 * a.d.c"
