"""Free path algebra over a small category: words, elements, tensors, loops.

A PathWord is a composable sequence of named generators between two objects
(vertex classes).  Elements are finite scalar-linear combinations of words
sharing one hom-space; TensorElements live in an ordered pair of hom-spaces.
Cut-crossing data never lives on words: it rides in the scalar coefficients
as powers of lam.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .scalars import ONE, ZERO, SpectralScalar

ObjectId = str


class CompositionError(ValueError):
    pass


class PathWord:
    __slots__ = ("source", "target", "labels", "_hash")

    def __init__(self, source: ObjectId, target: ObjectId, labels: tuple = ()):
        if not labels and source != target:
            raise CompositionError(
                f"empty word needs equal endpoints, got {source} -> {target}"
            )
        self.source = source
        self.target = target
        self.labels = labels
        self._hash = hash((source, target, labels))

    def __eq__(self, other):
        return (
            self.labels == other.labels
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.labels)

    def is_loop(self) -> bool:
        return self.source == self.target

    def concat(self, other: "PathWord") -> "PathWord":
        if self.target != other.source:
            raise CompositionError(
                f"cannot compose {self} : {self.target} != {other.source}"
            )
        return PathWord(self.source, other.target, self.labels + other.labels)

    def sort_key(self):
        # shortlex on labels; reproduces the paper's display order (b before adc)
        return (len(self.labels), self.labels, self.source, self.target)

    def __str__(self):
        if not self.labels:
            return f"1_{self.source}"
        return ".".join(self.labels)

    def __repr__(self):
        return f"PathWord({self})"


def identity_word(obj: ObjectId) -> PathWord:
    return PathWord(obj, obj, ())


class Element:
    """Finite linear combination of words in one hom-space Hom(source, target)."""

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: ObjectId, target: ObjectId, terms: dict | None = None):
        self.source = source
        self.target = target
        self.terms: dict[PathWord, SpectralScalar] = {}
        if terms:
            for w, c in terms.items():
                if w.source != source or w.target != target:
                    raise CompositionError(
                        f"word {w} not in Hom({source},{target})"
                    )
                if not c.is_zero():
                    self.terms[w] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(source: ObjectId, target: ObjectId) -> "Element":
        return Element(source, target)

    @staticmethod
    def one(obj: ObjectId) -> "Element":
        return Element(obj, obj, {identity_word(obj): ONE})

    @staticmethod
    def of_word(w: PathWord, coeff: SpectralScalar = ONE) -> "Element":
        return Element(w.source, w.target, {w: coeff})

    # -- linear structure ----------------------------------------------------

    def _check_same_hom(self, other: "Element"):
        if self.source != other.source or self.target != other.target:
            raise CompositionError(
                f"hom-space mismatch: ({self.source},{self.target}) vs"
                f" ({other.source},{other.target})"
            )

    def __add__(self, other: "Element") -> "Element":
        self._check_same_hom(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        e = Element(self.source, self.target)
        e.terms = out
        return e

    def __neg__(self) -> "Element":
        e = Element(self.source, self.target)
        e.terms = {w: -c for w, c in self.terms.items()}
        return e

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        c = c if isinstance(c, SpectralScalar) else SpectralScalar.from_fraction(c)
        if c.is_zero():
            return Element.zero(self.source, self.target)
        e = Element(self.source, self.target)
        e.terms = {w: k * c for w, k in self.terms.items()}
        return e

    def __rmul__(self, c):
        if isinstance(c, (SpectralScalar, int)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        """Concatenation fg (paths compose left to right)."""
        if not isinstance(other, Element):
            if isinstance(other, (SpectralScalar, int)):
                return self.scale(other)
            return NotImplemented
        if self.target != other.source:
            raise CompositionError(
                f"cannot concat Hom({self.source},{self.target}) with"
                f" Hom({other.source},{other.target})"
            )
        out = Element.zero(self.source, other.target)
        acc = out.terms
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1.concat(w2)
                c = c1 * c2
                s = acc.get(w, ZERO) + c
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.source == other.source
            and self.target == other.target
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, mapping) -> "Element":
        e = Element(self.source, self.target)
        e.terms = {w: c.substitute(mapping) for w, c in self.terms.items()}
        return e

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def max_len(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def truncate(self, degree: int) -> "Element":
        e = Element(self.source, self.target)
        e.terms = {w: c for w, c in self.terms.items() if len(w) <= degree}
        return e

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c} * {w}" for w, c in self.sorted_terms())

    def __repr__(self):
        return f"Element({self})"


class TensorElement:
    """Linear combination of word pairs in Hom(s1,t1) (x) Hom(s2,t2)."""

    __slots__ = ("slot1", "slot2", "terms")

    def __init__(self, slot1: tuple, slot2: tuple, terms: dict | None = None):
        self.slot1 = slot1
        self.slot2 = slot2
        self.terms: dict[tuple, SpectralScalar] = {}
        if terms:
            for (w1, w2), c in terms.items():
                if (w1.source, w1.target) != slot1 or (w2.source, w2.target) != slot2:
                    raise CompositionError("tensor term outside declared slots")
                if not c.is_zero():
                    self.terms[(w1, w2)] = c

    @staticmethod
    def zero(slot1: tuple, slot2: tuple) -> "TensorElement":
        return TensorElement(slot1, slot2)

    @staticmethod
    def outer(f: Element, g: Element, coeff: SpectralScalar = ONE) -> "TensorElement":
        t = TensorElement((f.source, f.target), (g.source, g.target))
        for w1, c1 in f.terms.items():
            for w2, c2 in g.terms.items():
                c = c1 * c2 * coeff
                if not c.is_zero():
                    t.terms[(w1, w2)] = t.terms.get((w1, w2), ZERO) + c
        t.terms = {k: v for k, v in t.terms.items() if not v.is_zero()}
        return t

    def _add_term(self, w1: PathWord, w2: PathWord, c: SpectralScalar):
        s = self.terms.get((w1, w2), ZERO) + c
        if s.is_zero():
            self.terms.pop((w1, w2), None)
        else:
            self.terms[(w1, w2)] = s

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if self.slot1 != other.slot1 or self.slot2 != other.slot2:
            raise CompositionError("tensor slot mismatch in addition")
        out = TensorElement(self.slot1, self.slot2)
        out.terms = dict(self.terms)
        for (w1, w2), c in other.terms.items():
            out._add_term(w1, w2, c)
        return out

    def __neg__(self) -> "TensorElement":
        out = TensorElement(self.slot1, self.slot2)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c: SpectralScalar) -> "TensorElement":
        if c.is_zero():
            return TensorElement.zero(self.slot1, self.slot2)
        out = TensorElement(self.slot1, self.slot2)
        out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def __rmul__(self, c):
        if isinstance(c, (SpectralScalar, int)):
            c = c if isinstance(c, SpectralScalar) else SpectralScalar.from_int(c)
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        """Componentwise product (f (x) g)(h (x) m) = fh (x) gm."""
        if not isinstance(other, TensorElement):
            return NotImplemented
        if self.slot1[1] != other.slot1[0] or self.slot2[1] != other.slot2[0]:
            raise CompositionError("tensor slots not componentwise composable")
        out = TensorElement(
            (self.slot1[0], other.slot1[1]), (self.slot2[0], other.slot2[1])
        )
        for (a1, a2), c1 in self.terms.items():
            for (b1, b2), c2 in other.terms.items():
                out._add_term(a1.concat(b1), a2.concat(b2), c1 * c2)
        return out

    def tau(self) -> "TensorElement":
        out = TensorElement(self.slot2, self.slot1)
        out.terms = {(w2, w1): c for (w1, w2), c in self.terms.items()}
        return out

    def __eq__(self, other):
        return (
            isinstance(other, TensorElement)
            and self.slot1 == other.slot1
            and self.slot2 == other.slot2
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.slot1, self.slot2, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, mapping) -> "TensorElement":
        out = TensorElement(self.slot1, self.slot2)
        out.terms = {k: c.substitute(mapping) for k, c in self.terms.items()}
        return out

    def multiply_slots(self) -> Element:
        """The concatenation map mu: f (x) g -> fg (the H0 bracket's last step)."""
        if self.slot1[1] != self.slot2[0]:
            raise CompositionError("slots not composable under mu")
        out = Element.zero(self.slot1[0], self.slot2[1])
        acc = out.terms
        for (w1, w2), c in self.terms.items():
            w = w1.concat(w2)
            s = acc.get(w, ZERO) + c
            if s.is_zero():
                acc.pop(w, None)
            else:
                acc[w] = s
        return out

    def sorted_terms(self) -> list:
        return sorted(
            self.terms.items(),
            key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()),
        )

    def truncate(self, degree: int) -> "TensorElement":
        out = TensorElement(self.slot1, self.slot2)
        out.terms = {
            (w1, w2): c
            for (w1, w2), c in self.terms.items()
            if len(w1) + len(w2) <= degree
        }
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"{c} * {w1} (x) {w2}" for (w1, w2), c in self.sorted_terms()
        )

    def __repr__(self):
        return f"TensorElement({self})"


class CyclicWord:
    """Rotation class of a loop word, stored as the minimal rotation.

    The empty loop keeps its base object (empty loops at distinct objects
    are distinct classes); nonempty label sequences determine their base.
    """

    __slots__ = ("labels", "base", "_hash")

    def __init__(self, labels: tuple, base: ObjectId | None = None):
        if labels:
            rotations = [labels[i:] + labels[:i] for i in range(len(labels))]
            self.labels = min(rotations)
            self.base = None
        else:
            if base is None:
                raise CompositionError("empty cyclic word needs a base object")
            self.labels = ()
            self.base = base
        self._hash = hash((self.labels, self.base))

    @staticmethod
    def of_word(w: PathWord) -> "CyclicWord":
        if not w.is_loop():
            raise CompositionError(f"cyclic reduction of a non-loop word {w}")
        return CyclicWord(w.labels, w.source if not w.labels else None)

    def __eq__(self, other):
        return self.labels == other.labels and self.base == other.base

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.labels)

    def sort_key(self):
        return (len(self.labels), self.labels, self.base or "")

    def __str__(self):
        if not self.labels:
            return f"cyc:1_{self.base}"
        return "cyc:" + ".".join(self.labels)

    def __repr__(self):
        return f"CyclicWord({self})"


class CyclicElement:
    """Linear combination of cyclic words (the trace/loop space)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[CyclicWord, SpectralScalar] = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    self.terms[w] = c

    def _add_term(self, w: CyclicWord, c: SpectralScalar):
        s = self.terms.get(w, ZERO) + c
        if s.is_zero():
            self.terms.pop(w, None)
        else:
            self.terms[w] = s

    def __add__(self, other: "CyclicElement") -> "CyclicElement":
        out = CyclicElement(dict(self.terms))
        for w, c in other.terms.items():
            out._add_term(w, c)
        return out

    def __neg__(self) -> "CyclicElement":
        return CyclicElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "CyclicElement") -> "CyclicElement":
        return self + (-other)

    def scale(self, c: SpectralScalar) -> "CyclicElement":
        return CyclicElement({w: k * c for w, k in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, CyclicElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, degree: int) -> "CyclicElement":
        return CyclicElement(
            {w: c for w, c in self.terms.items() if len(w) <= degree}
        )

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c} * {w}" for w, c in self.sorted_terms())

    def __repr__(self):
        return f"CyclicElement({self})"


class LoopMix:
    """Loop words with coefficients, possibly based at several objects.

    Traces of matrix powers live here: they are sums over hom-spaces
    Hom(i, i) and therefore not a single Element.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[PathWord, SpectralScalar] = {}
        if terms:
            for w, c in terms.items():
                if not w.is_loop():
                    raise CompositionError(f"non-loop word {w} in LoopMix")
                if not c.is_zero():
                    self.terms[w] = c

    @staticmethod
    def of_element(e: Element) -> "LoopMix":
        return LoopMix(dict(e.terms))

    def _add_term(self, w: PathWord, c: SpectralScalar):
        s = self.terms.get(w, ZERO) + c
        if s.is_zero():
            self.terms.pop(w, None)
        else:
            self.terms[w] = s

    def __add__(self, other: "LoopMix") -> "LoopMix":
        out = LoopMix(dict(self.terms))
        for w, c in other.terms.items():
            out._add_term(w, c)
        return out

    def __sub__(self, other: "LoopMix") -> "LoopMix":
        out = LoopMix(dict(self.terms))
        for w, c in other.terms.items():
            out._add_term(w, -c)
        return out

    def scale(self, c: SpectralScalar) -> "LoopMix":
        return LoopMix({w: k * c for w, k in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, LoopMix) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, degree: int) -> "LoopMix":
        return LoopMix({w: c for w, c in self.terms.items() if len(w) <= degree})

    def decompose_by_var(self, name: str) -> dict:
        out: dict[int, LoopMix] = {}
        for w, c in self.terms.items():
            for d, part in c.decompose_by_var(name).items():
                out.setdefault(d, LoopMix())._add_term(w, part)
        return {d: m for d, m in out.items() if not m.is_zero()}

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        terms = sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())
        return " + ".join(f"{c} * {w}" for w, c in terms)


def cyclic_reduce(x) -> CyclicElement:
    """Project loops to the cyclic space, merging rotation-equivalent words.

    Non-loop input raises: the optional convention of sending non-loops to
    zero is deliberately not adopted, so bugs surface loudly.
    """
    if isinstance(x, Element):
        items: Iterable = x.terms.items()
    elif isinstance(x, LoopMix):
        items = x.terms.items()
    else:
        raise TypeError(f"cannot cyclically reduce {type(x).__name__}")
    out = CyclicElement()
    for w, c in items:
        out._add_term(CyclicWord.of_word(w), c)
    return out
