"""Canonical text forms: expressions, measurement matrices, network files.

Expression grammar (bit-stable: terms in shortlex word order, coefficients
as reduced fractions with deglex monomials):

    element :=  "0" | term (" + " term)*
    term    :=  coeff " * " item
    item    :=  word | word " (x) " word | "cyc:" word
    word    :=  "1_" object | label ("." label)*

"(x)" is the tensor separator; a unicode tensor sign is accepted on input.
"""

from __future__ import annotations

import json
import re

from . import _kernel as K
from .network import BoundaryVertex, Edge, InternalVertex, Network, NetworkError
from .scalars import VAR_INDEX, ZERO, SpectralScalar
from .words import (
    CompositionError,
    CyclicElement,
    CyclicWord,
    Element,
    PathWord,
    TensorElement,
)


class ParseError(ValueError):
    pass


# -- expressions -----------------------------------------------------------


def serialize_expression(x) -> str:
    if isinstance(x, Element):
        if not x.terms:
            return "0"
        return " + ".join(f"{c} * {w}" for w, c in x.sorted_terms())
    if isinstance(x, TensorElement):
        if not x.terms:
            return "0"
        return " + ".join(
            f"{c} * {w1} (x) {w2}" for (w1, w2), c in x.sorted_terms()
        )
    if isinstance(x, CyclicElement):
        if not x.terms:
            return "0"
        return " + ".join(f"{c} * {w}" for w, c in x.sorted_terms())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def serialize_matrix(m) -> list:
    return [[serialize_expression(e) for e in row] for row in m.entries]


_MONO_RE = re.compile(r"^(?:(\d+)|(lam|mu|nu|t)(?:\^(\d+))?)$")


def _parse_poly(text: str) -> dict:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    out: dict = {}
    for chunk in re.findall(r"[+-]?[^+-]+", text.replace(" ", "")):
        sign = -1 if chunk.startswith("-") else 1
        body = chunk.lstrip("+-")
        coeff = sign
        exp = [0] * K.NVARS
        for factor in body.split("*"):
            m = _MONO_RE.match(factor)
            if not m:
                raise ParseError(f"bad monomial factor {factor!r}")
            if m.group(1) is not None:
                coeff *= int(m.group(1))
            else:
                exp[VAR_INDEX[m.group(2)]] += int(m.group(3) or 1)
        key = tuple(exp)
        out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}


def parse_scalar(text: str) -> SpectralScalar:
    text = text.strip()
    depth = 0
    split = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            split = i
            break
    if split is None:
        return SpectralScalar(_parse_poly(text), {K.ZERO_EXP: 1})
    return SpectralScalar(_parse_poly(text[:split]), _parse_poly(text[split + 1 :]))


def _parse_word(text: str, resolver) -> PathWord:
    text = text.strip()
    if text.startswith("1_"):
        obj = text[2:]
        return PathWord(obj, obj, ())
    labels = tuple(text.split("."))
    return resolver(labels)


def _network_resolver(net):
    def resolve(labels):
        try:
            first = net.label_to_edge[labels[0]]
            last = net.label_to_edge[labels[-1]]
        except KeyError as exc:
            raise ParseError(f"unknown generator {exc}") from exc
        return PathWord(net.rep(first.tail), net.rep(last.head), labels)

    return resolve


def parse_expression(text: str, net) -> Element | TensorElement | CyclicElement:
    """Parse the canonical grammar; the network resolves word endpoints."""
    text = text.strip().replace("⊗", "(x)")
    resolve = _network_resolver(net)
    if text == "0":
        raise ParseError("a bare zero has no hom-space; parse in context instead")
    terms = text.split(" + ")
    kind = None
    acc: dict = {}
    slots = None
    for term in terms:
        if " * " not in term:
            raise ParseError(f"term {term!r} lacks a coefficient")
        coeff_text, item = term.split(" * ", 1)
        coeff = parse_scalar(coeff_text)
        if "(x)" in item:
            kind = kind or "tensor"
            if kind != "tensor":
                raise ParseError("mixed tensor and plain terms")
            left, right = item.split("(x)")
            w1 = _parse_word(left, resolve)
            w2 = _parse_word(right, resolve)
            slots = ((w1.source, w1.target), (w2.source, w2.target))
            acc[(w1, w2)] = acc.get((w1, w2), ZERO) + coeff
        elif item.strip().startswith("cyc:"):
            kind = kind or "cyclic"
            if kind != "cyclic":
                raise ParseError("mixed cyclic and plain terms")
            w = _parse_word(item.strip()[4:], resolve)
            cw = CyclicWord(w.labels, w.source if not w.labels else None)
            acc[cw] = acc.get(cw, ZERO) + coeff
        else:
            kind = kind or "element"
            if kind != "element":
                raise ParseError("mixed term kinds")
            w = _parse_word(item, resolve)
            slots = (w.source, w.target)
            acc[w] = acc.get(w, ZERO) + coeff
    if kind == "tensor":
        return TensorElement(slots[0], slots[1], acc)
    if kind == "cyclic":
        return CyclicElement(acc)
    return Element(slots[0], slots[1], acc)


# -- network files ------------------------------------------------------------


class NetworkFileError(ValueError):
    pass


def network_to_json(net: Network) -> dict:
    return {
        "surface": net.surface,
        "boundary": sorted(
            (
                {"id": b.id, "role": b.role, "index": b.index}
                for b in net.boundary
            ),
            key=lambda d: d["id"],
        ),
        "internal": sorted(
            (
                {"id": v.id, "color": v.color, "ccw": list(v.ccw)}
                for v in net.internal
            ),
            key=lambda d: d["id"],
        ),
        "edges": sorted(
            (
                {
                    "id": e.id,
                    "tail": e.tail,
                    "head": e.head,
                    "label": e.label if e.label is not None else "identity",
                    "cut": e.cut,
                }
                for e in net.edges
            ),
            key=lambda d: d["id"],
        ),
    }


def dump_network(net: Network) -> str:
    return json.dumps(network_to_json(net), sort_keys=True, indent=2) + "\n"


def network_from_json(doc: dict) -> Network:
    if not isinstance(doc, dict):
        raise NetworkFileError("network document must be a JSON object")
    for key in ("surface", "boundary", "internal", "edges"):
        if key not in doc:
            raise NetworkFileError(f"missing key {key!r}")
    boundary = []
    for i, b in enumerate(doc["boundary"]):
        try:
            boundary.append(BoundaryVertex(str(b["id"]), str(b["role"]), int(b["index"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkFileError(f"boundary[{i}]: {exc}") from exc
    internal = []
    for i, v in enumerate(doc["internal"]):
        try:
            internal.append(
                InternalVertex(str(v["id"]), str(v["color"]), tuple(v["ccw"]))
            )
        except (KeyError, TypeError) as exc:
            raise NetworkFileError(f"internal[{i}]: {exc}") from exc
    edges = []
    seen = set()
    for i, e in enumerate(doc["edges"]):
        try:
            label = e.get("label", "identity")
            edges.append(
                Edge(
                    str(e["id"]),
                    str(e["tail"]),
                    str(e["head"]),
                    None if label in (None, "identity") else str(label),
                    int(e.get("cut", 0)),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkFileError(f"edges[{i}]: {exc}") from exc
        if edges[-1].id in seen:
            raise NetworkFileError(f"edges[{i}]: duplicate edge id {edges[-1].id!r}")
        seen.add(edges[-1].id)
    return Network(str(doc["surface"]), boundary, internal, edges)


def load_network(path: str) -> Network:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise NetworkFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise NetworkFileError(f"{path}: malformed JSON: {exc}") from exc
    return network_from_json(doc)


def parse_network(path: str) -> Network:
    """Load and fully validate; raises on any structural violation."""
    net = load_network(path)
    bad = net.validate()
    if bad:
        raise NetworkError("; ".join(str(v) for v in bad))
    return net
