"""JSON encoding of kinds, elements, graphs, diagrams, jobs and reports.

Indices are 0-based on the wire (diagram points, edge indices, vertices),
while the diagram module is 1-based internally.  Complex numbers travel as
[re, im] pairs and matrices as row-major lists of such pairs.  Floats are
written with 17 significant digits so that reports replay bit-for-bit.
"""

from __future__ import annotations

import json

import numpy as np

from .diagrams import Pairing, Permutation
from .graphs import Configuration, Graph, SignedEdge
from .groups import GroupElement, GroupKind
from .spinnet import MixedSignature, WilsonProduct

SCHEMA = "wilsonnet/1"


def kind_to_json(kind):
    return {"family": kind.family, "n": kind.n}


def kind_from_json(obj):
    return GroupKind(obj["family"], int(obj["n"]))


def matrix_to_pairs(mat):
    """Row-major list of [re, im] pairs."""
    flat = np.asarray(mat, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def matrix_from_pairs(pairs, m):
    flat = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    if flat.size != m * m:
        raise ValueError(f"expected {m * m} entries, got {flat.size}")
    return flat.reshape(m, m)


def element_to_json(g):
    return {"kind": kind_to_json(g.kind), "mat": matrix_to_pairs(g.mat)}


def element_from_json(obj):
    kind = kind_from_json(obj["kind"])
    return GroupElement(kind, matrix_from_pairs(obj["mat"], kind.matrix_dim))


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def graph_to_json(graph):
    return {"vertices": graph.num_vertices, "edges": [list(e) for e in graph.edges]}


def graph_from_json(obj):
    return Graph(int(obj["vertices"]), tuple(tuple(e) for e in obj["edges"]))


def loop_to_json(steps):
    return [[int(e), int(s)] for e, s in steps]


def loop_from_json(obj):
    return tuple(SignedEdge(int(e), int(s)) for e, s in obj)


def configuration_to_json(config):
    return {
        "graph": graph_to_json(config.graph),
        "kind": kind_to_json(config.kind),
        "values": [matrix_to_pairs(g.mat) for g in config.elements],
    }


def configuration_from_json(obj):
    graph = graph_from_json(obj["graph"])
    kind = kind_from_json(obj["kind"])
    m = kind.matrix_dim
    elements = tuple(GroupElement(kind, matrix_from_pairs(v, m)) for v in obj["values"])
    return Configuration(graph, elements)


def permutation_to_json(sigma):
    """One-line image list, 0-based."""
    return [img - 1 for img in sigma.images]


def permutation_from_json(obj):
    return Permutation(int(x) + 1 for x in obj)


def pairing_to_json(tau):
    """List of 2-element lists, 0-based."""
    return [[k - 1, l - 1] for k, l in tau.pairs()]


def pairing_from_json(obj):
    return Pairing.from_pairs([(int(k) + 1, int(l) + 1) for k, l in obj])


def signature_to_json(signature):
    return [list(pq) for pq in signature.edges]


def signature_from_json(obj):
    return MixedSignature(tuple(tuple(pq) for pq in obj))


def diagram_to_json(diagram):
    if isinstance(diagram, Permutation):
        return {"perm": permutation_to_json(diagram)}
    if isinstance(diagram, Pairing):
        return {"pairing": pairing_to_json(diagram)}
    raise TypeError(f"not a diagram: {diagram!r}")


def diagram_from_json(obj):
    if "perm" in obj:
        return permutation_from_json(obj["perm"])
    if "pairing" in obj:
        return pairing_from_json(obj["pairing"])
    raise ValueError("diagram must carry a 'perm' or a 'pairing' key")


def wilson_product_to_json(product):
    return {"sign": product.sign, "loops": [loop_to_json(l) for l in product.loops]}


def wilson_product_from_json(obj):
    return WilsonProduct(int(obj["sign"]), tuple(loop_from_json(l) for l in obj["loops"]))


def _format_float(x):
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("reports must not contain NaN or infinite values")
    return format(float(x), ".17g")


def dumps(obj, indent=0, _level=0):
    """Serialize to JSON text with floats at 17 significant digits.

    The standard encoder prints shortest round-trip representations; pinning
    the digit count instead makes replayed reports byte-identical.
    """
    pad = "\n" + " " * (indent * (_level + 1)) if indent else ""
    end = "\n" + " " * (indent * _level) if indent else ""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (
            f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
            for k, v in obj.items()
        )
        return "{" + ",".join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = (f"{pad}{dumps(v, indent, _level + 1)}" for v in obj)
        return "[" + ",".join(items) + end + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
