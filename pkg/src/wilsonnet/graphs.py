"""Graphs with oriented edges, gauge configurations, holonomy and Wilson loops.

Vertices and edges are positional: a graph with V vertices uses vertex ids
0..V-1, and edges are an ordered list of (source, target) pairs, duplicates
and self-loops allowed.  A signed edge (e, +1) is traversed forward, (e, -1)
backward.  Holonomy multiplies edge values right to left: the value of the
last step of a path is the leftmost factor of the product.

The bouquet graph with a single vertex and r self-loops (see :func:`bouquet`)
is where loops correspond to words in the edge letters and their inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.optimize

from .groups import GroupElement, membership_check

#: Membership tolerance used when validating configurations.
CONFIG_MEMBERSHIP_TOL = 1e-8


class SignedEdge(NamedTuple):
    edge: int
    sign: int


@dataclass(frozen=True)
class Graph:
    """Finite graph with oriented, repeatable edges and no isolated vertex."""

    num_vertices: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(s), int(t)) for s, t in self.edges))
        if self.num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        touched = set()
        for s, t in self.edges:
            if not (0 <= s < self.num_vertices and 0 <= t < self.num_vertices):
                raise ValueError(f"edge ({s},{t}) out of range for {self.num_vertices} vertices")
            touched.update((s, t))
        if touched != set(range(self.num_vertices)):
            raise ValueError("every vertex must be the source or target of some edge")

    @property
    def num_edges(self):
        return len(self.edges)

    def step_source(self, step):
        e, sign = step
        s, t = self.edges[e]
        return s if sign > 0 else t

    def step_target(self, step):
        e, sign = step
        s, t = self.edges[e]
        return t if sign > 0 else s


def bouquet(r):
    """The graph with one vertex and r self-loop edges."""
    if r < 1:
        raise ValueError("bouquet needs at least one edge")
    return Graph(1, tuple((0, 0) for _ in range(r)))


def check_path(graph, steps):
    """Validate that consecutive steps chain: target of one is source of the next."""
    steps = [SignedEdge(int(e), int(s)) for e, s in steps]
    if not steps:
        raise ValueError("a path must have at least one step")
    for step in steps:
        if not 0 <= step.edge < graph.num_edges:
            raise ValueError(f"edge index {step.edge} out of range")
        if step.sign not in (1, -1):
            raise ValueError(f"step sign must be +1 or -1, got {step.sign}")
    for a, b in zip(steps, steps[1:]):
        if graph.step_target(a) != graph.step_source(b):
            raise ValueError(f"steps {a} and {b} do not chain")
    return steps


def check_loop(graph, steps):
    steps = check_path(graph, steps)
    if graph.step_target(steps[-1]) != graph.step_source(steps[0]):
        raise ValueError("path does not close up into a loop")
    return steps


@dataclass(frozen=True)
class Configuration:
    """One group element per edge of a graph, all of the same kind."""

    graph: Graph
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) != self.graph.num_edges:
            raise ValueError("need exactly one element per edge")
        kinds = {g.kind for g in self.elements}
        if len(kinds) != 1:
            raise ValueError("all edge values must share one group kind")
        for g in self.elements:
            report = membership_check(g, tol=CONFIG_MEMBERSHIP_TOL)
            if not report.passed:
                raise ValueError(f"edge value fails membership:\n{report}")

    @property
    def kind(self):
        return self.elements[0].kind


@dataclass(frozen=True)
class GaugeTransform:
    """One group element per vertex, all of the same kind."""

    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("gauge transform over an empty vertex set")
        kinds = {g.kind for g in self.elements}
        if len(kinds) != 1:
            raise ValueError("all vertex values must share one group kind")

    @property
    def kind(self):
        return self.elements[0].kind


def gauge_apply(phi, config):
    """Act on a configuration: edge e picks up phi_target^{-1} g_e phi_source."""
    graph = config.graph
    if len(phi.elements) != graph.num_vertices:
        raise ValueError("gauge transform does not match the vertex set")
    if phi.kind != config.kind:
        raise ValueError(f"kind mismatch: {phi.kind} vs {config.kind}")
    new = []
    for (s, t), g in zip(graph.edges, config.elements):
        mat = phi.elements[t].mat.conj().T @ g.mat @ phi.elements[s].mat
        new.append(GroupElement(config.kind, mat))
    return Configuration(graph, tuple(new))


def step_matrix(config, step):
    """Matrix carried by a signed edge: the edge value or its inverse."""
    g = config.elements[step[0]]
    return g.mat if step[1] > 0 else g.mat.conj().T


def holonomy(config, steps):
    """Ordered product of edge values along a path, last step leftmost."""
    steps = check_path(config.graph, steps)
    value = np.eye(config.kind.matrix_dim, dtype=np.complex128)
    for step in steps:
        value = step_matrix(config, step) @ value
    return GroupElement(config.kind, value)


def wilson_loop(config, steps):
    """Trace of the loop holonomy in the natural (defining) representation."""
    steps = check_loop(config.graph, steps)
    return complex(np.trace(holonomy(config, steps).mat))


def loops_based_at(graph, base, max_len):
    """All loops of length <= max_len based at ``base``, by length then DFS order."""
    out_steps = [[] for _ in range(graph.num_vertices)]
    for e in range(graph.num_edges):
        for sign in (1, -1):
            step = SignedEdge(e, sign)
            out_steps[graph.step_source(step)].append(step)

    results = []

    def walk(vertex, trail):
        if trail:
            if vertex == base:
                results.append(tuple(trail))
            if len(trail) == max_len:
                return
        for step in out_steps[vertex]:
            trail.append(step)
            walk(graph.step_target(step), trail)
            trail.pop()

    walk(base, [])
    return results


@dataclass(frozen=True)
class SpanningTreeFix:
    """Gauge-fixed configuration, the tree edges set to identity, and the gauge used."""

    configuration: Configuration
    tree_edges: frozenset
    gauge: GaugeTransform


def spanning_tree_fix(config, root=0):
    """Gauge-fix a connected configuration so a spanning tree carries the identity.

    BFS from the root builds phi with phi_root = 1 and, when vertex w is first
    reached from u along signed edge se, phi_w = g_se phi_u.  Applying phi
    makes every tree edge the identity; those entries are snapped to the exact
    identity (they differ from it only by roundoff).  Non-tree edges then
    carry the independent loop holonomies.  All loop traces are preserved.
    """
    graph = config.graph
    if not 0 <= root < graph.num_vertices:
        raise ValueError("root out of range")
    out_steps = [[] for _ in range(graph.num_vertices)]
    for e in range(graph.num_edges):
        for sign in (1, -1):
            step = SignedEdge(e, sign)
            out_steps[graph.step_source(step)].append(step)

    m = config.kind.matrix_dim
    phi = [None] * graph.num_vertices
    phi[root] = np.eye(m, dtype=np.complex128)
    tree = []
    queue = [root]
    while queue:
        u = queue.pop(0)
        for step in out_steps[u]:
            w = graph.step_target(step)
            if phi[w] is None:
                phi[w] = step_matrix(config, step) @ phi[u]
                tree.append(step.edge)
                queue.append(w)
    if any(v is None for v in phi):
        raise ValueError("graph is not connected")

    gauge = GaugeTransform(tuple(GroupElement(config.kind, mat) for mat in phi))
    fixed = gauge_apply(gauge, config)
    tree_set = frozenset(tree)
    eye = GroupElement.identity(config.kind)
    snapped = tuple(eye if e in tree_set else g for e, g in enumerate(fixed.elements))
    return SpanningTreeFix(Configuration(graph, snapped), tree_set, gauge)


def _eig_match_distance(a, b):
    """Largest gap in an optimal matching of the two eigenvalue multisets."""
    ea = np.linalg.eigvals(a)
    eb = np.linalg.eigvals(b)
    cost = np.abs(ea[:, None] - eb[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def _project_to_kind(mat, kind):
    """Nearest group element: unitary polar factor, with family corrections.

    Real kinds keep the real part, SU rescales by a determinant phase, and
    SO flips the overall sign when the dimension is odd and det is -1 (for
    even dimension a det -1 factor cannot be absorbed and is left alone;
    the caller checks membership).  Quaternionic structure is preserved by
    the polar factor, so no correction is needed for Sp.
    """
    if kind.is_real:
        mat = mat.real
    u, _ = scipy.linalg.polar(mat)
    if kind.family == "SU":
        det = np.linalg.det(u)
        u = u * np.exp(-1j * np.angle(det) / kind.n)
    elif kind.family == "SO" and np.linalg.det(u) < 0 and kind.n % 2 == 1:
        u = -u
    return u.astype(np.complex128)


def _sp_structure_project(mat, n):
    """Real-linear projection onto matrices commuting with the quaternionic structure."""
    from .groups import omega

    w = omega(n).astype(np.complex128)
    return 0.5 * (mat - w @ mat.conj() @ w)


def align_configurations(config_a, config_b, vertex, loops, tol=1e-8, max_iter=300):
    """Search for k conjugating every loop holonomy of ``config_a`` to ``config_b``.

    Returns a group element k with h_l(b) = k h_l(a) k^{-1} for every loop in
    ``loops`` (all based at ``vertex``) up to max-entry deviation ``tol``, or
    None when the search finds no such k.  Feasibility is only certified for
    the loop family given; no claim is made about loops outside it.

    Method: eigenvalue multisets are compared per loop as a necessary
    condition, then k is initialized from the polar factor of the sum of
    h_l(b) h_l(a)* and refined by projected gradient steps on the group
    (equivalently, a projected fixed-point averaging).  If the residual
    stalls above ``tol``, a least-squares restart uses the smallest
    eigenvector of the stacked intertwining constraints.
    """
    if config_a.kind != config_b.kind or config_a.graph != config_b.graph:
        raise ValueError("configurations must share a graph and kind")
    kind = config_a.kind
    m = kind.matrix_dim
    for steps in loops:
        steps = check_loop(config_a.graph, steps)
        if config_a.graph.step_source(steps[0]) != vertex:
            raise ValueError("all loops must be based at the given vertex")

    target = [holonomy(config_b, l).mat for l in loops]  # want T = k S k^{-1}
    source = [holonomy(config_a, l).mat for l in loops]
    for t, s in zip(target, source):
        if _eig_match_distance(t, s) > tol:
            return None

    def residual(k):
        kinv = k.conj().T
        return max(float(np.abs(t - k @ s @ kinv).max()) for t, s in zip(target, source))

    def refine(k):
        best, best_res = k, residual(k)
        for _ in range(max_iter):
            acc = np.zeros((m, m), dtype=np.complex128)
            for t, s in zip(target, source):
                acc += t @ k @ s.conj().T + t.conj().T @ k @ s
            if kind.family == "Sp":
                acc = _sp_structure_project(acc, kind.n)
            k = _project_to_kind(acc, kind)
            res = residual(k)
            if res < best_res:
                best, best_res = k, res
            if best_res <= tol * 1e-2:
                break
        return best, best_res

    init = np.zeros((m, m), dtype=np.complex128)
    for t, s in zip(target, source):
        init += t @ s.conj().T
    if kind.family == "Sp":
        init = _sp_structure_project(init, kind.n)
    if np.linalg.norm(init) < 1e-12:
        init = np.eye(m, dtype=np.complex128)
    k, res = refine(_project_to_kind(init, kind))

    if res > tol:
        k2 = _least_squares_candidate(target, source, kind)
        if k2 is not None:
            k2, res2 = refine(k2)
            if res2 < res:
                k, res = k2, res2

    if res > tol:
        return None
    candidate = GroupElement(kind, k)
    if not membership_check(candidate, tol=max(tol, 1e-10)).passed:
        return None
    return candidate


def _least_squares_candidate(target, source, kind):
    """Smallest eigenvector of the stacked constraints T k - k S = 0, projected."""
    m = kind.matrix_dim
    mat = np.zeros((m * m, m * m), dtype=np.complex128)
    eye = np.eye(m)
    for t, s in zip(target, source):
        # row-major vec: vec(T k) = (T ⊗ I) vec(k), vec(k S) = (I ⊗ S^T) vec(k)
        op = np.kron(t, eye) - np.kron(eye, s.T)
        mat += op.conj().T @ op
    if kind.is_real:
        vals, vecs = np.linalg.eigh(mat.real)
    else:
        vals, vecs = np.linalg.eigh(mat)
    k = vecs[:, 0].reshape(m, m)
    if kind.family == "Sp":
        # the eigenvector phase matters to the antilinear structure projection
        fixed = _sp_structure_project(k, kind.n)
        other = _sp_structure_project(1j * k, kind.n)
        k = fixed if np.linalg.norm(fixed) >= np.linalg.norm(other) else other
    if np.linalg.norm(k) < 1e-12:
        return None
    return _project_to_kind(k, kind)
