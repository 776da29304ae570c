"""Invariant diagram operators, spin-network evaluation, and loop compilation.

Operators on the d-th tensor power of the natural representation are stored
as square matrices whose rows and columns are row-major multi-indices over
the tensor slots (slot 1 is the most significant digit).

Conventions, fixed once and used consistently:

* ``perm_operator(sigma, m)`` moves the vector in slot a to slot sigma(a):
  the basis column (a_1, ..., a_d) maps to the basis row b with
  b_{sigma(i)} = a_i.  This makes the map a homomorphism,
  ``perm_operator(s) @ perm_operator(t) == perm_operator(s * t)``,
  and makes a pairing of permutation form (i joined with sigma(i)+d)
  materialize to exactly ``perm_operator(sigma)``.
* With that action, composing a slot-wise tensor h_1 x ... x h_d against
  the operator of sigma and tracing gives, per cycle (a_1, ..., a_k) of
  sigma, the factor tr(h_{a_1} h_{a_k} h_{a_{k-1}} ... h_{a_2}): each cycle
  is traversed against the permutation.  The compilers emit loops whose
  reversed-order holonomy reproduces exactly these factors.
* Mixed operators (dual slots present, unitary track) order slots per edge:
  the p_i primal slots of edge i followed by its q_i dual slots, edges in
  order.  Dual slots are written in dual-basis coordinates, where a group
  element acts by its transpose inverse.

Two independent evaluation routes exist on purpose: the dense contraction
oracle (:func:`eval_spin_network`) and the compiled Wilson-loop product
(:class:`WilsonProduct`).  Tests compare them; neither shortcut reuses the
other's path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagrams import (
    all_permutations,
    cycles,
    enumerate_pairings,
    normalize_pairing,
    reversed_pair_count,
)
from .graphs import SignedEdge, bouquet, wilson_loop
from .groups import haar_sample

#: Dense operators are capped at this many entries.
MAX_DENSE_ENTRIES = 2 ** 22

#: Singular values below this fraction of the largest count as zero.
DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class MixedSignature:
    """Per-edge tensor degrees: (primal count p_i, dual count q_i) for each edge."""

    edges: tuple

    def __post_init__(self):
        edges = tuple((int(p), int(q)) for p, q in self.edges)
        object.__setattr__(self, "edges", edges)
        if not edges:
            raise ValueError("signature needs at least one edge")
        if any(p < 0 or q < 0 for p, q in edges):
            raise ValueError("tensor degrees must be non-negative")
        if self.p + self.q < 1:
            raise ValueError("total tensor degree must be at least 1")

    @property
    def r(self):
        return len(self.edges)

    @property
    def p(self):
        return sum(p for p, _ in self.edges)

    @property
    def q(self):
        return sum(q for _, q in self.edges)

    @property
    def total(self):
        return self.p + self.q


def _check_entries(shape_product):
    if shape_product > MAX_DENSE_ENTRIES:
        raise ValueError(
            f"dense operator with {shape_product} entries exceeds the "
            f"bound {MAX_DENSE_ENTRIES}"
        )


def perm_operator(sigma, m):
    """Slot-permutation operator of sigma on the d-th tensor power of C^m.

    Exact 0/1 integer matrix of size m^d; see the module docstring for the
    direction of the action.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    d = sigma.size
    dim = m ** d
    _check_entries(dim * dim)
    cols = np.arange(dim)
    digits = np.unravel_index(cols, (m,) * d)
    weights = [m ** (d - sigma(i)) for i in range(1, d + 1)]
    rows = sum(dig * w for dig, w in zip(digits, weights))
    out = np.zeros((dim, dim), dtype=np.int64)
    out[rows, cols] = 1
    return out


def _slot_tensor_view(op, m):
    """Reshape a square operator over m^p into a 2p-axis tensor, out axes first."""
    dim = op.shape[0]
    p = 0
    size = 1
    while size < dim:
        size *= m
        p += 1
    if size != dim or op.shape != (dim, dim):
        raise ValueError(f"operator of shape {op.shape} is not over a power of {m}")
    return op.reshape((m,) * (2 * p)), p


def _per_edge_to_primal_first(signature):
    """Position map: per-edge slot order -> primal-first slot order (0-based)."""
    p = signature.p
    posmap = []
    prefix_p = 0
    prefix_q = 0
    for p_i, q_i in signature.edges:
        posmap.extend(range(prefix_p, prefix_p + p_i))
        posmap.extend(range(p + prefix_q, p + prefix_q + q_i))
        prefix_p += p_i
        prefix_q += q_i
    return posmap


def _slot_letters(signature):
    """Edge index and exponent of each primal-first slot a = 1..p+q.

    Slots 1..p run through the primal degrees edge by edge (exponent +1),
    slots p+1..p+q through the dual degrees (exponent -1).
    """
    letters = []
    for i, (p_i, _) in enumerate(signature.edges):
        letters.extend([(i, 1)] * p_i)
    for i, (_, q_i) in enumerate(signature.edges):
        letters.extend([(i, -1)] * q_i)
    return letters


def mixed_operator(sigma, signature, m):
    """Invariant operator of sigma on the mixed tensor space of a signature.

    This is the slot-permutation operator rewritten on the space with q dual
    slots: the dual slots are partially transposed (the dual-basis pairing
    swaps their row and column indices) and the slots are reordered from
    primal-first to the per-edge convention.  Exact 0/1 integer matrix.
    """
    n = signature.total
    if sigma.size != n:
        raise ValueError(f"permutation size {sigma.size} != total degree {n}")
    base = perm_operator(sigma, m)
    tensor, _ = _slot_tensor_view(base, m)
    p = signature.p
    axes = list(range(2 * n))
    for s in range(p, n):  # transpose every dual slot
        axes[s], axes[n + s] = axes[n + s], axes[s]
    tensor = tensor.transpose(axes)
    posmap = _per_edge_to_primal_first(signature)
    axes = [posmap[t] for t in range(n)] + [n + posmap[t] for t in range(n)]
    tensor = tensor.transpose(axes)
    dim = m ** n
    return np.ascontiguousarray(tensor).reshape(dim, dim)


def brauer_operator(tau, kind, d, basis=None):
    """Pairing operator of tau on the d-th tensor power, for kinds with a form.

    The operator is the sum over all basis labelings of the 2d points of the
    product of form values over the pairs, read as an endomorphism through
    the form pairing on the first d slots.  With the canonical basis
    (``basis=None``) the entries are exact integers in {0, +1, -1}; passing
    an alternative basis (columns of a matrix preserving the form) computes
    the same operator in floating point, which is useful for checking that
    the construction does not depend on the basis choice.
    """
    if not kind.has_form:
        raise ValueError(f"{kind} has no invariant bilinear form")
    if tau.size != 2 * d:
        raise ValueError(f"pairing on {tau.size} points does not match degree {d}")
    m = kind.matrix_dim
    _check_entries(m ** (2 * d))
    _check_entries((m ** d) * (m ** d))

    q = kind.gram()
    if basis is None:
        pair_gram = q
        in_contract = q
        out_map = None
    else:
        basis = np.asarray(basis, dtype=np.complex128)
        pair_gram = basis.T @ q @ basis  # form values between the new basis vectors
        in_contract = basis.T @ q       # form values against the canonical basis
        out_map = basis

    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    slot = letters[: 2 * d]
    ins = letters[2 * d: 3 * d]
    pair_subs = ",".join(slot[k - 1] + slot[l - 1] for k, l in tau.pairs())
    pair_tensor_sub = f"{pair_subs}->{slot}"
    jt = np.einsum(pair_tensor_sub, *([pair_gram] * d), optimize=True)

    contract_sub = f"{slot}," + ",".join(slot[t] + ins[t] for t in range(d))
    if out_map is None:
        contract_sub += f"->{slot[d:]}{ins}"
        u = np.einsum(contract_sub, jt, *([in_contract] * d), optimize=True)
    else:
        outs = letters[3 * d: 4 * d]
        contract_sub += "," + ",".join(outs[t] + slot[d + t] for t in range(d))
        contract_sub += f"->{outs}{ins}"
        u = np.einsum(contract_sub, jt, *([in_contract] * d), *([out_map] * d), optimize=True)
    dim = m ** d
    return u.reshape(dim, dim)


def apply_slot_transpose(op, slot, kind):
    """Partial transpose with the form on one slot of an operator over m^p.

    On a slot carrying a group element g this sends g to (sign of the form)
    times g^{-1}; applying it twice returns the original operator exactly.
    Integer operators stay integer.
    """
    m = kind.matrix_dim
    tensor, p = _slot_tensor_view(op, m)
    if not 1 <= slot <= p:
        raise ValueError(f"slot {slot} out of range 1..{p}")
    q = kind.gram()
    qinv = kind.gram_inverse()
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    sub = list(letters[: 2 * p])
    c = sub[slot - 1]          # old out index of the slot
    a = sub[p + slot - 1]      # old in index of the slot
    b_new, a_new = letters[2 * p], letters[2 * p + 1]
    out_sub = list(sub)
    out_sub[slot - 1] = b_new
    out_sub[p + slot - 1] = a_new
    expr = f"{''.join(sub)},{a}{b_new},{c}{a_new}->{''.join(out_sub)}"
    result = np.einsum(expr, tensor, qinv, q, optimize=True)
    dim = m ** p
    return np.ascontiguousarray(result).reshape(dim, dim)


def representation_matrix(signature, elements):
    """Tensor-product matrix of the edge elements in per-edge slot order.

    Primal slots carry the element itself, dual slots its transpose inverse
    (the dual-coordinate action).
    """
    m = elements[0].kind.matrix_dim
    _check_entries((m ** signature.total) ** 2)
    out = np.eye(1, dtype=np.complex128)
    for (p_i, q_i), g in zip(signature.edges, elements):
        dual = g.inverse().mat.T
        for _ in range(p_i):
            out = np.kron(out, g.mat)
        for _ in range(q_i):
            out = np.kron(out, dual)
    return out


def eval_spin_network(config, signature, op):
    """Trace of the edge-element tensor product composed with an operator.

    This is the dense-contraction oracle: it materializes the representation
    matrix and contracts it against ``op`` directly.  The configuration must
    live on the bouquet graph with one edge per signature entry; dual slots
    are only allowed on the unitary track.
    """
    if config.graph.num_edges != signature.r:
        raise ValueError("configuration and signature disagree on the edge count")
    if config.graph.num_vertices != 1:
        raise ValueError("spin networks here are evaluated on bouquet graphs")
    if signature.q > 0 and config.kind.has_form:
        raise ValueError(f"dual slots are not used for kind {config.kind}")
    m = config.kind.matrix_dim
    dim = m ** signature.total
    if op.shape != (dim, dim):
        raise ValueError(f"operator shape {op.shape} does not match dimension {dim}")
    rep = representation_matrix(signature, config.elements)
    return complex(np.einsum("ij,ji->", rep, op))


@dataclass(frozen=True)
class WilsonProduct:
    """A sign together with loops whose Wilson values multiply to a spin network."""

    sign: int
    loops: tuple

    def evaluate(self, config):
        value = complex(self.sign)
        for steps in self.loops:
            value *= wilson_loop(config, steps)
        return value


def _emit_loop(cycle, slot_letter, flips=frozenset()):
    """Loop of a cycle: traversal order (a_k, a_1, ..., a_{k-1}) of its slots.

    The reversed-order holonomy of this loop is the cycle product read
    against the permutation starting at a_1, which is what composing with
    the slot-permutation operator produces.  Starting the letters at a_k
    also pins a canonical representative among the cyclic rotations.
    """
    order = (cycle[-1],) + cycle[:-1]
    steps = []
    for a in order:
        edge, exponent = slot_letter[a - 1]
        if a in flips:
            exponent = -exponent
        steps.append(SignedEdge(edge, exponent))
    return tuple(steps)


def compile_unitary(sigma, signature):
    """Compile the invariant operator of sigma into a product of Wilson loops.

    One loop per cycle of sigma; primal slots contribute the edge letter,
    dual slots its inverse.  The compiled value equals the oracle value of
    ``mixed_operator(sigma, signature, m)`` for every configuration.
    """
    if sigma.size != signature.total:
        raise ValueError(f"permutation size {sigma.size} != total degree {signature.total}")
    slot_letter = _slot_letters(signature)
    loops = tuple(_emit_loop(cyc, slot_letter) for cyc in cycles(sigma))
    return WilsonProduct(sign=1, loops=loops)


def compile_orthosymplectic(tau, signature, kind):
    """Compile a pairing operator into a signed product of Wilson loops.

    Flip normalization rewrites tau as a permutation diagram at the cost of
    inverting the edge letters on the flipped slots.  Each flipped slot
    contributes the form sign, and, for the skew form only, each pair whose
    endpoint order reverses under the rewiring contributes another: the
    total sign is form_sign^(flips + reversed pairs).  For O/SO this is
    always +1.  The compiled value equals the oracle value of
    ``brauer_operator(tau, kind, p)`` for every configuration.
    """
    if not kind.has_form:
        raise ValueError(f"{kind} has no invariant bilinear form")
    if signature.q != 0:
        raise ValueError("dual slots are not used for kinds with a form")
    if tau.size != 2 * signature.p:
        raise ValueError(f"pairing on {tau.size} points does not match degree {signature.p}")
    norm = normalize_pairing(tau)
    slot_letter = _slot_letters(signature)
    loops = tuple(_emit_loop(cyc, slot_letter, norm.flips) for cyc in cycles(norm.sigma))
    exponent = len(norm.flips) + reversed_pair_count(tau, norm.flips)
    return WilsonProduct(sign=kind.form_sign ** exponent, loops=loops)


def _apply_per_slot(tensor, mats, side):
    """Multiply a 2p-axis operator tensor by slot matrices on one side."""
    p = len(mats)
    out = tensor
    for t in range(p):
        if side == "left":
            out = np.tensordot(mats[t], out, axes=([1], [t]))
            out = np.moveaxis(out, 0, t)
        else:
            out = np.tensordot(out, mats[t], axes=([p + t], [0]))
            out = np.moveaxis(out, -1, p + t)
    return out


def invariance_defect(op, slot_mats):
    """Max-entry norm of the commutator of ``op`` with a slot-wise tensor product.

    ``slot_mats`` lists one matrix per slot; the commutator is computed
    slot-wise, which avoids materializing the full tensor-product matrix.
    """
    m = slot_mats[0].shape[0]
    tensor, p = _slot_tensor_view(np.asarray(op, dtype=np.complex128), m)
    if len(slot_mats) != p:
        raise ValueError(f"need {p} slot matrices, got {len(slot_mats)}")
    left = _apply_per_slot(tensor, slot_mats, "left")
    right = _apply_per_slot(tensor, slot_mats, "right")
    return float(np.abs(left - right).max())


def diagonal_slot_matrices(signature, g):
    """Slot matrices of the diagonal action of one element, per-edge order."""
    dual = g.inverse().mat.T
    mats = []
    for p_i, q_i in signature.edges:
        mats.extend([g.mat] * p_i)
        mats.extend([dual] * q_i)
    return mats


def span_rank(operators, rank_tol=DEFAULT_RANK_TOL):
    """Dimension of the linear span of a family of operators (numerical rank)."""
    ops = list(operators)
    if not ops:
        return 0
    stacked = np.stack([np.asarray(op, dtype=np.complex128).reshape(-1) for op in ops])
    sv = np.linalg.svd(stacked, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > rank_tol * sv[0]))


def commutant_dimension(kind, d, samples, rng, rank_tol=DEFAULT_RANK_TOL):
    """Dimension of the space of matrices commuting with sampled tensor powers.

    Stacks the linear constraints [g^(tensor d), X] = 0 over Haar samples and
    returns the nullity, computed with a relative singular-value threshold.
    Independent of the diagram operators; used to cross-check their span.
    """
    m = kind.matrix_dim
    dim = m ** d
    _check_entries(max(samples, 1) * dim ** 4)
    eye = np.eye(dim)
    rows = []
    for _ in range(samples):
        g = haar_sample(kind, rng).mat
        rep = np.eye(1, dtype=np.complex128)
        for _ in range(d):
            rep = np.kron(rep, g)
        rows.append(np.kron(rep, eye) - np.kron(eye, rep.T))
    stacked = np.vstack(rows)
    sv = np.linalg.svd(stacked, compute_uv=False)
    rank = int(np.sum(sv > rank_tol * sv[0])) if sv[0] > 0 else 0
    return dim * dim - rank


def permutation_operators(d, m):
    """All slot-permutation operators of S_d at inner dimension m."""
    return [perm_operator(sigma, m) for sigma in all_permutations(d)]


def pairing_operators(d, kind):
    """All pairing operators on 2d points for a kind with a form."""
    return [brauer_operator(tau, kind, d) for tau in enumerate_pairings(d)]
