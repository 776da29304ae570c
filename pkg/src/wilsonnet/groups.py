"""Compact matrix groups: kinds, membership checks, Haar sampling, bilinear forms.

Five families are supported.  U(n) and SU(n) are the complex unitary groups,
O(n) and SO(n) the real orthogonal ones, and Sp(n) is the compact symplectic
group realized as complex matrices of size 2n that are unitary and preserve
the skew form with block Gram matrix [[0, I], [-I, 0]].  All elements are
therefore unitary complex matrices; the matrix size of a kind is n except
for Sp(n), where it is 2n.

O(n), SO(n) and Sp(n) preserve a complex-bilinear (not sesquilinear) form
``<v, w> = v^T Q w`` with Q the identity (symmetric, sign +1) or the skew
block matrix (sign -1).  U(n) and SU(n) carry no invariant bilinear form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FAMILIES = ("U", "SU", "O", "SO", "Sp")

#: Default tolerance for numerical membership tests.
DEFAULT_MEMBERSHIP_TOL = 1e-10


def omega(n):
    """Gram matrix [[0, I], [-I, 0]] of the skew form on C^(2n), integer entries."""
    w = np.zeros((2 * n, 2 * n), dtype=np.int64)
    w[:n, n:] = np.eye(n, dtype=np.int64)
    w[n:, :n] = -np.eye(n, dtype=np.int64)
    return w


@dataclass(frozen=True)
class GroupKind:
    """A group family tag together with its rank n."""

    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.n < 1:
            raise ValueError(f"rank must be a positive integer, got {self.n}")

    @property
    def matrix_dim(self):
        """Size of the matrices: n for U/SU/O/SO, 2n for Sp."""
        return 2 * self.n if self.family == "Sp" else self.n

    @property
    def is_real(self):
        return self.family in ("O", "SO")

    @property
    def det_one(self):
        return self.family in ("SU", "SO")

    @property
    def has_form(self):
        """Whether the kind preserves an invariant bilinear form (O/SO/Sp)."""
        return self.family in ("O", "SO", "Sp")

    @property
    def form_sign(self):
        """Symmetry sign of the bilinear form: +1 symmetric, -1 skew."""
        if not self.has_form:
            raise ValueError(f"{self} has no invariant bilinear form")
        return -1 if self.family == "Sp" else 1

    def gram(self):
        """Integer Gram matrix of the invariant form (identity or skew block)."""
        if not self.has_form:
            raise ValueError(f"{self} has no invariant bilinear form")
        if self.family == "Sp":
            return omega(self.n)
        return np.eye(self.n, dtype=np.int64)

    def gram_inverse(self):
        """Inverse Gram matrix, also integer (the skew block squares to -I)."""
        g = self.gram()
        return -g if self.family == "Sp" else g

    def __str__(self):
        return f"{self.family}({self.n})"


class GroupElement:
    """A square complex matrix tagged with the group kind it claims to live in.

    The matrix is copied and frozen at construction; only the shape is
    validated here.  Numerical membership is a separate, tolerance-based
    question answered by :func:`membership_check`.
    """

    __slots__ = ("kind", "mat")

    def __init__(self, kind, mat):
        mat = np.asarray(mat, dtype=np.complex128)
        m = kind.matrix_dim
        if mat.shape != (m, m):
            raise ValueError(f"{kind} needs a {m}x{m} matrix, got shape {mat.shape}")
        mat = np.array(mat, copy=True)
        mat.setflags(write=False)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "mat", mat)

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @staticmethod
    def identity(kind):
        return GroupElement(kind, np.eye(kind.matrix_dim))

    def inverse(self):
        """Group inverse; all supported kinds are unitary, so this is g*."""
        return GroupElement(self.kind, self.mat.conj().T)

    def __matmul__(self, other):
        if self.kind != other.kind:
            raise ValueError(f"kind mismatch: {self.kind} vs {other.kind}")
        return GroupElement(self.kind, self.mat @ other.mat)

    def __repr__(self):
        return f"GroupElement({self.kind}, {self.mat!r})"


@dataclass
class MembershipReport:
    """Per-invariant deviations of a matrix from its claimed group."""

    kind: GroupKind
    tol: float
    deviations: dict = field(default_factory=dict)

    @property
    def max_deviation(self):
        return max(self.deviations.values(), default=0.0)

    @property
    def passed(self):
        return all(dev <= self.tol for dev in self.deviations.values())

    def __str__(self):
        verdict = "pass" if self.passed else "FAIL"
        lines = [f"membership {self.kind}: {verdict} (tol {self.tol:g})"]
        lines += [f"  {name}: {dev:.3e}" for name, dev in self.deviations.items()]
        return "\n".join(lines)


def membership_check(g, tol=DEFAULT_MEMBERSHIP_TOL):
    """Measure how far ``g`` deviates from each defining invariant of its kind.

    Reports max-entry deviations for unitarity, realness (O/SO), unit
    determinant (SU/SO) and form preservation (Sp).  Passes iff every
    deviation is at most ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    kind, mat = g.kind, g.mat
    m = kind.matrix_dim
    if mat.shape != (m, m):
        raise ValueError(f"matrix shape {mat.shape} does not match {kind}")
    report = MembershipReport(kind=kind, tol=tol)
    eye = np.eye(m)
    report.deviations["unitarity"] = float(np.abs(mat.conj().T @ mat - eye).max())
    if kind.is_real:
        report.deviations["realness"] = float(np.abs(mat.imag).max())
    if kind.det_one:
        report.deviations["determinant"] = float(abs(np.linalg.det(mat) - 1.0))
    if kind.family == "Sp":
        w = omega(kind.n)
        report.deviations["symplectic_form"] = float(np.abs(mat.T @ w @ mat - w).max())
    return report


def form_eval(kind, v, w):
    """Evaluate the invariant bilinear form v^T Q w for kinds O/SO/Sp.

    The form is complex-bilinear in both arguments (no conjugation).
    Raises for U/SU, which preserve no bilinear form.
    """
    q = kind.gram()
    v = np.asarray(v, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    m = kind.matrix_dim
    if v.shape != (m,) or w.shape != (m,):
        raise ValueError(f"vectors must have length {m}")
    return complex(v @ q @ w)


def _complex_gauss(n, rng):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def _haar_unitary(n, rng):
    # QR of a complex Ginibre matrix; rescaling columns by the phases of
    # diag(R) makes the factorization unique and the law exactly Haar.
    q, r = np.linalg.qr(_complex_gauss(n, rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _haar_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diagonal(r))


def _haar_symplectic(n, rng):
    # Quaternionic Ginibre matrix [[A, -conj(B)], [B, conj(A)]] followed by
    # Gram-Schmidt that inserts, after each orthonormalized column u, its
    # quaternionic partner -Omega conj(u).  The partner is automatically
    # orthogonal to u, and the resulting matrix is unitary with the block
    # structure above, hence a member of Sp(n).
    w = omega(n).astype(np.complex128)
    a = _complex_gauss(n, rng)
    b = _complex_gauss(n, rng)
    raw = np.vstack([a, b])  # columns 0..n-1 of the quaternionic matrix
    basis = []
    for j in range(n):
        v = raw[:, j].copy()
        for _ in range(2):  # two passes keep orthogonality near machine precision
            for u in basis:
                v -= u * (u.conj() @ v)
        v /= np.linalg.norm(v)
        basis.append(v)
        basis.append(-w @ v.conj())
    cols = basis[0::2] + basis[1::2]
    return np.column_stack(cols)


def haar_sample(kind, rng):
    """Draw a Haar-distributed element of ``kind`` from the given numpy Generator.

    Deterministic for a fixed generator state: the same seed yields the
    bit-identical element.
    """
    n = kind.n
    if kind.family == "U":
        mat = _haar_unitary(n, rng)
    elif kind.family == "SU":
        mat = _haar_unitary(n, rng)
        # dividing one column by det pushes Haar on U(n) to Haar on SU(n)
        mat = mat.copy()
        mat[:, 0] /= np.linalg.det(mat)
    elif kind.family == "O":
        mat = _haar_orthogonal(n, rng).astype(np.complex128)
    elif kind.family == "SO":
        mat = _haar_orthogonal(n, rng)
        if np.linalg.det(mat) < 0:
            mat = mat.copy()
            mat[:, 0] = -mat[:, 0]
        mat = mat.astype(np.complex128)
    elif kind.family == "Sp":
        mat = _haar_symplectic(n, rng)
    else:  # pragma: no cover - guarded by GroupKind
        raise ValueError(f"unknown family {kind.family}")
    return GroupElement(kind, mat)
