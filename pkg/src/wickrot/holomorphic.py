"""Holomorphic inner product spaces, real slices and compatible triples.

Everything here works in an orthonormal basis of the holomorphic form, so the
form is the plain bilinear sum ``X_1 Y_1 + ... + X_n Y_n``.  Real slices of
signature ``(p, q)`` are the fixed points of ``Z -> I_{p,q} conj(Z)``, with the
``+1`` directions listed first.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEGENERACY_TOL = 1e-10
EIGEN_ZERO_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when operands live in spaces of different dimension."""


class RankError(ValueError):
    """Raised when a supposed basis is linearly dependent over the reals."""


@dataclass(frozen=True, order=True)
class Signature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ValueError(f"invalid signature ({self.p}, {self.q})")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def diag(self) -> np.ndarray:
        """Diagonal of ``I_{p,q}`` as an int array."""
        return np.array([1] * self.p + [-1] * self.q, dtype=int)

    @property
    def frame_factors(self) -> np.ndarray:
        """``d_a`` with ``y_a = d_a e_a``: 1 on the + block, ``i`` on the - block."""
        return np.array([1.0] * self.p + [1j] * self.q, dtype=complex)

    @property
    def is_riemannian(self) -> bool:
        return self.q == 0

    def as_tuple(self) -> tuple[int, int]:
        return (self.p, self.q)

    @classmethod
    def parse(cls, value) -> "Signature":
        if isinstance(value, Signature):
            return value
        if isinstance(value, str):
            value = [int(s) for s in value.replace("(", "").replace(")", "").split(",")]
        p, q = value
        return cls(int(p), int(q))

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class ConjugationMap:
    """The anti-linear involution ``Z -> matrix @ conj(Z)``."""

    signature: Signature
    matrix: np.ndarray = field(compare=False, repr=False)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return self.matrix @ np.conj(z)

    def fixed_basis(self) -> list[np.ndarray]:
        """Real basis of the fixed-point set: ``e_j`` on +1 entries, ``i e_j`` on -1."""
        n = self.signature.n
        eye = np.eye(n, dtype=complex)
        return [eye[j] * (1.0 if self.matrix[j, j] > 0 else 1j) for j in range(n)]


@dataclass(frozen=True)
class CompatibleTriple:
    slice_a: ConjugationMap
    slice_b: ConjugationMap
    compact: ConjugationMap

    def commutators(self) -> list[np.ndarray]:
        mats = [self.slice_a.matrix, self.slice_b.matrix, self.compact.matrix]
        return [
            mats[i] @ mats[j] - mats[j] @ mats[i]
            for i in range(3)
            for j in range(i + 1, 3)
        ]


def standard_form_eval(x, y) -> complex:
    """Bilinear (not sesquilinear) pairing ``sum_i x_i y_i``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.ndim != 1 or x.shape != y.shape or x.size == 0:
        raise DimensionError(f"cannot pair vectors of shapes {x.shape} and {y.shape}")
    return complex(np.sum(x * y))


def make_conjugation(sig: Signature) -> ConjugationMap:
    matrix = np.diag(sig.diag)
    matrix.flags.writeable = False
    return ConjugationMap(sig, matrix)


def is_real_slice(basis_vectors) -> tuple[bool, Signature | None]:
    """Decide whether the real span of ``basis_vectors`` is a real slice.

    Returns ``(True, signature)`` when the Gram matrix of the holomorphic form
    on the span is real and non-degenerate, ``(False, None)`` otherwise.

    Raises:
        RankError: if the vectors are dependent over the reals.
    """
    vecs = np.atleast_2d(np.asarray(basis_vectors, dtype=complex))
    k, n = vecs.shape
    realified = np.hstack([vecs.real, vecs.imag])
    if np.linalg.matrix_rank(realified, tol=1e-12) < k:
        raise RankError("basis vectors are linearly dependent over R")
    gram = vecs @ vecs.T
    scale = max(np.abs(gram).max(), 1e-300)
    if np.abs(gram.imag).max() > DEGENERACY_TOL * scale:
        return False, None
    gram = gram.real
    if abs(np.linalg.det(gram)) <= DEGENERACY_TOL * scale**k:
        return False, None
    eig = np.linalg.eigvalsh(gram)
    p = int(np.sum(eig > EIGEN_ZERO_TOL * scale))
    q = int(np.sum(eig < -EIGEN_ZERO_TOL * scale))
    if p + q != k:
        return False, None
    return True, Signature(p, q)


def build_compatible_triple(sig_a: Signature, sig_b: Signature) -> CompatibleTriple:
    if sig_a.n != sig_b.n:
        raise DimensionError(f"signatures {sig_a} and {sig_b} differ in dimension")
    return CompatibleTriple(
        make_conjugation(sig_a),
        make_conjugation(sig_b),
        make_conjugation(Signature(sig_a.n, 0)),
    )
