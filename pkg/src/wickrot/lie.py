"""Generators and Cartan decompositions of o(p,q) and o(n,C).

Real-group data lives in the pseudo-orthonormal frame ``e_a``.  The flows act in
the orthonormal complex frame ``y_a = d_a e_a`` (``d_a = 1`` or ``i``), where a
matrix ``X`` becomes ``D^{-1} X D``.  In that frame the boosts of o(p,q) turn
into ``i`` times real antisymmetric matrices, i.e. they sit inside ``i o(n)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import expm

from .holomorphic import Signature

GROUP_TOL = 1e-9


@dataclass(frozen=True)
class OrthBasis:
    signature: Signature
    generators: tuple[np.ndarray, ...] = field(repr=False)
    pairs: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class CartanDecomposition:
    """Splitting ``g = k + p`` with respect to ``theta``.

    For the real group the matrices are in the pseudo-orthonormal frame and
    ``theta = I_{p,q}``.  For the complex group (``complex_group=True``) they are
    the pair (o(n), i o(n)) in the complex orthonormal frame and ``theta`` is the
    identity.
    """

    signature: Signature
    k_basis: tuple[np.ndarray, ...] = field(repr=False)
    p_basis: tuple[np.ndarray, ...] = field(repr=False)
    theta: np.ndarray = field(repr=False)
    complex_group: bool = False

    def k_complex_frame(self) -> list[np.ndarray]:
        if self.complex_group:
            return [np.asarray(x, dtype=complex) for x in self.k_basis]
        return [to_complex_frame(x, self.signature) for x in self.k_basis]

    def p_complex_frame(self) -> list[np.ndarray]:
        if self.complex_group:
            return [np.asarray(x, dtype=complex) for x in self.p_basis]
        return [to_complex_frame(x, self.signature) for x in self.p_basis]


@dataclass(frozen=True)
class GroupElement:
    """Element of O(p,q) (``tag='real'``, pseudo-orthonormal frame) or of
    O(n,C) (``tag='complex'``, complex orthonormal frame)."""

    matrix: np.ndarray = field(repr=False)
    tag: Literal["real", "complex"] = "complex"
    signature: Signature | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def complex_matrix(self) -> np.ndarray:
        if self.tag == "complex":
            return np.asarray(self.matrix, dtype=complex)
        return to_complex_frame(self.matrix, self.signature)

    def form_residual(self) -> float:
        m = self.matrix
        if self.tag == "real":
            eta = np.diag(self.signature.diag).astype(float)
            return float(np.abs(m.T @ eta @ m - eta).max())
        return float(np.abs(m.T @ m - np.eye(self.n)).max())

    def inverse(self) -> "GroupElement":
        return GroupElement(np.linalg.inv(self.matrix), self.tag, self.signature)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if self.tag == other.tag:
            return GroupElement(self.matrix @ other.matrix, self.tag, self.signature)
        return GroupElement(self.complex_matrix() @ other.complex_matrix(), "complex")

    @classmethod
    def identity(cls, n: int, signature: Signature | None = None) -> "GroupElement":
        if signature is not None:
            return cls(np.eye(n), "real", signature)
        return cls(np.eye(n, dtype=complex), "complex")


def to_complex_frame(x: np.ndarray, sig: Signature) -> np.ndarray:
    """``D^{-1} X D`` with ``D = diag(d_a)``."""
    d = sig.frame_factors
    return (np.asarray(x, dtype=complex) * d[None, :]) / d[:, None]


def from_complex_frame(x: np.ndarray, sig: Signature) -> np.ndarray:
    d = sig.frame_factors
    return (np.asarray(x, dtype=complex) * d[:, None]) / d[None, :]


def basis_opq(sig: Signature) -> OrthBasis:
    """Elementary generators of o(p,q): one per index pair ``a < b``.

    Rotations ``E_ba - E_ab`` inside a block, symmetric boosts ``E_ab + E_ba``
    across blocks.  Entries are integers.
    """
    n, p = sig.n, sig.p
    gens, pairs = [], []
    for a in range(n):
        for b in range(a + 1, n):
            x = np.zeros((n, n), dtype=int)
            if (a < p) == (b < p):
                x[a, b], x[b, a] = -1, 1
            else:
                x[a, b], x[b, a] = 1, 1
            x.flags.writeable = False
            gens.append(x)
            pairs.append((a, b))
    return OrthBasis(sig, tuple(gens), tuple(pairs))


def cartan_decompose(basis: OrthBasis) -> CartanDecomposition:
    theta = np.diag(basis.signature.diag)
    k, p = [], []
    for x in basis.generators:
        (k if np.array_equal(theta @ x @ theta, x) else p).append(x)
    return CartanDecomposition(basis.signature, tuple(k), tuple(p), theta)


def complex_cartan(n: int) -> CartanDecomposition:
    """Cartan data of O(n,C) in the complex orthonormal frame: (o(n), i o(n))."""
    k, p = [], []
    for a in range(n):
        for b in range(a + 1, n):
            x = np.zeros((n, n), dtype=complex)
            x[a, b], x[b, a] = -1, 1
            k.append(x)
            p.append(1j * -x)
    return CartanDecomposition(Signature(n, 0), tuple(k), tuple(p), np.eye(n), True)


def exp_one_param(x, t: float, signature: Signature | None = None) -> GroupElement:
    """``exp(t x)`` via scipy's scaling-and-squaring Pade(13) ``expm``.

    A real ``x`` with a ``signature`` yields an O(p,q) element; anything else is
    treated as an element of o(n,C) in the complex orthonormal frame.
    """
    x = np.asarray(x)
    if not np.all(np.isfinite(x)) or not np.isfinite(t):
        raise FloatingPointError("non-finite generator or parameter")
    if signature is not None and not np.iscomplexobj(x):
        return GroupElement(expm(t * x.astype(float)), "real", signature)
    return GroupElement(expm(t * x.astype(complex)), "complex")


def conjugate_involution(theta: np.ndarray, g: GroupElement) -> np.ndarray:
    """``g theta g^{-1}``, the involution conjugated by ``g``."""
    theta = np.asarray(theta)
    n = theta.shape[0]
    if np.abs(theta @ theta - np.eye(n)).max() > GROUP_TOL:
        raise ValueError("theta is not an involution")
    m = g.matrix
    if abs(np.linalg.det(m)) < 1e-300:
        raise np.linalg.LinAlgError("group element is singular")
    out = m @ theta @ np.linalg.inv(m)
    if np.abs(out @ out - np.eye(n)).max() > GROUP_TOL * max(1.0, np.abs(out).max() ** 2):
        raise FloatingPointError("conjugated involution lost involutivity")
    if g.tag == "real":
        out = out.real
    return out
