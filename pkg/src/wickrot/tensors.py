"""Tensors over the complexified tangent space and the O(n,C) tensor action.

Components are stored in the complex orthonormal frame ``y_a`` where the
holomorphic metric is the identity.  Contravariant slots transform with ``g``,
covariant slots with ``g^{-T}`` (which equals ``g`` for complex orthogonal
``g``).  Direct sums are tuples of independent blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .holomorphic import DimensionError, Signature
from .lie import GroupElement

INVOLUTION_TOL = 1e-9


@dataclass(frozen=True)
class TensorShape:
    dimension: int
    slots: tuple[tuple[int, int], ...] = ((0, 0),)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        for k, m in self.slots:
            if k < 0 or m < 0:
                raise ValueError("valences must be non-negative")

    @classmethod
    def single(cls, dimension: int, contravariant: int, covariant: int) -> "TensorShape":
        return cls(dimension, ((contravariant, covariant),))

    @property
    def contravariant(self) -> int:
        return self.slots[0][0]

    @property
    def covariant(self) -> int:
        return self.slots[0][1]

    def block_shape(self, i: int) -> tuple[int, ...]:
        k, m = self.slots[i]
        return (self.dimension,) * (k + m)

    @property
    def size(self) -> int:
        return sum(self.dimension ** (k + m) for k, m in self.slots)


@dataclass(frozen=True, eq=False)
class Tensor:
    shape: TensorShape
    blocks: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.blocks) != len(self.shape.slots):
            raise DimensionError("block count does not match the shape")
        blocks = []
        for i, b in enumerate(self.blocks):
            b = np.asarray(b, dtype=complex)
            if b.shape != self.shape.block_shape(i):
                raise DimensionError(
                    f"block {i} has shape {b.shape}, expected {self.shape.block_shape(i)}"
                )
            if not np.all(np.isfinite(b)):
                raise FloatingPointError("tensor has non-finite entries")
            blocks.append(b)
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def from_array(cls, array, contravariant: int = 0, covariant: int | None = None) -> "Tensor":
        array = np.asarray(array, dtype=complex)
        if covariant is None:
            covariant = array.ndim - contravariant
        n = array.shape[0] if array.ndim else 1
        return cls(TensorShape.single(n, contravariant, covariant), (array,))

    @classmethod
    def from_pseudo_frame(cls, array, sig: Signature, contravariant: int = 0) -> "Tensor":
        """Convert real components in the frame ``e_a`` to the frame ``y_a``."""
        array = np.asarray(array, dtype=complex)
        d = sig.frame_factors
        for axis in range(array.ndim):
            f = 1 / d if axis < contravariant else d
            array = _scale_axis(array, f, axis)
        return cls.from_array(array, contravariant)

    def to_pseudo_frame(self, sig: Signature) -> np.ndarray:
        d = sig.frame_factors
        k, _ = self.shape.slots[0]
        array = self.components
        for axis in range(array.ndim):
            f = d if axis < k else 1 / d
            array = _scale_axis(array, f, axis)
        return array

    @classmethod
    def direct_sum(cls, *tensors: "Tensor") -> "Tensor":
        n = tensors[0].shape.dimension
        if any(t.shape.dimension != n for t in tensors):
            raise DimensionError("direct summands must share the dimension")
        slots = tuple(s for t in tensors for s in t.shape.slots)
        blocks = tuple(b for t in tensors for b in t.blocks)
        return cls(TensorShape(n, slots), blocks)

    @classmethod
    def zeros(cls, shape: TensorShape) -> "Tensor":
        return cls(shape, tuple(np.zeros(shape.block_shape(i), dtype=complex)
                                for i in range(len(shape.slots))))

    @property
    def components(self) -> np.ndarray:
        if len(self.blocks) != 1:
            raise ValueError("components is only defined for a single block")
        return self.blocks[0]

    def flat(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.blocks])

    def with_blocks(self, blocks) -> "Tensor":
        return Tensor(self.shape, tuple(blocks))

    def conj(self) -> "Tensor":
        return self.with_blocks(np.conj(b) for b in self.blocks)

    def norm(self) -> float:
        return float(np.sqrt(hermitian_form(self, self).real))

    def max_abs(self) -> float:
        return float(max((np.abs(b).max() if b.size else 0.0) for b in self.blocks))

    def _check(self, other: "Tensor"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return self.with_blocks(a + b for a, b in zip(self.blocks, other.blocks))

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return self.with_blocks(a - b for a, b in zip(self.blocks, other.blocks))

    def __mul__(self, scalar) -> "Tensor":
        return self.with_blocks(b * scalar for b in self.blocks)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Tensor":
        return self.with_blocks(b / scalar for b in self.blocks)

    def __neg__(self) -> "Tensor":
        return self * -1


@dataclass(frozen=True, eq=False)
class ExtendedInvolution:
    """Slot-wise extension of an involution of the tangent space.

    With ``antilinear=True`` the components are conjugated first, which turns
    ``base = 1`` into the conjugation of the compact real slice.
    """

    base: np.ndarray = field(repr=False)
    shape: TensorShape
    antilinear: bool = False

    def __call__(self, v: Tensor) -> Tensor:
        if v.shape != self.shape:
            raise DimensionError("involution and tensor shapes differ")
        if self.antilinear:
            v = v.conj()
        if np.array_equal(self.base, np.eye(self.shape.dimension)):
            return v
        return act_group(self.base, v)


def _scale_axis(array: np.ndarray, factors: np.ndarray, axis: int) -> np.ndarray:
    shape = [1] * array.ndim
    shape[axis] = -1
    return array * factors.reshape(shape)


def _apply_axis(matrix: np.ndarray, array: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(matrix, array, axes=(1, axis)), 0, axis)


def _matrix_of(g) -> np.ndarray:
    if isinstance(g, GroupElement):
        return g.complex_matrix()
    return np.asarray(g, dtype=complex)


def act_group(g, v: Tensor) -> Tensor:
    """Tensor action of a group element given in the complex orthonormal frame."""
    m = _matrix_of(g)
    if m.shape != (v.shape.dimension,) * 2:
        raise DimensionError(f"{m.shape} matrix cannot act on dimension {v.shape.dimension}")
    m_cov = np.linalg.inv(m).T
    out = []
    for (k, c), block in zip(v.shape.slots, v.blocks):
        for axis in range(k + c):
            block = _apply_axis(m if axis < k else m_cov, block, axis)
        out.append(block)
    return v.with_blocks(out)


def act_algebra(x, v: Tensor) -> Tensor:
    """Differential of the tensor action: Leibniz sum over slots."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (v.shape.dimension,) * 2:
        raise DimensionError(f"{x.shape} matrix cannot act on dimension {v.shape.dimension}")
    out = []
    for (k, c), block in zip(v.shape.slots, v.blocks):
        acc = np.zeros_like(block)
        for axis in range(k + c):
            acc += _apply_axis(x if axis < k else -x.T, block, axis)
        out.append(acc)
    return v.with_blocks(out)


def tensor_inner_product(u: Tensor, v: Tensor) -> complex:
    """Holomorphic (bilinear) extension of the metric: ``sum_I u_I v_I``."""
    u._check(v)
    return complex(sum(np.sum(a * b) for a, b in zip(u.blocks, v.blocks)))


def compact_conjugation(shape: TensorShape) -> ExtendedInvolution:
    """Conjugation of the compact real slice spanned by the ``y_a``."""
    return ExtendedInvolution(np.eye(shape.dimension), shape, antilinear=True)


def hermitian_form(u: Tensor, v: Tensor, tau: ExtendedInvolution | None = None) -> complex:
    if tau is None:
        tau = compact_conjugation(v.shape)
    return tensor_inner_product(u, tau(v))


def extend_involution(base, shape: TensorShape, antilinear: bool = False) -> ExtendedInvolution:
    base = np.asarray(base)
    n = shape.dimension
    if base.shape != (n, n):
        raise DimensionError("involution does not match the tensor dimension")
    if np.abs(base @ base - np.eye(n)).max() > INVOLUTION_TOL * max(1.0, np.abs(base).max() ** 2):
        raise ValueError("base map is not an involution")
    return ExtendedInvolution(base, shape, antilinear)


def cartan_split(v: Tensor, involution: ExtendedInvolution) -> tuple[Tensor, Tensor]:
    tv = involution(v)
    plus = (v + tv) * 0.5
    return plus, v - plus


def moment_matrix(w: Tensor) -> np.ndarray:
    """Matrix ``M`` with ``H(x.w, w) = sum_ab x_ab M_ab`` for every ``x``.

    Contracting once against this matrix replaces one ``act_algebra`` call per
    Lie algebra direction when forming gradients.
    """
    n = w.shape.dimension
    out = np.zeros((n, n), dtype=complex)
    for (k, c), block in zip(w.shape.slots, w.blocks):
        rank = k + c
        cb = np.conj(block)
        for axis in range(rank):
            rest = [a for a in range(rank) if a != axis]
            corr = np.tensordot(block, cb, axes=(rest, rest))
            out += corr.T if axis < k else -corr
    return out


def outer(*vectors) -> np.ndarray:
    return reduce(np.multiply.outer, [np.asarray(v, dtype=complex) for v in vectors])
