"""Pointwise curvature data in a pseudo-orthonormal frame.

A bundle holds real components of the Riemann tensor ``R_abcd`` (and optionally
of its covariant derivatives) at one point, with respect to a frame whose
metric is ``diag(+1,...,+1,-1,...,-1)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .holomorphic import DimensionError, Signature
from .tensors import Tensor

SYMMETRY_TOL = 1e-10

CATALOG_NAMES = ("s2xs2", "lorentz_L", "neutral_N", "ppwave_vsi", "flat")


class CurvatureError(ValueError):
    """Components violate the algebraic symmetries of a curvature tensor."""


@dataclass(frozen=True)
class MetricPoint:
    signature: Signature
    pseudo_orthonormal: bool = True

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def diag(self) -> np.ndarray:
        return self.signature.diag

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.signature.diag).astype(float)


def riemann_residuals(r: np.ndarray) -> dict[str, float]:
    """Largest violation of each algebraic symmetry of ``R_abcd``."""
    return {
        "antisym_first": float(np.abs(r + r.transpose(1, 0, 2, 3)).max(initial=0.0)),
        "antisym_second": float(np.abs(r + r.transpose(0, 1, 3, 2)).max(initial=0.0)),
        "pair_exchange": float(np.abs(r - r.transpose(2, 3, 0, 1)).max(initial=0.0)),
        "bianchi": float(np.abs(bianchi_sum(r)).max(initial=0.0)),
    }


def bianchi_sum(r: np.ndarray) -> np.ndarray:
    """``R_abcd + R_acdb + R_adbc``."""
    return r + r.transpose(0, 2, 3, 1) + r.transpose(0, 3, 1, 2)


@dataclass(frozen=True, eq=False)
class CurvatureBundle:
    metric: MetricPoint
    riemann: np.ndarray = field(repr=False)
    derivatives: tuple[np.ndarray, ...] = field(default=(), repr=False)
    label: str = ""
    convention: str = "plus-first"

    def __post_init__(self):
        n = self.metric.n
        r = np.array(self.riemann, dtype=float)
        if r.shape != (n,) * 4:
            raise DimensionError(f"Riemann tensor must have shape {(n,) * 4}, got {r.shape}")
        if not np.all(np.isfinite(r)):
            raise CurvatureError("Riemann tensor has non-finite entries")
        tol = SYMMETRY_TOL * max(1.0, float(np.abs(r).max(initial=0.0)))
        bad = {k: v for k, v in riemann_residuals(r).items() if v > tol}
        if bad:
            raise CurvatureError(f"Riemann symmetry residuals exceed {tol:g}: {bad}")
        r.flags.writeable = False
        derivs = []
        for l, t in enumerate(self.derivatives, start=1):
            t = np.array(t, dtype=float)
            if t.ndim < 5 or any(s != n for s in t.shape):
                raise DimensionError(f"derivative tensor {l} must be a rank >= 5 array of size {n}")
            t.flags.writeable = False
            derivs.append(t)
        object.__setattr__(self, "riemann", r)
        object.__setattr__(self, "derivatives", tuple(derivs))

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def signature(self) -> Signature:
        return self.metric.signature

    def riemann_tensor(self) -> Tensor:
        """Riemann tensor in the complex orthonormal frame."""
        return Tensor.from_pseudo_frame(self.riemann, self.signature)

    def derivative_tensors(self) -> list[Tensor]:
        return [Tensor.from_pseudo_frame(t, self.signature) for t in self.derivatives]

    def same_components(self, other: "CurvatureBundle") -> bool:
        return (
            self.signature == other.signature
            and np.array_equal(self.riemann, other.riemann)
            and len(self.derivatives) == len(other.derivatives)
            and all(np.array_equal(a, b) for a, b in zip(self.derivatives, other.derivatives))
        )

    def transformed(self, lam: np.ndarray) -> "CurvatureBundle":
        """Components in the frame ``e'_a = e_b (lam^{-1})^b_a`` for ``lam`` in O(p,q).

        Equivalently the tensor pushed forward by ``lam``: every covariant slot is
        multiplied by ``lam^{-T}``.
        """
        m = np.linalg.inv(np.asarray(lam, dtype=float)).T

        def push(t):
            for axis in range(t.ndim):
                t = np.moveaxis(np.tensordot(m, t, axes=(1, axis)), 0, axis)
            return t

        return CurvatureBundle(
            self.metric, push(self.riemann), tuple(push(t) for t in self.derivatives), self.label
        )


def flat_bundle(sig, label: str = "") -> CurvatureBundle:
    sig = Signature.parse(sig)
    return CurvatureBundle(MetricPoint(sig), np.zeros((sig.n,) * 4), (), label or f"flat{sig}")


def constant_curvature_block(dim: int, k: float, sig) -> CurvatureBundle:
    """``R_abcd = K (g_ac g_bd - g_ad g_bc)`` in dimension ``dim``."""
    sig = Signature.parse(sig)
    if dim < 2:
        raise ValueError("constant curvature needs dimension >= 2")
    if sig.n != dim:
        raise DimensionError(f"signature {sig} does not have dimension {dim}")
    g = np.diag(sig.diag).astype(float)
    r = k * (np.einsum("ac,bd->abcd", g, g) - np.einsum("ad,bc->abcd", g, g))
    return CurvatureBundle(MetricPoint(sig), r, (), f"K={k:g}{sig}")


def _plus_first_order(parts: list[Signature]) -> list[int]:
    """Index order putting every + direction of every summand before the - ones."""
    plus, minus, offset = [], [], 0
    for s in parts:
        plus += range(offset, offset + s.p)
        minus += range(offset + s.p, offset + s.n)
        offset += s.n
    return plus + minus


def direct_sum_metric(a: CurvatureBundle, b: CurvatureBundle) -> CurvatureBundle:
    """Product metric at a point.  The frame is reordered so + directions come first."""
    if a.derivatives or b.derivatives:
        raise ValueError("direct sums of bundles with derivative data are not supported")
    na, nb = a.n, b.n
    n = na + nb
    r = np.zeros((n,) * 4)
    r[:na, :na, :na, :na] = a.riemann
    r[na:, na:, na:, na:] = b.riemann
    order = _plus_first_order([a.signature, b.signature])
    r = r[np.ix_(order, order, order, order)]
    sig = Signature(a.signature.p + b.signature.p, a.signature.q + b.signature.q)
    label = f"{a.label}+{b.label}" if a.label and b.label else ""
    return CurvatureBundle(MetricPoint(sig), r, (), label)


def anti_isometry(bundle: CurvatureBundle) -> CurvatureBundle:
    """The same curvature data for the metric ``-g``.

    ``R^a_bcd`` and all covariant derivatives are unchanged, so every fully
    covariant component flips sign; the frame is reordered to keep + first.
    """
    sig = bundle.signature
    flipped = Signature(sig.q, sig.p)
    order = list(range(sig.p, sig.n)) + list(range(sig.p))

    def reorder(t):
        return -t[np.ix_(*([order] * t.ndim))]

    return CurvatureBundle(
        MetricPoint(flipped),
        reorder(bundle.riemann),
        tuple(reorder(t) for t in bundle.derivatives),
        f"-({bundle.label})" if bundle.label else "",
    )


@dataclass(frozen=True, eq=False)
class DerivedCurvature:
    ricci: np.ndarray = field(repr=False)
    scalar: float
    weyl: np.ndarray | None = field(repr=False)
    weyl_omitted: bool = False


def derived_curvature(bundle: CurvatureBundle) -> DerivedCurvature:
    n = bundle.n
    ginv = np.diag(bundle.signature.diag).astype(float)
    g = ginv
    r = bundle.riemann
    ricci = np.einsum("ac,abcd->bd", ginv, r)
    scalar = float(np.einsum("bd,bd->", ginv, ricci))
    if n < 3:
        return DerivedCurvature(ricci, scalar, None, True)
    kn = (
        np.einsum("ac,bd->abcd", g, ricci)
        - np.einsum("ad,bc->abcd", g, ricci)
        - np.einsum("bc,ad->abcd", g, ricci)
        + np.einsum("bd,ac->abcd", g, ricci)
    )
    gg = np.einsum("ac,bd->abcd", g, g) - np.einsum("ad,bc->abcd", g, g)
    weyl = r - kn / (n - 2) + scalar * gg / ((n - 1) * (n - 2))
    return DerivedCurvature(ricci, scalar, weyl)


def weyl_bundle(bundle: CurvatureBundle) -> CurvatureBundle:
    d = derived_curvature(bundle)
    if d.weyl is None:
        raise DimensionError("the Weyl tensor needs dimension >= 3")
    return CurvatureBundle(bundle.metric, d.weyl, (), f"weyl({bundle.label})")


def sphere2() -> CurvatureBundle:
    return constant_curvature_block(2, 1.0, (2, 0))


def de_sitter2() -> CurvatureBundle:
    return constant_curvature_block(2, 1.0, (1, 1))


def neg_hyperbolic2() -> CurvatureBundle:
    """``-g_{H^2}``: negative definite with ``K = +1``."""
    return anti_isometry(constant_curvature_block(2, -1.0, (2, 0)))


def ppwave_vsi() -> CurvatureBundle:
    """Type N pp-wave curvature with ``R_uxux = 1``, ``R_uyuy = -1``.

    Frame order ``(x, y, z, t)`` with ``e_z = (u+v)/sqrt2``, ``e_t = (u-v)/sqrt2``.
    Written as ``R = A(x) (x) A(x) - A(y) (x) A(y)`` with ``A(w) = u ^ w`` so that every
    component is an exact multiple of 1/2.
    """
    u = np.array([0.0, 0.0, 1.0, 1.0])  # sqrt2 * u in the orthonormal frame
    ex, ey = np.eye(4)[0], np.eye(4)[1]

    def wedge(a, b):
        return np.outer(a, b) - np.outer(b, a)

    ax, ay = wedge(u, ex), wedge(u, ey)
    r = 0.5 * (np.einsum("ab,cd->abcd", ax, ax) - np.einsum("ab,cd->abcd", ay, ay))
    return CurvatureBundle(MetricPoint(Signature(3, 1)), r, (), "ppwave_vsi")


_FLAT_RE = re.compile(r"^flat\(\s*(\d+)\s*,\s*\(?\s*(\d+)\s*,\s*(\d+)\s*\)?\s*\)$")


def catalog_metric(name: str, dim: int | None = None, signature=None) -> CurvatureBundle:
    """Named example bundles.

    ``flat`` takes ``dim`` and ``signature`` (or the inline form ``flat(4,(4,0))``).
    """
    m = _FLAT_RE.match(name.replace(" ", ""))
    if m:
        dim, signature = int(m[1]), (int(m[2]), int(m[3]))
        name = "flat"
    if name == "s2xs2":
        b = direct_sum_metric(sphere2(), sphere2())
    elif name == "lorentz_L":
        b = direct_sum_metric(sphere2(), de_sitter2())
    elif name == "neutral_N":
        b = direct_sum_metric(sphere2(), neg_hyperbolic2())
    elif name == "ppwave_vsi":
        return ppwave_vsi()
    elif name == "flat":
        if signature is None:
            signature = (dim if dim is not None else 4, 0)
        sig = Signature.parse(signature)
        if dim is not None and dim != sig.n:
            raise DimensionError(f"signature {sig} does not have dimension {dim}")
        return flat_bundle(sig, f"flat({sig.n},{sig})")
    else:
        raise KeyError(f"unknown catalog metric {name!r}; valid names: {', '.join(CATALOG_NAMES)}")
    return CurvatureBundle(b.metric, b.riemann, (), name)
