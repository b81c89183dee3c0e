"""Shared helpers for the test suite."""
from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from wickrot.holomorphic import Signature
from wickrot.lie import basis_opq
from wickrot.tensors import Tensor

ROUNDING = 8 * np.finfo(float).eps


def random_opq(sig, rng, scale: float = 0.5) -> np.ndarray:
    """Random element of the identity component of O(p,q) (pseudo-orthonormal frame)."""
    sig = Signature.parse(sig)
    gens = basis_opq(sig).generators
    if not gens:
        return np.eye(sig.n)
    return expm(sum(rng.normal() * scale * x for x in gens))


def random_complex_orthogonal(n: int, rng, scale: float = 0.5) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return expm(scale * (a - a.T) / 2)


def real_vector(x, sig) -> Tensor:
    return Tensor.from_pseudo_frame(np.asarray(x, dtype=float), Signature.parse(sig))


def brute_riemann_scalar(r: np.ndarray, diag) -> float:
    """``g^ac g^bd R_abcd`` by explicit loops."""
    n = len(diag)
    total = 0.0
    for a in range(n):
        for b in range(n):
            total += diag[a] * diag[b] * r[a, b, a, b]
    return total


def brute_kretschmann(r: np.ndarray, diag) -> float:
    n = len(diag)
    total = 0.0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    total += diag[a] * diag[b] * diag[c] * diag[d] * r[a, b, c, d] ** 2
    return total


def non_increasing(norms, slack: float = ROUNDING) -> float:
    """Largest relative increase in a norm sequence (<= slack when monotone)."""
    norms = np.asarray(norms, dtype=float)
    if len(norms) < 2:
        return 0.0
    return float(np.max((norms[1:] - norms[:-1]) / norms[:-1]))


def kulkarni_nomizu(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    return (
        np.einsum("ac,bd->abcd", h, k)
        + np.einsum("bd,ac->abcd", h, k)
        - np.einsum("ad,bc->abcd", h, k)
        - np.einsum("bc,ad->abcd", h, k)
    )


def random_curvature(n: int, rng, terms: int = 3) -> np.ndarray:
    """Random algebraic curvature tensor: a sum of Kulkarni-Nomizu squares."""
    r = np.zeros((n,) * 4)
    for _ in range(terms):
        a = rng.normal(size=(n, n))
        h = a + a.T
        r += rng.choice([-1.0, 1.0]) * kulkarni_nomizu(h, h) / 2
    return r


# (criterion number, passed, detail) rows printed at the end of the session
ACCEPTANCE_LOG: list[tuple[int, bool, str]] = []


class criterion:
    """Context manager recording a pass/fail line for one acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number, self.title, self.detail = number, title, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        detail = self.detail if ok else f"{self.detail} {exc_type.__name__}: {exc}".strip()
        ACCEPTANCE_LOG.append((self.number, ok, f"{self.title}; {detail}"))
        print(f"criterion {self.number}: {'PASS' if ok else 'FAIL'} {self.title}; {detail}")
        return False
