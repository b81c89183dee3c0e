"""Purity types and Wick-rotation verdicts for curvature bundles."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .curvature import CurvatureBundle, derived_curvature
from .holomorphic import DimensionError, Signature, build_compatible_triple
from .invariants import (
    DEFAULT_DEGREE,
    InvariantVector,
    curvature_scale,
    evaluate_invariants,
    generate_contractions,
    invariant_distance,
    relative_difference,
    tensor_invariants,
)
from .kempf_ness import (
    ClosedVerdict,
    ContractError,
    FlowConfig,
    FlowResult,
    Group,
    IndeterminateError,
    intersect_orbits,
    limit_from_flow,
    norm_flow,
    orbit_closed,
)
from .lie import GroupElement, conjugate_involution
from .tensors import Tensor, act_group, cartan_split, compact_conjugation

log = logging.getLogger(__name__)

SPLIT_TOL = 1e-8
WITNESS_TOL = 1e-8
INVARIANT_TOL = 1e-8

Relation = Literal["wick-rotated", "not-wick-rotated", "indeterminate"]


@dataclass(frozen=True, eq=False)
class PurityReport:
    subject: Literal["riemann", "weyl"]
    verdict: frozenset[str]
    witness: np.ndarray | None = field(repr=False)
    flow: FlowResult | None = field(repr=False)
    indeterminate: bool = False
    residuals: dict = field(default_factory=dict)
    signature: Signature | None = None

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "verdict": sorted(self.verdict),
            "indeterminate": self.indeterminate,
            "witness": None if self.witness is None else self.witness.tolist(),
            "residuals": self.residuals,
            "split_tol": SPLIT_TOL,
            "flow": self.flow.summary() if self.flow else None,
        }


@dataclass(frozen=True, eq=False)
class WickVerdict:
    relation: Relation
    invariant_distance: float
    relative_difference: float
    closure_a: ClosedVerdict | None = field(repr=False)
    closure_b: ClosedVerdict | None = field(repr=False)
    alignment: GroupElement | None = field(repr=False)
    orbit_distance: float | None = None
    limits_match: bool | None = None
    reason: str = ""
    tol: float = INVARIANT_TOL

    def as_dict(self) -> dict:
        def closure(c):
            if c is None:
                return None
            return {"closed": c.closed, "caveat": c.caveat, "flow": c.certificate.summary()}

        return {
            "relation": self.relation,
            "invariant_distance": self.invariant_distance,
            "relative_difference": self.relative_difference,
            "invariant_tol": self.tol,
            "orbit_distance": self.orbit_distance,
            "limits_match": self.limits_match,
            "reason": self.reason,
            "closure_a": closure(self.closure_a),
            "closure_b": closure(self.closure_b),
            "alignment": None if self.alignment is None else _complex_matrix_json(self.alignment.matrix),
        }


def _complex_matrix_json(m: np.ndarray) -> dict:
    return {"re": np.real(m).tolist(), "im": np.imag(m).tolist()}


def _subject_array(bundle: CurvatureBundle, subject: str) -> np.ndarray:
    if subject == "riemann":
        return bundle.riemann
    if subject == "weyl":
        weyl = derived_curvature(bundle).weyl
        if weyl is None:
            raise DimensionError("the Weyl tensor needs dimension >= 3")
        return weyl
    raise ValueError(f"unknown subject {subject!r}; expected 'riemann' or 'weyl'")


def involution_residual(witness: np.ndarray, array: np.ndarray, sign: int) -> float:
    """``max |W.T - sign T|`` for the slot-wise action of ``W`` on real components."""
    t = Tensor.from_array(array)
    moved = act_group(np.asarray(witness, dtype=complex), t)
    return float(np.abs(moved.components - sign * t.components).max())


def classify_purity(
    bundle: CurvatureBundle, subject: str = "riemann", config: FlowConfig = FlowConfig()
) -> PurityReport:
    """Decide whether some inner Cartan involution fixes (RPE) or negates (RPM)
    the Riemann tensor, or the Weyl tensor for PE/PM.

    The tensor is flowed to a minimal vector ``X = Lambda.T`` over O(p,q).  Minimal
    vectors of a closed orbit form one orbit of the compact group, which commutes
    with ``I_{p,q}``, so the split of ``X`` decides the question and the witness is
    ``Lambda^{-1} I_{p,q} Lambda``.
    """
    labels = ("RPE", "RPM") if subject == "riemann" else ("PE", "PM")
    array = _subject_array(bundle, subject)
    sig = bundle.signature
    tensor = Tensor.from_pseudo_frame(array, sig)
    res = norm_flow(tensor, Group.real(sig), config)

    if res.verdict == "max-iter":
        return PurityReport(subject, frozenset(), None, res, True, signature=sig)
    if res.verdict == "boundary-limit":
        # A non-closed orbit has no minimal vector, so no involution can fix it.
        return PurityReport(subject, frozenset(), None, res, residuals={"closed": False}, signature=sig)

    x = res.minimizer
    plus, minus = cartan_split(x, compact_conjugation(x.shape))
    scale = x.norm()
    residuals = {
        "minus_over_norm": minus.norm() / scale if scale else 0.0,
        "plus_over_norm": plus.norm() / scale if scale else 0.0,
    }
    theta = np.diag(sig.diag).astype(float)
    witness = conjugate_involution(theta, res.group_element.inverse())
    verdict = set()
    if scale == 0.0:
        verdict = set(labels)
    else:
        if minus.norm() < SPLIT_TOL * scale:
            verdict.add(labels[0])
        if plus.norm() < SPLIT_TOL * scale:
            verdict.add(labels[1])
    if verdict:
        for label, sign in zip(labels, (1, -1)):
            if label in verdict:
                residuals[f"witness_{label}"] = involution_residual(witness, array, sign)
    return PurityReport(subject, frozenset(verdict), witness if verdict else None, res,
                        residuals=residuals, signature=sig)


def _invariant_stage(a: CurvatureBundle, b: CurvatureBundle, max_degree: int):
    if len(a.derivatives) != len(b.derivatives):
        words = generate_contractions(max_degree)
        va = tensor_invariants(a.riemann_tensor(), words)
        vb = tensor_invariants(b.riemann_tensor(), words)
        # Derivative data present on one side only cannot be compared; the
        # Riemann words are still a valid necessary test.
        return va, vb
    words = generate_contractions(max_degree, range(1, len(a.derivatives) + 1))
    return evaluate_invariants(a, words), evaluate_invariants(b, words)


def wick_check(
    a: CurvatureBundle,
    b: CurvatureBundle,
    config: FlowConfig = FlowConfig(),
    tol: float = INVARIANT_TOL,
    max_degree: int = DEFAULT_DEGREE,
) -> WickVerdict:
    """Are the curvature tensors of ``a`` and ``b`` in one O(n,C)-orbit?

    Stage 1 compares polynomial invariants; stage 2 certifies closed real orbits
    and searches for a complex orthogonal map between them.
    """
    if a.n != b.n:
        raise DimensionError(f"bundles have dimensions {a.n} and {b.n}")
    # Both tensors already live in the orthonormal frame of the common
    # holomorphic form, so the frame-matching map is the identity.
    build_compatible_triple(a.signature, b.signature)

    va, vb = _invariant_stage(a, b, max_degree)
    dist = invariant_distance(va, vb)
    rel = relative_difference(va, vb)
    common = dict(invariant_distance=dist, relative_difference=rel, tol=tol)
    if rel >= tol:
        return WickVerdict("not-wick-rotated", closure_a=None, closure_b=None, alignment=None,
                           reason="invariants differ", **common)

    ta, tb = a.riemann_tensor(), b.riemann_tensor()
    try:
        ca = orbit_closed(ta, Group.real(a.signature), config)
        cb = orbit_closed(tb, Group.real(b.signature), config)
    except IndeterminateError as exc:
        return WickVerdict("indeterminate", closure_a=None, closure_b=None, alignment=None,
                           reason=str(exc), **common)

    if not (ca.closed and cb.closed):
        la = limit_from_flow(ca.certificate) if not ca.closed else ca.certificate.minimizer
        lb = limit_from_flow(cb.certificate) if not cb.closed else cb.certificate.minimizer
        limits = _limits_match(la, lb, config)
        return WickVerdict("indeterminate", closure_a=ca, closure_b=cb, alignment=None,
                           limits_match=limits, reason="non-closed real orbit", **common)

    group = Group.complexified(a.n)
    try:
        inter = intersect_orbits(ta, tb, group, config)
    except IndeterminateError as exc:
        return WickVerdict("indeterminate", closure_a=ca, closure_b=cb, alignment=None,
                           reason=str(exc), **common)
    if inter.intersect:
        return WickVerdict("wick-rotated", closure_a=ca, closure_b=cb, alignment=inter.element,
                           orbit_distance=inter.distance, reason="closed orbits meet", **common)
    return WickVerdict("not-wick-rotated", closure_a=ca, closure_b=cb, alignment=None,
                       orbit_distance=inter.distance, reason="closed orbits are disjoint", **common)


def _limits_match(la: Tensor, lb: Tensor, config: FlowConfig) -> bool | None:
    if la.max_abs() == 0.0 and lb.max_abs() == 0.0:
        return True
    try:
        return intersect_orbits(la, lb, Group.complexified(la.shape.dimension), config).intersect
    except (ContractError, IndeterminateError):
        return None


@dataclass(frozen=True, eq=False)
class WickSplit:
    a_plus: Tensor
    a_minus: Tensor
    b_plus: Tensor
    b_minus: Tensor
    witness_a: np.ndarray
    witness_b: np.ndarray
    mismatch: float


def _pulled_back_split(bundle: CurvatureBundle, config: FlowConfig):
    sig = bundle.signature
    res = norm_flow(bundle.riemann_tensor(), Group.real(sig), config)
    if res.verdict != "converged-in-orbit":
        raise ContractError(f"{bundle.label or 'bundle'} does not have a closed orbit")
    x = res.minimizer
    plus, minus = cartan_split(x, compact_conjugation(x.shape))
    inv = res.group_element.inverse()
    theta = np.diag(sig.diag).astype(float)
    return act_group(inv, plus), act_group(inv, minus), conjugate_involution(theta, inv)


def wick_split(a: CurvatureBundle, b: CurvatureBundle, config: FlowConfig = FlowConfig()) -> WickSplit:
    """Cartan splits of two Wick-rotated Riemann tensors with respect to their
    witness involutions; the + parts (and the - parts) are checked to share
    invariants.

    Raises:
        ContractError: if the pair is not Wick-rotated with closed orbits, or if
            the split parts fail the cross check.
    """
    verdict = wick_check(a, b, config)
    if verdict.relation != "wick-rotated":
        raise ContractError(f"wick_split needs a wick-rotated pair, got {verdict.relation}")
    ap, am, wa = _pulled_back_split(a, config)
    bp, bm, wb = _pulled_back_split(b, config)
    words = generate_contractions(DEFAULT_DEGREE)
    mismatch = 0.0
    for u, v in ((ap, bp), (am, bm)):
        iu = np.array(tensor_invariants(u, words, real=False).values)
        iv = np.array(tensor_invariants(v, words, real=False).values)
        mismatch = max(mismatch, float(np.max(np.abs(iu - iv) / np.maximum(1.0, np.abs(iu)))))
    if mismatch > INVARIANT_TOL:
        raise ContractError(f"split parts do not pair up (invariant mismatch {mismatch:.3e})")
    return WickSplit(ap, am, bp, bm, wa, wb, mismatch)


def invariant_summary(vec: InvariantVector) -> dict:
    return {"values": list(vec.values), "labels": [w.label for w in vec.words],
            "curvature_scale": curvature_scale(vec)}
