"""Minimal vectors and norm-minimizing flows on O(p,q) and O(n,C) orbits.

The flow minimizes ``log H(g.v, g.v)`` over the non-compact directions
(``p`` for O(p,q), ``i o(n)`` for O(n,C)) with multiplicative updates
``g <- exp(-eta X) g``.  Working with the logarithm makes the gradient scale
free, which matters on orbits whose closure contains 0: there the absolute
gradient shrinks with the norm while the relative one stays bounded away from
zero.

Non-closedness is only ever certified heuristically (a diverging group element
while the norm keeps dropping); verdicts carry a caveat flag saying so.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import expm

from .holomorphic import Signature
from .lie import (
    CartanDecomposition,
    GroupElement,
    cartan_decompose,
    basis_opq,
    complex_cartan,
    from_complex_frame,
    to_complex_frame,
)
from .tensors import (
    ExtendedInvolution,
    Tensor,
    act_algebra,
    act_group,
    cartan_split,
    compact_conjugation,
    hermitian_form,
    moment_matrix,
)

log = logging.getLogger(__name__)

Verdict = Literal["converged-in-orbit", "boundary-limit", "max-iter"]

ARMIJO = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 60
MAX_EXPONENT_STEP = 5.0
# Relative growth of the group element tolerated between relgrad = sqrt(gradTol)
# and relgrad = gradTol before an apparent convergence is read as a limit.
DRIFT_TOL = 1e-2
# A limit point that is still this far from minimal can only be 0.
LIMIT_ZERO_GRAD = 1e-3
ROUNDING_SLACK = 8 * np.finfo(float).eps
PRECISION_FLOOR = 1e3 * np.finfo(float).eps


class IndeterminateError(RuntimeError):
    """The flow ran out of iterations before reaching a verdict."""

    def __init__(self, message: str, result: "FlowResult | None" = None):
        super().__init__(message)
        self.result = result


class ContractError(ValueError):
    """An operation was called outside its precondition."""


@dataclass(frozen=True)
class FlowConfig:
    step_init: float = 0.1
    max_iter: int = 20000
    grad_tol: float = 1e-10
    blowup_bound: float = 1e8
    seed: int = 42
    restarts: int = 8
    dist_tol: float = 1e-6

    def __post_init__(self):
        for name, value in asdict(self).items():
            if name != "seed" and not value > 0:
                raise ValueError(f"FlowConfig.{name} must be positive, got {value}")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Group:
    """O(p,q) for a real signature, or O(n,C) when ``complex`` is set."""

    signature: Signature
    complex: bool = False

    @classmethod
    def real(cls, sig) -> "Group":
        return cls(Signature.parse(sig), False)

    @classmethod
    def complexified(cls, n: int) -> "Group":
        return cls(Signature(n, 0), True)

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def label(self) -> str:
        return f"O({self.n},C)" if self.complex else f"O{self.signature}"

    def cartan(self) -> CartanDecomposition:
        if self.complex:
            return complex_cartan(self.n)
        return cartan_decompose(basis_opq(self.signature))

    def p_directions(self) -> list[np.ndarray]:
        return self.cartan().p_complex_frame()

    def k_directions(self) -> list[np.ndarray]:
        return self.cartan().k_complex_frame()

    def component_representatives(self) -> list[np.ndarray]:
        """One diagonal sign matrix per connected component."""
        n, p = self.n, self.signature.p
        flips = [()]
        if self.complex or self.signature.q == 0 or p == 0:
            flips.append((0,))
        else:
            flips += [(0,), (p,), (0, p)]
        reps = []
        for f in flips:
            d = np.ones(n, dtype=complex)
            d[list(f)] = -1
            reps.append(np.diag(d))
        return reps

    def element(self, matrix_y: np.ndarray) -> GroupElement:
        if self.complex:
            return GroupElement(np.asarray(matrix_y, dtype=complex), "complex")
        return GroupElement(from_complex_frame(matrix_y, self.signature).real, "real", self.signature)


@dataclass(frozen=True, eq=False)
class FlowResult:
    minimizer: Tensor
    group_element: GroupElement
    group_norm: float
    final_grad_norm: float
    iterations: int
    verdict: Verdict
    norms: tuple[float, ...] = field(repr=False)
    config: FlowConfig = field(default_factory=FlowConfig, repr=False)
    group: Group | None = None
    caveats: tuple[str, ...] = ()

    def summary(self) -> dict:
        return {
            "verdict": self.verdict,
            "group": self.group.label if self.group else None,
            "iterations": self.iterations,
            "group_norm": self.group_norm,
            "final_grad_norm": self.final_grad_norm,
            "initial_norm_sq": self.norms[0],
            "final_norm_sq": self.norms[-1],
            "caveats": list(self.caveats),
            "config": self.config.as_dict(),
        }


@dataclass(frozen=True, eq=False)
class ClosedVerdict:
    closed: bool
    certificate: FlowResult
    caveat: str | None = None


@dataclass(frozen=True, eq=False)
class Intersection:
    intersect: bool
    distance: float
    element: GroupElement | None = field(repr=False)
    flows: tuple[FlowResult, FlowResult] = field(repr=False)


def _norm_inf(m: np.ndarray) -> float:
    return float(np.abs(m).sum(axis=1).max())


def _relative_gradient(w: Tensor, directions, f: float) -> np.ndarray:
    mu = moment_matrix(w)
    return np.array([2.0 * np.real(np.sum(x * mu)) / f for x in directions])


def is_minimal(
    v: Tensor,
    decomp: CartanDecomposition,
    tau: ExtendedInvolution | None = None,
    grad_tol: float = 1e-10,
) -> bool:
    """Minimal-vector test ``Re H(x.v_+, v_-) = 0`` for every ``x`` in ``p``.

    ``decomp`` supplies ``p`` (or ``i o(n)`` for the complex group); ``tau`` is
    the compact-slice conjugation extended to the shape of ``v``.
    """
    if tau is None:
        tau = compact_conjugation(v.shape)
    plus, minus = cartan_split(v, tau)
    scale = 1.0 + hermitian_form(v, v, tau).real
    worst = 0.0
    for x in decomp.p_complex_frame():
        worst = max(worst, abs(hermitian_form(act_algebra(x, plus), minus, tau).real))
    return worst < grad_tol * scale


def norm_flow(v: Tensor, group: Group, config: FlowConfig = FlowConfig()) -> FlowResult:
    """Descend ``log H(g.v, g.v)`` along the non-compact directions of ``group``.

    Raises:
        FloatingPointError: on a non-finite intermediate, with the iteration index.
    """
    n = group.n
    g = np.eye(n, dtype=complex)

    def result(w, it, verdict, grad, norms, caveats=()):
        return FlowResult(
            minimizer=w,
            group_element=group.element(g),
            group_norm=_norm_inf(g),
            final_grad_norm=grad,
            iterations=it,
            verdict=verdict,
            norms=tuple(norms),
            config=config,
            group=group,
            caveats=tuple(caveats),
        )

    f = hermitian_form(v, v).real
    if f == 0.0:
        return result(v, 0, "converged-in-orbit", 0.0, [0.0])
    directions = group.p_directions()
    if not directions:
        return result(v, 0, "converged-in-orbit", 0.0, [f])

    rank = max(k + c for k, c in v.shape.slots)
    w = v
    grad = _relative_gradient(w, directions, f)
    gnorm = float(np.linalg.norm(grad))
    norms = [f]
    eta = config.step_init
    mark = None
    for it in range(config.max_iter):
        gn = _norm_inf(g)
        if gn > config.blowup_bound:
            return result(w, it, "boundary-limit", gnorm, norms, ("heuristic", "group-blowup"))
        if f == 0.0 or f < (PRECISION_FLOOR * np.linalg.norm(g, 2) ** rank) ** 2 * norms[0]:
            # Rounding noise in w grows like ||g||^rank; once it rivals |w| the
            # iterate is numerically 0 and any apparent minimum would be noise.
            return result(w, it, "boundary-limit", gnorm, norms, ("heuristic", "precision-floor"))
        if mark is None and gnorm < math.sqrt(config.grad_tol):
            mark = gn
        if gnorm < config.grad_tol:
            if mark is not None and gn > mark * (1 + DRIFT_TOL):
                return result(w, it, "boundary-limit", gnorm, norms, ("heuristic", "group-drift"))
            return result(w, it, "converged-in-orbit", gnorm, norms)

        x = sum(c * d for c, d in zip(grad, directions))
        eta_try = min(eta, MAX_EXPONENT_STEP / max(np.linalg.norm(x, 2), 1e-300))
        log_f = math.log(f)
        for _ in range(MAX_BACKTRACKS):
            step = expm(-eta_try * x)
            try:
                w_new = act_group(step, w)
            except (FloatingPointError, np.linalg.LinAlgError) as exc:
                raise FloatingPointError(f"non-finite iterate at iteration {it}: {exc}") from None
            f_new = hermitian_form(w_new, w_new).real
            if not np.isfinite(f_new):
                raise FloatingPointError(f"non-finite norm at iteration {it}")
            decrease = log_f - math.log(f_new) if f_new > 0 else math.inf
            if decrease >= ARMIJO * eta_try * gnorm**2 and decrease > ROUNDING_SLACK:
                grad_new = _relative_gradient(w_new, directions, f_new)
                break
            if f_new <= f * (1 + ROUNDING_SLACK):
                # Armijo is below float resolution near the minimum; accept steps
                # that keep the norm flat and shrink the gradient.
                grad_new = _relative_gradient(w_new, directions, f_new)
                if np.linalg.norm(grad_new) < gnorm:
                    break
            eta_try *= BACKTRACK
        else:
            log.debug("line search stalled at iteration %d (|grad|=%.3e)", it, gnorm)
            return result(w, it, "max-iter", gnorm, norms, ("line-search-stalled",))
        log.debug("it=%d F=%.17g |grad|=%.3e eta=%.3e", it, f_new, gnorm, eta_try)
        g = step @ g
        if not np.all(np.isfinite(g)):
            raise FloatingPointError(f"non-finite group element at iteration {it}")
        w, f, grad = w_new, f_new, grad_new
        gnorm = float(np.linalg.norm(grad))
        norms.append(f)
        eta = eta_try * 2.0
    return result(w, config.max_iter, "max-iter", gnorm, norms)


def orbit_closed(v: Tensor, group: Group, config: FlowConfig = FlowConfig()) -> ClosedVerdict:
    res = norm_flow(v, group, config)
    if res.verdict == "converged-in-orbit":
        return ClosedVerdict(True, res)
    if res.verdict == "boundary-limit":
        return ClosedVerdict(False, res, "heuristic")
    raise IndeterminateError(
        f"flow on {group.label} undecided after {res.iterations} iterations "
        f"(|grad|={res.final_grad_norm:.3e}); raise max_iter",
        res,
    )


def limit_from_flow(res: FlowResult) -> Tensor:
    """Clean the terminal point of a boundary-limit flow into the limit tensor."""
    w = res.minimizer
    if res.final_grad_norm > LIMIT_ZERO_GRAD:
        return Tensor.zeros(w.shape)
    cutoff = 1e-12 * w.max_abs()
    return w.with_blocks(np.where(np.abs(b) < cutoff, 0, b) for b in w.blocks)


def orbit_limit(v: Tensor, group: Group, config: FlowConfig = FlowConfig()) -> Tensor:
    """Limit point of the flow on a non-closed orbit; its orbit is the closed
    orbit in the closure.

    Raises:
        ContractError: if the orbit of ``v`` is closed.
        IndeterminateError: if the flow hit max_iter.
    """
    res = norm_flow(v, group, config)
    if res.verdict == "converged-in-orbit":
        raise ContractError("orbit is closed; it has no boundary limit")
    if res.verdict == "max-iter":
        raise IndeterminateError("flow did not terminate", res)
    return limit_from_flow(res)


def _descend_distance(start, source, target, directions, max_iter=3000, tol=1e-15):
    """Minimize ``||m.source - target||^2`` over ``m = exp(...) start``."""
    m = np.asarray(start, dtype=complex)
    w = act_group(m, source)
    diff = w - target
    d = hermitian_form(diff, diff).real
    if not directions:
        return m, d
    eta = 0.1
    for _ in range(max_iter):
        grad = np.array([2.0 * hermitian_form(act_algebra(x, w), diff).real for x in directions])
        gnorm = float(np.linalg.norm(grad))
        if d < tol or gnorm < 1e-14:
            break
        x = sum(c * e for c, e in zip(grad, directions))
        eta_try = min(eta, MAX_EXPONENT_STEP / max(np.linalg.norm(x, 2), 1e-300))
        for _ in range(MAX_BACKTRACKS):
            step = expm(-eta_try * x)
            w_new = act_group(step, w)
            diff_new = w_new - target
            d_new = hermitian_form(diff_new, diff_new).real
            if d_new <= d - ARMIJO * eta_try * gnorm**2:
                break
            eta_try *= BACKTRACK
        else:
            break
        m = step @ m
        w, diff, d = w_new, diff_new, d_new
        eta = eta_try * 2.0
    return m, d


def k_align(x1: Tensor, x2: Tensor, group: Group, config: FlowConfig = FlowConfig()):
    """Best ``k`` in the maximal compact subgroup bringing ``x1`` to ``x2``.

    Restarts run over every connected component, the first from the component
    representative itself and the rest from seeded random rotations.

    Returns:
        (distance, y-frame matrix of k)
    """
    rng = np.random.default_rng(config.seed)
    k_dirs = group.k_directions()
    best = (math.inf, None)
    for comp in group.component_representatives():
        for r in range(config.restarts if k_dirs else 1):
            start = comp
            if r:
                u = rng.uniform(-math.pi, math.pi, size=len(k_dirs))
                start = expm(sum(c * x for c, x in zip(u, k_dirs))) @ comp
            m, d = _descend_distance(start, x1, x2, k_dirs)
            if d < best[0]:
                best = (d, m)
            if best[0] < 1e-24:
                return math.sqrt(max(best[0], 0.0)), best[1]
    return math.sqrt(max(best[0], 0.0)), best[1]


def intersect_orbits(
    v1: Tensor, v2: Tensor, group: Group, config: FlowConfig = FlowConfig()
) -> Intersection:
    """Decide whether two closed orbits coincide.

    Both tensors are flowed to minimal vectors; minimal vectors of one closed
    orbit form a single orbit of the maximal compact subgroup, so the search
    first runs over that compact group and is then polished over the full Lie
    algebra.

    Raises:
        ContractError: if either orbit is not closed.
    """
    flows = []
    for v in (v1, v2):
        cv = orbit_closed(v, group, config)
        if not cv.closed:
            raise ContractError("orbits_intersect needs closed orbits")
        flows.append(cv.certificate)
    r1, r2 = flows
    x1, x2 = r1.minimizer, r2.minimizer
    h1 = r1.group_element.complex_matrix() if not group.complex else r1.group_element.matrix
    h2 = r2.group_element.complex_matrix() if not group.complex else r2.group_element.matrix
    scale = 1.0 + v2.norm()
    threshold = config.dist_tol * scale
    if abs(x1.norm() - x2.norm()) > threshold:
        return Intersection(False, abs(x1.norm() - x2.norm()), None, (r1, r2))

    _, k = k_align(x1, x2, group, config)
    start = np.linalg.inv(h2) @ k @ h1
    full = group.k_directions() + group.p_directions()
    m, d = _descend_distance(start, v1, v2, full, max_iter=500)
    dist = math.sqrt(max(d, 0.0))
    ok = dist < threshold
    return Intersection(ok, dist, group.element(m) if ok else None, (r1, r2))


def orbits_intersect(v1: Tensor, v2: Tensor, group: Group, config: FlowConfig = FlowConfig()) -> bool:
    return intersect_orbits(v1, v2, group, config).intersect


def to_tensor(array, sig: Signature) -> Tensor:
    """Real covariant components in the pseudo-orthonormal frame -> Tensor."""
    return Tensor.from_pseudo_frame(array, sig)


__all__ = [
    "ClosedVerdict",
    "ContractError",
    "FlowConfig",
    "FlowResult",
    "Group",
    "IndeterminateError",
    "Intersection",
    "intersect_orbits",
    "is_minimal",
    "k_align",
    "limit_from_flow",
    "norm_flow",
    "orbit_closed",
    "orbit_limit",
    "orbits_intersect",
    "to_complex_frame",
]
