"""Full-contraction polynomial invariants of curvature tensors.

A word of degree ``d`` in the Riemann tensor is encoded by a graph on ``2d``
"pair nodes" (one per antisymmetric index pair of each factor).  Contracting
an index of pair ``X`` with an index of pair ``Y`` is an edge ``X - Y``; every
node has degree two and self-loops vanish, so a word is a disjoint union of
cycles of length >= 2.  Up to an overall sign the value only depends on this
graph modulo relabelling factors and swapping the two pairs of a factor, which
is the canonical form used for deduplication.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .curvature import CurvatureBundle
from .holomorphic import DimensionError
from .tensors import Tensor

MAX_DEGREE = 4
DEFAULT_DEGREE = 3
IMAG_TOL = 1e-12
VSI_TOL = 1e-10
_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


class InvariantError(ValueError):
    pass


@dataclass(frozen=True)
class ContractionWord:
    """One full contraction.

    ``factors`` lists what each factor is: 0 for the Riemann tensor, ``l`` for the
    ``l``-th covariant derivative.  ``pairing`` matches slots, numbered
    consecutively across factors.
    """

    degree: int
    pairing: tuple[tuple[int, int], ...]
    label: str
    factors: tuple[int, ...]
    key: tuple = field(repr=False, compare=True)

    def text(self) -> str:
        return f"{self.label}: " + " ".join(f"{a}-{b}" for a, b in self.pairing)


@dataclass(frozen=True, eq=False)
class InvariantVector:
    values: tuple[float, ...]
    words: tuple[ContractionWord, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.values) != len(self.words):
            raise ValueError("one value per word is required")

    def __len__(self) -> int:
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def value(self, label: str) -> float:
        for w, v in zip(self.words, self.values):
            if w.label == label:
                return v
        raise KeyError(label)

    def as_dict(self) -> dict:
        return {w.label: v for w, v in zip(self.words, self.values)}


# -- canonical forms -------------------------------------------------------

def _canon_cycle(cycle: tuple[int, ...]) -> tuple[int, ...]:
    k = len(cycle)
    cands = []
    for seq in (cycle, cycle[::-1]):
        for s in range(k):
            cands.append(seq[s:] + seq[:s])
    return min(cands)


def _canon_graph(cycles) -> tuple:
    return tuple(sorted((len(c), _canon_cycle(tuple(c))) for c in cycles))


@lru_cache(maxsize=None)
def _node_maps(degree: int) -> tuple[tuple[int, ...], ...]:
    """Node relabellings from permuting factors and swapping pairs within factors."""
    maps = []
    for perm in itertools.permutations(range(degree)):
        for swaps in itertools.product((0, 1), repeat=degree):
            maps.append(tuple(2 * perm[f] + (s ^ swaps[f]) for f in range(degree) for s in (0, 1)))
    return tuple(maps)


def _canonical_key(cycles, degree: int) -> tuple:
    return min(_canon_graph([[m[x] for x in c] for c in cycles]) for m in _node_maps(degree))


def _cycle_covers(nodes: tuple[int, ...]):
    """All partitions of ``nodes`` into cycles of length >= 2 (up to rotation/reflection)."""
    if not nodes:
        yield []
        return
    first, rest = nodes[0], nodes[1:]
    for k in range(1, len(rest) + 1):
        for others in itertools.combinations(rest, k):
            remaining = tuple(x for x in rest if x not in others)
            if k == 1:
                orders = [others]
            else:
                orders = [p for p in itertools.permutations(others) if p[0] < p[-1]]
            for order in orders:
                for tail in _cycle_covers(remaining):
                    yield [(first, *order)] + tail


def _pairing_from_cycles(cycles) -> tuple[tuple[int, int], ...]:
    """Slot matching realizing the graph.  Node ``2f+s`` owns slots ``4f+2s`` (in)
    and ``4f+2s+1`` (out)."""
    pairs = []
    for c in cycles:
        if len(c) == 2:
            x, y = c
            pairs += [(2 * x, 2 * y), (2 * x + 1, 2 * y + 1)]
        else:
            k = len(c)
            for j in range(k):
                pairs.append((2 * c[j] + 1, 2 * c[(j + 1) % k]))
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


@lru_cache(maxsize=None)
def _riemann_words(degree: int) -> tuple[ContractionWord, ...]:
    # Mark whole orbits at once so each class is canonicalized only once.
    marked, keys = set(), []
    for cycles in _cycle_covers(tuple(range(2 * degree))):
        if _canon_graph(cycles) in marked:
            continue
        orbit = {_canon_graph([[m[x] for x in c] for c in cycles]) for m in _node_maps(degree)}
        marked |= orbit
        keys.append(min(orbit))
    words = []
    for i, key in enumerate(sorted(keys)):
        cycles = [list(c) for _, c in key]
        words.append(
            ContractionWord(
                degree=degree,
                pairing=_pairing_from_cycles(cycles),
                label=f"R^{degree} #{i + 1}",
                factors=(0,) * degree,
                key=("R", degree, key),
            )
        )
    return tuple(words)


def _derivative_words(order: int, max_degree: int) -> list[ContractionWord]:
    rank = 4 + order
    out = []
    if order % 2 == 0:
        pairs = [(0, 2), (1, 3)] + [(4 + 2 * j, 5 + 2 * j) for j in range(order // 2)]
        out.append(ContractionWord(1, tuple(pairs), f"D{order} trace", (order,), ("D", order, 1)))
    if max_degree >= 2:
        pairs = tuple((i, rank + i) for i in range(rank))
        out.append(ContractionWord(2, pairs, f"D{order} norm", (order, order), ("D", order, 2)))
    return out


def generate_contractions(max_degree: int = DEFAULT_DEGREE, derivative_orders=()) -> list[ContractionWord]:
    """Riemann words of degree 1..max_degree followed by derivative words.

    Derivative tensors contribute a trace word when their valence is even and a
    squared-norm word when ``max_degree >= 2``.
    """
    if not isinstance(max_degree, (int, np.integer)) or max_degree < 1:
        raise ValueError("max_degree must be a positive integer")
    if max_degree > MAX_DEGREE:
        raise ValueError(f"max_degree {max_degree} exceeds the supported maximum {MAX_DEGREE}")
    words = [w for d in range(1, max_degree + 1) for w in _riemann_words(d)]
    for order in derivative_orders:
        words += _derivative_words(int(order), max_degree)
    return words


def find_word(words, name: str) -> ContractionWord:
    """Look up the scalar-curvature or Kretschmann word by structure."""
    cycles = {"scalar": [[0, 1]], "kretschmann": [[0, 2], [1, 3]]}[name]
    degree = len(cycles)
    key = ("R", degree, _canonical_key(cycles, degree))
    for w in words:
        if w.key == key:
            return w
    raise KeyError(name)


# -- evaluation ------------------------------------------------------------

def _einsum_spec(word: ContractionWord, ranks: list[int]) -> str:
    letter = {}
    for i, (a, b) in enumerate(word.pairing):
        letter[a] = letter[b] = _LETTERS[i]
    subs, pos = [], 0
    for r in ranks:
        subs.append("".join(letter[pos + j] for j in range(r)))
        pos += r
    if pos != 2 * len(word.pairing):
        raise DimensionError(f"word {word.label} does not match the tensor ranks {ranks}")
    return ",".join(subs) + "->"


def contract_word(word: ContractionWord, tensors: dict[int, np.ndarray]) -> complex:
    """Evaluate a word on complex-frame components (metric = identity)."""
    try:
        arrays = [tensors[f] for f in word.factors]
    except KeyError as exc:
        raise DimensionError(f"word {word.label} needs derivative order {exc.args[0]}") from None
    spec = _einsum_spec(word, [a.ndim for a in arrays])
    return complex(np.einsum(spec, *arrays, optimize=True))


def tensor_invariants(riemann: Tensor, words, derivatives=(), real: bool = True) -> InvariantVector:
    """Invariants of a Riemann-type tensor given in the complex orthonormal frame.

    With ``real=True`` the values must be real up to ``IMAG_TOL`` (relative), as
    they are for any tensor coming from a real slice.
    """
    tensors = {0: riemann.components}
    for l, t in enumerate(derivatives, start=1):
        tensors[l] = t.components
    values = []
    for w in words:
        z = contract_word(w, tensors)
        if real:
            if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
                raise InvariantError(f"word {w.label} has imaginary residue {z.imag:.3e}")
            values.append(float(z.real))
        else:
            values.append(z)
    return InvariantVector(tuple(values), tuple(words))


def evaluate_invariants(bundle: CurvatureBundle, words=None, max_degree: int = DEFAULT_DEGREE) -> InvariantVector:
    if words is None:
        words = generate_contractions(max_degree, range(1, len(bundle.derivatives) + 1))
    return tensor_invariants(bundle.riemann_tensor(), words, bundle.derivative_tensors())


def invariant_distance(a: InvariantVector, b: InvariantVector) -> float:
    """Max over words of ``|a_i - b_i|`` scaled back to curvature units.

    A degree-``d`` difference is divided by ``m^(1-1/d)`` with ``m = max(|a_i|, |b_i|)``,
    so each entry is comparable to a difference of curvature components.
    """
    _check_same_words(a, b)
    worst = 0.0
    for w, x, y in zip(a.words, a.values, b.values):
        diff = abs(x - y)
        if diff == 0.0:
            continue
        m = max(abs(x), abs(y))
        worst = max(worst, diff / m ** (1.0 - 1.0 / w.degree))
    return worst


def relative_difference(a: InvariantVector, b: InvariantVector) -> float:
    """Max over words of ``|a_i - b_i| / max(1, |a_i|, |b_i|)``."""
    _check_same_words(a, b)
    return max(
        (abs(x - y) / max(1.0, abs(x), abs(y)) for x, y in zip(a.values, b.values)),
        default=0.0,
    )


def _check_same_words(a: InvariantVector, b: InvariantVector):
    if [w.key for w in a.words] != [w.key for w in b.words]:
        raise DimensionError("invariant vectors were generated from different word lists")


def curvature_scale(v: InvariantVector) -> float:
    return max((abs(x) ** (1.0 / w.degree) for w, x in zip(v.words, v.values)), default=0.0)


def is_vsi(bundle: CurvatureBundle, max_degree: int = DEFAULT_DEGREE, tol: float = VSI_TOL) -> bool:
    vec = evaluate_invariants(bundle, max_degree=max_degree)
    return all(abs(x) < tol for x in vec.values)


__all__ = [
    "ContractionWord",
    "InvariantVector",
    "curvature_scale",
    "evaluate_invariants",
    "find_word",
    "generate_contractions",
    "invariant_distance",
    "is_vsi",
    "relative_difference",
    "tensor_invariants",
]
