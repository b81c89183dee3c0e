"""JSON curvature documents.

Schema::

    {"dimension": n, "signature": [p, q], "label": "...",
     "riemann": [{"idx": [a, b, c, d], "re": x, "im": 0.0}, ...],
     "derivatives": [{"order": l, "entries": [{"idx": [...], "re": x, "im": 0.0}]}]}

Riemann entries may list just one representative per symmetry class; the rest
are filled in.  Derivative tensors are taken as given.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .curvature import CurvatureBundle, MetricPoint, bianchi_sum
from .holomorphic import Signature

CONFLICT_TOL = 1e-12
BIANCHI_TOL = 1e-8

# (permutation of (a, b, c, d), sign) for the symmetries of R_abcd.
RIEMANN_SYMMETRIES = (
    ((0, 1, 2, 3), 1), ((1, 0, 2, 3), -1), ((0, 1, 3, 2), -1), ((1, 0, 3, 2), 1),
    ((2, 3, 0, 1), 1), ((3, 2, 0, 1), -1), ((2, 3, 1, 0), -1), ((3, 2, 1, 0), 1),
)


class DocumentError(ValueError):
    pass


def _entry(e, n: int, rank: int):
    try:
        idx = tuple(int(i) for i in e["idx"])
        re = float(e["re"])
        im = float(e.get("im", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed entry {e!r}: {exc}") from None
    if len(idx) != rank:
        raise DocumentError(f"entry {list(idx)} must have {rank} indices")
    if any(i < 0 or i >= n for i in idx):
        raise DocumentError(f"index {list(idx)} out of range for dimension {n}")
    if im != 0.0:
        raise DocumentError(f"entry {list(idx)} has imaginary part {im}; real-slice data must be real")
    return idx, re


def complete_riemann(entries, n: int) -> np.ndarray:
    """Fill in all components from one representative per symmetry class."""
    r = np.zeros((n,) * 4)
    known = np.zeros((n,) * 4, dtype=bool)
    for e in entries:
        idx, x = _entry(e, n, 4)
        for perm, sign in RIEMANN_SYMMETRIES:
            j = tuple(idx[p] for p in perm)
            val = sign * x
            if j == idx and sign < 0 and x != 0.0:
                raise DocumentError(f"entry {list(idx)} = {x} must vanish by antisymmetry")
            if known[j] and abs(r[j] - val) > CONFLICT_TOL:
                raise DocumentError(
                    f"entry {list(idx)} = {x} conflicts with component {list(j)} = {r[j]}"
                )
            r[j], known[j] = val, True
    return r


def parse_document(doc: dict) -> CurvatureBundle:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    try:
        n = int(doc["dimension"])
        sig = Signature.parse(doc["signature"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"document needs 'dimension' and 'signature': {exc}") from None
    if sig.n != n:
        raise DocumentError(f"signature {sig} does not match dimension {n}")
    r = complete_riemann(doc.get("riemann", []), n)
    b = bianchi_sum(r)
    worst = np.unravel_index(np.argmax(np.abs(b)), b.shape) if b.size else None
    if worst is not None and abs(b[worst]) > BIANCHI_TOL:
        raise DocumentError(
            f"first Bianchi identity fails at {[int(i) for i in worst]} (residual {abs(b[worst]):.3e})"
        )
    derivatives = []
    for k, d in enumerate(doc.get("derivatives", []) or [], start=1):
        if isinstance(d, dict):
            order, entries = int(d.get("order", k)), d.get("entries", [])
        else:
            order, entries = k, d
        if order != k:
            raise DocumentError(f"derivative tensors must be listed by order; expected {k}, got {order}")
        t = np.zeros((n,) * (4 + order))
        for e in entries:
            idx, x = _entry(e, n, 4 + order)
            t[idx] = x
        derivatives.append(t)
    return CurvatureBundle(MetricPoint(sig), r, tuple(derivatives), str(doc.get("label", "")))


def parse_input(path) -> CurvatureBundle:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from None
    return parse_document(doc)


def _representative(idx) -> bool:
    a, b, c, d = idx
    return a < b and c < d and (a, b) <= (c, d)


def to_document(bundle: CurvatureBundle) -> dict:
    r = bundle.riemann
    entries = [
        {"idx": [int(i) for i in idx], "re": float(r[idx]), "im": 0.0}
        for idx in zip(*np.nonzero(r))
        if _representative(idx)
    ]
    doc = {
        "dimension": bundle.n,
        "signature": list(bundle.signature.as_tuple()),
        "label": bundle.label,
        "riemann": entries,
    }
    if bundle.derivatives:
        doc["derivatives"] = [
            {
                "order": l,
                "entries": [
                    {"idx": [int(i) for i in idx], "re": float(t[idx]), "im": 0.0}
                    for idx in zip(*np.nonzero(t))
                ],
            }
            for l, t in enumerate(bundle.derivatives, start=1)
        ]
    return doc


def write_document(bundle: CurvatureBundle, path) -> None:
    Path(path).write_text(json.dumps(to_document(bundle), indent=2) + "\n", encoding="utf-8")
