import itertools

import numpy as np
import pytest

from wickrot.classify import classify_purity, involution_residual, wick_check, wick_split
from wickrot.curvature import CurvatureBundle, MetricPoint, catalog_metric, constant_curvature_block
from wickrot.holomorphic import DimensionError, Signature
from wickrot.kempf_ness import ContractError, FlowConfig
from wickrot.tensors import act_group

from support import kulkarni_nomizu, random_curvature, random_opq

CATALOG = ["s2xs2", "lorentz_L", "neutral_N", "ppwave_vsi", "flat(4,(4,0))"]


def boosted(name, seed, scale=0.6):
    b = catalog_metric(name)
    return b.transformed(random_opq(b.signature, np.random.default_rng(seed), scale))


def check_witness(report, array, sig):
    w = report.witness
    assert np.abs(w @ w - np.eye(sig.n)).max() < 1e-8
    eig = np.linalg.eigvalsh(w.T @ np.diag(sig.diag) @ w)
    assert (int(np.sum(eig > 0)), int(np.sum(eig < 0))) == sig.as_tuple()
    for label, sign in (("RPE", 1), ("RPM", -1), ("PE", 1), ("PM", -1)):
        if label in report.verdict:
            assert involution_residual(w, array, sign) < 1e-8


@pytest.mark.parametrize("name", ["s2xs2", "lorentz_L", "neutral_N"])
def test_wick_family_is_purely_electric(name):
    b = catalog_metric(name)
    rep = classify_purity(b)
    assert rep.verdict == {"RPE"}
    check_witness(rep, b.riemann, b.signature)


def test_any_riemannian_bundle_is_purely_electric():
    b = CurvatureBundle(MetricPoint(Signature(4, 0)), random_curvature(4, np.random.default_rng(2)))
    rep = classify_purity(b)
    assert rep.verdict == {"RPE"}
    assert np.array_equal(rep.witness, np.eye(4))


@pytest.mark.parametrize("name,seed", [("lorentz_L", 1), ("neutral_N", 2), ("lorentz_L", 3)])
def test_boosted_frames_still_find_a_witness(name, seed):
    b = boosted(name, seed)
    rep = classify_purity(b)
    assert rep.verdict == {"RPE"}
    assert not np.allclose(rep.witness, np.diag(b.signature.diag))
    check_witness(rep, b.riemann, b.signature)


def test_purely_magnetic_example():
    sig = Signature(3, 1)
    eta = np.diag(sig.diag).astype(float)
    k = np.zeros((4, 4))
    k[0, 3] = k[3, 0] = 1.0
    b = CurvatureBundle(MetricPoint(sig), kulkarni_nomizu(eta, k))
    rep = classify_purity(b)
    assert rep.verdict == {"RPM"}
    check_witness(rep, b.riemann, sig)
    moved = b.transformed(random_opq(sig, np.random.default_rng(8), 0.5))
    rep = classify_purity(moved)
    assert rep.verdict == {"RPM"}
    check_witness(rep, moved.riemann, sig)


def test_mixed_tensor_is_neither():
    sig = Signature(3, 1)
    eta = np.diag(sig.diag).astype(float)
    k = np.zeros((4, 4))
    k[0, 3] = k[3, 0] = 1.0
    h = np.diag([1.0, 2.0, 3.0, 0.5])
    b = CurvatureBundle(MetricPoint(sig), kulkarni_nomizu(eta, k) + kulkarni_nomizu(h, h))
    rep = classify_purity(b)
    assert rep.verdict == frozenset()
    assert rep.residuals["minus_over_norm"] > 1e-3 and rep.residuals["plus_over_norm"] > 1e-3


def test_flat_is_both():
    assert classify_purity(catalog_metric("flat", 4, (2, 2))).verdict == {"RPE", "RPM"}


def test_non_closed_orbit_is_not_pure():
    rep = classify_purity(catalog_metric("ppwave_vsi"))
    assert rep.verdict == frozenset() and not rep.indeterminate
    assert rep.flow.verdict == "boundary-limit"


def test_max_iter_gives_indeterminate_report():
    rep = classify_purity(boosted("lorentz_L", 4), config=FlowConfig(max_iter=2))
    assert rep.indeterminate and rep.verdict == frozenset()


def test_weyl_subject():
    rep = classify_purity(catalog_metric("lorentz_L"), "weyl")
    assert rep.subject == "weyl" and rep.verdict == {"PE"}
    with pytest.raises(DimensionError):
        classify_purity(constant_curvature_block(2, 1.0, (1, 1)), "weyl")
    with pytest.raises(ValueError):
        classify_purity(catalog_metric("s2xs2"), "ricci")


def test_wick_check_examples():
    s = catalog_metric("s2xs2")
    for other in ("lorentz_L", "neutral_N"):
        v = wick_check(s, catalog_metric(other))
        assert v.relation == "wick-rotated"
        assert v.closure_a.closed and v.closure_b.closed
        assert v.invariant_distance < 1e-8
    v = wick_check(s, catalog_metric("flat", 4, (4, 0)))
    assert v.relation == "not-wick-rotated" and abs(v.invariant_distance - 4) < 1e-10


def test_wick_check_with_itself_uses_identity():
    s = catalog_metric("neutral_N")
    v = wick_check(s, s)
    assert v.relation == "wick-rotated"
    assert np.allclose(v.alignment.matrix, np.eye(4))


def test_wick_check_finds_alignment_for_boosted_frame():
    a = catalog_metric("s2xs2")
    b = boosted("lorentz_L", 6)
    v = wick_check(a, b)
    assert v.relation == "wick-rotated"
    moved = act_group(v.alignment, a.riemann_tensor())
    assert (moved - b.riemann_tensor()).max_abs() < 1e-6 * (1 + b.riemann_tensor().norm())
    assert v.alignment.form_residual() < 1e-8


def test_wick_check_non_closed_is_indeterminate():
    v = wick_check(catalog_metric("ppwave_vsi"), catalog_metric("flat", 4, (3, 1)))
    assert v.relation == "indeterminate"
    assert v.limits_match is True


def test_wick_check_dimension_mismatch():
    with pytest.raises(DimensionError):
        wick_check(catalog_metric("s2xs2"), constant_curvature_block(2, 1.0, (2, 0)))


def test_wick_check_is_symmetric_on_the_catalog():
    bundles = {n: catalog_metric(n) for n in CATALOG}
    for x, y in itertools.product(CATALOG, repeat=2):
        assert wick_check(bundles[x], bundles[y]).relation == wick_check(bundles[y], bundles[x]).relation


def test_purity_agrees_across_wick_pairs():
    bundles = {n: catalog_metric(n) for n in CATALOG}
    for x, y in itertools.combinations(CATALOG, 2):
        if wick_check(bundles[x], bundles[y]).relation == "wick-rotated":
            px, py = classify_purity(bundles[x]).verdict, classify_purity(bundles[y]).verdict
            assert px == py
            if bundles[x].signature.is_riemannian or bundles[y].signature.is_riemannian:
                assert "RPE" in px


def test_wick_split_examples():
    s, lor = catalog_metric("s2xs2"), catalog_metric("lorentz_L")
    split = wick_split(s, s)
    assert split.a_minus.max_abs() == 0 and split.b_minus.max_abs() == 0
    assert (split.a_plus - split.b_plus).max_abs() == 0
    split = wick_split(s, lor)
    assert split.a_minus.max_abs() < 1e-12 and split.b_minus.max_abs() < 1e-12
    assert split.mismatch < 1e-8


def test_wick_split_on_boosted_frame():
    s, lor = catalog_metric("s2xs2"), boosted("lorentz_L", 12)
    split = wick_split(s, lor)
    assert split.b_minus.max_abs() < 1e-6
    assert (split.b_plus - lor.riemann_tensor()).max_abs() < 1e-6


def test_wick_split_precondition():
    with pytest.raises(ContractError):
        wick_split(catalog_metric("s2xs2"), catalog_metric("flat", 4, (4, 0)))
