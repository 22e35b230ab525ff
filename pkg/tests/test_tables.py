"""Killing-dimension lookup, embedded data integrity, plane-wave helper."""

import numpy as np
import pytest

from liemetric.bianchi import classify
from liemetric.curvature import MetricForm, curvature_report
from liemetric.normal_form import FAMILY_FORMS, canonical_matrix, reduce
from liemetric.tables import (
    InconsistentCurvature,
    InvalidAlpha,
    load_tables,
    match_tables,
    plane_wave_parameter,
)
from conftest import make_algebra, sample_form_params


def _report(tag, form_id, params):
    a = make_algebra(tag)
    cls = classify(a)
    m = MetricForm(canonical_matrix(form_id, params))
    nf = reduce(a, m, cls)
    return match_tables(cls, nf, curvature_report(a, m))


def test_embedded_data_shape():
    data = load_tables()
    assert data["schema_version"] == 1
    assert len(data["table2"]) == 11
    assert len(data["table3"]) == 22
    assert not any(r["family"] == "euc2" for r in data["table3"])
    assert set(data["normal_forms"]) == set(FAMILY_FORMS)


def test_table2_rows_give_dimension_six():
    for row in load_tables()["table2"]:
        rep = _report(row["family"], row["form_id"], dict(row["params"]))
        assert rep.killing_dim == 6
        assert rep.completeness == "complete"
        assert rep.constant_k is not None
        want = {"0": 0.0, "+": 1.0, "-": -1.0}[row["curvature_sign"]]
        if want == 0.0:
            assert abs(rep.constant_k) < 1e-9
        else:
            assert rep.constant_k * want > 0


SAMPLE3 = {
    ("so3", "so3.berger"): {"alpha": 2.0},
    ("sl2", "sl2.elliptic"): {"alpha": 0.25},
    ("sl2", "sl2.hyperbolic"): {"alpha": -1.0},
    ("sl2", "sl2.nilpotent"): {"eps": -1.0},
    ("affR_plus_R", "h.f5"): {"eps": 1.0},
    ("affR_plus_R", "h.f1"): {"alpha1": 2.0},
    ("affR_plus_R", "h.f2"): {"alpha2": -0.5},
    ("e_mu", "eucmu.lorentzian"): {"alpha2": 1.0},
}


def test_table3_rows_give_dimension_four():
    for row in load_tables()["table3"]:
        params = SAMPLE3.get((row["family"], row["form_id"]), {})
        rep = _report(row["family"], row["form_id"], params)
        assert rep.killing_dim == 4, (row, rep)
        assert rep.isotropy_type == row["isotropy"]
        assert rep.derived_killing == row["derived_killing"]
        assert rep.g_ideal_in_L == row["g_ideal_in_L"]
        assert rep.table3_row is not None


def test_excluded_parameters_do_not_give_dimension_four():
    # inside the excluded bands the metrics fall back to dim 3 (or dim 6)
    assert _report("so3", "so3.berger", {"alpha": 1.0}).killing_dim == 6
    assert _report("affR_plus_R", "h.f1", {"alpha1": 0.5}).killing_dim == 3
    assert _report("affR_plus_R", "h.f2", {"alpha2": 0.5}).killing_dim == 3
    assert _report("affR_plus_R", "h.f2", {"alpha2": -2.0}).killing_dim == 3
    assert _report("e_mu", "eucmu.lorentzian", {"alpha2": 0.5}).killing_dim == 3


def test_exhaustiveness_per_family(rng):
    # every canonical form lands in exactly one of dim {3, 4, 6}, and the
    # exceptional dimensions match the embedded rows for that family
    data = load_tables()
    rows4 = {(r["family"], r["form_id"]) for r in data["table3"]}
    for tag, forms in FAMILY_FORMS.items():
        for form_id in forms:
            params = sample_form_params(form_id, rng, family=tag)
            rep = _report(tag, form_id, params)
            assert rep.killing_dim in (3, 4, 6)
            if rep.killing_dim == 4:
                assert (tag, form_id) in rows4


def test_euc2_never_dimension_four(rng):
    for form_id in FAMILY_FORMS["euc2"]:
        for _ in range(10):
            params = sample_form_params(form_id, rng)
            rep = _report("euc2", form_id, params)
            assert rep.killing_dim in (3, 6)
    # flat boundary values hit dim 6
    assert _report("euc2", "eucmu.riemannian", {"alpha1": 1.0}).killing_dim == 6
    assert _report("euc2", "eucmu.lorentzian", {"alpha2": 1.0}).killing_dim == 6


def test_scaling_invariance_of_lookup():
    for tag, form_id, params in [("sol", "h.f9", {}), ("h1", "h1.null", {}),
                                 ("so3", "so3.round", {})]:
        a = make_algebra(tag)
        cls = classify(a)
        base = None
        for c in (1.0, 0.25, 12.0):
            m = MetricForm(c * canonical_matrix(form_id, params))
            rep = match_tables(cls, reduce(a, m, cls), curvature_report(a, m))
            key = (rep.killing_dim, rep.isotropy_type)
            base = base or key
            assert key == base


def test_inconsistent_curvature_aborts():
    # pair a constant-curvature table match with curvature from a different
    # metric: the cross-check must fire
    a = make_algebra("so3")
    cls = classify(a)
    m_round = MetricForm(canonical_matrix("so3.round", {}))
    nf = reduce(a, m_round, cls)
    curv_berger = curvature_report(a, MetricForm(np.diag([1.0, 1.0, 2.0])))
    with pytest.raises(InconsistentCurvature):
        match_tables(cls, nf, curv_berger)


def test_completeness_fact_table():
    assert _report("h1", "h1.null", {}).completeness == "incomplete"
    assert _report("psh", "psh.f5", {}).completeness == "incomplete"
    assert _report("sol", "h.f9", {}).completeness == "incomplete"
    assert _report("h_lambda", "h.f4", {}).completeness == "incomplete"
    assert _report("heis", "heis.lorentz_center_spacelike", {}).completeness == "complete"
    assert _report("heis", "heis.riemannian", {}).completeness == "complete"
    # definite metrics are always complete
    assert _report("so3", "so3.berger", {"alpha": 0.5}).completeness == "complete"
    # facts the sources leave open stay unknown
    assert _report("sl2", "sl2.hyperbolic", {"alpha": 2.0}).completeness == "unknown"


def test_plane_wave_parameter_values():
    assert plane_wave_parameter(2.0).sigma == 2.0
    assert plane_wave_parameter(-1.0).sigma == 2.0
    pw = plane_wave_parameter(3.0)
    assert np.allclose(pw.metric, [[1, 0, 0], [0, 0, 1], [0, 6.0, 1]])
    assert np.allclose(pw.holonomy_exponent, [[1.0, 0], [0, -0.5]])
    assert np.allclose(pw.rho(2.0), np.diag(np.exp([2.0, -1.0])))


def test_plane_wave_parameter_symmetry():
    for alpha in np.linspace(-3, 4, 29):
        if min(abs(alpha), abs(alpha - 1), abs(alpha - 0.5)) < 1e-6:
            continue
        sigma = alpha * (alpha - 1.0)
        if sigma <= -0.25:
            continue
        assert abs(plane_wave_parameter(alpha).sigma
                   - plane_wave_parameter(1.0 - alpha).sigma) < 1e-12


def test_plane_wave_parameter_rejections():
    for bad in (0.0, 1.0, 0.5, 1e-9, 1.0 - 1e-9):
        with pytest.raises(InvalidAlpha):
            plane_wave_parameter(bad)
