"""Skew derivations: dimensions, one-parameter types, inverse constraints."""

import numpy as np
import pytest

from liemetric import families
from liemetric.curvature import MetricForm
from liemetric.isotropy import (
    IsotropyElement,
    NotSkew,
    ZeroMatrix,
    isotropy_type,
    metric_constraints_from_isotropy,
    skew_derivations,
)
from liemetric.normal_form import canonical_matrix
from conftest import ALL_TAGS, make_algebra, random_metric

# (family, form_id, params, expected dim, expected generator type)
CANONICAL_SKEW = [
    ("heis", "heis.riemannian", {}, 1, "elliptic"),
    ("heis", "heis.lorentz_center_timelike", {}, 1, "elliptic"),
    ("heis", "heis.lorentz_center_spacelike", {}, 1, "hyperbolic"),
    ("h1", "h1.riemannian", {}, 1, "elliptic"),
    ("h1", "h1.lorentz_e3", {}, 1, "hyperbolic"),
    ("h1", "h1.lorentz_e1", {}, 1, "elliptic"),
    ("h1", "h1.null", {}, 1, "parabolic"),
    ("psh", "psh.f5", {}, 1, "parabolic"),
    ("so3", "so3.berger", {"alpha": 0.5}, 1, "elliptic"),
    ("sl2", "sl2.hyperbolic", {"alpha": 2.0}, 1, "hyperbolic"),
    ("sl2", "sl2.nilpotent", {"eps": 1.0}, 1, "parabolic"),
    ("sol", "h.f9", {}, 0, None),
    ("sol", "h.f1", {"alpha1": 0.5}, 0, None),
    ("affR_plus_R", "h.f4", {}, 1, "hyperbolic"),
    ("affR_plus_R", "h.f5", {"eps": 1.0}, 0, None),
    ("euc2", "eucmu.riemannian", {"alpha1": 0.5}, 0, None),
]


@pytest.mark.parametrize("tag,form_id,params,dim,kind", CANONICAL_SKEW)
def test_skew_dimensions_and_types(tag, form_id, params, dim, kind):
    a = make_algebra(tag)
    m = MetricForm(canonical_matrix(form_id, params))
    space = skew_derivations(a, m)
    assert space.dim == dim
    assert isotropy_type(space) == kind


def test_full_isotropy_for_space_forms():
    space = skew_derivations(make_algebra("R3"), MetricForm(np.eye(3)))
    assert space.dim == 3
    assert isotropy_type(space) == "full"
    space = skew_derivations(make_algebra("so3"), MetricForm(np.eye(3)))
    assert space.dim == 3


def test_skew_elements_rank_two_traceless(rng):
    checked = 0
    for _ in range(300):
        tag = ALL_TAGS[rng.integers(len(ALL_TAGS))]
        a = make_algebra(tag)
        m = MetricForm(random_metric(rng, definite=bool(rng.integers(2))))
        space = skew_derivations(a, m)
        for b in space.basis:
            if np.max(np.abs(b)) < 1e-9:
                continue
            assert abs(np.trace(b)) <= 1e-9 * max(1.0, np.max(np.abs(b)))
            if space.dim == 1:
                assert np.linalg.matrix_rank(b, tol=1e-8) == 2
            checked += 1
    assert checked > 0


def test_riemannian_isotropy_is_elliptic(rng):
    seen = 0
    for tag in ALL_TAGS:
        a = make_algebra(tag)
        for _ in range(30):
            m = MetricForm(random_metric(rng, definite=True))
            space = skew_derivations(a, m)
            if space.dim == 1:
                assert isotropy_type(space) == "elliptic"
                seen += 1
    assert seen > 0


def test_causal_characters():
    h1 = make_algebra("h1")
    cases = [
        ("h1.lorentz_e1", "elliptic", "timelike"),
        ("h1.lorentz_e3", "hyperbolic", "spacelike"),
        ("h1.null", "parabolic", "lightlike"),
    ]
    for form_id, kind, character in cases:
        m = MetricForm(canonical_matrix(form_id, {}))
        space = skew_derivations(h1, m)
        el = IsotropyElement(space.basis[0], m)
        assert el.kind == kind
        assert el.causal_character_of_line == character


def test_inverse_constraint_solver_nilpotent_family():
    # a nilpotent candidate generator pins the metric to a 2-parameter family
    a = make_algebra("sol")
    alpha, beta = 0.7, -0.3
    u = np.array([[0.0, 0, 0], [alpha, 0, 1.0], [beta, 0, 0]])
    basis = metric_constraints_from_isotropy(a, u)
    assert len(basis) == 2
    for q in basis:
        assert np.max(np.abs(u.T @ q + q @ u)) < 1e-10


def test_inverse_constraint_solver_round_trip(rng):
    # the metric that produced a skew derivation lies in the inverted family
    a = make_algebra("heis")
    m = MetricForm(np.diag([1.0, 1.0, -1.0]))
    space = skew_derivations(a, m)
    assert space.dim == 1
    basis = metric_constraints_from_isotropy(a, space.basis[0])
    stack = np.column_stack([q.ravel() for q in basis])
    coeff, res, *_ = np.linalg.lstsq(stack, m.g.ravel(), rcond=None)
    assert np.allclose(stack @ coeff, m.g.ravel(), atol=1e-9)


def test_zero_map_has_full_constraint_space():
    a = make_algebra("sol")
    basis = metric_constraints_from_isotropy(a, np.zeros((3, 3)))
    assert len(basis) == 6


def test_rejections():
    m = MetricForm(np.eye(3))
    with pytest.raises(ZeroMatrix):
        IsotropyElement(np.zeros((3, 3)), m)
    with pytest.raises(NotSkew):
        IsotropyElement(np.diag([1.0, -1.0, 0.0]), m)
