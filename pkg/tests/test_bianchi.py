"""Family classification: tags, parameters, witnesses, spectral helpers."""

import numpy as np
import pytest

from liemetric import families
from liemetric.algebra import DegenerateInput, transport
from liemetric.bianchi import classify, eigen3, normalize_ad_scaling
from conftest import ALL_TAGS, make_algebra, random_invertible


def test_tags_on_preferred_bases():
    for tag in ALL_TAGS:
        assert classify(make_algebra(tag)).tag == tag


def test_parameters_recovered():
    for lam in (0.25, -0.6, 0.9):
        cls = classify(families.h_lambda(lam))
        assert cls.tag == "h_lambda"
        assert abs(cls.param - lam) < 1e-9
    for mu in (0.3, 1.0, 2.5):
        cls = classify(families.e_mu(mu))
        assert cls.tag == "e_mu"
        assert abs(cls.param - mu) < 1e-9


def test_witness_reproduces_preferred_brackets(rng):
    for tag in ALL_TAGS:
        a0 = make_algebra(tag)
        p = random_invertible(rng)
        a = transport(a0, p)
        cls = classify(a)
        assert cls.tag == tag
        ref = make_algebra(tag) if cls.param is None else families.make(tag, cls.param)
        moved = transport(a, cls.basis_change)
        assert np.allclose(moved.structure, ref.structure, atol=1e-7)


def test_round_trip_under_transports(rng):
    for tag in ALL_TAGS:
        a0 = make_algebra(tag)
        want = classify(a0).param
        for _ in range(20):
            a = transport(a0, random_invertible(rng))
            cls = classify(a)
            assert cls.tag == tag
            if want is not None:
                assert abs(cls.param - want) < 1e-6 * max(1.0, abs(want))


def test_scaling_invariance(rng):
    # rescaling the whole bracket never changes the family tag
    for tag in ("sol", "h_lambda", "e_mu", "sl2"):
        a0 = make_algebra(tag)
        for c in (0.1, 3.0, 40.0):
            from liemetric.algebra import LieAlgebra3
            assert classify(LieAlgebra3(c * a0.structure)).tag == tag


def test_eigen3_matches_numpy(rng):
    for _ in range(200):
        m = rng.normal(size=(3, 3)) * rng.choice([0.1, 1.0, 10.0])
        spec = eigen3(m)
        ref = np.linalg.eigvals(m)
        if spec.kind == "three-real":
            got = np.sort(np.array(spec.real))
            assert np.max(np.abs(np.imag(ref))) < 1e-6 * max(1.0, np.max(np.abs(ref)))
            assert np.allclose(got, np.sort(np.real(ref)), atol=1e-6 * max(1.0, np.max(np.abs(ref))))
        else:
            p, q = spec.complex_pair
            assert q > 0
            ref_c = ref[np.argmax(np.abs(np.imag(ref)))]
            assert abs(complex(p, q) - (ref_c if ref_c.imag > 0 else np.conj(ref_c))) \
                < 1e-6 * max(1.0, np.max(np.abs(ref)))


def test_eigen3_degenerate_cases():
    spec = eigen3(np.diag([2.0, 2.0, 2.0]))
    assert spec.kind == "three-real"
    assert np.allclose(spec.real, [2.0, 2.0, 2.0])
    spec = eigen3(np.diag([3.0, 3.0, -1.0]))
    assert spec.kind == "three-real"
    assert np.allclose(sorted(spec.real), [-1.0, 3.0, 3.0])
    jordan = np.array([[1.0, 1.0, 0], [0, 1.0, 0], [0, 0, 1.0]])
    spec = eigen3(jordan)
    assert spec.kind == "three-real"
    assert np.allclose(spec.real, [1.0, 1.0, 1.0])
    rot = np.array([[0.0, -1.0, 0], [1.0, 0.0, 0], [0, 0, 2.0]])
    spec = eigen3(rot)
    assert spec.kind == "one-real-pair-complex"
    assert np.allclose(spec.complex_pair, (0.0, 1.0), atol=1e-9)


def test_normalize_ad_scaling_kinds():
    sol = families.sol()
    n = np.eye(3)[:, 1:]          # derived algebra span(e2, e3)
    norm = normalize_ad_scaling(sol, np.array([1.0, 0, 0]), n)
    assert norm.kind == "diagonal"
    assert np.allclose(sorted(np.diag(norm.matrix)), [-1.0, 1.0])

    emu = families.e_mu(0.8)
    norm = normalize_ad_scaling(emu, np.array([1.0, 0, 0]), n)
    assert norm.kind == "rotation"

    psh = families.psh()
    norm = normalize_ad_scaling(psh, np.array([1.0, 0, 0]), n)
    assert norm.kind == "jordan"


def test_degenerate_transverse_vector():
    sol = families.sol()
    n = np.eye(3)[:, 1:]
    with pytest.raises(DegenerateInput):
        normalize_ad_scaling(sol, np.array([0.0, 1.0, 0.0]), n)
