"""Shared fixtures and sampling helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from liemetric import families

FIXED_LAMBDA = 0.5
FIXED_MU = 0.7

ALL_TAGS = ["R3", "so3", "sl2", "heis", "euc2", "sol",
            "affR_plus_R", "h1", "psh", "h_lambda", "e_mu"]


def make_algebra(tag: str):
    if tag == "h_lambda":
        return families.make(tag, FIXED_LAMBDA)
    if tag == "e_mu":
        return families.make(tag, FIXED_MU)
    return families.make(tag)


@pytest.fixture(scope="session")
def algebras():
    return {tag: make_algebra(tag) for tag in ALL_TAGS}


@pytest.fixture()
def rng():
    return np.random.default_rng(20240901)


def random_invertible(rng, scale: float = 1.0) -> np.ndarray:
    while True:
        p = scale * rng.normal(size=(3, 3))
        if abs(np.linalg.det(p)) > 0.2 * scale ** 3:
            return p


def random_metric(rng, definite: bool = False) -> np.ndarray:
    """Random nondegenerate symmetric matrix; definite means Riemannian."""
    if definite:
        p = random_invertible(rng)
        return p.T @ p
    while True:
        q = rng.normal(size=(3, 3))
        q = q + q.T
        if abs(np.linalg.det(q)) > 0.05:
            return q


def sample_form_params(form_id: str, rng, family: str | None = None) -> dict:
    """Valid random parameters for a canonical form, away from boundaries."""
    def away(lo, hi, *avoid):
        while True:
            x = float(rng.uniform(lo, hi))
            if all(abs(x - v) > 0.1 for v in avoid):
                return x

    if form_id == "so3.berger":
        return {"alpha": away(-3, 3, 0.0, 1.0)}
    if form_id == "so3.generic":
        while True:
            a1, a2 = sorted(rng.uniform(-3, 0.9, 2))[::-1]
            if (abs(a1) > 0.1 and abs(a2) > 0.1 and abs(a1 - a2) > 0.1
                    and a1 > 0):
                return {"alpha1": float(a1), "alpha2": float(a2)}
    if form_id == "sl2.diag":
        while True:
            a1 = float(rng.uniform(1.1, 4))
            a2 = float(rng.uniform(-3, 3))
            if min(abs(a2), abs(a1 - a2), abs(a1 + a2),
                   abs(a2 - 1), abs(a2 + 1)) > 0.1:
                if rng.integers(2):
                    return {"alpha1": a1, "alpha2": a2}
                return {"alpha1": -a1, "alpha2": -abs(a2)}
    if form_id == "sl2.elliptic":
        return {"alpha": away(-2, 2, 0.0, 0.5, 1.0)}
    if form_id == "sl2.hyperbolic":
        return {"alpha": away(-3, 3, 0.0, 1.0)}
    if form_id in ("sl2.nilpotent", "psh.f3", "h.f3", "h.f5"):
        return {"eps": float(rng.choice([-1.0, 1.0]))}
    if form_id == "sl2.jordan2":
        return {"alpha": away(-3, 3, 0.0, 1.0),
                "eps": float(rng.choice([-1.0, 1.0]))}
    if form_id == "sl2.complex":
        return {"alpha1": float(rng.uniform(0.2, 3)),
                "alpha2": float(rng.uniform(-2, 2))}
    if form_id == "eucmu.riemannian":
        if rng.integers(2):
            return {"alpha1": float(rng.uniform(0.1, 0.95))}
        return {"alpha1": float(rng.uniform(-3, -0.1))}
    if form_id == "eucmu.lorentzian":
        return {"alpha2": float(rng.uniform(0.1, 0.95))}
    if form_id == "h.f1":
        return {"alpha1": away(-3, 3, 1.0)}
    if form_id == "h.f2":
        if family == "sol":
            return {"alpha2": away(-3, -0.05, -1.0)}
        return {"alpha2": away(-3, 3, -1.0)}
    if form_id == "psh.f1":
        return {"alpha1": away(-3, 3, 0.0)}
    if form_id == "psh.f2":
        return {"alpha2": away(-3, 3, 0.0)}
    return {}
