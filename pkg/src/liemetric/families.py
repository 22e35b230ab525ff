"""The eleven families of 3-dimensional real Lie algebras in their preferred bases."""

from __future__ import annotations

import numpy as np

from .algebra import LieAlgebra3

E1, E2, E3 = np.eye(3)

FAMILY_TAGS = (
    "R3", "so3", "sl2", "heis", "euc2", "sol",
    "affR_plus_R", "h1", "psh", "h_lambda", "e_mu",
)

#: Families carrying a continuous parameter.
PARAMETRIC_TAGS = ("h_lambda", "e_mu")


def r3() -> LieAlgebra3:
    return LieAlgebra3(np.zeros((3, 3, 3)))


def so3() -> LieAlgebra3:
    return LieAlgebra3.from_brackets({(0, 1): E3, (1, 2): E1, (0, 2): -E2})


def sl2() -> LieAlgebra3:
    # [e1,e2] = e2, [e3,e1] = e3, [e2,e3] = e1
    return LieAlgebra3.from_brackets({(0, 1): E2, (0, 2): -E3, (1, 2): E1})


def heis() -> LieAlgebra3:
    return LieAlgebra3.from_brackets({(0, 1): E3})


def euc2() -> LieAlgebra3:
    # [e1,e2] = e3, [e3,e1] = e2
    return LieAlgebra3.from_brackets({(0, 1): E3, (0, 2): -E2})


def sol() -> LieAlgebra3:
    # [e1,e2] = e2, [e3,e1] = e3
    return LieAlgebra3.from_brackets({(0, 1): E2, (0, 2): -E3})


def aff_r_plus_r() -> LieAlgebra3:
    return LieAlgebra3.from_brackets({(0, 1): E2})


def h1() -> LieAlgebra3:
    return LieAlgebra3.from_brackets({(0, 1): E2, (0, 2): E3})


def psh() -> LieAlgebra3:
    # [e1,e2] = e2, [e1,e3] = e2 + e3
    return LieAlgebra3.from_brackets({(0, 1): E2, (0, 2): E2 + E3})


def h_lambda(lam: float) -> LieAlgebra3:
    if not 0 < abs(lam) < 1:
        raise ValueError(f"h_lambda requires 0 < |lambda| < 1, got {lam}")
    return LieAlgebra3.from_brackets({(0, 1): E2, (0, 2): lam * E3})


def e_mu(mu: float) -> LieAlgebra3:
    if mu <= 0:
        raise ValueError(f"e_mu requires mu > 0, got {mu}")
    return LieAlgebra3.from_brackets({(0, 1): mu * E2 + E3, (0, 2): mu * E3 - E2})


_CONSTRUCTORS = {
    "R3": r3,
    "so3": so3,
    "sl2": sl2,
    "heis": heis,
    "euc2": euc2,
    "sol": sol,
    "affR_plus_R": aff_r_plus_r,
    "h1": h1,
    "psh": psh,
    "h_lambda": h_lambda,
    "e_mu": e_mu,
}


def make(tag: str, param: float | None = None) -> LieAlgebra3:
    """Build a family member from its tag (and parameter, where applicable)."""
    if tag not in _CONSTRUCTORS:
        raise ValueError(f"unknown family tag {tag!r}")
    if tag in PARAMETRIC_TAGS:
        if param is None:
            raise ValueError(f"family {tag!r} needs a parameter")
        return _CONSTRUCTORS[tag](param)
    if param is not None:
        raise ValueError(f"family {tag!r} takes no parameter")
    return _CONSTRUCTORS[tag]()
