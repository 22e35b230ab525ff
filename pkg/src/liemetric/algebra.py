"""Exact representation and elementary invariants of 3-dimensional real Lie algebras.

Structure constants are stored as a 3x3x3 array ``c`` with
``c[i, j, k]`` the coefficient of ``e_k`` in ``[e_i, e_j]``.
All computations are double precision; rank decisions use singular
values relative to the largest one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

EPS_JAC = 1e-9
EPS_RANK = 1e-8


class NotJacobi(ValueError):
    """Structure constants violate the Jacobi identity."""


class DegenerateInput(ValueError):
    """A rank or eigenvalue decision falls inside the tolerance band."""


def as_number(x) -> float:
    """Accept floats, ints, or decimal/rational strings ('0.5', '1/2')."""
    if isinstance(x, str):
        return float(Fraction(x))
    return float(x)


def parse_matrix(rows) -> np.ndarray:
    m = np.array([[as_number(v) for v in row] for row in rows], dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    return m


def null_space(m: np.ndarray, eps: float = EPS_RANK) -> np.ndarray:
    """Orthonormal basis of the null space, columns; tolerance relative to sigma_max."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.size == 0 or not np.any(m):
        return np.eye(m.shape[1])
    u, s, vt = np.linalg.svd(m)
    smax = s[0]
    rank = int(np.sum(s > eps * smax))
    return vt[rank:].T


def matrix_rank(m: np.ndarray, eps: float = EPS_RANK) -> int:
    m = np.asarray(m, dtype=float)
    if not np.any(m):
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > eps * s[0]))


def jacobi_residual(c: np.ndarray) -> float:
    """Max absolute residual of the cyclic Jacobi sum over all index choices."""
    # J^m_{ijl} = sum_k c^k_{ij} c^m_{kl} + c^k_{jl} c^m_{ki} + c^k_{li} c^m_{kj}
    t1 = np.einsum("ijk,klm->ijlm", c, c)
    res = t1 + np.einsum("jlik->ijlk", t1) + np.einsum("lijk->ijlk", t1)
    return float(np.max(np.abs(res)))


@dataclass(frozen=True)
class LieAlgebra3:
    """A 3-dimensional real Lie algebra given by structure constants.

    ``structure[i, j, k]`` is the ``e_k`` component of ``[e_i, e_j]``.
    Construction validates antisymmetry and the Jacobi identity.
    """

    structure: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=float)
        if c.shape != (3, 3, 3):
            raise ValueError(f"structure must be 3x3x3, got {c.shape}")
        if np.max(np.abs(c + np.swapaxes(c, 0, 1))) > EPS_JAC:
            raise ValueError("structure constants are not antisymmetric in the lower indices")
        res = jacobi_residual(c)
        if res > EPS_JAC:
            raise NotJacobi(f"Jacobi residual {res:.3e} exceeds {EPS_JAC:.0e}")
        c.flags.writeable = False
        object.__setattr__(self, "structure", c)

    @classmethod
    def from_brackets(cls, brackets: dict[tuple[int, int], np.ndarray]) -> "LieAlgebra3":
        """Build from a dict {(i, j): [e_i, e_j]} for i < j, zero-based."""
        c = np.zeros((3, 3, 3))
        for (i, j), v in brackets.items():
            c[i, j] = np.asarray(v, dtype=float)
            c[j, i] = -c[i, j]
        return cls(c)

    def bracket(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x = [x, .] acting on column vectors."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), self.structure)

    def check_jacobi(self) -> tuple[bool, float]:
        res = jacobi_residual(self.structure)
        return res <= EPS_JAC, res


@dataclass(frozen=True)
class Subspace:
    """A subspace of R^3 with an orthonormal basis (columns)."""

    basis: np.ndarray  # shape (3, dim)
    dim: int = field(init=False)

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if b.shape[0] != 3:
            b = b.reshape(3, -1)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "dim", b.shape[1])

    def contains(self, v, eps: float = 1e-8) -> bool:
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0:
            return True
        proj = self.basis @ (self.basis.T @ v)
        return np.linalg.norm(v - proj) <= eps * nv


@dataclass(frozen=True)
class DerivationSpace:
    """Basis (list of 3x3 matrices) of the derivation algebra of a LieAlgebra3."""

    basis: list
    dim: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "basis", [np.asarray(b, dtype=float) for b in self.basis])
        object.__setattr__(self, "dim", len(self.basis))


def span_of_columns(vectors: np.ndarray, eps: float = EPS_RANK) -> Subspace:
    """Orthonormalized span of the given column vectors."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    if v.shape[0] != 3:
        v = v.T
    if not np.any(v):
        return Subspace(np.zeros((3, 0)))
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    rank = int(np.sum(s > eps * s[0]))
    return Subspace(u[:, :rank])


def derived_algebra(a: LieAlgebra3) -> Subspace:
    """Span of all brackets [e_i, e_j]."""
    cols = [a.structure[i, j] for i in range(3) for j in range(i + 1, 3)]
    return span_of_columns(np.array(cols).T)


def center(a: LieAlgebra3) -> Subspace:
    """{x : [x, e_j] = 0 for all j}."""
    # Row (j, k) has entries c[i, j, k] as coefficients of x_i.
    m = np.array([[a.structure[i, j, k] for i in range(3)]
                  for j in range(3) for k in range(3)])
    return Subspace(null_space(m))


def unimodular(a: LieAlgebra3, eps: float = EPS_RANK) -> bool:
    scale = max(1.0, float(np.max(np.abs(a.structure))))
    traces = [np.trace(a.ad(e)) for e in np.eye(3)]
    return max(abs(t) for t in traces) <= eps * scale


def killing_form(a: LieAlgebra3) -> np.ndarray:
    ads = [a.ad(e) for e in np.eye(3)]
    k = np.array([[np.trace(ads[i] @ ads[j]) for j in range(3)] for i in range(3)])
    return 0.5 * (k + k.T)


def derivation_space(a: LieAlgebra3) -> DerivationSpace:
    """Null space of the linear system D[e_i,e_j] = [De_i, e_j] + [e_i, De_j].

    Unknowns are the 9 entries of D (row-major); equations range over all
    (i, j, k), 27 in total.
    """
    c = a.structure
    rows = []
    for i in range(3):
        for j in range(3):
            for k in range(3):
                coeff = np.zeros((3, 3))
                # D[e_i,e_j]^k = sum_m c[i,j,m] D[k,m]
                coeff[k, :] += c[i, j, :]
                # -[De_i, e_j]^k = -sum_a D[a,i] c[a,j,k]
                coeff[:, i] -= c[:, j, k]
                # -[e_i, De_j]^k = -sum_a D[a,j] c[i,a,k]
                coeff[:, j] -= c[i, :, k]
                rows.append(coeff.ravel())
    ns = null_space(np.array(rows))
    basis = [ns[:, m].reshape(3, 3) for m in range(ns.shape[1])]
    return DerivationSpace(basis)


def is_derivation(a: LieAlgebra3, d: np.ndarray, eps: float = 10 * EPS_JAC) -> bool:
    d = np.asarray(d, dtype=float)
    for i in range(3):
        for j in range(i + 1, 3):
            lhs = d @ a.structure[i, j]
            rhs = a.bracket(d[:, i], np.eye(3)[j]) + a.bracket(np.eye(3)[i], d[:, j])
            if np.max(np.abs(lhs - rhs)) > eps * max(1.0, float(np.max(np.abs(d)))):
                return False
    return True


def transport(a: LieAlgebra3, p: np.ndarray) -> LieAlgebra3:
    """Structure constants in the basis f_j = sum_i p[i, j] e_i.

    The columns of ``p`` are the new basis vectors in the old coordinates.
    """
    p = np.asarray(p, dtype=float)
    pinv = np.linalg.inv(p)
    c = np.zeros((3, 3, 3))
    for i in range(3):
        for j in range(i + 1, 3):
            w = pinv @ a.bracket(p[:, i], p[:, j])
            c[i, j] = w
            c[j, i] = -w
    return LieAlgebra3(c)


def transport_structure(c: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Raw transport without Jacobi re-validation (for fuzzing corrupted tensors)."""
    pinv = np.linalg.inv(p)
    out = np.einsum("ia,jb,ijk,kc->abc", p, p, c, pinv.T)
    return out


def is_automorphism(a: LieAlgebra3, p: np.ndarray, eps: float = 1e-7) -> bool:
    new = transport_structure(a.structure, p)
    scale = max(1.0, float(np.max(np.abs(a.structure))))
    return float(np.max(np.abs(new - a.structure))) <= eps * scale
