"""Levi-Civita connection and curvature of a left-invariant metric.

Everything is expressed at the Lie-algebra level: the metric is a scalar
product on the algebra, and the connection/curvature of left-invariant
fields reduce to constant tensors.

Sign conventions: R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z,
and K(plane) = R(x,y,y,x) / (<x,x><y,y> - <x,y>^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import EPS_RANK, LieAlgebra3

SECTIONAL_SEED = 20240915
N_RANDOM_PLANES = 64


class DegenerateMetric(ValueError):
    """The metric matrix is singular (within tolerance)."""


class DegeneratePlane(ValueError):
    """Sectional curvature requested on a g-degenerate plane."""


@dataclass(frozen=True)
class MetricForm:
    """A non-degenerate symmetric bilinear form of Riemannian or Lorentzian signature."""

    g: np.ndarray
    signature: tuple[int, int] = field(init=False)

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        if g.shape != (3, 3):
            raise ValueError("metric must be 3x3")
        if np.max(np.abs(g - g.T)) > 1e-12 * max(1.0, np.max(np.abs(g))):
            raise ValueError("metric must be symmetric")
        g = 0.5 * (g + g.T)
        ev = np.linalg.eigvalsh(g)
        if np.min(np.abs(ev)) <= EPS_RANK * np.max(np.abs(ev)) or abs(np.linalg.det(g)) <= EPS_RANK:
            raise DegenerateMetric("metric is degenerate")
        pos = int(np.sum(ev > 0))
        sig = (pos, 3 - pos)
        if sig not in ((3, 0), (2, 1), (1, 2), (0, 3)):
            raise ValueError("unexpected signature")
        g.flags.writeable = False
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "signature", sig)

    @property
    def riemannian(self) -> bool:
        return self.signature in ((3, 0), (0, 3))

    @property
    def lorentzian(self) -> bool:
        return self.signature in ((2, 1), (1, 2))

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.g @ np.asarray(y))


def levi_civita(a: LieAlgebra3, m: MetricForm) -> np.ndarray:
    """Connection coefficients gamma[i, j, k]: nabla_{e_i} e_j = sum_k gamma[i,j,k] e_k.

    Koszul formula for left-invariant fields:
    2<nabla_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>.
    """
    g = m.g
    c = a.structure
    # lowered[i,j,k] = <[e_i,e_j], e_k>
    lowered = np.einsum("ijm,mk->ijk", c, g)
    rhs = 0.5 * (lowered - np.einsum("jki->ijk", lowered) + np.einsum("kij->ijk", lowered))
    ginv = np.linalg.inv(g)
    return np.einsum("ijl,lk->ijk", rhs, ginv)


def riemann(a: LieAlgebra3, gamma: np.ndarray) -> np.ndarray:
    """(1,3) curvature tensor r[i, j, k, l]: R(e_i, e_j)e_k = sum_l r[i,j,k,l] e_l."""
    c = a.structure
    # nabla_i nabla_j e_k = gamma[j,k,m] gamma[i,m,l]
    dd = np.einsum("jkm,iml->ijkl", gamma, gamma)
    dbr = np.einsum("ijm,mkl->ijkl", c, gamma)
    return dd - np.einsum("jikl->ijkl", dd) - dbr


def lower_riemann(r: np.ndarray, m: MetricForm) -> np.ndarray:
    """(0,4) tensor R[i,j,k,l] = <R(e_i,e_j)e_k, e_l>."""
    return np.einsum("ijkm,ml->ijkl", r, m.g)


def ricci(r: np.ndarray) -> np.ndarray:
    """Ric(x, y) = trace(z -> R(z, x)y)."""
    ric = np.einsum("ijki->jk", r)
    return 0.5 * (ric + ric.T)


def scalar_curvature(ric: np.ndarray, m: MetricForm) -> float:
    return float(np.einsum("ij,ij->", np.linalg.inv(m.g), ric))


def sectional(m: MetricForm, rlow: np.ndarray, x, y, eps: float = EPS_RANK) -> float:
    """Sectional curvature of span{x, y}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gram = m.inner(x, x) * m.inner(y, y) - m.inner(x, y) ** 2
    scale = max(np.linalg.norm(x) ** 2 * np.linalg.norm(y) ** 2, 1e-300)
    if abs(gram) <= eps * scale:
        raise DegeneratePlane("plane is degenerate for the metric")
    num = float(np.einsum("i,j,k,l,ijkl->", x, y, y, x, rlow))
    return num / gram


def sample_planes(rng: np.random.Generator | None = None) -> list[tuple[np.ndarray, np.ndarray]]:
    """The 3 coordinate planes plus a fixed-seed grid of random planes."""
    if rng is None:
        rng = np.random.default_rng(SECTIONAL_SEED)
    planes = [(np.eye(3)[i], np.eye(3)[j]) for i in range(3) for j in range(i + 1, 3)]
    for _ in range(N_RANDOM_PLANES):
        v = rng.standard_normal((2, 3))
        planes.append((v[0], v[1]))
    return planes


@dataclass(frozen=True)
class CurvatureReport:
    connection: np.ndarray
    riemann: np.ndarray        # (1,3) tensor
    riemann_lowered: np.ndarray
    ricci: np.ndarray
    scalar: float
    sectional_samples: list    # [(x, y, K)]
    skipped_planes: int
    constant_k: float | None


def constant_curvature_check(
    a: LieAlgebra3, m: MetricForm, rlow: np.ndarray, ric: np.ndarray,
    rel_tol: float = 1e-8,
) -> float | None:
    """K such that Ric = 2K g (three-dimensional Einstein normalization), or None.

    Both the Ricci-proportionality test and agreement of all sampled
    non-degenerate sectional curvatures are required.
    """
    g = m.g
    denom = 2.0 * float(np.sum(g * g))
    k = float(np.sum(ric * g)) / denom
    scale = max(np.max(np.abs(ric)), np.max(np.abs(g)), 1.0)
    if np.max(np.abs(ric - 2.0 * k * g)) > rel_tol * scale:
        return None
    ks = []
    for x, y in sample_planes():
        try:
            ks.append(sectional(m, rlow, x, y))
        except DegeneratePlane:
            continue
    if ks:
        spread = max(ks) - min(ks)
        if spread > rel_tol * max(1.0, max(abs(v) for v in ks)):
            return None
    return k


def curvature_report(a: LieAlgebra3, m: MetricForm) -> CurvatureReport:
    gamma = levi_civita(a, m)
    r = riemann(a, gamma)
    rlow = lower_riemann(r, m)
    ric = ricci(r)
    scal = scalar_curvature(ric, m)
    samples = []
    skipped = 0
    for x, y in sample_planes():
        try:
            samples.append((x, y, sectional(m, rlow, x, y)))
        except DegeneratePlane:
            skipped += 1
    k = constant_curvature_check(a, m, rlow, ric)
    return CurvatureReport(gamma, r, rlow, ric, scal, samples, skipped, k)
