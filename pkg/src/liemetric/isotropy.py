"""Skew-symmetric derivations and the isotropy type of the Killing algebra.

For a left-invariant metric, extra Killing fields beyond the left translations
correspond to derivations of the Lie algebra that are skew-symmetric with
respect to the metric.  A single nonzero skew map on a 3-space is classified
by its spectrum:

* elliptic:   eigenvalues {0, +ib, -ib}, rotation fixing a line
              (timelike in the Lorentzian case);
* hyperbolic: eigenvalues {0, +l, -l} real, boost fixing a spacelike line;
* parabolic:  nilpotent, U^2 has rank one and a lightlike image line.

In the Riemannian case only the elliptic type occurs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import EPS_RANK, LieAlgebra3, null_space
from .curvature import MetricForm

EPS_EIG = 1e-7


class NotSkew(ValueError):
    """The map is not skew-symmetric for the given metric."""


class ZeroMatrix(ValueError):
    """Isotropy type of the zero map is undefined."""


@dataclass(frozen=True)
class IsotropyElement:
    """A g-skew endomorphism together with its one-parameter-subgroup type."""

    matrix: np.ndarray
    metric: MetricForm
    kind: str = field(init=False)           # "elliptic" | "hyperbolic" | "parabolic"
    invariant_line: np.ndarray = field(init=False)
    causal_character_of_line: str = field(init=False)

    def __post_init__(self):
        u = np.asarray(self.matrix, dtype=float)
        scale = max(1.0, float(np.max(np.abs(u))))
        if not np.any(np.abs(u) > EPS_EIG * scale):
            raise ZeroMatrix("cannot classify the zero map")
        g = self.metric.g
        if np.max(np.abs(u.T @ g + g @ u)) > EPS_EIG * scale * max(1.0, np.max(np.abs(g))):
            raise NotSkew("matrix is not skew-symmetric for the metric")
        kind, line = _classify_skew(u, self.metric)
        u = u.copy()
        u.flags.writeable = False
        object.__setattr__(self, "matrix", u)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "invariant_line", line)
        val = self.metric.inner(line, line)
        gscale = float(np.max(np.abs(g)))
        if abs(val) <= EPS_EIG * gscale:
            character = "lightlike"
        elif val > 0:
            character = "spacelike"
        else:
            character = "timelike"
        object.__setattr__(self, "causal_character_of_line", character)


def _classify_skew(u: np.ndarray, m: MetricForm) -> tuple[str, np.ndarray]:
    """Type and fixed (or image) line of a nonzero g-skew map in dimension 3."""
    scale = float(np.max(np.abs(u)))
    v = u / scale
    # The spectrum is {0, +l, -l} with l^2 = tr(u^2)/2.  Deciding through the
    # trace avoids the cube-root eigenvalue sensitivity of nilpotent matrices.
    lam2 = float(np.trace(v @ v)) / 2.0
    if abs(lam2) <= EPS_EIG:
        kind = "parabolic"
    elif lam2 > 0:
        kind = "hyperbolic"
    else:
        kind = "elliptic"
    if kind == "parabolic":
        # invariant lightlike line = image of u^2
        u2 = u @ u
        if not np.any(np.abs(u2) > EPS_EIG * scale ** 2):
            # u itself has rank one: its image line
            u2 = u
        idx = int(np.argmax(np.linalg.norm(u2, axis=0)))
        line = u2[:, idx]
    else:
        line = null_space(u, eps=EPS_EIG).ravel()[:3]
        ker = null_space(u, eps=EPS_EIG)
        if ker.shape[1] != 1:
            raise NotSkew("unexpected kernel dimension for a rank-2 skew map")
        line = ker[:, 0]
    n = np.linalg.norm(line)
    if n > 0:
        line = line / n
    return kind, line


@dataclass(frozen=True)
class SkewDerivationSpace:
    """Basis of derivations skew-symmetric with respect to a fixed metric."""

    algebra: LieAlgebra3
    metric: MetricForm
    basis: list
    dim: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "basis", [np.asarray(b, dtype=float) for b in self.basis])
        object.__setattr__(self, "dim", len(self.basis))

    def element(self, coeffs) -> IsotropyElement:
        u = sum(c * b for c, b in zip(coeffs, self.basis))
        return IsotropyElement(u, self.metric)


def skew_derivations(a: LieAlgebra3, m: MetricForm, eps: float = EPS_RANK) -> SkewDerivationSpace:
    """Derivations D with D^T g + g D = 0; null space of a 33x9 linear system."""
    c = a.structure
    g = m.g
    rows = []
    for i in range(3):
        for j in range(3):
            for k in range(3):
                coeff = np.zeros((3, 3))
                coeff[k, :] += c[i, j, :]
                coeff[:, i] -= c[:, j, k]
                coeff[:, j] -= c[i, :, k]
                rows.append(coeff.ravel())
    # skewness: (D^T g + g D)[i,j] = sum_a D[a,i] g[a,j] + g[i,a] D[a,j]
    for i in range(3):
        for j in range(i, 3):
            coeff = np.zeros((3, 3))
            coeff[:, i] += g[:, j]
            coeff[:, j] += g[i, :]
            rows.append(coeff.ravel())
    ns = null_space(np.array(rows), eps=eps)
    basis = [ns[:, m_].reshape(3, 3) for m_ in range(ns.shape[1])]
    return SkewDerivationSpace(a, m, basis)


def invariant_killing_dimension(a: LieAlgebra3, m: MetricForm) -> int:
    """3 + number of independent skew derivations.

    This counts only the Killing fields that normalize the left-invariant
    ones, so it is a lower bound for the full Killing algebra dimension:
    constant-curvature metrics and the metrics whose translation algebra is
    not an ideal of the Killing algebra have more.
    """
    return 3 + skew_derivations(a, m).dim


def isotropy_type(space: SkewDerivationSpace) -> str | None:
    """Type of a generic element of a 1-dimensional isotropy algebra.

    Returns None for dim 0 and "full" for dim 3 (constant curvature).
    Dimension 2 does not occur for these geometries; it is rejected.
    """
    if space.dim == 0:
        return None
    if space.dim == 3:
        return "full"
    if space.dim != 1:
        raise ValueError(f"unexpected isotropy dimension {space.dim}")
    return IsotropyElement(space.basis[0], space.metric).kind


def metric_constraints_from_isotropy(
    a: LieAlgebra3, u: np.ndarray, eps: float = EPS_RANK,
) -> list[np.ndarray]:
    """Symmetric forms q with q(Ux, y) + q(x, Uy) = 0, i.e. metrics making U skew.

    Returns a basis of the solution space inside the 6-dimensional space of
    symmetric 3x3 matrices; this inverts skew_derivations for a fixed
    candidate generator on the algebra a.
    """
    u = np.asarray(u, dtype=float)
    pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]

    def sym_from_vec(v):
        q = np.zeros((3, 3))
        for val, (i, j) in zip(v, pairs):
            q[i, j] = q[j, i] = val
        return q

    rows = []
    for i in range(3):
        for j in range(i, 3):
            row = []
            for p in range(6):
                e = np.zeros(6)
                e[p] = 1.0
                q = sym_from_vec(e)
                row.append((u.T @ q + q @ u)[i, j])
            rows.append(row)
    ns = null_space(np.array(rows), eps=eps)
    return [sym_from_vec(ns[:, k]) for k in range(ns.shape[1])]
