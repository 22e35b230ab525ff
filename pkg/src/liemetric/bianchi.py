"""Classification of a 3-dimensional real Lie algebra into its isomorphism family.

The decision tree is driven by the dimension of the derived algebra:

* dim 0: abelian, R3.
* dim 3: semisimple; the sign of the Killing form separates so3 from sl2.
* dim 1: heis if the derived line is central, otherwise aff(R) + R.
* dim 2: the derived algebra N is abelian and ad_T acts on it for any
  transverse T; the conjugacy class of that 2x2 matrix (up to positive
  scaling) picks euc2, sol, h1, psh, h_lambda or e_mu.

Each result carries a basis change to the preferred basis of the family,
which serves as a checkable witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import families
from .algebra import (
    EPS_RANK,
    DegenerateInput,
    LieAlgebra3,
    derived_algebra,
    center,
    killing_form,
    matrix_rank,
    null_space,
    transport,
)

#: Relative decision bands: quantities whose magnitude (relative to the
#: natural scale) lands inside [BAND_LO, BAND_HI) are flagged as boundary
#: cases; below BAND_LO they are treated as exact zeros.
BAND_LO = 1e-9
BAND_HI = 1e-7


@dataclass(frozen=True)
class BianchiClass:
    """Outcome of the classification."""

    tag: str
    param: float | None
    basis_change: np.ndarray      # columns: preferred basis in input coordinates
    boundary_flags: tuple = ()

    @property
    def model(self) -> LieAlgebra3:
        return families.make(self.tag, self.param)


def _witness_error(a: LieAlgebra3, cls: BianchiClass) -> float:
    moved = transport(a, cls.basis_change)
    model = cls.model
    scale = max(1.0, float(np.max(np.abs(model.structure))))
    return float(np.max(np.abs(moved.structure - model.structure))) / scale


def _flag(flags: list, name: str, ratio: float):
    if BAND_LO <= ratio < BAND_HI:
        flags.append((name, float(ratio)))


def _orth_complement(b: np.ndarray) -> np.ndarray:
    """Orthonormal complement of the column span of b."""
    return null_space(b.T)


def _classify_semisimple(a: LieAlgebra3, flags: list) -> BianchiClass:
    k = killing_form(a)
    ev = np.linalg.eigvalsh(k)
    _flag(flags, "killing_definiteness", float(np.min(np.abs(ev)) / np.max(np.abs(ev))))
    if np.all(ev < 0):
        return _reduce_so3(a, flags)
    return _reduce_sl2(a, flags)


def _reduce_so3(a: LieAlgebra3, flags: list) -> BianchiClass:
    # s = -K/2 is positive definite and equals the identity in the
    # preferred basis; an s-orthonormal basis has c^k_ij = +-eps_ijk.
    s = -killing_form(a) / 2.0
    w, v = np.linalg.eigh(s)
    p = v @ np.diag(1.0 / np.sqrt(w))
    moved = transport(a, p)
    if moved.structure[0, 1, 2] < 0:
        p = p[:, [1, 0, 2]]
    return BianchiClass("so3", None, p, tuple(flags))


def _reduce_sl2(a: LieAlgebra3, flags: list) -> BianchiClass:
    kappa = killing_form(a) / 2.0
    # find a hyperbolic element: kappa(x,x) > 0
    w, v = np.linalg.eigh(kappa)
    x = v[:, np.argmax(w)]
    n2 = float(x @ kappa @ x)
    e1 = x / np.sqrt(n2)
    # ad_{e1} has eigenvalues {0, 1, -1}
    ad1 = a.ad(e1)
    ev, evec = np.linalg.eig(ad1)
    ip = int(np.argmin(np.abs(ev - 1.0)))
    im = int(np.argmin(np.abs(ev + 1.0)))
    _flag(flags, "sl2_eigensplit", float(np.max(np.abs(ev.imag)) / max(1.0, np.max(np.abs(ev)))))
    e2 = np.real(evec[:, ip])
    e3 = np.real(evec[:, im])
    # normalize so that [e2, e3] = e1
    br = a.bracket(e2, e3)
    c = float(br @ kappa @ e1) / float(e1 @ kappa @ e1)
    if abs(c) < EPS_RANK:
        raise DegenerateInput("sl2 eigenvector normalization collapsed")
    e2 = e2 / c
    p = np.column_stack([e1, e2, e3])
    return BianchiClass("sl2", None, p, tuple(flags))


def _classify_derived_one(a: LieAlgebra3, der: np.ndarray, flags: list) -> BianchiClass:
    z = center(a)
    d = der[:, 0]
    if z.contains(d, eps=BAND_HI):
        # Heisenberg: pick u, v with [u, v] = d
        comp = _orth_complement(der)
        u, v = comp[:, 0], comp[:, 1]
        br = a.bracket(u, v)
        c = float(br @ d) / float(d @ d)
        if abs(c) < EPS_RANK:
            raise DegenerateInput("degenerate heisenberg bracket")
        p = np.column_stack([u, v / c, d])
        return BianchiClass("heis", None, p, tuple(flags))
    # aff(R) + R: ad acts on the derived line with some nonzero weight.
    # e2 spans the derived line, e1 satisfies [e1, e2] = e2, e3 spans
    # the center.
    e2 = d
    zc = center(a).basis
    if zc.shape[1] != 1:
        raise DegenerateInput("unexpected center dimension for aff(R)+R")
    e3 = zc[:, 0]
    comp = _orth_complement(np.column_stack([e2, e3]))
    t = comp[:, 0]
    lam = float(a.bracket(t, e2) @ e2) / float(e2 @ e2)
    if abs(lam) < EPS_RANK:
        raise DegenerateInput("transverse element acts trivially on the derived line")
    e1 = t / lam
    p = np.column_stack([e1, e2, e3])
    return BianchiClass("affR_plus_R", None, p, tuple(flags))


def _classify_derived_two(a: LieAlgebra3, der: np.ndarray, flags: list) -> BianchiClass:
    # N = derived algebra is 2-dimensional abelian; any T outside N acts on it.
    n1, n2 = der[:, 0], der[:, 1]
    if np.linalg.norm(a.bracket(n1, n2)) > BAND_HI * max(1.0, float(np.max(np.abs(a.structure)))):
        raise DegenerateInput("derived algebra of dimension 2 is not abelian")
    t = _orth_complement(der)[:, 0]
    # matrix of ad_t restricted to N in the basis (n1, n2)
    basis_n = np.column_stack([n1, n2])
    mat = np.linalg.lstsq(basis_n, np.column_stack(
        [a.bracket(t, n1), a.bracket(t, n2)]), rcond=None)[0]
    tr = float(np.trace(mat))
    det = float(np.linalg.det(mat))
    disc = tr * tr - 4.0 * det
    scale = max(float(np.max(np.abs(mat))) ** 2, EPS_RANK)
    _flag(flags, "ad_discriminant", abs(disc) / scale)

    if disc < -BAND_LO * scale:
        return _reduce_complex(a, t, basis_n, mat, flags)
    if disc > BAND_LO * scale:
        return _reduce_real_distinct(a, t, basis_n, mat, flags)
    # repeated eigenvalue: scalar or Jordan
    lam = tr / 2.0
    off = mat - lam * np.eye(2)
    _flag(flags, "jordan_block", float(np.max(np.abs(off))) / max(np.sqrt(scale), EPS_RANK))
    if np.max(np.abs(off)) <= BAND_HI * np.sqrt(scale):
        # scalar action: h1 after normalizing lam to 1
        e1 = t / lam
        p = np.column_stack([e1, basis_n[:, 0], basis_n[:, 1]])
        return BianchiClass("h1", None, p, tuple(flags))
    return _reduce_jordan(a, t, basis_n, mat, lam, flags)


def _reduce_complex(a: LieAlgebra3, t, basis_n, mat, flags) -> BianchiClass:
    # eigenvalues mu*b +- i*b after scaling t by 1/b: family e(mu) (mu > 0)
    # or euc2 (mu = 0).  Conventions: ad_{e1} e2 = mu e2 + e3,
    # ad_{e1} e3 = mu e3 - e2.
    tr = float(np.trace(mat))
    det = float(np.linalg.det(mat))
    b = np.sqrt(det - tr * tr / 4.0)
    mu = tr / (2.0 * b)
    _flag(flags, "e_mu_boundary", abs(mu))
    if abs(mu) < BAND_LO:
        mu = 0.0
    if mu < 0:
        # flip the orientation of t to make mu positive
        t = -t
        mat = -mat
        mu = -mu
    # scale t so the rotation speed is 1
    e1 = t / b
    m1 = mat / b  # now m1 = mu*I + J in some basis, J^2 = -I
    jmat = m1 - mu * np.eye(2)
    # pick e2 arbitrary in N; then e3 = (ad_{e1} - mu) e2
    w2 = np.array([1.0, 0.0])
    w3 = jmat @ w2
    e2 = basis_n @ w2
    e3 = basis_n @ w3
    p = np.column_stack([e1, e2, e3])
    tag = "euc2" if mu == 0.0 else "e_mu"
    return BianchiClass(tag, None if mu == 0.0 else mu, p, tuple(flags))


def _reduce_real_distinct(a: LieAlgebra3, t, basis_n, mat, flags) -> BianchiClass:
    ev, evec = np.linalg.eig(mat)
    ev = ev.real
    evec = evec.real
    order = np.argsort(-np.abs(ev))
    l1, l2 = ev[order]
    v1, v2 = evec[:, order[0]], evec[:, order[1]]
    _flag(flags, "zero_eigenvalue", abs(l2) / abs(l1))
    if abs(l2) <= BAND_LO * abs(l1):
        # one eigenvalue vanishes: aff(R) + R (the kernel line is central)
        e1 = t / l1
        p = np.column_stack([e1, basis_n @ v1, basis_n @ v2])
        return BianchiClass("affR_plus_R", None, p, tuple(flags))
    lam = l2 / l1
    e1 = t / l1
    e2 = basis_n @ v1
    e3 = basis_n @ v2
    _flag(flags, "sol_boundary", abs(lam + 1.0))
    _flag(flags, "h1_boundary", abs(lam - 1.0))
    if abs(lam + 1.0) < BAND_LO:
        return BianchiClass("sol", None, np.column_stack([e1, e2, e3]), tuple(flags))
    if abs(lam - 1.0) < BAND_LO:
        return BianchiClass("h1", None, np.column_stack([e1, e2, e3]), tuple(flags))
    return BianchiClass("h_lambda", float(lam), np.column_stack([e1, e2, e3]), tuple(flags))


def _reduce_jordan(a: LieAlgebra3, t, basis_n, mat, lam, flags) -> BianchiClass:
    # single Jordan block; normalizing lam to 1 gives psh:
    # ad_{e1} e2 = e2, ad_{e1} e3 = e2 + e3.
    _flag(flags, "psh_eigenvalue", abs(lam) / max(1.0, float(np.max(np.abs(mat)))))
    if abs(lam) < BAND_LO * max(1.0, float(np.max(np.abs(mat)))):
        raise DegenerateInput("nilpotent Jordan action should have appeared as heisenberg")
    m1 = mat / lam
    nil = m1 - np.eye(2)
    # e2 spans the image of the nilpotent part, e3 maps onto it
    col = int(np.argmax(np.linalg.norm(nil, axis=0)))
    w3 = np.zeros(2)
    w3[col] = 1.0
    w2 = nil @ w3
    e1 = t / lam
    e2 = basis_n @ w2
    e3 = basis_n @ w3
    return BianchiClass("psh", None, np.column_stack([e1, e2, e3]), tuple(flags))


def classify(a: LieAlgebra3, check_witness: bool = True) -> BianchiClass:
    """Classify and produce a basis change to the preferred presentation."""
    flags: list = []
    der = derived_algebra(a)
    scale = max(1.0, float(np.max(np.abs(a.structure))))
    cols = np.array([a.structure[i, j] for i in range(3) for j in range(i + 1, 3)]).T
    if np.any(cols):
        s = np.linalg.svd(cols, compute_uv=False)
        for k, sv in enumerate(s):
            _flag(flags, f"derived_rank_sv{k}", float(sv / max(s[0], scale)))

    if der.dim == 0:
        cls = BianchiClass("R3", None, np.eye(3), tuple(flags))
    elif der.dim == 3:
        cls = _classify_semisimple(a, flags)
    elif der.dim == 1:
        cls = _classify_derived_one(a, der.basis, flags)
    else:
        cls = _classify_derived_two(a, der.basis, flags)

    if check_witness:
        err = _witness_error(a, cls)
        if err > 1e-6:
            raise DegenerateInput(
                f"classification witness residual {err:.2e} for tag {cls.tag!r}")
    return cls


@dataclass(frozen=True)
class Spectrum3:
    """Spectrum of a real 3x3 matrix, computed in closed form.

    kind is "three-real" (roots sorted descending, with multiplicity) or
    "one-real-pair-complex" (one real root plus p +- i m, m > 0).
    """

    kind: str
    real: tuple
    complex_pair: tuple | None = None


def eigen3(mat, eps: float = 1e-10) -> Spectrum3:
    """Eigenvalues of a real 3x3 matrix via the trigonometric cubic formula."""
    m = np.asarray(mat, dtype=float)
    if m.shape != (3, 3):
        raise ValueError("eigen3 expects a 3x3 matrix")
    c2 = float(np.trace(m))
    c1 = (c2 * c2 - float(np.trace(m @ m))) / 2.0
    c0 = float(np.linalg.det(m))
    # shifted variable x = lambda - c2/3: x^3 + p x + q = 0
    p = c1 - c2 * c2 / 3.0
    q = -2.0 * c2 ** 3 / 27.0 + c1 * c2 / 3.0 - c0
    shift = c2 / 3.0
    # degeneracy thresholds are relative to the matrix scale: disc carries
    # the sixth power of an eigenvalue, p the second
    s = max(float(np.linalg.norm(m)), abs(shift))
    disc = -4.0 * p ** 3 - 27.0 * q ** 2

    if s == 0.0:
        return Spectrum3("three-real", (0.0, 0.0, 0.0))
    if abs(disc) <= eps * s ** 6:
        if abs(p) <= eps * s * s:
            roots = np.array([0.0, 0.0, 0.0])
        else:
            single = 3.0 * q / p
            double = -1.5 * q / p
            roots = np.array([single, double, double])
        roots = np.sort(roots)[::-1] + shift
        return Spectrum3("three-real", tuple(float(r) for r in roots))
    if disc > 0:
        r = np.sqrt(-p / 3.0)
        theta = np.arccos(np.clip(3.0 * q / (2.0 * p * r), -1.0, 1.0))
        ks = np.array([0.0, 1.0, 2.0])
        roots = 2.0 * r * np.cos(theta / 3.0 - 2.0 * np.pi * ks / 3.0)
        roots = np.sort(roots)[::-1] + shift
        return Spectrum3("three-real", tuple(float(r_) for r_ in roots))
    # one real root (Cardano) plus a complex pair
    half = np.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    x1 = np.cbrt(-q / 2.0 + half) + np.cbrt(-q / 2.0 - half)
    imag = np.sqrt(max(p + 0.75 * x1 * x1, 0.0))
    return Spectrum3("one-real-pair-complex", (float(x1 + shift),),
                     (float(-x1 / 2.0 + shift), float(imag)))


@dataclass(frozen=True)
class AdNormalization:
    """ad_T restricted to a 2-dimensional invariant subspace, rescaled."""

    t: np.ndarray                 # rescaled transverse vector
    matrix: np.ndarray            # ad_t restricted to N, after rescaling
    kind: str                     # "diagonal" | "jordan" | "rotation"


def normalize_ad_scaling(a: LieAlgebra3, t, n_basis) -> AdNormalization:
    """Rescale T so ad_T on N = span(n_basis) takes a canonical 2x2 shape.

    diagonal: diag(1, lam) with |lam| <= 1; jordan: [[1, 0], [1, 1]] (or its
    nilpotent analogue [[0, 0], [1, 0]] when the eigenvalue vanishes);
    rotation: mu*I + J with J a rotation by a quarter turn.
    """
    t = np.asarray(t, dtype=float)
    basis_n = np.asarray(n_basis, dtype=float)
    mat = np.linalg.lstsq(basis_n, np.column_stack(
        [a.bracket(t, basis_n[:, 0]), a.bracket(t, basis_n[:, 1])]), rcond=None)[0]
    scale = float(np.max(np.abs(mat)))
    if scale <= BAND_LO:
        raise DegenerateInput("ad_T vanishes on N; nothing to normalize")
    tr = float(np.trace(mat))
    det = float(np.linalg.det(mat))
    disc = tr * tr - 4.0 * det
    if disc < -BAND_LO * scale * scale:
        b = np.sqrt(det - tr * tr / 4.0)
        return AdNormalization(t / b, mat / b, "rotation")
    if disc > BAND_LO * scale * scale:
        half = np.sqrt(disc) / 2.0
        l1, l2 = tr / 2.0 + half, tr / 2.0 - half
        lead = l1 if abs(l1) >= abs(l2) else l2
        return AdNormalization(t / lead, mat / lead, "diagonal")
    lam = tr / 2.0
    off = mat - lam * np.eye(2)
    if np.max(np.abs(off)) <= BAND_HI * scale:
        return AdNormalization(t / lam, mat / lam, "diagonal")
    if abs(lam) <= BAND_LO * scale:
        nil_scale = float(np.max(np.abs(off)))
        return AdNormalization(t / nil_scale, mat / nil_scale, "jordan")
    return AdNormalization(t / lam, mat / lam, "jordan")
