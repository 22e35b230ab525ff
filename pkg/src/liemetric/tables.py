"""Killing-algebra dimension by table lookup on the metric normal form.

For a left-invariant metric on a 3-dimensional Lie group the full isometry
algebra has dimension 3, 4 or 6.  Dimension 6 means constant sectional
curvature; dimension 4 means exactly one extra one-parameter isotropy group.
Both exceptional cases are classified by a finite list of (family, normal
form, parameter constraint) rows, stored in the embedded data file
``data/tables.json``.  Everything not on those lists has dimension 3.

The lookup is deliberately not curvature-driven: several flat or
constant-curvature-looking normal forms sit on the dimension-4 list and,
conversely, one constant negative curvature form has dimension 3 because the
extra symmetries are not isometries of the group metric.  The curvature
report is used only as a consistency cross-check for the dimension-6 rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .bianchi import BianchiClass
from .curvature import CurvatureReport
from .normal_form import PARAM_TOL, NormalFormMatch

SCHEMA_VERSION = 1

# a parameter this close to a constraint boundary gets a boundary flag
BOUNDARY_BAND = 1e-4


class InconsistentCurvature(RuntimeError):
    """A constant-curvature table row matched but the curvature disagrees."""


class InvalidAlpha(ValueError):
    """The plane-wave parameter is outside the admissible range."""


@lru_cache(maxsize=1)
def load_tables() -> dict:
    """The embedded classification data, parsed once."""
    text = resources.files("liemetric.data").joinpath("tables.json").read_text()
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise RuntimeError(
            f"tables.json schema {data.get('schema_version')} != {SCHEMA_VERSION}"
        )
    return data


@dataclass(frozen=True)
class KillingReport:
    """Dimension and structure of the full Killing algebra."""

    killing_dim: int                    # 3, 4 or 6
    completeness: str                   # "complete" | "incomplete" | "unknown"
    isotropy_type: str | None = None    # "elliptic" | "hyperbolic" | "nilpotent"
    g_ideal_in_L: bool | None = None
    derived_killing: str | None = None  # "R2" | "heis" | "sl2" | "so3"
    constant_k: float | None = None
    table2_row: dict | None = None
    table3_row: dict | None = None
    boundary_flags: tuple = ()


def _params_match(row_params: dict, params: dict, tol: float = PARAM_TOL) -> bool:
    for key, want in row_params.items():
        if key not in params:
            return False
        if abs(params[key] - want) > tol * max(1.0, abs(want)):
            return False
    return True


def _near(x: float, y: float, band: float = PARAM_TOL) -> bool:
    return abs(x - y) <= band


# Parameter predicates for the dimension-4 rows whose normal form carries a
# free parameter.  Each returns (matches, near_boundary).
def _table3_constraint(family: str, form_id: str, params: dict) -> tuple[bool, bool]:
    if form_id == "so3.berger":
        a = params["alpha"]
        return (not _near(a, 0.0) and not _near(a, 1.0),
                _near(a, 0.0, BOUNDARY_BAND) or _near(a, 1.0, BOUNDARY_BAND))
    if form_id == "sl2.elliptic":
        a = params["alpha"]
        return (not _near(a, 0.0) and not _near(a, 0.5),
                _near(a, 0.0, BOUNDARY_BAND) or _near(a, 0.5, BOUNDARY_BAND))
    if form_id == "sl2.hyperbolic":
        a = params["alpha"]
        return (not _near(a, 0.0) and not _near(a, 1.0),
                _near(a, 0.0, BOUNDARY_BAND) or _near(a, 1.0, BOUNDARY_BAND))
    if family == "affR_plus_R" and form_id == "h.f1":
        a = params["alpha1"]
        return (a > 1.0 + PARAM_TOL or a < -PARAM_TOL,
                _near(a, 1.0, BOUNDARY_BAND) or _near(a, 0.0, BOUNDARY_BAND))
    if family == "affR_plus_R" and form_id == "h.f2":
        a = params["alpha2"]
        return (-1.0 + PARAM_TOL < a < -PARAM_TOL,
                _near(a, -1.0, BOUNDARY_BAND) or _near(a, 0.0, BOUNDARY_BAND))
    if family == "e_mu" and form_id == "eucmu.lorentzian":
        a = params["alpha2"]
        return (_near(a, 1.0), _near(a, 1.0, BOUNDARY_BAND) and not _near(a, 1.0))
    return True, False


def _completeness(family: str, form_id: str, params: dict,
                  table2_matched: bool, canonical: np.ndarray) -> str:
    if table2_matched:
        return "complete"
    # definite metrics on a Lie group are geodesically complete
    eig = np.linalg.eigvalsh(np.asarray(canonical, dtype=float))
    if np.all(eig > 0) or np.all(eig < 0):
        return "complete"
    for rule in load_tables()["completeness"]:
        if "rule" in rule:
            continue
        if rule["family"] != family:
            continue
        if rule["form_id"] not in ("*", form_id):
            continue
        if "when" in rule and not _params_match(rule["when"], params):
            continue
        return rule["status"]
    return "unknown"


def match_tables(cls: BianchiClass, nf: NormalFormMatch,
                 curv: CurvatureReport) -> KillingReport:
    """Classify the Killing algebra of the metric behind a normal-form match.

    ``cls`` and ``nf`` must describe the same input; ``curv`` is the
    curvature report of the input metric, used to cross-check the
    constant-curvature rows.  Raises InconsistentCurvature when a
    dimension-6 row matches but the curvature is not constant of the
    expected sign.
    """
    data = load_tables()
    family, form_id, params = cls.tag, nf.form_id, nf.params
    flags = list(getattr(cls, "boundary_flags", ()))

    for row in data["table2"]:
        if row["family"] != family or row["form_id"] != form_id:
            continue
        if not _params_match(row["params"], params):
            # near-miss against a dimension-6 parameter value is worth flagging
            if _params_match(row["params"], params, tol=BOUNDARY_BAND):
                flags.append(f"near-constant-curvature:{family}:{form_id}")
            continue
        if curv.constant_k is None:
            raise InconsistentCurvature(
                f"{family}/{form_id} is a constant-curvature form but the "
                "input metric does not have constant sectional curvature"
            )
        # K rescales by the normal-form scale factor: g = canonical / scale
        want_sign = {"0": 0.0, "+": 1.0, "-": -1.0}[row["curvature_sign"]]
        want_sign *= float(np.sign(nf.scale))
        kscale = max(1.0, abs(curv.constant_k))
        if want_sign == 0.0:
            consistent = abs(curv.constant_k) <= 1e-7 * kscale
        else:
            consistent = curv.constant_k * want_sign > -1e-7 * kscale
        if not consistent:
            raise InconsistentCurvature(
                f"{family}/{form_id}: constant curvature {curv.constant_k:g} "
                f"has the wrong sign (expected {row['curvature_sign']})"
            )
        return KillingReport(
            killing_dim=6,
            completeness="complete",
            constant_k=curv.constant_k,
            table2_row=dict(row),
            boundary_flags=tuple(flags),
        )

    for row in data["table3"]:
        if row["family"] != family or row["form_id"] != form_id:
            continue
        ok, near = _table3_constraint(family, form_id, params)
        if near:
            flags.append(f"near-boundary:{family}:{form_id}")
        if not ok:
            continue
        return KillingReport(
            killing_dim=4,
            completeness=_completeness(family, form_id, params, False,
                                       nf.canonical_metric),
            isotropy_type=row["isotropy"],
            g_ideal_in_L=row["g_ideal_in_L"],
            derived_killing=row["derived_killing"],
            constant_k=curv.constant_k,
            table3_row=dict(row),
            boundary_flags=tuple(flags),
        )

    return KillingReport(
        killing_dim=3,
        completeness=_completeness(family, form_id, params, False,
                                   nf.canonical_metric),
        constant_k=curv.constant_k,
        boundary_flags=tuple(flags),
    )


@dataclass(frozen=True)
class PlaneWaveModel:
    """Homogeneous plane-wave model attached to an h.f4 parameter.

    ``metric`` is the normal-form metric on the solvable group whose
    one-parameter part acts by ``rho(t) = expm(t * holonomy_exponent)`` on
    the 2-dimensional translation part.
    """

    alpha: float
    sigma: float
    metric: np.ndarray
    holonomy_exponent: np.ndarray

    def rho(self, t: float) -> np.ndarray:
        e = self.holonomy_exponent
        # diagonal exponent: exponentiate entrywise
        return np.diag(np.exp(t * np.diag(e)))


def plane_wave_parameter(alpha: float) -> PlaneWaveModel:
    """Plane-wave normal form D_sigma with sigma = alpha * (alpha - 1).

    Requires alpha not in {0, 1} and sigma > -1/4 strictly; the map is
    invariant under alpha -> 1 - alpha.
    """
    alpha = float(alpha)
    if _near(alpha, 0.0) or _near(alpha, 1.0):
        raise InvalidAlpha(f"alpha = {alpha:g} is a degenerate parameter")
    sigma = alpha * (alpha - 1.0)
    if sigma <= -0.25 + 1e-12:
        raise InvalidAlpha(
            f"alpha = {alpha:g} gives sigma = {sigma:g} <= -1/4"
        )
    metric = np.array([
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, sigma, 1.0],
    ])
    holonomy = np.array([[1.0, 0.0], [0.0, 1.0 / (1.0 - alpha)]])
    return PlaneWaveModel(alpha=alpha, sigma=sigma, metric=metric,
                          holonomy_exponent=holonomy)
