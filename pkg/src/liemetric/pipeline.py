"""Full analysis pipeline: classify, curvature, normal form, Killing lookup.

This is the programmatic face of the command line: one call takes a Lie
algebra and a metric and returns a JSON-serializable report combining every
module's output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geodesic
from .algebra import LieAlgebra3
from .bianchi import classify
from .curvature import MetricForm, curvature_report
from .isotropy import isotropy_type, skew_derivations
from .normal_form import reduce as reduce_metric
from .tables import SCHEMA_VERSION, match_tables

REPORT_SCHEMA_VERSION = SCHEMA_VERSION


@dataclass(frozen=True)
class AnalysisOptions:
    """Tunable knobs threaded from the command line."""

    seed: int = 0
    probe: bool = False
    probe_horizon: float = 100.0
    probe_tol: float = 1e-9
    eps_rank: float = 1e-8


def _matrix(m: np.ndarray) -> list:
    return [[float(x) for x in row] for row in np.asarray(m)]


def analyze(a: LieAlgebra3, m: MetricForm,
            options: AnalysisOptions | None = None) -> dict:
    """Run the whole pipeline and assemble the analysis report."""
    options = options or AnalysisOptions()
    cls = classify(a)
    curv = curvature_report(a, m)
    nf = reduce_metric(a, m, cls)
    killing = match_tables(cls, nf, curv)
    skews = skew_derivations(a, m, eps=options.eps_rank)
    skew_type = isotropy_type(skews) if skews.dim in (0, 1, 3) else None

    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "bianchi": {
            "tag": cls.tag,
            "param": None if cls.param is None else float(cls.param),
            "basis_change": _matrix(cls.basis_change),
            "boundary_flags": list(cls.boundary_flags),
        },
        "curvature": {
            "ricci": _matrix(curv.ricci),
            "scalar": float(curv.scalar),
            "constant_k": None if curv.constant_k is None else float(curv.constant_k),
        },
        "skew_derivations": {
            "dim": skews.dim,
            "type": skew_type,
        },
        "normal_form": {
            "family": nf.family,
            "form_id": nf.form_id,
            "form_label": nf.form_label,
            "params": {k: float(v) for k, v in sorted(nf.params.items())},
            "scale": float(nf.scale),
            "canonical_metric": _matrix(nf.canonical_metric),
            "witness": _matrix(nf.witness),
        },
        "killing": {
            "killing_dim": killing.killing_dim,
            "isotropy_type": killing.isotropy_type,
            "g_ideal_in_L": killing.g_ideal_in_L,
            "derived_killing": killing.derived_killing,
            "completeness": killing.completeness,
            "constant_k": None if killing.constant_k is None else float(killing.constant_k),
            "boundary_flags": list(killing.boundary_flags),
        },
        "probe": None,
    }
    if options.probe:
        rng = np.random.default_rng(options.seed)
        v0 = rng.standard_normal(3)
        verdict = geodesic.integrate(a, m, v0, options.probe_horizon,
                                     options.probe_tol)
        report["probe"] = probe_to_dict(verdict)
    return report


def probe_to_dict(verdict: geodesic.ProbeVerdict) -> dict:
    return {
        "outcome": verdict.outcome,
        "horizon": float(verdict.horizon),
        "max_speed": float(verdict.max_speed),
        "blowup_t": None if verdict.blowup_t is None else float(verdict.blowup_t),
        "energy_drift": float(verdict.energy_drift),
        "detail": verdict.detail,
        "n_samples": len(verdict.samples),
    }
