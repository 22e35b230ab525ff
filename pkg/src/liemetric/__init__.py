"""Left-invariant metrics on 3-dimensional Lie groups.

Classify a 3-dimensional real Lie algebra into the Bianchi-style family
taxonomy, reduce a left-invariant Riemannian or Lorentzian metric to its
normal form under automorphisms, compute curvature, and look up the
dimension and structure of the full Killing algebra.
"""

from .algebra import (
    DegenerateInput,
    LieAlgebra3,
    NotJacobi,
    derived_algebra,
    is_automorphism,
    killing_form,
    transport,
    unimodular,
)
from .bianchi import BianchiClass, classify, eigen3, normalize_ad_scaling
from .curvature import (
    CurvatureReport,
    DegenerateMetric,
    MetricForm,
    curvature_report,
    levi_civita,
    ricci,
    riemann,
    sectional,
)
from .families import FAMILY_TAGS, make
from .geodesic import (
    ProbeVerdict,
    ToleranceUnachievable,
    euler_arnold_rhs,
    integrate,
    sweep_probe,
)
from .isotropy import (
    IsotropyElement,
    SkewDerivationSpace,
    isotropy_type,
    metric_constraints_from_isotropy,
    skew_derivations,
)
from .normal_form import NormalFormMatch, ReductionFailed, reduce
from .pipeline import AnalysisOptions, analyze
from .tables import (
    InconsistentCurvature,
    InvalidAlpha,
    KillingReport,
    load_tables,
    match_tables,
    plane_wave_parameter,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisOptions",
    "BianchiClass",
    "CurvatureReport",
    "DegenerateInput",
    "DegenerateMetric",
    "FAMILY_TAGS",
    "InconsistentCurvature",
    "InvalidAlpha",
    "IsotropyElement",
    "KillingReport",
    "LieAlgebra3",
    "MetricForm",
    "NormalFormMatch",
    "NotJacobi",
    "ProbeVerdict",
    "ReductionFailed",
    "SkewDerivationSpace",
    "ToleranceUnachievable",
    "analyze",
    "classify",
    "curvature_report",
    "derived_algebra",
    "eigen3",
    "euler_arnold_rhs",
    "integrate",
    "is_automorphism",
    "isotropy_type",
    "killing_form",
    "levi_civita",
    "load_tables",
    "make",
    "match_tables",
    "metric_constraints_from_isotropy",
    "normalize_ad_scaling",
    "plane_wave_parameter",
    "reduce",
    "ricci",
    "riemann",
    "sectional",
    "skew_derivations",
    "sweep_probe",
    "transport",
    "unimodular",
]
