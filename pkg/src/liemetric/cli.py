"""Command-line interface: analyze one input, regenerate the atlas, or probe.

Exit codes:
  0  success
  2  request parse or schema error
  3  structure constants fail the Jacobi identity
  4  degenerate input (metric or algebra data)
  5  metric could not be reduced to a normal form
  6  atlas mismatch against the embedded expectations
  7  integrator tolerance unachievable

Request schema (JSON)::

    {
      "algebra": {"family": "heis"}            # or {"family": "h_lambda", "param": 0.5}
                 # or {"structure": [[[...]]]}  # c[i][j][k], zero-based:
                 # [e_i, e_j] = sum_k c[i][j][k] e_k.  For heis ([e1,e2]=e3):
                 # c[0][1][2] = 1, c[1][0][2] = -1, all else 0.
      "metric": [[1,0,0],[0,1,0],[0,0,-1]],
      "options": {"seed": 0, "probe": false, "probe_horizon": 100.0,
                  "probe_tol": 1e-9}
    }
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import families, geodesic, normal_form
from .algebra import DegenerateInput, LieAlgebra3, NotJacobi, jacobi_residual
from .curvature import DegenerateMetric, MetricForm
from .normal_form import ReductionFailed
from .pipeline import AnalysisOptions, analyze, probe_to_dict
from .tables import SCHEMA_VERSION, load_tables

EXIT_PARSE = 2
EXIT_JACOBI = 3
EXIT_DEGENERATE = 4
EXIT_REDUCTION = 5
EXIT_ATLAS = 6
EXIT_TOLERANCE = 7


class RequestError(ValueError):
    """The request file violates the input schema."""


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": {"code": code, "type": kind,
                                "message": message}}, sort_keys=True))
    return code


def _load_request(path: str, eps_jac: float) -> tuple[LieAlgebra3, MetricForm, dict]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise RequestError(f"cannot read request: {exc}") from exc
    if not isinstance(data, dict) or "algebra" not in data or "metric" not in data:
        raise RequestError("request must contain 'algebra' and 'metric'")
    alg = data["algebra"]
    if not isinstance(alg, dict) or ("family" in alg) == ("structure" in alg):
        raise RequestError("algebra needs exactly one of 'family' or 'structure'")
    if "family" in alg:
        tag = alg["family"]
        if tag not in families.FAMILY_TAGS:
            raise RequestError(f"unknown family tag {tag!r}")
        try:
            a = families.make(tag, alg.get("param"))
        except (TypeError, ValueError) as exc:
            raise RequestError(f"bad family parameter: {exc}") from exc
    else:
        c = np.asarray(alg["structure"], dtype=float)
        if c.shape != (3, 3, 3):
            raise RequestError("structure constants must be a 3x3x3 array")
        if jacobi_residual(c) > eps_jac * max(1.0, float(np.max(np.abs(c))) ** 2):
            raise NotJacobi("structure constants violate the Jacobi identity")
        a = LieAlgebra3(c)
    g = np.asarray(data["metric"], dtype=float)
    if g.shape != (3, 3):
        raise RequestError("metric must be a 3x3 matrix")
    if np.max(np.abs(g - g.T)) > 1e-12 * max(1.0, float(np.max(np.abs(g)))):
        raise RequestError("metric must be symmetric")
    return a, MetricForm(g), data.get("options", {})


def cmd_analyze(args) -> int:
    try:
        a, m, opts = _load_request(args.request, args.eps_jac)
        options = AnalysisOptions(
            seed=args.seed if args.seed is not None else int(opts.get("seed", 0)),
            probe=bool(opts.get("probe", False)),
            probe_horizon=float(opts.get("probe_horizon", 100.0)),
            probe_tol=float(opts.get("probe_tol", 1e-9)),
            eps_rank=args.eps_rank,
        )
        report = analyze(a, m, options)
    except RequestError as exc:
        return _fail(EXIT_PARSE, "RequestError", str(exc))
    except NotJacobi as exc:
        return _fail(EXIT_JACOBI, "NotJacobi", str(exc))
    except (DegenerateInput, DegenerateMetric) as exc:
        return _fail(EXIT_DEGENERATE, type(exc).__name__, str(exc))
    except ReductionFailed as exc:
        return _fail(EXIT_REDUCTION, "ReductionFailed", str(exc))
    except geodesic.ToleranceUnachievable as exc:
        return _fail(EXIT_TOLERANCE, "ToleranceUnachievable", str(exc))
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


# fixed representative parameters for atlas rows whose form has free ones
_ATLAS_PARAMS = {
    ("so3", "so3.berger"): {"alpha": 2.0},
    ("sl2", "sl2.elliptic"): {"alpha": 0.25},
    ("sl2", "sl2.hyperbolic"): {"alpha": 2.0},
    ("sl2", "sl2.nilpotent"): {"eps": 1.0},
    ("affR_plus_R", "h.f5"): {"eps": 1.0},
    ("affR_plus_R", "h.f1"): {"alpha1": 2.0},
    ("affR_plus_R", "h.f2"): {"alpha2": -0.5},
    ("e_mu", "eucmu.lorentzian"): {"alpha2": 1.0},
}
_ATLAS_FAMILY_PARAM = {"h_lambda": 0.5, "e_mu": 1.0}


def _atlas_algebra(tag: str) -> LieAlgebra3:
    return families.make(tag, _ATLAS_FAMILY_PARAM.get(tag))


def _atlas_row2(row: dict) -> tuple[dict, list[str]]:
    a = _atlas_algebra(row["family"])
    m = MetricForm(normal_form.canonical_matrix(row["form_id"], dict(row["params"])))
    rep = analyze(a, m)
    k = rep["killing"]
    derived_sign = "0"
    if k["constant_k"] is not None and abs(k["constant_k"]) > 1e-7:
        derived_sign = "+" if k["constant_k"] > 0 else "-"
    errors = []
    if k["killing_dim"] != 6:
        errors.append(f"killing_dim {k['killing_dim']} != 6")
    if derived_sign != row["curvature_sign"]:
        errors.append(f"curvature sign {derived_sign} != {row['curvature_sign']}")
    if k["completeness"] != "complete":
        errors.append(f"completeness {k['completeness']} != complete")
    out = {
        "family": row["family"],
        "form_id": row["form_id"],
        "form_label": rep["normal_form"]["form_label"],
        "params": dict(row["params"]),
        "curvature_sign": derived_sign,
        "constant_k": k["constant_k"],
        "completeness": k["completeness"],
    }
    return out, errors


def _atlas_row3(row: dict) -> tuple[dict, list[str]]:
    a = _atlas_algebra(row["family"])
    params = _ATLAS_PARAMS.get((row["family"], row["form_id"]), {})
    m = MetricForm(normal_form.canonical_matrix(row["form_id"], dict(params)))
    rep = analyze(a, m)
    k = rep["killing"]
    errors = []
    if k["killing_dim"] != 4:
        errors.append(f"killing_dim {k['killing_dim']} != 4")
    for key, want in (("isotropy_type", row["isotropy"]),
                      ("derived_killing", row["derived_killing"]),
                      ("g_ideal_in_L", row["g_ideal_in_L"])):
        if k[key] != want:
            errors.append(f"{key} {k[key]} != {want}")
    out = {
        "family": row["family"],
        "form_id": row["form_id"],
        "form_label": rep["normal_form"]["form_label"],
        "constraint": row["constraint"],
        "sample_params": params,
        "isotropy": k["isotropy_type"],
        "derived_killing": k["derived_killing"],
        "g_ideal_in_L": k["g_ideal_in_L"],
        "completeness": k["completeness"],
    }
    return out, errors


def cmd_atlas(args) -> int:
    data = load_tables()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        rows2 = list(pool.map(_atlas_row2, data["table2"]))
        rows3 = list(pool.map(_atlas_row3, data["table3"]))
    mismatches = []
    for (row, errs), src in zip(rows2, data["table2"]):
        for e in errs:
            mismatches.append(f"table2 {src['family']}/{src['form_id']}: {e}")
    for (row, errs), src in zip(rows3, data["table3"]):
        for e in errs:
            mismatches.append(f"table3 {src['family']}/{src['form_id']}: {e}")
    forms = {
        fam: [{"form_id": f["form_id"],
               "form_label": normal_form.form_label(f["form_id"], {}),
               "constraint": f["constraint"]} for f in lst]
        for fam, lst in data["normal_forms"].items()
    }
    payloads = {
        "table2.json": {"schema_version": SCHEMA_VERSION,
                        "rows": [r for r, _ in rows2]},
        "table3.json": {"schema_version": SCHEMA_VERSION,
                        "rows": [r for r, _ in rows3]},
        "normal_forms.json": {"schema_version": SCHEMA_VERSION,
                              "families": forms},
    }
    for name, payload in payloads.items():
        (out_dir / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if mismatches:
        return _fail(EXIT_ATLAS, "AtlasMismatch", "; ".join(mismatches))
    print(json.dumps({"written": sorted(payloads), "out": str(out_dir),
                      "table2_rows": len(rows2), "table3_rows": len(rows3)},
                     sort_keys=True))
    return 0


def cmd_probe(args) -> int:
    try:
        a, m, opts = _load_request(args.request, args.eps_jac)
    except RequestError as exc:
        return _fail(EXIT_PARSE, "RequestError", str(exc))
    except NotJacobi as exc:
        return _fail(EXIT_JACOBI, "NotJacobi", str(exc))
    except (DegenerateInput, DegenerateMetric) as exc:
        return _fail(EXIT_DEGENERATE, type(exc).__name__, str(exc))
    v0 = opts.get("v0")
    try:
        if v0 is not None:
            verdicts = [geodesic.integrate(a, m, np.asarray(v0, dtype=float),
                                           args.horizon, args.tol)]
        else:
            verdicts = geodesic.sweep_probe(a, m, args.horizon, args.tol,
                                            n_directions=args.directions)
            if not verdicts:
                raise geodesic.ToleranceUnachievable(
                    "every probe direction collapsed without blow-up")
    except geodesic.ToleranceUnachievable as exc:
        return _fail(EXIT_TOLERANCE, "ToleranceUnachievable", str(exc))
    if args.csv:
        blowups = [v for v in verdicts if v.outcome == "blowup-detected"]
        geodesic.export_csv(blowups[0] if blowups else verdicts[0], args.csv)
    outcomes = [v.outcome for v in verdicts]
    print(json.dumps({
        "schema_version": SCHEMA_VERSION,
        "horizon": args.horizon,
        "n_probes": len(verdicts),
        "outcomes": {o: outcomes.count(o) for o in sorted(set(outcomes))},
        "verdicts": [probe_to_dict(v) for v in verdicts],
    }, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liemetric",
        description="Classify left-invariant metrics on 3-dimensional Lie groups.",
    )
    parser.add_argument("--seed", type=int, default=None, help="RNG seed override")
    parser.add_argument("--eps-jac", type=float, default=1e-9,
                        help="Jacobi identity tolerance")
    parser.add_argument("--eps-rank", type=float, default=1e-8,
                        help="numerical rank tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline on one request file")
    p.add_argument("request")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("atlas", help="regenerate the classification tables")
    p.add_argument("--out", default="atlas", help="output directory")
    p.add_argument("--jobs", type=int, default=4, help="worker threads")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("probe", help="geodesic completeness probe")
    p.add_argument("request")
    p.add_argument("--horizon", type=float, default=100.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--directions", type=int, default=64,
                   help="size of the initial-direction sweep grid")
    p.add_argument("--csv", default=None, help="trajectory CSV output path")
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
