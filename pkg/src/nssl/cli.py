"""Command-line front end.

Problems and task settings are read from a sectioned key=value config file
(see README for the schema); results are emitted as an aligned table, CSV,
or JSON.  Exit codes: 0 success, 1 config/validation error, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .exactness import SUSPECT, run_boundary_swap
from .locate import ComplexBox, LocateError, LocateOptions, find_eigenvalues
from .mfunc import compute_mn
from .ode import DEFAULT_ATOL, DEFAULT_RTOL, IntegrationError
from .problem import (Angle, Dirichlet, Problem, ProblemError,
                      ReferenceSolution)
from .resonance import ResonanceError, find_resonances, theta_invariance_filter
from .sims import SimsError, admissible_pair, case_diagnostic, sample_hull


class ConfigError(ValueError):
    pass


_NUMERICAL_ERRORS = (IntegrationError, LocateError, SimsError, ResonanceError,
                     ArithmeticError)


# ------------------------------------------------------------- formatting


def fmt_real(v: float) -> str:
    return f"{v:.10g}"


def fmt_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 or math.isnan(z.imag) else "-"
    return f"{fmt_real(z.real)}{sign}{fmt_real(abs(z.imag))}i"


def jz(z: complex):
    return {"re": z.real, "im": z.imag}


# ---------------------------------------------------------- config parsing


_PROBLEM_KEYS = {"p", "q", "w", "a", "b", "alpha", "right_bc"}
_SCHEDULE_KEYS = {"points", "start", "step", "count"}
_OUTPUT_KEYS = {"format", "path"}
_TASK_KEYS = {
    "solve": {"box", "b_n", "abs_tol", "rel_tol", "isolation", "refine_tol",
              "max_per_box"},
    "verify": {"box", "abs_tol", "rel_tol", "tau_conv", "tau_pair", "tau_match"},
    "resonances": {"box", "theta", "abs_tol", "rel_tol", "tau_conv", "tau_pair",
                   "tau_match", "tau_theta"},
    "mfunc": {"box", "b_n", "re_points", "im_points", "abs_tol", "rel_tol"},
    "classify": {"lambda0", "lambda_test", "x_points", "r_min", "r_max",
                 "r_points", "abs_tol", "rel_tol", "samples_csv"},
}
_KNOWN_SECTIONS = {"problem", "schedule", "output"} | set(_TASK_KEYS)


def _parse_complex(text: str, where: str) -> complex:
    try:
        node = ex.parse(text.strip())
    except ex.ExprSyntaxError as e:
        raise ConfigError(f"{where}: not a number: {e}") from None
    if ex.contains_var(node):
        raise ConfigError(f"{where}: must be a constant, found the variable x")
    try:
        return ex.evaluate(node)
    except ex.ExprEvalError as e:
        raise ConfigError(f"{where}: {e}") from None


def _parse_real(text: str, where: str) -> float:
    z = _parse_complex(text, where)
    if z.imag != 0:
        raise ConfigError(f"{where}: must be real, got {text.strip()!r}")
    return z.real


def _parse_box(text: str, where: str) -> ComplexBox:
    parts = [t for t in text.split(",") if t.strip()]
    if len(parts) != 4:
        raise ConfigError(f"{where}: expected re_min, re_max, im_min, im_max")
    vals = [_parse_real(t, where) for t in parts]
    try:
        return ComplexBox(*vals)
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from None


def load_config(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        read = cp.read(path)
    except configparser.Error as e:
        raise ConfigError(f"malformed config: {e}") from None
    if not read:
        raise ConfigError(f"config file not found: {path}")
    for section in cp.sections():
        if section not in _KNOWN_SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        allowed = (_PROBLEM_KEYS if section == "problem"
                   else _SCHEDULE_KEYS if section == "schedule"
                   else _OUTPUT_KEYS if section == "output"
                   else _TASK_KEYS[section])
        for key in cp[section]:
            if section == "problem" and key.startswith("param."):
                continue
            if key not in allowed:
                raise ConfigError(f"unknown key {section}.{key}")
    return cp


def _require(cp, section: str, key: str) -> str:
    if section not in cp or key not in cp[section]:
        raise ConfigError(f"missing required key {section}.{key}")
    return cp[section][key]


def _schedule_from(cp) -> tuple:
    if "schedule" not in cp:
        raise ConfigError("missing required section [schedule]")
    sec = cp["schedule"]
    if "points" in sec:
        if {"start", "step", "count"} & set(sec):
            raise ConfigError("schedule: give either points or start/step/count")
        pts = [t for t in sec["points"].split(",") if t.strip()]
        if not pts:
            raise ConfigError("schedule.points: empty list")
        return tuple(_parse_real(t, "schedule.points") for t in pts)
    missing = {"start", "step", "count"} - set(sec)
    if missing:
        raise ConfigError(f"schedule: missing {', '.join(sorted(missing))}")
    start = _parse_real(sec["start"], "schedule.start")
    step = _parse_real(sec["step"], "schedule.step")
    count = int(_parse_real(sec["count"], "schedule.count"))
    if count < 1 or step <= 0:
        raise ConfigError("schedule: count must be >= 1 and step > 0")
    return tuple(start + step * i for i in range(count))


def build_problem(cp) -> Problem:
    if "problem" not in cp:
        raise ConfigError("missing required section [problem]")
    sec = cp["problem"]
    params = {}
    for key in sec:
        if key.startswith("param."):
            name = key[len("param."):]
            params[name] = _parse_complex(sec[key], f"problem.{key}")
    names = tuple(params)

    def parse_expr(key):
        src = _require(cp, "problem", key)
        try:
            return ex.parse(src, names)
        except ex.ExprSyntaxError as e:
            raise ConfigError(f"problem.{key}: {e}") from None

    p, q, w = parse_expr("p"), parse_expr("q"), parse_expr("w")
    a = _parse_real(_require(cp, "problem", "a"), "problem.a")
    braw = _require(cp, "problem", "b").strip().lower()
    b = math.inf if braw in ("inf", "infinity") else _parse_real(braw, "problem.b")
    alpha = _parse_complex(_require(cp, "problem", "alpha"), "problem.alpha")
    rtext = _require(cp, "problem", "right_bc").strip()
    if rtext.lower() == "dirichlet":
        rbc = Dirichlet()
    elif rtext.lower().startswith("angle:"):
        rbc = Angle(_parse_complex(rtext[len("angle:"):], "problem.right_bc"))
    elif rtext.lower().startswith("reference:"):
        vsrc = rtext[len("reference:"):].strip()
        try:
            rbc = ReferenceSolution(ex.parse(vsrc, names))
        except ex.ExprSyntaxError as e:
            raise ConfigError(f"problem.right_bc: {e}") from None
    else:
        raise ConfigError(
            "problem.right_bc: expected dirichlet, angle:<number> or reference:<expr>")
    schedule = _schedule_from(cp)
    try:
        return Problem(p, q, w, a, b, alpha, rbc, schedule, params)
    except ProblemError as e:
        raise ConfigError(f"problem: {e}") from None


@dataclass
class OutputSpec:
    format: str = "table"
    path: str = "-"


def output_spec(cp, fmt_override=None, path_override=None) -> OutputSpec:
    spec = OutputSpec()
    if "output" in cp:
        sec = cp["output"]
        if "format" in sec:
            spec.format = sec["format"].strip().lower()
        if "path" in sec:
            spec.path = sec["path"].strip()
    if fmt_override:
        spec.format = fmt_override
    if path_override:
        spec.path = path_override
    if spec.format not in ("table", "csv", "json"):
        raise ConfigError(f"output.format: unknown format {spec.format!r}")
    return spec


def _emit(text: str, spec: OutputSpec):
    if spec.path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(spec.path, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _tolerances(sec):
    atol = _parse_real(sec["abs_tol"], "abs_tol") if "abs_tol" in sec else DEFAULT_ATOL
    rtol = _parse_real(sec["rel_tol"], "rel_tol") if "rel_tol" in sec else DEFAULT_RTOL
    return atol, rtol


def _locate_opts(sec) -> LocateOptions:
    opts = LocateOptions()
    if "isolation" in sec:
        opts.isolation_rel = _parse_real(sec["isolation"], "solve.isolation")
    if "refine_tol" in sec:
        opts.refine_rel = _parse_real(sec["refine_tol"], "solve.refine_tol")
    if "max_per_box" in sec:
        opts.max_per_box = int(_parse_real(sec["max_per_box"], "solve.max_per_box"))
    return opts


# ------------------------------------------------------------- subcommands


_CSV_HEADER = "re_lambda,im_lambda,multiplicity,residual,b_n,verdict"


def _estimate_csv_row(lam, mult, residual, b_n, verdict=""):
    return (f"{fmt_real(lam.real)},{fmt_real(lam.imag)},{mult},"
            f"{fmt_real(residual)},{fmt_real(b_n)},{verdict}")


def run_solve(cp, spec: OutputSpec) -> str:
    problem = build_problem(cp)
    if "solve" not in cp:
        raise ConfigError("missing required section [solve]")
    sec = cp["solve"]
    box = _parse_box(_require(cp, "solve", "box"), "solve.box")
    b_n = _parse_real(sec["b_n"], "solve.b_n") if "b_n" in sec else problem.schedule[-1]
    atol, rtol = _tolerances(sec)
    ests = find_eigenvalues(problem, b_n, box, _locate_opts(sec), atol=atol, rtol=rtol)
    if spec.format == "csv":
        rows = [_CSV_HEADER]
        rows += [_estimate_csv_row(e.lam, e.multiplicity, e.residual, e.b_n)
                 for e in ests]
        return "\n".join(rows)
    if spec.format == "json":
        doc = {"b_n": b_n,
               "box": {"re_min": box.re_min, "re_max": box.re_max,
                       "im_min": box.im_min, "im_max": box.im_max},
               "estimates": [{"lambda": jz(e.lam), "multiplicity": e.multiplicity,
                              "residual": e.residual, "b_n": e.b_n,
                              "refined": e.refined} for e in ests]}
        return json.dumps(doc, indent=2)
    lines = [f"eigenvalues in box [{fmt_real(box.re_min)}, {fmt_real(box.re_max)}] x "
             f"[{fmt_real(box.im_min)}, {fmt_real(box.im_max)}] at b_n = {fmt_real(b_n)}",
             f"{'lambda':>28s} {'mult':>4s} {'residual':>10s} {'refined':>7s}"]
    for e in ests:
        lines.append(f"{fmt_complex(e.lam):>28s} {e.multiplicity:>4d} "
                     f"{e.residual:>10.2e} {str(e.refined):>7s}")
    return "\n".join(lines)


def _verify_kwargs(sec):
    kwargs = {}
    if "tau_conv" in sec:
        kwargs["tau_conv"] = _parse_real(sec["tau_conv"], "tau_conv")
    if "tau_pair" in sec:
        kwargs["tau_pair"] = _parse_real(sec["tau_pair"], "tau_pair")
    if "tau_match" in sec:
        kwargs["tau_match"] = _parse_real(sec["tau_match"], "tau_match")
    return kwargs


def _track_json(t):
    return {"family": t.family,
            "entries": [{"b_n": b, "lambda": jz(e.lam),
                         "multiplicity": e.multiplicity, "residual": e.residual,
                         "refined": e.refined} for b, e in t.entries],
            "limitEstimate": jz(t.limit),
            "converged": t.converged,
            "cauchyGap": t.cauchy_gap if math.isfinite(t.cauchy_gap) else None}


def _report_json(report) -> dict:
    return {
        "box": {"re_min": report.box.re_min, "re_max": report.box.re_max,
                "im_min": report.box.im_min, "im_max": report.box.im_max},
        "schedule": list(report.schedule),
        "mTracks": [_track_json(t) for t in report.m_tracks],
        "lTracks": [_track_json(t) for t in report.l_tracks],
        "verdicts": [{"verdict": v.verdict,
                      "pairedLTrack": v.paired_index,
                      "pairDistance": v.pair_distance
                      if math.isfinite(v.pair_distance) else None}
                     for v in report.verdicts],
        "lVerdicts": [{"verdict": v.verdict,
                       "pairedMTrack": v.paired_index,
                       "pairDistance": v.pair_distance
                       if math.isfinite(v.pair_distance) else None}
                      for v in report.l_verdicts],
        "missingEigenvalueWarnings": [
            {"family": w.family, "bPrev": w.b_prev, "bNext": w.b_next,
             "countPrev": w.count_prev, "countNext": w.count_next}
            for w in report.warnings],
    }


def _verify_table(report) -> str:
    lines = ["limits of the truncated family (asterisk: suspect-spurious, "
             "matched by the swapped-condition family)", ""]
    lines.append(f"  {'limit':>28s}  {'verdict':<16s} {'pair distance':>13s}  "
                 f"{'matching swapped limit':>28s}")
    for v in report.verdicts:
        mark = "*" if v.verdict == SUSPECT else " "
        paired = (fmt_complex(report.l_tracks[v.paired_index].limit)
                  if v.paired_index is not None else "")
        dist = f"{v.pair_distance:.3e}" if math.isfinite(v.pair_distance) else ""
        lines.append(f"{mark} {fmt_complex(v.track.limit):>28s}  {v.verdict:<16s} "
                     f"{dist:>13s}  {paired:>28s}")
    lines.append("")
    lines.append("swapped-condition family limits")
    for v in report.l_verdicts:
        mark = "*" if v.verdict == SUSPECT else " "
        lines.append(f"{mark} {fmt_complex(v.track.limit):>28s}  {v.verdict:<16s}")
    if report.warnings:
        lines.append("")
        lines.append("missing-eigenvalue warnings (box count dropped):")
        for w in report.warnings:
            lines.append(f"  family {w.family}: {w.count_prev} at b_n = "
                         f"{fmt_real(w.b_prev)} -> {w.count_next} at b_n = "
                         f"{fmt_real(w.b_next)}")
    return "\n".join(lines)


def run_verify(cp, spec: OutputSpec) -> str:
    problem = build_problem(cp)
    if "verify" not in cp:
        raise ConfigError("missing required section [verify]")
    sec = cp["verify"]
    box = _parse_box(_require(cp, "verify", "box"), "verify.box")
    atol, rtol = _tolerances(sec)
    report = run_boundary_swap(problem, box, problem.schedule,
                               atol=atol, rtol=rtol, **_verify_kwargs(sec))
    if spec.format == "json":
        return json.dumps(_report_json(report), indent=2)
    if spec.format == "csv":
        rows = [_CSV_HEADER]
        for v in report.verdicts:
            b, e = v.track.entries[-1]
            rows.append(_estimate_csv_row(v.track.limit, e.multiplicity,
                                          e.residual, b, v.verdict))
        return "\n".join(rows)
    return _verify_table(report)


def run_resonances(cp, spec: OutputSpec, thetas_override=None) -> str:
    problem = build_problem(cp)
    if "resonances" not in cp:
        raise ConfigError("missing required section [resonances]")
    sec = cp["resonances"]
    box = _parse_box(_require(cp, "resonances", "box"), "resonances.box")
    atol, rtol = _tolerances(sec)
    if thetas_override:
        thetas = [float(t) for t in thetas_override]
    elif "theta" in sec:
        thetas = [_parse_real(t, "resonances.theta")
                  for t in sec["theta"].split(",") if t.strip()]
    else:
        raise ConfigError("missing required key resonances.theta")
    if not thetas:
        raise ConfigError("resonances.theta: empty list")
    tau_theta = (_parse_real(sec["tau_theta"], "resonances.tau_theta")
                 if "tau_theta" in sec else 1e-3)
    kwargs = _verify_kwargs(sec)
    runs = []
    for th in sorted(set(thetas)):
        cands, _ = find_resonances(problem.q, th, box, problem,
                                   atol=atol, rtol=rtol, **kwargs)
        runs.append((th, cands))
    if len(runs) >= 2:
        cands = theta_invariance_filter(runs, tau_theta)
    else:
        cands = runs[0][1]
    cands = sorted(cands, key=lambda c: (abs(c.lam), math.atan2(c.lam.imag, c.lam.real)))

    def cand_json(c):
        return {"lambda": jz(c.lam), "mu": jz(c.mu), "theta": c.theta,
                "verdict": c.verdict,
                "pairDistance": c.pair_distance
                if math.isfinite(c.pair_distance) else None,
                "lowerHalfPlane": c.lower_half,
                "thetaInvariant": c.theta_invariant,
                "genuine": c.genuine}

    if spec.format == "json":
        doc = {"thetas": [th for th, _ in runs],
               "runs": [{"theta": th, "candidates": [cand_json(c) for c in rc]}
                        for th, rc in runs],
               "candidates": [cand_json(c) for c in cands]}
        return json.dumps(doc, indent=2)
    if spec.format == "csv":
        rows = [_CSV_HEADER]
        for c in cands:
            rows.append(_estimate_csv_row(c.lam, 1, 0.0, problem.schedule[-1],
                                          c.verdict))
        return "\n".join(rows)
    lines = [f"resonance candidates, theta = "
             f"{', '.join(fmt_real(th) for th, _ in runs)}",
             f"{'lambda':>28s}  {'verdict':<16s} {'lower-half':>10s} "
             f"{'theta-inv':>9s} {'genuine':>7s}"]
    for c in cands:
        ti = "-" if c.theta_invariant is None else str(c.theta_invariant)
        lines.append(f"{fmt_complex(c.lam):>28s}  {c.verdict:<16s} "
                     f"{str(c.lower_half):>10s} {ti:>9s} {str(c.genuine):>7s}")
    return "\n".join(lines)


def run_mfunc(cp, spec: OutputSpec) -> str:
    problem = build_problem(cp)
    if "mfunc" not in cp:
        raise ConfigError("missing required section [mfunc]")
    sec = cp["mfunc"]
    box = _parse_box(_require(cp, "mfunc", "box"), "mfunc.box")
    b_n = _parse_real(sec["b_n"], "mfunc.b_n") if "b_n" in sec else problem.schedule[-1]
    nre = int(_parse_real(sec["re_points"], "mfunc.re_points")) if "re_points" in sec else 20
    nim = int(_parse_real(sec["im_points"], "mfunc.im_points")) if "im_points" in sec else 20
    if nre < 1 or nim < 1:
        raise ConfigError("mfunc: re_points and im_points must be >= 1")
    atol, rtol = _tolerances(sec)
    res = np.linspace(box.re_min, box.re_max, nre)
    ims = np.linspace(box.im_min, box.im_max, nim)
    rows = []
    for im in ims:
        for re in res:
            lam = complex(re, im)
            mv = compute_mn(problem, b_n, lam, atol=atol, rtol=rtol)
            if mv.at_pole:
                rows.append((lam, complex(math.nan, math.nan)))
            else:
                rows.append((lam, mv.value))
    if spec.format == "json":
        doc = {"b_n": b_n,
               "values": [{"lambda": jz(lam), "m": jz(m)} for lam, m in rows]}
        return json.dumps(doc, indent=2)
    header = "re_lambda,im_lambda,re_m,im_m"
    body = [f"{fmt_real(l.real)},{fmt_real(l.imag)},{fmt_real(m.real)},{fmt_real(m.imag)}"
            for l, m in rows]
    if spec.format == "csv":
        return "\n".join([header] + body)
    lines = [f"{'lambda':>28s} {'m_n(lambda)':>30s}"]
    for lam, m in rows:
        lines.append(f"{fmt_complex(lam):>28s} {fmt_complex(m):>30s}")
    return "\n".join(lines)


def run_classify(cp, spec: OutputSpec) -> str:
    problem = build_problem(cp)
    if "classify" not in cp:
        raise ConfigError("missing required section [classify]")
    sec = cp["classify"]
    lam0 = _parse_complex(_require(cp, "classify", "lambda0"), "classify.lambda0")
    lam_test = _parse_complex(_require(cp, "classify", "lambda_test"),
                              "classify.lambda_test")
    xp = int(_parse_real(sec["x_points"], "classify.x_points")) if "x_points" in sec else 200
    rmin = _parse_real(sec["r_min"], "classify.r_min") if "r_min" in sec else 1e-6
    rmax = _parse_real(sec["r_max"], "classify.r_max") if "r_max" in sec else 1e6
    rp = int(_parse_real(sec["r_points"], "classify.r_points")) if "r_points" in sec else 40
    atol, rtol = _tolerances(sec)
    hull = sample_hull(problem, xp, np.logspace(math.log10(rmin), math.log10(rmax), rp))
    pair = admissible_pair(hull, lam0)
    diag = case_diagnostic(problem, lam_test, pair, atol=atol, rtol=rtol)
    if "samples_csv" in sec:
        with open(sec["samples_csv"], "w") as fh:
            fh.write("re,im\n")
            for s in hull.samples:
                fh.write(f"{fmt_real(s.real)},{fmt_real(s.imag)}\n")
    doc = {
        "hull": {"vertices": [jz(v) for v in hull.vertices],
                 "rayDirections": [jz(v) for v in hull.ray_directions]},
        "admissiblePair": {"eta": pair.eta, "K": jz(pair.K),
                           "satisfiedFraction": pair.satisfied_fraction,
                           "separationOk": pair.separation_ok},
        "caseDiagnostic": {
            "suggestedCase": diag.suggested_case,
            "lambdaTest": jz(diag.lam_test),
            "alphaConditionOk": diag.alpha_condition_ok,
            "solutions": [{"label": s.label,
                           "l2Verdict": s.l2_verdict,
                           "formVerdict": s.form_verdict,
                           "l2Logs": s.l2_logs,
                           "formLogs": s.form_logs} for s in diag.solutions]},
    }
    if spec.format == "json":
        return json.dumps(doc, indent=2)
    if spec.format == "csv":
        rows = ["solution,l2_verdict,form_verdict"]
        rows += [f"{s.label},{s.l2_verdict},{s.form_verdict}" for s in diag.solutions]
        rows.append(f"suggested_case,{diag.suggested_case},")
        return "\n".join(rows)
    lines = [f"suggested endpoint class: {diag.suggested_case}",
             f"eta = {fmt_real(pair.eta)}, K = {fmt_complex(pair.K)}, "
             f"half-plane condition satisfied on "
             f"{100.0 * pair.satisfied_fraction:.2f}% of samples",
             f"left-angle admissibility condition: "
             f"{'satisfied' if diag.alpha_condition_ok else 'violated'}"]
    for s in diag.solutions:
        lines.append(f"  solution {s.label}: weighted-square {s.l2_verdict}, "
                     f"quadratic form {s.form_verdict}")
    return "\n".join(lines)


# -------------------------------------------------------------------- main


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nssl",
        description="Eigenvalues of singular non-selfadjoint Sturm-Liouville "
                    "problems with spurious-mode detection")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("solve", "locate eigenvalues of a truncated problem in a box"),
            ("verify", "run the boundary-swap test over the schedule"),
            ("resonances", "complex-scaling resonance search"),
            ("mfunc", "tabulate the Weyl coefficient on a grid"),
            ("classify", "numerical-range hull and endpoint diagnostics")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=True, help="path to the config file")
        sp.add_argument("--format", choices=("table", "csv", "json"))
        sp.add_argument("--output", help="output path ('-' for stdout)")
        if name == "resonances":
            sp.add_argument("--theta", action="append",
                            help="rotation angle; repeat for the invariance filter")
    args = parser.parse_args(argv)

    try:
        cp = load_config(args.config)
        spec = output_spec(cp, args.format, args.output)
        if args.command == "solve":
            text = run_solve(cp, spec)
        elif args.command == "verify":
            text = run_verify(cp, spec)
        elif args.command == "resonances":
            text = run_resonances(cp, spec, getattr(args, "theta", None))
        elif args.command == "mfunc":
            text = run_mfunc(cp, spec)
        else:
            text = run_classify(cp, spec)
    except (ConfigError, ProblemError, ex.ExprSyntaxError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except _NUMERICAL_ERRORS as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2
    _emit(text, spec)
    return 0


if __name__ == "__main__":
    sys.exit(main())
