"""Batch front end: analyze / sc-solve / continue / expand / verify / dichotomy.

Each run writes report.json (sorted keys, embedded config hash and package
version), samples.csv, and plot.svg into the output directory and returns a
conventional exit code: 0 pass, 2 certificate failure or dichotomy violation,
3 solver nonconvergence, 4 bad input.

Outputs are byte-identical across repeated runs with the same config: all
sampling is seeded, keys are sorted, and the SVG emitter is deterministic.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    DichotomyViolation,
    FailedCertificate,
    InvalidAngles,
    NonConvergence,
    QuasimapError,
)
from .corners import DomainSpec, singular_points
from .expansion import (
    ExpansionModel,
    SamplingPlan,
    dichotomy_check,
    fit_expansion,
    verify_asymptotic,
)
from .exponents import Exponent, parse_exponent, rationality_class
from .reflection import build_extension, certify_quadratic_domain, sample_quadratic_domain
from .scmap import model_corner_germ, solve_sc
from .series import LogPowerSeries
from .svg import svg_plot

EXIT_OK = 0
EXIT_CERTIFICATE = 2
EXIT_NONCONVERGENCE = 3
EXIT_BAD_INPUT = 4


@dataclass
class JobConfig:
    command: str
    input: str | None = None
    out: str = "out"
    K: int = 8
    R: float | None = None
    shells: int = 12
    tol: float = 1e-6
    seed: int = 0
    precision: int = 40
    alpha: str | None = None
    series: str | None = None
    angle_class: str | None = None

    def hash(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


def _emit(config: JobConfig, report: dict, samples: list | None = None, plot: str | None = None) -> None:
    outdir = Path(config.out)
    outdir.mkdir(parents=True, exist_ok=True)
    report = dict(report)
    report["config"] = asdict(config)
    report["config_hash"] = config.hash()
    report["version"] = __version__
    (outdir / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    if samples is not None:
        with open(outdir / "samples.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in samples:
                writer.writerow(row)
    if plot is not None:
        (outdir / "plot.svg").write_text(plot)


def _angle_json(a) -> object:
    return a.to_json() if isinstance(a, Exponent) else float(a)


def run(config: JobConfig) -> int:
    """Execute one job; deterministic outputs for identical configs."""
    try:
        handler = {
            "analyze": _run_analyze,
            "sc-solve": _run_sc_solve,
            "continue": _run_continue,
            "expand": _run_expand,
            "verify": _run_verify,
            "dichotomy": _run_dichotomy,
        }[config.command]
    except KeyError:
        print(f"unknown command {config.command!r}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        return handler(config)
    except FailedCertificate as exc:
        _emit(config, {"status": "certificate-failed", "certificate": exc.certificate.to_json()})
        print(f"certificate failed: witness at {exc.certificate.witness()}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except DichotomyViolation as exc:
        _emit(
            config,
            {
                "status": "dichotomy-violation",
                "offending_terms": [
                    {"exponent": e.to_json(), "log_degree": d, "coeff": [c.real, c.imag]}
                    for e, d, c in exc.offending_terms
                ],
            },
        )
        print(f"dichotomy violation: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except NonConvergence as exc:
        _emit(config, {"status": "nonconvergence", "residual": exc.residual})
        print(f"solver nonconvergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (OSError, ValueError, KeyError, json.JSONDecodeError, InvalidAngles, QuasimapError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def _load_json(path: str | None) -> dict:
    if path is None:
        raise ValueError("--input is required for this command")
    return json.loads(Path(path).read_text())


def _run_analyze(config: JobConfig) -> int:
    domain = DomainSpec.from_json(_load_json(config.input))
    sing = singular_points(domain)
    report = {
        "status": "ok",
        "singular_points": [
            {"point": [p.real, p.imag], "angles_over_pi": [_angle_json(a) for a in angles]}
            for p, angles in sing
        ],
    }
    samples = [["site_re", "site_im", "n_components"]]
    curves = []
    for site in domain.sites:
        samples.append([site.vertex.real, site.vertex.imag, len(site.components)])
        ts = np.linspace(0.0, 0.5, 32)
        for comp in site.components:
            for arc in (comp.arc1, comp.arc2):
                zs = arc.eval(ts)
                curves.append(("", np.real(zs), np.imag(zs)))
    plot = svg_plot(curves, title="boundary arc germs", xlabel="Re", ylabel="Im")
    _emit(config, report, samples, plot)
    return EXIT_OK


def _run_sc_solve(config: JobConfig) -> int:
    data = _load_json(config.input)
    if "polygon" in data:
        vertices = [complex(x, y) for x, y in data["polygon"]]
        angles = data.get("angles_over_pi")
        if angles is None:
            raise ValueError("polygon input needs angles_over_pi")
    else:
        vertices = [complex(x, y) for x, y in data["vertices"]]
        angles = data["angles_over_pi"]
    from fractions import Fraction

    poly = solve_sc(vertices, [Fraction(a) if not isinstance(a, list) else Fraction(a[0], a[1]) for a in angles])
    report = {
        "status": "ok",
        "prevertices": list(map(float, poly.prevertices)),
        "A": [poly.A.real, poly.A.imag],
        "B": [poly.B.real, poly.B.imag],
        "residual": poly.residual,
        "angles_over_pi": [[a.numerator, a.denominator] for a in poly.angles],
    }
    samples = [["k", "prevertex", "vertex_re", "vertex_im"]]
    for k, (x, w) in enumerate(zip(poly.prevertices, poly.vertices)):
        samples.append([k, float(x), w.real, w.imag])
    vs = poly.vertices + poly.vertices[:1]
    plot = svg_plot(
        [("polygon", [v.real for v in vs], [v.imag for v in vs])],
        title="target polygon",
        xlabel="Re",
        ylabel="Im",
    )
    _emit(config, report, samples, plot)
    return EXIT_OK


def _model_setup(config: JobConfig):
    if config.alpha is None:
        raise ValueError("--alpha is required (e.g. 1/2, sqrt2, golden)")
    alpha = parse_exponent(config.alpha)
    germ = model_corner_germ(alpha)
    ext = build_extension(germ, K=config.K, order=config.precision)
    cert = certify_quadratic_domain(ext)
    return alpha, germ, ext, cert


def _run_continue(config: JobConfig) -> int:
    alpha, germ, ext, cert = _model_setup(config)
    av = alpha.value()
    pts = sample_quadratic_domain(cert.quad, 512, config.seed, max_abs_arg=(2**config.K - 1) * math.pi * 0.98)
    samples = [["r", "arg", "abs_error_vs_closed_form"]]
    worst = 0.0
    for p in pts:
        got = ext.evaluate(p)
        want = np.exp(av * complex(math.log(p.r), p.phi))
        err = abs(got - want)
        worst = max(worst, err)
        samples.append([p.r, p.phi, err])
    report = {
        "status": "ok",
        "alpha_over_pi_of_angle": alpha.to_json(),
        "tower": cert.report(),
        "closed_form_check": {"points": len(pts), "max_abs_error": worst},
    }
    ks = [lv.k for lv in ext.positive.levels]
    plot = svg_plot(
        [
            ("t_k", ks, [lv.t for lv in ext.positive.levels]),
            ("s_k", ks, [lv.s for lv in ext.positive.levels]),
        ],
        title="sector-ball ladder",
        xlabel="level k",
        ylabel="radius",
        logy=True,
    )
    _emit(config, report, samples, plot)
    return EXIT_OK


def _run_expand(config: JobConfig) -> int:
    alpha, germ, ext, cert = _model_setup(config)
    R = config.R if config.R is not None else 3.0 * alpha.value()
    model = ExpansionModel(alpha, R)
    plan = SamplingPlan(rho0=0.5 * cert.quad.c, n_shells=config.shells)
    fit = fit_expansion(lambda p: ext.evaluate(p), model, plan, domain=cert.quad)
    report = {
        "status": "ok",
        "R": R,
        "coefficient_source": fit.method,
        "condition": fit.condition,
        "drift": fit.drift,
        "series": fit.series.to_json(),
    }
    samples = [["exponent", "log_degree", "coeff_re", "coeff_im"]]
    for e in fit.series.support():
        q = fit.series.terms[e]
        for d, c in enumerate(q.coeffs):
            samples.append([e.value(), d, c.real, c.imag])
    mags = sorted(((e.value(), abs(q.leading)) for e, q in fit.series.terms.items()))
    plot = svg_plot(
        [("|coeff|", [m[0] for m in mags], [m[1] for m in mags])],
        title="fitted coefficient magnitudes",
        xlabel="exponent",
        ylabel="|a|",
        logy=True,
    )
    _emit(config, report, samples, plot)
    return EXIT_OK


def _run_verify(config: JobConfig) -> int:
    alpha, germ, ext, cert = _model_setup(config)
    R = config.R if config.R is not None else 2.0 * alpha.value()
    if config.series is not None:
        g = LogPowerSeries.from_json(_load_json(config.series))
    else:
        g = LogPowerSeries.monomial(1.0, alpha)
    plan = SamplingPlan(rho0=0.25 * cert.quad.c, n_shells=config.shells)
    cert_a = verify_asymptotic(lambda p: ext.evaluate(p), g, R, cert.quad, plan=plan, tol=config.tol)
    report = {"status": "ok", "certificate": cert_a.to_json()}
    g_R = g.truncate(R)
    samples = [["abs_z", "arg_z", "remainder_over_absz_R"]]
    for rho, pts in plan.points(cert_a.domain):
        for p in pts:
            rem = abs(complex(ext.evaluate(p)) - g_R.eval_finite(p))
            samples.append([p.r, p.phi, rem / p.r ** float(R)])
    plot = svg_plot(
        [("remainder ratio", [s.rho for s in cert_a.shells], [max(s.ratio, 1e-300) for s in cert_a.shells])],
        title="remainder ratios per shell",
        xlabel="shell radius",
        ylabel="sup |f - g_R| / rho^R",
        logy=True,
    )
    _emit(config, report, samples, plot)
    return EXIT_OK


def _run_dichotomy(config: JobConfig) -> int:
    if config.series is not None:
        g = LogPowerSeries.from_json(_load_json(config.series))
    elif config.alpha is not None:
        alpha, germ, ext, cert = _model_setup(config)
        R = config.R if config.R is not None else 3.0 * alpha.value()
        model = ExpansionModel(alpha, R, max_log_degree=1)
        plan = SamplingPlan(rho0=0.5 * cert.quad.c, n_shells=config.shells)
        g = fit_expansion(lambda p: ext.evaluate(p), model, plan, domain=cert.quad).series
    else:
        raise ValueError("need --series or --alpha")
    if config.angle_class is not None:
        klass = (
            "IRRATIONAL_PI_MULTIPLE" if config.angle_class.lower().startswith("irr") else "RATIONAL_PI_MULTIPLE"
        )
    else:
        if config.alpha is None:
            raise ValueError("need --angle-class when only --series is given")
        klass = rationality_class(parse_exponent(config.alpha))
    verdict = dichotomy_check(g, klass, tol=max(config.tol, 1e-12))
    report = {"status": "ok", "verdict": verdict}
    samples = [["exponent", "log_degree", "abs_coeff"]]
    for e in g.support():
        for d, c in enumerate(g.terms[e].coeffs):
            samples.append([e.value(), d, abs(c)])
    _emit(config, report, samples, svg_plot([], title="dichotomy check"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quasimap", description=__doc__)
    ap.add_argument("command", nargs="?", help="analyze | sc-solve | continue | expand | verify | dichotomy")
    ap.add_argument("--command", dest="command_flag", help="alternative to the positional command")
    ap.add_argument("--input", help="input JSON path")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--K", type=int, default=8, help="tower depth")
    ap.add_argument("--R", type=float, default=None, help="fitting/verification horizon")
    ap.add_argument("--shells", type=int, default=12, help="number of sampling shells")
    ap.add_argument("--tol", type=float, default=1e-6, help="certificate tolerance")
    ap.add_argument("--seed", type=int, default=0, help="sampling seed")
    ap.add_argument("--precision", type=int, default=40, help="chart series order")
    ap.add_argument("--alpha", help="angle/pi, e.g. 1/2, sqrt2, golden")
    ap.add_argument("--series", help="series JSON path (verify/dichotomy)")
    ap.add_argument("--angle-class", dest="angle_class", help="rational | irrational")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command_flag or args.command
    if command is None:
        print("missing command", file=sys.stderr)
        return EXIT_BAD_INPUT
    config = JobConfig(
        command=command,
        input=args.input,
        out=args.out,
        K=args.K,
        R=args.R,
        shells=args.shells,
        tol=args.tol,
        seed=args.seed,
        precision=args.precision,
        alpha=args.alpha,
        series=args.series,
        angle_class=args.angle_class,
    )
    return run(config)


if __name__ == "__main__":
    raise SystemExit(main())
