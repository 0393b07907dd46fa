"""``dualitylab`` command-line interface.

Exit codes: 0 success, 1 acceptance failure (``repro``), 2 usage or
validation error, 3 numerical non-convergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__, embedding, expfam, mellin_zeta, repro, spectral
from .config import COMMANDS, FORMATS, SUITES, RunConfig, build_config, read_config_file
from .emit import ReportEnvelope, emit, table
from .errors import (
    BadBracket,
    DomainError,
    InsufficientEnvelope,
    NonConvergence,
    TooFewPoints,
    TruncationCapError,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4
NUMERIC_ERRORS = (NonConvergence, InsufficientEnvelope, TruncationCapError)


def _g(x) -> str:
    return f"{x:g}"


class CommandResult:
    def __init__(self, stem: str, results: dict, summary: str, diagnostics=(), exit_code: int = EXIT_OK):
        self.stem = stem
        self.results = results
        self.summary = summary
        self.diagnostics = list(diagnostics)
        self.exit_code = exit_code


def _branch(cfg: RunConfig) -> embedding.Branch:
    return embedding.Branch.parse(cfg.get("branch", "below"))


# ------------------------------------------------------------- commands


def cmd_metric(cfg: RunConfig) -> CommandResult:
    n, theta, theta0 = cfg.n, cfg.get("theta"), cfg.get("theta0")
    p = expfam.family_point(n, theta)
    res = {
        "point": p,
        "cubic_form": expfam.cubic_form(n, theta),
        "fenchel_conjugate": expfam.fenchel_conjugate(n, p.eta),
        "legendre_round_trip": expfam.legendre_inverse(n, p.eta),
        "normalization_oracle": expfam.normalization_oracle(p),
        "moment_oracle": expfam.moment_oracle(p),
        "divergence_from_theta0": {
            "theta0": theta0,
            "closed_form": expfam.divergence(n, theta, theta0),
            "bregman": expfam.divergence_bregman(n, theta, theta0),
            "fenchel": expfam.divergence_fenchel(n, theta, theta0),
            "kl_oracle": expfam.kl_oracle(n, theta, theta0),
        },
    }
    res["tables"] = {
        f"metric_n{_g(n)}_theta{_g(theta)}": table(
            ["n", "theta", "Z", "psi", "eta", "g", "cubic_form"],
            [[n, theta, p.Z, p.psi, p.eta, p.g, res["cubic_form"]]],
        )
    }
    return CommandResult(
        f"metric_n{_g(n)}_theta{_g(theta)}", res, f"eta={p.eta!r} g={p.g!r} psi={p.psi!r}"
    )


def cmd_embed(cfg: RunConfig) -> CommandResult:
    n, theta0, A, tol = cfg.n, cfg.get("theta0"), cfg.get("a"), cfg.get("tol")
    branch = _branch(cfg)
    theta = embedding.embed_integer(n, theta0, A, branch, tol)
    energy = float(A) ** n
    d = expfam.divergence(n, theta, theta0)
    res = {
        "n": n,
        "theta0": theta0,
        "A": A,
        "branch": branch,
        "theta": theta,
        "energy": energy,
        "divergence": d,
        "residual": abs(d - energy),
    }
    res["tables"] = {
        f"embed_n{_g(n)}_A{A}": table(["n", "theta0", "A", "branch", "theta", "energy"], [[n, theta0, A, branch.value, theta, energy]])
    }
    return CommandResult(f"embed_n{_g(n)}_A{A}", res, f"theta={theta!r} D={d!r}")


def cmd_lattice(cfg: RunConfig) -> CommandResult:
    n, theta0, K, tol = cfg.n, cfg.get("theta0"), cfg.get("k"), cfg.get("tol")
    emb = embedding.build_lattice(n, theta0, K, _branch(cfg), tol)
    gaps = embedding.gap_table(emb)
    res = {
        "n": n,
        "theta0": theta0,
        "branch": emb.branch,
        "theta1": emb.theta1,
        "points": emb.points,
        "gaps": gaps.entries,
        "tables": {"gaps": table(["k", "theta_k", "gap"], gaps.entries)},
    }
    spread = ", ".join(f"{g:.6g}" for _, _, g in gaps.entries)
    return CommandResult(f"lattice_n{_g(n)}_K{K}", res, f"theta1={emb.theta1!r} gaps=[{spread}]")


def cmd_closure(cfg: RunConfig) -> CommandResult:
    rep = embedding.pythagoras_closure(
        cfg.n, cfg.get("theta0"), cfg.get("a"), cfg.get("b"), cfg.get("c"), cfg.get("tol"), branch=_branch(cfg)
    )
    stem = f"closure_n{_g(cfg.n)}_{rep.A}_{rep.B}_{rep.C}"
    res = {"report": rep}
    res["tables"] = {
        stem: table(
            ["n", "A", "B", "C", "energy_sum", "target_energy", "defect", "theta_R_energy", "theta_C", "closed"],
            [[rep.n, rep.A, rep.B, rep.C, rep.energy_sum, rep.target_energy, rep.defect, rep.theta_R_energy, rep.theta_C, rep.closed]],
        )
    }
    summary = f"defect={_g(rep.defect)} closed={'true' if rep.closed else 'false'}"
    return CommandResult(stem, res, summary)


def cmd_theta(cfg: RunConfig) -> CommandResult:
    tcfg = spectral.ThetaConfig(cfg.n, cfg.get("tau"), cfg.get("tol"))
    value, K = spectral.theta_series(tcfg)
    dual, M = spectral.dual_theta_sum(tcfg)
    stem = f"theta_n{_g(cfg.n)}_tau{_g(tcfg.tau)}"
    res = {"n": cfg.n, "tau": tcfg.tau, "theta": value, "terms_used": K, "dual_sum": dual, "dual_terms": M}
    res["tables"] = {stem: table(["n", "tau", "theta", "terms_used", "dual_sum", "dual_terms"], [[cfg.n, tcfg.tau, value, K, dual, M]])}
    return CommandResult(stem, res, f"theta={value!r} terms={K}")


def cmd_poisson(cfg: RunConfig) -> CommandResult:
    tcfg = spectral.ThetaConfig(cfg.n, cfg.get("tau"), cfg.get("tol"))
    rep = spectral.poisson_residual(tcfg)
    stem = f"poisson_n{_g(cfg.n)}_tau{_g(tcfg.tau)}"
    diags = []
    if rep.residual > rep.error_budget:
        diags.append(f"residual {rep.residual:.3g} exceeds error budget {rep.error_budget:.3g}")
    if rep.analytic_fhat:
        diags.append("closed-form Gaussian transform used for the dual sum")
    # residual-vs-tau context for the figure, always including the requested point
    grid = sorted({0.25, 0.5, 1.0, 2.0, 4.0, tcfg.tau})
    swept = [
        rep.residual if t == tcfg.tau else spectral.poisson_residual(spectral.ThetaConfig(cfg.n, t, tcfg.tail_tol)).residual
        for t in grid
    ]
    res = {
        "report": rep,
        "sweep": {"x": grid, "y": swept, "xlabel": "tau", "ylabel": "Poisson residual", "title": f"Poisson summation, n = {cfg.n:g}"},
    }
    res["tables"] = {
        stem: table(
            ["n", "tau", "primal_sum", "dual_sum", "residual", "primal_terms", "dual_terms", "quad_error"],
            [[rep.n, rep.tau, rep.primal_sum, rep.dual_sum, rep.residual, rep.primal_terms, rep.dual_terms, rep.quad_error]],
        )
    }
    return CommandResult(stem, res, f"residual={rep.residual:.3e} budget={rep.error_budget:.3e}", diags)


def cmd_jacobi(cfg: RunConfig) -> CommandResult:
    tol = cfg.get("tol")
    if cfg.get("tau") is not None:
        grid = [cfg.get("tau")]
        stem = f"jacobi_tau{_g(grid[0])}"
    else:
        grid = [float(t) for t in np.geomspace(0.1, 10.0, 20)]
        stem = "jacobi"
    rows = [[t, spectral.jacobi_residual(t, tol)] for t in grid]
    worst = max(r for _, r in rows)
    res = {
        "rows": rows,
        "max_residual": worst,
        "sweep": {"x": grid, "y": [r for _, r in rows], "xlabel": "tau", "ylabel": "Jacobi residual", "title": "Jacobi identity, n = 2"},
        "tables": {stem: table(["tau", "residual"], rows)},
    }
    return CommandResult(stem, res, f"max_residual={worst:.3e} points={len(rows)}")


def cmd_profile(cfg: RunConfig) -> CommandResult:
    n = cfg.n
    xi_max = cfg.get("xi_max") or spectral.default_xi_max(n)
    prof = spectral.spectral_profile(n, xi_max, cfg.get("samples"))
    stem = f"profile_n{_g(n)}"
    diags = []
    if n > 1.0:
        target = spectral.conjugate_exponent(n)
        if abs(prof.q_hat - target) > 0.1:
            diags.append(f"q_hat={prof.q_hat:.4g} is more than 0.1 from n/(n-1)={target:.4g}")
    res = {
        "profile": prof,
        "xi_max": xi_max,
        "tables": {
            f"{stem}_samples": table(["xi", "fhat"], prof.xi_samples),
            f"{stem}_envelope": table(["xi", "envelope"], prof.envelope_points),
        },
    }
    # the figure reads these top-level keys
    res.update({"n": n, "q_hat": prof.q_hat, "gamma_hat": prof.gamma_hat, "envelope_points": prof.envelope_points})
    return CommandResult(stem, res, f"q_hat={prof.q_hat!r} gamma_hat={prof.gamma_hat!r}", diags)


def cmd_hy(cfg: RunConfig) -> CommandResult:
    n = cfg.n
    ps = [cfg.get("p")] if cfg.get("p") is not None else [1.25, 1.5, 1.75, 2.0]
    stem = f"hy_n{_g(n)}" + (f"_p{_g(ps[0])}" if cfg.get("p") is not None else "")
    rows = []
    for p in ps:
        ratio, bound = spectral.hy_ratio(n, p)
        rows.append([n, p, ratio, bound, bound - ratio])
    res = {
        "rows": rows,
        "sweep": {"x": ps, "y": [r[4] for r in rows], "xlabel": "p", "ylabel": "|bound - ratio|", "title": f"Beckner gap, n = {n:g}"},
        "tables": {stem: table(["n", "p", "ratio", "beckner_bound", "gap"], rows)},
    }
    summary = " ".join(f"p={_g(r[1])}:ratio={r[2]:.8f},bound={r[3]:.8f}" for r in rows)
    return CommandResult(stem, res, summary)


def cmd_mellin(cfg: RunConfig) -> CommandResult:
    n = cfg.n
    if cfg.get("s") is not None:
        grid = [cfg.get("s")]
        stem = f"mellin_n{_g(n)}_s{_g(grid[0])}"
    else:
        grid = [s for s in (0.75, 1.0, 1.5, 2.0) if s * n > 1.0]
        stem = f"mellin_n{_g(n)}"
    reports = [mellin_zeta.mellin_numeric(n, s, tail_tol=cfg.get("tol")) for s in grid]
    scan = mellin_zeta.gamma_factor_scan(n, grid)
    rows = [[r.n, r.s, r.numeric, r.closed_form, r.residual, r.split_point] for r in reports]
    res = {
        "reports": reports,
        "gamma_factor_scan": scan,
        "sweep": {"x": grid, "y": [r.residual for r in reports], "xlabel": "s", "ylabel": "Mellin residual", "title": f"Mellin transform vs 2 Gamma(s) zeta(ns), n = {n:g}"},
        "tables": {
            stem: table(["n", "s", "numeric", "closed_form", "residual", "split_point"], rows),
            f"{stem}_gamma_factors": table(
                ["s", "ratio", "duplication_residual"], [[g.s, g.ratio, g.duplication_residual] for g in scan]
            ),
        },
    }
    worst = max(r.residual for r in reports)
    return CommandResult(stem, res, f"max_residual={worst:.3e} points={len(reports)}")


def cmd_repro(cfg: RunConfig) -> CommandResult:
    suite = cfg.get("suite", "all")
    results = repro.run_suite(suite, cfg.seed)
    text = repro.format_table(results)
    print(text)
    rows = []
    for r in results:
        for c in r.checks:
            rows.append([r.number, c.label, c.measured, str(c.expected), c.tolerance, c.passed])
        if r.error:
            rows.append([r.number, "error", math.nan, "", "", False])
    ok = all(r.passed for r in results)
    res = {
        "suite": suite,
        "passed": ok,
        "criteria": [
            {
                "number": r.number,
                "title": r.title,
                "passed": r.passed,
                "runtime": r.runtime,
                "budget": r.budget,
                "error": r.error,
                "checks": r.checks,
            }
            for r in results
        ],
        "tables": {f"repro_{suite}": table(["criterion", "check", "measured", "expected", "tolerance", "passed"], rows)},
    }
    failed = [str(r.number) for r in results if not r.passed]
    diags = [f"criterion {k} failed" for k in failed]
    summary = f"suite={suite} passed={sum(r.passed for r in results)}/{len(results)}"
    return CommandResult(f"repro_{suite}", res, summary, diags, EXIT_OK if ok else EXIT_FAIL)


HANDLERS = {
    "metric": cmd_metric,
    "embed": cmd_embed,
    "lattice": cmd_lattice,
    "closure": cmd_closure,
    "theta": cmd_theta,
    "poisson": cmd_poisson,
    "jacobi": cmd_jacobi,
    "profile": cmd_profile,
    "hy": cmd_hy,
    "mellin": cmd_mellin,
    "repro": cmd_repro,
}


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualitylab",
        description="Information-geometric lattices, theta-function duality and Fourier decay diagnostics.",
    )
    parser.add_argument("--version", action="version", version=f"dualitylab {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--n", type=float, help="moment exponent n >= 1 (default 2)")
    parser.add_argument("--theta", type=float, help="natural parameter for 'metric' (default -1)")
    parser.add_argument("--theta0", type=float, help="reference point theta0 < 0 (default -1)")
    parser.add_argument("--tau", type=float, help="theta-series scale tau > 0")
    parser.add_argument("--s", type=float, help="Mellin variable, s > 1/n")
    parser.add_argument("--a", type=int, help="integer A (embed, closure)")
    parser.add_argument("--b", type=int, help="integer B (closure)")
    parser.add_argument("--c", type=int, help="integer C (closure)")
    parser.add_argument("--k", type=int, help="lattice size K (lattice)")
    parser.add_argument("--xi-max", dest="xi_max", type=float, help="upper end of the profile grid")
    parser.add_argument("--samples", type=int, help="profile grid size (>= 16)")
    parser.add_argument("--p", type=float, help="Lebesgue exponent in (1, 2]")
    parser.add_argument("--branch", choices=("below", "above"), help="level-set branch relative to theta0")
    parser.add_argument("--tol", type=float, help="solver / closure / series tolerance")
    parser.add_argument("--suite", choices=SUITES, help="acceptance suite for 'repro'")
    parser.add_argument("--out", help="output directory (default $DUALITYLAB_OUT or .)")
    parser.add_argument("--format", help=f"comma-separated subset of {','.join(FORMATS)} (default json)")
    parser.add_argument("--config", help="key = value file; command-line flags take precedence")
    parser.add_argument("--seed", type=int, help="seed for randomized sweeps (default 0)")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    values = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        file_values = read_config_file(args.config) if args.config else {}
    except OSError as exc:
        print(f"dualitylab: error: --config: cannot read {args.config}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = build_config(args.command, values, file_values)
    except DomainError as exc:
        print(f"dualitylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        outcome = HANDLERS[cfg.command](cfg)
    except (DomainError, TooFewPoints) as exc:
        print(f"dualitylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NUMERIC_ERRORS + (BadBracket,)) as exc:
        note = f"{type(exc).__name__}: {exc}"
        report = ReportEnvelope.create(cfg.to_dict(), {}, [note])
        try:
            emit(report, ("json",) if "json" in cfg.formats else cfg.formats, cfg.output_dir, f"{cfg.command}_failed")
        except OSError as io_exc:
            print(f"dualitylab: error: cannot write diagnostics: {io_exc}", file=sys.stderr)
            return EXIT_IO
        print(f"dualitylab: numerical failure: {note}", file=sys.stderr)
        return EXIT_NUMERIC

    report = ReportEnvelope.create(cfg.to_dict(), outcome.results, outcome.diagnostics)
    try:
        paths = emit(report, cfg.formats, cfg.output_dir, outcome.stem)
    except OSError as exc:
        print(f"dualitylab: error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    for note in outcome.diagnostics:
        print(f"dualitylab: note: {note}", file=sys.stderr)
    print(f"{cfg.command}: {outcome.summary} -> {', '.join(paths) if paths else '(no files)'}")
    return outcome.exit_code


def main(argv=None) -> None:
    sys.exit(run(argv))
