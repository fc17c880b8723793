"""Command-line surface: experiment orchestration and report emission.

Subcommands: mna, slope-fit, bergman-check, saturate, chern-weil, corpus.
Exit codes: 0 success, 2 validation, 3 numerical guard, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ..algebra import (
    classify_split_bundle,
    filtration_invariants,
    load_corpus,
    mna,
    mna_report,
    saturated_invariants,
    section_space,
    trivial_filtration,
    two_step_filtration,
)
from ..asymptotics import (
    BergmanOneParameterSubgroup,
    coercivity_probe,
    distance_divergence_check,
    fit_slope,
    run_1ps,
    sandwich_constants,
)
from ..errors import ConfigError, GuardError, P1StabError, ValidationError
from ..geometry import (
    HermitianForm,
    QuadratureGrid,
    bergman_kernel_deviation,
    chern_weil_gap,
    conformal_scale,
    fs_metric,
    round_product_metric,
)
from .config import ExperimentConfig, load_config, run_manifest
from .reporting import write_json, write_plot_data, write_trace_csv


def build_filtration(cfg: ExperimentConfig):
    space = section_space(cfg.degrees, cfg.twist)
    if cfg.filtration_type == "trivial":
        return trivial_filtration(space)
    if cfg.filtration_type == "two_step":
        selection = cfg.subspace if cfg.subspace else cfg.sub_indices
        return two_step_filtration(cfg.bundle, cfg.twist, selection)
    raise ConfigError("[filtration] corpus configs are handled per command")


def _outdir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_mna(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    if cfg.filtration_type == "corpus":
        reports = [mna_report(f, seed=cfg.seed) for f in load_corpus(cfg.corpus_file)]
        payload = {"filtrations": reports, "manifest": run_manifest(cfg)}
    else:
        filt = build_filtration(cfg)
        payload = {**mna_report(filt, seed=cfg.seed), "manifest": run_manifest(cfg)}
    path = write_json(out / "mna.json", payload)
    value = payload.get("mna", "per-filtration")
    print(f"mna: {value} (report: {path})")
    return 0


def cmd_slope_fit(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    filt = build_filtration(cfg)
    inv = filtration_invariants(filt, seed=cfg.seed)
    value = mna(filt, inv)
    grid = QuadratureGrid(cfg.n_rho, cfg.n_theta)
    bps = BergmanOneParameterSubgroup(
        filt, HermitianForm.identity(filt.space.dimension)
    )
    result = run_1ps(
        bps,
        cfg.t_grid(),
        grid,
        n_s=cfg.path_nodes,
        fd_step=cfg.fd_step,
        invariants=inv,
        seed=cfg.seed,
    )
    report = fit_slope(result.trace, value)
    lower_c, upper_c = sandwich_constants(result.trace, value)
    diverging, exponent = distance_divergence_check(result.trace)
    payload = {
        **report.to_json(),
        "sandwich": {"lower_c": lower_c, "upper_c": upper_c},
        "distance_diverging": diverging,
        "distance_exponent": exponent,
        "manifest": run_manifest(cfg, report.calibration_sign),
    }
    write_trace_csv(out / "trace.csv", result.trace)
    write_plot_data(out / "plot_data.csv", result.trace, value)
    path = write_json(out / "slope_fit.json", payload)
    print(
        f"fitted slope {report.fitted_slope:.6f} vs mna {value} "
        f"(rel err {report.relative_error:.2%}; report: {path})"
    )
    return 0


def standard_perturbation(amplitude: float = 0.25):
    """Fixed smooth conformal bump used by the Bergman deviation table."""

    def phi(z):
        lam = 1.0 + np.abs(z) ** 2
        return amplitude * (np.real(z) / lam + 0.5 * (1.0 - 2.0 / lam))

    def dphi(z):
        lam = 1.0 + np.abs(z) ** 2
        dre = 0.5 * (1.0 / lam - (z + np.conj(z)) * np.conj(z) / lam**2)
        dinv = np.conj(z) / lam**2
        return amplitude * (dre + dinv)

    return phi, dphi


def cmd_bergman_check(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    bundle = cfg.bundle
    grid = QuadratureGrid(cfg.n_rho, cfg.n_theta)
    base = round_product_metric(grid, bundle.degrees)
    phi, dphi = standard_perturbation()
    perturbed = conformal_scale(base, phi, dphi)
    table_round, table_pert = {}, {}
    for k in cfg.bergman_twists:
        space = section_space(bundle.degrees, int(k))  # raises TwistTooSmall
        table_round[int(k)] = bergman_kernel_deviation(base, space)
        table_pert[int(k)] = bergman_kernel_deviation(perturbed, space)
    scaled = [k * v for k, v in table_pert.items()]
    rate_bounded = bool(max(scaled) <= 3.0 * min(scaled)) if scaled else True
    payload = {
        "round": table_round,
        "perturbed": table_pert,
        "rate_bounded": rate_bounded,
        "manifest": run_manifest(cfg),
    }
    path = write_json(out / "bergman.json", payload)
    print(f"bergman deviations written to {path} (rate_bounded={rate_bounded})")
    return 0


def cmd_saturate(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    if not cfg.subspace:
        raise ConfigError("[filtration] saturate needs subspace_json")
    space = section_space(cfg.degrees, cfg.twist)
    sat = saturated_invariants(space, [list(v) for v in cfg.subspace], seed=cfg.seed)
    payload = {
        "rank": sat.rank,
        "degree": sat.degree,
        "slope": str(sat.slope),
        "twists": list(sat.twists),
        "h0_trace": list(sat.h0_trace),
        "manifest": run_manifest(cfg),
    }
    path = write_json(out / "saturate.json", payload)
    print(f"saturation (rank, degree) = ({sat.rank}, {sat.degree}); report: {path}")
    return 0


def cmd_chern_weil(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    if not cfg.subspace:
        raise ConfigError("[filtration] chern-weil needs subspace_json")
    space = section_space(cfg.degrees, cfg.twist)
    grid = QuadratureGrid(cfg.n_rho, cfg.n_theta)
    field = fs_metric(HermitianForm.identity(space.dimension), space, grid)
    rep = chern_weil_gap(
        field, space, [list(v) for v in cfg.subspace], fd_step=cfg.fd_step, seed=cfg.seed
    )
    payload = {
        "lhs": rep.lhs,
        "degree": rep.degree,
        "rank": rep.rank,
        "gap": rep.gap,
        "ii_norm2": rep.ii_norm2,
        "excluded_nodes": rep.excluded_nodes,
        "manifest": run_manifest(cfg),
    }
    path = write_json(out / "chern_weil.json", payload)
    print(
        f"chern-weil: lhs={rep.lhs:.6f} deg={rep.degree} |II|^2={rep.ii_norm2:.6f}; report: {path}"
    )
    return 0


def cmd_corpus(cfg: ExperimentConfig) -> int:
    out = _outdir(cfg)
    grid = QuadratureGrid(cfg.n_rho, cfg.n_theta)
    report = coercivity_probe(
        cfg.bundle, cfg.twist, grid, t_grid=cfg.t_grid(), n_s=cfg.path_nodes, seed=cfg.seed
    )
    verdict, witness = classify_split_bundle(cfg.bundle)
    payload = {
        **report.to_json(),
        "witness": list(witness.degrees) if witness else None,
        "manifest": run_manifest(cfg),
    }
    path = write_json(out / "coercivity.json", payload)
    if report.vacuous:
        print(f"{verdict}, vacuous corpus; report: {path}")
    else:
        print(f"{verdict}; all signs agree: {report.all_agree}; report: {path}")
    return 0


COMMANDS = {
    "mna": cmd_mna,
    "slope-fit": cmd_slope_fit,
    "bergman-check": cmd_bergman_check,
    "saturate": cmd_saturate,
    "chern-weil": cmd_chern_weil,
    "corpus": cmd_corpus,
}


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError as exc:
        raise ConfigError(f"--grid expects n_rho,n_theta, got {text!r}") from exc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="p1stab",
        description="Stability algebra and metric asymptotics for split bundles on P^1",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="INI experiment config")
        p.add_argument("--out", default=None, help="output directory override")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--t-max", type=float, default=None, dest="t_max")
        p.add_argument("--grid", default=None, help="n_rho,n_theta override")
    args = parser.parse_args(argv)

    try:
        overrides: dict = {"out_dir": args.out, "seed": args.seed, "t_max": args.t_max}
        if args.grid is not None:
            n_rho, n_theta = _parse_grid(args.grid)
            overrides.update({"n_rho": n_rho, "n_theta": n_theta})
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command](cfg)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except GuardError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return 3
    except P1StabError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
