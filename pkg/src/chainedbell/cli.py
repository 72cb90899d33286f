"""Command line interface.

Subcommands: ``analyze`` (counts CSV -> delta report), ``simulate`` (synthetic
counts CSV), ``tomo`` (tomography CSV -> state + fidelity report), ``leggett``
(falsification verdicts), ``lhv`` (brute-force minimum), ``sweep`` (predicted
vs simulated delta over a range of N).  Reports are deterministic for a given
input and seed.  Exit codes: 0 success, 2 validation error, 3 I/O error,
4 non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import datasets
from .alttheories import (
    falsification_report,
    leggett_critical,
    lhv_min_chained,
    min_visibility,
)
from .counting import ChainedEstimate, estimate_chained
from .errors import IncompleteDataError, InvalidInputError
from .io import (
    RunManifest,
    counts_csv_text,
    parse_counts_csv,
    parse_tomo_csv,
    render_csv,
    render_json,
    sha256_file,
    tool_version,
    write_text,
)
from .qsim import DEFAULT_SEED, ExperimentConfig, simulate_dataset, sweep_delta
from .settings import PLANE_NAMES, build_plan, plane_by_name
from .tomography import mle_reconstruct, reconstruction_report

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_VALIDATION = 2
_EXIT_IO = 3
_EXIT_NO_CONVERGENCE = 4

_LEGGETT_CASES = (1, 2, 3, 4)
_TWO_PLANE_CASES = (2, 4)


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=None,
                        help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="report format (default json)")


def _add_figures_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--figures", type=Path, default=None, metavar="DIR",
                        help="also render figures into this directory")


def _add_seed_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"master random seed (default {DEFAULT_SEED})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainedbell",
        description="Chained Bell measurements: how much better could any "
                    "alternative theory predict?",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {tool_version()}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser(
        "analyze", help="estimate I, bias, and delta from a counts CSV")
    analyze.add_argument("counts", type=Path, help="counts CSV file")
    analyze.add_argument("--resamples", type=int, default=1000,
                         help="Monte Carlo resamples for uncertainties "
                              "(0 disables; default 1000)")
    _add_seed_flag(analyze)
    _add_output_flags(analyze)
    _add_figures_flag(analyze)
    analyze.set_defaults(handler=_run_analyze)

    simulate = commands.add_parser(
        "simulate", help="generate a synthetic counts CSV")
    simulate.add_argument("--n", type=int, required=True, dest="n_bases",
                          help="number of measurement bases N")
    simulate.add_argument("--visibility", type=float, default=1.0,
                          help="correlation visibility V in [0, 1] (default 1)")
    simulate.add_argument("--plane", choices=sorted(PLANE_NAMES),
                          default="plus-L", help="measurement plane")
    simulate.add_argument("--duration", type=float, default=40.0,
                          help="acquisition time per setting in seconds")
    simulate.add_argument("--coincidence-rate", type=float, default=550.0,
                          help="total coincidence rate in counts/s")
    simulate.add_argument("--singles-rate", type=float, default=18500.0,
                          help="singles rate on Alice's side in counts/s")
    _add_seed_flag(simulate)
    simulate.add_argument("--out", type=Path, default=None,
                          help="write the counts CSV here instead of stdout")
    simulate.set_defaults(handler=_run_simulate)

    tomo = commands.add_parser(
        "tomo", help="reconstruct the state from a tomography CSV")
    tomo.add_argument("tomo_file", type=Path, help="tomography CSV file")
    _add_output_flags(tomo)
    _add_figures_flag(tomo)
    tomo.set_defaults(handler=_run_tomo)

    leggett = commands.add_parser(
        "leggett",
        help="falsification verdicts for the four hidden-polarization models")
    leggett.add_argument("--case", type=int, choices=_LEGGETT_CASES,
                         default=None, help="evaluate a single model case")
    leggett.add_argument("--n", type=int, default=None, dest="n_bases",
                         help="number of bases for a single verdict")
    leggett.add_argument("--delta1", type=float, default=None,
                         help="measured delta in the primary plane")
    leggett.add_argument("--delta2", type=float, default=None,
                         help="measured delta in the orthogonal plane")
    _add_output_flags(leggett)
    leggett.set_defaults(handler=_run_leggett)

    lhv = commands.add_parser(
        "lhv", help="brute-force minimum of the chained statistic over "
                    "local deterministic strategies")
    lhv.add_argument("--n", type=int, required=True, dest="n_bases",
                     help="number of measurement bases N")
    _add_output_flags(lhv)
    lhv.set_defaults(handler=_run_lhv)

    sweep = commands.add_parser(
        "sweep", help="predicted vs simulated delta over a range of N")
    sweep.add_argument("--n-min", type=int, default=2)
    sweep.add_argument("--n-max", type=int, default=7)
    sweep.add_argument("--visibility", type=float, default=1.0)
    sweep.add_argument("--plane", choices=sorted(PLANE_NAMES),
                       default="plus-L", help="measurement plane")
    sweep.add_argument("--resamples", type=int, default=200,
                       help="Monte Carlo resamples per N (default 200)")
    _add_seed_flag(sweep)
    _add_output_flags(sweep)
    _add_figures_flag(sweep)
    sweep.set_defaults(handler=_run_sweep)

    return parser


def _figure_dir(args: argparse.Namespace) -> Path | None:
    directory: Path | None = getattr(args, "figures", None)
    if directory is not None:
        directory.mkdir(parents=True, exist_ok=True)
    return directory


def _emit(args: argparse.Namespace, report: dict,
          csv_header: Sequence[str], csv_rows: Sequence[Sequence]) -> int:
    if args.format == "csv":
        write_text(args.out, render_csv(csv_header, csv_rows))
    else:
        write_text(args.out, render_json(report))
    return _EXIT_OK


def _estimate_payload(estimate: ChainedEstimate) -> dict:
    payload = {
        "n_bases": estimate.n_bases,
        "i_n": estimate.i_n,
        "nu_n": estimate.nu_n,
        "delta_n": estimate.delta_n,
        "groups": [
            {"a": g.a, "b": g.b, "probability": g.probability, "bias": g.bias}
            for g in estimate.per_group
        ],
    }
    if estimate.sigma_delta is not None:
        payload["sigma_i"] = estimate.sigma_i
        payload["sigma_nu"] = estimate.sigma_nu
        payload["sigma_delta"] = estimate.sigma_delta
    return payload


def _run_analyze(args: argparse.Namespace) -> int:
    plan, groups = parse_counts_csv(args.counts)
    estimate = estimate_chained(plan, groups, resamples=args.resamples,
                                master_seed=args.seed)
    manifest = RunManifest(
        n_bases=plan.n_bases, seed=args.seed,
        inputs={str(args.counts): sha256_file(args.counts)},
    )
    report = {"manifest": manifest.as_dict(), "chained": _estimate_payload(estimate)}
    directory = _figure_dir(args)
    if directory is not None:
        from .plots import plot_group_probabilities

        figure = plot_group_probabilities(estimate, directory / "group_probabilities.png")
        report["figures"] = [str(figure)]

    rows: list[list] = [
        ["probability", g.a, g.b, g.probability, ""] for g in estimate.per_group
    ]
    rows += [["bias", g.a, g.b, g.bias, ""] for g in estimate.per_group]
    rows += [
        ["i_n", "", "", estimate.i_n,
         "" if estimate.sigma_i is None else estimate.sigma_i],
        ["nu_n", "", "", estimate.nu_n,
         "" if estimate.sigma_nu is None else estimate.sigma_nu],
        ["delta_n", "", "", estimate.delta_n,
         "" if estimate.sigma_delta is None else estimate.sigma_delta],
    ]
    return _emit(args, report, ("record", "group_a", "group_b", "value", "sigma"), rows)


def _run_simulate(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        n_bases=args.n_bases,
        plane=plane_by_name(args.plane),
        visibility=args.visibility,
        singles_rate_cps=args.singles_rate,
        coincidence_rate_cps=args.coincidence_rate,
        singles_duration_s=args.duration,
        coincidence_duration_s=args.duration,
        seed=args.seed,
    )
    groups = simulate_dataset(config)
    plan = build_plan(config.n_bases, config.plane)
    write_text(args.out, counts_csv_text(plan, groups))
    return _EXIT_OK


def _run_tomo(args: argparse.Namespace) -> int:
    data = parse_tomo_csv(args.tomo_file)
    result = mle_reconstruct(data)
    manifest = RunManifest(
        inputs={str(args.tomo_file): sha256_file(args.tomo_file)},
    )
    payload = reconstruction_report(result)
    payload["rho_re"] = [[float(v) for v in row] for row in result.rho.entries.real]
    payload["rho_im"] = [[float(v) for v in row] for row in result.rho.entries.imag]
    report = {"manifest": manifest.as_dict(), "reconstruction": payload}
    directory = _figure_dir(args)
    if directory is not None:
        from .plots import plot_density_matrix

        figure = plot_density_matrix(result.rho, directory / "density_matrix.png")
        report["figures"] = [str(figure)]

    rows: list[list] = [
        [key, payload[key]]
        for key in ("fidelity_phi_plus", "purity", "scale_cps", "log_likelihood",
                    "iterations", "converged", "complete_data")
    ]
    for part, matrix in (("re", payload["rho_re"]), ("im", payload["rho_im"])):
        for i, row in enumerate(matrix):
            for j, value in enumerate(row):
                rows.append([f"rho_{part}_{i}{j}", value])
    status = _emit(args, report, ("name", "value"), rows)
    if not result.converged:
        print("error: reconstruction did not converge", file=sys.stderr)
        return _EXIT_NO_CONVERGENCE
    return status


def _leggett_table_rows() -> list[dict]:
    """Verdict rows for the bundled experiment's measured deltas."""
    rows = []
    for n, summary in sorted(datasets.REFERENCE_CHAINED.items()):
        delta2 = datasets.REFERENCE_DELTA_ORTHOGONAL.get(n)
        row: dict = {
            "n_bases": n,
            "delta_plane1": summary.delta_n,
            "delta_plane2": None if delta2 is None else delta2[0],
        }
        for case in _LEGGETT_CASES:
            critical = leggett_critical(case, n)
            if case in _TWO_PLANE_CASES and delta2 is None:
                row[f"case{case}"] = {
                    "critical": critical, "ruled_out": False,
                    "margin": None, "complete": False,
                }
                continue
            verdict = falsification_report(
                case, n, summary.delta_n,
                None if delta2 is None else delta2[0],
            )
            row[f"case{case}"] = {
                "critical": verdict.critical, "ruled_out": verdict.ruled_out,
                "margin": verdict.margin, "complete": True,
            }
        rows.append(row)
    return rows


def _run_leggett(args: argparse.Namespace) -> int:
    single_query = args.case is not None or args.delta1 is not None
    if single_query:
        if args.case is None or args.n_bases is None or args.delta1 is None:
            raise InvalidInputError(
                "a single verdict needs --case, --n, and --delta1 "
                "(and --delta2 for cases 2 and 4)"
            )
        verdict = falsification_report(args.case, args.n_bases,
                                       args.delta1, args.delta2)
        report = {
            "verdict": {
                "case": verdict.case,
                "n_bases": verdict.n_bases,
                "critical": verdict.critical,
                "tabulated_critical": verdict.tabulated_critical,
                "deltas_used": list(verdict.deltas_used),
                "ruled_out": verdict.ruled_out,
                "margin": verdict.margin,
            }
        }
        rows = [[verdict.case, verdict.n_bases, verdict.critical,
                 verdict.deltas_used[0],
                 verdict.deltas_used[1] if len(verdict.deltas_used) > 1 else "",
                 verdict.ruled_out, verdict.margin]]
        return _emit(
            args, report,
            ("case", "n", "critical", "delta1", "delta2", "ruled_out", "margin"),
            rows,
        )

    table = _leggett_table_rows()
    visibilities = {}
    for case in _LEGGETT_CASES:
        v_min, at_n = min_visibility(case)
        visibilities[f"case{case}"] = {"v_min": v_min, "achieved_at_n": at_n}
    report = {"verdicts": table, "min_visibility": visibilities}
    rows = []
    for row in table:
        rows.append(
            [row["n_bases"]]
            + [row[f"case{c}"]["critical"] for c in _LEGGETT_CASES]
            + [row["delta_plane1"],
               "" if row["delta_plane2"] is None else row["delta_plane2"]]
            + [row[f"case{c}"]["ruled_out"] for c in _LEGGETT_CASES]
        )
    header = (
        "n", "crit_case1", "crit_case2", "crit_case3", "crit_case4",
        "delta_plane1", "delta_plane2",
        "ruled_out_case1", "ruled_out_case2", "ruled_out_case3", "ruled_out_case4",
    )
    return _emit(args, report, header, rows)


def _run_lhv(args: argparse.Namespace) -> int:
    minimum, strategy = lhv_min_chained(args.n_bases)
    report = {
        "lhv": {
            "n_bases": args.n_bases,
            "minimum": minimum,
            "strategy": {
                "alice": {str(k): v for k, v in sorted(strategy.f.items())},
                "bob": {str(k): v for k, v in sorted(strategy.g.items())},
            },
        }
    }
    rows = [[args.n_bases, minimum]]
    return _emit(args, report, ("n", "minimum"), rows)


def _run_sweep(args: argparse.Namespace) -> int:
    if args.n_min > args.n_max:
        raise InvalidInputError(
            f"--n-min {args.n_min} exceeds --n-max {args.n_max}"
        )
    template = ExperimentConfig(
        n_bases=max(args.n_min, 2),
        plane=plane_by_name(args.plane),
        visibility=args.visibility,
        seed=args.seed,
    )
    results = sweep_delta(template, range(args.n_min, args.n_max + 1),
                          args.visibility, resamples=args.resamples)
    report = {
        "sweep": {
            "visibility": args.visibility,
            "seed": args.seed,
            "rows": [
                {"n_bases": r.n_bases, "predicted": r.predicted,
                 "simulated": r.simulated, "sigma": r.sigma}
                for r in results
            ],
        }
    }
    directory = _figure_dir(args)
    if directory is not None:
        from .plots import plot_delta_sweep

        figure = plot_delta_sweep(results, directory / "delta_sweep.png",
                                  visibility=args.visibility)
        report["figures"] = [str(figure)]
    rows = [[r.n_bases, r.predicted, r.simulated, r.sigma] for r in results]
    return _emit(args, report, ("n", "predicted", "simulated", "sigma"), rows)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except IncompleteDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
