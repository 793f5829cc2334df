"""Command-line front end.

Subcommands

* ``solve``: full analysis of one config -- per-strand currents, sharing
  functions, losses, detection and the property verdict.  Honors the
  config's ``[transposition]`` schedule when present.
* ``sweep``: repeated solves of the same harmonic content over a list of
  fundamental frequencies; 0 Hz means the resistive (zero-frequency)
  limit.
* ``transpose-compare``: the untransposed bundle against every named
  ``[[schedules]]`` entry.
* ``validate``: parse the config and validate the bundle, writing nothing.

Exit codes: 0 when every property check holds, 1 on input errors (bad
arguments, unreadable or inconsistent configs, invalid networks, failed
solves), 2 when a property check is violated or the time-domain oracle
disagrees with the phasor solve -- either of which signals an internal
inconsistency worth investigating, not bad input.

All output files are written with 17 significant digits and LF line
endings, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .config import SimulationConfig, load_config
from .errors import ConfigParseError, NetworkInvalidError, SolveFailedError, StrandSimError
from .losses import LossReport, cauchy_schwarz_witness, compute_losses
from .network import apply_transposition, validate_network
from .solver import (
    SolvedBundle,
    sharing_functions,
    solve_drive,
    transient_oracle,
)
from .waveform import Waveform, rms_parseval, sample

# Maximum per-strand relative RMS disagreement tolerated between the phasor
# solve and the time-domain oracle before the run is flagged as inconsistent.
_ORACLE_RTOL = 1e-3


def _fmt(value: float) -> str:
    """17 significant digits: enough to round-trip an IEEE double exactly."""
    return format(float(value), ".17g")


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot emit {value!r} as TOML")


def _toml_section(handle, name: str, items: list[tuple[str, object]]) -> None:
    handle.write(f"[{name}]\n")
    for key, value in items:
        handle.write(f"{key} = {_toml_value(value)}\n")
    handle.write("\n")


def _resolve_out_dir(config: SimulationConfig, out_dir: str | None) -> Path:
    if out_dir is not None:
        target = Path(out_dir)
    elif config.output_dir is not None:
        target = config.output_dir
    else:
        target = Path("out")
    target.mkdir(parents=True, exist_ok=True)
    return target


def _apply_overrides(
    config: SimulationConfig, grid_size: int | None, oracle: bool
) -> SimulationConfig:
    changes = {}
    if grid_size is not None:
        changes["grid_size"] = grid_size
    if oracle:
        changes["oracle"] = True
    return dataclasses.replace(config, **changes) if changes else config


def _solve_config_network(config: SimulationConfig) -> tuple[SolvedBundle, bool]:
    """Solve the config's bundle, applying its transposition if present."""
    network = config.network
    transposed = False
    if config.transposition is not None:
        network = apply_transposition(
            network, config.layout, config.transposition, config.mutual_offset
        )
        transposed = True
    try:
        return solve_drive(network, config.drive), transposed
    except (NetworkInvalidError, ConfigParseError):
        raise
    except StrandSimError as exc:
        raise SolveFailedError(f"{config.source}: {exc}") from exc


def _write_currents_csv(path: Path, solution: SolvedBundle, grid_size: int) -> None:
    drive = solution.drive
    times = np.arange(grid_size) * (drive.period / grid_size)
    columns = [times, sample(drive, times)]
    header = ["time_s", "total_A"]
    for strand, wave in zip(solution.network.strands, solution.per_strand):
        header.append(f"{strand.label}_A")
        columns.append(sample(wave, times))
    with open(path, "w", newline="") as handle:
        handle.write(",".join(header) + "\n")
        for row in zip(*columns):
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def _write_sharing_csv(path: Path, solution: SolvedBundle, shares) -> None:
    header = ["time_s", "masked"] + [
        f"{strand.label}_share" for strand in solution.network.strands
    ]
    with open(path, "w", newline="") as handle:
        handle.write(",".join(header) + "\n")
        for k, time in enumerate(shares.times):
            cells = [_fmt(time), "1" if shares.masked[k] else "0"]
            if shares.masked[k]:
                cells.extend([""] * shares.n_strands)
            else:
                cells.extend(_fmt(shares.shares[i, k]) for i in range(shares.n_strands))
            handle.write(",".join(cells) + "\n")


def _write_report(
    path: Path,
    config: SimulationConfig,
    solution: SolvedBundle,
    report: LossReport,
    transposed: bool,
    oracle_error: float | None,
    seed: int | None,
) -> None:
    network = solution.network
    drive = solution.drive
    with open(path, "w", newline="") as handle:
        run_items: list[tuple[str, object]] = [
            ("config", config.source.name),
            ("grid_size", config.grid_size),
            ("zero_threshold", config.zero_threshold),
            ("abs_tol_a", config.abs_tol),
            ("rel_tol", config.rel_tol),
            ("equality_tol", config.equality_tol),
            ("transposed", transposed),
        ]
        if seed is not None:
            run_items.append(("seed", seed))
        _toml_section(handle, "run", run_items)
        # The [network] and [drive] sections echo the effective bundle that
        # was solved, in the config schema, so a report can be re-ingested.
        _toml_section(
            handle,
            "network",
            [
                ("labels", [s.label for s in network.strands]),
                ("resistances_ohm", [s.r_dc for s in network.strands]),
                ("inductance_h", [float(v) for v in network.inductance.ravel()]),
            ],
        )
        _toml_section(
            handle,
            "drive",
            [
                ("period_s", drive.period),
                ("dc_a", drive.dc),
                ("harmonics", [[h.order, h.amplitude, h.phase] for h in drive.harmonics]),
            ],
        )
        loss_items: list[tuple[str, object]] = [
            ("strand_rms_a", list(report.strand_rms)),
            ("baseline_rms_a", list(report.baseline_rms)),
            ("strand_losses_w", list(report.strand_losses)),
            ("baseline_strand_losses_w", list(report.baseline_strand_losses)),
            ("total_losses_w", report.total_losses),
            ("total_baseline_losses_w", report.total_baseline_losses),
            ("loss_ratio_defined", report.loss_ratio is not None),
        ]
        if report.loss_ratio is not None:
            loss_items.append(("loss_ratio", report.loss_ratio))
        _toml_section(handle, "losses", loss_items)
        detection = report.detection
        _toml_section(
            handle,
            "detection",
            [
                ("occurred", detection.occurred),
                ("max_deviation_a", detection.max_deviation),
                ("strand", network.strands[detection.strand_index].label),
                ("time_s", detection.time),
                ("threshold_a", detection.threshold),
                ("max_phasor_deviation_a", detection.max_phasor_deviation),
            ],
        )
        verdict = report.property_verdict
        property_items: list[tuple[str, object]] = [
            ("holds", verdict.holds),
            ("margin_w", verdict.margin),
        ]
        if verdict.relative_margin is not None:
            property_items.append(("relative_margin", verdict.relative_margin))
        _toml_section(handle, "property", property_items)
        if oracle_error is not None:
            _toml_section(
                handle,
                "oracle",
                [
                    ("max_relative_rms_error", oracle_error),
                    ("tolerance", _ORACLE_RTOL),
                    ("agrees", oracle_error <= _ORACLE_RTOL),
                ],
            )


def _oracle_check(solution: SolvedBundle, config: SimulationConfig) -> float:
    """Max per-strand relative RMS gap between phasor and transient solves."""
    transient = transient_oracle(
        solution.network,
        solution.drive,
        config.oracle_steps_per_period,
        config.oracle_settle_periods,
    )
    phasor_rms = np.array([rms_parseval(w) for w in solution.per_strand])
    scale = np.maximum(phasor_rms, 1e-30)
    return float(np.max(np.abs(transient.strand_rms() - phasor_rms) / scale))


def run_solve(
    config: SimulationConfig,
    out_dir: str | None = None,
    grid_size: int | None = None,
    oracle: bool = False,
    seed: int | None = None,
) -> int:
    """Solve one config, write report and CSVs, return the exit code."""
    config = _apply_overrides(config, grid_size, oracle)
    target = _resolve_out_dir(config, out_dir)
    solution, transposed = _solve_config_network(config)
    report = compute_losses(
        solution,
        abs_tol=config.abs_tol,
        rel_tol=config.rel_tol,
        equality_tol=config.equality_tol,
        grid_size=config.grid_size,
    )
    shares = sharing_functions(solution, config.grid_size, config.zero_threshold)
    witness = cauchy_schwarz_witness(shares)
    oracle_error = _oracle_check(solution, config) if config.oracle else None

    _write_currents_csv(target / "currents.csv", solution, config.grid_size)
    _write_sharing_csv(target / "sharing.csv", solution, shares)
    _write_report(
        target / "report.toml", config, solution, report, transposed, oracle_error, seed
    )

    detection = report.detection
    state = "detected" if detection.occurred else "not detected"
    print(
        f"solved {config.source.name}: {solution.network.n_strands} strands, "
        f"{len(config.drive.harmonics)} harmonics"
        + (" (transposed)" if transposed else "")
    )
    print(
        f"circulating currents: {state} "
        f"(max deviation {detection.max_deviation:.6e} A, "
        f"threshold {detection.threshold:.6e} A)"
    )
    ratio = f"{report.loss_ratio:.9f}" if report.loss_ratio is not None else "undefined"
    print(
        f"losses: total {report.total_losses:.9e} W, even-split baseline "
        f"{report.total_baseline_losses:.9e} W, ratio {ratio}"
    )
    print(
        f"sharing identities: sum-to-one error {witness.max_identity_error:.3e}, "
        f"concentration margin {witness.min_concentration_margin:.3e}"
    )
    if oracle_error is not None:
        status = "agrees" if oracle_error <= _ORACLE_RTOL else "DISAGREES"
        print(f"oracle: {status} (max relative strand RMS error {oracle_error:.3e})")
    verdict = report.property_verdict
    print(
        f"fundamental property: {'holds' if verdict.holds else 'VIOLATED'} "
        f"(margin {verdict.margin:.6e} W)"
    )
    print(f"wrote {target / 'report.toml'}, {target / 'currents.csv'}, {target / 'sharing.csv'}")
    if not verdict.holds or (oracle_error is not None and oracle_error > _ORACLE_RTOL):
        return 2
    return 0


def _zero_frequency_row(config: SimulationConfig) -> tuple[float, float, float, float]:
    """Sweep row for the resistive limit: the divider splits the waveform."""
    resistances = config.network.resistances()
    conductances = 1.0 / resistances
    shares = conductances / conductances.sum()
    total_rms = rms_parseval(config.drive)
    losses = float(np.sum(resistances * (shares * total_rms) ** 2))
    baseline = float(np.sum(resistances) * (total_rms / len(shares)) ** 2)
    concentration = float(np.sum(shares**2))
    return losses, baseline, losses / baseline, concentration


def run_sweep(
    config: SimulationConfig,
    out_dir: str | None = None,
    grid_size: int | None = None,
    seed: int | None = None,
) -> int:
    """Solve the config across its sweep frequencies, write sweep.csv."""
    config = _apply_overrides(config, grid_size, oracle=False)
    if not config.sweep_frequencies:
        raise ConfigParseError(f"{config.source}: [sweep]: no frequencies to sweep")
    if rms_parseval(config.drive) == 0.0:
        raise ConfigParseError(f"{config.source}: [drive]: sweep needs a non-zero drive")
    target = _resolve_out_dir(config, out_dir)

    rows = []
    all_hold = True
    for frequency in config.sweep_frequencies:
        if frequency == 0.0:
            losses, baseline, ratio, concentration = _zero_frequency_row(config)
            # The divider is even exactly when conductance-weighted shares
            # are; the property check is trivial here and stays out of the
            # verdict, matching the resistive-limit semantics of `solve`.
            rows.append((frequency, losses, baseline, ratio, concentration))
            continue
        drive = Waveform(1.0 / frequency, config.drive.dc, config.drive.harmonics)
        swept = dataclasses.replace(config, drive=drive, transposition=config.transposition)
        solution, _ = _solve_config_network(swept)
        report = compute_losses(
            solution,
            abs_tol=config.abs_tol,
            rel_tol=config.rel_tol,
            equality_tol=config.equality_tol,
            grid_size=config.grid_size,
        )
        witness = cauchy_schwarz_witness(
            sharing_functions(solution, config.grid_size, config.zero_threshold)
        )
        all_hold = all_hold and report.property_verdict.holds
        ratio = report.loss_ratio if report.loss_ratio is not None else float("nan")
        rows.append(
            (frequency, report.total_losses, report.total_baseline_losses, ratio,
             witness.peak_concentration)
        )

    path = target / "sweep.csv"
    with open(path, "w", newline="") as handle:
        handle.write(
            "frequency_hz,total_losses_w,baseline_losses_w,loss_ratio,peak_concentration\n"
        )
        for row in rows:
            handle.write(",".join(_fmt(v) for v in row) + "\n")
    print(f"swept {len(rows)} frequencies; wrote {path}")
    return 0 if all_hold else 2


def run_transposition_compare(
    config: SimulationConfig,
    out_dir: str | None = None,
    grid_size: int | None = None,
    seed: int | None = None,
) -> int:
    """Compare the untransposed bundle against every named schedule."""
    config = _apply_overrides(config, grid_size, oracle=False)
    if config.layout is None:
        raise ConfigParseError(
            f"{config.source}: transpose-compare needs a [layout] with geometry"
        )
    if len(config.schedules) < 2:
        raise ConfigParseError(
            f"{config.source}: transpose-compare needs at least two [[schedules]], "
            f"got {len(config.schedules)}"
        )
    target = _resolve_out_dir(config, out_dir)

    candidates = [("untransposed", None)] + [
        (spec.name, spec.schedule) for spec in config.schedules
    ]
    rows = []
    all_hold = True
    for name, schedule in candidates:
        network = config.network
        if schedule is not None:
            network = apply_transposition(
                network, config.layout, schedule, config.mutual_offset
            )
        try:
            solution = solve_drive(network, config.drive)
        except NetworkInvalidError:
            raise
        except StrandSimError as exc:
            raise SolveFailedError(f"{config.source}: schedule {name!r}: {exc}") from exc
        report = compute_losses(
            solution,
            abs_tol=config.abs_tol,
            rel_tol=config.rel_tol,
            equality_tol=config.equality_tol,
            grid_size=config.grid_size,
        )
        all_hold = all_hold and report.property_verdict.holds
        ratio = report.loss_ratio if report.loss_ratio is not None else float("nan")
        rows.append(
            (
                name,
                report.detection.occurred,
                report.total_losses,
                report.total_baseline_losses,
                ratio,
            )
        )

    path = target / "transpose_compare.csv"
    with open(path, "w", newline="") as handle:
        handle.write("schedule,detected,total_losses_w,baseline_losses_w,loss_ratio\n")
        for name, detected, losses, baseline, ratio in rows:
            handle.write(
                ",".join(
                    [name, "1" if detected else "0", _fmt(losses), _fmt(baseline), _fmt(ratio)]
                )
                + "\n"
            )
    for name, detected, losses, baseline, ratio in rows:
        print(
            f"{name}: ratio {ratio:.9f}, "
            f"circulating currents {'detected' if detected else 'not detected'}"
        )
    print(f"wrote {path}")
    return 0 if all_hold else 2


def run_validate(config: SimulationConfig) -> int:
    """Validate the configured bundle and print the findings."""
    result = validate_network(config.network)
    print(f"{config.source.name}: network of {result.n_strands} strands is valid")
    print(f"  max inductance asymmetry: {result.max_asymmetry:.3e} H")
    print(f"  min self inductance:      {result.min_self_inductance:.6e} H")
    print(f"  min resistance:           {result.min_resistance:.6e} ohm")
    print(f"  min eigenvalue:           {result.min_eigenvalue:.6e} H")
    for warning in result.warnings:
        print(f"  warning: {warning}")
    return 0


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Bad command lines are input errors (exit 1), not property violations.
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="strandsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, outputs: bool = True) -> None:
        p.add_argument("--config", required=True, help="TOML simulation config")
        if outputs:
            p.add_argument(
                "--out-dir", help="output directory (default: config [output].dir or ./out)"
            )
            p.add_argument(
                "--grid-size", type=int, help="override the analysis grid size"
            )
            p.add_argument(
                "--seed",
                type=int,
                help="seed recorded in the report for randomized verification "
                "workflows; the subcommands themselves are deterministic",
            )

    p_solve = sub.add_parser("solve", help="solve one bundle and check the property")
    common(p_solve)
    p_solve.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check the phasor solve with the time-domain integrator",
    )

    p_sweep = sub.add_parser("sweep", help="solve across the configured frequencies")
    common(p_sweep)

    p_cmp = sub.add_parser(
        "transpose-compare", help="compare transposition schedules against none"
    )
    common(p_cmp)

    p_val = sub.add_parser("validate", help="validate the configured network")
    common(p_val, outputs=False)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_config(args.config)
        if args.command == "solve":
            return run_solve(
                config, args.out_dir, args.grid_size, args.oracle, args.seed
            )
        if args.command == "sweep":
            return run_sweep(config, args.out_dir, args.grid_size, args.seed)
        if args.command == "transpose-compare":
            return run_transposition_compare(
                config, args.out_dir, args.grid_size, args.seed
            )
        return run_validate(config)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except StrandSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
