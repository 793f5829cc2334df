"""TOML simulation configs for the command-line interface.

A config describes one bundle (either an explicit ``[network]`` or a
geometric ``[layout]``), the periodic ``[drive]``, optional ``[analysis]``
settings, an optional ``[transposition]`` schedule, named ``[[schedules]]``
for comparison runs, ``[sweep]`` frequencies and an ``[output]`` directory.
Permutations are written 1-based in config files and converted to the
0-based convention of the library.  Paths inside a config (inductance CSV,
output directory) are resolved relative to the config file.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigParseError, StrandSimError
from .network import (
    BundleNetwork,
    Placement,
    SlotLayout,
    Strand,
    TranspositionSchedule,
    slot_inductance_matrix,
)
from .waveform import Waveform, waveform_from_harmonics

_MISSING = object()


@dataclass(frozen=True)
class ScheduleSpec:
    """A named transposition schedule from a ``[[schedules]]`` entry."""

    name: str
    schedule: TranspositionSchedule


@dataclass(frozen=True)
class SimulationConfig:
    """Everything a subcommand needs, parsed and constructed.

    ``layout`` is None when the bundle was given as an explicit matrix; in
    that case transposition runs are unavailable.  ``output_dir`` is None
    when the config does not name one.
    """

    source: Path
    drive: Waveform
    network: BundleNetwork
    layout: SlotLayout | None
    mutual_offset: float
    grid_size: int
    zero_threshold: float
    abs_tol: float
    rel_tol: float
    equality_tol: float
    oracle: bool
    oracle_steps_per_period: int
    oracle_settle_periods: int
    transposition: TranspositionSchedule | None
    schedules: tuple[ScheduleSpec, ...] = ()
    sweep_frequencies: tuple[float, ...] = ()
    output_dir: Path | None = None


def _fail(source: Path, where: str, message: str) -> ConfigParseError:
    return ConfigParseError(f"{source}: {where}: {message}")


def _get(table: dict, key: str, kinds, source: Path, where: str, default=_MISSING):
    if key not in table:
        if default is _MISSING:
            raise _fail(source, where, f"missing required key {key!r}")
        return default
    value = table[key]
    allowed = kinds if isinstance(kinds, tuple) else (kinds,)
    # bool subclasses int, but a TOML true/false is not an acceptable number
    if not isinstance(value, allowed) or (isinstance(value, bool) and bool not in allowed):
        kind_names = "/".join(k.__name__ for k in allowed)
        raise _fail(source, where, f"{key!r} must be {kind_names}, got {value!r}")
    return value


def _number(table: dict, key: str, source: Path, where: str, default=_MISSING) -> float:
    value = _get(table, key, (int, float), source, where, default)
    return float(value)


def _check_unknown(table: dict, known: set[str], source: Path, where: str) -> None:
    unknown = sorted(set(table) - known)
    if unknown:
        raise _fail(source, where, f"unknown keys {unknown}")


def _parse_drive(data: dict, source: Path) -> Waveform:
    table = _get(data, "drive", dict, source, "top level")
    _check_unknown(
        table, {"period_s", "frequency_hz", "dc_a", "harmonics"}, source, "[drive]"
    )
    has_period = "period_s" in table
    has_frequency = "frequency_hz" in table
    if has_period == has_frequency:
        raise _fail(source, "[drive]", "give exactly one of period_s or frequency_hz")
    if has_period:
        period = _number(table, "period_s", source, "[drive]")
    else:
        frequency = _number(table, "frequency_hz", source, "[drive]")
        if frequency <= 0.0:
            raise _fail(source, "[drive]", f"frequency_hz must be > 0, got {frequency}")
        period = 1.0 / frequency
    dc = _number(table, "dc_a", source, "[drive]", default=0.0)
    rows = _get(table, "harmonics", list, source, "[drive]", default=[])
    harmonics = []
    for row in rows:
        if not (isinstance(row, list) and len(row) == 3):
            raise _fail(
                source, "[drive]", f"harmonics entries are [order, amplitude_a, phase_rad], got {row!r}"
            )
        harmonics.append((row[0], float(row[1]), float(row[2])))
    return waveform_from_harmonics(period, dc, harmonics)


def _parse_resistances(table: dict, n: int, source: Path, where: str) -> list[float]:
    has_scalar = "resistance_ohm" in table
    has_list = "resistances_ohm" in table
    if has_scalar == has_list:
        raise _fail(source, where, "give exactly one of resistance_ohm or resistances_ohm")
    if has_scalar:
        return [_number(table, "resistance_ohm", source, where)] * n
    values = _get(table, "resistances_ohm", list, source, where)
    if len(values) != n:
        raise _fail(
            source, where, f"resistances_ohm has {len(values)} entries for {n} strands"
        )
    return [float(v) for v in values]


def _parse_network(table: dict, source: Path) -> BundleNetwork:
    where = "[network]"
    _check_unknown(
        table,
        {"resistance_ohm", "resistances_ohm", "inductance_h", "inductance_csv", "labels"},
        source,
        where,
    )
    has_inline = "inductance_h" in table
    has_csv = "inductance_csv" in table
    if has_inline == has_csv:
        raise _fail(source, where, "give exactly one of inductance_h or inductance_csv")
    if has_inline:
        flat = _get(table, "inductance_h", list, source, where)
        n = int(round(len(flat) ** 0.5))
        if n * n != len(flat) or n < 2:
            raise _fail(
                source,
                where,
                f"inductance_h must hold n*n entries (row-major, n >= 2), got {len(flat)}",
            )
        matrix = np.array([float(v) for v in flat]).reshape(n, n)
    else:
        csv_path = source.parent / _get(table, "inductance_csv", str, source, where)
        try:
            matrix = np.loadtxt(csv_path, delimiter=",", ndmin=2)
        except OSError as exc:
            raise _fail(source, where, f"cannot read {csv_path}: {exc}") from exc
        except ValueError as exc:
            raise _fail(source, where, f"bad matrix in {csv_path}: {exc}") from exc
        if matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 2:
            raise _fail(source, where, f"{csv_path} holds shape {matrix.shape}, need square n >= 2")
        n = matrix.shape[0]
    resistances = _parse_resistances(table, n, source, where)
    labels = _get(table, "labels", list, source, where, default=None)
    if labels is None:
        labels = [f"strand_{i + 1:02d}" for i in range(n)]
    elif len(labels) != n:
        raise _fail(source, where, f"labels has {len(labels)} entries for {n} strands")
    strands = tuple(Strand(str(label), r) for label, r in zip(labels, resistances))
    return BundleNetwork(strands, matrix)


def _parse_layout(table: dict, source: Path) -> tuple[BundleNetwork, SlotLayout, float]:
    where = "[layout]"
    _check_unknown(
        table,
        {
            "slot_width_m",
            "slot_depth_m",
            "stack_length_m",
            "resistance_ohm",
            "resistances_ohm",
            "mutual_offset_h",
            "placements",
            "labels",
        },
        source,
        where,
    )
    width = _number(table, "slot_width_m", source, where)
    depth = _number(table, "slot_depth_m", source, where)
    stack = _number(table, "stack_length_m", source, where)
    offset = _number(table, "mutual_offset_h", source, where, default=0.0)
    rows = _get(table, "placements", list, source, where)
    paths = []
    for index, path_rows in enumerate(rows):
        if not isinstance(path_rows, list) or not path_rows:
            raise _fail(source, where, f"placements[{index}] must be a non-empty list")
        path = []
        for entry in path_rows:
            if not (isinstance(entry, list) and len(entry) in (2, 3)):
                raise _fail(
                    source,
                    where,
                    f"each placement is [x_m, y_m] or [x_m, y_m, polarity], got {entry!r}",
                )
            polarity = int(entry[2]) if len(entry) == 3 else 1
            path.append(Placement(float(entry[0]), float(entry[1]), polarity))
        paths.append(tuple(path))
    layout = SlotLayout(width, depth, stack, tuple(paths))
    n = layout.n_strands
    resistances = _parse_resistances(table, n, source, where)
    labels = _get(table, "labels", list, source, where, default=None)
    if labels is None:
        labels = [f"strand_{i + 1:02d}" for i in range(n)]
    elif len(labels) != n:
        raise _fail(source, where, f"labels has {len(labels)} entries for {n} strands")
    strands = tuple(
        Strand(str(label), r, path) for label, r, path in zip(labels, resistances, paths)
    )
    network = BundleNetwork(strands, slot_inductance_matrix(layout, offset))
    return network, layout, offset


def _parse_schedule(segments, n: int, source: Path, where: str) -> TranspositionSchedule:
    if not isinstance(segments, list) or not segments:
        raise _fail(source, where, "segments must be a non-empty list")
    parsed = []
    for entry in segments:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[1], list)):
            raise _fail(
                source, where, f"each segment is [fraction, [1-based permutation]], got {entry!r}"
            )
        fraction = float(entry[0])
        permutation = tuple(int(p) - 1 for p in entry[1])
        if len(permutation) != n:
            raise _fail(
                source, where, f"permutation {entry[1]} has {len(permutation)} entries for {n} strands"
            )
        parsed.append((fraction, permutation))
    return TranspositionSchedule(tuple(parsed))


def load_config(path: str | Path) -> SimulationConfig:
    """Parse and construct a simulation config.

    Raises:
        ConfigParseError: the file is missing, not valid TOML, violates the
            schema, or describes an impossible drive/network/schedule.  The
            message always names the file and the offending section.
    """
    source = Path(path)
    try:
        with open(source, "rb") as handle:
            data = tomllib.load(handle)
    except OSError as exc:
        raise ConfigParseError(f"{source}: cannot read config: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigParseError(f"{source}: invalid TOML: {exc}") from exc

    _check_unknown(
        data,
        {"drive", "network", "layout", "analysis", "transposition", "schedules", "sweep", "output"},
        source,
        "top level",
    )
    try:
        drive = _parse_drive(data, source)

        has_network = "network" in data
        has_layout = "layout" in data
        if has_network == has_layout:
            raise _fail(source, "top level", "give exactly one of [network] or [layout]")
        if has_network:
            network = _parse_network(_get(data, "network", dict, source, "top level"), source)
            layout, offset = None, 0.0
        else:
            network, layout, offset = _parse_layout(
                _get(data, "layout", dict, source, "top level"), source
            )
        n = network.n_strands

        analysis = _get(data, "analysis", dict, source, "top level", default={})
        _check_unknown(
            analysis,
            {
                "grid_size",
                "zero_threshold",
                "abs_tol_a",
                "rel_tol",
                "equality_tol",
                "oracle",
                "oracle_steps_per_period",
                "oracle_settle_periods",
            },
            source,
            "[analysis]",
        )
        grid_size = int(_get(analysis, "grid_size", int, source, "[analysis]", default=1024))
        zero_threshold = _number(analysis, "zero_threshold", source, "[analysis]", default=1e-6)
        abs_tol = _number(analysis, "abs_tol_a", source, "[analysis]", default=0.0)
        rel_tol = _number(analysis, "rel_tol", source, "[analysis]", default=1e-6)
        equality_tol = _number(analysis, "equality_tol", source, "[analysis]", default=1e-9)
        oracle = bool(_get(analysis, "oracle", bool, source, "[analysis]", default=False))
        oracle_steps = int(
            _get(analysis, "oracle_steps_per_period", int, source, "[analysis]", default=2048)
        )
        oracle_settle = int(
            _get(analysis, "oracle_settle_periods", int, source, "[analysis]", default=10)
        )

        transposition = None
        if "transposition" in data:
            table = _get(data, "transposition", dict, source, "top level")
            _check_unknown(table, {"segments"}, source, "[transposition]")
            if layout is None:
                raise _fail(
                    source,
                    "[transposition]",
                    "transposition needs a [layout]; an explicit [network] has no geometry",
                )
            transposition = _parse_schedule(
                _get(table, "segments", list, source, "[transposition]"),
                n,
                source,
                "[transposition]",
            )

        schedules = []
        for index, entry in enumerate(_get(data, "schedules", list, source, "top level", default=[])):
            where = f"[[schedules]] #{index + 1}"
            if not isinstance(entry, dict):
                raise _fail(source, where, "each entry must be a table")
            _check_unknown(entry, {"name", "segments"}, source, where)
            if layout is None:
                raise _fail(source, where, "schedules need a [layout]")
            name = _get(entry, "name", str, source, where, default=f"schedule_{index + 1}")
            schedules.append(
                ScheduleSpec(
                    name,
                    _parse_schedule(
                        _get(entry, "segments", list, source, where), n, source, where
                    ),
                )
            )

        sweep_frequencies: tuple[float, ...] = ()
        if "sweep" in data:
            table = _get(data, "sweep", dict, source, "top level")
            _check_unknown(table, {"frequencies_hz"}, source, "[sweep]")
            values = _get(table, "frequencies_hz", list, source, "[sweep]")
            frequencies = [float(v) for v in values]
            if not frequencies:
                raise _fail(source, "[sweep]", "frequencies_hz must not be empty")
            if any(f < 0.0 for f in frequencies):
                raise _fail(source, "[sweep]", "frequencies must be >= 0")
            sweep_frequencies = tuple(frequencies)

        output_dir = None
        if "output" in data:
            table = _get(data, "output", dict, source, "top level")
            _check_unknown(table, {"dir"}, source, "[output]")
            output_dir = source.parent / _get(table, "dir", str, source, "[output]")
    except ConfigParseError:
        raise
    except StrandSimError as exc:
        raise ConfigParseError(f"{source}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(f"{source}: {exc}") from exc

    return SimulationConfig(
        source=source,
        drive=drive,
        network=network,
        layout=layout,
        mutual_offset=offset,
        grid_size=grid_size,
        zero_threshold=zero_threshold,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
        equality_tol=equality_tol,
        oracle=oracle,
        oracle_steps_per_period=oracle_steps,
        oracle_settle_periods=oracle_settle,
        transposition=transposition,
        schedules=tuple(schedules),
        sweep_frequencies=sweep_frequencies,
        output_dir=output_dir,
    )
