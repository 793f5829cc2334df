#!/usr/bin/env python3
"""Generate the bundled 30-strand example configs.

Writes ``configs/layout_30_strand.toml`` (untransposed) and
``configs/layout_30_transposed.toml`` (full cyclic transposition plus two
named schedules for comparison runs).  The geometry models one stator slot
of a converter-fed machine winding: 30 strands in parallel, three turns
each, on a 6 x 15 position grid with a deterministic shuffle and a small
vertical jitter so that no two strands see identical leakage coupling.

The outputs are committed; regenerate only when changing the geometry or
the drive, then re-run the test suite (several tests pin these files).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

N_STRANDS = 30
TURNS = 3
COLUMNS = 6
ROWS = 15

SLOT_WIDTH = 0.008  # m
SLOT_DEPTH = 0.040  # m
STACK_LENGTH = 0.12  # m
R_DC = 0.03  # ohm, equal for all strands (same wire gauge)

PERIOD = 0.002  # s -> 500 Hz fundamental
DC_A = 0.0
HARMONICS = [
    (1, 120.0, 0.0),
    (5, 25.0, -1.0471975511965976),
    (7, 18.0, 0.5235987755982988),
    (11, 8.0, 2.0943951023931953),
    (13, 6.0, -2.617993877991494),
]

SEED = 20260823


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def build_paths() -> list[list[tuple[float, float]]]:
    rng = np.random.default_rng(SEED)
    pitch_x = SLOT_WIDTH / COLUMNS
    pitch_y = SLOT_DEPTH / ROWS
    xs = (np.arange(COLUMNS) + 0.5) * pitch_x
    ys = (np.arange(ROWS) + 0.5) * pitch_y
    grid = [(x, y) for y in ys for x in xs]
    order = rng.permutation(len(grid))
    jitter = rng.uniform(-0.3, 0.3, len(grid)) * pitch_y
    paths = []
    for strand in range(N_STRANDS):
        path = []
        for turn in range(TURNS):
            index = order[strand * TURNS + turn]
            x, y = grid[index]
            path.append((x, y + jitter[index]))
        paths.append(path)
    return paths


def drive_lines() -> list[str]:
    lines = ["[drive]", f"period_s = {fmt(PERIOD)}", f"dc_a = {fmt(DC_A)}", "harmonics = ["]
    for order, amplitude, phase in HARMONICS:
        lines.append(f"    [{order}, {fmt(amplitude)}, {fmt(phase)}],")
    lines.append("]")
    return lines


def layout_lines(paths: list[list[tuple[float, float]]]) -> list[str]:
    lines = [
        "[layout]",
        f"slot_width_m = {fmt(SLOT_WIDTH)}",
        f"slot_depth_m = {fmt(SLOT_DEPTH)}",
        f"stack_length_m = {fmt(STACK_LENGTH)}",
        f"resistance_ohm = {fmt(R_DC)}",
        "placements = [",
    ]
    for path in paths:
        cells = ", ".join(f"[{fmt(x)}, {fmt(y)}, 1]" for x, y in path)
        lines.append(f"    [{cells}],")
    lines.append("]")
    return lines


def schedule_lines(header: str, segments: list[tuple[float, list[int]]]) -> list[str]:
    lines = [header, "segments = ["]
    for fraction, permutation in segments:
        one_based = ", ".join(str(p + 1) for p in permutation)
        lines.append(f"    [{fmt(fraction)}, [{one_based}]],")
    lines.append("]")
    return lines


def full_cyclic_segments() -> list[tuple[float, list[int]]]:
    return [
        (1.0 / N_STRANDS, [(i + k) % N_STRANDS for i in range(N_STRANDS)])
        for k in range(N_STRANDS)
    ]


def half_swap_segments() -> list[tuple[float, list[int]]]:
    return [
        (0.5, list(range(N_STRANDS))),
        (0.5, list(reversed(range(N_STRANDS)))),
    ]


def main() -> None:
    configs = Path(__file__).resolve().parent.parent / "configs"
    configs.mkdir(exist_ok=True)
    paths = build_paths()

    untransposed = [
        "# 30 parallel strands, 3 turns each, in one stator slot; 500 Hz",
        "# converter-fed drive with strong low-order harmonics.  Generated by",
        "# tools/gen_layout30.py -- edit that script, not this file.",
        "",
        *drive_lines(),
        "",
        *layout_lines(paths),
        "",
        "[analysis]",
        "grid_size = 1024",
        "",
        "[sweep]",
        "frequencies_hz = [0.0, 50.0, 100.0, 250.0, 500.0, 1000.0, 2000.0]",
        "",
    ]
    (configs / "layout_30_strand.toml").write_text("\n".join(untransposed))

    transposed = [
        "# Same bundle as layout_30_strand.toml, but with a full cyclic",
        "# transposition applied by `solve`, and two named schedules for",
        "# `transpose-compare`.  Generated by tools/gen_layout30.py.",
        "",
        *drive_lines(),
        "",
        *layout_lines(paths),
        "",
        *schedule_lines("[transposition]", full_cyclic_segments()),
        "",
        "[[schedules]]",
        'name = "full_cyclic"',
        *schedule_lines("", full_cyclic_segments())[1:],
        "",
        "[[schedules]]",
        'name = "half_swap"',
        *schedule_lines("", half_swap_segments())[1:],
        "",
    ]
    (configs / "layout_30_transposed.toml").write_text("\n".join(transposed))
    print(f"wrote {configs / 'layout_30_strand.toml'}")
    print(f"wrote {configs / 'layout_30_transposed.toml'}")


if __name__ == "__main__":
    main()
