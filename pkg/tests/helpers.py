"""Shared random generators and small hand-rolled oracles for the tests.

The bundle generator draws one resistance per bundle, shared by all its
strands.  Equal resistances are the regime in which the excess-loss bound
is a theorem; unequal resistances are exercised separately by tests that
document the divider undercutting the even split.
"""

from __future__ import annotations

import numpy as np

from strandsim import BundleNetwork, Strand, Waveform, waveform_from_harmonics


def random_bundle(
    rng: np.random.Generator,
    n_min: int = 2,
    n_max: int = 12,
    equal_resistance: bool = True,
) -> BundleNetwork:
    """Random bundle with a dominant-diagonal symmetric inductance matrix."""
    n = int(rng.integers(n_min, n_max + 1))
    if equal_resistance:
        resistances = np.full(n, float(rng.uniform(0.5, 2.0)))
    else:
        resistances = rng.uniform(0.5, 2.0, n)
    diagonal = rng.uniform(1.0, 2.0, n) * 1e-3
    coupling = rng.uniform(-0.3, 0.3, (n, n)) * 1e-3
    coupling = 0.5 * (coupling + coupling.T)
    np.fill_diagonal(coupling, 0.0)
    # Keep every row diagonally dominant so the bundle stays well away from
    # singular territory across the whole randomized suite.
    worst = float(np.max(np.abs(coupling).sum(axis=1) / diagonal))
    if worst > 0.8:
        coupling *= 0.8 / worst
    matrix = coupling + np.diag(diagonal)
    strands = tuple(
        Strand(f"s{i + 1:02d}", float(r)) for i, r in enumerate(resistances)
    )
    return BundleNetwork(strands, matrix)


def random_symmetric_bundle(
    rng: np.random.Generator, n_min: int = 2, n_max: int = 10
) -> BundleNetwork:
    """Bundle invariant under any strand exchange: equal R, L = a*I + b*ones."""
    n = int(rng.integers(n_min, n_max + 1))
    resistance = float(rng.uniform(0.5, 2.0))
    diagonal = float(rng.uniform(1.0, 2.0)) * 1e-3
    mutual = diagonal * float(rng.uniform(-0.45, 0.8))
    matrix = np.full((n, n), mutual)
    np.fill_diagonal(matrix, diagonal)
    strands = tuple(Strand(f"s{i + 1:02d}", resistance) for i in range(n))
    return BundleNetwork(strands, matrix)


def random_drive(
    rng: np.random.Generator,
    period: float = 0.02,
    max_harmonics: int = 8,
    max_order: int = 20,
    allow_dc: bool = True,
) -> Waveform:
    """Random multi-harmonic periodic drive, occasionally with a DC offset."""
    count = int(rng.integers(1, min(max_harmonics, max_order) + 1))
    orders = sorted(rng.choice(np.arange(1, max_order + 1), size=count, replace=False))
    dc = float(rng.uniform(-2.0, 2.0)) if allow_dc and rng.random() < 0.5 else 0.0
    harmonics = [
        (int(order), float(rng.uniform(0.5, 10.0)), float(rng.uniform(-np.pi, np.pi)))
        for order in orders
    ]
    return waveform_from_harmonics(period, dc, harmonics)


def random_sinusoid(rng: np.random.Generator) -> Waveform:
    """Single random harmonic, no DC: the drive class of the oracle suite."""
    period = float(rng.uniform(5e-3, 5e-2))
    return waveform_from_harmonics(
        period,
        0.0,
        [(1, float(rng.uniform(1.0, 20.0)), float(rng.uniform(-np.pi, np.pi)))],
    )
