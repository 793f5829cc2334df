"""Conduction-loss accounting and the even-split comparison.

The DC-resistance loss of strand ``i`` over one period is
``R_i * RMS(I_i)^2``.  The reference is the even split, where every strand
carries ``I_total(t) / n`` at all times; circulating currents are present
exactly when some strand deviates from that split.  This module computes
both loss totals, decides whether circulating currents occurred, and
checks the structural property tying the two together: circulating
currents occur if and only if the bundle dissipates strictly more than
the even-split baseline.

For a bundle of equal strand resistances the property is a theorem (it
follows from the Cauchy-Schwarz bound ``sum_i alpha_i^2 >= 1/n`` on the
sharing fractions, with equality only at the even split);
:func:`cauchy_schwarz_witness` evaluates that bound pointwise as an
independent certificate.  With unequal resistances the physical current
distribution can undercut the even split, so the checker reports what it
finds rather than assuming.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllPointsMaskedError,
    InconsistentInputsError,
    InvalidStrandCountError,
)
from .solver import SharingFunctions, SolvedBundle
from .waveform import Harmonic, Waveform, rms_parseval, sample

_DEFAULT_GRID_SIZE = 1024
_DEFAULT_ABS_TOL = 0.0
_DEFAULT_REL_TOL = 1e-6
_DEFAULT_EQUALITY_TOL = 1e-9

# Tolerances for the sharing-function identities.
_SHARE_SUM_TOL = 1e-9
_CONCENTRATION_SLACK = 1e-12


@dataclass(frozen=True)
class DetectionVerdict:
    """Whether, where and by how much the currents leave the even split.

    ``max_deviation`` is ``max_{i,t} |I_i(t) - I_total(t)/n|`` over the
    detection grid, attained by ``strand_index`` at ``time``;
    ``max_phasor_deviation`` is the same measure over the per-component
    phasors, which cannot be fooled by cancellation between grid points.
    Detection triggers when either exceeds ``threshold``.
    """

    occurred: bool
    max_deviation: float
    strand_index: int
    time: float
    threshold: float
    max_phasor_deviation: float


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of the losses-vs-circulating-currents equivalence check.

    ``margin`` is ``total - baseline`` in watts; ``relative_margin`` is the
    same normalized by the total losses (None when the total is zero).
    """

    holds: bool
    margin: float
    relative_margin: float | None


@dataclass(frozen=True, eq=False)
class LossReport:
    """Per-strand and total conduction losses against the even-split baseline.

    ``loss_ratio`` is ``total_losses / total_baseline_losses`` and is None
    when the baseline is zero (no drive).
    """

    strand_rms: np.ndarray
    baseline_rms: np.ndarray
    strand_losses: np.ndarray
    baseline_strand_losses: np.ndarray
    total_losses: float
    total_baseline_losses: float
    loss_ratio: float | None
    detection: DetectionVerdict
    property_verdict: PropertyVerdict

    def __post_init__(self) -> None:
        for name in ("strand_rms", "baseline_rms", "strand_losses", "baseline_strand_losses"):
            value = np.asarray(getattr(self, name), dtype=float)
            value.setflags(write=False)
            object.__setattr__(self, name, value)


@dataclass(frozen=True, eq=False)
class CauchySchwarzWitness:
    """Pointwise evaluation of the sharing-fraction identities.

    On every unmasked grid point the shares must sum to one
    (``max_identity_error <= 1e-9``) and their squares must respect the
    concentration bound ``sum_i alpha_i^2 >= 1/n``
    (``min_concentration_margin >= -1e-12``).  The point of maximum
    concentration -- the most uneven instant -- is flagged.
    """

    n_strands: int
    sum_shares: np.ndarray
    concentration: np.ndarray
    identity_ok: bool
    lower_bound_ok: bool
    max_identity_error: float
    min_concentration_margin: float
    peak_index: int
    peak_time: float
    peak_concentration: float

    def __post_init__(self) -> None:
        for name in ("sum_shares", "concentration"):
            value = np.asarray(getattr(self, name), dtype=float)
            value.setflags(write=False)
            object.__setattr__(self, name, value)


def baseline_strand_current(drive: Waveform, n_strands: int) -> Waveform:
    """The even-split strand current ``I_total(t) / n``.

    Raises:
        InvalidStrandCountError: ``n_strands`` is not an integer >= 2.
    """
    if int(n_strands) != n_strands or n_strands < 2:
        raise InvalidStrandCountError(
            f"an even split needs an integer strand count >= 2, got {n_strands!r}"
        )
    n = int(n_strands)
    return Waveform(
        drive.period,
        drive.dc / n,
        tuple(Harmonic(h.order, h.amplitude / n, h.phase) for h in drive.harmonics),
    )


def detect_circulating(
    solution: SolvedBundle,
    abs_tol: float = _DEFAULT_ABS_TOL,
    rel_tol: float = _DEFAULT_REL_TOL,
    grid_size: int = _DEFAULT_GRID_SIZE,
) -> DetectionVerdict:
    """Decide whether the solved currents deviate from the even split.

    The deviation ``|I_i(t) - I_total(t)/n|`` is scanned on a uniform grid
    of ``grid_size`` points and, separately, per component in the phasor
    domain.  The trigger threshold is
    ``abs_tol + rel_tol * RMS(I_total) / n``; with the defaults that is a
    purely relative criterion at 1e-6.
    """
    n = solution.network.n_strands
    drive = solution.drive
    times = np.arange(grid_size) * (drive.period / grid_size)
    even = sample(drive, times) / n
    deviations = np.empty((n, grid_size))
    for i, strand_wave in enumerate(solution.per_strand):
        deviations[i] = np.abs(sample(strand_wave, times) - even)
    flat_peak = int(np.argmax(deviations))
    strand_index, time_index = np.unravel_index(flat_peak, deviations.shape)
    max_deviation = float(deviations[strand_index, time_index])

    max_phasor_deviation = 0.0
    for component in solution.per_harmonic:
        gap = np.abs(component.strand_phasors - component.total_phasor / n)
        max_phasor_deviation = max(max_phasor_deviation, float(np.max(gap)))

    threshold = abs_tol + rel_tol * rms_parseval(drive) / n
    return DetectionVerdict(
        occurred=bool(max_deviation > threshold or max_phasor_deviation > threshold),
        max_deviation=max_deviation,
        strand_index=int(strand_index),
        time=float(times[time_index]),
        threshold=float(threshold),
        max_phasor_deviation=max_phasor_deviation,
    )


def _property_verdict(
    total: float, baseline: float, occurred: bool, equality_tol: float
) -> PropertyVerdict:
    margin = total - baseline
    if occurred:
        holds = baseline < total - equality_tol * total
    else:
        holds = abs(margin) <= equality_tol * total
    return PropertyVerdict(
        holds=bool(holds),
        margin=float(margin),
        relative_margin=float(margin / total) if total > 0.0 else None,
    )


def compute_losses(
    solution: SolvedBundle,
    abs_tol: float = _DEFAULT_ABS_TOL,
    rel_tol: float = _DEFAULT_REL_TOL,
    equality_tol: float = _DEFAULT_EQUALITY_TOL,
    grid_size: int = _DEFAULT_GRID_SIZE,
) -> LossReport:
    """Loss totals, circulating-current detection and the property verdict.

    RMS values come from Parseval's identity on the closed-form waveforms,
    so the loss figures carry no quadrature error.
    """
    resistances = solution.network.resistances()
    n = solution.network.n_strands
    strand_rms = np.array([rms_parseval(w) for w in solution.per_strand])
    baseline_rms = np.full(n, rms_parseval(solution.drive) / n)
    strand_losses = resistances * strand_rms**2
    baseline_strand_losses = resistances * baseline_rms**2
    total = float(strand_losses.sum())
    baseline = float(baseline_strand_losses.sum())
    detection = detect_circulating(solution, abs_tol, rel_tol, grid_size)
    return LossReport(
        strand_rms=strand_rms,
        baseline_rms=baseline_rms,
        strand_losses=strand_losses,
        baseline_strand_losses=baseline_strand_losses,
        total_losses=total,
        total_baseline_losses=baseline,
        loss_ratio=total / baseline if baseline > 0.0 else None,
        detection=detection,
        property_verdict=_property_verdict(
            total, baseline, detection.occurred, equality_tol
        ),
    )


def check_fundamental_property(
    report: LossReport,
    detection: DetectionVerdict,
    equality_tol: float = _DEFAULT_EQUALITY_TOL,
) -> PropertyVerdict:
    """Re-evaluate the equivalence between detection and excess losses.

    When circulating currents occurred the bundle must dissipate strictly
    more than the baseline by a relative margin above ``equality_tol``;
    when they did not, the totals must agree within the same tolerance.

    Raises:
        InconsistentInputsError: ``detection`` is not the verdict carried
            by ``report``, i.e. the two come from different solves or
            settings.
    """
    if detection != report.detection:
        raise InconsistentInputsError(
            "detection verdict does not match the one recorded in the loss report"
        )
    return _property_verdict(
        report.total_losses, report.total_baseline_losses, detection.occurred, equality_tol
    )


def cauchy_schwarz_witness(shares: SharingFunctions) -> CauchySchwarzWitness:
    """Check the sharing-fraction identities on every unmasked grid point.

    The shares of a conserved total must sum to one, and by the
    Cauchy-Schwarz inequality their squares sum to at least ``1/n`` --
    with equality exactly at the even split.  The returned witness records
    both margins and the grid point of maximum concentration.

    Raises:
        AllPointsMaskedError: the sharing functions carry no unmasked point.
    """
    keep = ~shares.masked
    if not np.any(keep):
        raise AllPointsMaskedError("sharing functions are masked everywhere")
    n = shares.n_strands
    sums = shares.shares.sum(axis=0)
    concentration = (shares.shares**2).sum(axis=0)
    identity_error = np.abs(sums[keep] - 1.0)
    margin = concentration[keep] - 1.0 / n
    keep_indices = np.flatnonzero(keep)
    peak_position = int(np.argmax(concentration[keep]))
    peak_index = int(keep_indices[peak_position])
    return CauchySchwarzWitness(
        n_strands=n,
        sum_shares=sums,
        concentration=concentration,
        identity_ok=bool(np.max(identity_error) <= _SHARE_SUM_TOL),
        lower_bound_ok=bool(np.min(margin) >= -_CONCENTRATION_SLACK),
        max_identity_error=float(np.max(identity_error)),
        min_concentration_margin=float(np.min(margin)),
        peak_index=peak_index,
        peak_time=float(shares.times[peak_index]),
        peak_concentration=float(concentration[peak_index]),
    )
