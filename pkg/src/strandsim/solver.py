"""Per-strand current solution for a driven bundle.

Phasor solve
------------
For angular frequency ``omega > 0`` the strand current phasors and the
common terminal voltage satisfy, per strand ``i``,

    (R_i + j*omega*L[i,i]) I_i  +  j*omega * sum_{k != i} L[i,k] I_k  -  V = 0

together with conservation ``sum_i I_i = I_total``: one dense complex
linear system in the ``n + 1`` unknowns ``(I_1 .. I_n, V)``, solved by LU
with partial pivoting.  At ``omega = 0`` the coupling drops out and the
system degenerates to the conductance divider ``I_i = G_i / sum_k G_k``.

After each solve the residual of the conservation row is removed by
subtracting ``(sum_i I_i - I_total) / n`` from every strand phasor, making
conservation exact in floating point.  Sharing fractions are later
evaluated next to zero crossings of the total current, where a plain
1e-13 relative LU residual would be amplified a million-fold; the
correction costs each voltage equation less than the LU backward error.

A periodic drive given as a finite Fourier series is solved one component
at a time and reassembled by superposition, which is exact for a linear
network.

Transient cross-check
---------------------
:func:`transient_oracle` integrates the same network in the time domain
and deliberately shares no code with the phasor path.  Eliminating the
last strand current through conservation leaves the reduced linear system

    A x'(t) = -C x(t) + f(t),        x = (I_1 .. I_{n-1})

with ``A = E L E^T`` where ``E`` maps strand ``k`` to ``e_k - e_n``,
``C = diag(R_1 .. R_{n-1}) + R_n * ones`` and
``f(t) = R_n * I_total(t) * ones - b * I_total'(t)``,
``b_k = L[k, n-1] - L[n-1, n-1]``.  The trapezoidal rule marches this
system through a settling phase and returns the final period.  A purely
resistive network (all-zero inductance) falls back to the pointwise
conductance divider, since then the reduced matrix ``A`` is zero by
construction rather than by accident.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import (
    AllPointsMaskedError,
    NonPositiveResistanceError,
    ReducedMatrixSingularError,
    SingularSystemError,
    StepTooCoarseError,
)
from .network import BundleNetwork, validate_network
from .waveform import Harmonic, Waveform, rms_parseval, sample, sample_derivative

_TWO_PI = 2.0 * np.pi

# A pivot below this fraction of the largest pivot marks the phasor system
# as numerically singular.
_PIVOT_RTOL = 1e-14
# Same role for the reduced inductance matrix of the transient model, which
# is assembled from differences and deserves a little more slack.
_REDUCED_PIVOT_RTOL = 1e-12

_MIN_GRID_SIZE = 64
_MIN_STEPS_PER_PERIOD = 512
_MIN_SETTLE_PERIODS = 5


@dataclass(frozen=True, eq=False)
class HarmonicSolution:
    """Phasor solution of one drive component.

    ``strand_phasors[i]`` is the complex current amplitude of strand ``i``
    in the package-wide cosine convention; their sum equals
    ``total_phasor`` exactly.  For the DC component (``angular_frequency
    == 0``) the phasors are real-valued.
    """

    angular_frequency: float
    total_phasor: complex
    strand_phasors: np.ndarray
    terminal_voltage: complex

    def __post_init__(self) -> None:
        phasors = np.array(self.strand_phasors, dtype=complex)
        phasors.setflags(write=False)
        object.__setattr__(self, "strand_phasors", phasors)


@dataclass(frozen=True, eq=False)
class SolvedBundle:
    """Full solution of a bundle under a periodic drive.

    ``per_strand[i]`` is the current waveform of strand ``i``.
    ``per_harmonic`` holds the component solutions in canonical order: the
    DC component first (present even when the drive has no offset), then
    the drive harmonics by ascending order.
    """

    network: BundleNetwork
    drive: Waveform
    per_strand: tuple[Waveform, ...]
    per_harmonic: tuple[HarmonicSolution, ...]


@dataclass(frozen=True, eq=False)
class SharingFunctions:
    """Per-strand share of the total current on a uniform time grid.

    ``shares[i, k]`` is ``I_i(t_k) / I_total(t_k)``; columns where the
    total current sits at a zero crossing are masked (``masked[k]`` True)
    and hold NaN.
    """

    times: np.ndarray
    shares: np.ndarray
    masked: np.ndarray

    def __post_init__(self) -> None:
        for name in ("times", "shares", "masked"):
            value = np.asarray(getattr(self, name))
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n_strands(self) -> int:
        return self.shares.shape[0]


@dataclass(frozen=True, eq=False)
class TransientSolution:
    """One steady-state period of time-domain strand currents.

    ``currents[i, k]`` is strand ``i`` at ``times[k]``; the columns sum to
    the sampled total drive current exactly.
    """

    times: np.ndarray
    currents: np.ndarray

    def __post_init__(self) -> None:
        for name in ("times", "currents"):
            value = np.asarray(getattr(self, name), dtype=float)
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    def strand_rms(self) -> np.ndarray:
        """Per-strand RMS over the period by uniform-grid quadrature."""
        return np.sqrt(np.mean(self.currents**2, axis=1))


def _checked_lu(matrix: np.ndarray, rtol: float, error: type, what: str):
    """LU-factor ``matrix``, raising ``error`` when a pivot collapses."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # scipy warns on exact zero pivots
        lu, piv = lu_factor(matrix)
    pivots = np.abs(np.diag(lu))
    largest = float(np.max(pivots)) if pivots.size else 0.0
    if largest == 0.0 or float(np.min(pivots)) < rtol * largest:
        raise error(
            f"{what}: pivot ratio {np.min(pivots):.3e} / {largest:.3e} "
            f"below {rtol:g}"
        )
    return lu, piv


def _conductance_divider(resistances: np.ndarray) -> np.ndarray:
    """Current shares ``G_i / sum G`` of a purely resistive parallel bundle."""
    conductances = 1.0 / resistances
    return conductances / conductances.sum()


def _solve_component(
    resistances: np.ndarray,
    inductance: np.ndarray,
    omega: float,
    total_phasor: complex,
) -> tuple[np.ndarray, complex]:
    """Solve one frequency component; returns (strand phasors, voltage)."""
    n = resistances.size
    if omega == 0.0:
        shares = _conductance_divider(resistances)
        phasors = shares.astype(complex) * total_phasor
        voltage = total_phasor / (1.0 / resistances).sum()
    else:
        system = np.zeros((n + 1, n + 1), dtype=complex)
        system[:n, :n] = 1j * omega * inductance
        system[:n, :n] += np.diag(resistances)
        system[:n, n] = -1.0
        system[n, :n] = 1.0
        rhs = np.zeros(n + 1, dtype=complex)
        rhs[n] = total_phasor
        lu = _checked_lu(system, _PIVOT_RTOL, SingularSystemError, "phasor system")
        solution = lu_solve(lu, rhs)
        phasors = solution[:n]
        voltage = complex(solution[n])
    # Make the conservation row exact; see the module docstring.
    phasors = phasors - (phasors.sum() - total_phasor) / n
    return phasors, voltage


def solve_harmonic(
    network: BundleNetwork, angular_frequency: float, total_phasor: complex
) -> HarmonicSolution:
    """Solve the bundle for a single frequency component.

    Args:
        network: Validated bundle (validation is re-run here and raises
            ``NetworkInvalidError`` subclasses on failure).
        angular_frequency: ``omega >= 0`` in rad/s; 0 selects the
            conductance-divider DC path.
        total_phasor: Complex amplitude of the imposed total current.

    Raises:
        SingularSystemError: an LU pivot falls below 1e-14 of the largest.
    """
    validate_network(network)
    if not angular_frequency >= 0.0:
        raise ValueError(f"angular frequency must be >= 0, got {angular_frequency}")
    phasors, voltage = _solve_component(
        network.resistances(), network.inductance, angular_frequency, complex(total_phasor)
    )
    return HarmonicSolution(
        angular_frequency=float(angular_frequency),
        total_phasor=complex(total_phasor),
        strand_phasors=phasors,
        terminal_voltage=voltage,
    )


def solve_drive(network: BundleNetwork, drive: Waveform) -> SolvedBundle:
    """Solve the bundle for a full periodic drive by superposition.

    Every Fourier component of ``drive`` is solved independently and the
    per-strand waveforms are reassembled on the same period.  A singular
    component is reported with the offending harmonic order in the error
    message.

    Raises:
        NetworkInvalidError: the bundle fails :func:`validate_network`.
        SingularSystemError: some component's system is singular.
    """
    validate_network(network)
    resistances = network.resistances()
    n = network.n_strands
    components: list[HarmonicSolution] = []

    def run(omega: float, phasor: complex, label: str) -> HarmonicSolution:
        try:
            strand_phasors, voltage = _solve_component(
                resistances, network.inductance, omega, phasor
            )
        except SingularSystemError as exc:
            raise SingularSystemError(f"{label}: {exc}") from exc
        return HarmonicSolution(omega, phasor, strand_phasors, voltage)

    components.append(run(0.0, complex(drive.dc), "dc component"))
    for harmonic in drive.harmonics:
        omega = _TWO_PI * harmonic.order / drive.period
        components.append(
            run(omega, harmonic.phasor(), f"harmonic order {harmonic.order}")
        )

    per_strand = []
    for i in range(n):
        strand_harmonics = tuple(
            Harmonic(
                harmonic.order,
                abs(component.strand_phasors[i]),
                float(np.angle(component.strand_phasors[i])),
            )
            for harmonic, component in zip(drive.harmonics, components[1:])
        )
        per_strand.append(
            Waveform(drive.period, components[0].strand_phasors[i].real, strand_harmonics)
        )
    return SolvedBundle(
        network=network,
        drive=drive,
        per_strand=tuple(per_strand),
        per_harmonic=tuple(components),
    )


def sharing_functions(
    solution: SolvedBundle, grid_size: int = 1024, zero_threshold: float = 1e-6
) -> SharingFunctions:
    """Evaluate per-strand current shares ``I_i(t) / I_total(t)`` on a grid.

    Grid points where ``|I_total|`` does not exceed ``zero_threshold``
    times the drive RMS are masked instead of divided through, since the
    share of nothing is undefined.  The mask is decided against the drive
    itself, but the division uses the reconstructed total -- the sum of
    the solved strand currents, equal to the drive up to rounding.  Close
    to a masked zero crossing the denominator is a million times smaller
    than the signal, and dividing by the reconstructed total is what keeps
    the shares summing to one at machine precision there instead of
    amplifying round-off a million-fold.

    Args:
        solution: A solved bundle.
        grid_size: Number of uniform samples per period, at least 64.
        zero_threshold: Relative zero-crossing threshold.

    Raises:
        AllPointsMaskedError: the drive is zero (or below threshold)
            everywhere on the grid.
    """
    if grid_size < _MIN_GRID_SIZE:
        raise ValueError(f"grid size must be >= {_MIN_GRID_SIZE}, got {grid_size}")
    drive = solution.drive
    times = np.arange(grid_size) * (drive.period / grid_size)
    total = sample(drive, times)
    masked = np.abs(total) <= zero_threshold * rms_parseval(drive)
    if masked.all():
        raise AllPointsMaskedError(
            "total current is below the zero threshold on the entire grid"
        )
    strand_samples = np.stack(
        [sample(strand_wave, times) for strand_wave in solution.per_strand]
    )
    reconstructed = strand_samples.sum(axis=0)
    shares = np.full((len(solution.per_strand), grid_size), np.nan)
    keep = ~masked
    shares[:, keep] = strand_samples[:, keep] / reconstructed[keep]
    return SharingFunctions(times=times, shares=shares, masked=masked)


def transient_oracle(
    network: BundleNetwork,
    drive: Waveform,
    steps_per_period: int = 2048,
    settle_periods: int = 10,
) -> TransientSolution:
    """Time-domain reference solution, independent of the phasor path.

    Integrates the reduced strand-current system with the trapezoidal rule
    from zero initial state, discards ``settle_periods`` periods of
    transient, and returns the following full period on a uniform grid of
    ``steps_per_period`` points.  The caller is responsible for choosing
    enough settling periods for the bundle's time constants.

    Raises:
        StepTooCoarseError: fewer than 512 steps per period requested.
        ReducedMatrixSingularError: the reduced inductance matrix (or the
            resulting time-step matrix) is numerically singular, e.g. for
            identical perfectly-coupled strands.
        NonPositiveResistanceError: some strand resistance is not > 0.
    """
    if steps_per_period < _MIN_STEPS_PER_PERIOD:
        raise StepTooCoarseError(
            f"need at least {_MIN_STEPS_PER_PERIOD} steps per period, "
            f"got {steps_per_period}"
        )
    if settle_periods < _MIN_SETTLE_PERIODS:
        raise ValueError(
            f"need at least {_MIN_SETTLE_PERIODS} settle periods, got {settle_periods}"
        )
    resistances = network.resistances()
    if not np.all(np.isfinite(resistances)) or np.min(resistances) <= 0.0:
        raise NonPositiveResistanceError(
            f"strand resistances must be > 0, got {resistances}"
        )
    inductance = network.inductance
    n = network.n_strands
    step = drive.period / steps_per_period
    times = np.arange(steps_per_period) * step

    if not np.any(inductance):
        # Purely resistive bundle: no dynamics, the divider holds pointwise.
        shares = _conductance_divider(resistances)
        currents = np.outer(shares, sample(drive, times))
        return TransientSolution(times=times, currents=currents)

    # Reduced system matrices, eliminating strand n-1 via conservation.
    m = n - 1
    last = inductance[m, m]
    reduced = (
        inductance[:m, :m]
        - inductance[:m, m][:, None]
        - inductance[m, :m][None, :]
        + last
    )
    coupling = inductance[:m, m] - last
    damping = np.diag(resistances[:m]) + resistances[m]
    _checked_lu(
        reduced, _REDUCED_PIVOT_RTOL, ReducedMatrixSingularError, "reduced inductance matrix"
    )

    total_steps = steps_per_period * (settle_periods + 1)
    grid = np.arange(total_steps + 1) * step
    total = sample(drive, grid)
    total_rate = sample_derivative(drive, grid)
    forcing = resistances[m] * total[None, :] - np.outer(coupling, total_rate)

    step_lu = _checked_lu(
        reduced + 0.5 * step * damping,
        _REDUCED_PIVOT_RTOL,
        ReducedMatrixSingularError,
        "time-step matrix",
    )
    propagate = lu_solve(step_lu, reduced - 0.5 * step * damping)
    inject = lu_solve(step_lu, 0.5 * step * (forcing[:, :-1] + forcing[:, 1:]))

    state = np.zeros(m)
    recorded = np.empty((m, steps_per_period))
    start = settle_periods * steps_per_period
    for j in range(total_steps):
        if j >= start:
            recorded[:, j - start] = state
        state = propagate @ state + inject[:, j]

    final_total = total[start : start + steps_per_period]
    currents = np.vstack([recorded, final_total - recorded.sum(axis=0)])
    return TransientSolution(times=times, currents=currents)


def harmonic_residual(network: BundleNetwork, component: HarmonicSolution) -> np.ndarray:
    """Per-strand voltage-law residual of a component solution, in volts.

    Returns ``(R + j*omega*L) I - V * ones`` evaluated at the component's
    phasors; near machine-zero values certify the solve.  Intended for
    diagnostics and tests.
    """
    impedance = np.diag(network.resistances()).astype(complex)
    impedance += 1j * component.angular_frequency * network.inductance
    return impedance @ component.strand_phasors - component.terminal_voltage
