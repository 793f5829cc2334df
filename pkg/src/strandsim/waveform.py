"""Periodic drive and strand currents as finite Fourier series.

A signal is stored as a DC term plus a finite set of integer-order cosine
harmonics over a common period ``T``:

    x(t) = dc + sum_h A_h * cos(2*pi*k_h*t/T + phi_h)

The cosine-with-phase convention is fixed package-wide: the harmonic of
order ``k`` with complex phasor ``c = A*exp(1j*phi)`` contributes
``Re(c * exp(1j*2*pi*k*t/T))`` to the signal.  Keeping signals in closed
form makes the RMS value exact through Parseval's identity, while
uniform-grid quadrature of the defining integral remains available as an
independent cross-check.

Waveforms are immutable and every function in this module is pure, so
values can be shared freely between concurrent tasks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    DuplicateHarmonicOrderError,
    NegativeAmplitudeError,
    NonPositivePeriodError,
    PeriodMismatchError,
    TooFewSamplesError,
)

_TWO_PI = 2.0 * math.pi
_SQRT2 = math.sqrt(2.0)

# A combined harmonic whose phasor magnitude falls below this fraction of the
# operand amplitude scale is a numerical residue of cancellation, not signal,
# and is dropped from the result.
_CANCELLATION_EPS = 1e-15

_MIN_QUADRATURE_SAMPLES = 16


class Harmonic(NamedTuple):
    """One cosine component ``amplitude * cos(2*pi*order*t/period + phase)``."""

    order: int
    amplitude: float
    phase: float

    def phasor(self) -> complex:
        """Complex amplitude ``amplitude * exp(1j*phase)`` of this component."""
        return self.amplitude * cmath.exp(1j * self.phase)


@dataclass(frozen=True)
class Waveform:
    """Periodic signal ``dc + sum of cosine harmonics`` over ``period`` seconds.

    Harmonic orders are positive integers, unique within one waveform, and
    amplitudes are non-negative.  Construction canonicalizes the harmonic
    tuple into ascending order so equal signals compare equal.
    """

    period: float
    dc: float = 0.0
    harmonics: tuple[Harmonic, ...] = ()

    def __post_init__(self) -> None:
        if not (isinstance(self.period, (int, float)) and math.isfinite(self.period)):
            raise NonPositivePeriodError(f"period must be finite, got {self.period!r}")
        if self.period <= 0.0:
            raise NonPositivePeriodError(f"period must be > 0, got {self.period}")
        canonical = []
        for order, amplitude, phase in self.harmonics:
            if int(order) != order or order < 1:
                raise ValueError(f"harmonic order must be a positive integer, got {order!r}")
            if amplitude < 0.0:
                raise NegativeAmplitudeError(
                    f"harmonic {int(order)} has negative amplitude {amplitude}"
                )
            canonical.append(Harmonic(int(order), float(amplitude), float(phase)))
        canonical.sort(key=lambda h: h.order)
        for left, right in zip(canonical, canonical[1:]):
            if left.order == right.order:
                raise DuplicateHarmonicOrderError(f"harmonic order {left.order} appears twice")
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "dc", float(self.dc))
        object.__setattr__(self, "harmonics", tuple(canonical))

    @property
    def max_order(self) -> int:
        """Highest harmonic order present, or 0 for a pure DC signal."""
        return self.harmonics[-1].order if self.harmonics else 0

    def amplitude_scale(self) -> float:
        """|dc| plus the sum of harmonic amplitudes; bounds ``|x(t)|``."""
        return abs(self.dc) + sum(h.amplitude for h in self.harmonics)


def waveform_from_harmonics(
    period: float,
    dc: float = 0.0,
    harmonics: Iterable[tuple[int, float, float] | Harmonic] = (),
) -> Waveform:
    """Build a periodic signal from its DC term and cosine harmonics.

    Args:
        period: Repetition period in seconds, strictly positive.
        dc: Constant offset.
        harmonics: Iterable of ``(order, amplitude, phase)`` triples with
            integer orders >= 1, amplitudes >= 0 and phases in radians.

    Returns:
        The canonicalized immutable waveform.

    Raises:
        NonPositivePeriodError: ``period`` is not a positive finite number.
        DuplicateHarmonicOrderError: two harmonics share an order.
        NegativeAmplitudeError: an amplitude is negative.
    """
    return Waveform(period, dc, tuple(Harmonic(*h) for h in harmonics))


def sample(waveform: Waveform, t: float | np.ndarray) -> float | np.ndarray:
    """Evaluate the signal at time ``t`` (scalar or array), in signal units."""
    arr = np.asarray(t, dtype=float)
    out = np.full(arr.shape, waveform.dc, dtype=float)
    for order, amplitude, phase in waveform.harmonics:
        out += amplitude * np.cos((_TWO_PI * order / waveform.period) * arr + phase)
    return float(out) if arr.ndim == 0 else out


def sample_derivative(waveform: Waveform, t: float | np.ndarray) -> float | np.ndarray:
    """Evaluate the exact time derivative ``dx/dt`` at ``t``.

    Differentiating the finite series term by term is exact; the transient
    integrator relies on this instead of finite-differencing the drive.
    """
    arr = np.asarray(t, dtype=float)
    out = np.zeros(arr.shape, dtype=float)
    for order, amplitude, phase in waveform.harmonics:
        omega = _TWO_PI * order / waveform.period
        out -= amplitude * omega * np.sin(omega * arr + phase)
    return float(out) if arr.ndim == 0 else out


def rms_parseval(waveform: Waveform) -> float:
    """RMS value from Parseval's identity: ``sqrt(dc^2 + sum A_h^2 / 2)``.

    Exact for a finite series because distinct-order cosines are orthogonal
    over one period and each contributes mean square ``A^2/2``.  Evaluated
    through ``hypot`` so that tiny signals do not underflow when squared.
    """
    return math.hypot(
        waveform.dc, *(h.amplitude / _SQRT2 for h in waveform.harmonics)
    )


def rms_integrate(waveform: Waveform, n_samples: int) -> float:
    """RMS value by uniform-grid quadrature of ``(1/T) * integral of x^2``.

    The equal-weight rule on ``t_k = k*T/n`` coincides with the trapezoidal
    rule for a periodic integrand and is exact (to rounding) as soon as
    ``n_samples`` exceeds twice the highest harmonic order, so this serves
    as an independent check on :func:`rms_parseval`.

    Raises:
        TooFewSamplesError: fewer than 16 samples were requested.
    """
    if n_samples < _MIN_QUADRATURE_SAMPLES:
        raise TooFewSamplesError(
            f"need at least {_MIN_QUADRATURE_SAMPLES} samples, got {n_samples}"
        )
    times = np.arange(n_samples) * (waveform.period / n_samples)
    values = sample(waveform, times)
    peak = float(np.max(np.abs(values)))
    if peak == 0.0:
        return 0.0
    scaled = values / peak  # factor out the magnitude so squaring cannot underflow
    return peak * float(np.sqrt(np.mean(scaled * scaled)))


def waveform_linear_combine(
    coeff_a: float, a: Waveform, coeff_b: float, b: Waveform
) -> Waveform:
    """Return the signal ``coeff_a * a + coeff_b * b``.

    Harmonics of equal order are merged by adding their complex phasors.
    A merged component whose magnitude is smaller than 1e-15 of the combined
    amplitude scale has cancelled; it is dropped rather than kept as noise.

    Raises:
        PeriodMismatchError: the operands have different periods.
    """
    if a.period != b.period:
        raise PeriodMismatchError(f"periods differ: {a.period} vs {b.period}")
    table: dict[int, complex] = {}
    for harmonic in a.harmonics:
        table[harmonic.order] = coeff_a * harmonic.phasor()
    for harmonic in b.harmonics:
        table[harmonic.order] = table.get(harmonic.order, 0j) + coeff_b * harmonic.phasor()
    scale = abs(coeff_a) * max((h.amplitude for h in a.harmonics), default=0.0) + abs(
        coeff_b
    ) * max((h.amplitude for h in b.harmonics), default=0.0)
    merged = tuple(
        Harmonic(order, abs(phasor), cmath.phase(phasor))
        for order, phasor in sorted(table.items())
        if abs(phasor) > _CANCELLATION_EPS * scale
    )
    return Waveform(a.period, coeff_a * a.dc + coeff_b * b.dc, merged)
