"""Exception types raised across the package.

Every error is a subclass of :class:`StrandSimError` so callers can catch
the whole family with one handler.  Network validation failures share the
intermediate base :class:`NetworkInvalidError`, which is what the solver
re-raises when it refuses an unvalidated bundle.
"""

from __future__ import annotations


class StrandSimError(Exception):
    """Base class for all errors raised by this package."""


# --- waveform construction and evaluation ---------------------------------


class NonPositivePeriodError(StrandSimError):
    """The period of a periodic signal must be a positive, finite number."""


class DuplicateHarmonicOrderError(StrandSimError):
    """Two harmonics of the same order were supplied for one signal."""


class NegativeAmplitudeError(StrandSimError):
    """Harmonic amplitudes must be non-negative; flip the phase instead."""


class PeriodMismatchError(StrandSimError):
    """Signals combined linearly must share the same period."""


class TooFewSamplesError(StrandSimError):
    """Quadrature of a periodic signal needs a minimum number of samples."""


# --- bundle network validation --------------------------------------------


class NetworkInvalidError(StrandSimError):
    """A bundle network failed validation and cannot be solved."""


class AsymmetricInductanceError(NetworkInvalidError):
    """The inductance matrix is not symmetric within tolerance."""


class NonPositiveSelfInductanceError(NetworkInvalidError):
    """A diagonal entry of the inductance matrix is not strictly positive."""


class NonPositiveResistanceError(NetworkInvalidError):
    """A strand has a DC resistance that is not strictly positive."""


class PlacementOutOfSlotError(StrandSimError):
    """A conductor placement lies outside the slot cross-section."""


class InvalidPermutationError(StrandSimError):
    """A transposition segment does not permute the strand indices."""


class FractionsNotNormalizedError(StrandSimError):
    """Transposition segment fractions must lie in (0, 1] and sum to one."""


# --- solving ----------------------------------------------------------------


class SingularSystemError(StrandSimError):
    """The per-harmonic linear system is numerically singular."""


class ReducedMatrixSingularError(StrandSimError):
    """The reduced inductance matrix of the transient model is singular."""


class StepTooCoarseError(StrandSimError):
    """The transient integrator was asked for too few steps per period."""


class AllPointsMaskedError(StrandSimError):
    """Every grid point sits at a zero crossing of the total current."""


# --- loss analysis ----------------------------------------------------------


class InvalidStrandCountError(StrandSimError):
    """An even split needs at least two strands."""


class InconsistentInputsError(StrandSimError):
    """A loss report and a detection verdict come from different solves."""


# --- command line interface -------------------------------------------------


class ConfigParseError(StrandSimError):
    """A simulation config file is missing, malformed, or inconsistent."""


class SolveFailedError(StrandSimError):
    """A solve requested through the command line could not be completed."""
