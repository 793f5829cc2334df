"""Simulator and loss analyzer for bundles of parallel winding strands.

Strands connected in parallel share the total current unevenly once
magnetic coupling enters the picture; the resulting circulating currents
raise conduction losses above the even-split baseline.  This package
models the bundle (directly or from slot geometry), solves the per-strand
currents for a periodic drive, accounts the losses, and machine-checks
the equivalence "circulating currents occurred if and only if the losses
strictly exceed the even-split baseline".
"""

from .config import ScheduleSpec, SimulationConfig, load_config
from .errors import (
    AllPointsMaskedError,
    AsymmetricInductanceError,
    ConfigParseError,
    DuplicateHarmonicOrderError,
    FractionsNotNormalizedError,
    InconsistentInputsError,
    InvalidPermutationError,
    InvalidStrandCountError,
    NegativeAmplitudeError,
    NetworkInvalidError,
    NonPositivePeriodError,
    NonPositiveResistanceError,
    NonPositiveSelfInductanceError,
    PeriodMismatchError,
    PlacementOutOfSlotError,
    ReducedMatrixSingularError,
    SingularSystemError,
    SolveFailedError,
    StepTooCoarseError,
    StrandSimError,
    TooFewSamplesError,
)
from .losses import (
    CauchySchwarzWitness,
    DetectionVerdict,
    LossReport,
    PropertyVerdict,
    baseline_strand_current,
    cauchy_schwarz_witness,
    check_fundamental_property,
    compute_losses,
    detect_circulating,
)
from .network import (
    BundleNetwork,
    NetworkValidationReport,
    Placement,
    SlotLayout,
    Strand,
    TranspositionSchedule,
    apply_transposition,
    slot_inductance_matrix,
    validate_network,
)
from .solver import (
    HarmonicSolution,
    SharingFunctions,
    SolvedBundle,
    TransientSolution,
    harmonic_residual,
    sharing_functions,
    solve_drive,
    solve_harmonic,
    transient_oracle,
)
from .waveform import (
    Harmonic,
    Waveform,
    rms_integrate,
    rms_parseval,
    sample,
    sample_derivative,
    waveform_from_harmonics,
    waveform_linear_combine,
)

__version__ = "0.1.0"

__all__ = [
    "AllPointsMaskedError",
    "AsymmetricInductanceError",
    "BundleNetwork",
    "CauchySchwarzWitness",
    "ConfigParseError",
    "DetectionVerdict",
    "DuplicateHarmonicOrderError",
    "FractionsNotNormalizedError",
    "Harmonic",
    "HarmonicSolution",
    "InconsistentInputsError",
    "InvalidPermutationError",
    "InvalidStrandCountError",
    "LossReport",
    "NegativeAmplitudeError",
    "NetworkInvalidError",
    "NetworkValidationReport",
    "NonPositivePeriodError",
    "NonPositiveResistanceError",
    "NonPositiveSelfInductanceError",
    "PeriodMismatchError",
    "Placement",
    "PlacementOutOfSlotError",
    "PropertyVerdict",
    "ReducedMatrixSingularError",
    "ScheduleSpec",
    "SharingFunctions",
    "SimulationConfig",
    "SingularSystemError",
    "SlotLayout",
    "SolveFailedError",
    "SolvedBundle",
    "StepTooCoarseError",
    "Strand",
    "StrandSimError",
    "TooFewSamplesError",
    "TransientSolution",
    "TranspositionSchedule",
    "Waveform",
    "apply_transposition",
    "baseline_strand_current",
    "cauchy_schwarz_witness",
    "check_fundamental_property",
    "compute_losses",
    "detect_circulating",
    "harmonic_residual",
    "load_config",
    "rms_integrate",
    "rms_parseval",
    "sample",
    "sample_derivative",
    "sharing_functions",
    "slot_inductance_matrix",
    "solve_drive",
    "solve_harmonic",
    "transient_oracle",
    "validate_network",
    "waveform_from_harmonics",
    "waveform_linear_combine",
]
