"""Electrical model of a strand bundle inside a winding slot.

A bundle is ``n >= 2`` strands connected in parallel between two terminals.
Each strand has a DC resistance, and the strands couple magnetically through
a symmetric inductance matrix.  The matrix can be supplied directly or be
derived from slot geometry with :func:`slot_inductance_matrix`, which uses a
one-dimensional leakage-field model of an open rectangular slot:

* the slot has width ``w``, depth ``d`` (y measured from the slot bottom)
  and axial stack length ``l``;
* current below height ``y`` produces a transverse field above ``y`` that is
  uniform across the width, so two conductor placements at heights ``y_p``
  and ``y_q`` share the flux of the region above both of them;
* the partial mutual inductance of the pair is therefore

      m(p, q) = mu0 * l / w * (d - max(y_p, y_q)) * s_p * s_q

  with ``s = +1`` for a go conductor and ``s = -1`` for a return conductor.

A strand's path is the set of placements its turns occupy; entries of the
bundle inductance matrix sum ``m(p, q)`` over all placement pairs of the two
paths.  The kernel ``d - max(y_p, y_q)`` is positive semi-definite (it is
the covariance of a Brownian path run from the slot opening), so matrices
built this way are physically realizable.

Transposition is modelled by a piecewise schedule along the stack: on a
segment covering a fraction of the axial length the strand-to-position
assignment is permuted, and the effective matrix is the length-weighted
average of the per-segment matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import mu_0

from .errors import (
    AsymmetricInductanceError,
    FractionsNotNormalizedError,
    InvalidPermutationError,
    NonPositiveResistanceError,
    NonPositiveSelfInductanceError,
    PlacementOutOfSlotError,
)

# Relative tolerance on |L - L.T| when validating a bundle network.
_SYMMETRY_RTOL = 1e-12
# Tolerance on the sum of transposition segment fractions.
_FRACTION_TOL = 1e-12


@dataclass(frozen=True)
class Placement:
    """Position of one conductor in the slot cross-section.

    ``x`` is measured across the slot width, ``y`` up from the slot bottom,
    both in metres.  ``polarity`` is +1 for a go conductor and -1 for a
    return conductor.
    """

    x: float
    y: float
    polarity: int = 1

    def __post_init__(self) -> None:
        if self.polarity not in (1, -1):
            raise ValueError(f"polarity must be +1 or -1, got {self.polarity!r}")


@dataclass(frozen=True)
class SlotLayout:
    """Rectangular slot geometry and the placements of every strand.

    ``placements_per_strand[i]`` is the path of strand ``i``: the tuple of
    slot positions its turns occupy.  All placements must lie inside the
    slot cross-section, ``0 <= x <= slot_width`` and ``0 <= y <= slot_depth``.
    """

    slot_width: float
    slot_depth: float
    stack_length: float
    placements_per_strand: tuple[tuple[Placement, ...], ...]

    def __post_init__(self) -> None:
        for name in ("slot_width", "slot_depth", "stack_length"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValueError(f"{name} must be > 0, got {value}")
        paths = tuple(tuple(path) for path in self.placements_per_strand)
        if not paths:
            raise ValueError("layout needs at least one strand path")
        for index, path in enumerate(paths):
            if not path:
                raise ValueError(f"strand path {index} is empty")
            for placement in path:
                if not (0.0 <= placement.x <= self.slot_width) or not (
                    0.0 <= placement.y <= self.slot_depth
                ):
                    raise PlacementOutOfSlotError(
                        f"placement ({placement.x}, {placement.y}) of strand path "
                        f"{index} lies outside the {self.slot_width} x "
                        f"{self.slot_depth} slot"
                    )
        object.__setattr__(self, "placements_per_strand", paths)

    @property
    def n_strands(self) -> int:
        return len(self.placements_per_strand)


@dataclass(frozen=True)
class Strand:
    """One parallel strand: a label, its DC resistance and an optional path.

    Positivity of ``r_dc`` is an electrical requirement, not a structural
    one; it is enforced by :func:`validate_network` so that partially built
    descriptions can still be constructed and inspected.
    """

    label: str
    r_dc: float
    path: tuple[Placement, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "r_dc", float(self.r_dc))
        if self.path is not None:
            object.__setattr__(self, "path", tuple(self.path))


@dataclass(frozen=True)
class BundleNetwork:
    """A parallel bundle: the strands plus their inductance matrix in henry.

    ``inductance[i][j]`` couples strand ``i`` and strand ``j``; the diagonal
    holds self inductances.  The matrix is copied and frozen on construction.
    """

    strands: tuple[Strand, ...]
    inductance: np.ndarray

    def __post_init__(self) -> None:
        strands = tuple(self.strands)
        if len(strands) < 2:
            raise ValueError(f"a bundle needs at least 2 strands, got {len(strands)}")
        matrix = np.array(self.inductance, dtype=float)
        if matrix.shape != (len(strands), len(strands)):
            raise ValueError(
                f"inductance matrix shape {matrix.shape} does not match "
                f"{len(strands)} strands"
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "strands", strands)
        object.__setattr__(self, "inductance", matrix)

    @property
    def n_strands(self) -> int:
        return len(self.strands)

    def resistances(self) -> np.ndarray:
        """Per-strand DC resistances as a vector, in ohms."""
        return np.array([s.r_dc for s in self.strands])


@dataclass(frozen=True)
class NetworkValidationReport:
    """Outcome of :func:`validate_network` for a bundle that passed."""

    n_strands: int
    max_asymmetry: float
    min_self_inductance: float
    min_resistance: float
    min_eigenvalue: float
    warnings: tuple[str, ...] = ()


def validate_network(network: BundleNetwork) -> NetworkValidationReport:
    """Check that a bundle network is electrically meaningful.

    Hard requirements (violations raise): the inductance matrix is
    symmetric within 1e-12 relative to its largest entry, every self
    inductance is strictly positive, and every strand resistance is
    strictly positive and finite.  A negative eigenvalue of the inductance
    matrix does not block solving but is reported as a warning, since
    matrices of physical origin are positive semi-definite.

    Raises:
        AsymmetricInductanceError: ``L`` differs from its transpose.
        NonPositiveSelfInductanceError: some ``L[i][i] <= 0``.
        NonPositiveResistanceError: some ``r_dc <= 0`` or non-finite.
    """
    matrix = network.inductance
    scale = float(np.max(np.abs(matrix)))
    max_asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    if max_asymmetry > _SYMMETRY_RTOL * scale:
        raise AsymmetricInductanceError(
            f"max |L - L.T| = {max_asymmetry:.3e} exceeds "
            f"{_SYMMETRY_RTOL:g} * {scale:.3e}"
        )
    diagonal = np.diag(matrix)
    if np.min(diagonal) <= 0.0:
        index = int(np.argmin(diagonal))
        raise NonPositiveSelfInductanceError(
            f"self inductance of strand {index} is {diagonal[index]:.3e} H"
        )
    resistances = network.resistances()
    if not np.all(np.isfinite(resistances)) or np.min(resistances) <= 0.0:
        index = int(np.argmin(resistances))
        raise NonPositiveResistanceError(
            f"strand {network.strands[index].label!r} has r_dc = "
            f"{resistances[index]} ohm"
        )
    eigenvalues = np.linalg.eigvalsh(0.5 * (matrix + matrix.T))
    min_eigenvalue = float(eigenvalues[0])
    warnings = ()
    if min_eigenvalue < -_SYMMETRY_RTOL * scale:
        warnings = (
            f"inductance matrix has negative eigenvalue {min_eigenvalue:.3e} H; "
            "matrices of physical origin are positive semi-definite",
        )
    return NetworkValidationReport(
        n_strands=network.n_strands,
        max_asymmetry=max_asymmetry,
        min_self_inductance=float(np.min(diagonal)),
        min_resistance=float(np.min(resistances)),
        min_eigenvalue=min_eigenvalue,
        warnings=warnings,
    )


def slot_inductance_matrix(layout: SlotLayout, mutual_offset: float = 0.0) -> np.ndarray:
    """Bundle inductance matrix from slot geometry.

    Entry ``(i, j)`` sums the partial mutual inductance
    ``mu0 * l / w * (slot_depth - max(y_p, y_q)) * s_p * s_q`` over all
    placement pairs ``p`` in path ``i`` and ``q`` in path ``j``.
    ``mutual_offset`` adds a uniform inductance to every entry, modelling a
    shared flux path (such as an end-winding loop) that couples all strands
    alike; it shifts the matrix by a rank-one term without changing current
    sharing.

    The result is exactly symmetric and, for ``mutual_offset >= 0``,
    positive semi-definite up to rounding.
    """
    heights = np.concatenate(
        [[p.y for p in path] for path in layout.placements_per_strand]
    )
    polarity = np.concatenate(
        [[p.polarity for p in path] for path in layout.placements_per_strand]
    )
    offsets = np.cumsum([0] + [len(path) for path in layout.placements_per_strand[:-1]])
    unit = mu_0 * layout.stack_length / layout.slot_width
    pairwise = (
        unit
        * (layout.slot_depth - np.maximum.outer(heights, heights))
        * np.outer(polarity, polarity)
    )
    # Collapse placement pairs to strand pairs, then mirror the upper
    # triangle so the result is symmetric to the last bit.
    per_strand = np.add.reduceat(np.add.reduceat(pairwise, offsets, axis=0), offsets, axis=1)
    matrix = np.triu(per_strand) + np.triu(per_strand, 1).T + mutual_offset
    return matrix


@dataclass(frozen=True)
class TranspositionSchedule:
    """Piecewise strand-to-position assignment along the stack length.

    Each segment is ``(fraction_of_length, permutation)``: over that
    fraction of the axial length, slot position ``permutation[i]`` is
    occupied by strand ``i``.  Permutations are 0-based.  Fractions must
    each lie in (0, 1] and sum to one within 1e-12.
    """

    segments: tuple[tuple[float, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        segments = tuple(
            (float(fraction), tuple(int(p) for p in permutation))
            for fraction, permutation in self.segments
        )
        if not segments:
            raise ValueError("schedule needs at least one segment")
        n = len(segments[0][1])
        for fraction, permutation in segments:
            if not 0.0 < fraction <= 1.0:
                raise FractionsNotNormalizedError(
                    f"segment fraction {fraction} is outside (0, 1]"
                )
            if len(permutation) != n or sorted(permutation) != list(range(n)):
                raise InvalidPermutationError(
                    f"{permutation} is not a permutation of 0..{n - 1}"
                )
        total = sum(fraction for fraction, _ in segments)
        if abs(total - 1.0) > _FRACTION_TOL:
            raise FractionsNotNormalizedError(
                f"segment fractions sum to {total!r}, expected 1 within {_FRACTION_TOL:g}"
            )
        object.__setattr__(self, "segments", segments)

    @property
    def n_strands(self) -> int:
        return len(self.segments[0][1])

    @classmethod
    def identity(cls, n: int) -> "TranspositionSchedule":
        """Single segment leaving every strand in its home position."""
        return cls(((1.0, tuple(range(n))),))

    @classmethod
    def full_cyclic(cls, n: int) -> "TranspositionSchedule":
        """Uniform schedule rotating every strand through every position.

        ``n`` equal segments apply the cyclic shifts ``i -> i + k (mod n)``
        for ``k = 0 .. n-1``, so each strand occupies each slot position
        over exactly ``1/n`` of the stack length.
        """
        return cls(
            tuple(
                (1.0 / n, tuple((i + k) % n for i in range(n)))
                for k in range(n)
            )
        )


def apply_transposition(
    network: BundleNetwork,
    layout: SlotLayout,
    schedule: TranspositionSchedule,
    mutual_offset: float = 0.0,
) -> BundleNetwork:
    """Effective bundle network under a transposition schedule.

    For each segment the layout's canonical position set is re-assigned by
    the segment's permutation (strand ``i`` takes the path of layout slot
    ``permutation[i]``), and the effective inductance matrix is the
    fraction-weighted sum of the per-segment matrices.  Resistances are
    unchanged.  ``mutual_offset`` is forwarded to each per-segment matrix;
    being uniform, it is preserved exactly by the averaging.
    """
    n = network.n_strands
    if layout.n_strands != n or schedule.n_strands != n:
        raise ValueError(
            f"strand counts disagree: network {n}, layout {layout.n_strands}, "
            f"schedule {schedule.n_strands}"
        )
    effective = np.zeros((n, n))
    for fraction, permutation in schedule.segments:
        segment_layout = SlotLayout(
            layout.slot_width,
            layout.slot_depth,
            layout.stack_length,
            tuple(layout.placements_per_strand[permutation[i]] for i in range(n)),
        )
        effective += fraction * slot_inductance_matrix(segment_layout, mutual_offset)
    return BundleNetwork(network.strands, effective)
