"""Waveform construction, evaluation, RMS identities and combination."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strandsim import (
    DuplicateHarmonicOrderError,
    NegativeAmplitudeError,
    NonPositivePeriodError,
    PeriodMismatchError,
    TooFewSamplesError,
    Waveform,
    rms_integrate,
    rms_parseval,
    sample,
    sample_derivative,
    waveform_from_harmonics,
    waveform_linear_combine,
)

# Quadrature RMS must agree with Parseval to this relative tolerance once
# the grid resolves every harmonic.
RMS_CROSSCHECK_RTOL = 1e-9
# Evaluating one period apart must reproduce values to this fraction of the
# waveform's amplitude scale.
PERIODICITY_RTOL = 1e-12


def amplitude_scale(waveform: Waveform) -> float:
    return abs(waveform.dc) + sum(h.amplitude for h in waveform.harmonics)


@st.composite
def waveforms(draw, max_harmonics=8, max_order=20):
    period = draw(
        st.floats(min_value=1e-3, max_value=100.0, allow_nan=False, allow_infinity=False)
    )
    dc = draw(st.floats(min_value=-50.0, max_value=50.0, allow_nan=False))
    orders = draw(
        st.lists(st.integers(1, max_order), max_size=max_harmonics, unique=True)
    )
    harmonics = [
        (
            order,
            draw(st.floats(min_value=0.0, max_value=100.0, allow_nan=False)),
            draw(st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)),
        )
        for order in orders
    ]
    return waveform_from_harmonics(period, dc, harmonics)


@st.composite
def waveform_pairs(draw):
    first = draw(waveforms())
    second = draw(waveforms())
    return first, Waveform(first.period, second.dc, second.harmonics)


# --- construction -----------------------------------------------------------


def test_harmonics_are_sorted_by_order():
    wave = waveform_from_harmonics(0.02, 0.0, [(7, 1.0, 0.5), (1, 2.0, 0.0), (3, 4.0, 1.0)])
    assert [h.order for h in wave.harmonics] == [1, 3, 7]
    assert wave.max_order == 7


def test_duplicate_order_rejected():
    with pytest.raises(DuplicateHarmonicOrderError):
        waveform_from_harmonics(0.02, 0.0, [(3, 1.0, 0.0), (3, 2.0, 0.0)])


def test_negative_amplitude_rejected():
    with pytest.raises(NegativeAmplitudeError):
        waveform_from_harmonics(0.02, 0.0, [(1, -1.0, 0.0)])


@pytest.mark.parametrize("period", [0.0, -0.02, float("inf"), float("nan")])
def test_non_positive_period_rejected(period):
    with pytest.raises(NonPositivePeriodError):
        waveform_from_harmonics(period, 0.0, [])


@pytest.mark.parametrize("order", [0, -1, 1.5])
def test_bad_order_rejected(order):
    with pytest.raises(ValueError):
        waveform_from_harmonics(0.02, 0.0, [(order, 1.0, 0.0)])


# --- evaluation -------------------------------------------------------------


def test_sample_cosine_known_points():
    wave = waveform_from_harmonics(0.02, 0.0, [(1, 10.0, 0.0)])
    assert sample(wave, 0.0) == pytest.approx(10.0, rel=1e-15)
    assert sample(wave, 0.01) == pytest.approx(-10.0, rel=1e-15)
    assert abs(sample(wave, 0.005)) <= 1e-12 * 10.0  # quarter period
    values = sample(wave, np.array([0.0, 0.01]))
    assert values.shape == (2,)
    assert values[0] == pytest.approx(10.0, rel=1e-15)


def test_sample_dc_only():
    wave = waveform_from_harmonics(0.02, 3.0, [])
    assert sample(wave, 0.0137) == 3.0
    assert np.all(sample(wave, np.linspace(0, 0.02, 7)) == 3.0)


def test_sample_derivative_cosine():
    amplitude, period = 10.0, 0.02
    omega = 2 * math.pi / period
    wave = waveform_from_harmonics(period, 5.0, [(1, amplitude, 0.0)])
    # d/dt [A cos(w t)] = -A w sin(w t); the DC term contributes nothing.
    assert sample_derivative(wave, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert sample_derivative(wave, period / 4) == pytest.approx(-amplitude * omega, rel=1e-12)


@given(waveforms(), st.floats(0.0, 1.0), st.integers(-5, 5))
@settings(max_examples=200, deadline=None)
def test_periodicity(wave, fraction, whole_periods):
    t = fraction * wave.period
    shifted = t + whole_periods * wave.period
    scale = max(amplitude_scale(wave), 1e-30)
    assert abs(sample(wave, t) - sample(wave, shifted)) <= PERIODICITY_RTOL * scale


# --- RMS --------------------------------------------------------------------


def test_rms_parseval_sinusoid():
    wave = waveform_from_harmonics(0.02, 0.0, [(1, 1.0, 0.3)])
    assert rms_parseval(wave) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)


def test_rms_parseval_dc_plus_harmonic():
    # dc^2 + A^2/2 = 9 + 8 = 17
    wave = waveform_from_harmonics(0.02, 3.0, [(2, 4.0, -1.1)])
    assert rms_parseval(wave) == pytest.approx(math.sqrt(17.0), rel=1e-15)


def test_rms_integrate_matches_parseval_simple():
    wave = waveform_from_harmonics(0.02, 3.0, [(2, 4.0, -1.1)])
    assert rms_integrate(wave, 4096) == pytest.approx(math.sqrt(17.0), rel=1e-12)


def test_rms_integrate_exact_for_dc():
    wave = waveform_from_harmonics(1.0, -2.5, [])
    assert rms_integrate(wave, 16) == 2.5


def test_rms_integrate_rejects_too_few_samples():
    wave = waveform_from_harmonics(0.02, 1.0, [])
    with pytest.raises(TooFewSamplesError):
        rms_integrate(wave, 15)
    assert rms_integrate(wave, 16) == 1.0


@given(waveforms())
@settings(max_examples=200, deadline=None)
def test_rms_quadrature_crosschecks_parseval(wave):
    exact = rms_parseval(wave)
    grid = rms_integrate(wave, 4096)
    assert abs(grid - exact) <= RMS_CROSSCHECK_RTOL * max(exact, 1e-30)


@given(waveforms(), st.floats(-10.0, 10.0, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_rms_scales_linearly(wave, coefficient):
    zero = Waveform(wave.period)
    scaled = waveform_linear_combine(coefficient, wave, 0.0, zero)
    assert rms_parseval(scaled) == pytest.approx(
        abs(coefficient) * rms_parseval(wave), rel=1e-12, abs=1e-300
    )


# --- linear combination -----------------------------------------------------


def test_combine_requires_equal_periods():
    a = waveform_from_harmonics(0.02, 0.0, [(1, 1.0, 0.0)])
    b = waveform_from_harmonics(0.05, 0.0, [(1, 1.0, 0.0)])
    with pytest.raises(PeriodMismatchError):
        waveform_linear_combine(1.0, a, 1.0, b)


def test_combine_cancels_to_zero():
    wave = waveform_from_harmonics(0.02, 1.5, [(1, 2.0, 0.7), (4, 1.0, -0.2)])
    diff = waveform_linear_combine(1.0, wave, -1.0, wave)
    assert diff.dc == 0.0
    assert diff.harmonics == ()  # cancelled orders vanish instead of lingering


def test_combine_merges_equal_orders():
    a = waveform_from_harmonics(0.02, 0.0, [(1, 1.0, 0.0)])
    b = waveform_from_harmonics(0.02, 0.0, [(1, 1.0, math.pi / 2)])
    merged = waveform_linear_combine(1.0, a, 1.0, b)
    # cos(x) + cos(x + pi/2) = cos(x) - sin(x) = sqrt(2) cos(x + pi/4)
    (harmonic,) = merged.harmonics
    assert harmonic.amplitude == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert harmonic.phase == pytest.approx(math.pi / 4, rel=1e-12)


def test_combine_keeps_distinct_orders():
    a = waveform_from_harmonics(0.02, 1.0, [(1, 2.0, 0.0)])
    b = waveform_from_harmonics(0.02, 2.0, [(3, 4.0, 0.5)])
    combined = waveform_linear_combine(2.0, a, 0.5, b)
    assert combined.dc == pytest.approx(3.0)
    assert [h.order for h in combined.harmonics] == [1, 3]
    assert combined.harmonics[0].amplitude == pytest.approx(4.0, rel=1e-15)
    assert combined.harmonics[1].amplitude == pytest.approx(2.0, rel=1e-15)


@given(
    waveform_pairs(),
    st.floats(-10.0, 10.0, allow_nan=False),
    st.floats(-10.0, 10.0, allow_nan=False),
    st.floats(0.0, 1.0),
)
@settings(max_examples=200, deadline=None)
def test_combine_is_pointwise_linear(pair, coeff_a, coeff_b, fraction):
    a, b = pair
    combined = waveform_linear_combine(coeff_a, a, coeff_b, b)
    t = fraction * a.period
    expected = coeff_a * sample(a, t) + coeff_b * sample(b, t)
    scale = abs(coeff_a) * amplitude_scale(a) + abs(coeff_b) * amplitude_scale(b) + 1.0
    assert abs(sample(combined, t) - expected) <= 1e-12 * scale
