import dataclasses
from fractions import Fraction
import math

from hypothesis import given, strategies as st
import mpmath
from mpmath import mp, mpf
import numpy as np
import pytest

from mobius_frobenius.errors import BudgetExceeded, InvalidParams, PrecisionExhausted
from mobius_frobenius.curves import parse_curve, trace_sequence
from mobius_frobenius.mobius import (
    davenport_profile,
    mobius_exponential_sum,
    mobius_frobenius_sum,
    mobius_sum_mp,
    sieve,
)
from mobius_frobenius.precision import Ball
from mobius_frobenius.zeta import certified_spectrum, reconstruct_l_polynomial


@pytest.fixture(scope="module")
def table():
    return sieve(300_000)


def test_first_values(table):
    assert [table.mu(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert table.mu(30) == -1
    assert table.mu(2 * 3 * 5 * 7 * 11) == -1
    assert table.mu(49 * 3) == 0


@pytest.mark.parametrize("N, expected", [(10, -1), (100, 1), (1000, 2), (10_000, -23)])
def test_mertens(table, N, expected):
    assert table.mertens_at(N) == expected


@pytest.mark.slow
def test_mertens_million():
    assert sieve(10**6).mertens_at(10**6) == 212


def test_segmented_sieve_matches_single_segment(monkeypatch):
    from mobius_frobenius import mobius

    reference = sieve(5000).values
    monkeypatch.setattr(mobius, "SEGMENT", 777)
    assert np.array_equal(sieve(5000).values, reference)


def test_sieve_limits():
    with pytest.raises(BudgetExceeded):
        sieve(1000, budget=999)
    with pytest.raises(InvalidParams):
        sieve(0)
    small = sieve(20, with_mertens=False)
    assert small.mertens is None
    assert small.mertens_at(10) == -1


@pytest.mark.parametrize("N", [10, 1000, 250_000])
def test_rational_angles_are_exact(table, N):
    at_zero = mobius_exponential_sum(table, Fraction(0), N)
    assert at_zero.value == complex(table.mertens_at(N), 0)
    at_half = mobius_exponential_sum(table, Fraction(1, 2), N)
    signs = np.where(np.arange(N + 1) % 2 == 0, 1, -1)
    expected = int((table.values[: N + 1].astype(np.int64) * signs).sum())
    assert at_half.value.real == expected
    assert abs(at_half.value.imag) <= at_half.error_bound


@given(st.fractions(min_value=0, max_value=1, max_denominator=10**6))
def test_sum_matches_mpmath_reference(table, alpha):
    N = 400
    result = mobius_exponential_sum(table, alpha, N)
    reference = mobius_sum_mp(table, alpha, N, bits=120)
    assert abs(complex(reference) - result.value) <= result.error_bound + 1e-15


def test_mpmath_reference_ignores_ambient_precision(table):
    alpha = Fraction(1, 3)
    expected = mobius_exponential_sum(table, alpha, 2000)
    with mp.workprec(20):
        reference = mobius_sum_mp(table, alpha, 2000, bits=128)
    assert abs(complex(reference) - expected.value) <= expected.error_bound + 1e-13


def test_error_bound_scales_with_N(table):
    alpha = Ball(mpf(2) ** 0.5 - 1, mpf(0))
    result = mobius_exponential_sum(table, alpha, 100_000)
    assert result.error_bound < 1e-15 * 100_000
    assert abs(result.value) < 100_000


def test_reverse_and_threaded_sums_agree(table):
    alpha = Fraction(355, 113 * 7)
    forward = mobius_exponential_sum(table, alpha, 250_000)
    backward = mobius_exponential_sum(table, alpha, 250_000, reverse=True)
    threaded = mobius_exponential_sum(table, alpha, 250_000, workers=4)
    assert threaded.value == forward.value
    assert abs(forward.value - backward.value) <= forward.error_bound + backward.error_bound


def test_angle_uncertainty_is_checked(table):
    with pytest.raises(PrecisionExhausted):
        mobius_exponential_sum(table, Ball(mpf("0.3"), mpf("1e-10")), 1000)
    with pytest.raises(InvalidParams):
        mobius_exponential_sum(table, Fraction(1, 3), 300_001)


def _normalised_traces(lpoly, N):
    sums = lpoly.power_sums(N)
    with mp.workprec(200):
        return [mpf(s) / (2 * lpoly.g * mpf(lpoly.q) ** (mpf(n) / 2)) for n, s in enumerate(sums, start=1)]


def test_frobenius_sum_matches_exact_traces(table, lpoly_f5, spectrum_f5):
    N = 300
    traces = _normalised_traces(lpoly_f5, N)
    with mp.workprec(200):
        exact = mpmath.fsum(table.mu(n) * traces[n - 1] for n in range(1, N + 1))
    for method in ("direct", "swapped"):
        result = mobius_frobenius_sum(table, spectrum_f5, N, method)
        assert abs(result.value - float(exact)) <= result.error_bound + 1e-15
        assert result.bound_rhs is not None and result.bound_rhs > 0


@pytest.mark.parametrize("N", [10_000, 250_000])
def test_direct_and_swapped_agree(table, spectrum_f5, N):
    direct = mobius_frobenius_sum(table, spectrum_f5, N, "direct")
    swapped = mobius_frobenius_sum(table, spectrum_f5, N, "swapped")
    assert abs(direct.value - swapped.value) <= direct.error_bound + swapped.error_bound
    assert direct.error_bound <= 1e-15 * N


def test_unknown_method(table, spectrum_f5):
    with pytest.raises(InvalidParams):
        mobius_frobenius_sum(table, spectrum_f5, 100, "sideways")


def test_davenport_profile(table, spectrum_f5):
    frame = davenport_profile(table, spectrum_f5, [100, 1000], [1.0, 2.0], c=1.0)
    assert list(frame.columns) == ["N", "B", "value", "error_bound", "normalised"]
    assert len(frame) == 4
    for row in frame.itertuples():
        assert row.normalised == pytest.approx(abs(row.value) * math.log(row.N) ** row.B / row.N)
    with pytest.raises(InvalidParams):
        davenport_profile(table, spectrum_f5, [1], [1.0])
    with pytest.raises(InvalidParams):
        davenport_profile(table, spectrum_f5, [100], [1.0], c=0)


def test_swapped_sum_rejects_an_unexplained_imaginary_residue(monkeypatch, table, spectrum_f5):
    from mobius_frobenius import mobius

    honest = mobius.mobius_exponential_sum

    def skewed(*args, **kwargs):
        result = honest(*args, **kwargs)
        return dataclasses.replace(result, value=result.value + 1e-3j)

    monkeypatch.setattr(mobius, "mobius_exponential_sum", skewed)
    with pytest.raises(PrecisionExhausted):
        mobius_frobenius_sum(table, spectrum_f5, 1000, "swapped")


@pytest.fixture(scope="module")
def million():
    return sieve(10**6)


def _spectrum(text):
    spec = parse_curve(text)
    records = trace_sequence(spec, 2 * spec.genus)
    return certified_spectrum(reconstruct_l_polynomial(records, spec.q, spec.genus), 128)


@pytest.mark.slow
def test_direct_and_swapped_agree_at_one_million(million, spectrum_f5):
    N = 10**6
    direct = mobius_frobenius_sum(million, spectrum_f5, N, "direct")
    swapped = mobius_frobenius_sum(million, spectrum_f5, N, "swapped")
    assert abs(direct.value - swapped.value) <= direct.error_bound + swapped.error_bound
    assert direct.error_bound + swapped.error_bound < 1e-15 * N


@pytest.mark.slow
@pytest.mark.parametrize(
    "text",
    ["elliptic 5^1 a=[1] b=[0]", "elliptic 7^1 a=[3] b=[2]", "hyperelliptic 3^1 f=[1,2,0,0,0,1]"],
)
def test_sum_sits_far_below_the_bound_at_one_million(million, text):
    result = mobius_frobenius_sum(million, _spectrum(text), 10**6, "direct")
    assert result.bound_rhs is not None
    assert abs(result.value) <= result.bound_rhs
    assert result.ratio < 1e-2
