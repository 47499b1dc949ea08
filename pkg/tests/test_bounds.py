import math

import mpmath
from mpmath import mp, mpf
import pytest

from mobius_frobenius.bounds import (
    KappaParams,
    bound_profile,
    bound_rhs,
    bw_constant,
    bw_constant_two,
    dirichlet_parameter,
    frobenius_kappa_params,
    gamma,
    gamma_from_kappa,
    kappa_alpha,
    kappa_frobenius,
    log_gap_lower,
)
from mobius_frobenius.errors import InvalidParams


def _close(a, b, bits=120):
    with mp.workprec(bits + 8):
        return abs(a - b) <= abs(b) * mpf(2) ** -bits


@pytest.mark.parametrize("d", [1, 2, 4, 8, 12])
def test_two_forms_of_c2(d):
    assert _close(bw_constant(2, d), bw_constant_two(d))


def test_c2_prefactor():
    assert float(bw_constant_two(1)) == pytest.approx(905969664 * math.log(4))


@pytest.mark.parametrize("q, g", [(5, 1), (3, 2), (49, 3)])
def test_gamma_is_four_kappa_plus_four(q, g):
    assert _close(gamma(q, g), gamma_from_kappa(q, g))
    assert _close(kappa_alpha(frobenius_kappa_params(q, g)), kappa_frobenius(q, g))


def test_kappa_value_for_f5():
    expected = 2**31 * 27 * math.pi * (math.pi + math.log(5)) * math.log(16)
    assert float(kappa_frobenius(5, 1)) == pytest.approx(expected)


def test_kappa_params():
    params = KappaParams.from_height(2, 0.1, 1.25)
    assert float(params.alpha) == 0.25
    assert float(params.A1) == pytest.approx(math.pi / 4)
    with pytest.raises(InvalidParams):
        KappaParams(1, mpf(1), mpf(0))
    with pytest.raises(InvalidParams):
        KappaParams(4, mpf("0.1"), mpf(0))


def test_bound_rhs_values():
    N = 10**6
    log_n = math.log(N)
    assert float(bound_rhs("davenport", c=2, B=3, N=N)) == pytest.approx(2 * N / log_n**3)
    assert float(bound_rhs("theorem1", c=1, B=1, N=N, slack=0.5)) == pytest.approx(0.5 * N / log_n)
    assert float(bound_rhs("mu_alpha", kappa=1, N=N)) == pytest.approx(N ** (1 - 1 / 8) * log_n**4)
    mobexp = (1 * N**0.25 + N**0.5 + N**0.4) * N**0.5 * log_n**4
    assert float(bound_rhs("mobexp2", s=1, N=N)) == pytest.approx(mobexp)
    g = gamma(5, 1)
    with mp.workprec(128):
        expected = mpf(N) ** (1 - 1 / g) * mpmath.log(N) ** 4
    assert _close(bound_rhs("theorem2", q=5, g=1, N=N), expected, 100)


def test_gap_lower_and_log_form_agree():
    direct = bound_rhs("gap_lower", s=3, kappa=1.5)
    with mp.workprec(128):
        assert _close(mpmath.log(direct), log_gap_lower(3, 1.5), 100)


def test_bound_rhs_rejects_bad_input():
    with pytest.raises(InvalidParams):
        bound_rhs("theorem9", N=100)
    with pytest.raises(InvalidParams):
        bound_rhs("davenport", N=100, B=1)
    with pytest.raises(InvalidParams):
        bound_rhs("mu_alpha", N=1, kappa=1)
    with pytest.raises(InvalidParams):
        bound_rhs("theorem2", q=5, g=1, N=100, slack=-1)


def test_dirichlet_parameter():
    assert dirichlet_parameter(1, 100) == 10
    assert dirichlet_parameter(kappa_frobenius(5, 1), 10**6) == 10**6
    with pytest.raises(InvalidParams):
        dirichlet_parameter(0, 100)


def test_profile_json():
    data = bound_profile(5, 1).to_json(20)
    assert set(data) == {"q", "g", "kappa", "gamma"}
    assert float(data["gamma"]) == pytest.approx(4 * float(data["kappa"]) + 4)
