import os

import hypothesis
import numpy as np
import pytest

from mobius_frobenius.curves import elliptic, trace_sequence
from mobius_frobenius.fields import enumerate_field, make_extension, make_field, poly_eval, quadratic_character
from mobius_frobenius.zeta import certified_spectrum, reconstruct_l_polynomial

hypothesis.settings.register_profile("fast", max_examples=5)
hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))

np.seterr(all="warn")


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    for name in list(os.environ):
        if name.startswith("MF_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


def _naive_count(spec, n):
    """Affine points by double enumeration, plus the points at infinity."""
    ext = make_extension(spec.base, n)
    f = [ext.embed_raw(c.coeffs) for c in spec.polynomial()]
    squares = {}
    for y in enumerate_field(ext):
        key = ext.mul_raw(y.coeffs, y.coeffs)
        squares[key] = squares.get(key, 0) + 1
    affine = sum(squares.get(poly_eval(ext, f, x.coeffs), 0) for x in enumerate_field(ext))
    if (len(f) - 1) % 2:
        return affine + 1
    return affine + 1 + quadratic_character(ext.embed(spec.polynomial()[-1]))


@pytest.fixture(scope="session")
def naive_count():
    return _naive_count


@pytest.fixture(scope="session")
def f5():
    return make_field(5)


@pytest.fixture(scope="session")
def curve_f5(f5):
    """y² = x³ + x over F_5: P(T) = 1 − 2T + 5T²."""
    return elliptic(f5, 1, 0)


@pytest.fixture(scope="session")
def lpoly_f5(curve_f5):
    return reconstruct_l_polynomial(trace_sequence(curve_f5, 2), 5, 1)


@pytest.fixture(scope="session")
def spectrum_f5(lpoly_f5):
    return certified_spectrum(lpoly_f5, 128)
