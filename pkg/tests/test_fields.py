from hypothesis import given, strategies as st
import numpy as np
import pytest

from mobius_frobenius import fields
from mobius_frobenius.errors import (
    BudgetExceeded,
    DivisionByZero,
    EvenCharacteristic,
    InvalidParams,
    NonPrimeP,
    OwnerMismatch,
    ReduciblePoly,
    SpecSyntaxError,
)
from mobius_frobenius.fields import (
    arith,
    enumerate_field,
    log_tables,
    make_extension,
    make_field,
    parse_field,
    quadratic_character,
    trace_to_base,
    trace_to_prime,
)


def test_least_irreducible_moduli():
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(2, 2).modulus == (1, 1, 1)
    assert make_field(7).modulus == (0, 1)


def test_make_field_rejects_bad_input():
    with pytest.raises(NonPrimeP):
        make_field(9)
    with pytest.raises(ReduciblePoly):
        make_field(3, 2, seed_poly=[2, 0, 1])  # x² − 1
    with pytest.raises(InvalidParams):
        make_field(3, 0)


def test_parse_field_with_and_without_modulus():
    assert parse_field("5^1") == make_field(5)
    assert parse_field("3^2/[1,0,1]") == make_field(3, 2)
    assert parse_field(make_field(3, 2).spec) == make_field(3, 2)
    with pytest.raises(InvalidParams):
        parse_field("three")


def test_arith_in_f9():
    F9 = make_field(3, 2)
    t = F9.element([0, 1])
    assert (t * t).coeffs == (2, 0)  # t² = −1
    assert arith(t, t, "add").coeffs == (0, 2)
    assert arith(t, F9.one(), "div").coeffs == t.coeffs
    assert arith(t, None, "pow", k=4) == F9.one()
    assert (1 - t).coeffs == (1, 2)


def test_division_by_zero_and_owner_mismatch():
    F5, F7 = make_field(5), make_field(7)
    with pytest.raises(DivisionByZero):
        F5.one() / F5.zero()
    with pytest.raises(OwnerMismatch):
        F5.one() + F7.one()
    with pytest.raises(OwnerMismatch):
        arith(F5.one(), F7.one(), "mul")


@given(st.integers(1, 8), st.integers(1, 8))
def test_f9_multiplication_is_a_group(i, j):
    F9 = make_field(3, 2)
    x, y = F9.element(F9.decode(i)), F9.element(F9.decode(j))
    assert not (x * y).is_zero()
    assert (x * y) / y == x


def test_trace_and_character():
    F4 = make_field(2, 2)
    omega = F4.element([0, 1])
    assert trace_to_prime(omega) == 1
    assert trace_to_prime(F4.one()) == 0

    F5 = make_field(5)
    assert quadratic_character(F5.element(2)) == -1
    assert quadratic_character(F5.element(4)) == 1
    assert quadratic_character(F5.zero()) == 0

    F9 = make_field(3, 2)
    assert quadratic_character(F9.element([0, 1])) == 1
    with pytest.raises(EvenCharacteristic):
        quadratic_character(omega)


def test_tower_trace_lands_in_base():
    F3 = make_field(3)
    ext = make_extension(F3, 2)
    assert ext.order == 9
    for x in enumerate_field(ext):
        assert trace_to_base(x).owner == F3
    u = ext.element([0, 1])
    assert trace_to_base(u * u) == F3.element(trace_to_prime(u * u))


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_field(make_field(3, 3), budget=20))
    assert len(list(enumerate_field(make_field(3, 3)))) == 27


def test_log_tables_agree_with_scalar_arithmetic():
    field = make_extension(make_field(3, 2), 2)
    tables = log_tables(field)
    a = np.arange(field.order, dtype=np.int64)
    b = (a * 7 + 3) % field.order
    product = tables.mul(a, b)
    for i in range(0, field.order, 5):
        x, y = field.decode(int(a[i])), field.decode(int(b[i]))
        assert int(product[i]) == field.encode(field.mul_raw(x, y))
    nonzero = a[1:]
    assert np.all(tables.mul(nonzero, tables.inv(nonzero)) == field.encode(field.one_raw()))


def test_vectorised_character_matches_scalar():
    F = make_field(5, 2)
    tables = log_tables(F)
    values = np.arange(F.order)
    chi = tables.quadratic_character(values)
    for k in range(F.order):
        assert chi[k] == quadratic_character(F.element(F.decode(k)))


def test_parse_field_rejects_malformed_modulus():
    with pytest.raises(SpecSyntaxError):
        parse_field("3^2/[1,0,]")
    with pytest.raises(SpecSyntaxError):
        parse_field("3^2/[1,0.5,1]")


F9_CUBED = make_extension(make_field(3, 2), 3)


@given(st.integers(0, F9_CUBED.order - 1), st.integers(0, F9_CUBED.order - 1))
def test_frobenius_is_an_automorphism_of_order_n(i, j):
    K = F9_CUBED
    x, y = K.element(K.decode(i)), K.element(K.decode(j))

    def frob(z):
        return z ** K.base_order

    assert frob(x + y) == frob(x) + frob(y)
    assert frob(x * y) == frob(x) * frob(y)
    z = x
    for _ in range(K.n):
        z = frob(z)
    assert z == x


@given(st.integers(0, F9_CUBED.order - 1), st.integers(0, F9_CUBED.order - 1), st.integers(0, 8))
def test_trace_is_frobenius_fixed_and_linear(i, j, k):
    K = F9_CUBED
    x, y = K.element(K.decode(i)), K.element(K.decode(j))
    c = K.base.element(K.base.decode(k))
    t = trace_to_base(x)
    assert t ** K.base.q == t
    assert trace_to_base(x + y) == t + trace_to_base(y)
    assert trace_to_base(K.embed(c) * x) == c * t


@pytest.mark.parametrize("field", [make_field(5), make_field(3, 2), make_extension(make_field(5), 2), make_field(7, 3)])
def test_half_of_the_nonzero_elements_are_squares(field):
    chi = [quadratic_character(x) for x in enumerate_field(field)]
    assert chi.count(1) == (field.order - 1) // 2
    assert chi.count(-1) == (field.order - 1) // 2
    assert chi.count(0) == 1


@given(st.integers(1, 80), st.integers(1, 80))
def test_quadratic_character_is_multiplicative(i, j):
    K = make_extension(make_field(3), 4)
    x, y = K.element(K.decode(i)), K.element(K.decode(j))
    assert quadratic_character(x * y) == quadratic_character(x) * quadratic_character(y)


@pytest.mark.parametrize("d", [1, 2, 3, 6])
def test_subfield_is_the_frobenius_fixed_set(d):
    K = make_extension(make_field(3), 6)
    q_d = K.base_order**d
    fixed = [x for x in enumerate_field(K) if x**q_d == x]
    assert len(fixed) == 3**d
    if d == 1:
        assert {x.coeffs for x in fixed} == {K.embed(c).coeffs for c in enumerate_field(K.base)}


def test_exact_dtype_covers_large_primes():
    assert fields.exact_dtype(5, 2) is np.float64
    assert fields.exact_dtype(99_999_989, 1) is np.int64
    assert fields.exact_dtype(2**61 - 1, 4) is object


@pytest.mark.parametrize("limits", [("_FLOAT_EXACT",), ("_FLOAT_EXACT", "_INT64_EXACT")])
def test_integer_table_paths_match_float_path(monkeypatch, limits):
    field = make_field(7, 3)
    reference = fields._build_tables.__wrapped__(field)
    for name in limits:
        monkeypatch.setattr(fields, name, 0)
    rebuilt = fields._build_tables.__wrapped__(field)
    assert np.array_equal(rebuilt.exp, reference.exp)
    assert np.array_equal(rebuilt.log, reference.log)
