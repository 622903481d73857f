import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy.exceptions import BadPrimeError, DomainMismatchError, ReconstructionError, TruncationError
from holonomy.rings import ExactMatrix, Series, TrigSeries, crt, fourier_coeff, nullspace_mod_p, trig_mode_scale, trig_mul
from holonomy.rings.fields import (
    QQ, format_rational, parse_rational, prime_field, rational_reconstruct, reduce_rational, to_mpf,
)
from holonomy.rings.poly import irreducible_factors, poly_coeffs, poly_from_coeffs, poly_ring, rational_roots

PRIMES = [27449, 32749, 2147483647]

small_ints = st.integers(min_value=-50, max_value=50)


def cos_mode(mode, coeff=1, power=0, order=0, budget=6):
    return TrigSeries.monomial(power, mode, coeff, order, budget=budget)


# -- fields -----------------------------------------------------------------------
def test_parse_and_format_rational():
    assert parse_rational("-3/6") == QQ(-1, 2)
    assert parse_rational(7) == QQ(7)
    assert format_rational(QQ(-1, 2)) == "-1/2"
    assert format_rational(QQ(12, 4)) == "3"


@pytest.mark.parametrize("p", [2, 5, 2 ** 14 - 3, 27448])
def test_prime_field_rejects_small_or_composite(p):
    with pytest.raises(BadPrimeError):
        prime_field(p)


def test_reference_primes_accepted():
    for p in PRIMES:
        assert prime_field(p).characteristic() == p


def test_reduce_rational_rejects_denominator_multiple():
    with pytest.raises(BadPrimeError):
        reduce_rational(QQ(1, 27449), 27449)


def test_crt_small():
    assert crt([(5, 7), (4, 11)]) == (26, 77)


def test_rational_reconstruct_examples():
    assert rational_reconstruct([(5, 7), (4, 11)]) == QQ(1, 3)
    assert rational_reconstruct([(6, 7), (6, 11)]) == QQ(6)
    with pytest.raises(ReconstructionError):
        rational_reconstruct([(5, 7)])


def test_rational_reconstruct_rejects_repeated_primes():
    with pytest.raises(ReconstructionError):
        rational_reconstruct([(1, 27449), (1, 27449)])


@given(st.integers(min_value=-10 ** 6, max_value=10 ** 6), st.integers(min_value=1, max_value=10 ** 4))
def test_rational_reconstruct_roundtrip(num, den):
    value = QQ(num, den)
    residues = [(reduce_rational(value, p), p) for p in PRIMES]
    assert rational_reconstruct(residues) == value


# -- series -----------------------------------------------------------------------
def test_difference_of_squares():
    a = Series.from_polynomial([1, 1], 2, "w")
    b = Series.from_polynomial([1, -1], 2, "w")
    assert list(a * b) == [1, 0, -1]


def test_square_over_prime_field(prime):
    s = Series.from_polynomial([1, 1], 2, "w").reduce(prime)
    assert [int(prime_field(prime).to_int(c)) % prime for c in s ** 2] == [1, 2, 1]


def test_quarter_power_coefficients():
    s = Series.from_polynomial([1, -1], 3).pow_rational(QQ(1, 4))
    assert list(s) == [QQ(1), QQ(-1, 4), QQ(-3, 32), QQ(-7, 128)]


def test_quarter_power_roundtrip():
    s = Series.from_polynomial([1, -1], 12).pow_rational(QQ(1, 4))
    assert s ** 4 == Series.from_polynomial([1, -1], 12)


def test_integer_power_matches_pow_rational():
    s = Series.from_polynomial([1, 1], 5, "w")
    assert s ** 2 == s.pow_rational(2)


def test_pow_rational_needs_unit_constant():
    with pytest.raises(DomainMismatchError):
        Series.from_polynomial([2, 1], 4).pow_rational(QQ(1, 2))


@given(st.lists(small_ints, min_size=2, max_size=12), st.integers(min_value=1, max_value=50))
def test_inverse_contract(tail, head):
    s = Series([head] + tail)
    product = s * s.inverse()
    assert list(product) == [QQ(1)] + [QQ(0)] * s.order


@given(st.lists(small_ints, min_size=1, max_size=10), st.lists(small_ints, min_size=1, max_size=10))
def test_product_commutes(a, b):
    sa, sb = Series(a), Series(b)
    assert sa * sb == sb * sa


def test_geometric_inverse():
    g = Series.geometric(4, 10, "w")
    assert (g * Series.from_polynomial([1, -4], 10, "w")).truncate(10) == Series.constant(1, 10, "w")


def test_truncation_is_minimum():
    a = Series.from_polynomial([1, 2, 3], 5)
    b = Series.from_polynomial([1, 1], 3)
    assert (a * b).order == 3
    assert (a + b).order == 3
    with pytest.raises(TruncationError):
        b.truncate(4)


def test_variable_mismatch():
    with pytest.raises(DomainMismatchError):
        Series.constant(1, 3, "t") + Series.constant(1, 3, "w")


def test_derivative_with_ramification():
    # t^(1/2) + t, as a series in t^(1/2)
    s = Series([0, 1, 1], ramification=2)
    d = s.derivative()
    assert d.shift == -1
    assert d.coefficient(QQ(-1, 2)) == QQ(1, 2)
    assert d.coefficient(0) == 1


def test_ramify_unramify():
    s = Series.from_polynomial([1, 2, 3], 2)
    r = s.ramify(3)
    assert r.ramification == 3
    assert r.unramify() == s


def test_integral_of_derivative():
    s = Series.from_polynomial([0, 1, QQ(1, 2), 5], 3)
    assert s.derivative().integral().agree(s)


def test_series_dict_shape():
    s = Series([QQ(1, 2), 0, -3], "w", ramification=2, shift=QQ(1, 2))
    data = s.to_dict()
    assert data["coefficients"] == ["1/2", "0", "-3"]
    assert data["shift"] == "1/2"
    assert Series.from_dict(data) == s


def test_from_dict_checks_order():
    with pytest.raises(TruncationError):
        Series.from_dict({"coefficients": ["1", "2"], "order": 3})


def test_reduce_agrees_with_reduce_rational(prime):
    s = Series([QQ(1, 3), QQ(-2, 7)]).reduce(prime)
    dom = prime_field(prime)
    assert [int(dom.to_int(c)) % prime for c in s] == [reduce_rational(QQ(1, 3), prime), reduce_rational(QQ(-2, 7), prime)]


def test_evaluate_geometric():
    value = Series.geometric(QQ(1, 2), 60).evaluate(QQ(1, 2))
    assert abs(float(value) - 4 / 3) < 1e-12


# -- trigonometric series -----------------------------------------------------------
def test_cos_squared():
    out = trig_mul(cos_mode(1), cos_mode(1))
    assert out.terms[0] == {0: QQ(1, 2), 2: QQ(1, 2)}


def test_cos_product_to_sum():
    out = trig_mul(cos_mode(1), cos_mode(2))
    assert out.terms[0] == {1: QQ(1, 2), 3: QQ(1, 2)}


def test_scalar_carry():
    a = cos_mode(1, power=1, order=2)
    out = trig_mul(a, a)
    assert out.terms[0] == {} and out.terms[1] == {}
    assert out.terms[2] == {0: QQ(1, 2), 2: QQ(1, 2)}


def test_mode_scale():
    assert trig_mode_scale(cos_mode(1), 3).terms[0] == {3: QQ(1)}
    half = TrigSeries([{0: QQ(1, 2), 2: QQ(1, 2)}], budget=6)
    assert trig_mode_scale(half, 2).terms[0] == {0: QQ(1, 2), 4: QQ(1, 2)}


@given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4))
def test_orthogonality(j, k):
    mean = fourier_coeff(trig_mul(cos_mode(j, budget=8), cos_mode(k, budget=8)), 0)
    assert mean[0] == (QQ(1, 2) if j == k else 0)


def test_fourier_basis():
    assert fourier_coeff(cos_mode(1), 1)[0] == 1


# -- linear algebra ----------------------------------------------------------------
def test_nullspace_rank_one():
    basis = ExactMatrix([[1, 2], [2, 4]]).nullspace()
    assert len(basis) == 1
    assert basis[0][0] * 1 + basis[0][1] * 2 == 0


def test_nullspace_full_rank():
    assert ExactMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).nullspace() == []


def test_nullspace_by_hand():
    assert ExactMatrix([[1, 1, 0], [0, 1, 1]]).nullspace() == [[QQ(1), QQ(-1), QQ(1)]]


def test_nullspace_mod_p_by_hand(prime):
    assert nullspace_mod_p([[1, 1, 0], [0, 1, 1]], prime) == [[1, prime - 1, 1]]


def test_nullspace_mod_large_prime():
    p = 2305843009213693951  # 2^61 - 1
    assert nullspace_mod_p([[1, 1, 0], [0, 1, 1]], p) == [[1, p - 1, 1]]


@settings(max_examples=30)
@given(st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=1, max_size=3))
def test_nullspace_vectors_annihilate(rows):
    m = ExactMatrix(rows)
    for v in m.nullspace():
        assert not any(m.matvec(v))
    assert m.rank() + len(m.nullspace()) == 4


# -- polynomials ---------------------------------------------------------------------
def test_factor_apery_head():
    R = poly_ring("t")
    head = poly_from_coeffs([0, 0, 1, -34, 1], R)
    factors = irreducible_factors(head)
    assert [(poly_coeffs(f), k) for f, k in factors] == [([0, 1], 2), ([1, -34, 1], 1)]


def test_rational_roots():
    R = poly_ring("w")
    p = poly_from_coeffs([1, -5, 4], R)  # (1 - w)(1 - 4w)
    assert rational_roots(p) == [QQ(1, 4), QQ(1)]


@pytest.mark.parametrize("value", [QQ(1, 3), "1/3"])
def test_to_mpf_keeps_exact_rationals(value):
    with mpmath.workdps(30):
        assert abs(to_mpf(value) - mpmath.mpf(1) / 3) < 1e-28


def test_to_mpf_accepts_floats():
    assert to_mpf(0.25) == mpmath.mpf("0.25")


def test_to_mpf_accepts_gmpy2_rationals():
    gmpy2 = pytest.importorskip("gmpy2")
    with mpmath.workdps(30):
        assert to_mpf(gmpy2.mpq(-5, 7)) == mpmath.mpf(-5) / 7
