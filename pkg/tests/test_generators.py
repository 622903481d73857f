import pytest
from pydantic import ValidationError

from holonomy.exceptions import BadPrimeError, DomainMismatchError, TruncationError
from holonomy.generators import (
    Branch, FormFactorRequest, elliptic_EK, f1, f2_oracle, formfactor, generate, get_generator, hypergeometric,
    lambda_correlation, phiD, phiH, phiH3_bruteforce, phiH_fourier, phiH_lattice, xy_of_phi,
)
from holonomy.generators.cache import SeriesCache, cache_key
from holonomy.generators.formfactors import (
    RECURSION_CACHE_SIZE, _cached_recursion, _recursion, leading_coefficient, leading_exponent, saturating_order,
)
from holonomy.generators.integrals import phiD_quadrature
from holonomy.rings.fields import QQ, prime_field
from holonomy.rings.series import Series


def t_series(order):
    return Series.from_polynomial([0, 1], order)


def test_hypergeometric_K_and_E():
    E, K = elliptic_EK(3)
    assert list(K) == [QQ(1), QQ(1, 4), QQ(9, 64), QQ(25, 256)]
    assert list(E) == [QQ(1), QQ(-1, 4), QQ(-3, 64), QQ(-5, 256)]
    assert list(K - E)[:3] == [0, QQ(1, 2), QQ(3, 16)]


def test_hypergeometric_collapses_to_geometric():
    assert hypergeometric([1, QQ(3, 2)], [QQ(3, 2)], "t", 8) == Series.geometric(1, 8)


def test_hypergeometric_rejects_pole():
    with pytest.raises(DomainMismatchError):
        hypergeometric([1], [-2], "t", 5)


def test_hypergeometric_mod_p(prime):
    assert hypergeometric(["1/2", "1/2"], [1], "t", 10, prime) == elliptic_EK(10)[1].reduce(prime)


def test_xy_of_phi_low_orders():
    x, y = xy_of_phi(3)
    assert x.terms[0] == {} and y.terms[0] == {0: QQ(1)}
    assert x.terms[1] == {0: QQ(1)}
    assert x.terms[2] == {1: QQ(2)}
    assert y.terms[1] == {1: QQ(2)}


def test_phiH_closed_forms():
    assert list(phiH(1, 3)) == [1, 4, 16, 64]
    assert list(phiH(2, 4)) == [QQ(1, 2), 0, 6, 0, 90]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_phiH_fourier_matches_lattice(n):
    assert phiH_fourier(n, 8) == phiH_lattice(n, 8)


def test_phiH3_bruteforce_oracle():
    assert phiH3_bruteforce(6) == phiH_lattice(3, 6)


@pytest.mark.slow
def test_phiH3_bruteforce_oracle_deep():
    assert phiH3_bruteforce(12) == phiH_fourier(3, 12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_phiH_constant_term(n, prime):
    factorial = {2: 2, 3: 6, 4: 24}[n]
    assert phiH(n, 6)[0] == QQ(1, factorial)
    reduced = phiH(n, 6, prime)
    assert int(prime_field(prime).to_int(reduced[0])) % prime == pow(factorial, -1, prime)


def test_phiH_mod_p_matches_exact(prime):
    assert phiH_lattice(3, 20, prime) == phiH_lattice(3, 20).reduce(prime)


def test_phiH_rejects_bad_input():
    with pytest.raises(TruncationError):
        phiH_lattice(0, 5)
    with pytest.raises(TruncationError):
        phiH_lattice(2, -1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_phiD_constant_term(n):
    factorial = {2: 2, 3: 6, 4: 24}[n]
    assert phiD(n, 4)[0] == QQ(1, factorial)


def test_phiD_rejects_small_n():
    with pytest.raises(TruncationError):
        phiD(1, 4)


@pytest.mark.slow
def test_phiD_matches_quadrature():
    series = phiD(3, 16)
    w = QQ(1, 50)
    assert abs(series.evaluate(w) - phiD_quadrature(3, w)) < 1e-10


def test_f1_at_N0_is_K():
    f = f1(0, 3)
    K = elliptic_EK(3)[1]
    assert f.ramification == 2
    for k in range(4):
        assert f.coefficient(k) == K[k]
    assert not any(f.coefficient(QQ(2 * k + 1, 2)) for k in range(3))


def test_f1_at_N1():
    f = f1(1, 3)
    assert f.leading_exponent() == QQ(1, 2)
    assert f.leading_coefficient() == QQ(1, 2)
    assert f.coefficient(QQ(3, 2)) == QQ(3, 16)


def test_f2_oracle_N0():
    assert list(f2_oracle(0, 2)) == [0, QQ(1, 4), QQ(5, 32)]
    E, K = elliptic_EK(20)
    assert f2_oracle(0, 20) == (K * (K - E)).scale(QQ(1, 2))


def test_f2_oracle_N1():
    order = 20
    E, K = elliptic_EK(order)
    expected = (Series.constant(1, order) - (K * E).scale(3) - (t_series(order) - 2) * K * K).scale(QQ(1, 2))
    assert f2_oracle(1, order) == expected


@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_f2_oracle_leading_exponent(N):
    f = f2_oracle(N, 8)
    assert f.valuation() == N + 1
    assert f.leading_coefficient() > 0


def test_formfactor_parity_check():
    with pytest.raises(ValidationError):
        FormFactorRequest(branch=Branch.BELOW, j=1, N=0)


def test_formfactor_j0_is_constant():
    assert formfactor(FormFactorRequest(branch="below", j=0, N=2, order=5)) == Series.constant(1, 5)


@pytest.mark.parametrize("N", [0, 1, 2])
def test_formfactor_f2_matches_oracle(N):
    assert formfactor(FormFactorRequest(branch="below", j=2, N=N, order=12)) == f2_oracle(N, 12)


def test_formfactor_f1_matches_closed_form():
    assert formfactor(FormFactorRequest(branch="above", j=1, N=1, order=10)) == f1(1, 10)


def test_recursion_cache_is_bounded_and_shared():
    _cached_recursion.cache_clear()
    first = _recursion(Branch.BELOW, 1, 8)
    assert _recursion("below", 1, 8) is first
    assert _recursion(Branch.BELOW, 1, 8, 0) is first
    assert _cached_recursion.cache_info().maxsize == RECURSION_CACHE_SIZE
    for order in range(2, RECURSION_CACHE_SIZE + 4):
        _recursion(Branch.BELOW, 0, order)
    assert _cached_recursion.cache_info().currsize == RECURSION_CACHE_SIZE


@pytest.mark.parametrize("j,N", [(3, 0), (3, 1), (4, 0), (4, 1)])
def test_formfactor_leading_terms(j, N):
    branch = "below" if j % 2 == 0 else "above"
    f = formfactor(FormFactorRequest(branch=branch, j=j, N=N, order=12))
    assert f.leading_exponent() == leading_exponent(j, N)
    assert f.leading_coefficient() == leading_coefficient(j, N)


def test_leading_exponent_rules():
    assert leading_exponent(4, 1) == 2 * (1 + 2)
    assert leading_exponent(3, 2) == QQ(3 * 2, 2) + 2


def test_lambda_zero_below_is_prefactor():
    expected = Series.from_polynomial([1, -1], 10).pow_rational(QQ(1, 4))
    assert lambda_correlation(Branch.BELOW, 0, 0, 10) == expected


def test_lambda_correlation_above_leading_term():
    C = lambda_correlation(Branch.ABOVE, 1, QQ(1, 2), 8)
    assert C.leading_exponent() == QQ(1, 2)
    assert C.leading_coefficient() == QQ(1, 2)
    C = lambda_correlation(Branch.ABOVE, 0, QQ(1, 2), 8)
    assert C.leading_exponent() == 0
    assert C.leading_coefficient() == 1


def test_lambda_correlation_rejects_short_lambda_orders():
    assert saturating_order(Branch.BELOW, 0, 20) == 4
    with pytest.raises(TruncationError):
        lambda_correlation(Branch.BELOW, 0, 1, 20, lambda_orders=3)


@pytest.mark.slow
def test_lambda_correlation_saturates():
    C = lambda_correlation(Branch.BELOW, 0, 1, 20)
    prefactor = Series.from_polynomial([1, -1], 20).pow_rational(QQ(1, 4))
    total = Series.constant(1, 20)
    for j in (2, 4, 6, 8):
        total = total + formfactor(FormFactorRequest(branch="below", j=j, N=0, order=20))
    assert C == prefactor * total


def test_get_generator_rejects_unknown_target():
    with pytest.raises(ValueError, match="Unsupported target"):
        get_generator("bessel")


def test_generate_uses_cache(tmp_path):
    cache = SeriesCache(str(tmp_path))
    first = generate("phiH", 6, cache=cache, n=2)
    assert cache.count() == 1
    assert generate("phiH", 6, cache=cache, n=2) == first
    assert cache.count() == 1
    assert cache.clear() == 1
    assert cache.count() == 0


def test_cache_disabled_without_directory():
    cache = SeriesCache()
    assert not cache.enabled
    assert cache.fetch(cache_key("K", {}, None, 3)) is None


def test_cache_key_depends_on_prime(prime):
    assert cache_key("K", {}, None, 5) != cache_key("K", {}, prime, 5)


def test_phiD_prime_must_exceed_n():
    with pytest.raises(BadPrimeError):
        phiD(3, 4, prime=3)
