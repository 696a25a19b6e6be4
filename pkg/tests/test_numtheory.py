import math

import mpmath
import pytest

from pimeasure import _kernels
from pimeasure.exactkernel import padic_order
from pimeasure.numtheory import (
    in_saving_set,
    lcm_upto,
    phi_growth,
    phi_limit_float,
    prime_set_P,
    primes_up_to,
)


def test_primes_examples():
    assert primes_up_to(10) == [2, 3, 5, 7]
    assert primes_up_to(1) == []
    p30 = primes_up_to(30)
    assert len(p30) == 10 and p30[-1] == 29
    with pytest.raises(ValueError):
        primes_up_to(-1)


def test_lcm_examples():
    assert lcm_upto(4) == 12
    assert lcm_upto(10) == 2520
    assert lcm_upto(0) == 1


def test_lcm_prime_power_increments():
    for m in range(2, 400):
        ratio, rem = divmod(lcm_upto(m), lcm_upto(m - 1))
        assert rem == 0
        factors = [p for p in primes_up_to(m) if m % p == 0]
        if len(factors) == 1 and m == factors[0] ** round(math.log(m, factors[0])):
            assert ratio == factors[0]
        else:
            assert ratio == 1


def test_saving_set_examples():
    d = prime_set_P(10)
    assert d.primes_P == (17, 19) and d.phi == 323
    d1 = prime_set_P(1)
    assert d1.primes_P == () and d1.phi == 1 and d1.L == 12
    assert all(5 < p <= 100 for p in prime_set_P(50).primes_P)


def test_saving_set_membership():
    assert not in_saving_set(12, 5)  # p > 5 required
    assert in_saving_set(10, 17)  # {10/17} in [1/2, 2/3)
    assert not in_saving_set(10, 13)  # {10/13} > 2/3
    assert not in_saving_set(300, 29)  # 29^2 < 900
    assert in_saving_set(14, 23)  # 14/23 in [1/2, 2/3)
    assert not in_saving_set(11, 23)  # 11/23 < 1/2



def test_phi_divides_lcm_up_to_2000():
    for n in range(1, 2001, 7):
        d = prime_set_P(n)
        assert d.lcm4n % d.phi == 0
        for p in d.primes_P:
            assert padic_order(d.phi, p) == 1
            assert padic_order(d.lcm4n, p) in (1, 2)


def test_phi_limit():
    assert abs(phi_limit_float() - 0.64527561) < 5e-9
    ctx = mpmath.MPContext()
    ctx.dps = 50
    elementary = ctx.pi / (2 * ctx.sqrt(3)) - ctx.log(3 * ctx.sqrt(3) / 4)
    digamma = ctx.digamma(ctx.mpf(2) / 3) - ctx.digamma(ctx.mpf(1) / 2)
    assert abs(elementary - digamma) < ctx.mpf(10) ** -40


def test_phi_growth_at_5000():
    (n, g), = phi_growth(5000, n_min=5000)
    assert n == 5000
    assert abs(g - 0.6452756) < 0.05


def test_kernels_agree_on_sieve():
    assert _kernels.python.sieve(10000) == primes_up_to(10000)
    if _kernels.compiled is not None:
        assert _kernels.compiled.sieve(10000) == _kernels.python.sieve(10000)
