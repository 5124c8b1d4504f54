import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbivol.complexfn import li2, mod_reduce, principal_log, rogers, rogers_r
from orbivol.errors import DomainError

from oracles import li2_mp, li2_quad, li2_series

# Frozen from the series oracle sum 2^-k / k^2.
LI2_HALF = 0.5822405264650125


def test_log_examples():
    assert principal_log(1) == 0
    assert principal_log(-1) == pytest.approx(1j * math.pi, abs=1e-15)
    assert principal_log(complex(-1, -0.0)).imag == math.pi
    assert principal_log(2j) == pytest.approx(math.log(2) + 0.5j * math.pi, abs=1e-15)
    with pytest.raises(DomainError):
        principal_log(0)


def test_log_roundtrip_annulus():
    rng = np.random.default_rng(0)
    r = 10 ** rng.uniform(-6, 6, 10_000)
    th = rng.uniform(-math.pi, math.pi, 10_000)
    for z in r * np.exp(1j * th):
        w = principal_log(z)
        assert -math.pi < w.imag <= math.pi
        assert abs(cmath.exp(w) - z) <= 1e-13 * abs(z)


def test_li2_examples():
    assert li2(0) == 0
    assert li2(1) == pytest.approx(math.pi ** 2 / 6, abs=1e-15)
    assert abs(li2_series(0.5) - LI2_HALF) < 1e-15
    assert abs(li2(0.5) - LI2_HALF) < 1e-13


def test_li2_matches_series_inside_half_disk():
    rng = np.random.default_rng(1)
    for _ in range(300):
        z = 0.5 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        assert abs(li2(z) - li2_series(z, 80)) <= 1e-13


def test_li2_matches_quadrature():
    rng = np.random.default_rng(2)
    for _ in range(100):
        z = 0.9 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        assert abs(li2(z) - li2_quad(z)) <= 1e-10


def test_li2_whole_plane_against_mpmath():
    rng = np.random.default_rng(3)
    for _ in range(2000):
        z = complex(*rng.normal(size=2)) * 10 ** rng.uniform(-3, 4)
        ref = li2_mp(z)
        assert abs(li2(z) - ref) <= 1e-13 * max(1, abs(ref))


def test_li2_cut_is_lower_limit():
    for x in (1.5, 3.0, 40.0):
        assert li2(x).imag == pytest.approx(-math.pi * math.log(x), rel=1e-13)
        below = li2(complex(x, -1e-12))
        assert abs(li2(x) - below) < 1e-9


def test_rogers_examples():
    assert rogers_r(0.5) == pytest.approx(-math.pi ** 2 / 12, abs=1e-13)
    rng = np.random.default_rng(4)
    for _ in range(50):
        z = complex(*rng.normal(size=2))
        p, q = rng.integers(-3, 4, size=2)
        want = 0.5j * math.pi * (p * principal_log(1 - z) + q * principal_log(z))
        assert abs(rogers_r(z, p, q) - rogers_r(z) - want) < 1e-12
    for x in rng.uniform(0.01, 0.99, 50):
        assert rogers_r(x) + rogers_r(1 - x) == pytest.approx(-math.pi ** 2 / 6, abs=1e-12)
    for bad in (0, 1):
        with pytest.raises(DomainError):
            rogers_r(bad, 0, 0)


def test_five_term_relation_constant():
    rng = np.random.default_rng(5)
    vals = []
    for _ in range(100):
        y, x = sorted(rng.uniform(0.001, 0.999, 2))
        vals.append(rogers(x) - rogers(y) + rogers(y / x)
                    - rogers((1 - 1 / x) / (1 - 1 / y)) + rogers((1 - x) / (1 - y)))
    vals = np.array(vals)
    assert np.ptp(vals.real) <= 1e-10 and np.ptp(vals.imag) <= 1e-10
    assert vals[0].real == pytest.approx(math.pi ** 2 / 6, abs=1e-10)


def test_mod_reduce_examples():
    assert mod_reduce(0, 1) == 0
    assert mod_reduce(7.5, 2.5) == 0
    mu = math.pi ** 2 / 3
    r = mod_reduce(-3.2898681337, mu)
    assert min(r, mu - r) < 1e-9
    with pytest.raises(DomainError):
        mod_reduce(1, 0)
    with pytest.raises(DomainError):
        mod_reduce(1, -2)


@settings(max_examples=300, deadline=None)
@given(st.floats(-1e6, 1e6, allow_nan=False), st.floats(1e-3, 1e3))
def test_mod_reduce_properties(x, mu):
    r = mod_reduce(x, mu)
    assert 0 <= r < mu
    k = round((x - r) / mu)
    assert abs(x - r - k * mu) <= 1e-12 * max(1, abs(x)) + 1e-12 * abs(k * mu)
    assert mod_reduce(r, mu) == r
