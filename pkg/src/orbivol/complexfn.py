"""Principal logarithm, dilogarithm and Rogers dilogarithm.

All functions take and return Python complex numbers.  The branch
conventions are the principal ones: ``Im log`` lies in (-pi, pi] and the
cut of Li2 on [1, inf) is approached from the lower half plane.
"""
import cmath
import math

from scipy.special import bernoulli

from .errors import DomainError

PI2_6 = math.pi ** 2 / 6

# Coefficients B_k / (k+1)! of the Bernoulli series
#   Li2(z) = sum_k B_k u^(k+1) / (k+1)!,  u = -log(1 - z),
# which converges for |u| < 2 pi.  Odd B_k vanish beyond k = 1.
_NB = 40
_BERN = [float(b) / math.factorial(k + 1) for k, b in enumerate(bernoulli(_NB))]


def principal_log(z):
    z = complex(z)
    if z == 0:
        raise DomainError("log of zero")
    w = cmath.log(z)
    if w.imag == -math.pi:
        # -x - 0j would land on -pi; the branch is closed at +pi
        w = complex(w.real, math.pi)
    return w


def _li2_series(z):
    s, p, k = 0j, z, 1
    while True:
        t = p / (k * k)
        s += t
        if abs(t) < 1e-17 * max(abs(s), 1e-300):
            return s
        p *= z
        k += 1
        if k > 200:
            return s


def _li2_bernoulli(z):
    u = -principal_log(1 - z)
    u2 = u * u
    s = _BERN[0] * u + _BERN[1] * u2
    p = u
    for k in range(2, _NB + 1, 2):
        p *= u2
        t = _BERN[k] * p
        s += t
        if abs(t) < 1e-17 * abs(s):
            break
    return s


def li2(z):
    """Principal dilogarithm Li2(z) = -int_0^z log(1-t)/t dt."""
    z = complex(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(PI2_6)
    az = abs(z)
    if az > 1:
        # inversion; log(-z) taken on the branch matching the lower-half-plane limit
        l = principal_log(-z)
        return -PI2_6 - 0.5 * l * l - li2(1 / z)
    if az <= 0.5:
        return _li2_series(z)
    if abs(1 - z) < 0.5:
        # reflection
        return PI2_6 - principal_log(z) * principal_log(1 - z) - _li2_series(1 - z)
    return _li2_bernoulli(z)


def rogers(z):
    """Rogers dilogarithm 1/2 log z log(1-z) + Li2(z)."""
    z = complex(z)
    if z == 0 or z == 1:
        raise DomainError(f"Rogers dilogarithm undefined at {z}")
    return 0.5 * principal_log(z) * principal_log(1 - z) + li2(z)


def rogers_r(z, p=0, q=0):
    """Extended Rogers function R(z; p, q).

    Returns rogers(z) + (pi i / 2)(p log(1-z) + q log z) - pi^2/6.
    """
    z = complex(z)
    if z == 0 or z == 1:
        raise DomainError(f"R(z; p, q) undefined at z = {z}")
    lz, l1z = principal_log(z), principal_log(1 - z)
    return rogers(z) + 0.5j * math.pi * (p * l1z + q * lz) - PI2_6


def mod_reduce(x, mu):
    """Representative of x modulo mu in [0, mu)."""
    if not mu > 0:
        raise DomainError(f"modulus must be positive, got {mu}")
    x = float(x)
    r = x - mu * math.floor(x / mu)
    if r >= mu or r < 0:
        r = r - mu if r >= mu else r + mu
    if r >= mu:
        r = 0.0
    return r
