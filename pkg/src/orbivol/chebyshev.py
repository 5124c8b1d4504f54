"""The polynomials S_k with S_0 = 1, S_1 = x, S_k = x S_{k-1} - S_{k-2}."""
import numpy as np

from .polyroots import PolyCx, poly_add, poly_mul


def cheb_s(k, xi):
    """S_k(xi) for any integer k; xi may be a scalar or an array."""
    if k == -1:
        return 0 * xi
    if k < -1:
        return -cheb_s(-k - 2, xi)
    a, b = 1 + 0 * xi, xi
    if k == 0:
        return a
    for _ in range(k - 1):
        a, b = b, xi * b - a
    return b


def cheb_s_with_derivative(k, xi):
    """(S_k(xi), S_k'(xi)) for k >= -1."""
    if k < -1:
        s, ds = cheb_s_with_derivative(-k - 2, xi)
        return -s, -ds
    if k == -1:
        return 0 * xi, 0 * xi
    a, da, b, db = 1 + 0 * xi, 0 * xi, xi, 1 + 0 * xi
    if k == 0:
        return a, da
    for _ in range(k - 1):
        a, da, b, db = b, db, xi * b - a, b + xi * db - da
    return b, db


def cheb_s_of_poly(k, v):
    """S_k(v(x)) as a PolyCx, for k >= -1."""
    if k < -1:
        raise ValueError("cheb_s_of_poly needs k >= -1")
    if k == -1:
        return PolyCx([0])
    a, b = PolyCx([1]), v
    if k == 0:
        return a
    neg = PolyCx([-1])
    for _ in range(k - 1):
        a, b = b, poly_add(poly_mul(v, b), poly_mul(neg, a))
    return b


def matrix_power_closed_form(V, k):
    """V^k for V in SL2 via Cayley-Hamilton, k >= 0."""
    (a, b), (c, d) = np.asarray(V, complex)
    xi = a + d
    sk, sk1 = cheb_s(k, xi), cheb_s(k - 1, xi)
    return np.array([[sk - d * sk1, b * sk1], [c * sk1, sk - a * sk1]])
