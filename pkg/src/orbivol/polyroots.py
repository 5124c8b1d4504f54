"""Dense complex polynomials and Aberth simultaneous root finding."""
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True, eq=False)
class PolyCx:
    """Polynomial with complex coefficients in ascending degree order."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if len(nz) else c[:1]
        if len(c) == 0:
            c = np.zeros(1, complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        return poly_eval(self, x)

    def __add__(self, other):
        return poly_add(self, _as_poly(other))

    def __mul__(self, other):
        return poly_mul(self, _as_poly(other))

    __radd__ = __add__
    __rmul__ = __mul__

    def __sub__(self, other):
        return poly_add(self, poly_mul(_as_poly(other), PolyCx([-1])))

    def __neg__(self):
        return PolyCx(-self.coeffs)

    def __eq__(self, other):
        return isinstance(other, PolyCx) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"PolyCx({list(self.coeffs)})"

    def derivative(self):
        if self.degree == 0:
            return PolyCx([0])
        return PolyCx(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def norm1(self):
        return float(np.abs(self.coeffs).sum())


def _as_poly(p):
    return p if isinstance(p, PolyCx) else PolyCx([p])


def poly_add(a, b):
    n = max(len(a.coeffs), len(b.coeffs))
    c = np.zeros(n, complex)
    c[: len(a.coeffs)] += a.coeffs
    c[: len(b.coeffs)] += b.coeffs
    return PolyCx(c)


def poly_mul(a, b):
    return PolyCx(np.convolve(a.coeffs, b.coeffs))


def poly_eval(p, x):
    """Horner evaluation; x may be a scalar or an array."""
    acc = np.zeros_like(np.asarray(x, dtype=complex)) + p.coeffs[-1]
    for c in p.coeffs[-2::-1]:
        acc = acc * x + c
    return acc if np.ndim(acc) else complex(acc)


def _horner_with_derivative(coeffs, x):
    p = np.full_like(x, coeffs[-1])
    dp = np.zeros_like(x)
    for c in coeffs[-2::-1]:
        dp = dp * x + p
        p = p * x + c
    return p, dp


def cauchy_radius(p):
    c = p.coeffs
    return 1 + float(np.max(np.abs(c[:-1] / c[-1])))


def roots_all(p, evaluator=None, max_iter=500, tol=1e-14, polish=3):
    """All deg(p) roots of p, sorted by (Re, Im).

    ``evaluator(x) -> (p(x), p'(x))`` may replace Horner on the dense
    coefficients when a more accurate recurrence is available; it must
    accept numpy arrays.  The coefficients are still used for the
    starting radius and the acceptance test.
    """
    deg = p.degree
    if deg < 1:
        raise DomainError("roots of a constant polynomial")
    if evaluator is None:
        evaluator = lambda x: _horner_with_derivative(p.coeffs, x)
    k = np.arange(deg)
    # fixed irrational offset breaks the symmetry of the start circle
    x = cauchy_radius(p) * np.exp(1j * (2 * np.pi * k / deg + 0.5 * np.sqrt(2)))
    active = np.ones(deg, bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        f, df = evaluator(x[idx])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = f / df
            diff = x[idx, None] - x[None, :]
            diff[np.arange(len(idx)), idx] = np.inf
            s = (1 / diff).sum(axis=1)
            step = ratio / (1 - ratio * s)
        step[f == 0] = 0
        bad = ~np.isfinite(step)
        step[bad] = 1e-3 * (1 + np.abs(x[idx[bad]]))
        x[idx] -= step
        done = np.abs(step) <= tol * np.maximum(1, np.abs(x[idx]))
        active[idx[done]] = False
    for _ in range(polish):
        f, df = evaluator(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = np.where(df != 0, f / df, 0)
        x = np.where(np.isfinite(dx), x - dx, x)
    f, _ = evaluator(x)
    bound = 1e-10 * p.norm1() * np.maximum(1, np.abs(x)) ** deg
    if not np.all(np.abs(f) <= bound):
        raise ConvergenceError("Aberth iteration did not converge", best=x,
                               residual=float(np.max(np.abs(f) / bound)))
    order = np.lexsort((x.imag, x.real))
    return [complex(v) for v in x[order]]
