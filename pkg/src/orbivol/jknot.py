"""Closed-form pipeline for the double twist knots J(2n,-2m).

Indices follow two conventions.  The Riley-Mednykh polynomial uses the
twist counts n, m; the segment recurrences use the crossing counts
N = 2n and M' = 2m.  ``JKnotParams`` carries both.
"""
import cmath
from dataclasses import dataclass, field

import numpy as np

from .chebyshev import cheb_s, cheb_s_of_poly, cheb_s_with_derivative
from .diagram import generate_j_diagram
from .errors import (DegenerateError, InconsistencyError, NoGeometricSolutionError,
                     NonHyperbolicError, OrbivolError)
from .polyroots import PolyCx, poly_add, poly_mul, roots_all
from .potential import build_potential, formula_value, hyperbolicity_residual

# Generic values for the free segments z2, z3 (z1 = 1 is the gauge).
# The orbifold invariants do not depend on them.
DEFAULT_SEED = (1.0 + 0j, 0.7 + 0.3j, -0.4 + 1.1j)
ROOT_DEDUP_TOL = 1e-7
VOLUME_TIE_TOL = 1e-9
ASSEMBLY_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class JKnotParams:
    n: int
    m: int
    r: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if int(self.r) != self.r or self.r < 2:
            raise ValueError("r must be an integer >= 2")

    @classmethod
    def from_table(cls, two_n, two_m, r):
        if two_n % 2 or two_m % 2:
            raise ValueError("2n and 2m must be even")
        return cls(two_n // 2, two_m // 2, r)

    @property
    def N(self):
        return 2 * self.n

    @property
    def Mp(self):
        return 2 * self.m

    @property
    def M(self):
        return cmath.exp(1j * cmath.pi / self.r)

    @property
    def hyperbolic(self):
        return (self.n, self.m, self.r) != (1, 1, 3) and self.r >= 3

    def require_hyperbolic(self):
        if not self.hyperbolic:
            raise NonHyperbolicError(
                f"O(J({self.N},-{self.Mp}), {self.r}) is non-hyperbolic")


@dataclass(frozen=True)
class SL2:
    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def of(cls, mat):
        (a, b), (c, d) = np.asarray(mat, complex)
        return cls(complex(a), complex(b), complex(c), complex(d))

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], complex)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True, eq=False)
class SegmentSolution:
    z: np.ndarray
    labels: tuple = ()
    gauge: str = None
    lam: complex = None
    branch: int = None
    residual: float = None
    warning: str = None

    def __len__(self):
        return len(self.z)

    def __getitem__(self, k):
        return self.z[k]


def normalize_gauge(z):
    z = np.asarray(z, complex)
    return z / z[0]


# -- representation side ------------------------------------------------------

def holonomy_matrices(x, M):
    S = SL2(M, 1, 0, 1 / M)
    T = SL2(M, 0, 2 - M * M - M ** -2 - x, 1 / M)
    return S, T


def conjugator(x, M):
    """The matrix c with tr(S W^m c)/sqrt(2-v) = phi."""
    q = cmath.sqrt(2 - M * M - M ** -2 - x)
    return np.array([[0, -1 / q], [q, 0]], complex)


def w_matrix(x, M, n):
    """W = (T^-1 S)^n (T S^-1)^n by repeated multiplication."""
    S, T = (g.matrix for g in holonomy_matrices(x, M))
    A = np.linalg.inv(T) @ S
    B = T @ np.linalg.inv(S)
    return np.linalg.matrix_power(A, n) @ np.linalg.matrix_power(B, n)


def w_matrix_closed_form(x, M, n):
    v = x + M * M + M ** -2
    sn, sn1 = cheb_s(n, v), cheb_s(n - 1, v)
    Mi = 1 / M
    w11 = sn * sn + (2 - 2 * v) * sn * sn1 + (1 + 2 * Mi ** 2 - 2 * v - Mi ** 2 * v + v * v) * sn1 * sn1
    w12 = (Mi - M) * sn * sn1 + (M * v - M - Mi) * sn1 * sn1
    w22 = sn * sn - 2 * sn * sn1 + (1 + 2 * M * M - M * M * v) * sn1 * sn1
    return np.array([[w11, w12], [(2 - v) * w12, w22]])


def rep_residual(x, params):
    """max |S W^m - W^m T|, zero exactly when rho is a representation."""
    S, T = (g.matrix for g in holonomy_matrices(x, params.M))
    Wm = np.linalg.matrix_power(w_matrix(x, params.M, params.n), params.m)
    return float(np.max(np.abs(S @ Wm - Wm @ T)))


# -- Riley-Mednykh polynomial -------------------------------------------------

def rm_polynomial(params):
    M = params.M
    n, m = params.n, params.m
    x = PolyCx([0, 1])
    v = PolyCx([M * M + M ** -2, 1])
    s1 = cheb_s_of_poly(n - 1, v)
    z = poly_add(PolyCx([2]), poly_mul(poly_mul(v - 2, x), poly_mul(s1, s1)))
    inner = poly_mul(s1, poly_add(cheb_s_of_poly(n, v), poly_mul(PolyCx([1]) - v, s1)))
    bracket = poly_add(PolyCx([-1]), poly_mul(x, inner))
    return poly_add(cheb_s_of_poly(m, z), poly_mul(bracket, cheb_s_of_poly(m - 1, z)))


def rm_value(params, x):
    """(phi(x), phi'(x)) from the Chebyshev recurrences; x may be an array."""
    M = params.M
    v = x + M * M + M ** -2
    A, dA = cheb_s_with_derivative(params.n - 1, v)
    Sn, dSn = cheb_s_with_derivative(params.n, v)
    z = 2 + (v - 2) * x * A * A
    dz = x * A * A + (v - 2) * A * A + 2 * (v - 2) * x * A * dA
    inner = -1 + x * A * (Sn + (1 - v) * A)
    dinner = A * (Sn + (1 - v) * A) + x * dA * (Sn + (1 - v) * A) + x * A * (dSn - A + (1 - v) * dA)
    Sm, dSm = cheb_s_with_derivative(params.m, z)
    Sm1, dSm1 = cheb_s_with_derivative(params.m - 1, z)
    return Sm + inner * Sm1, dSm * dz + dinner * Sm1 + inner * dSm1 * dz


def rm_roots(params):
    p = rm_polynomial(params)
    return roots_all(p, evaluator=lambda x: rm_value(params, x))


# -- segment recurrences ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SequenceBundle:
    B: list
    P: list
    Q: list
    Bp: list
    Pp: list
    Qp: list
    Bt: list
    Bpt: list
    W: complex
    Wt: complex
    sqrt_lam: complex


def _two_phase(f0, f1, i0, upto, odd, even):
    """F_{j+1} = A F_j + c F_{j-1} with (A, c) = odd or even by parity of j.

    f0, f1 are F_{i0}, F_{i0+1}.  Returns F_0..F_upto (backward step if i0 = 1).
    """
    F = {i0: f0, i0 + 1: f1}
    for j in range(i0 + 1, upto):
        A, c = odd if j % 2 else even
        F[j + 1] = A * F[j] + c * F[j - 1]
    if i0 == 1:
        A, c = odd
        F[0] = (F[2] - A * F[1]) / c
    return [F[j] for j in range(upto + 1)]


def build_sequences(params, lam, seed=DEFAULT_SEED, branch=1):
    lam = complex(lam)
    if lam == 0:
        raise DegenerateError("Lambda = 0")
    M, N, Mp = params.M, params.N, params.Mp
    z1, z2, z3 = seed
    sl = branch * cmath.sqrt(lam)
    M2, Mm2 = M * M, M ** -2
    top, topp = N + 2, Mp + 2
    B = _two_phase(0, 1, 0, top, (sl, M2), (sl, Mm2))
    Bt = _two_phase(0, 1, 0, top, (sl, Mm2), (sl, M2))
    P = _two_phase(z1 * (z2 - z3 / M2), sl * z2 * z3, 0, top, (sl, M2), (sl, Mm2))
    Q = _two_phase(sl * z3, z2 - z3 / M2, 1, top, (sl, M2), (sl, Mm2))
    W = B[N + 1] - B[N - 1]
    Wt = Bt[N + 1] - Bt[N - 1]
    Bp = _two_phase(0, 1, 0, topp, (Wt, Mm2), (W, M2))
    Bpt = _two_phase(0, 1, 0, topp, (W, M2), (Wt, Mm2))
    Pp = _two_phase(P[N], P[0], 0, topp, (Wt, Mm2), (W, M2))
    Qp = _two_phase(Q[2], Q[N + 2], 1, topp, (Wt, Mm2), (W, M2))
    return SequenceBundle(B, P, Q, Bp, Pp, Qp, Bt, Bpt, W, Wt, sl)


def rm_equivalence_residual(params, x):
    seq = build_sequences(params, x)
    rhs = seq.Bp[params.Mp + 1] + seq.Bpt[params.Mp] * seq.Bt[params.N - 1]
    lhs = rm_value(params, complex(x))[0]
    return abs(lhs - rhs)


def _ratio(a, b, what):
    if b == 0 or not np.isfinite(b):
        raise DegenerateError(f"zero denominator {what}")
    return a / b


def _assemble_branch(params, lam, seed, branch):
    s = build_sequences(params, lam, seed, branch)
    N, Mp = params.N, params.Mp
    z = {}
    for j in range(1, N + 2):
        z[f"z{2 * j - 1}"] = _ratio(s.P[j - 1], s.Q[j + 1], f"Q_{j + 1}")
        z[f"z{2 * j}"] = _ratio(s.P[j], s.Q[j], f"Q_{j}")
    zp = {}
    for j in range(1, Mp + 2):
        zp[2 * j - 1] = _ratio(s.Pp[j - 1], s.Qp[j + 1], f"Q'_{j + 1}")
        zp[2 * j] = _ratio(s.Pp[j], s.Qp[j], f"Q'_{j}")
    for k, name in ((1, f"z{2 * N + 1}"), (2, "z1"), (2 * Mp + 1, f"z{2 * N + 2}"), (2 * Mp + 2, "z2")):
        a, b = zp[k], z[name]
        if abs(a - b) > 1e-8 * max(1.0, abs(b)):
            raise InconsistencyError(f"z'{k} = {a} but {name} = {b}")
    for j in range(3, 2 * Mp + 1):
        z[f"z'{j}"] = zp[j]
    d = generate_j_diagram(params.n, params.m)
    vals = normalize_gauge([z[name] for name in d.labels])
    if not np.all(np.isfinite(vals)) or np.any(vals == 0):
        raise DegenerateError("segment value 0 or infinite")
    pf = build_potential(d)
    res = hyperbolicity_residual(pf, vals, params.r)
    return SegmentSolution(vals, d.labels, "z1=1", complex(lam), branch, res), pf


def assemble_solution(params, lam, seed=DEFAULT_SEED, branch=None):
    """Segment values of the M^2-deformed solution attached to the root lam.

    The principal square root of lam is tried first; if it yields an
    inconsistent, degenerate or non-solution the other branch is tried.
    """
    branches = (1, -1) if branch is None else (branch,)
    first = None
    for br in branches:
        try:
            sol, _ = _assemble_branch(params, lam, seed, br)
        except OrbivolError as e:
            first = first or e
            continue
        if sol.residual <= ASSEMBLY_RESIDUAL_TOL:
            return sol
        first = first or InconsistencyError(
            f"hyperbolicity residual {sol.residual:.2e} on branch {br}")
    raise first


def lambda_from_solution(z, M):
    z1, z2, z3, z4 = np.asarray(getattr(z, "z", z), complex)[:4]
    den = M * M * z2 * z3
    if den == 0:
        raise DegenerateError("z2 z3 = 0")
    return complex((M * M * z2 - z3) * (z4 - M * M * z1) / den)


@dataclass
class Candidate:
    lam: complex
    volume: float = None
    w: complex = None
    solution: SegmentSolution = None
    error: str = None
    geometric: bool = False


def _dedupe(roots):
    out = []
    for x in roots:
        if all(abs(x - y) > ROOT_DEDUP_TOL for y in out):
            out.append(x)
    return out


def geometric_lambda(params):
    """Root of the Riley-Mednykh polynomial carrying the maximal volume.

    Returns (lam, solution, candidates).
    """
    params.require_hyperbolic()
    pf = build_potential(generate_j_diagram(params.n, params.m))
    cands = []
    for x in _dedupe(rm_roots(params)):
        c = Candidate(x)
        try:
            sol = assemble_solution(params, x)
            c.w = formula_value(pf, sol)
            c.volume, c.solution = c.w.imag, sol
        except OrbivolError as e:
            c.error = str(e)
        cands.append(c)
    ok = [c for c in cands if c.volume is not None]
    if not ok:
        raise NoGeometricSolutionError(
            f"no root of phi gives a nondegenerate solution for {params}")
    top = max(c.volume for c in ok)
    tied = [c for c in ok if top - c.volume < VOLUME_TIE_TOL]
    best = max(tied, key=lambda c: (c.lam.imag > 0, c.lam.imag, c.lam.real))
    best.geometric = True
    return best.lam, best.solution, cands
