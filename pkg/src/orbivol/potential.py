"""Potential function V of a diagram and its logarithmic gradient."""
from dataclasses import dataclass

import numpy as np

from .complexfn import li2, principal_log
from .errors import DegenerateError

DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class DilogTerm:
    sign: int
    num: int
    den: int


@dataclass(frozen=True, eq=False)
class PotentialFunction:
    terms: tuple
    num_segments: int
    side_types: np.ndarray  # +1 Type I, -1 Type II

    def __post_init__(self):
        s = np.array([t.sign for t in self.terms], float)
        a = np.array([t.num for t in self.terms], int)
        b = np.array([t.den for t in self.terms], int)
        # gradient scatter: component k collects -sign on numerators, +sign on denominators
        G = np.zeros((len(self.terms), self.num_segments))
        G[np.arange(len(a)), a] -= s
        G[np.arange(len(b)), b] += s
        for name, val in (("_s", s), ("_a", a), ("_b", b), ("_G", G)):
            object.__setattr__(self, name, val)


def build_potential(diagram):
    """Four signed dilogarithms per crossing (A, B, C, D):

        Li2(B/A) - Li2(B/C) + Li2(D/C) - Li2(D/A)
    """
    terms = []
    for c in diagram.crossings:
        A, B, C, D = c.slots
        terms += [DilogTerm(1, B, A), DilogTerm(-1, B, C), DilogTerm(1, D, C), DilogTerm(-1, D, A)]
    types = np.array([int(t) for t in diagram.side_types], float)
    return PotentialFunction(tuple(terms), diagram.num_segments, types)


def _values(z):
    return np.asarray(getattr(z, "z", z), dtype=complex)


def _ratios(pf, z):
    z = _values(z)
    if z.shape != (pf.num_segments,):
        raise ValueError(f"expected {pf.num_segments} segment values, got shape {z.shape}")
    with np.errstate(divide="ignore", invalid="ignore"):
        u = z[pf._a] / z[pf._b]
    bad = ~np.isfinite(u) | (np.abs(u) < DEGENERATE_TOL) | (np.abs(u - 1) < DEGENERATE_TOL)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        t = pf.terms[k]
        raise DegenerateError(f"term {k} (z{t.num + 1}/z{t.den + 1}) has degenerate ratio {u[k]}")
    return u


def eval_v(pf, z):
    u = _ratios(pf, z)
    return complex(sum(s * li2(x) for s, x in zip(pf._s, u)))


def eval_grad(pf, z):
    """z_k dV/dz_k for every segment k."""
    u = _ratios(pf, z)
    return np.log(1 - u) @ pf._G


def formula_value(pf, z):
    """V - sum_k (z_k dV/dz_k) log z_k, principal logs throughout."""
    zv = _values(z)
    g = eval_grad(pf, zv)
    logs = np.array([principal_log(x) for x in zv])
    return eval_v(pf, zv) - complex(g @ logs)


def hyperbolicity_residual(pf, z, r):
    """max_k |exp(z_k dV/dz_k) - exp(+-2 pi i / r)|; r=None means the complete structure."""
    g = eval_grad(pf, z)
    t = 0.0 if r is None else 2 * np.pi / r
    return float(np.max(np.abs(np.exp(g) - np.exp(1j * t * pf.side_types))))
