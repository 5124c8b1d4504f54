"""Complex volume of an orbifold from a solution of the hyperbolicity equations."""
import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .complexfn import mod_reduce
from .diagram import generate_j_diagram
from .errors import PreconditionError
from .jknot import geometric_lambda, normalize_gauge
from .potential import build_potential, eval_grad, formula_value, hyperbolicity_residual

H_TOL = 1e-9


def modulus(r):
    """pi^2/r for odd r, 2 pi^2/r for even r; pi^2 for the complete structure."""
    if r is None:
        return math.pi ** 2
    return (math.pi ** 2 if r % 2 else 2 * math.pi ** 2) / r


@dataclass(frozen=True, eq=False)
class OrbifoldInvariants:
    w_raw: complex
    volume: float
    cs_rep: float
    modulus: float
    r: int
    lam: complex
    z: object
    residual: float
    grad_sum: complex

    @property
    def cs_normalized(self):
        """CS divided by -2 pi^2 and read modulo 1/r (modulo 1 when complete)."""
        period = 1.0 if self.r is None else 1.0 / self.r
        return mod_reduce(-self.w_raw.real / (-2 * math.pi ** 2), period)


def complex_volume(pf, z, r, lam=None, tol=H_TOL):
    zv = normalize_gauge(getattr(z, "z", z))
    res = hyperbolicity_residual(pf, zv, r)
    if not res <= tol:
        raise PreconditionError(f"hyperbolicity residual {res:.3e} exceeds {tol:.1e}")
    w = formula_value(pf, zv)
    mu = modulus(r)
    if lam is None:
        lam = getattr(z, "lam", None)
    return OrbifoldInvariants(w, w.imag, mod_reduce(-w.real, mu), mu, r, lam, z, res,
                              complex(np.sum(eval_grad(pf, zv))))


def table1_row(params):
    """Closed-form pipeline for one (n, m, r)."""
    lam, sol, _ = geometric_lambda(params)
    pf = build_potential(generate_j_diagram(params.n, params.m))
    return complex_volume(pf, sol, params.r, lam=lam)


@dataclass(frozen=True)
class GoldenRow:
    two_n: int
    two_m: int
    r: int
    lam: complex
    cvol: complex


def load_table1():
    """The 79 rows of the published table, as transcribed in data/table1.csv."""
    text = resources.files("orbivol").joinpath("data/table1.csv").read_text()
    rows = []
    for d in csv.DictReader(text.splitlines()):
        rows.append(GoldenRow(int(d["two_n"]), int(d["two_m"]), int(d["r"]),
                              complex(float(d["lambda_re"]), float(d["lambda_im"])),
                              complex(float(d["cvol_re"]), float(d["cvol_im"]))))
    return rows


def cs_distance(a, b, mu):
    """Distance between two reals on the circle R / mu Z."""
    d = mod_reduce(a - b, mu)
    return min(d, mu - d)
