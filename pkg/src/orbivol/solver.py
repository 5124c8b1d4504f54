"""Numerical solution of the hyperbolicity equations for any alternating diagram.

Unknowns are w_k = log z_k.  The residual is

    F_k(w) = exp(z_k dV/dz_k) - exp(i t type_k)

with t = 0 for the complete structure and t = 2 pi / r for the orbifold.
On a solution the Jacobian has a kernel of dimension three (global
scaling plus a two parameter family of solutions with equal volume), so
all linear solves are least squares.
"""
import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .diagram import faces
from .errors import ContinuationError, ConvergenceError, DegenerateError
from .jknot import SegmentSolution
from .potential import formula_value

log = logging.getLogger(__name__)

SEED_STRATEGIES = ("regular", "given")
VOLUME_FLOOR = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-11
    max_iter: int = 60
    continuation_steps: int = 64
    seed_strategy: str = "regular"
    max_halvings: int = 8
    lm_iters: int = 50

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1 or self.continuation_steps < 1:
            raise ValueError("max_iter and continuation_steps must be >= 1")
        if self.seed_strategy not in SEED_STRATEGIES:
            raise ValueError(f"seed_strategy must be one of {SEED_STRATEGIES}")


class _System:
    """Vectorised residual and Jacobian built once from the term list."""

    def __init__(self, pf):
        self.n = pf.num_segments
        self.a, self.b, self.G = pf._a, pf._b, pf._G
        T = len(self.a)
        E = np.zeros((T, self.n))
        E[np.arange(T), self.a] += 1
        E[np.arange(T), self.b] -= 1
        # J[k, l] = sum_t G[t, k] f_t E[t, l], flattened for batched evaluation
        self.K = np.einsum("tk,tl->tkl", self.G, E).reshape(T, -1)
        self.types = pf.side_types

    def target(self, t):
        return np.exp(1j * t * self.types)

    def grad(self, w):
        u = np.exp(w[..., self.a] - w[..., self.b])
        return np.log(1 - u) @ self.G

    def resid(self, w, target):
        with np.errstate(all="ignore"):
            return np.exp(self.grad(w)) - target

    def jac(self, w):
        """Jacobian of F with respect to w (batched over leading axes)."""
        with np.errstate(all="ignore"):
            u = np.exp(w[..., self.a] - w[..., self.b])
            f = -u / (1 - u)
            J = (f @ self.K).reshape(w.shape[:-1] + (self.n, self.n))
            return J * np.exp(self.grad(w))[..., :, None]


def _finite_rows(F):
    return np.all(np.isfinite(F), axis=-1)


def batch_lm(sys_, w, target, iters=50, tol=1e-12):
    """Levenberg-Marquardt on a batch of starting points, w[:, 0] held fixed."""
    w = w.copy()
    B, n = w.shape
    lam = np.full(B, 1e-3)
    F = sys_.resid(w, target)
    nf = np.where(_finite_rows(F), np.linalg.norm(np.where(np.isfinite(F), F, 0), axis=1), np.inf)
    eye = np.eye(n - 1)
    for _ in range(iters):
        act = np.flatnonzero((nf > tol) & np.isfinite(nf) & (lam < 1e12))
        if len(act) == 0:
            break
        J = sys_.jac(w[act])[:, :, 1:]
        Jh = np.conj(np.swapaxes(J, 1, 2))
        A = Jh @ J + lam[act, None, None] * eye
        g = (Jh @ F[act][:, :, None])[:, :, 0]
        fin = np.all(np.isfinite(A.reshape(len(act), -1)), axis=1) & np.all(np.isfinite(g), axis=1)
        A[~fin], g[~fin] = eye, 0
        try:
            dw = np.linalg.solve(A, -g[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            dw = np.array([np.linalg.lstsq(Ai, -gi, rcond=None)[0] for Ai, gi in zip(A, g)])
        nf[act[~fin]] = np.inf
        wn = w[act].copy()
        wn[:, 1:] += dw
        Fn = sys_.resid(wn, target)
        nn = np.where(_finite_rows(Fn), np.linalg.norm(np.where(np.isfinite(Fn), Fn, 0), axis=1), np.inf)
        ok = nn < nf[act]
        good, bad = act[ok], act[~ok]
        w[good], F[good], nf[good] = wn[ok], Fn[ok], nn[ok]
        lam[good] = np.maximum(lam[good] / 10, 1e-15)
        lam[bad] *= 10
    res = np.where(np.isfinite(nf), np.max(np.abs(np.where(np.isfinite(F), F, np.inf)), axis=1), np.inf)
    return w, res


def newton(sys_, w, target, free, tol, max_iter):
    """Damped Gauss-Newton on the free coordinates; returns (w, residual, converged)."""
    w = w.copy()
    F = sys_.resid(w, target)
    res = np.max(np.abs(F)) if np.all(np.isfinite(F)) else np.inf
    for _ in range(max_iter):
        if res <= tol:
            return w, res, True
        if not np.isfinite(res):
            break
        J = sys_.jac(w)[:, free]
        if not np.all(np.isfinite(J)):
            break
        dw = np.linalg.lstsq(J, -F, rcond=None)[0]
        f0, step = np.linalg.norm(F), 1.0
        for _ in range(21):
            wn = w.copy()
            wn[free] += step * dw
            Fn = sys_.resid(wn, target)
            if np.all(np.isfinite(Fn)) and np.linalg.norm(Fn) < f0:
                break
            step /= 2
        else:
            break
        w, F = wn, Fn
        res = np.max(np.abs(F))
    return w, res, bool(res <= tol)


def free_coordinates(sys_, w):
    """Coordinates left free once the solution family is pinned.

    Column-pivoted QR of the Jacobian orders coordinates by independence;
    the trailing (n - rank) ones span the kernel directions and are held
    fixed, which makes each Newton step locally unique.
    """
    J = sys_.jac(w)
    _, R, piv = scipy.linalg.qr(J, pivoting=True)
    d = np.abs(np.diag(R))
    rank = int(np.sum(d > 1e-8 * d[0]))
    return np.sort(piv[:rank])


# -- seeding ------------------------------------------------------------------

def _medial_embedding(slots, F, outer):
    """Tutte embedding of the medial graph with one face's sides on the unit circle."""
    n = 2 * len(slots)
    W = np.zeros((n, n))
    for q in slots:
        for i in range(4):
            a, b = q[i], q[(i + 1) % 4]
            W[a, b] += 1
            W[b, a] += 1
    ring = []
    for c, i in F[outer]:
        if slots[c][i] not in ring:
            ring.append(slots[c][i])
    pos = np.zeros(n, complex)
    fixed = np.zeros(n, bool)
    for k, s in enumerate(ring):
        pos[s] = np.exp(-2j * np.pi * k / len(ring))
        fixed[s] = True
    free = np.flatnonzero(~fixed)
    L = np.diag(W.sum(1)) - W
    pos[free] = np.linalg.solve(L[np.ix_(free, free)], -L[np.ix_(free, np.flatnonzero(fixed))] @ pos[fixed])
    cents = [np.mean([pos[slots[c][i]] for c, i in f]) for k, f in enumerate(F) if k != outer]
    return pos, cents


def _radial_embedding(slots, F, outer, alpha=1 / 3):
    """Tutte embedding of the crossing/face incidence graph.

    A segment sits between the midpoint of its two crossings and the
    centres of its two faces, weighted by alpha.
    """
    C, nf = len(slots), len(F)
    nv = C + nf
    adj = [set() for _ in range(nv)]
    corner_face = {}
    for k, f in enumerate(F):
        for c, i in f:
            adj[c].add(C + k)
            adj[C + k].add(c)
            corner_face[(c, i)] = k
    pos = np.zeros(nv, complex)
    fixed = np.zeros(nv, bool)
    ring = [c for c, _ in F[outer]]
    for k, c in enumerate(ring):
        pos[c] = np.exp(2j * np.pi * k / len(ring))
        fixed[c] = True
    fixed[C + outer] = True
    free = [v for v in range(nv) if not fixed[v]]
    idx = {v: k for k, v in enumerate(free)}
    A = np.zeros((len(free), len(free)))
    b = np.zeros(len(free), complex)
    for v in free:
        nb = [u for u in adj[v] if u != C + outer]
        A[idx[v], idx[v]] = len(nb)
        for u in nb:
            if fixed[u]:
                b[idx[v]] += pos[u]
            else:
                A[idx[v], idx[u]] -= 1
    pos[free] = np.linalg.solve(A, b)
    occ = {}
    for c, q in enumerate(slots):
        for i, s in enumerate(q):
            occ.setdefault(s, []).append((c, i))
    side = np.zeros(2 * C, complex)
    for s, ((c1, i1), (c2, _)) in occ.items():
        adjf = [corner_face[(c1, i1)], corner_face[(c1, (i1 - 1) % 4)]]
        fp = [pos[C + f] for f in adjf if f != outer]
        mid = (pos[c1] + pos[c2]) / 2
        side[s] = (1 - alpha) * mid + alpha * np.mean(fp) if fp else mid
    cents = [pos[C + k] for k in range(nf) if k != outer]
    return side, cents


def _moebius_family(pos, cents):
    """log-coordinates of pos pushed through maps sending face centres to 0 and infinity."""
    pts = list(cents) + [None]
    out = []
    with np.errstate(all="ignore"):
        for o in pts:
            for p in pts:
                if o is p:
                    continue
                if o is None:
                    z = 1 / (pos - p)
                elif p is None:
                    z = pos - o
                else:
                    z = (pos - o) / (pos - p)
                for zz in (z, np.conj(z)):
                    out.append(np.log(zz / zz[0]))
    return out


def regular_seeds(diagram):
    """Deterministic starting points for the complete structure.

    Planar embeddings of the diagram read as segment values, moved by
    Moebius maps that send a face to 0 and another to infinity.
    """
    slots = diagram.slot_table
    F = faces(slots)
    seeds = []
    for outer in sorted(range(len(F)), key=lambda k: (-len(F[k]), k))[:2]:
        seeds += _moebius_family(*_medial_embedding(slots, F, outer))
    outer = max(range(len(F)), key=lambda k: (len(F[k]), -k))
    seeds += _moebius_family(*_radial_embedding(slots, F, outer))
    S = np.array(seeds)
    S = S[np.all(np.isfinite(S), axis=1)]
    S[:, 0] = 0
    return S


# -- public solvers -----------------------------------------------------------

def _solution(w, res, lam=None, warning=None):
    return SegmentSolution(np.exp(w - w[0]), gauge="z1=1", residual=float(res), warning=warning)


def solve_complete(pf, diagram, cfg=SolverConfig(), z0=None):
    """Complete hyperbolic structure: exp(z_k dV/dz_k) = 1 for all k."""
    sys_ = _System(pf)
    target = sys_.target(0.0)
    if cfg.seed_strategy == "given":
        if z0 is None:
            raise ValueError("seed_strategy 'given' needs z0")
        starts = np.log(np.asarray(getattr(z0, "z", z0), complex))[None, :]
    else:
        starts = regular_seeds(diagram)
    starts = starts - starts[:, :1]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        w, res = batch_lm(sys_, starts, target, iters=cfg.lm_iters if z0 is None else 4 * cfg.lm_iters)
    good = np.flatnonzero(res < 1e-9)
    best, best_vol = None, -np.inf
    for k in good:
        try:
            v = formula_value(pf, np.exp(w[k])).imag
        except DegenerateError:
            continue
        if abs(v) > best_vol + 1e-9:
            best, best_vol = k, abs(v)
    if best is None:
        k = int(np.argmin(res))
        raise ConvergenceError("no starting point converged to the complete structure",
                               best=np.exp(w[k]), residual=float(res[k]))
    wb = w[best]
    if formula_value(pf, np.exp(wb)).imag < 0:
        wb = np.conj(wb)  # the mirror solution; conjugation keeps exp(grad) = 1
    wb, r, ok = newton(sys_, wb, target, np.arange(1, sys_.n), cfg.tol, cfg.max_iter)
    if not ok:
        raise ConvergenceError("Newton polish of the complete structure failed",
                               best=np.exp(wb), residual=r)
    vol = formula_value(pf, np.exp(wb)).imag
    warn = None if vol > 1e-9 else f"non-geometric branch: volume {vol:.3e}"
    return _solution(wb, r, warning=warn)


def _volume_or_none(pf, w):
    try:
        return formula_value(pf, np.exp(w - w[0])).imag
    except DegenerateError:
        return None


def solve_orbifold(pf, diagram, r, cfg=SolverConfig(), complete=None, z0=None):
    """Continue the complete structure in cone angle t from 0 to 2 pi / r.

    ``r=None`` returns the complete structure itself.
    """
    if complete is None:
        complete = solve_complete(pf, diagram, cfg, z0=z0)
    if r is None:
        return complete
    sys_ = _System(pf)
    w = np.log(np.asarray(complete.z, complex))
    free = free_coordinates(sys_, w)
    T = 2 * np.pi / r
    dt0 = T / cfg.continuation_steps
    t, dt, halvings = 0.0, dt0, 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        while t < T * (1 - 1e-14):
            t1 = min(T, t + dt)
            wn, res, ok = newton(sys_, w, sys_.target(t1), free, cfg.tol, cfg.max_iter)
            if ok:
                vol = _volume_or_none(pf, wn)
                if vol is None or vol <= VOLUME_FLOOR:
                    # the structure collapses: the orbifold at this angle is not hyperbolic
                    raise ContinuationError(
                        f"volume collapsed to {vol} at t = {t1:.6g}; last good t = {t:.6g}",
                        last_t=t)
                w, t, halvings = wn, t1, 0
                dt = min(dt0, 2 * dt)
                continue
            halvings += 1
            if halvings > cfg.max_halvings:
                raise ContinuationError(
                    f"continuation lost the solution after t = {t:.6g} of {T:.6g}", last_t=t)
            dt /= 2
    z = np.exp(w - w[0])
    u = z[pf._a] / z[pf._b]
    if np.min(np.abs(u)) < 1e-12 or np.min(np.abs(u - 1)) < 1e-12 or not np.all(np.isfinite(z)):
        raise ContinuationError("continuation ended on a degenerate solution", last_t=t)
    return _solution(w, res)
