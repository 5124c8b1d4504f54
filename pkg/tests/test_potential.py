from collections import Counter
from importlib.resources import files

import numpy as np
import pytest

from orbivol.diagram import generate_j_diagram, make_diagram, parse_pd
from orbivol.errors import DegenerateError
from orbivol.jknot import JKnotParams, assemble_solution, geometric_lambda
from orbivol.potential import (PotentialFunction, build_potential, eval_grad, eval_v,
                               hyperbolicity_residual)


def _shipped():
    out = [parse_pd(files("orbivol.data").joinpath(f).read_text()) for f in ("figure8.pd", "6_1.pd")]
    return out + [generate_j_diagram(2, 2), generate_j_diagram(3, 1)]


def _away_from_cut(pf, z, eps=1e-3):
    u = z[pf._a] / z[pf._b]
    return np.all((np.abs(u.imag) > eps) | (u.real < 1 - eps))


def test_term_counts():
    for d in _shipped():
        pf = build_potential(d)
        assert len(pf.terms) == 4 * len(d.crossings) == 2 * d.num_segments
        num = Counter(t.num for t in pf.terms)
        den = Counter(t.den for t in pf.terms)
        assert all(num[k] == 2 and den[k] == 2 for k in range(d.num_segments))
        assert all(t.num != t.den for t in pf.terms)


def test_figure_eight_has_sixteen_terms():
    d = parse_pd(files("orbivol.data").joinpath("figure8.pd").read_text())
    assert len(build_potential(d).terms) == 16


def test_relabel_invariance():
    d = generate_j_diagram(2, 1)
    pf = build_potential(d)
    perm = np.random.default_rng(0).permutation(d.num_segments)
    e = make_diagram([tuple(int(perm[s]) for s in q) for q in d.slot_table])
    pe = build_potential(e)
    assert Counter((t.sign, perm[t.num], perm[t.den]) for t in pf.terms) == \
        Counter((t.sign, t.num, t.den) for t in pe.terms)


def test_value_at_closed_form_solution():
    sol = assemble_solution(JKnotParams(1, 1, 6), 1j)
    pf = build_potential(generate_j_diagram(1, 1))
    v = eval_v(pf, sol)
    assert np.isfinite(v.real) and np.isfinite(v.imag)
    g = eval_grad(pf, sol)
    want = 2j * np.pi / 6 * pf.side_types
    k = np.round((g - want).imag / (2 * np.pi))
    assert np.max(np.abs(g - want - 2j * np.pi * k)) <= 1e-9
    assert hyperbolicity_residual(pf, sol, 6) <= 1e-9


def test_degenerate():
    pf = build_potential(generate_j_diagram(1, 1))
    with pytest.raises(DegenerateError):
        eval_v(pf, np.ones(8))
    z = np.exp(1j * np.arange(8))
    z[3] = 0
    with pytest.raises(DegenerateError):
        eval_grad(pf, z)


def test_linearity_over_terms():
    d = generate_j_diagram(2, 2)
    pf = build_potential(d)
    z = np.exp(np.random.default_rng(1).normal(size=d.num_segments) * (1 + 1j))
    k = len(pf.terms) // 3
    a = PotentialFunction(pf.terms[:k], pf.num_segments, pf.side_types)
    b = PotentialFunction(pf.terms[k:], pf.num_segments, pf.side_types)
    assert abs(eval_v(a, z) + eval_v(b, z) - eval_v(pf, z)) < 1e-12


def test_gradient_finite_differences():
    rng = np.random.default_rng(2)
    h = 1e-5
    for d in _shipped():
        pf = build_potential(d)
        done = 0
        while done < 100:
            z = np.exp(0.7 * rng.normal(size=d.num_segments) + 1j * rng.uniform(-np.pi, np.pi, d.num_segments))
            if not _away_from_cut(pf, z):
                continue
            g = eval_grad(pf, z)
            k = int(rng.integers(d.num_segments))
            zp, zm = z.copy(), z.copy()
            zp[k] *= np.exp(h)
            zm[k] *= np.exp(-h)
            fd = (eval_v(pf, zp) - eval_v(pf, zm)) / (2 * h)
            assert abs(fd - g[k]) <= 1e-6 * max(1, abs(g[k]))
            done += 1


def test_scale_invariance():
    rng = np.random.default_rng(3)
    for d in _shipped():
        pf = build_potential(d)
        z = np.exp(rng.normal(size=d.num_segments) + 1j * rng.normal(size=d.num_segments))
        c = 2.0 if d.num_segments % 2 else 0.3 - 1.7j
        assert abs(eval_v(pf, c * z) - eval_v(pf, z)) < 1e-12 * max(1, abs(eval_v(pf, z)))
        assert np.allclose(eval_grad(pf, 2 * z), eval_grad(pf, z), atol=1e-13)
        assert np.allclose(eval_grad(pf, c * z), eval_grad(pf, z), atol=1e-13)


def test_gradient_sum_vanishes():
    for n, m, r in ((1, 1, 5), (2, 2, 7), (4, 3, 4)):
        _, sol, _ = geometric_lambda(JKnotParams(n, m, r))
        g = eval_grad(build_potential(generate_j_diagram(n, m)), sol)
        assert abs(g.sum()) <= 1e-9


def test_shape_mismatch():
    pf = build_potential(generate_j_diagram(1, 1))
    with pytest.raises(ValueError):
        eval_v(pf, np.ones(7))
