import math
from collections import defaultdict

import numpy as np
import pytest

from orbivol.cvolume import complex_volume, cs_distance, load_table1, modulus, table1_row
from orbivol.diagram import generate_j_diagram
from orbivol.errors import NonHyperbolicError, PreconditionError
from orbivol.jknot import JKnotParams, geometric_lambda
from orbivol.potential import build_potential


def _close_mod(inv, w, tol):
    return (abs(inv.volume - w.imag) <= tol
            and cs_distance(inv.cs_rep, -w.real, inv.modulus) <= tol)


def test_modulus():
    assert modulus(3) == pytest.approx(math.pi ** 2 / 3)
    assert modulus(6) == pytest.approx(2 * math.pi ** 2 / 6)
    assert modulus(None) == pytest.approx(math.pi ** 2)


@pytest.mark.parametrize("two_n,two_m,r,lam,w", [
    (2, 2, 6, None, 3.28986813 + 1.22128746j),
    (4, 2, 3, None, -1.72777496 + 0.65424589j),
    (6, 4, 7, -2.3472075730 + 0.2551155981j, -5.69589799 + 5.15588538j),
    (8, 8, 5, None, 3.94784176 + 5.77639916j),
])
def test_table_examples(two_n, two_m, r, lam, w):
    inv = table1_row(JKnotParams.from_table(two_n, two_m, r))
    assert _close_mod(inv, w, 1e-7)
    assert 0 <= inv.cs_rep < inv.modulus
    assert inv.volume > 0
    if lam is not None:
        assert abs(inv.lam - lam) <= 1e-9


def test_non_hyperbolic():
    with pytest.raises(NonHyperbolicError):
        table1_row(JKnotParams.from_table(2, 2, 3))


def test_zero_cs_for_symmetric_families():
    for g in load_table1():
        if g.two_n == g.two_m:
            inv = table1_row(JKnotParams.from_table(g.two_n, g.two_m, g.r))
            assert cs_distance(inv.cs_rep, 0, inv.modulus) <= 1e-7


def test_volume_monotone_in_r():
    fam = defaultdict(list)
    for g in load_table1():
        fam[(g.two_n, g.two_m)].append(g.r)
    for (two_n, two_m), rs in fam.items():
        vols = [table1_row(JKnotParams.from_table(two_n, two_m, r)).volume for r in sorted(rs)]
        assert all(b >= a for a, b in zip(vols, vols[1:]))


def test_gauge_diagnostic():
    p = JKnotParams(3, 2, 5)
    _, sol, _ = geometric_lambda(p)
    pf = build_potential(generate_j_diagram(3, 2))
    inv = complex_volume(pf, sol, 5)
    assert abs(inv.grad_sum) <= 1e-9
    # complex_volume pins the gauge itself, so a rescaled input gives the same w
    again = complex_volume(pf, (0.4 + 2j) * sol.z, 5)
    assert abs(again.w_raw - inv.w_raw) <= 1e-9


def test_precondition():
    pf = build_potential(generate_j_diagram(1, 1))
    z = np.exp(1j * np.arange(8) * 0.7)
    with pytest.raises(PreconditionError):
        complex_volume(pf, z, 5)


def test_cs_normalized():
    inv = table1_row(JKnotParams.from_table(4, 2, 5))
    assert 0 <= inv.cs_normalized < 1 / 5
    want = (-inv.w_raw.real / (-2 * math.pi ** 2)) % (1 / 5)
    assert min(abs(inv.cs_normalized - want), 1 / 5 - abs(inv.cs_normalized - want)) < 1e-12


def test_golden_table_shape():
    rows = load_table1()
    assert len(rows) == 79
    assert len({(g.two_n, g.two_m, g.r) for g in rows}) == 79
    assert all(g.lam.imag > 0 and g.cvol.imag > 0 for g in rows)
