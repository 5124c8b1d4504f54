import itertools
from importlib.resources import files

import numpy as np
import pytest

from orbivol.diagram import (SideType, classify_sides, emit, faces, generate_j_diagram,
                             make_diagram, parse_pd)
from orbivol.errors import NonAlternatingError, ParseError, StructuralError
from orbivol.jknot import JKnotParams, geometric_lambda
from orbivol.potential import build_potential, eval_grad


def _pd(name):
    return files("orbivol.data").joinpath(name).read_text()


def _isomorphic(a, b):
    """Brute force: crossing permutation plus a consistent segment bijection."""
    if len(a) != len(b):
        return False
    for perm in itertools.permutations(range(len(b))):
        mp = {}
        if all(mp.setdefault(x, y) == y for qa, k in zip(a, perm) for x, y in zip(qa, b[k])) \
                and len(set(mp.values())) == len(mp):
            return True
    return False


def _reverse(slots):
    # reversing the strand orientation swaps the roles of A and C at every crossing
    return [q[2:] + q[:2] for q in slots]


def test_figure_eight_parse():
    d = parse_pd(_pd("figure8.pd"))
    assert d.num_segments == 8 and len(d.crossings) == 4


def test_figure_eight_is_j11():
    a = parse_pd(_pd("figure8.pd")).slot_table
    b = generate_j_diagram(1, 1).slot_table
    assert _isomorphic(a, b) or _isomorphic(_reverse(a), b)


def test_six_one_is_j21():
    assert _isomorphic(parse_pd(_pd("6_1.pd")).slot_table, generate_j_diagram(2, 1).slot_table)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_pd("X 1 2 3")
    with pytest.raises(ParseError) as e:
        parse_pd("X 4 2 5 1\nY 8 6 1 5\n")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_pd("# nothing\n")
    with pytest.raises(StructuralError):
        parse_pd("X 1 2 3 4\nX 1 2 3 5\n")


def test_bracket_syntax():
    text = "X[4,2,5,1]\nX[8,6,1,5]\nX[6,3,7,4]\nX[2,7,3,8]\n"
    assert parse_pd(text).slot_table == parse_pd(_pd("figure8.pd")).slot_table


def test_non_alternating_rejected():
    # figure-eight with the first crossing switched
    with pytest.raises(NonAlternatingError):
        parse_pd("X 1 4 2 5\nX 8 6 1 5\nX 6 3 7 4\nX 2 7 3 8\n")


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (1, 3), (3, 3), (4, 4)])
def test_generated_counts(n, m):
    d = generate_j_diagram(n, m)
    assert len(d.crossings) == 2 * n + 2 * m
    assert d.num_segments == 2 * len(d.crossings)
    assert len(d.labels) == d.num_segments


def test_type_census():
    for n in range(1, 5):
        for m in range(1, 5):
            t = generate_j_diagram(n, m).side_types
            assert t.count(SideType.TYPE_I) == t.count(SideType.TYPE_II)


def test_faces_euler():
    for n, m in ((1, 1), (2, 3), (4, 4)):
        d = generate_j_diagram(n, m)
        assert len(faces(d)) == len(d.crossings) + 2


def test_relabel_invariance():
    d = generate_j_diagram(2, 2)
    rng = np.random.default_rng(0)
    perm = rng.permutation(d.num_segments)
    slots = [tuple(int(perm[s]) for s in q) for q in d.slot_table]
    t = classify_sides(slots)
    assert all(t[perm[k]] == d.side_types[k] for k in range(d.num_segments))


def test_emit_round_trip():
    for d in (parse_pd(_pd("figure8.pd")), parse_pd(_pd("6_1.pd")), generate_j_diagram(3, 2)):
        e = parse_pd(emit(d))
        assert e.slot_table == d.slot_table
        assert [c.handedness for c in e.crossings] == [c.handedness for c in d.crossings]


@pytest.mark.parametrize("n,m,r", [(1, 1, 5), (2, 2, 4), (3, 1, 7)])
def test_types_match_closed_form_signs(n, m, r):
    d = generate_j_diagram(n, m)
    _, sol, _ = geometric_lambda(JKnotParams(n, m, r))
    e = np.exp(eval_grad(build_potential(d), sol))
    for k, t in enumerate(d.side_types):
        assert abs(e[k] - np.exp(2j * np.pi * int(t) / r)) <= 1e-9


def test_make_diagram_validation():
    with pytest.raises(StructuralError):
        make_diagram([])
    with pytest.raises(StructuralError):
        make_diagram([(0, 1, 2)])
    with pytest.raises(StructuralError):
        make_diagram([(0, 1, 1, 0)] + [(2, 3, 2, 3)])
