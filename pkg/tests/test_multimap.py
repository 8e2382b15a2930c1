import json
import pickle

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paraselect.benchmarks import mixed_map, two_point_map, vgraph_map
from paraselect.errors import ContractError, InputError
from paraselect.geometry import Ball, PointCloud
from paraselect.multimap import (WHOLE_SPACE, DomainComplex, SetValuedMap, VertexFunction,
                                 build_cover_chain, d_proximal_report, lsc_defect, preimage)


def line_map(values):
    vals = [v if v is WHOLE_SPACE else PointCloud(np.reshape(v, (-1, 1))) for v in values]
    return SetValuedMap(DomainComplex.grid(len(vals)), vals, 1)


# --- domain ----------------------------------------------------------------


def test_domain_validation():
    with pytest.raises(InputError):
        DomainComplex([[0.0], [1.0]], [[0, 2]])
    with pytest.raises(InputError):
        DomainComplex([[0.0], [1.0]], [[0, 0]])
    with pytest.raises(InputError):
        DomainComplex([[0.0], [1.0], [2.0]], [[0, 1]])  # disconnected
    with pytest.raises(InputError):
        DomainComplex([[0.0], [1.0]], [[0, 1]], lengths=[2.0])
    with pytest.raises(InputError):
        DomainComplex([[0.0], [0.0]], [[0, 1]])
    assert len(DomainComplex([[0.0]], np.zeros((0, 2)))) == 1


def test_domain_dilate():
    dom = DomainComplex.grid(5)
    assert dom.dilate({2}) == {1, 2, 3}
    assert dom.dilate({0, 4}) == {0, 1, 3, 4}


def test_domain_json_and_id_form():
    dom = DomainComplex.grid(4)
    back = DomainComplex.from_dict(json.loads(json.dumps(dom.to_dict())))
    assert np.array_equal(back.coords, dom.coords) and np.array_equal(back.edges, dom.edges)
    data = {"vertices": [{"id": 1, "coords": [1.0]}, {"id": 0, "coords": [0.0]}],
            "edges": [[0, 1]]}
    assert DomainComplex.from_dict(data).coords.ravel().tolist() == [0.0, 1.0]
    with pytest.raises(InputError):
        DomainComplex.from_dict({"edges": []})


# --- set-valued maps -------------------------------------------------------


def test_map_json_roundtrip_with_whole_space():
    phi = mixed_map(7)
    back = SetValuedMap.from_dict(json.loads(json.dumps(phi.to_dict())))
    for a, b in zip(phi.values, back.values):
        assert (a is WHOLE_SPACE and b is WHOLE_SPACE) or np.array_equal(a.points, b.points)


def test_whole_space_is_a_singleton():
    assert pickle.loads(pickle.dumps(WHOLE_SPACE)) is WHOLE_SPACE


def test_map_validation():
    dom = DomainComplex.grid(2)
    with pytest.raises(InputError):
        SetValuedMap(dom, [PointCloud([[0.0]])], 1)
    with pytest.raises(InputError):
        SetValuedMap(dom, [PointCloud([[0.0]]), PointCloud([[0.0, 1.0]])], 1)
    with pytest.raises(InputError):
        SetValuedMap(dom, [PointCloud([[0.0]]), [[1.0]]], 1)


def test_map_distances():
    phi = line_map([[0.0, 1.0], WHOLE_SPACE])
    assert phi.distance(0, [0.25]) == 0.25
    assert phi.distance(1, [99.0]) == 0.0


# --- preimage --------------------------------------------------------------


def test_preimage_examples():
    phi = line_map([[0.0], [1.0], [2.0], WHOLE_SPACE])
    assert preimage(phi, Ball([0.0], 1.0)) == {0, 3}  # open ball misses 1
    assert preimage(phi, Ball([0.0], 1.5)) == {0, 1, 3}
    assert preimage(phi, Ball([10.0], 0.1)) == {3}


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8), st.floats(0.01, 3), st.floats(0.01, 3))
def test_preimage_monotone_in_radius(xs, r1, r2):
    phi = line_map([[x] for x in xs])
    lo, hi = sorted((r1, r2))
    assert preimage(phi, Ball([0.0], lo)) <= preimage(phi, Ball([0.0], hi))


# --- lower semicontinuity surrogate ---------------------------------------


def test_lsc_defect_jump():
    dom = DomainComplex.path([0.0, 0.1])
    phi = SetValuedMap(dom, [PointCloud([[0.0]]), PointCloud([[5.0]])], 1)
    rep = lsc_defect(phi, 1.0)
    assert rep.max_modulus == pytest.approx(50.0)
    assert rep.flagged_edges() == [(0, 1)]


def test_lsc_defect_asymmetric_and_whole_space():
    phi = line_map([[0.0], [0.0, 1.0], WHOLE_SPACE])
    rep = lsc_defect(phi, 0.5)
    assert rep.forward[0] == 0.0 and rep.backward[0] == 1.0
    assert rep.moduli[1] == 0.0
    assert rep.flagged_edges() == [(0, 1)]
    with pytest.raises(InputError):
        lsc_defect(phi, 0.0)


def test_constant_map_has_zero_moduli():
    assert lsc_defect(two_point_map(5), 1e-6).max_modulus == 0.0


# --- proximal pair check ---------------------------------------------------


def test_d_proximal_cases():
    psi = line_map([[0.0, 1.0], [0.0, 1.0], WHOLE_SPACE])
    phi = line_map([[0.0], [0.0, 1.0], [3.0]])
    rep = d_proximal_report(phi, psi, 0.5)
    assert rep.ok
    assert rep.differs.tolist() == [True, False, True]
    bad = line_map([[0.0], [2.0], [3.0]])
    with pytest.raises(ContractError):
        d_proximal_report(bad, psi, 0.5)
    open_phi = line_map([[0.0], [0.0, 1.0], WHOLE_SPACE])
    assert d_proximal_report(open_phi, psi, 0.5).ok
    jumpy = line_map([[0.0], [5.0], WHOLE_SPACE])
    assert not d_proximal_report(jumpy, jumpy, 0.5).ok


# --- cover chains ----------------------------------------------------------


def test_cover_chain_single_level():
    chain = build_cover_chain(vgraph_map(21, step=0.1), 2.0)
    assert len(chain.levels) == 1 and chain.levels[0].A == frozenset(range(21))


def test_cover_chain_lifted_vgraph_has_levels():
    phi = vgraph_map(21, step=0.1, lift_slope=2.5)
    chain = build_cover_chain(phi, 2.0)
    assert len(chain.levels) >= 2
    assert chain.violations(phi) == []


def test_cover_chain_mixed_map():
    phi = mixed_map(21)
    chain = build_cover_chain(phi, 2.0)
    assert 10 in chain.levels[0].A  # whole space meets every ball
    assert chain.violations(phi) == []


def test_cover_chain_validation():
    with pytest.raises(InputError):
        build_cover_chain(two_point_map(3), 1.0)


def test_cover_chain_violation_detection():
    phi = vgraph_map(11, step=0.1, lift_slope=2.5)
    chain = build_cover_chain(phi, 2.0)
    chain.levels[0].A = frozenset(range(11))
    assert chain.violations(phi)


@given(st.lists(st.floats(0, 40), min_size=1, max_size=12), st.floats(1.1, 4))
def test_cover_chain_invariants(norms, beta):
    phi = line_map([[x] for x in norms])
    chain = build_cover_chain(phi, beta)
    assert chain.violations(phi) == []
    As = [lvl.A for lvl in chain.levels]
    assert all(a <= b for a, b in zip(As, As[1:]))
    assert As[-1] == frozenset(range(len(norms)))


# --- vertex functions ------------------------------------------------------


def test_vertex_function_interpolation():
    dom = DomainComplex.grid(3)
    f = VertexFunction([[0.0], [1.0], [4.0]], dom)
    assert f.evaluate([0.25]).tolist() == [0.5]
    assert f.evaluate([0.75]).tolist() == [2.5]
    assert f.midpoint_values().ravel().tolist() == [0.5, 2.5]
    with pytest.raises(InputError):
        f.evaluate([2.0])
    with pytest.raises(InputError):
        VertexFunction([[0.0]], dom)
    with pytest.raises(InputError):
        VertexFunction([[np.nan]] * 3, dom)
