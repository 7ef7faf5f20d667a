"""Instance model: validation, edge derivation, components, feasibility,
and the on-disk format."""

import json

import numpy as np
import pytest

import rangeassign as ra
from rangeassign.instance import Instance

from helpers import bfs_components, feasible_by_hand, mutual_edges


def inst_of(n, dmin, dmax, **kw):
    return Instance.from_mappings(n, dmin, dmax, **kw)


# ---------------------------------------------------------------- validate

def test_validate_minimal_ok():
    inst = inst_of(2, {0: {1}, 1: {0}}, {0: {1}, 1: {0}})
    assert ra.validate(inst) == []


def test_validate_containment_broken():
    inst = inst_of(2, {0: {1}, 1: set()}, {0: set(), 1: {0}})
    kinds = {v.kind for v in ra.validate(inst)}
    assert "containment" in kinds
    bad = [v for v in ra.validate(inst) if v.kind == "containment"]
    assert bad[0].nodes == (0, 1)


def test_validate_disconnected_max_graph():
    inst = inst_of(3, {0: set(), 1: set(), 2: set()},
                   {0: {1}, 1: {0}, 2: set()})
    vs = ra.validate(inst)
    assert any(v.kind == "disconnected" and "2 components" in v.message
               for v in vs)


def test_validate_asymmetric_relations_accepted():
    # u reaching v without v reaching u is fine; it just yields no edge
    inst = inst_of(2, {0: set(), 1: set()}, {0: {1}, 1: {0}})
    assert ra.validate(inst) == []
    inst2 = inst_of(3, {}, {0: {1, 2}, 1: {0, 2}, 2: {0}})
    assert ra.validate(inst2) == []
    assert mutual_edges(inst2, "max") == {(0, 1), (0, 2)}


def test_ensure_valid_raises_and_caches():
    inst = inst_of(2, {0: set(), 1: set()}, {0: set(), 1: set()})
    with pytest.raises(ra.InvalidInstanceError):
        inst.ensure_valid()


# ------------------------------------------------------------ derive_edges

def test_asymmetric_link_is_no_edge():
    inst = inst_of(2, {}, {0: {1}, 1: {0}})
    pg = ra.derive_edges(inst)
    assert pg.e_max.tolist() == [[0, 1]]
    asym = inst_of(2, {}, {0: {1}, 1: set()})
    # invalid (disconnected) but derivation logic is still checkable
    assert mutual_edges(asym, "max") == set()


def test_derive_edges_worst_case_counts(worst_case_t1):
    pg = worst_case_t1.instance.graph()
    assert len(pg.e_min) == 3
    assert len(pg.e_max) == 9


def test_derive_edges_matches_literal_expansion(worst_case_t1):
    # recompute both edge sets straight from structural labels
    fam = worst_case_t1
    ident = {lab: i for i, lab in enumerate(fam.labels)}
    k, t = fam.k, fam.t
    emin = set()
    for d in range(1, t + 1):
        emin.add(tuple(sorted((ident[(0, 0, 0)], ident[(d, 3, 0)]))))
        for c in range(1, k):
            emin.add(tuple(sorted((ident[(d, 2, c)], ident[(d, 3, c)]))))
    emax = set(emin)
    for d in range(1, t + 1):
        emax.add(tuple(sorted((ident[(0, 0, 0)], ident[(d, 2, 1)]))))
        for r in (2, 3):
            for c in range(1, k - 1):
                emax.add(tuple(sorted((ident[(d, r, c)], ident[(d, r, c + 1)]))))
        emax.add(tuple(sorted((ident[(d, 3, 0)], ident[(d, 3, 1)]))))
        for c in range(1, k):
            emax.add(tuple(sorted((ident[(d, 1, c)], ident[(d, 2, c)]))))
    pg = fam.instance.graph()
    assert {tuple(e) for e in pg.e_min.tolist()} == emin
    assert {tuple(e) for e in pg.e_max.tolist()} == emax


def test_derived_edges_are_mutual(small_corpus):
    for inst in small_corpus[::7]:
        pg = inst.graph()
        for u, v in pg.e_max.tolist():
            assert v in inst.d_max(u) and u in inst.d_max(v)
        assert {tuple(e) for e in pg.e_min.tolist()} == mutual_edges(inst, "min")


def test_e_min_subset_of_e_max(small_corpus):
    for inst in small_corpus:
        pg = inst.graph()
        emax = {tuple(e) for e in pg.e_max.tolist()}
        assert {tuple(e) for e in pg.e_min.tolist()} <= emax


# -------------------------------------------------------------- components

def test_components_trivial():
    assert ra.components(4, []).count == 4
    lab = ra.components(4, [(0, 1), (2, 3)])
    assert lab.count == 2
    assert lab.label.tolist() == [0, 0, 1, 1]


@pytest.mark.parametrize("t", [1, 2, 3])
def test_components_worst_case_family(t):
    # hub+spine star is one component, each (d,2,c)-(d,3,c) pair is one,
    # and each (d,1,c) node starts isolated: 1 + 2(k-1)t in total
    fam = ra.gen_worst_case(3, t)
    lab = ra.components(fam.instance.n, fam.instance.graph().e_min)
    assert lab.count == 1 + 4 * t


def test_components_against_bfs_oracle(small_corpus):
    for inst in small_corpus[::5]:
        pg = inst.graph()
        for edges in (pg.e_min, pg.e_max):
            got = ra.components(inst.n, edges)
            labels, count = bfs_components(inst.n, edges.tolist())
            assert got.count == count
            assert got.label.tolist() == labels


def test_components_rejects_out_of_range():
    with pytest.raises(ra.InstanceError):
        ra.components(3, [(0, 5)])


# ------------------------------------------------------------ min_max_graph

def test_min_max_graph_extremes(small_corpus):
    for inst in small_corpus[::9]:
        pg = inst.graph()
        empty = ra.min_max_graph(inst, set())
        assert np.array_equal(np.unique(empty, axis=0) if empty.size else empty,
                              pg.e_min)
        full = ra.min_max_graph(inst, set(range(inst.n)))
        assert {tuple(e) for e in full.tolist()} == \
            {tuple(e) for e in pg.e_max.tolist()}


def test_min_max_graph_worst_case_boost(worst_case_t1):
    inst = worst_case_t1.instance
    edges = {tuple(e) for e in ra.min_max_graph(inst, {5, 6, 7}).tolist()}
    base = {tuple(e) for e in inst.graph().e_min.tolist()}
    assert edges == base | {(5, 6), (6, 7)}


def test_min_max_graph_monotone(small_corpus):
    rng = np.random.default_rng(3)
    for inst in small_corpus[::6]:
        nodes = rng.permutation(inst.n)
        small = set(int(x) for x in nodes[:inst.n // 2])
        big = small | {int(nodes[inst.n // 2])}
        e_small = {tuple(e) for e in ra.min_max_graph(inst, small).tolist()}
        e_big = {tuple(e) for e in ra.min_max_graph(inst, big).tolist()}
        assert e_small <= e_big
        if ra.is_feasible(inst, small):
            assert ra.is_feasible(inst, big)


def test_min_max_graph_rejects_bad_ids(worst_case_t1):
    with pytest.raises(ra.InstanceError):
        ra.min_max_graph(worst_case_t1.instance, {99})


# -------------------------------------------------------------- is_feasible

def test_is_feasible_basics(worst_case_t1):
    inst = worst_case_t1.instance
    assert ra.is_feasible(inst, set(range(inst.n)))
    assert ra.is_feasible(inst, {0, 1, 2, 3, 4})   # the unique optimum
    assert not ra.is_feasible(inst, set())


def test_is_feasible_matches_hand_check(small_corpus):
    rng = np.random.default_rng(11)
    for inst in small_corpus[::8]:
        for _ in range(4):
            u = {int(x) for x in rng.permutation(inst.n)[:rng.integers(0, inst.n + 1)]}
            assert ra.is_feasible(inst, u) == feasible_by_hand(inst, u)


# ---------------------------------------------------------------- load/save

def test_round_trip_minimal(tmp_path):
    inst = inst_of(2, {0: {1}, 1: {0}}, {0: {1}, 1: {0}})
    path = tmp_path / "two.json"
    ra.save(inst, path)
    assert ra.load(path) == inst


def test_round_trip_generated(tmp_path):
    fam = ra.gen_worst_case(4, 3)
    path = tmp_path / "wc.json"
    ra.save(fam.instance, path)
    loaded = ra.load(path)
    assert loaded == fam.instance
    assert loaded.digest() == fam.instance.digest()
    # saving again reproduces identical bytes
    path2 = tmp_path / "wc2.json"
    ra.save(loaded, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_load_rejects_out_of_range_neighbor(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "dmin": [[], []], "dmax": [[1], [7]]}))
    with pytest.raises(ra.InstanceError) as err:
        ra.load(path)
    assert "dmax[1]" in str(err.value) and "7" in str(err.value)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("{not json")
    with pytest.raises(ra.InstanceError):
        ra.load(path)
    path.write_text(json.dumps({"n": 2, "dmin": [[], []]}))
    with pytest.raises(ra.InstanceError) as err:
        ra.load(path)
    assert "dmax" in str(err.value)


def test_load_rejects_disconnected(tmp_path):
    path = tmp_path / "disc.json"
    path.write_text(json.dumps(
        {"n": 3, "dmin": [[], [], []], "dmax": [[1], [0], []]}))
    with pytest.raises(ra.InvalidInstanceError) as err:
        ra.load(path)
    assert "2 components" in str(err.value)


def test_load_normalize_widens_dmax(tmp_path):
    path = tmp_path / "repair.json"
    path.write_text(json.dumps(
        {"n": 2, "dmin": [[1], [0]], "dmax": [[], [0]]}))
    with pytest.raises(ra.InvalidInstanceError):
        ra.load(path)
    inst = ra.load(path, normalize=True)
    assert inst.d_max(0).tolist() == [1]


def test_self_loops_stripped(caplog):
    import logging
    with caplog.at_level(logging.WARNING, logger="rangeassign.instance"):
        inst = inst_of(2, {0: {0, 1}, 1: {0}}, {0: {0, 1}, 1: {0, 1}})
    assert ra.validate(inst) == []
    assert inst.d_min(0).tolist() == [1]
    assert "self-loop" in caplog.text
