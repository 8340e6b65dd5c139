import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import tree_walk_scale

from pgtemplates import (
    INF,
    contract_infinite_edges,
    edge_reweight,
    instance_merge,
    instantiate,
    label_isomorphic,
    merge_vertex_instances,
    partial_instantiate_upwards,
    validate,
)
from pgtemplates.errors import BadAddress, UnknownVertex, UnsupportedSiblingSplit
from pgtemplates.samples import ex_in, ex_in2, ex_path, ex_sib, figure_one, random_template
from pgtemplates.weights import scale

FIXTURES = {
    "fig1": figure_one,
    "path": ex_path,
    "sib": ex_sib,
    "in": ex_in,
    "in2": ex_in2,
}


def degree(pgt, v):
    return sum((e.src == v) + (e.dst == v) for e in pgt.edges)


class TestReweight:
    def test_ex_path(self):
        assert [e.weight for e in edge_reweight(ex_path(3)).edges] == [3, 3]

    def test_intra_t3_edge(self):
        pgt = figure_one()
        g = edge_reweight(pgt)
        idx = next(i for i, e in enumerate(pgt.edges) if (e.src, e.dst) == ("c", "e"))
        assert g.edges[idx].weight == 6

    def test_root_edges_unchanged(self):
        pgt = figure_one()
        g = edge_reweight(pgt)
        assert [r.weight for e, r in zip(pgt.edges, g.edges) if (e.src, e.dst) == ("f", "i")] == [1]

    def test_huge_parameter_exact(self):
        assert edge_reweight(ex_path(2**64)).edges[0].weight == 2**64

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6), st.booleans())
    def test_matches_tree_walk(self, seed, siblings):
        pgt = random_template(random.Random(seed), siblings=siblings)
        got = [e.weight for e in edge_reweight(pgt).edges]
        want = [scale(e.weight, f) for e, f in zip(pgt.edges, tree_walk_scale(pgt))]
        assert got == want

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10**6))
    def test_total_weight_equals_instantiation(self, seed):
        pgt = random_template(random.Random(seed), max_parameter=3, siblings=True)
        total = sum(e.weight for e in edge_reweight(pgt).edges)
        assert total == sum(e.weight for e in instantiate(pgt).edges)


def check_merge(pgt, v):
    merged, relabel = instance_merge(pgt, v)
    assert validate(merged) == []
    assert merged.owner(v) == merged.root.id
    left = contract_infinite_edges(instantiate(merged))
    right = merge_vertex_instances(instantiate(pgt), v)
    assert label_isomorphic(left, right, relabel)
    h = pgt.height
    assert len(merged.vertices) - len(pgt.vertices) <= degree(pgt, v) * h
    assert len(merged.edges) - len(pgt.edges) <= degree(pgt, v) * h
    return merged


class TestInstanceMerge:
    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_fixtures_every_vertex(self, name):
        pgt = FIXTURES[name]()
        for v in pgt.vertices:
            check_merge(pgt, v)

    def test_ex_in_shape(self):
        merged = check_merge(ex_in(), "u")
        # only s->u crosses a template boundary; u->t moves up with u's template
        assert sorted(merged.dummies) == ["__dummy0"]
        inf_edges = [(e.src, e.dst) for e in merged.edges if e.weight is INF]
        assert inf_edges == [("__dummy0", "u")]

    def test_root_vertex_is_noop(self):
        pgt = ex_path()
        merged, _ = instance_merge(pgt, "s")
        assert sorted(merged.vertices) == sorted(pgt.vertices)

    def test_sibling_self_loop(self):
        check_merge(ex_sib(), "u")

    def test_unknown(self):
        with pytest.raises(UnknownVertex):
            instance_merge(ex_path(), "zz")

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6), st.booleans())
    def test_random(self, seed, siblings):
        rng = random.Random(seed)
        pgt = random_template(rng, max_parameter=3, siblings=siblings)
        check_merge(pgt, rng.choice(pgt.vertices))


def check_partial(pgt, v, addr):
    pi = partial_instantiate_upwards(pgt, v, addr)
    new = pi.pgt
    assert validate(new) == []
    assert new.owner(v) == new.root.id
    assert label_isomorphic(instantiate(new), instantiate(pgt), pi.relabeling)
    assert pi.relabeling.to_new(v, addr) == (v, ())
    h = pgt.height
    assert pi.splits <= h
    assert len(new.vertices) - len(pgt.vertices) <= len(pgt.vertices) * h
    assert len(new.edges) - len(pgt.edges) <= len(pgt.edges) * h
    return pi


class TestPartialInstantiation:
    @pytest.mark.parametrize("name", ["fig1", "path", "in", "in2"])
    def test_fixtures_every_instance(self, name):
        pgt = FIXTURES[name]()
        for v in pgt.vertices:
            for a in pgt.addresses(v):
                check_partial(pgt, v, a)

    def test_ex_in_t1(self):
        pi = check_partial(ex_in(), "t", (1,))
        assert pi.splits == 1
        assert pi.pgt.parameter(pi.pgt.owner("u~1")) == 2

    def test_relabeling_inverse(self):
        pgt = figure_one()
        pi = partial_instantiate_upwards(pgt, "e", (1, 2))
        for x in instantiate(pi.pgt).vertices:
            old = pi.relabeling.to_old(x.origin, x.address)
            assert pi.relabeling.to_new(*old) == (x.origin, x.address)

    def test_parameter_one_path_needs_no_split(self):
        pi = check_partial(ex_path(1), "v", (0,))
        assert pi.splits == 0

    def test_bad_address(self):
        with pytest.raises(BadAddress):
            partial_instantiate_upwards(ex_path(3), "v", (3,))
        with pytest.raises(BadAddress):
            partial_instantiate_upwards(ex_path(3), "v", ())

    def test_sibling_template_rejected(self):
        with pytest.raises(UnsupportedSiblingSplit):
            partial_instantiate_upwards(ex_sib(), "u", (2,))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6))
    def test_random(self, seed):
        rng = random.Random(seed)
        pgt = random_template(rng, max_parameter=3)
        v = rng.choice(pgt.vertices)
        check_partial(pgt, v, rng.choice(list(pgt.addresses(v))))
