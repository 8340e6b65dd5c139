import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgtemplates import (
    CyclicShift,
    Edge,
    ParametricGraphTemplate,
    Permutation,
    TemplateNode,
    boundary_vertices,
    instantiate,
    instantiation_size,
    is_template_acyclic,
    lca_template,
    template_of,
    tree_height,
    validate,
)
from pgtemplates.errors import UnknownTemplate, UnknownVertex
from pgtemplates.samples import ex_in2, ex_path, ex_sib, figure_one, random_template


def rules(pgt):
    return {v.rule for v in validate(pgt)}


def one_level(edges, vertices=("s", "t", "v"), owned=("v",), parameter=3):
    root_owned = set(vertices) - set(owned)
    root = TemplateNode("T0", 1, root_owned, [TemplateNode("T1", parameter, set(owned))])
    return ParametricGraphTemplate(vertices, edges, root)


class TestFigureOne:
    def test_valid_with_height_two(self):
        pgt = figure_one()
        assert validate(pgt) == []
        assert tree_height(pgt) == 2

    def test_ownership(self):
        pgt = figure_one()
        assert template_of(pgt, "e") == "T3"
        assert template_of(pgt, "c") == "T2"
        assert template_of(pgt, "a") == "T0"
        assert pgt.vertex_path("e") == ["T0", "T2", "T3"]

    def test_sixteen_instance_vertices(self):
        # a f g i once, b twice, c d twice, e 2*3 times
        pgt = figure_one()
        assert instantiation_size(pgt)[0] == 4 + 2 + 2 * 2 + 2 * 3 == 16
        assert len(instantiate(pgt).vertices) == 16

    def test_lca(self):
        pgt = figure_one()
        assert lca_template(pgt, "e", "b") == "T0"
        assert lca_template(pgt, "e", "d") == "T2"
        assert lca_template(pgt, "e", "e") == "T3"


class TestBoundary:
    def test_ex_path(self):
        assert boundary_vertices(ex_path(), "T1") == {"s", "t"}

    def test_root_has_none(self):
        assert boundary_vertices(figure_one(), "T0") == set()

    def test_nested(self):
        pgt = figure_one()
        assert boundary_vertices(pgt, "T3") == {"c", "d"}
        assert boundary_vertices(pgt, "T2") == {"a", "g"}

    def test_unknown_template(self):
        with pytest.raises(UnknownTemplate):
            boundary_vertices(ex_path(), "nope")


class TestValidate:
    def test_jumping_edge(self):
        pgt = figure_one()
        bad = ParametricGraphTemplate(pgt.vertices, list(pgt.edges) + [Edge("a", "e")], pgt.root)
        assert "NoJumping" in rules(bad)

    def test_root_parameter(self):
        root = TemplateNode("T0", 2, {"s"})
        assert "RootParameter" in rules(ParametricGraphTemplate(["s"], [], root))

    def test_zero_parameter(self):
        assert "Parameter" in rules(one_level([], parameter=0))

    def test_unowned_and_doubly_owned(self):
        root = TemplateNode("T0", 1, {"s", "v"}, [TemplateNode("T1", 2, {"v"})])
        found = rules(ParametricGraphTemplate(["s", "v", "t"], [], root))
        assert {"UnownedVertex", "MultiplyOwned"} <= found

    def test_negative_weight(self):
        assert "Weight" in rules(one_level([Edge("s", "v", -1)]))

    def test_unknown_endpoint(self):
        assert "UnknownEndpoint" in rules(one_level([Edge("s", "zz")]))

    def test_sibling_must_be_bijection(self):
        bad = one_level([Edge("v", "v", 1, Permutation((0, 0, 1)))])
        assert "SiblingFunction" in rules(bad)

    def test_sibling_within_one_template(self):
        bad = one_level([Edge("s", "v", 1, CyclicShift(1))])
        assert "SiblingOwner" in rules(bad)

    def test_empty_leaf_template(self):
        root = TemplateNode("T0", 1, {"s"}, [TemplateNode("T1", 2, set())])
        assert "EmptyTemplate" in rules(ParametricGraphTemplate(["s"], [], root))

    def test_at_sign_reserved(self):
        root = TemplateNode("T0", 1, {"a@1"})
        assert "VertexId" in rules(ParametricGraphTemplate(["a@1"], [], root))

    def test_duplicate_template_id(self):
        root = TemplateNode("T0", 1, {"s"}, [TemplateNode("T1", 2, {"u"}), TemplateNode("T1", 2, {"v"})])
        assert "DuplicateTemplate" in rules(ParametricGraphTemplate(["s", "u", "v"], [], root))

    def test_unknown_vertex_query(self):
        with pytest.raises(UnknownVertex):
            template_of(ex_path(), "nope")


class TestTemplateCycles:
    def test_path_is_cyclic_through_child(self):
        ok, witness = is_template_acyclic(ex_path())
        assert not ok
        assert witness[0] == "s" and witness[-1] == "t"

    def test_single_template_is_acyclic(self):
        root = TemplateNode("T0", 1, {"a", "b"})
        pgt = ParametricGraphTemplate(["a", "b"], [Edge("a", "b"), Edge("b", "a")], root)
        assert is_template_acyclic(pgt) == (True, None)

    def test_one_way_into_child(self):
        pgt = one_level([Edge("s", "v")])
        assert is_template_acyclic(pgt)[0]

    def test_ex_in2_cycles(self):
        assert not is_template_acyclic(ex_in2())[0]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6))
    def test_witness_leaves_and_reenters(self, seed):
        pgt = random_template(random.Random(seed), max_vertices=8, max_edges=12)
        ok, witness = is_template_acyclic(pgt)
        if ok:
            return
        owners = [pgt.owner(x) for x in witness]
        assert owners[0] == owners[-1]
        assert any(o != owners[0] for o in owners[1:-1])
        arcs = {(e.src, e.dst) for e in pgt.edges}
        assert all((a, b) in arcs for a, b in zip(witness, witness[1:]))


def brute_size(pgt):
    g = instantiate(pgt, None)
    return len(g.vertices), len(g.edges)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_instantiation_size_matches_expansion(seed, siblings):
    pgt = random_template(random.Random(seed), max_parameter=3, siblings=siblings)
    assert validate(pgt) == []
    assert instantiation_size(pgt) == brute_size(pgt)


def test_single_template_size_is_n():
    root = TemplateNode("T0", 1, {"a", "b", "c"})
    pgt = ParametricGraphTemplate("abc", [Edge("a", "b")], root)
    assert instantiation_size(pgt) == (3, 1)


def test_sibling_fixture_counts():
    pgt = ex_sib()
    assert sum(e.sibling is not None for e in pgt.edges) == 1
    assert instantiation_size(pgt) == (6, 12)
