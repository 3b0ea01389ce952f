from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_context
from src.fca.concept_lattice import (
    Concept,
    attribute_concept,
    build_hasse,
    enumerate_concepts,
    hasse_distance,
    make_concept,
    object_concept,
)
from src.fca.cxt_format import parse_cxt, read_cxt, render_cxt, write_cxt
from src.fca.dot_export import COVERING_COLOR, HIGHLIGHT_COLOR, reduced_labels, render_dot, write_dot
from src.fca.formal_context import (
    FormalContext,
    closure,
    context_from_matrix,
    derive_attributes,
    derive_objects,
    from_mask,
    to_mask,
)
from src.properties.property_engine import PropertyMatrix
from src.properties.property_vector import MATRIX_COLUMNS
from src.utils.errors import CxtFormatError, DomainError, InputError


@st.composite
def contexts(draw, max_objects=10, max_attributes=8):
    n_objects = draw(st.integers(min_value=0, max_value=max_objects))
    n_attributes = draw(st.integers(min_value=0, max_value=max_attributes))
    incidence = draw(
        st.lists(
            st.lists(st.booleans(), min_size=n_attributes, max_size=n_attributes),
            min_size=n_objects,
            max_size=n_objects,
        )
    )
    return FormalContext.from_incidence(
        [f"g{i}" for i in range(n_objects)], [f"m{j}" for j in range(n_attributes)], incidence
    )


def _brute_force_intents(ctx: FormalContext) -> set[int]:
    """Toda intensão é O′ para algum conjunto de objetos O."""
    n = len(ctx.objects)
    return {ctx.intent_of(extent) for extent in range(1 << n)}


# ---------------------------------------------------------------- contexto

def test_masks_round_trip_and_reject_out_of_range():
    assert to_mask([0, 3], 4) == 0b1001
    assert from_mask(0b1001) == frozenset({0, 3})
    with pytest.raises(IndexError):
        to_mask([4], 4)


def test_derivations_on_the_chain(chain_context):
    assert derive_objects(chain_context, [1]) == frozenset({0, 1})
    assert derive_objects(chain_context, []) == frozenset({0, 1, 2})
    assert derive_attributes(chain_context, [1]) == frozenset({1, 2})
    assert derive_attributes(chain_context, []) == frozenset({0, 1, 2})
    assert closure(chain_context, [1]) == frozenset({0, 1})


@settings(max_examples=200, deadline=None)
@given(contexts(), st.data())
def test_galois_connection_laws(ctx, data):
    attributes = data.draw(st.frozensets(st.sampled_from(range(len(ctx.attributes))))) if ctx.attributes else frozenset()
    objects = data.draw(st.frozensets(st.sampled_from(range(len(ctx.objects))))) if ctx.objects else frozenset()

    closed = closure(ctx, attributes)
    assert attributes <= closed
    assert closure(ctx, closed) == closed
    for smaller in (frozenset(), frozenset(list(attributes)[:1])):
        assert closure(ctx, smaller) <= closed

    # O ⊆ O″ e O′ = O‴
    intent = derive_objects(ctx, objects)
    extent = derive_attributes(ctx, intent)
    assert objects <= extent
    assert derive_objects(ctx, extent) == intent


def test_context_validation():
    with pytest.raises(InputError, match="object names must be unique"):
        FormalContext.from_incidence(["g", "g"], ["m"], [[1], [0]])
    with pytest.raises(InputError, match="expected 1"):
        FormalContext.from_incidence(["g"], ["m"], [[1, 0]])
    ctx = make_context({"g1": "ab", "g2": "b"})
    with pytest.raises(InputError, match="unknown object 'zz'"):
        ctx.object_index("zz")
    with pytest.raises(InputError, match="unknown attribute 'c'"):
        ctx.attribute_index("c")


def test_context_from_matrix_keeps_only_the_context_columns():
    row = tuple(1 if column in ("P3", "P14.2") else 0 for column in MATRIX_COLUMNS)
    matrix = PropertyMatrix(measures=("x", "y"), rows=(row, tuple(0 for _ in MATRIX_COLUMNS)))
    ctx = context_from_matrix(matrix)
    assert ctx.objects == ("x", "y")
    assert len(ctx.attributes) == 19
    assert "P14.2" not in ctx.attributes
    assert ctx.incidence()[0][ctx.attribute_index("P3")] == 1
    assert sum(ctx.incidence()[0]) == 1
    with pytest.raises(InputError, match="lacks columns P99"):
        context_from_matrix(matrix, columns=("P3", "P99"))


# ---------------------------------------------------------------- lattice

def test_identity_context_lattice(identity_context):
    lattice = enumerate_concepts(identity_context)
    assert len(lattice) == 5
    assert len(lattice.covers) == 6
    assert lattice.height() == 2
    top, bottom = lattice.concepts[lattice.top], lattice.concepts[lattice.bottom]
    assert top.objects(identity_context) == ["g1", "g2", "g3"] and top.intent == 0
    assert bottom.attributes(identity_context) == ["m1", "m2", "m3"] and bottom.extent == 0


def test_contranominal_context_has_every_subset(contranominal_context):
    lattice = enumerate_concepts(contranominal_context)
    assert len(lattice) == 4
    assert {c.intent for c in lattice.concepts} == {0b00, 0b01, 0b10, 0b11}


def test_chain_context_is_a_chain(chain_context):
    lattice = enumerate_concepts(chain_context)
    assert len(lattice) == 3
    assert [c.intent_size for c in lattice.concepts] == [1, 2, 3]
    assert lattice.height() == 2
    assert lattice.leq(2, 0) and not lattice.leq(0, 2)


def test_empty_context_has_a_single_concept():
    ctx = FormalContext(objects=(), attributes=(), rows=())
    lattice = enumerate_concepts(ctx)
    assert len(lattice) == 1
    assert lattice.covers == ()
    assert lattice.height() == 0


def test_objects_without_attributes_and_attributes_without_objects():
    ctx = make_context({"g1": "", "g2": "a"}, attributes="ab")
    lattice = enumerate_concepts(ctx)
    # topo (todos, ∅), ({g2}, {a}) e fundo (∅, {a, b})
    assert len(lattice) == 3
    assert lattice.concepts[lattice.bottom].extent == 0


@settings(max_examples=200, deadline=None)
@given(contexts())
def test_next_closure_matches_brute_force(ctx):
    lattice = enumerate_concepts(ctx)
    intents = [c.intent for c in lattice.concepts]
    assert len(intents) == len(set(intents))
    assert set(intents) == _brute_force_intents(ctx)
    for c in lattice.concepts:
        assert ctx.intent_of(c.extent) == c.intent
        assert ctx.extent_of(c.intent) == c.extent
    assert lattice.concepts[lattice.top].extent == ctx.full_extent
    assert lattice.concepts[lattice.bottom].intent == ctx.full_intent


@settings(max_examples=200, deadline=None)
@given(contexts())
def test_covers_are_the_transitive_reduction_of_the_order(ctx):
    lattice = enumerate_concepts(ctx)
    order = nx.DiGraph()
    order.add_nodes_from(range(len(lattice)))
    for i, j in combinations(range(len(lattice)), 2):
        for lower, upper in ((i, j), (j, i)):
            if lattice.leq(lower, upper):
                order.add_edge(lower, upper)
    assert set(build_hasse(lattice)) == set(nx.transitive_reduction(order).edges)


def test_make_concept_rejects_pairs_that_are_not_closed(chain_context):
    with pytest.raises(DomainError, match="not a formal concept"):
        make_concept(chain_context, extent=0b001, intent=0b001)


def test_object_and_attribute_concepts(identity_context, chain_context):
    lattice = enumerate_concepts(identity_context)
    assert object_concept(identity_context, lattice, "g1") == Concept(extent=0b001, intent=0b001)
    assert attribute_concept(identity_context, lattice, "m2") == Concept(extent=0b010, intent=0b010)

    chain = enumerate_concepts(chain_context)
    assert object_concept(chain_context, chain, "g2").objects(chain_context) == ["g2", "g3"]
    assert attribute_concept(chain_context, chain, "m1") == chain.concepts[chain.top]
    with pytest.raises(InputError):
        object_concept(chain_context, chain, "nope")


def test_hasse_distance_examples(identity_context, chain_context):
    lattice = enumerate_concepts(identity_context)
    atoms = [object_concept(identity_context, lattice, g) for g in ("g1", "g2", "g3")]
    assert hasse_distance(lattice, lattice.top, lattice.bottom) == 2
    assert hasse_distance(lattice, atoms[0], atoms[1]) == 2
    assert hasse_distance(lattice, atoms[0], lattice.top) == 1
    assert hasse_distance(lattice, atoms[2], atoms[2]) == 0

    chain = enumerate_concepts(chain_context)
    assert hasse_distance(chain, chain.top, chain.bottom) == 2


@settings(max_examples=50, deadline=None)
@given(contexts(max_objects=5, max_attributes=5))
def test_hasse_distance_is_a_metric(ctx):
    lattice = enumerate_concepts(ctx)
    indices = range(len(lattice))
    for i in indices:
        assert hasse_distance(lattice, i, i) == 0
        for j in indices:
            d = hasse_distance(lattice, i, j)
            assert d == hasse_distance(lattice, j, i)
            if i != j:
                assert d >= 1
            for k in indices:
                assert d <= hasse_distance(lattice, i, k) + hasse_distance(lattice, k, j)


# -------------------------------------------------------------------- cxt

def test_cxt_rendering(chain_context):
    assert render_cxt(chain_context) == "B\n\n3\n3\n\ng1\ng2\ng3\nm1\nm2\nm3\nX..\nXX.\nXXX\n"


@settings(max_examples=50)
@given(contexts())
def test_cxt_round_trip_is_byte_identical(ctx):
    text = render_cxt(ctx)
    again = parse_cxt(text)
    assert again == ctx
    assert render_cxt(again) == text


def test_cxt_files(tmp_path, identity_context):
    path = write_cxt(identity_context, tmp_path / "out" / "ctx.cxt")
    assert read_cxt(path) == identity_context
    with pytest.raises(CxtFormatError, match="cxt file not found"):
        read_cxt(tmp_path / "missing.cxt")


@pytest.mark.parametrize(
    "text, message",
    [
        ("A\n\n1\n1\n\ng\nm\nX\n", "expected 'B'"),
        ("B\n\none\n1\n\ng\nm\nX\n", "must be integers"),
        ("B\n\n1\n1\nx\ng\nm\nX\n", "blank line after the counts"),
        ("B\n\n2\n1\n\ng\nh\nm\nX", "expected 5 lines"),
        ("B\n\n1\n2\n\ng\nm\nn\nX\n", "row 1 must have 2 characters"),
        ("B\n\n1\n1\n\ng\nm\n1\n", "among '.' and 'X'"),
        ("B\n\n1\n1\n\ng\nm\nX\nextra\n", "unexpected content"),
        ("B\n\n2\n1\n\ng\ng\nm\nX\n.\n", "object names must be unique"),
    ],
)
def test_malformed_cxt_is_rejected(text, message):
    with pytest.raises(CxtFormatError, match=message):
        parse_cxt(text)


def test_cxt_tolerates_trailing_blank_lines_and_crlf(identity_context):
    text = render_cxt(identity_context)
    assert parse_cxt(text + "\n\n") == identity_context
    assert parse_cxt(text.replace("\n", "\r\n")) == identity_context


# -------------------------------------------------------------------- dot

def test_reduced_labels_place_each_name_once(chain_context):
    lattice = enumerate_concepts(chain_context)
    labels = reduced_labels(lattice)
    assert labels[0] == (["m1"], ["g1"])
    assert labels[1] == (["m2"], ["g2"])
    assert labels[2] == (["m3"], ["g3"])


def test_dot_labels_keep_attributes_above_objects():
    ctx = make_context({"g1": "", "g2": "a"}, attributes="ab")
    text = render_dot(enumerate_concepts(ctx))
    assert 'label="\\ng1"' in text
    assert 'label="a\\ng2"' in text
    assert 'label="b\\n"' in text


def test_dot_highlights_objects_and_their_covering_concept(identity_context):
    lattice = enumerate_concepts(identity_context)
    text = render_dot(lattice, highlight=["g1", "g2"])
    assert text.startswith('digraph "lattice" {\n')
    assert text.endswith("}\n")
    assert text.count(f'fillcolor="{HIGHLIGHT_COLOR}"') == 2
    assert text.count(f'fillcolor="{COVERING_COLOR}"') == 1
    assert text.count("[arrowhead=none]") == 6
    assert 'label="m1\\ng1"' in text
    assert f'\tc{lattice.top} [label="c{lattice.top}", style="rounded,filled", fillcolor="{COVERING_COLOR}"];' in text


def test_dot_escapes_quotes_and_rejects_unknown_highlight(tmp_path):
    ctx = make_context({'say "hi"': "a"})
    lattice = enumerate_concepts(ctx)
    path = write_dot(lattice, tmp_path / "quoted.dot")
    text = path.read_text(encoding="utf-8")
    assert 'digraph "quoted"' in text
    assert 'say \\"hi\\"' in text
    with pytest.raises(InputError, match="unknown object"):
        render_dot(lattice, highlight=["nobody"])
