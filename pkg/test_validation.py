import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_context
from src.clustering.partitions import REFERENCE, Partition
from src.fca.concept_lattice import enumerate_concepts
from src.fca.formal_context import FormalContext, context_from_matrix, to_mask
from src.properties.property_engine import build_matrix
from src.validation.cluster_validator import (
    Verdict,
    VerdictThresholds,
    assign_floating,
    cohesion,
    covering_concept,
    group_center,
    intruder_analysis,
    split_suggestion,
    validate_cluster,
    validate_partition,
    verdict_for,
)
from src.validation.report import CSV_HEADER, ValidationReport
from src.utils.errors import InputError


def _setup(rows: dict[str, str], groups: dict[str, int]):
    ctx = make_context(rows)
    lattice = enumerate_concepts(ctx)
    partition = Partition.from_labels(list(groups.values()), REFERENCE, list(groups))
    return ctx, lattice, partition


# --------------------------------------------------------- conceito de cobertura

def test_covering_concept_and_cohesion_on_the_chain(chain_context):
    lattice = enumerate_concepts(chain_context)
    covering = covering_concept(chain_context, lattice, ["g2"])
    assert covering.objects(chain_context) == ["g2", "g3"]
    assert covering.attributes(chain_context) == ["m1", "m2"]
    assert cohesion(chain_context, lattice, ["g2"]) == pytest.approx(0.5)
    assert cohesion(chain_context, lattice, ["g2", "g3"]) == 1.0


def test_covering_concept_is_the_smallest_containing_the_cluster(identity_context):
    lattice = enumerate_concepts(identity_context)
    cluster = ["g1", "g3"]
    covering = covering_concept(identity_context, lattice, cluster)
    mask = to_mask([0, 2], 3)
    assert covering.extent & mask == mask
    for concept in lattice.concepts:
        if concept.extent & mask == mask:
            assert covering.extent & ~concept.extent == 0


def test_empty_or_unknown_clusters_are_rejected(identity_context):
    lattice = enumerate_concepts(identity_context)
    with pytest.raises(InputError, match="must not be empty"):
        covering_concept(identity_context, lattice, [])
    with pytest.raises(InputError, match="unknown object"):
        covering_concept(identity_context, lattice, ["zz"])


# ------------------------------------------------------------------ vereditos

def test_verdict_thresholds():
    t = VerdictThresholds()
    assert verdict_for(2, 0.8, True, t) is Verdict.VALIDATED
    assert verdict_for(1, 0.9, True, t) is Verdict.HARDLY_VALIDATED
    assert verdict_for(2, 0.5, True, t) is Verdict.HARDLY_VALIDATED
    assert verdict_for(0, 1.0, True, t) is Verdict.QUESTIONABLE
    assert verdict_for(3, 0.3, True, t) is Verdict.QUESTIONABLE
    assert verdict_for(3, 1.0, False, t) is Verdict.QUESTIONABLE
    strict = VerdictThresholds(validated_min_intent=3)
    assert verdict_for(2, 1.0, True, strict) is Verdict.HARDLY_VALIDATED


def test_separated_groups_are_validated():
    ctx, lattice, partition = _setup(
        {"a1": "pq", "a2": "pq", "b1": "rs", "b2": "rs"},
        {"a1": 0, "a2": 0, "b1": 1, "b2": 1},
    )
    validations = validate_partition(ctx, lattice, partition)
    assert [v.verdict for v in validations] == [Verdict.VALIDATED, Verdict.VALIDATED]
    first = validations[0]
    assert first.members == ("a1", "a2")
    assert first.intent == ("p", "q")
    assert first.cohesion == 1.0
    assert first.intruders == ()
    assert first.center == "a1"


def test_group_sharing_one_property_is_hardly_validated():
    ctx, lattice, partition = _setup(
        {"a1": "pq", "a2": "pr", "b1": "s"},
        {"a1": 0, "a2": 0, "b1": 1},
    )
    v = validate_cluster(ctx, lattice, ["a1", "a2"], partition)
    assert v.intent == ("p",)
    assert v.cohesion == 1.0
    assert v.verdict is Verdict.HARDLY_VALIDATED


def test_unexplained_intruder_makes_the_group_questionable():
    ctx, lattice, partition = _setup(
        {"a1": "pq", "a2": "pq", "i1": "pq", "b1": "rs", "b2": "rs"},
        {"a1": 0, "a2": 0, "i1": 1, "b1": 1, "b2": 1},
    )
    v = validate_cluster(ctx, lattice, ["a1", "a2"], partition)
    assert v.extent == ("a1", "a2", "i1")
    assert v.cohesion == pytest.approx(2 / 3)
    (intruder,) = v.intruders
    assert intruder.name == "i1"
    assert intruder.own_cluster == 1
    assert intruder.d_cluster == 0.0
    assert intruder.d_own == pytest.approx(2.0)
    assert not intruder.explained
    assert v.verdict is Verdict.QUESTIONABLE


def test_intruders_closer_to_their_own_group_are_explained():
    ctx, lattice, partition = _setup(
        {"a1": "pqx", "a2": "pqy", "i1": "pqz", "b1": "pqz"},
        {"a1": 0, "a2": 0, "i1": 1, "b1": 1},
    )
    v = validate_cluster(ctx, lattice, ["a1", "a2"], partition)
    assert [i.name for i in v.intruders] == ["i1", "b1"]
    assert all(i.d_own == 0.0 and i.d_cluster > 0 for i in v.intruders)
    assert v.all_explained
    assert v.cohesion == pytest.approx(0.5)
    assert v.verdict is Verdict.HARDLY_VALIDATED


def test_intruders_alone_or_outside_the_partition():
    ctx, lattice, _ = _setup({"a1": "pq", "a2": "pq", "s": "pq", "f": "pq", "b": "r"}, {"a1": 0})
    partition = Partition.from_labels([0, 0, 1, 2], REFERENCE, ["a1", "a2", "s", "b"])
    intruders = {i.name: i for i in intruder_analysis(ctx, lattice, ["a1", "a2"], partition)}
    assert intruders["s"].own_cluster == 1
    assert intruders["s"].d_own == 0.0
    assert intruders["f"].own_cluster is None
    assert intruders["f"].d_own is None
    assert all(i.explained for i in intruders.values())


def test_group_center_is_the_most_central_member(chain_context):
    lattice = enumerate_concepts(chain_context)
    assert group_center(chain_context, lattice, ["g1", "g2", "g3"]) == "g2"
    assert group_center(chain_context, lattice, ["g3"]) == "g3"


# ------------------------------------------------------------------- divisão

def test_split_into_two_concept_extents():
    ctx = make_context({"a1": "pq", "a2": "pq", "b1": "rs", "b2": "rs", "c": "t"})
    lattice = enumerate_concepts(ctx)
    assert split_suggestion(ctx, lattice, ["a1", "a2", "b1", "b2"]) == [("a1", "a2"), ("b1", "b2")]


def test_split_falls_back_to_singletons():
    ctx = make_context({"a": "p", "b": "q", "c": "pq"})
    lattice = enumerate_concepts(ctx)
    assert split_suggestion(ctx, lattice, ["a", "b"]) == [("a",), ("b",)]


def test_a_cluster_that_is_an_extent_is_not_split(chain_context):
    lattice = enumerate_concepts(chain_context)
    assert split_suggestion(chain_context, lattice, ["g2", "g3"]) == [("g2", "g3")]


# --------------------------------------------------------- medidas flutuantes

FLOATING_ROWS = {"a1": "pq", "a2": "pq", "f": "pq", "g": "", "b1": "rs", "b2": "rs"}


def _floating_setup():
    ctx = make_context(FLOATING_ROWS, attributes="pqrs")
    lattice = enumerate_concepts(ctx)
    partition = Partition.from_labels([0, 0, 1, 1], REFERENCE, ["a1", "a2", "b1", "b2"])
    return ctx, lattice, partition


def test_measure_identical_to_a_group_is_assigned_to_it():
    ctx, lattice, partition = _floating_setup()
    result = assign_floating(ctx, lattice, "f", partition)
    assert result.assigned == 0
    assert result.mean_distances == {0: 0.0, 1: 2.0}
    assert result.min_distances == {0: 0, 1: 2}
    assert result.ranking()[0] == (0, 0.0)


def test_equidistant_measure_stays_unresolved():
    ctx, lattice, partition = _floating_setup()
    result = assign_floating(ctx, lattice, "g", partition)
    assert result.mean_distances == {0: 1.0, 1: 1.0}
    assert result.unresolved


def test_tau_controls_how_clear_the_winner_must_be():
    ctx, lattice, partition = _floating_setup()
    assert assign_floating(ctx, lattice, "f", partition, tau=0.99).assigned == 0
    assert assign_floating(ctx, lattice, "g", partition, tau=0.0).assigned == 0


def test_assigning_a_member_or_unknown_measure_fails():
    ctx, lattice, partition = _floating_setup()
    with pytest.raises(InputError, match="already belongs"):
        assign_floating(ctx, lattice, "a1", partition)
    with pytest.raises(InputError, match="unknown object"):
        assign_floating(ctx, lattice, "zz", partition)


# ------------------------------------------------------------------ relatório

def test_report_csv_and_text(tmp_path):
    ctx, lattice, partition = _floating_setup()
    validations = validate_partition(ctx, lattice, partition)
    assignments = [assign_floating(ctx, lattice, name, partition) for name in ("f", "g")]
    report = ValidationReport(validations=tuple(validations), assignments=tuple(assignments))

    assert report.counts() == {Verdict.VALIDATED: 1, Verdict.HARDLY_VALIDATED: 1, Verdict.QUESTIONABLE: 0}
    csv_lines = report.to_csv_text().splitlines()
    assert csv_lines[0] == ",".join(CSV_HEADER)
    assert csv_lines[1:] == ["C1,hardly-validated,0.6667,2,f", "C2,validated,1.0000,2,"]

    text = report.to_text()
    assert "## C1: hardly-validated" in text
    assert "- f -> C1" in text
    assert "- g -> sem decisão" in text
    assert text.endswith("resumo: validated=1, hardly-validated=1, questionable=0\n")

    text_path, csv_path = report.write(tmp_path / "r.txt", tmp_path / "r.csv")
    assert text_path.read_text(encoding="utf-8") == text
    assert csv_path.read_text(encoding="utf-8") == report.to_csv_text()


def test_report_uses_given_cluster_names():
    report = ValidationReport(validations=(), cluster_names={0: "implicativas"})
    assert report.name_of(0) == "implicativas"
    assert report.name_of(1) == "C2"
    assert report.name_of(None) == "-"


def test_group_without_shared_properties_is_questionable():
    ctx, lattice, partition = _setup({"a": "p", "b": "q", "c": "pq"}, {"a": 0, "b": 0, "c": 1})
    v = validate_cluster(ctx, lattice, ["a", "b"], partition)
    assert v.intent == ()
    assert v.verdict is Verdict.QUESTIONABLE



# ------------------------------------------------------- invariantes aleatórios

@st.composite
def _context_and_cluster(draw, min_objects=1):
    n_objects = draw(st.integers(min_value=min_objects, max_value=8))
    n_attributes = draw(st.integers(min_value=0, max_value=5))
    incidence = draw(
        st.lists(
            st.lists(st.booleans(), min_size=n_attributes, max_size=n_attributes),
            min_size=n_objects,
            max_size=n_objects,
        )
    )
    ctx = FormalContext.from_incidence(
        [f"g{i}" for i in range(n_objects)], [f"m{j}" for j in range(n_attributes)], incidence
    )
    cluster = draw(st.lists(st.sampled_from(ctx.objects), min_size=1, unique=True))
    return ctx, cluster


@settings(max_examples=200, deadline=None)
@given(_context_and_cluster())
def test_covering_concept_is_minimal_on_random_contexts(data):
    ctx, cluster = data
    lattice = enumerate_concepts(ctx)
    covering = covering_concept(ctx, lattice, cluster)
    mask = to_mask([ctx.object_index(name) for name in cluster], len(ctx.objects))
    assert covering.extent & mask == mask
    for concept in lattice.concepts:
        if concept.extent & mask == mask:
            assert covering.extent & ~concept.extent == 0


_RANK = {Verdict.QUESTIONABLE: 0, Verdict.HARDLY_VALIDATED: 1, Verdict.VALIDATED: 2}


@given(
    st.integers(min_value=0, max_value=20),
    st.integers(min_value=0, max_value=5),
    st.floats(min_value=0, max_value=1),
    st.floats(min_value=0, max_value=1),
    st.booleans(),
)
def test_verdict_never_drops_when_intent_or_cohesion_grow(intent, extra, low, high, explained):
    low, high = sorted((low, high))
    t = VerdictThresholds()
    worse = verdict_for(intent, low, explained, t)
    assert _RANK[verdict_for(intent + extra, low, explained, t)] >= _RANK[worse]
    assert _RANK[verdict_for(intent, high, explained, t)] >= _RANK[worse]
    assert _RANK[verdict_for(intent + extra, high, explained, t)] >= _RANK[worse]


@settings(max_examples=200, deadline=None)
@given(_context_and_cluster())
def test_split_blocks_are_disjoint_and_cover_the_cluster(data):
    ctx, cluster = data
    blocks = split_suggestion(ctx, enumerate_concepts(ctx), cluster)
    flattened = [name for block in blocks for name in block]
    assert all(blocks)
    assert len(flattened) == len(set(flattened))
    assert set(flattened) == set(cluster)


@settings(max_examples=200, deadline=None)
@given(_context_and_cluster(min_objects=3), st.data())
def test_floating_assignment_ignores_how_groups_are_numbered(data, more):
    ctx, _ = data
    measure, *members = ctx.objects
    labels = more.draw(st.lists(st.integers(min_value=0, max_value=2), min_size=len(members), max_size=len(members)))
    order = more.draw(st.permutations(range(len(members))))
    lattice = enumerate_concepts(ctx)

    results = []
    for index in (range(len(members)), order):
        partition = Partition.from_labels([labels[i] for i in index], REFERENCE, [members[i] for i in index])
        result = assign_floating(ctx, lattice, measure, partition)
        clusters = partition.clusters()
        means = {frozenset(clusters[label]): mean for label, mean in result.mean_distances.items()}
        chosen = None if result.assigned is None else frozenset(clusters[result.assigned])
        results.append((means, chosen))
    assert results[0] == results[1]


# ----------------------------------------------- lattice do catálogo completo

@pytest.fixture(scope="module")
def catalog_lattice(catalog, grid):
    ctx = context_from_matrix(build_matrix(catalog, grid))
    return ctx, enumerate_concepts(ctx)


@pytest.mark.parametrize(
    "members",
    [("Yule's Q", "Yule's Y"), ("Kulczynski", "Jaccard"), ("Czekanowski-Dice", "Cosine")],
)
def test_close_measures_share_a_concept(catalog_lattice, catalog, members):
    ctx, lattice = catalog_lattice
    covering = covering_concept(ctx, lattice, [catalog.resolve(name) for name in members])
    assert covering.intent_size > 0


def test_odds_ratio_family_shares_most_of_its_properties(catalog_lattice):
    ctx, lattice = catalog_lattice
    covering = covering_concept(ctx, lattice, ["Yule's Y", "Yule's Q", "Mgk", "Zhang"])
    expected = {"P4", "P5", "P6", "P7", "P9", "P10", "P12", "P13", "P17", "P21"}
    assert len(expected & set(covering.attributes(ctx))) >= 6
