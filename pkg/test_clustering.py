import math

import numpy as np
import pytest

from src.clustering.hierarchical import TIE_TOLERANCE, Dendrogram, Merge, ahc_ward, cut_dendrogram, write_dendrogram_csv
from src.clustering.kmeans import kmeans, run_lloyd
from src.clustering.partitions import (
    AHC,
    KMEANS,
    Partition,
    compare_partitions,
    load_reference_clusters,
    parse_reference_clusters,
    read_partition_csv,
    renumber,
    write_partition_csv,
)
from src.utils.errors import InputError

FLOATING = sorted(["Gini", "mutual information", "fukuda", "informational gain", "interest", "recall"])


def _blobs(seed: int = 0, per_blob: int = 8) -> tuple[np.ndarray, list[int]]:
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0, 0.0], [10.0, 0.0, 5.0], [0.0, 10.0, -5.0]])
    rows, truth = [], []
    for label, center in enumerate(centers):
        rows.append(center + rng.normal(scale=0.5, size=(per_blob, 3)))
        truth.extend([label] * per_blob)
    return np.vstack(rows), truth


def _ward_oracle(rows: np.ndarray) -> list[tuple[frozenset[int], float]]:
    """Fusões por força bruta: a cada passo, o par que minimiza 2·ΔESS."""
    clusters = [frozenset([i]) for i in range(len(rows))]
    merges = []
    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                ca, cb = clusters[a], clusters[b]
                na, nb = len(ca), len(cb)
                gap = rows[list(ca)].mean(axis=0) - rows[list(cb)].mean(axis=0)
                cost = 2 * na * nb / (na + nb) * float(gap @ gap)
                if best is None or cost < best[0] - TIE_TOLERANCE * max(1.0, best[0]):
                    best = (cost, a, b)
        cost, a, b = best
        merged = clusters[a] | clusters[b]
        merges.append((merged, math.sqrt(cost)))
        clusters = [c for i, c in enumerate(clusters) if i not in (a, b)] + [merged]
    return merges


def _members(d: Dendrogram) -> list[frozenset[int]]:
    members = {i: frozenset([i]) for i in range(d.leaves)}
    merged = []
    for merge in d.merges:
        members[merge.new_id] = members[merge.left] | members[merge.right]
        merged.append(members[merge.new_id])
    return merged


# ------------------------------------------------------------------- Ward

def test_ward_on_two_tight_pairs():
    d = ahc_ward([[0.0], [0.1], [10.0], [10.1]])
    assert [(m.left, m.right, m.new_id, m.size) for m in d.merges] == [(0, 1, 4, 2), (2, 3, 5, 2), (4, 5, 6, 4)]
    assert d.heights == pytest.approx([0.1, 0.1, math.sqrt(200.0)])
    assert cut_dendrogram(d, 2).labels == (0, 0, 1, 1)
    assert cut_dendrogram(d, 4).labels == (0, 1, 2, 3)
    assert cut_dendrogram(d, 1).labels == (0, 0, 0, 0)


def test_identical_rows_merge_first_at_height_zero():
    d = ahc_ward([[1.0, 1.0], [5.0, 5.0], [1.0, 1.0]])
    first = d.merges[0]
    assert (first.left, first.right, first.height) == (0, 2, 0.0)


def test_single_row_gives_an_empty_dendrogram():
    d = ahc_ward([[3.0, 4.0]])
    assert d.merges == ()
    assert cut_dendrogram(d, 1, ["only"]).clusters() == [["only"]]


@pytest.mark.parametrize("seed", range(100))
def test_ward_matches_the_brute_force_criterion(seed):
    # linhas 0/1 produzem empates: vence o par de menores ids
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, 2, size=(int(rng.integers(2, 9)), int(rng.integers(1, 6)))).astype(float)
    d = ahc_ward(rows.tolist())
    expected = _ward_oracle(rows)
    assert _members(d) == [members for members, _ in expected]
    assert d.heights == pytest.approx([height for _, height in expected], rel=1e-9, abs=1e-6)


def test_ward_does_not_depend_on_row_order():
    rng = np.random.default_rng(7)
    rows = rng.uniform(size=(12, 4))
    names = [f"m{i}" for i in range(12)]
    order = rng.permutation(12)
    original = cut_dendrogram(ahc_ward(rows.tolist()), 4, names)
    shuffled = cut_dendrogram(ahc_ward(rows[order].tolist()), 4, [names[i] for i in order])
    assert compare_partitions(original, shuffled).agree


def test_cut_and_input_errors():
    d = ahc_ward([[0.0], [1.0], [2.0]])
    for k in (0, 4):
        with pytest.raises(InputError, match="k must lie in"):
            cut_dendrogram(d, k)
    with pytest.raises(InputError, match="dimension mismatch"):
        ahc_ward([[0.0], [1.0, 2.0]])
    with pytest.raises(InputError, match="at least one row"):
        ahc_ward([])


def test_dendrogram_validation():
    with pytest.raises(InputError, match="needs 1 merges"):
        Dendrogram(merges=(), leaves=2)
    with pytest.raises(InputError, match="non-decreasing"):
        Dendrogram(
            merges=(Merge(0, 1, 2.0, 3, 2), Merge(2, 3, 1.0, 4, 3)),
            leaves=3,
        )


def test_dendrogram_csv(tmp_path):
    path = write_dendrogram_csv(ahc_ward([[0.0], [0.1], [10.0], [10.1]]), tmp_path / "dendrogram.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "left,right,height,new_id,size"
    assert len(lines) == 4
    assert lines[1].startswith("0,1,")


# ---------------------------------------------------------------- K-means

def test_single_cluster_centroid_is_the_mean():
    rows = [[0.0, 0.0], [2.0, 0.0], [4.0, 3.0]]
    run = run_lloyd(rows, 1)
    assert run.centroids[0].tolist() == pytest.approx([2.0, 1.0])
    assert run.converged
    assert kmeans(rows, 1).labels == (0, 0, 0)


def test_kmeans_recovers_separated_groups_and_inertia_never_grows():
    rows, truth = _blobs()
    run = run_lloyd(rows.tolist(), 3, seed=5)
    history = run.inertia_history
    assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))
    assert run.converged
    found = Partition.from_labels(run.labels.tolist(), KMEANS)
    assert compare_partitions(found, Partition.from_labels(truth, AHC)).agree


@pytest.mark.parametrize("seed", range(100))
def test_inertia_never_grows_on_random_instances(seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, 2, size=(int(rng.integers(2, 13)), int(rng.integers(1, 6)))).astype(float)
    distinct = len(np.unique(rows, axis=0))
    k = int(rng.integers(1, distinct + 1))
    run = run_lloyd(rows.tolist(), k, seed=seed)
    history = run.inertia_history
    assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))
    assert len(set(run.labels.tolist())) == k


def test_kmeans_does_not_depend_on_row_order_for_separated_groups():
    rows, truth = _blobs(seed=3)
    names = [f"m{i}" for i in range(len(rows))]
    order = np.random.default_rng(11).permutation(len(rows))
    original = kmeans(rows.tolist(), 3, objects=names)
    shuffled = kmeans(rows[order].tolist(), 3, objects=[names[i] for i in order])
    assert compare_partitions(original, shuffled).agree


def test_kmeans_is_deterministic_for_a_seed():
    rng = np.random.default_rng(1)
    rows = rng.uniform(size=(30, 5)).tolist()
    assert kmeans(rows, 4, seed=9) == kmeans(rows, 4, seed=9)


def test_kmeans_rejects_more_groups_than_distinct_rows():
    with pytest.raises(InputError, match="must lie in \\[1, 2\\]"):
        run_lloyd([[0.0], [0.0], [1.0]], 3)
    with pytest.raises(InputError, match="max_iter"):
        run_lloyd([[0.0], [1.0]], 1, max_iter=0)


# ------------------------------------------------------------- partições

def test_renumber_and_partition_validation():
    assert renumber([5, 5, 3, 7, 3]) == (0, 0, 1, 2, 1)
    assert Partition.from_labels([5, 5, 3], AHC).labels == (0, 0, 1)
    with pytest.raises(InputError, match="must lie in"):
        Partition(labels=(0, 2), k=2, method=AHC)
    with pytest.raises(InputError, match="non-empty groups"):
        Partition(labels=(0, 0), k=2, method=AHC)
    with pytest.raises(InputError, match="unique"):
        Partition.from_labels([0, 1], AHC, ["a", "a"])


def test_one_moved_object_is_the_only_disagreement():
    p1 = Partition.from_labels([0, 0, 0, 1, 1, 1], AHC)
    p2 = Partition.from_labels([0, 0, 1, 1, 1, 1], KMEANS)
    comparison = compare_partitions(p1, p2)
    assert comparison.disagreement == ("2",)
    assert not comparison.agree
    assert compare_partitions(p1, p1).agree


def test_comparing_partitions_over_different_objects_fails():
    with pytest.raises(InputError, match="different objects"):
        compare_partitions(Partition.from_labels([0], AHC, ["a"]), Partition.from_labels([0], KMEANS, ["b"]))


def test_reference_partitions_disagree_on_six_measures():
    reference = load_reference_clusters()
    ahc = reference.partition("ahc")
    km = reference.partition("kmeans", objects=ahc.objects)
    assert ahc.k == km.k == 9
    assert len(ahc) == 61
    comparison = compare_partitions(ahc, km)
    assert list(comparison.disagreement) == FLOATING
    assert list(compare_partitions(km, ahc).disagreement) == FLOATING
    assert sorted(reference.floating_names) == FLOATING


def test_reference_names_are_the_catalog_names(catalog):
    ahc = load_reference_clusters().partition("ahc")
    assert set(ahc.objects) == set(catalog.names)


def test_excluding_floating_measures_keeps_nine_groups():
    reference = load_reference_clusters()
    ahc = reference.partition("ahc")
    core = ahc.without(FLOATING)
    assert len(core) == 55
    assert core.k == 9
    assert reference.partition("ahc", include_floating=False).clusters() == core.clusters()


def test_partition_csv(tmp_path):
    p = Partition.from_labels([1, 0, 1], KMEANS, ["x", "y", "z"])
    path = write_partition_csv(p, tmp_path / "p.csv")
    assert path.read_text(encoding="utf-8") == "object,label\nx,0\ny,1\nz,0\n"
    again = read_partition_csv(path)
    assert (again.objects, again.labels) == (p.objects, p.labels)
    (tmp_path / "bad.csv").write_text("name,label\nx,0\n", encoding="utf-8")
    with pytest.raises(InputError, match="expected header"):
        read_partition_csv(tmp_path / "bad.csv")


def test_reference_file_errors(tmp_path):
    with pytest.raises(InputError, match="outside of any section"):
        parse_reference_clusters("orphan\n")
    with pytest.raises(InputError, match="unknown cluster 'C9'"):
        parse_reference_clusters("[C1]\na\n[floating.ahc]\nb = C9\n")
    with pytest.raises(InputError, match="more than one reference cluster"):
        parse_reference_clusters("[C1]\na\n[C2]\na\n")
    with pytest.raises(InputError, match="unknown reference method"):
        parse_reference_clusters("[C1]\na\n").partition("ward")
    with pytest.raises(InputError, match="reference clusters not found"):
        load_reference_clusters(tmp_path / "missing.txt")
