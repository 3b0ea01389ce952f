from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from src.clustering.partitions import AHC, Partition
from src.utils.errors import InputError
from src.utils.file_output import write_csv_atomic

# Empates de distância dentro desta tolerância relativa ficam com o menor par de ids
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    new_id: int
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """
    Fusões em ordem. Folhas têm ids 0..n−1; a i-ésima fusão cria o id n + i.
    Alturas são distâncias de Ward (raiz do critério de Lance–Williams).
    """
    merges: tuple[Merge, ...]
    leaves: int

    def __post_init__(self):
        if self.leaves < 1:
            raise InputError("dendrogram needs at least one leaf")
        if len(self.merges) != self.leaves - 1:
            raise InputError(f"dendrogram over {self.leaves} leaves needs {self.leaves - 1} merges")
        for previous, current in zip(self.merges, self.merges[1:]):
            if current.height < previous.height - TIE_TOLERANCE * max(1.0, previous.height):
                raise InputError("dendrogram heights must be non-decreasing")

    @property
    def heights(self) -> list[float]:
        return [m.height for m in self.merges]


def as_matrix(rows: Sequence[Sequence[float]]) -> np.ndarray:
    if len(rows) == 0:
        raise InputError("at least one row is required")
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise InputError(f"dimension mismatch: rows have lengths {sorted(widths)}")
    return np.asarray(rows, dtype=float)


def _pick(distances: np.ndarray, active: list[int]) -> tuple[int, int]:
    best, best_pair = np.inf, None
    for a, i in enumerate(active):
        for j in active[a + 1:]:
            d = distances[i, j]
            if best_pair is None or d < best - TIE_TOLERANCE * max(1.0, abs(best)):
                best, best_pair = d, (i, j)
    return best_pair


def ahc_ward(rows: Sequence[Sequence[float]]) -> Dendrogram:
    """
    Classificação hierárquica ascendente com agregação de Ward sobre distâncias euclidianas.

    Trabalha com distâncias ao quadrado e a recorrência de Lance–Williams:
    D(k, i∪j) = ((n_i+n_k)·D(k,i) + (n_j+n_k)·D(k,j) − n_k·D(i,j)) / (n_i+n_j+n_k)
    """
    x = as_matrix(rows)
    n = len(x)
    total = 2 * n - 1
    distances = np.full((total, total), np.inf)
    diff = x[:, None, :] - x[None, :, :]
    distances[:n, :n] = np.einsum("ijk,ijk->ij", diff, diff)

    sizes = {i: 1 for i in range(n)}
    active = list(range(n))
    merges = []
    for step in range(n - 1):
        i, j = _pick(distances, active)
        new_id = n + step
        ni, nj = sizes[i], sizes[j]
        for k in active:
            if k in (i, j):
                continue
            nk = sizes[k]
            updated = (
                (ni + nk) * distances[k, i] + (nj + nk) * distances[k, j] - nk * distances[i, j]
            ) / (ni + nj + nk)
            distances[k, new_id] = distances[new_id, k] = max(updated, 0.0)
        merges.append(Merge(left=i, right=j, height=float(np.sqrt(max(distances[i, j], 0.0))), new_id=new_id, size=ni + nj))
        active = [k for k in active if k not in (i, j)] + [new_id]
        sizes[new_id] = ni + nj
        del sizes[i], sizes[j]
    return Dendrogram(merges=tuple(merges), leaves=n)


def cut_dendrogram(d: Dendrogram, k: int, objects: Sequence[str] = ()) -> Partition:
    """Desfaz as últimas k−1 fusões; rótulos renumerados pelo menor índice de cada grupo."""
    if not 1 <= k <= d.leaves:
        raise InputError(f"k must lie in [1, {d.leaves}], got {k}")
    parent = list(range(2 * d.leaves - 1))

    def root(node: int) -> int:
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    for merge in d.merges[: d.leaves - k]:
        parent[merge.left] = merge.new_id
        parent[merge.right] = merge.new_id
    return Partition.from_labels([root(leaf) for leaf in range(d.leaves)], AHC, objects)


def write_dendrogram_csv(d: Dendrogram, path: str | Path) -> Path:
    return write_csv_atomic(
        path,
        ("left", "right", "height", "new_id", "size"),
        ((m.left, m.right, repr(m.height), m.new_id, m.size) for m in d.merges),
    )
