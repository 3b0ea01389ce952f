from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.clustering.hierarchical import as_matrix
from src.clustering.partitions import KMEANS, Partition
from src.utils.errors import InputError

DEFAULT_MAX_ITER = 300


@dataclass(frozen=True)
class LloydRun:
    labels: np.ndarray
    centroids: np.ndarray
    inertia_history: tuple[float, ...]
    iterations: int
    converged: bool


def _squared_distances(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def farthest_first(x: np.ndarray, k: int, seed: int) -> np.ndarray:
    """Semente: linha (seed mod n); depois, sempre o ponto mais distante dos centros já escolhidos."""
    chosen = [seed % len(x)]
    nearest = _squared_distances(x, x[chosen])[:, 0]
    while len(chosen) < k:
        candidate = int(np.argmax(nearest))
        chosen.append(candidate)
        nearest = np.minimum(nearest, _squared_distances(x, x[[candidate]])[:, 0])
    return x[chosen].copy()


def _means(x: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    return np.vstack([x[labels == c].mean(axis=0) for c in range(k)])


def _repair_empty(x: np.ndarray, labels: np.ndarray, centroids: np.ndarray, k: int) -> np.ndarray:
    """Grupo vazio recebe o ponto mais distante do próprio centro (tirado de um grupo com mais de um membro)."""
    labels = labels.copy()
    for c in range(k):
        if np.any(labels == c):
            continue
        counts = np.bincount(labels, minlength=k)
        own = np.einsum("ij,ij->i", x - centroids[labels], x - centroids[labels])
        own[counts[labels] <= 1] = -np.inf
        labels[int(np.argmax(own))] = c
    return labels


def run_lloyd(
    rows: Sequence[Sequence[float]], k: int, seed: int = 0, max_iter: int = DEFAULT_MAX_ITER
) -> LloydRun:
    """
    Iterações de Lloyd a partir da semeadura farthest-first. Para quando as atribuições
    se estabilizam ou após `max_iter` iterações; guarda a inércia de cada iteração.
    """
    x = as_matrix(rows)
    distinct = len(np.unique(x, axis=0))
    if not 1 <= k <= distinct:
        raise InputError(f"k = {k} must lie in [1, {distinct}] (number of distinct rows)")
    if max_iter < 1:
        raise InputError("max_iter must be >= 1")

    centroids = farthest_first(x, k, seed)
    labels = None
    history = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        assigned = np.argmin(_squared_distances(x, centroids), axis=1)
        assigned = _repair_empty(x, assigned, centroids, k)
        centroids = _means(x, assigned, k)
        residual = x - centroids[assigned]
        history.append(float(np.einsum("ij,ij->", residual, residual)))
        if labels is not None and np.array_equal(assigned, labels):
            converged = True
            labels = assigned
            break
        labels = assigned
    return LloydRun(
        labels=labels, centroids=centroids, inertia_history=tuple(history),
        iterations=iterations, converged=converged,
    )


def kmeans(
    rows: Sequence[Sequence[float]], k: int, seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER, objects: Sequence[str] = (),
) -> Partition:
    run = run_lloyd(rows, k, seed=seed, max_iter=max_iter)
    return Partition.from_labels([int(label) for label in run.labels], KMEANS, objects)
