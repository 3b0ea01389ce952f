"""
Validação de grupos de medidas pelo lattice de conceitos.

Para cada grupo: conceito que cobre os membros (O″, O′), coesão |grupo| / |O″|,
intrusos (objetos de O″ fora do grupo) com suas distâncias no diagrama de Hasse,
e o veredito validado / dificilmente validado / questionável.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from src.clustering.partitions import Partition
from src.fca.concept_lattice import Concept, ConceptLattice, hasse_distance, object_concept_index
from src.fca.formal_context import FormalContext, from_mask, to_mask
from src.utils.errors import InputError

DEFAULT_TAU = 0.25


class Verdict(str, Enum):
    VALIDATED = "validated"
    HARDLY_VALIDATED = "hardly-validated"
    QUESTIONABLE = "questionable"


@dataclass(frozen=True)
class VerdictThresholds:
    validated_min_intent: int = 2
    validated_min_cohesion: float = 0.8
    hardly_min_intent: int = 1
    hardly_min_cohesion: float = 0.4


@dataclass(frozen=True)
class Intruder:
    """
    Objeto do conceito de cobertura que pertence a outro grupo (ou a nenhum).
    Explicado quando está em média mais perto do próprio grupo do que deste.
    """
    name: str
    own_cluster: int | None
    d_cluster: float
    d_own: float | None
    min_cluster: int
    min_own: int | None

    @property
    def explained(self) -> bool:
        return self.d_own is None or self.d_own <= self.d_cluster


@dataclass(frozen=True)
class ClusterValidation:
    cluster_id: int
    members: tuple[str, ...]
    covering: Concept
    extent: tuple[str, ...]
    intent: tuple[str, ...]
    cohesion: float
    intruders: tuple[Intruder, ...]
    verdict: Verdict
    center: str
    center_concept: Concept
    center_intent: tuple[str, ...]

    @property
    def intent_size(self) -> int:
        return len(self.intent)

    @property
    def all_explained(self) -> bool:
        return all(i.explained for i in self.intruders)


@dataclass(frozen=True)
class AssignmentResult:
    measure: str
    mean_distances: dict[int, float]
    min_distances: dict[int, int]
    assigned: int | None

    @property
    def unresolved(self) -> bool:
        return self.assigned is None

    def ranking(self) -> list[tuple[int, float]]:
        return sorted(self.mean_distances.items(), key=lambda item: (item[1], item[0]))


def _cluster_mask(ctx: FormalContext, cluster: Iterable[str]) -> int:
    names = list(cluster)
    if not names:
        raise InputError("cluster must not be empty")
    return to_mask((ctx.object_index(name) for name in names), len(ctx.objects))


def _names(ctx: FormalContext, mask: int) -> tuple[str, ...]:
    return tuple(ctx.objects[g] for g in sorted(from_mask(mask)))


def _gamma_distances(ctx, lattice, name: str, others: Sequence[str]) -> list[int]:
    source = object_concept_index(ctx, lattice, name)
    return [hasse_distance(lattice, source, object_concept_index(ctx, lattice, other)) for other in others]


def covering_concept(ctx: FormalContext, lattice: ConceptLattice, cluster: Iterable[str]) -> Concept:
    """Menor conceito cuja extensão contém o grupo: (O″, O′)."""
    return lattice.concepts[lattice.concept_of_objects(_cluster_mask(ctx, cluster))]


def cohesion(ctx: FormalContext, lattice: ConceptLattice, cluster: Iterable[str]) -> float:
    members = list(cluster)
    return len(set(members)) / covering_concept(ctx, lattice, members).extent_size


def intruder_analysis(
    ctx: FormalContext, lattice: ConceptLattice, cluster: Iterable[str], full_partition: Partition
) -> list[Intruder]:
    members = list(dict.fromkeys(cluster))
    mask = _cluster_mask(ctx, members)
    covering = covering_concept(ctx, lattice, members)
    intruders = []
    for name in _names(ctx, covering.extent & ~mask):
        to_cluster = _gamma_distances(ctx, lattice, name, members)
        own_label = full_partition.label_of(name) if name in full_partition.objects else None
        d_own = min_own = None
        if own_label is not None:
            own_members = [
                other for other, label in zip(full_partition.objects, full_partition.labels)
                if label == own_label and other != name
            ]
            # grupo unitário: o intruso é o próprio grupo
            to_own = _gamma_distances(ctx, lattice, name, own_members) or [0]
            d_own, min_own = float(np.mean(to_own)), min(to_own)
        intruders.append(Intruder(
            name=name, own_cluster=own_label,
            d_cluster=float(np.mean(to_cluster)), d_own=d_own,
            min_cluster=min(to_cluster), min_own=min_own,
        ))
    return intruders


def verdict_for(intent_size: int, cohesion_value: float, all_explained: bool, thresholds: VerdictThresholds) -> Verdict:
    if not all_explained:
        return Verdict.QUESTIONABLE
    if intent_size >= thresholds.validated_min_intent and cohesion_value >= thresholds.validated_min_cohesion:
        return Verdict.VALIDATED
    if intent_size >= thresholds.hardly_min_intent and cohesion_value >= thresholds.hardly_min_cohesion:
        return Verdict.HARDLY_VALIDATED
    return Verdict.QUESTIONABLE


def group_center(ctx: FormalContext, lattice: ConceptLattice, cluster: Sequence[str]) -> str:
    """Membro cujo conceito-objeto está, em média, mais perto dos conceitos dos outros membros."""
    members = list(dict.fromkeys(cluster))
    if len(members) == 1:
        return members[0]
    ordered = sorted(members, key=ctx.object_index)
    scores = [np.mean(_gamma_distances(ctx, lattice, name, [o for o in ordered if o != name])) for name in ordered]
    return ordered[int(np.argmin(scores))]


def validate_cluster(
    ctx: FormalContext,
    lattice: ConceptLattice,
    cluster: Iterable[str],
    partition: Partition,
    cluster_id: int = 0,
    thresholds: VerdictThresholds = VerdictThresholds(),
) -> ClusterValidation:
    members = tuple(sorted(dict.fromkeys(cluster), key=ctx.object_index))
    covering = covering_concept(ctx, lattice, members)
    intruders = tuple(intruder_analysis(ctx, lattice, members, partition))
    cohesion_value = len(members) / covering.extent_size
    intent = tuple(ctx.attributes[m] for m in sorted(from_mask(covering.intent)))
    center = group_center(ctx, lattice, members)
    center_concept = lattice.concepts[object_concept_index(ctx, lattice, center)]
    return ClusterValidation(
        cluster_id=cluster_id,
        members=members,
        covering=covering,
        extent=_names(ctx, covering.extent),
        intent=intent,
        cohesion=cohesion_value,
        intruders=intruders,
        verdict=verdict_for(len(intent), cohesion_value, all(i.explained for i in intruders), thresholds),
        center=center,
        center_concept=center_concept,
        center_intent=tuple(center_concept.attributes(ctx)),
    )


def validate_partition(
    ctx: FormalContext,
    lattice: ConceptLattice,
    partition: Partition,
    thresholds: VerdictThresholds = VerdictThresholds(),
) -> list[ClusterValidation]:
    return [
        validate_cluster(ctx, lattice, members, partition, cluster_id=label, thresholds=thresholds)
        for label, members in enumerate(partition.clusters())
    ]


def split_suggestion(ctx: FormalContext, lattice: ConceptLattice, cluster: Iterable[str]) -> list[tuple[str, ...]]:
    """
    Cobertura gulosa do grupo por conceitos cuja extensão só contém membros.
    Entre as extensões maximais, prefere a maior intensão e depois a maior cobertura
    do que ainda falta; membros que sobram viram grupos unitários.
    """
    mask = _cluster_mask(ctx, cluster)
    if ctx.close_extent(mask) == mask:
        return [_names(ctx, mask)]

    inside = [c for c in lattice.concepts if c.extent and not c.extent & ~mask]
    maximal = [c for c in inside if not any(o.extent != c.extent and not c.extent & ~o.extent for o in inside)]

    blocks = []
    remaining = mask
    while remaining:
        candidates = [c for c in maximal if c.extent & remaining]
        if not candidates:
            break
        best = min(
            candidates,
            key=lambda c: (-c.intent_size, -(c.extent & remaining).bit_count(), min(from_mask(c.extent & remaining))),
        )
        block = best.extent & remaining
        blocks.append(_names(ctx, block))
        remaining &= ~block
    blocks.extend((ctx.objects[g],) for g in sorted(from_mask(remaining)))
    return blocks


def assign_floating(
    ctx: FormalContext,
    lattice: ConceptLattice,
    measure: str,
    partition: Partition,
    tau: float = DEFAULT_TAU,
) -> AssignmentResult:
    """
    Distância média γ-a-γ da medida a cada grupo; fica no grupo mais próximo, ou sem grupo
    quando as duas menores médias diferem menos que `tau` (relativo).
    """
    ctx.object_index(measure)
    if measure in partition.objects:
        raise InputError(f"'{measure}' already belongs to the partition")
    means, minimums = {}, {}
    for label, members in enumerate(partition.clusters()):
        distances = _gamma_distances(ctx, lattice, measure, members)
        means[label] = float(np.mean(distances))
        minimums[label] = min(distances)

    ranking = sorted(means.items(), key=lambda item: (item[1], item[0]))
    assigned = ranking[0][0] if ranking else None
    if len(ranking) >= 2:
        d1, d2 = ranking[0][1], ranking[1][1]
        if (d2 - d1) / max(d2, 1e-12) < tau:
            assigned = None
    return AssignmentResult(measure=measure, mean_distances=means, min_distances=minimums, assigned=assigned)
