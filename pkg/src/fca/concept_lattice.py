"""
Lattice de conceitos: enumeração por NextClosure (ordem lética), diagrama de Hasse,
conceitos-objeto / conceitos-atributo e distância no diagrama.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import networkx as nx

from src.fca.formal_context import FormalContext, from_mask, to_mask
from src.utils.errors import DomainError, InputError


@dataclass(frozen=True)
class Concept:
    """Par (extensão, intensão) em máscaras de bits sobre objetos e atributos."""
    extent: int
    intent: int

    def objects(self, ctx: FormalContext) -> list[str]:
        return [ctx.objects[g] for g in sorted(from_mask(self.extent))]

    def attributes(self, ctx: FormalContext) -> list[str]:
        return [ctx.attributes[m] for m in sorted(from_mask(self.intent))]

    @property
    def extent_size(self) -> int:
        return self.extent.bit_count()

    @property
    def intent_size(self) -> int:
        return self.intent.bit_count()


def make_concept(ctx: FormalContext, extent: int, intent: int) -> Concept:
    """Constrói o conceito verificando O′ = A e A′ = O."""
    if ctx.intent_of(extent) != intent or ctx.extent_of(intent) != extent:
        raise DomainError("pair is not a formal concept (extent and intent are not closed onto each other)")
    return Concept(extent=extent, intent=intent)


def next_closure(ctx: FormalContext, intent: int) -> int | None:
    """Próxima intensão fechada depois de `intent` na ordem lética; None ao fim."""
    current = intent
    for i in range(len(ctx.attributes) - 1, -1, -1):
        bit = 1 << i
        if current & bit:
            current &= ~bit
            continue
        candidate = ctx.close_intent(current | bit)
        if not (candidate & ~current) & (bit - 1):
            return candidate
    return None


def _closed_intents(ctx: FormalContext) -> Iterable[int]:
    intent = ctx.close_intent(0)
    while intent is not None:
        yield intent
        intent = next_closure(ctx, intent)


@dataclass(frozen=True)
class ConceptLattice:
    """
    Conceitos em ordem lética. O topo (extensão completa) é o primeiro, o fundo
    (intensão completa) é o último. As coberturas são calculadas sob demanda.
    """
    context: FormalContext
    concepts: tuple[Concept, ...]

    def __len__(self) -> int:
        return len(self.concepts)

    @property
    def top(self) -> int:
        return 0

    @property
    def bottom(self) -> int:
        return len(self.concepts) - 1

    @cached_property
    def _by_intent(self) -> dict[int, int]:
        return {c.intent: i for i, c in enumerate(self.concepts)}

    def index_of(self, concept: Concept | int) -> int:
        if isinstance(concept, int):
            if not 0 <= concept < len(self.concepts):
                raise InputError(f"concept index {concept} out of range")
            return concept
        try:
            return self._by_intent[concept.intent]
        except KeyError:
            raise InputError("concept does not belong to this lattice") from None

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        return build_hasse(self)

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Diagrama de Hasse: aresta (inferior → superior) para cada cobertura."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.concepts)))
        graph.add_edges_from(self.covers)
        return graph

    @cached_property
    def _undirected(self) -> nx.Graph:
        return self.graph.to_undirected()

    @cached_property
    def _distance_cache(self) -> dict[int, dict[int, int]]:
        return {}

    def distances_from(self, index: int) -> dict[int, int]:
        cache = self._distance_cache
        if index not in cache:
            cache[index] = nx.single_source_shortest_path_length(self._undirected, index)
        return cache[index]

    def height(self) -> int:
        """Comprimento (em arestas) da maior cadeia do fundo ao topo."""
        if len(self.concepts) <= 1:
            return 0
        return nx.dag_longest_path_length(self.graph)

    def leq(self, i: int, j: int) -> bool:
        """c_i ≤ c_j ⇔ intensão de c_j ⊆ intensão de c_i."""
        return self.concepts[j].intent & ~self.concepts[i].intent == 0

    def concept_of_objects(self, extent: int) -> int:
        """Menor conceito cuja extensão contém os objetos: (O″, O′)."""
        return self._by_intent[self.context.intent_of(extent)]

    def concept_of_attributes(self, intent: int) -> int:
        """Maior conceito cuja intensão contém os atributos: (A′, A″)."""
        return self._by_intent[self.context.close_intent(intent)]


def enumerate_concepts(ctx: FormalContext) -> ConceptLattice:
    """Todos os conceitos do contexto, uma única vez cada, em ordem lética das intensões."""
    concepts = tuple(make_concept(ctx, ctx.extent_of(intent), intent) for intent in _closed_intents(ctx))
    return ConceptLattice(context=ctx, concepts=concepts)


def build_hasse(lattice: ConceptLattice) -> tuple[tuple[int, int], ...]:
    """
    Relação de cobertura (inferior, superior). Para cada conceito, os vizinhos inferiores
    são as intensões estritamente maiores que são minimais entre si.
    """
    order = sorted(range(len(lattice.concepts)), key=lambda i: (lattice.concepts[i].intent_size, i))
    edges = []
    for upper in range(len(lattice.concepts)):
        intent = lattice.concepts[upper].intent
        minimal: list[int] = []
        for lower in order:
            candidate = lattice.concepts[lower].intent
            if candidate == intent or intent & ~candidate:
                continue
            if any(lattice.concepts[kept].intent & ~candidate == 0 for kept in minimal):
                continue
            minimal.append(lower)
        edges.extend((lower, upper) for lower in sorted(minimal))
    return tuple(sorted(edges))


def _resolve_object(ctx: FormalContext, g: str | int) -> int:
    if isinstance(g, str):
        return ctx.object_index(g)
    if not 0 <= g < len(ctx.objects):
        raise InputError(f"object index {g} out of range")
    return g


def _resolve_attribute(ctx: FormalContext, m: str | int) -> int:
    if isinstance(m, str):
        return ctx.attribute_index(m)
    if not 0 <= m < len(ctx.attributes):
        raise InputError(f"attribute index {m} out of range")
    return m


def object_concept_index(ctx: FormalContext, lattice: ConceptLattice, g: str | int) -> int:
    return lattice.concept_of_objects(to_mask([_resolve_object(ctx, g)], len(ctx.objects)))


def object_concept(ctx: FormalContext, lattice: ConceptLattice, g: str | int) -> Concept:
    """γ(g) = ({g}″, {g}′)."""
    return lattice.concepts[object_concept_index(ctx, lattice, g)]


def attribute_concept_index(ctx: FormalContext, lattice: ConceptLattice, m: str | int) -> int:
    return lattice.concept_of_attributes(to_mask([_resolve_attribute(ctx, m)], len(ctx.attributes)))


def attribute_concept(ctx: FormalContext, lattice: ConceptLattice, m: str | int) -> Concept:
    """μ(m) = ({m}′, {m}″)."""
    return lattice.concepts[attribute_concept_index(ctx, lattice, m)]


def hasse_distance(lattice: ConceptLattice, c1: Concept | int, c2: Concept | int) -> int:
    """Menor número de arestas de cobertura entre dois conceitos (diagrama não orientado)."""
    i, j = lattice.index_of(c1), lattice.index_of(c2)
    if i == j:
        return 0
    return lattice.distances_from(i)[j]
