from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from src.properties.property_engine import PropertyMatrix
from src.properties.property_vector import CONTEXT_COLUMNS
from src.utils.errors import InputError


def to_mask(indices: Iterable[int], size: int) -> int:
    """Conjunto de índices → máscara de bits (bit i = elemento i)."""
    mask = 0
    for i in indices:
        if not 0 <= i < size:
            raise IndexError(f"index {i} out of range for {size} elements")
        mask |= 1 << i
    return mask


def from_mask(mask: int) -> frozenset[int]:
    indices = []
    i = 0
    while mask:
        if mask & 1:
            indices.append(i)
        mask >>= 1
        i += 1
    return frozenset(indices)


@dataclass(frozen=True)
class FormalContext:
    """
    Contexto formal (G, M, R). Cada objeto guarda sua linha de incidência como máscara
    de bits sobre os atributos; as colunas são derivadas das linhas.
    """
    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.objects)) != len(self.objects):
            raise InputError("object names must be unique")
        if len(set(self.attributes)) != len(self.attributes):
            raise InputError("attribute names must be unique")
        if len(self.rows) != len(self.objects):
            raise InputError(f"incidence has {len(self.rows)} rows for {len(self.objects)} objects")
        limit = 1 << len(self.attributes)
        for name, row in zip(self.objects, self.rows):
            if not 0 <= row < limit:
                raise InputError(f"row of '{name}' references attributes beyond {len(self.attributes)}")

    @classmethod
    def from_incidence(
        cls, objects: Sequence[str], attributes: Sequence[str], incidence: Sequence[Sequence[int | bool]]
    ) -> "FormalContext":
        rows = []
        for name, cells in zip(objects, incidence):
            if len(cells) != len(attributes):
                raise InputError(f"row of '{name}' has {len(cells)} cells, expected {len(attributes)}")
            rows.append(to_mask((j for j, cell in enumerate(cells) if cell), len(attributes)))
        if len(incidence) != len(objects):
            raise InputError(f"incidence has {len(incidence)} rows for {len(objects)} objects")
        return cls(objects=tuple(objects), attributes=tuple(attributes), rows=tuple(rows))

    @property
    def full_intent(self) -> int:
        return (1 << len(self.attributes)) - 1

    @property
    def full_extent(self) -> int:
        return (1 << len(self.objects)) - 1

    @cached_property
    def columns(self) -> tuple[int, ...]:
        columns = [0] * len(self.attributes)
        for g, row in enumerate(self.rows):
            for m in from_mask(row):
                columns[m] |= 1 << g
        return tuple(columns)

    def incidence(self) -> list[list[int]]:
        return [[(row >> m) & 1 for m in range(len(self.attributes))] for row in self.rows]

    def object_index(self, name: str) -> int:
        try:
            return self.objects.index(name)
        except ValueError:
            raise InputError(f"unknown object '{name}'") from None

    def attribute_index(self, name: str) -> int:
        try:
            return self.attributes.index(name)
        except ValueError:
            raise InputError(f"unknown attribute '{name}'") from None

    # Derivações sobre máscaras: o laço interno do NextClosure

    def intent_of(self, extent: int) -> int:
        """O′: atributos comuns a todos os objetos da máscara."""
        intent = self.full_intent
        g = 0
        while extent:
            if extent & 1:
                intent &= self.rows[g]
            extent >>= 1
            g += 1
        return intent

    def extent_of(self, intent: int) -> int:
        """A′: objetos que têm todos os atributos da máscara."""
        extent = self.full_extent
        m = 0
        while intent:
            if intent & 1:
                extent &= self.columns[m]
            intent >>= 1
            m += 1
        return extent

    def close_intent(self, intent: int) -> int:
        return self.intent_of(self.extent_of(intent))

    def close_extent(self, extent: int) -> int:
        return self.extent_of(self.intent_of(extent))


def derive_objects(ctx: FormalContext, objects: Iterable[int]) -> frozenset[int]:
    """O′ para um conjunto de índices de objetos; O = ∅ devolve todos os atributos."""
    return from_mask(ctx.intent_of(to_mask(objects, len(ctx.objects))))


def derive_attributes(ctx: FormalContext, attributes: Iterable[int]) -> frozenset[int]:
    """A′ para um conjunto de índices de atributos; A = ∅ devolve todos os objetos."""
    return from_mask(ctx.extent_of(to_mask(attributes, len(ctx.attributes))))


def closure(ctx: FormalContext, attributes: Iterable[int]) -> frozenset[int]:
    """A″."""
    return from_mask(ctx.close_intent(to_mask(attributes, len(ctx.attributes))))


def context_from_matrix(matrix: PropertyMatrix, columns: Sequence[str] = CONTEXT_COLUMNS) -> FormalContext:
    """Contexto medidas × propriedades: mantém só as colunas pedidas (por padrão sem P14.2/P14.3)."""
    missing = [c for c in columns if c not in matrix.columns]
    if missing:
        raise InputError(f"property matrix lacks columns {', '.join(missing)}")
    positions = [matrix.columns.index(c) for c in columns]
    incidence = [[row[p] for p in positions] for row in matrix.rows]
    return FormalContext.from_incidence(matrix.measures, tuple(columns), incidence)
