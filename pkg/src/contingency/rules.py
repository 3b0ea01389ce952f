from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from src.contingency.contingency_table import ContingencyTable
from src.utils.errors import DomainError, InputError


@dataclass(frozen=True)
class RuleQuery:
    antecedent: frozenset[str]
    consequent: frozenset[str]
    minsupp: float = 0.0
    minconf: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))
        object.__setattr__(self, "consequent", frozenset(self.consequent))
        if not self.antecedent or not self.consequent:
            raise InputError("antecedent and consequent must be non-empty")
        if self.antecedent & self.consequent:
            raise InputError("antecedent and consequent overlap")
        for label, value in (("minsupp", self.minsupp), ("minconf", self.minconf)):
            if not 0.0 <= value <= 1.0:
                raise InputError(f"{label} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class TransactionSet:
    """Registros (conjuntos de atributos) e o universo ordenado de atributos."""
    objects: tuple[frozenset[str], ...]
    universe: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(frozenset(r) for r in self.objects))
        known = set(self.universe)
        for i, record in enumerate(self.objects):
            unknown = record - known
            if unknown:
                raise InputError(f"record {i} uses attributes outside the universe: {sorted(unknown)}")

    @classmethod
    def from_records(cls, records: Iterable[Iterable[str]]) -> "TransactionSet":
        """Universo na ordem da primeira aparição de cada atributo."""
        materialized = [frozenset(r) for r in records]
        universe: list[str] = []
        seen: set[str] = set()
        for record in materialized:
            for attribute in sorted(record):
                if attribute not in seen:
                    seen.add(attribute)
                    universe.append(attribute)
        return cls(objects=tuple(materialized), universe=tuple(universe))


@dataclass(frozen=True)
class RuleAssessment:
    valid: bool
    support: float
    confidence: float

    @property
    def exact(self) -> bool:
        """Regra exata: confiança igual a 1 (nenhum contra-exemplo)."""
        return self.confidence == 1.0


def read_transactions(path: str | Path) -> TransactionSet:
    """
    Um registro por linha, atributos separados por espaço simples, UTF-8.
    Linhas iniciadas por '#' e linhas em branco são ignoradas.
    """
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            records.append([token for token in line.split(" ") if token])
    return TransactionSet.from_records(records)


def parse_rule(text: str, minsupp: float = 0.0, minconf: float = 0.0) -> RuleQuery:
    """Converte 'a b => c' em RuleQuery."""
    if "=>" not in text:
        raise InputError(f"rule '{text}' must look like 'a b => c'")
    left, right = text.split("=>", 1)
    return RuleQuery(frozenset(left.split()), frozenset(right.split()), minsupp, minconf)


def table_from_transactions(data: TransactionSet, q: RuleQuery) -> ContingencyTable:
    """Conta n, n_x, n_y, n_xy varrendo os registros uma única vez."""
    if q.antecedent & q.consequent:
        raise InputError("antecedent and consequent overlap")
    unknown = (q.antecedent | q.consequent) - set(data.universe)
    if unknown:
        raise InputError(f"unknown attribute(s): {', '.join(sorted(unknown))}")
    if not data.objects:
        raise DomainError("empty dataset")

    n_x = n_y = n_xy = 0
    for record in data.objects:
        has_x = q.antecedent <= record
        has_y = q.consequent <= record
        n_x += has_x
        n_y += has_y
        n_xy += has_x and has_y
    return ContingencyTable(n=len(data.objects), n_x=n_x, n_y=n_y, n_xy=n_xy)


def is_valid_rule(t: ContingencyTable, q: RuleQuery) -> RuleAssessment:
    """supp = n_xy/n, conf = n_xy/n_x; válida sse supp ≥ minsupp e conf ≥ minconf."""
    if t.n_x == 0:
        raise DomainError("confidence undefined: n_x = 0")
    support = t.n_xy / t.n
    confidence = t.n_xy / t.n_x
    valid = support >= q.minsupp and confidence >= q.minconf
    return RuleAssessment(valid=valid, support=support, confidence=confidence)
