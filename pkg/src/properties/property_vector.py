from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from src.utils.errors import InputError

# P1 e P2 ficam de fora (subjetivas); P14 é a forma da curva, codificada à parte
BOOLEAN_PROPERTIES = tuple(f"P{i}" for i in range(3, 22) if i != 14)
ALL_PROPERTIES = tuple(f"P{i}" for i in range(3, 22))

# Colunas da matriz: P14 em codificação disjuntiva completa
MATRIX_COLUMNS = (
    tuple(f"P{i}" for i in range(3, 14)) + ("P14.1", "P14.2", "P14.3") + tuple(f"P{i}" for i in range(15, 22))
)

# Atributos do contexto formal: só P14.1 (côncava) é mantida
CONTEXT_COLUMNS = tuple(c for c in MATRIX_COLUMNS if c not in ("P14.2", "P14.3"))


class Shape(str, Enum):
    CONCAVE = "concave"
    LINEAR = "linear"
    CONVEX = "convex"
    MIXED = "mixed"


_SHAPE_COLUMNS = {Shape.CONCAVE: "P14.1", Shape.LINEAR: "P14.2", Shape.CONVEX: "P14.3"}


@dataclass(frozen=True)
class PropertyVector:
    """
    Veredito de uma medida para P3..P21.

    `bits` tem uma entrada por propriedade booleana; `shape` guarda P14.
    `fixed_values` registra a (independência), b (implicação) e c (equilíbrio) quando fixos.
    P19 = 1 significa antecedente aleatório (medida baseada em modelo probabilístico).
    """
    bits: Mapping[str, bool]
    shape: Shape
    fixed_values: Mapping[str, float] = field(default_factory=dict)
    undecided: tuple[str, ...] = ()
    zones_inverted: bool = False
    evidence: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        missing = [p for p in BOOLEAN_PROPERTIES if p not in self.bits]
        if missing:
            raise InputError(f"property vector is missing {', '.join(missing)}")
        violations = implication_violations(self.bits)
        if violations:
            raise InputError("; ".join(violations))

    def __getitem__(self, prop: str) -> bool:
        return bool(self.bits[prop])

    def matrix_row(self) -> list[int]:
        row = []
        for column in MATRIX_COLUMNS:
            if column.startswith("P14."):
                row.append(int(_SHAPE_COLUMNS.get(self.shape) == column))
            else:
                row.append(int(bool(self.bits[column])))
        return row

    def describe(self) -> str:
        parts = []
        for prop in ALL_PROPERTIES:
            if prop == "P14":
                parts.append(f"P14={self.shape.value}")
            else:
                parts.append(f"{prop}={int(bool(self.bits[prop]))}")
        return " ".join(parts)


def implication_violations(bits: Mapping[str, bool]) -> list[str]:
    """P9 = 0 ⇒ P12 = P13 = 0 e P4 = 0 ⇒ P17 = 0."""
    problems = []
    if not bits.get("P9") and (bits.get("P12") or bits.get("P13")):
        problems.append("P9 = 0 requires P12 = 0 and P13 = 0")
    if not bits.get("P4") and bits.get("P17"):
        problems.append("P4 = 0 requires P17 = 0")
    return problems


def enforce_implications(bits: dict[str, bool]) -> dict[str, bool]:
    forced = dict(bits)
    if not forced.get("P9"):
        forced["P12"] = False
        forced["P13"] = False
    if not forced.get("P4"):
        forced["P17"] = False
    return forced


def parse_declared_vector(text: str) -> PropertyVector:
    """Converte 'P3=0 P4=1 ... P14=concave ...' num PropertyVector; exige as 19 propriedades."""
    values: dict[str, str] = {}
    for token in text.split():
        if "=" not in token:
            raise InputError(f"malformed property token '{token}'")
        key, value = token.split("=", 1)
        if key not in ALL_PROPERTIES:
            raise InputError(f"unknown property '{key}'")
        if key in values:
            raise InputError(f"property '{key}' given twice")
        values[key] = value
    missing = [p for p in ALL_PROPERTIES if p not in values]
    if missing:
        raise InputError(f"declared vector is missing {', '.join(missing)}")

    try:
        shape = Shape(values.pop("P14"))
    except ValueError as e:
        raise InputError(f"P14 must be one of {[s.value for s in Shape]}") from e

    bits = {}
    for key, value in values.items():
        if value not in ("0", "1"):
            raise InputError(f"{key} must be 0 or 1, got '{value}'")
        bits[key] = value == "1"
    return PropertyVector(bits=bits, shape=shape, evidence={p: "declared" for p in ALL_PROPERTIES})
