from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

from src.measures.catalog import Catalog, MeasureDef
from src.properties.property_checkers import (
    check_discriminant,
    check_invariance,
    check_monotonicity_family,
    check_shape,
    check_symmetry_family,
    check_zones,
    inspect_fixed_value,
)
from src.properties.property_vector import (
    BOOLEAN_PROPERTIES,
    MATRIX_COLUMNS,
    PropertyVector,
    Shape,
    enforce_implications,
)
from src.properties.sampling_grid import SamplingGrid
from src.utils.errors import InputError, InsufficientDomainError
from src.utils.file_output import read_csv_rows, render_csv, write_text_atomic

_FIXED_VALUE_CHECKS = (
    ("P9", "independence", "a"),
    ("P10", "implication", "b"),
    ("P11", "equilibrium", "c"),
)

# Bits em que o critério numérico diverge da tabela de propriedades de referência
REFERENCE_TABLE_NOTES = {
    ("Implication index", "P21"): (
        "a tabela de referência traz 0; a medida não é limitada e sua amplitude cresce com √n, "
        "então o critério de amplitude dá 1"
    ),
}


def evaluate_all(m: MeasureDef, grid: SamplingGrid) -> PropertyVector:
    """
    Decide P3..P21 para uma medida. Medidas apenas declaradas devolvem o vetor fornecido.
    Propriedades indecidíveis ficam em `undecided` e valem 0.
    """
    if not m.computable:
        return m.declared

    bits: dict[str, bool] = {}
    evidence: dict[str, str] = {}
    undecided: list[str] = []
    fixed_values: dict[str, float] = {}

    for outcome in (check_symmetry_family(m, grid), check_monotonicity_family(m, grid)):
        bits.update(outcome.bits)
        evidence.update(outcome.evidence)
        undecided.extend(outcome.undecided)

    for prop, situation, key in _FIXED_VALUE_CHECKS:
        try:
            finding = inspect_fixed_value(m, grid, situation)
        except InsufficientDomainError as e:
            bits[prop] = False
            evidence[prop] = f"indecidível: {e}"
            undecided.append(prop)
            continue
        bits[prop] = finding.fixed
        if finding.fixed:
            fixed_values[key] = finding.mean
            evidence[prop] = f"{key} = {finding.mean:.6g} em {finding.samples} amostras"
        else:
            evidence[prop] = f"varia {finding.spread:.3g} em {finding.samples} amostras"

    inverted = False
    if bits["P9"]:
        try:
            bits["P12"], bits["P13"], inverted = check_zones(m, grid, fixed_values["a"])
            orientation = "invertida" if inverted else "usual"
            evidence["P12"] = evidence["P13"] = f"zonas em torno de a = {fixed_values['a']:.6g}, orientação {orientation}"
        except InsufficientDomainError as e:
            for prop in ("P12", "P13"):
                bits[prop] = False
                evidence[prop] = f"indecidível: {e}"
                undecided.append(prop)
    else:
        bits["P12"] = bits["P13"] = False
        evidence["P12"] = evidence["P13"] = "forçado a 0: P9 = 0"

    try:
        shape = check_shape(m, grid)
        evidence["P14"] = f"forma {shape.value} ao longo das retas de contra-exemplos"
    except InsufficientDomainError as e:
        shape = Shape.MIXED
        evidence["P14"] = f"indecidível: {e}"
        undecided.append("P14")

    invariance = check_invariance(m, grid)
    bits.update(invariance.bits)
    evidence.update(invariance.evidence)
    undecided.extend(invariance.undecided)

    bits["P19"] = m.random_antecedent
    evidence["P19"] = "antecedente aleatório (catálogo)" if m.random_antecedent else "antecedente fixo (catálogo)"

    try:
        bits["P21"], evidence["P21"] = check_discriminant(m, grid)
    except InsufficientDomainError as e:
        bits["P21"] = False
        evidence["P21"] = f"indecidível: {e}"
        undecided.append("P21")

    enforced = enforce_implications(bits)
    for prop in BOOLEAN_PROPERTIES:
        if enforced[prop] != bits[prop]:
            evidence[prop] = f"forçado a 0 ({evidence.get(prop, '')})"

    for (name, prop), note in REFERENCE_TABLE_NOTES.items():
        if name == m.name:
            evidence[prop] = f"{evidence.get(prop, '')} (nota: {note})"

    return PropertyVector(
        bits=enforced,
        shape=shape,
        fixed_values=fixed_values,
        undecided=tuple(undecided),
        zones_inverted=inverted,
        evidence=evidence,
    )


def _cell(row: tuple[int, ...], index: dict[str, int], column: str, default: int = 0) -> int:
    return row[index[column]] if column in index else default


@dataclass(frozen=True)
class PropertyMatrix:
    """
    Matriz medidas × propriedades (P14 em três colunas). `vectors` só existe quando a
    matriz foi calculada; uma matriz lida de CSV traz apenas os bits.
    """
    measures: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]
    columns: tuple[str, ...] = MATRIX_COLUMNS
    vectors: tuple[PropertyVector, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.measures) != len(self.rows):
            raise InputError("property matrix needs one row per measure")
        if len(set(self.measures)) != len(self.measures):
            raise InputError("duplicate measure in property matrix")
        index = {column: i for i, column in enumerate(self.columns)}
        for name, row in zip(self.measures, self.rows):
            if len(row) != len(self.columns):
                raise InputError(f"row '{name}' has {len(row)} cells, expected {len(self.columns)}")
            if any(value not in (0, 1) for value in row):
                raise InputError(f"row '{name}' has non-binary cells")
            cell = partial(_cell, row, index)
            if cell("P14.1") + cell("P14.2") + cell("P14.3") > 1:
                raise InputError(f"row '{name}' has more than one P14 shape column set")
            if not cell("P9", 1) and (cell("P12") or cell("P13")):
                raise InputError(f"row '{name}' violates P9 = 0 => P12 = P13 = 0")
            if not cell("P4", 1) and cell("P17"):
                raise InputError(f"row '{name}' violates P4 = 0 => P17 = 0")

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, measure: str) -> dict[str, int]:
        try:
            i = self.measures.index(measure)
        except ValueError:
            raise InputError(f"unknown measure '{measure}'") from None
        return dict(zip(self.columns, self.rows[i]))

    def to_csv_text(self) -> str:
        return render_csv(("measure",) + tuple(self.columns), ([name, *row] for name, row in zip(self.measures, self.rows)))

    def evidence_report(self) -> str:
        """Relatório texto: por medida, vetor completo, valores fixos, indecisões e evidências."""
        lines = []
        for name, vector in zip(self.measures, self.vectors):
            lines.append(f"## {name}")
            lines.append(vector.describe())
            if vector.fixed_values:
                lines.append("valores fixos: " + ", ".join(f"{k} = {v:.6g}" for k, v in sorted(vector.fixed_values.items())))
            if vector.zones_inverted:
                lines.append("zonas com orientação invertida")
            if vector.undecided:
                lines.append("indecidíveis: " + ", ".join(vector.undecided))
            for prop, text in vector.evidence.items():
                lines.append(f"  {prop}: {text}")
            lines.append("")
        return "\n".join(lines)

    @classmethod
    def from_vectors(cls, names: list[str], vectors: list[PropertyVector]) -> "PropertyMatrix":
        return cls(
            measures=tuple(names),
            rows=tuple(tuple(v.matrix_row()) for v in vectors),
            vectors=tuple(vectors),
        )


def build_matrix(c: Catalog, grid: SamplingGrid) -> PropertyMatrix:
    """Uma linha por entrada do catálogo, na ordem do catálogo."""
    return PropertyMatrix.from_vectors(c.names, [evaluate_all(m, grid) for m in c])


def write_matrix_csv(matrix: PropertyMatrix, path: str | Path) -> Path:
    return write_text_atomic(path, matrix.to_csv_text())


def read_matrix_csv(path: str | Path) -> PropertyMatrix:
    header, rows = read_csv_rows(path)
    if not header or header[0] != "measure":
        raise InputError(f"{path}: first column must be 'measure'")
    columns = tuple(header[1:])
    measures, cells = [], []
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise InputError(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
        try:
            cells.append(tuple(int(cell) for cell in row[1:]))
        except ValueError:
            raise InputError(f"{path}:{lineno}: cells must be 0 or 1") from None
        measures.append(row[0])
    return PropertyMatrix(measures=tuple(measures), rows=tuple(cells), columns=columns)


class PropertyEngine:
    """Etapa 1 do pipeline: decide as propriedades de cada medida do catálogo."""

    def __init__(self, grid: SamplingGrid | None = None):
        self.grid = grid or SamplingGrid()

    def evaluate(self, m: MeasureDef) -> PropertyVector:
        return evaluate_all(m, self.grid)

    def build_matrix(self, catalog: Catalog) -> PropertyMatrix:
        print(f"🚀 Avaliando {len(catalog)} medidas ({len(catalog.computable())} computáveis)...")
        vectors = []
        for m in catalog:
            vector = self.evaluate(m)
            kind = "calculada" if m.computable else "declarada"
            suffix = f" | indecidíveis: {', '.join(vector.undecided)}" if vector.undecided else ""
            print(f"   -> {m.name} ({kind}): {sum(vector.matrix_row())} propriedades{suffix}")
            vectors.append(vector)
        matrix = PropertyMatrix.from_vectors(catalog.names, vectors)
        undecided = sum(1 for v in vectors if v.undecided)
        print(f"✅ Matriz {len(matrix)} × {len(matrix.columns)} montada")
        if undecided:
            print(f"⚠️ {undecided} medidas com propriedades indecidíveis (codificadas como 0)")
        return matrix
