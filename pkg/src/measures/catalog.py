import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from src.contingency.contingency_table import ContingencyTable, derive_cells
from src.measures.evaluator import evaluate_expr
from src.measures.expression import MeasureExpr, parse_measure, to_source
from src.properties.property_vector import PropertyVector, parse_declared_vector
from src.utils.errors import CatalogError, InputError

DEFAULT_CATALOG_PATH = Path(__file__).resolve().parents[2] / "data" / "measures_catalog.txt"

_DECLARED_RE = re.compile(r"^(?P<name>.+?)\s*:declared\s*(?:\[(?P<vector>[^\]]*)\])?\s*$")
_ALIAS_RE = re.compile(r"^(?P<name>.+?)\s*:alias\s+(?P<target>.+?)\s*$")
_FLAG_RE = re.compile(r"^P19\s*=\s*(?P<value>[01])$")


@dataclass(frozen=True)
class MeasureDef:
    """
    Medida nomeada: computável (AST) ou apenas declarada (vetor de propriedades fornecido).
    `random_antecedent` alimenta P19 das medidas computáveis.
    """
    name: str
    expr: MeasureExpr | None = None
    declared: PropertyVector | None = None
    random_antecedent: bool = False

    def __post_init__(self):
        if (self.expr is None) == (self.declared is None):
            raise CatalogError(
                f"measure '{self.name}' must have exactly one of an expression or a declared vector"
            )

    @property
    def computable(self) -> bool:
        return self.expr is not None

    def source(self) -> str:
        if self.expr is not None:
            suffix = " | P19=1" if self.random_antecedent else ""
            return f"{self.name} := {to_source(self.expr)}{suffix}"
        return f"{self.name} :declared [{self.declared.describe()}]"


@dataclass(frozen=True)
class Catalog:
    """Lista ordenada de medidas; a ordem é a ordem canônica dos objetos do contexto."""
    entries: tuple[MeasureDef, ...]
    aliases: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if entry.name in seen:
                raise CatalogError(f"duplicate measure name '{entry.name}'")
            seen.add(entry.name)
        for alias, target in self.aliases.items():
            if alias in seen:
                raise CatalogError(f"alias '{alias}' clashes with a measure name")
            if target not in seen:
                raise CatalogError(f"alias '{alias}' points to unknown measure '{target}'")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[MeasureDef]:
        return iter(self.entries)

    @property
    def names(self) -> list[str]:
        return [entry.name for entry in self.entries]

    def resolve(self, name: str) -> str:
        return self.aliases.get(name, name)

    def get(self, name: str) -> MeasureDef:
        canonical = self.resolve(name)
        for entry in self.entries:
            if entry.name == canonical:
                return entry
        raise InputError(f"unknown measure '{name}'")

    def computable(self) -> list[MeasureDef]:
        return [entry for entry in self.entries if entry.computable]

    def subset(self, names: list[str]) -> "Catalog":
        return Catalog(entries=tuple(self.get(name) for name in names))


def eval_measure(m: MeasureDef, t: ContingencyTable) -> float:
    """Avalia uma medida computável numa tabela; falha de domínio → MeasureUndefinedError."""
    if not m.computable:
        raise InputError(f"measure '{m.name}' is declared-only and cannot be evaluated")
    return evaluate_expr(m.expr, derive_cells(t).probabilities())


def parse_catalog(text: str) -> Catalog:
    entries: list[MeasureDef] = []
    aliases: dict[str, str] = {}
    names_seen: dict[str, int] = {}

    def register(name: str, lineno: int):
        if not name:
            raise CatalogError(f"line {lineno}: empty measure name")
        if name in names_seen:
            raise CatalogError(f"line {lineno}: duplicate measure name '{name}' (first on line {names_seen[name]})")
        names_seen[name] = lineno

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        if ":=" in line:
            name, body = (part.strip() for part in line.split(":=", 1))
            register(name, lineno)
            random_antecedent = False
            if "|" in body:
                body, flag = (part.strip() for part in body.split("|", 1))
                match = _FLAG_RE.match(flag)
                if not match:
                    raise CatalogError(f"line {lineno}: unknown flag '{flag}' for '{name}'")
                random_antecedent = match.group("value") == "1"
            try:
                expr = parse_measure(body)
            except InputError as e:
                raise CatalogError(f"line {lineno}: malformed expression for '{name}': {e}") from e
            entries.append(MeasureDef(name=name, expr=expr, random_antecedent=random_antecedent))
            continue

        declared = _DECLARED_RE.match(line)
        if declared:
            name = declared.group("name").strip()
            register(name, lineno)
            if declared.group("vector") is None:
                raise CatalogError(f"line {lineno}: declared-only entry '{name}' is missing its property vector")
            try:
                vector = parse_declared_vector(declared.group("vector"))
            except InputError as e:
                raise CatalogError(f"line {lineno}: invalid property vector for '{name}': {e}") from e
            entries.append(MeasureDef(name=name, declared=vector, random_antecedent=vector["P19"]))
            continue

        alias = _ALIAS_RE.match(line)
        if alias:
            name = alias.group("name").strip()
            register(name, lineno)
            aliases[name] = alias.group("target").strip()
            continue

        raise CatalogError(f"line {lineno}: entry '{line}' has neither an expression nor a declared vector")

    return Catalog(entries=tuple(entries), aliases=aliases)


def load_catalog(path: str | Path = DEFAULT_CATALOG_PATH) -> Catalog:
    catalog_path = Path(path)
    if not catalog_path.is_file():
        raise CatalogError(f"catalog not found: {catalog_path}")
    return parse_catalog(catalog_path.read_text(encoding="utf-8"))
