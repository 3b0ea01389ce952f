import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from src.utils.errors import InputError
from src.utils.file_output import read_csv_rows, write_csv_atomic

AHC = "AHC"
KMEANS = "K-means"
REFERENCE = "reference"

DEFAULT_REFERENCE_PATH = Path(__file__).resolve().parents[2] / "data" / "reference_clusters.txt"


def renumber(labels: Sequence[int]) -> tuple[int, ...]:
    """Rótulos renumerados pela ordem do menor índice de cada grupo (0, 1, 2, ...)."""
    mapping: dict[int, int] = {}
    for label in labels:
        if label not in mapping:
            mapping[label] = len(mapping)
    return tuple(mapping[label] for label in labels)


@dataclass(frozen=True)
class Partition:
    """Rótulo de grupo por objeto; todo rótulo em [0, k) e nenhum grupo vazio."""
    labels: tuple[int, ...]
    k: int
    method: str
    objects: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.objects:
            object.__setattr__(self, "objects", tuple(str(i) for i in range(len(self.labels))))
        if len(self.objects) != len(self.labels):
            raise InputError(f"partition has {len(self.labels)} labels for {len(self.objects)} objects")
        if len(set(self.objects)) != len(self.objects):
            raise InputError("partition object names must be unique")
        if any(not 0 <= label < self.k for label in self.labels):
            raise InputError(f"partition labels must lie in [0, {self.k})")
        if len(set(self.labels)) != self.k:
            raise InputError(f"partition declares k = {self.k} but has {len(set(self.labels))} non-empty groups")

    @classmethod
    def from_labels(cls, labels: Sequence[int], method: str, objects: Sequence[str] = ()) -> "Partition":
        normalized = renumber(labels)
        return cls(labels=normalized, k=len(set(normalized)), method=method, objects=tuple(objects))

    def __len__(self) -> int:
        return len(self.labels)

    def clusters(self) -> list[list[str]]:
        groups: list[list[str]] = [[] for _ in range(self.k)]
        for name, label in zip(self.objects, self.labels):
            groups[label].append(name)
        return groups

    def label_of(self, name: str) -> int:
        try:
            return self.labels[self.objects.index(name)]
        except ValueError:
            raise InputError(f"unknown object '{name}'") from None

    def without(self, names: Sequence[str]) -> "Partition":
        """Mesma partição sem os objetos indicados (grupos vazios somem, rótulos renumerados)."""
        dropped = set(names)
        kept = [(name, label) for name, label in zip(self.objects, self.labels) if name not in dropped]
        return Partition.from_labels([label for _, label in kept], self.method, [name for name, _ in kept])


@dataclass(frozen=True)
class ClusterMatch:
    left: int
    right: int
    overlap: tuple[str, ...]


@dataclass(frozen=True)
class PartitionComparison:
    matches: tuple[ClusterMatch, ...]
    disagreement: tuple[str, ...]
    unmatched_left: tuple[int, ...] = field(default=())
    unmatched_right: tuple[int, ...] = field(default=())

    @property
    def agree(self) -> bool:
        return not self.disagreement


def compare_partitions(p1: Partition, p2: Partition) -> PartitionComparison:
    """
    Casa os grupos das duas partições por sobreposição máxima, de forma gulosa.
    Empates de sobreposição: vence a interseção com o menor nome de objeto.
    Divergentes são os objetos fora de toda interseção casada.
    """
    if set(p1.objects) != set(p2.objects):
        only_left = sorted(set(p1.objects) - set(p2.objects))
        only_right = sorted(set(p2.objects) - set(p1.objects))
        raise InputError(f"partitions cover different objects (only left: {only_left}, only right: {only_right})")

    intersections: dict[tuple[int, int], list[str]] = {}
    for name in p1.objects:
        intersections.setdefault((p1.label_of(name), p2.label_of(name)), []).append(name)

    ranked = sorted(intersections.items(), key=lambda item: (-len(item[1]), min(item[1])))
    used_left, used_right = set(), set()
    matches = []
    for (a, b), names in ranked:
        if a in used_left or b in used_right:
            continue
        used_left.add(a)
        used_right.add(b)
        matches.append(ClusterMatch(left=a, right=b, overlap=tuple(sorted(names))))

    agreed = {name for match in matches for name in match.overlap}
    return PartitionComparison(
        matches=tuple(matches),
        disagreement=tuple(sorted(set(p1.objects) - agreed)),
        unmatched_left=tuple(sorted(set(range(p1.k)) - used_left)),
        unmatched_right=tuple(sorted(set(range(p2.k)) - used_right)),
    )


def write_partition_csv(p: Partition, path: str | Path) -> Path:
    return write_csv_atomic(path, ("object", "label"), zip(p.objects, p.labels))


def read_partition_csv(path: str | Path, method: str = REFERENCE) -> Partition:
    header, rows = read_csv_rows(path)
    if header != ["object", "label"]:
        raise InputError(f"{path}: expected header 'object,label'")
    try:
        labels = [int(row[1]) for row in rows]
    except (ValueError, IndexError):
        raise InputError(f"{path}: labels must be integers") from None
    return Partition.from_labels(labels, method, [row[0] for row in rows])


# --- partições de referência (arquivo em seções)

_SECTION_RE = re.compile(r"^\[(?P<name>[^\]]+)\]$")


@dataclass(frozen=True)
class ReferenceClusters:
    """
    Grupos C1..C9 comuns às duas técnicas e o grupo em que cada técnica coloca
    as medidas flutuantes.
    """
    clusters: dict[str, tuple[str, ...]]
    floating: dict[str, dict[str, str]]

    @property
    def floating_names(self) -> tuple[str, ...]:
        names = []
        for placement in self.floating.values():
            names.extend(n for n in placement if n not in names)
        return tuple(names)

    def partition(self, method: str, objects: Sequence[str] = (), include_floating: bool = True) -> Partition:
        """
        Partição de referência da técnica ("ahc" ou "kmeans"). A ordem dos objetos é a
        de `objects` quando dada; senão C1..C9 e depois os flutuantes.
        """
        if method not in self.floating:
            raise InputError(f"unknown reference method '{method}' (expected one of {sorted(self.floating)})")
        assignment = {name: cluster for cluster, names in self.clusters.items() for name in names}
        if include_floating:
            assignment.update(self.floating[method])
        order = list(objects) if objects else list(assignment)
        missing = [name for name in order if name not in assignment]
        if objects and include_floating and missing:
            raise InputError(f"reference clusters do not place {', '.join(missing)}")
        order = [name for name in order if name in assignment]
        cluster_ids = {cluster: i for i, cluster in enumerate(self.clusters)}
        tag = AHC if method == "ahc" else KMEANS
        return Partition.from_labels([cluster_ids[assignment[name]] for name in order], tag, order)


def parse_reference_clusters(text: str) -> ReferenceClusters:
    clusters: dict[str, list[str]] = {}
    floating: dict[str, dict[str, str]] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header = _SECTION_RE.match(line)
        if header:
            section = header.group("name").strip()
            if section.startswith("floating."):
                floating.setdefault(section.split(".", 1)[1], {})
            else:
                clusters.setdefault(section, [])
            continue
        if section is None:
            raise InputError(f"line {lineno}: entry outside of any section")
        if section.startswith("floating."):
            if "=" not in line:
                raise InputError(f"line {lineno}: expected 'measure = cluster'")
            name, cluster = (part.strip() for part in line.split("=", 1))
            floating[section.split(".", 1)[1]][name] = cluster
        else:
            clusters[section].append(line)

    placed = [name for names in clusters.values() for name in names]
    if len(set(placed)) != len(placed):
        raise InputError("a measure appears in more than one reference cluster")
    for method, placement in floating.items():
        for name, cluster in placement.items():
            if cluster not in clusters:
                raise InputError(f"floating '{name}' ({method}) points to unknown cluster '{cluster}'")
            if name in placed:
                raise InputError(f"floating '{name}' is also listed in a fixed cluster")
    return ReferenceClusters(
        clusters={name: tuple(names) for name, names in clusters.items()},
        floating=floating,
    )


def load_reference_clusters(path: str | Path = DEFAULT_REFERENCE_PATH) -> ReferenceClusters:
    source = Path(path)
    if not source.is_file():
        raise InputError(f"reference clusters not found: {source}")
    return parse_reference_clusters(source.read_text(encoding="utf-8"))
