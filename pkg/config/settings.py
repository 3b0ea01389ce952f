import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

from src.properties.sampling_grid import SamplingGrid
from src.utils.errors import ConfigError
from src.validation.cluster_validator import DEFAULT_TAU, VerdictThresholds

load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parents[1]


class Config:
    # Dados empacotados
    CATALOG_PATH = os.getenv("FCA_CATALOG_PATH", str(PROJECT_ROOT / "data" / "measures_catalog.txt"))
    REFERENCE_CLUSTERS_PATH = os.getenv("FCA_REFERENCE_CLUSTERS", str(PROJECT_ROOT / "data" / "reference_clusters.txt"))

    # Saídas
    OUTPUT_DIR = os.getenv("FCA_OUTPUT_DIR", str(PROJECT_ROOT / "output"))

    @classmethod
    def validate(cls):
        """Valida se os arquivos de dados necessários estão presentes"""
        missing = [
            name for name, value in (
                ("FCA_CATALOG_PATH", cls.CATALOG_PATH),
                ("FCA_REFERENCE_CLUSTERS", cls.REFERENCE_CLUSTERS_PATH),
            )
            if not value or not Path(value).is_file()
        ]
        if missing:
            raise ValueError(f"Configurações faltando: {', '.join(missing)}")


_GRID_KEYS = {
    "GRID_TOTALS": ("totals", "floats"),
    "GRID_FRACTIONS": ("fractions", "floats"),
    "GRID_INTERIOR_POINTS": ("interior_points", "int"),
    "GRID_SCALE_FACTORS": ("scale_factors", "floats"),
    "GRID_GROWTH_FACTORS": ("growth_factors", "floats"),
    "GRID_EPSILON": ("epsilon", "float"),
    "GRID_SHAPE_EPSILON": ("shape_epsilon", "float"),
    "GRID_MIN_SAMPLES": ("min_samples", "int"),
    "GRID_DISCRIMINANT_TOTAL": ("discriminant_total", "float"),
    "GRID_DISCRIMINANT_RATIO": ("discriminant_ratio", "float"),
}

_KEYS = {
    "CATALOG_PATH", "OUTPUT_DIR", "REFERENCE_CLUSTERS_PATH", "K", "SEED", "TAU", "KMEANS_MAX_ITER",
    "FLOATING_POLICY", "VALIDATED_MIN_INTENT", "VALIDATED_MIN_COHESION",
    "HARDLY_MIN_INTENT", "HARDLY_MIN_COHESION",
} | set(_GRID_KEYS)

FLOATING_POLICIES = ("exclude", "include")


def _convert(raw: str, kind: str):
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return tuple(float(part) for part in raw.split(",") if part.strip())


@dataclass(frozen=True)
class PipelineConfig:
    """
    Parâmetros de uma execução do pipeline. Lidos de um arquivo chave=valor
    (mesmo formato de um .env); os padrões valem para chaves ausentes.
    """
    catalog_path: Path = field(default_factory=lambda: Path(Config.CATALOG_PATH))
    output_dir: Path = field(default_factory=lambda: Path(Config.OUTPUT_DIR))
    reference_clusters_path: Path = field(default_factory=lambda: Path(Config.REFERENCE_CLUSTERS_PATH))
    k: int = 9
    seed: int = 0
    tau: float = DEFAULT_TAU
    kmeans_max_iter: int = 300
    floating_policy: str = "exclude"
    thresholds: VerdictThresholds = field(default_factory=VerdictThresholds)
    grid: SamplingGrid = field(default_factory=SamplingGrid)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "PipelineConfig":
        if path is None:
            return cls()
        source = Path(path)
        if not source.is_file():
            raise ConfigError(f"config file not found: {source}")
        return cls.from_mapping(dotenv_values(source))

    @classmethod
    def from_mapping(cls, values: dict[str, str | None]) -> "PipelineConfig":
        problems = []
        unknown = sorted(set(values) - _KEYS)
        if unknown:
            problems.append(f"unknown keys: {', '.join(unknown)}")

        def read(key: str, kind: str, default):
            raw = values.get(key)
            if raw is None or raw.strip() == "":
                return default
            try:
                return _convert(raw.strip(), kind)
            except ValueError:
                problems.append(f"{key} must be {'a list of numbers' if kind == 'floats' else 'a ' + kind}, got '{raw}'")
                return default

        defaults = cls()
        k = read("K", "int", defaults.k)
        seed = read("SEED", "int", defaults.seed)
        tau = read("TAU", "float", defaults.tau)
        max_iter = read("KMEANS_MAX_ITER", "int", defaults.kmeans_max_iter)
        policy = (values.get("FLOATING_POLICY") or defaults.floating_policy).strip()
        thresholds = VerdictThresholds(
            validated_min_intent=read("VALIDATED_MIN_INTENT", "int", defaults.thresholds.validated_min_intent),
            validated_min_cohesion=read("VALIDATED_MIN_COHESION", "float", defaults.thresholds.validated_min_cohesion),
            hardly_min_intent=read("HARDLY_MIN_INTENT", "int", defaults.thresholds.hardly_min_intent),
            hardly_min_cohesion=read("HARDLY_MIN_COHESION", "float", defaults.thresholds.hardly_min_cohesion),
        )

        if k < 1:
            problems.append("K must be >= 1")
        if seed < 0:
            problems.append("SEED must be >= 0")
        if not 0 <= tau < 1:
            problems.append("TAU must lie in [0, 1)")
        if max_iter < 1:
            problems.append("KMEANS_MAX_ITER must be >= 1")
        if policy not in FLOATING_POLICIES:
            problems.append(f"FLOATING_POLICY must be one of {', '.join(FLOATING_POLICIES)}")
        if thresholds.validated_min_intent < 0 or thresholds.hardly_min_intent < 0:
            problems.append("intent thresholds must be >= 0")
        for name, value in (
            ("VALIDATED_MIN_COHESION", thresholds.validated_min_cohesion),
            ("HARDLY_MIN_COHESION", thresholds.hardly_min_cohesion),
        ):
            if not 0 < value <= 1:
                problems.append(f"{name} must lie in (0, 1]")

        overrides = {}
        for key, (attr, kind) in _GRID_KEYS.items():
            value = read(key, kind, None)
            if value is not None:
                overrides[attr] = value
        grid = defaults.grid
        try:
            grid = SamplingGrid(**overrides)
        except ConfigError as e:
            problems.append(str(e))
        except TypeError as e:
            problems.append(f"invalid grid value: {e}")

        if problems:
            raise ConfigError("invalid pipeline configuration: " + "; ".join(problems))

        return cls(
            catalog_path=Path(values.get("CATALOG_PATH") or defaults.catalog_path),
            output_dir=Path(values.get("OUTPUT_DIR") or defaults.output_dir),
            reference_clusters_path=Path(values.get("REFERENCE_CLUSTERS_PATH") or defaults.reference_clusters_path),
            k=k,
            seed=seed,
            tau=tau,
            kmeans_max_iter=max_iter,
            floating_policy=policy,
            thresholds=thresholds,
            grid=grid,
        )

    def with_overrides(self, k: int | None = None, seed: int | None = None, output_dir: str | Path | None = None) -> "PipelineConfig":
        """Flags da linha de comando têm precedência sobre o arquivo."""
        changes = {}
        if k is not None:
            if k < 1:
                raise ConfigError("--k must be >= 1")
            changes["k"] = k
        if seed is not None:
            if seed < 0:
                raise ConfigError("--seed must be >= 0")
            changes["seed"] = seed
        if output_dir is not None:
            changes["output_dir"] = Path(output_dir)
        return replace(self, **changes)
