from dataclasses import dataclass, replace
from itertools import product

import numpy as np

from src.utils.errors import ConfigError


@dataclass(frozen=True)
class SamplingGrid:
    """
    Malha numérica usada pelos verificadores de propriedades.

    - totals: tamanhos de base n
    - fractions: frações marginais usadas para p(X) e p(Y)
    - interior_points: pontos interiores por reta de n_xy (extremos viáveis excluídos)
    - scale_factors: fatores K de dilatação (P15 usa todos os pares K1 ≠ K2, P20 usa cada k)
    - growth_factors: multiplicadores de n para P7 (contagens fixas, novos registros em X̄Ȳ)
    - epsilon: tolerância relativa das comparações
    """
    totals: tuple[float, ...] = (100.0, 1000.0, 10000.0)
    fractions: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    interior_points: int = 9
    scale_factors: tuple[float, ...] = (0.5, 2.0, 3.0)
    growth_factors: tuple[float, ...] = (1.0, 1.5, 2.0, 4.0)
    epsilon: float = 1e-9
    shape_epsilon: float = 1e-7
    min_samples: int = 5
    discriminant_total: float = 1e6
    discriminant_ratio: float = 0.1
    ny_line_points: int = 5

    def __post_init__(self):
        problems = []
        if not self.totals or any(t <= 0 for t in self.totals):
            problems.append("totals must be positive")
        if not self.fractions or any(not 0 < f < 1 for f in self.fractions):
            problems.append("fractions must lie in (0, 1)")
        if self.interior_points < 3:
            problems.append("at least 3 interior points are required")
        if not self.scale_factors or any(k <= 0 for k in self.scale_factors):
            problems.append("scale factors must be positive")
        if len(set(self.scale_factors)) < 2:
            problems.append("at least two distinct scale factors are required")
        if len(self.growth_factors) < 2 or any(g < 1 for g in self.growth_factors):
            problems.append("growth factors must be >= 1 (at least two of them)")
        if list(self.growth_factors) != sorted(set(self.growth_factors)):
            problems.append("growth factors must be strictly increasing")
        if not self.epsilon > 0:
            problems.append("epsilon must be positive")
        if not self.shape_epsilon > 0:
            problems.append("shape epsilon must be positive")
        if self.min_samples < 1:
            problems.append("min samples must be >= 1")
        if self.discriminant_total <= 0:
            problems.append("discriminant total must be positive")
        if not 0 < self.discriminant_ratio <= 1:
            problems.append("discriminant ratio must lie in (0, 1]")
        if self.ny_line_points < 3:
            problems.append("at least 3 points per n_y line are required")
        if problems:
            raise ConfigError("invalid sampling grid: " + "; ".join(problems))

    def refined(self, factor: int = 2) -> "SamplingGrid":
        """Mesma malha com `factor` vezes mais pontos interiores (checagem de robustez)."""
        return replace(self, interior_points=self.interior_points * factor)


@dataclass(frozen=True)
class TableBatch:
    """
    Lote de tabelas de contingência em vetores numpy de mesma forma (1-D ou 2-D).
    Numa forma 2-D cada linha é uma "reta" da malha, varrida na última dimensão.
    """
    n: np.ndarray
    n_x: np.ndarray
    n_y: np.ndarray
    n_xy: np.ndarray

    @classmethod
    def from_cells(cls, n_xy, n_xny, n_nxy, n_nxny) -> "TableBatch":
        n_xy = np.asarray(n_xy, dtype=float)
        n_xny = np.asarray(n_xny, dtype=float)
        n_nxy = np.asarray(n_nxy, dtype=float)
        n_nxny = np.asarray(n_nxny, dtype=float)
        return cls(n=n_xy + n_xny + n_nxy + n_nxny, n_x=n_xy + n_xny, n_y=n_xy + n_nxy, n_xy=n_xy)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.n.shape

    def __len__(self) -> int:
        return int(self.n.size)

    def cells(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        n_xny = np.maximum(self.n_x - self.n_xy, 0.0)
        n_nxy = np.maximum(self.n_y - self.n_xy, 0.0)
        n_nxny = np.maximum(self.n - self.n_x - self.n_y + self.n_xy, 0.0)
        return self.n_xy, n_xny, n_nxy, n_nxny

    def variables(self) -> dict[str, np.ndarray]:
        """Ambiente de avaliação: as nove variáveis da linguagem de medidas."""
        n_xy, n_xny, n_nxy, n_nxny = self.cells()
        n = self.n
        return {
            "pxy": n_xy / n,
            "pxny": n_xny / n,
            "pnxy": n_nxy / n,
            "pnxny": n_nxny / n,
            "px": self.n_x / n,
            "py": self.n_y / n,
            "pnx": (n - self.n_x) / n,
            "pny": (n - self.n_y) / n,
            "n": n,
        }

    def dependency(self) -> np.ndarray:
        """p(XY) − p(X)p(Y): positivo na zona de atração, negativo na de repulsão."""
        return self.n_xy / self.n - (self.n_x / self.n) * (self.n_y / self.n)

    def flatten(self) -> "TableBatch":
        return TableBatch(n=self.n.ravel(), n_x=self.n_x.ravel(), n_y=self.n_y.ravel(), n_xy=self.n_xy.ravel())

    # Regras derivadas: mesmas quatro células com os papéis trocados

    def swapped(self) -> "TableBatch":
        """Y→X."""
        return TableBatch(n=self.n, n_x=self.n_y, n_y=self.n_x, n_xy=self.n_xy)

    def negate_consequent(self) -> "TableBatch":
        """X→Ȳ."""
        return TableBatch(n=self.n, n_x=self.n_x, n_y=self.n - self.n_y, n_xy=self.n_x - self.n_xy)

    def negate_antecedent(self) -> "TableBatch":
        """X̄→Y."""
        return TableBatch(n=self.n, n_x=self.n - self.n_x, n_y=self.n_y, n_xy=self.n_y - self.n_xy)

    def negate_both(self) -> "TableBatch":
        """X̄→Ȳ."""
        return TableBatch(
            n=self.n, n_x=self.n - self.n_x, n_y=self.n - self.n_y,
            n_xy=self.n - self.n_x - self.n_y + self.n_xy,
        )

    def contrapositive(self) -> "TableBatch":
        """Ȳ→X̄."""
        return TableBatch(
            n=self.n, n_x=self.n - self.n_y, n_y=self.n - self.n_x,
            n_xy=self.n - self.n_x - self.n_y + self.n_xy,
        )

    def scale_cells(self, k_xy: float, k_xny: float, k_nxy: float, k_nxny: float) -> "TableBatch":
        n_xy, n_xny, n_nxy, n_nxny = self.cells()
        return TableBatch.from_cells(n_xy * k_xy, n_xny * k_xny, n_nxy * k_nxy, n_nxny * k_nxny)


def _marginal_triples(totals, fractions) -> list[tuple[float, float, float]]:
    return [(float(n), fx * n, fy * n) for n, fx, fy in product(totals, fractions, fractions)]


def _interior_lines(triples, points: int) -> TableBatch:
    """Uma reta por (n, n_x, n_y); n_xy percorre os pontos interiores do intervalo viável."""
    steps = np.arange(1, points + 1) / (points + 1)
    n, n_x, n_y = (np.array(col, dtype=float)[:, None] for col in zip(*triples))
    lo = np.maximum(0.0, n_x + n_y - n)
    hi = np.minimum(n_x, n_y)
    n_xy = lo + (hi - lo) * steps[None, :]
    shape = n_xy.shape
    return TableBatch(
        n=np.broadcast_to(n, shape).copy(),
        n_x=np.broadcast_to(n_x, shape).copy(),
        n_y=np.broadcast_to(n_y, shape).copy(),
        n_xy=n_xy,
    )


def n_xy_lines(grid: SamplingGrid) -> TableBatch:
    """Retas de n_xy com (n, n_x, n_y) fixos; forma (retas, interior_points)."""
    return _interior_lines(_marginal_triples(grid.totals, grid.fractions), grid.interior_points)


def discriminant_lines(grid: SamplingGrid, total: float) -> TableBatch:
    """Retas de n_xy num único tamanho de base, marginais nas frações da malha."""
    return _interior_lines(_marginal_triples((total,), grid.fractions), grid.interior_points)


def base_tables(grid: SamplingGrid) -> TableBatch:
    return n_xy_lines(grid).flatten()


def growth_lines(grid: SamplingGrid) -> TableBatch:
    """Cada tabela da malha com n multiplicado pelos fatores de crescimento; forma (tabelas, fatores)."""
    base = base_tables(grid)
    factors = np.asarray(grid.growth_factors, dtype=float)[None, :]
    shape = (len(base), factors.shape[1])
    return TableBatch(
        n=base.n[:, None] * factors,
        n_x=np.broadcast_to(base.n_x[:, None], shape).copy(),
        n_y=np.broadcast_to(base.n_y[:, None], shape).copy(),
        n_xy=np.broadcast_to(base.n_xy[:, None], shape).copy(),
    )


def n_y_lines(grid: SamplingGrid) -> TableBatch:
    """Cada tabela da malha com n_y percorrendo o interior de [n_xy, n − n_x + n_xy]; forma (tabelas, pontos)."""
    base = base_tables(grid)
    points = grid.ny_line_points
    steps = (np.arange(1, points + 1) / (points + 1))[None, :]
    lo = base.n_xy[:, None]
    hi = (base.n - base.n_x + base.n_xy)[:, None]
    n_y = lo + (hi - lo) * steps
    shape = n_y.shape
    return TableBatch(
        n=np.broadcast_to(base.n[:, None], shape).copy(),
        n_x=np.broadcast_to(base.n_x[:, None], shape).copy(),
        n_y=n_y,
        n_xy=np.broadcast_to(base.n_xy[:, None], shape).copy(),
    )


def independence_tables(grid: SamplingGrid) -> TableBatch:
    """n_xy = n_x·n_y/n."""
    n, n_x, n_y = (np.array(col) for col in zip(*_marginal_triples(grid.totals, grid.fractions)))
    return TableBatch(n=n, n_x=n_x, n_y=n_y, n_xy=n_x * n_y / n)


def implication_tables(grid: SamplingGrid) -> TableBatch:
    """Nenhum contra-exemplo (n_xȳ = 0), com p(X) < p(Y)."""
    triples = [(n, nx, ny) for n, nx, ny in _marginal_triples(grid.totals, grid.fractions) if nx < ny]
    n, n_x, n_y = (np.array(col, dtype=float) for col in zip(*triples))
    return TableBatch(n=n, n_x=n_x, n_y=n_y, n_xy=n_x.copy())


def equilibrium_tables(grid: SamplingGrid) -> TableBatch:
    """Tantos exemplos quanto contra-exemplos (n_xy = n_xȳ = n_x/2); só as tabelas viáveis."""
    triples = [
        (n, nx, ny) for n, nx, ny in _marginal_triples(grid.totals, grid.fractions)
        if nx / 2 <= ny and nx / 2 <= n - ny
    ]
    n, n_x, n_y = (np.array(col, dtype=float) for col in zip(*triples))
    return TableBatch(n=n, n_x=n_x, n_y=n_y, n_xy=n_x / 2)


SITUATIONS = {
    "independence": independence_tables,
    "implication": implication_tables,
    "equilibrium": equilibrium_tables,
}
