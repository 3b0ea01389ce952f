from dataclasses import dataclass

from src.utils.errors import DomainError

# Tolerância para células negativas causadas apenas por arredondamento
ROUNDING_SLACK = 1e-9


@dataclass(frozen=True)
class FullTable:
    """Tabela 2×2 completa de uma regra X→Y: células conjuntas, marginais e probabilidades."""
    n: float
    n_xy: float
    n_xny: float
    n_nxy: float
    n_nxny: float
    n_x: float
    n_y: float

    @property
    def p_x(self) -> float:
        return self.n_x / self.n

    @property
    def p_y(self) -> float:
        return self.n_y / self.n

    @property
    def p_xy(self) -> float:
        return self.n_xy / self.n

    def probabilities(self) -> dict[str, float]:
        """Variáveis da linguagem de medidas, todas em probabilidade (exceto n)."""
        n = self.n
        return {
            "pxy": self.n_xy / n,
            "pxny": self.n_xny / n,
            "pnxy": self.n_nxy / n,
            "pnxny": self.n_nxny / n,
            "px": self.n_x / n,
            "py": self.n_y / n,
            "pnx": (n - self.n_x) / n,
            "pny": (n - self.n_y) / n,
            "n": n,
        }


@dataclass(frozen=True)
class ContingencyTable:
    """
    Tabela de contingência de uma regra X→Y parametrizada por (n, n_x, n_y, n_xy).

    As células aceitam valores reais: o motor de propriedades amostra pontos de
    independência n_xy = n_x·n_y/n, raramente inteiros.
    """
    n: float
    n_x: float
    n_y: float
    n_xy: float

    def __post_init__(self):
        check_table_invariants(self.n, self.n_x, self.n_y, self.n_xy)

    @classmethod
    def from_cells(cls, n_xy: float, n_xny: float, n_nxy: float, n_nxny: float) -> "ContingencyTable":
        n = n_xy + n_xny + n_nxy + n_nxny
        return cls(n=n, n_x=n_xy + n_xny, n_y=n_xy + n_nxy, n_xy=n_xy)

    def cells(self) -> tuple[float, float, float, float]:
        full = derive_cells(self)
        return full.n_xy, full.n_xny, full.n_nxy, full.n_nxny


def check_table_invariants(n: float, n_x: float, n_y: float, n_xy: float) -> None:
    """Lança DomainError indicando a primeira desigualdade violada."""
    slack = ROUNDING_SLACK * max(1.0, abs(n))
    if not n > 0:
        raise DomainError("n must be positive")
    if n_x < -slack or n_y < -slack or n_xy < -slack:
        raise DomainError("counts must be non-negative")
    if n_x > n + slack:
        raise DomainError("n_x exceeds n")
    if n_y > n + slack:
        raise DomainError("n_y exceeds n")
    if n_xy > min(n_x, n_y) + slack:
        raise DomainError("n_xy exceeds min(n_x, n_y)")
    if n_xy < n_x + n_y - n - slack:
        raise DomainError("n_xy below n_x + n_y - n (negative n_x̄ȳ cell)")


def _clamp(value: float, n: float) -> float:
    if value < 0 and value >= -ROUNDING_SLACK * max(1.0, abs(n)):
        return 0.0
    return value


def derive_cells(t: ContingencyTable) -> FullTable:
    """Deriva as quatro células conjuntas; a soma das células é n."""
    check_table_invariants(t.n, t.n_x, t.n_y, t.n_xy)
    n_xy = _clamp(t.n_xy, t.n)
    n_xny = _clamp(t.n_x - t.n_xy, t.n)
    n_nxy = _clamp(t.n_y - t.n_xy, t.n)
    n_nxny = _clamp(t.n - t.n_x - t.n_y + t.n_xy, t.n)
    return FullTable(
        n=t.n, n_xy=n_xy, n_xny=n_xny, n_nxy=n_nxy, n_nxny=n_nxny, n_x=t.n_x, n_y=t.n_y,
    )
