"""
Verificadores numéricos das propriedades P3..P21 de uma medida computável.

Cada verificador avalia a medida sobre lotes da malha (`TableBatch`) e devolve
os bits decididos, uma evidência curta por propriedade e a lista das propriedades
que não puderam ser decididas por falta de amostras definidas.
"""
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from src.measures.catalog import MeasureDef
from src.measures.evaluator import BatchResult, evaluate_batch
from src.properties.property_vector import Shape
from src.properties.sampling_grid import (
    SITUATIONS,
    SamplingGrid,
    TableBatch,
    base_tables,
    discriminant_lines,
    growth_lines,
    implication_tables,
    n_xy_lines,
    n_y_lines,
)
from src.utils.errors import InputError, InsufficientDomainError

# |p(XY) − p(X)p(Y)| abaixo disso conta como independência (fora das duas zonas)
ZONE_MARGIN = 1e-12
SHAPE_FLOOR = 1e-12


@dataclass
class CheckOutcome:
    bits: dict[str, bool] = field(default_factory=dict)
    evidence: dict[str, str] = field(default_factory=dict)
    undecided: list[str] = field(default_factory=list)

    def decide(self, prop: str, bit: bool, evidence: str):
        self.bits[prop] = bool(bit)
        self.evidence[prop] = evidence

    def give_up(self, prop: str, reason: str):
        self.bits[prop] = False
        self.evidence[prop] = f"indecidível: {reason}"
        self.undecided.append(prop)


def _measure(m: MeasureDef, batch: TableBatch) -> BatchResult:
    if not m.computable:
        raise InputError(f"measure '{m.name}' is declared-only and has no checkable expression")
    return evaluate_batch(m.expr, batch.variables())


def _close(a: np.ndarray, b: np.ndarray, eps: float) -> np.ndarray:
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return np.abs(a - b) <= eps * scale


def _witness(batch: TableBatch, index) -> str:
    return (
        f"n={batch.n[index]:g}, n_x={batch.n_x[index]:g}, "
        f"n_y={batch.n_y[index]:g}, n_xy={batch.n_xy[index]:g}"
    )


# ---------------------------------------------------------------- simetria

def _distinguishes(m, base, base_values, other, grid) -> tuple[bool | None, str]:
    """Existe tabela (com as duas regras definidas) em que os valores diferem?"""
    other_values = _measure(m, other)
    both = base_values.defined & other_values.defined
    if not both.any():
        return None, "medida indefinida em todos os pares"
    differs = both & ~_close(base_values.values, other_values.values, grid.epsilon)
    if differs.any():
        i = int(np.argmax(differs))
        return True, (
            f"difere em ({_witness(base, i)}): {base_values.values[i]:.6g} vs {other_values.values[i]:.6g}"
        )
    return False, f"igual em {int(both.sum())} tabelas"


def _identity(m, base, left: BatchResult, right: BatchResult, grid, sign: float) -> tuple[bool | None, str]:
    """left == sign·right em todas as tabelas com os dois lados definidos."""
    both = left.defined & right.defined
    count = int(both.sum())
    if count < grid.min_samples:
        return None, f"apenas {count} pares definidos"
    holds = _close(left.values, sign * right.values, grid.epsilon)
    broken = both & ~holds
    if broken.any():
        i = int(np.argmax(broken))
        return False, f"falha em ({_witness(base, i)}): {left.values[i]:.6g} vs {sign * right.values[i]:.6g}"
    return True, f"vale em {count} tabelas"


def check_symmetry_family(m: MeasureDef, grid: SamplingGrid) -> CheckOutcome:
    """P3 (assimetria), P4, P5 (contrapositiva na implicação), P16, P17, P18."""
    outcome = CheckOutcome()
    base = base_tables(grid)
    values = _measure(m, base)

    for prop, other in (("P3", base.swapped()), ("P4", base.negate_consequent())):
        bit, evidence = _distinguishes(m, base, values, other, grid)
        if bit is None:
            outcome.give_up(prop, evidence)
        else:
            outcome.decide(prop, bit, evidence)

    implications = implication_tables(grid)
    bit, evidence = _identity(
        m, implications, _measure(m, implications), _measure(m, implications.contrapositive()), grid, 1.0
    )
    if bit is None:
        outcome.give_up("P5", evidence)
    else:
        outcome.decide("P5", bit, evidence)

    for prop, other, sign in (
        ("P16", base.negate_antecedent(), -1.0),
        ("P17", base.negate_consequent(), -1.0),
        ("P18", base.negate_both(), 1.0),
    ):
        bit, evidence = _identity(m, base, values, _measure(m, other), grid, sign)
        if bit is None:
            outcome.give_up(prop, evidence)
        else:
            outcome.decide(prop, bit, evidence)
    return outcome


# ---------------------------------------------------------- monotonicidade

def _trend(m: MeasureDef, lines: TableBatch, grid: SamplingGrid, increasing: bool) -> tuple[bool | None, str]:
    """Monótona (no sentido pedido) ao longo de toda reta e estrita em algum passo."""
    result = _measure(m, lines)
    v, d = result.values, result.defined
    pairs = d[:, :-1] & d[:, 1:]
    if not pairs.any():
        return None, "nenhum par de pontos consecutivos definido"
    step = v[:, 1:] - v[:, :-1]
    if not increasing:
        step = -step
    tol = grid.epsilon * np.maximum(1.0, np.maximum(np.abs(v[:, 1:]), np.abs(v[:, :-1])))
    against = pairs & (step < -tol)
    strict = pairs & (step > tol)
    if against.any():
        row, col = np.argwhere(against)[0]
        return False, f"sentido contrário em ({_witness(lines, (row, col))}) -> ({_witness(lines, (row, col + 1))})"
    if not strict.any():
        return False, f"constante em {int(pairs.sum())} passos"
    return True, f"monótona em {int(pairs.sum())} passos, estrita em {int(strict.sum())}"


def check_monotonicity_family(m: MeasureDef, grid: SamplingGrid) -> CheckOutcome:
    """
    P6: cresce com n_xy, (n, n_x, n_y) fixos.
    P7: cresce com n, (n_x, n_y, n_xy) fixos.
    P8: decresce com n_y, (n, n_x, n_xy) fixos.
    """
    outcome = CheckOutcome()
    for prop, lines, increasing in (
        ("P6", n_xy_lines(grid), True),
        ("P7", growth_lines(grid), True),
        ("P8", n_y_lines(grid), False),
    ):
        bit, evidence = _trend(m, lines, grid, increasing)
        if bit is None:
            outcome.give_up(prop, evidence)
        else:
            outcome.decide(prop, bit, evidence)
    return outcome


# ------------------------------------------------------------- valor fixo

@dataclass(frozen=True)
class FixedValueFinding:
    fixed: bool
    mean: float
    spread: float
    samples: int

    @property
    def value(self) -> float | None:
        return self.mean if self.fixed else None


def inspect_fixed_value(m: MeasureDef, grid: SamplingGrid, situation: str) -> FixedValueFinding:
    if situation not in SITUATIONS:
        raise InputError(f"unknown situation '{situation}' (expected one of {sorted(SITUATIONS)})")
    result = _measure(m, SITUATIONS[situation](grid))
    values = result.defined_values()
    if len(values) < grid.min_samples:
        raise InsufficientDomainError(
            f"only {len(values)} defined samples in the {situation} situation (need {grid.min_samples})"
        )
    mean = float(values.mean())
    spread = float(values.max() - values.min())
    fixed = spread <= grid.epsilon * max(1.0, abs(mean))
    return FixedValueFinding(fixed=fixed, mean=mean, spread=spread, samples=len(values))


def check_fixed_value(m: MeasureDef, grid: SamplingGrid, situation: str) -> tuple[bool, float | None]:
    """(bit, valor): valor = média das amostras quando a medida é constante na situação."""
    finding = inspect_fixed_value(m, grid, situation)
    return finding.fixed, finding.value


# ------------------------------------------------------------------ zonas

def _side(values: np.ndarray, a: float, eps: float) -> int:
    tol = eps * max(1.0, abs(a))
    if np.all(values > a + tol):
        return 1
    if np.all(values < a - tol):
        return -1
    return 0


def zone_sides(m: MeasureDef, grid: SamplingGrid, a: float) -> tuple[int, int]:
    """Lado (+1 acima de a, −1 abaixo, 0 misto) em que caem as zonas de atração e de repulsão."""
    base = base_tables(grid)
    result = _measure(m, base)
    dependency = base.dependency()
    attraction = result.defined & (dependency > ZONE_MARGIN)
    repulsion = result.defined & (dependency < -ZONE_MARGIN)
    for zone, mask in (("attraction", attraction), ("repulsion", repulsion)):
        if int(mask.sum()) < grid.min_samples:
            raise InsufficientDomainError(f"only {int(mask.sum())} defined samples in the {zone} zone")
    return (
        _side(result.values[attraction], a, grid.epsilon),
        _side(result.values[repulsion], a, grid.epsilon),
    )


def check_zones(m: MeasureDef, grid: SamplingGrid, a: float) -> tuple[bool, bool, bool]:
    """
    (P12, P13, invertida). Orientação usual: acima de a na atração, abaixo na repulsão.
    Uma orientação invertida consistente nas duas zonas também identifica as zonas.
    """
    attraction_side, repulsion_side = zone_sides(m, grid, a)
    if attraction_side == -1 and repulsion_side == 1:
        return True, True, True
    return attraction_side == 1, repulsion_side == -1, False


# ------------------------------------------------------------------ forma

def _line_shape(values: np.ndarray, shape_epsilon: float) -> Shape:
    second = values[2:] - 2 * values[1:-1] + values[:-2]
    spread = float(values.max() - values.min())
    eps = max(shape_epsilon * spread, SHAPE_FLOOR * max(1.0, float(np.abs(values).max())))
    if np.all(np.abs(second) <= eps):
        return Shape.LINEAR
    if np.all(second <= -eps):
        return Shape.CONCAVE
    if np.all(second >= eps):
        return Shape.CONVEX
    return Shape.MIXED


def check_shape(m: MeasureDef, grid: SamplingGrid) -> Shape:
    """
    Forma da medida em função do número de contra-exemplos n_xȳ = n_x − n_xy.
    A segunda diferença não muda ao inverter o sentido da reta, então as retas de n_xy servem.
    """
    lines = n_xy_lines(grid)
    result = _measure(m, lines)
    complete = result.defined.all(axis=1)
    if not complete.any():
        raise InsufficientDomainError("no grid line where the measure is defined at every interior point")
    shapes = {_line_shape(row, grid.shape_epsilon) for row in result.values[complete]}
    return shapes.pop() if len(shapes) == 1 else Shape.MIXED


# ------------------------------------------------------------- invariância

def _unchanged(m, base, values, scaled: TableBatch, grid) -> tuple[bool | None, int]:
    other = _measure(m, scaled)
    both = values.defined & other.defined
    count = int(both.sum())
    if count < grid.min_samples:
        return None, count
    return bool(np.all(_close(values.values, other.values, grid.epsilon)[both])), count


def check_invariance(m: MeasureDef, grid: SamplingGrid) -> CheckOutcome:
    """
    P15: invariante à dilatação das linhas (X por K1, X̄ por K2) e das colunas
    (Y por K1, Ȳ por K2), para todo par K1 ≠ K2. P20: invariante quando as quatro
    células são multiplicadas pelo mesmo k.
    """
    outcome = CheckOutcome()
    base = base_tables(grid)
    values = _measure(m, base)

    schemes = []
    for k1, k2 in permutations(sorted(set(grid.scale_factors)), 2):
        schemes.append((f"linhas K1={k1:g} K2={k2:g}", base.scale_cells(k1, k1, k2, k2)))
        schemes.append((f"colunas K1={k1:g} K2={k2:g}", base.scale_cells(k1, k2, k1, k2)))
    _decide_invariance(outcome, "P15", m, base, values, schemes, grid)

    uniform = [(f"k={k:g}", base.scale_cells(k, k, k, k)) for k in grid.scale_factors]
    _decide_invariance(outcome, "P20", m, base, values, uniform, grid)
    return outcome


def _decide_invariance(outcome, prop, m, base, values, schemes, grid):
    checked = 0
    for label, scaled in schemes:
        unchanged, count = _unchanged(m, base, values, scaled, grid)
        if unchanged is None:
            continue
        checked += 1
        if not unchanged:
            outcome.decide(prop, False, f"muda com dilatação {label}")
            return
    if checked == 0:
        outcome.give_up(prop, "nenhuma dilatação com amostras definidas suficientes")
    else:
        outcome.decide(prop, True, f"invariante em {checked} dilatações")


# ---------------------------------------------------------- discriminância

def _line_spreads(result: BatchResult) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = result.defined
    upper = np.where(d, result.values, -np.inf).max(axis=1)
    lower = np.where(d, result.values, np.inf).min(axis=1)
    usable = d.sum(axis=1) >= 2
    spread = np.where(usable, upper - lower, 0.0)
    magnitude = np.where(d, np.abs(result.values), 0.0).max(axis=1)
    return spread, usable, magnitude


def check_discriminant(m: MeasureDef, grid: SamplingGrid) -> tuple[bool, str]:
    """
    P21: numa base grande (discriminant_total) a variação da medida ao longo de cada reta
    continua ≥ discriminant_ratio × a variação na menor base da malha.
    """
    small_total = min(grid.totals)
    small, small_usable, small_magnitude = _line_spreads(_measure(m, discriminant_lines(grid, small_total)))
    large, large_usable, _ = _line_spreads(_measure(m, discriminant_lines(grid, grid.discriminant_total)))
    usable = small_usable & large_usable
    if not usable.any():
        raise InsufficientDomainError("no grid line with at least 2 defined points at both totals")
    flat = small <= grid.epsilon * np.maximum(1.0, small_magnitude)
    collapsed = large < grid.discriminant_ratio * small
    failing = usable & (flat | collapsed)
    if failing.any():
        i = int(np.argmax(failing))
        return False, (
            f"variação {large[i]:.3g} em n={grid.discriminant_total:g} contra {small[i]:.3g} em n={small_total:g}"
        )
    return True, f"discrimina em {int(usable.sum())} retas"
