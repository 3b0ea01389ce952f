import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from src.measures.expression import BinOp, Call, MeasureExpr, Neg, Num, Var
from src.utils.errors import MeasureUndefinedError


def evaluate_expr(expr: MeasureExpr, env: Mapping[str, float]) -> float:
    """
    Interpretação recursiva escalar. Qualquer falha de domínio (divisão por zero,
    ln/log2 de não-positivo, raiz de negativo, overflow) vira MeasureUndefinedError.
    """
    value = _eval_scalar(expr, env)
    if not math.isfinite(value):
        raise MeasureUndefinedError("non-finite value")
    return value


def _eval_scalar(expr: MeasureExpr, env: Mapping[str, float]) -> float:
    match expr:
        case Num(value):
            return float(value)
        case Var(name):
            return float(env[name])
        case Neg(operand):
            return -_eval_scalar(operand, env)
        case BinOp(op, left, right):
            a = _eval_scalar(left, env)
            b = _eval_scalar(right, env)
            return _binary_scalar(op, a, b)
        case Call(func, args):
            values = [_eval_scalar(arg, env) for arg in args]
            return _call_scalar(func, values)
    raise TypeError(f"not a measure expression: {expr!r}")


def _binary_scalar(op: str, a: float, b: float) -> float:
    if op == "+":
        result = a + b
    elif op == "-":
        result = a - b
    elif op == "*":
        result = a * b
    elif op == "/":
        if b == 0:
            raise MeasureUndefinedError("division by zero")
        result = a / b
    elif op == "^":
        if a == 0 and b < 0:
            raise MeasureUndefinedError("zero raised to a negative power")
        if a < 0 and not float(b).is_integer():
            raise MeasureUndefinedError("negative base with fractional exponent")
        try:
            result = math.pow(a, b)
        except (OverflowError, ValueError) as e:
            raise MeasureUndefinedError(f"power fault: {e}") from e
    else:
        raise ValueError(f"unknown operator {op}")
    if not math.isfinite(result):
        raise MeasureUndefinedError(f"non-finite result of '{op}'")
    return result


def _call_scalar(func: str, values: list[float]) -> float:
    if func == "sqrt":
        if values[0] < 0:
            raise MeasureUndefinedError("sqrt of a negative value")
        return math.sqrt(values[0])
    if func in ("ln", "log2"):
        if values[0] <= 0:
            raise MeasureUndefinedError(f"{func} of a non-positive value")
        return math.log(values[0]) if func == "ln" else math.log2(values[0])
    if func == "abs":
        return abs(values[0])
    if func == "min":
        return min(values)
    if func == "max":
        return max(values)
    raise ValueError(f"unknown function {func}")


@dataclass(frozen=True)
class BatchResult:
    """Valores de uma medida sobre um lote de tabelas e a máscara explícita de definição."""
    values: np.ndarray
    defined: np.ndarray

    def defined_values(self) -> np.ndarray:
        return self.values[self.defined]


def evaluate_batch(expr: MeasureExpr, variables: Mapping[str, np.ndarray]) -> BatchResult:
    """
    Avalia a AST sobre vetores numpy (uma posição por tabela). Onde a medida não
    está definida, `defined` é False; os valores nessas posições não devem ser lidos.
    Aceita vetores de qualquer forma (todas as variáveis com a mesma forma).
    """
    size = np.shape(next(iter(variables.values())))
    with np.errstate(all="ignore"):
        values, ok = _eval_batch(expr, variables, size)
        ok = ok & np.isfinite(values)
    return BatchResult(values=np.where(ok, values, 0.0), defined=ok)


def _eval_batch(
    expr: MeasureExpr, env: Mapping[str, np.ndarray], size: tuple[int, ...]
) -> tuple[np.ndarray, np.ndarray]:
    match expr:
        case Num(value):
            return np.full(size, float(value)), np.ones(size, dtype=bool)
        case Var(name):
            return np.asarray(env[name], dtype=float), np.ones(size, dtype=bool)
        case Neg(operand):
            values, ok = _eval_batch(operand, env, size)
            return -values, ok
        case BinOp(op, left, right):
            a, ok_a = _eval_batch(left, env, size)
            b, ok_b = _eval_batch(right, env, size)
            ok = ok_a & ok_b
            if op == "+":
                result = a + b
            elif op == "-":
                result = a - b
            elif op == "*":
                result = a * b
            elif op == "/":
                ok = ok & (b != 0)
                result = a / np.where(b != 0, b, 1.0)
            elif op == "^":
                ok = ok & ~((a == 0) & (b < 0)) & ~((a < 0) & (np.floor(b) != b))
                result = np.power(np.where(ok, a, 1.0), np.where(ok, b, 1.0))
            else:
                raise ValueError(f"unknown operator {op}")
            return result, ok & np.isfinite(result)
        case Call(func, args):
            evaluated = [_eval_batch(arg, env, size) for arg in args]
            x, ok = evaluated[0]
            if func == "sqrt":
                ok = ok & (x >= 0)
                return np.sqrt(np.where(ok, x, 0.0)), ok
            if func in ("ln", "log2"):
                ok = ok & (x > 0)
                safe = np.where(ok, x, 1.0)
                return (np.log(safe) if func == "ln" else np.log2(safe)), ok
            if func == "abs":
                return np.abs(x), ok
            y, ok_y = evaluated[1]
            ok = ok & ok_y
            if func == "min":
                return np.minimum(x, y), ok
            if func == "max":
                return np.maximum(x, y), ok
            raise ValueError(f"unknown function {func}")
    raise TypeError(f"not a measure expression: {expr!r}")
