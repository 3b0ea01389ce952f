import re
from dataclasses import dataclass

from src.utils.errors import ExpressionSyntaxError, UnknownIdentifierError

# Variáveis permitidas: as quatro probabilidades conjuntas, as marginais e n
VARIABLES = ("pxy", "pxny", "pnxy", "pnxny", "px", "py", "pnx", "pny", "n")

# Aridade de cada função
FUNCTIONS = {"sqrt": 1, "ln": 1, "log2": 1, "abs": 1, "min": 2, "max": 2}

BINARY_OPERATORS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "MeasureExpr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "MeasureExpr"
    right: "MeasureExpr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["MeasureExpr", ...]


MeasureExpr = Num | Var | Neg | BinOp | Call


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | end
    text: str
    position: int


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(src, pos)
        if not match or match.lastgroup is None:
            raise ExpressionSyntaxError(f"unexpected character '{src[pos]}'", pos)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), start))
        pos = match.end()
    tokens.append(_Token("end", "", len(src)))
    return tokens


class _Parser:
    """
    Descida recursiva com a precedência: ^ > menos unário > * / > + -.
    Todos os operadores associam à esquerda, exceto ^ (à direita).
    """

    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _expect(self, text: str) -> _Token:
        token = self.current
        if token.kind != "op" or token.text != text:
            found = "end of input" if token.kind == "end" else f"'{token.text}'"
            raise ExpressionSyntaxError(f"expected '{text}' but found {found}", token.position)
        return self._advance()

    def parse(self) -> MeasureExpr:
        expr = self._expression()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"unexpected '{self.current.text}'", self.current.position)
        return expr

    def _expression(self) -> MeasureExpr:
        left = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            left = BinOp(op, left, self._term())
        return left

    def _term(self) -> MeasureExpr:
        left = self._unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self._advance().text
            left = BinOp(op, left, self._unary())
        return left

    def _unary(self) -> MeasureExpr:
        if self.current.kind == "op" and self.current.text == "-":
            self._advance()
            return Neg(self._unary())
        return self._power()

    def _power(self) -> MeasureExpr:
        base = self._primary()
        if self.current.kind == "op" and self.current.text == "^":
            self._advance()
            return BinOp("^", base, self._unary())
        return base

    def _primary(self) -> MeasureExpr:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Num(float(token.text))
        if token.kind == "ident":
            self._advance()
            if self.current.kind == "op" and self.current.text == "(":
                return self._call(token)
            if token.text not in VARIABLES:
                raise UnknownIdentifierError(token.text, token.position)
            return Var(token.text)
        if token.kind == "op" and token.text == "(":
            self._advance()
            inner = self._expression()
            self._expect(")")
            return inner
        found = "end of input" if token.kind == "end" else f"'{token.text}'"
        raise ExpressionSyntaxError(f"unexpected {found}", token.position)

    def _call(self, name: _Token) -> MeasureExpr:
        if name.text not in FUNCTIONS:
            raise UnknownIdentifierError(name.text, name.position)
        self._expect("(")
        args = [self._expression()]
        while self.current.kind == "op" and self.current.text == ",":
            self._advance()
            args.append(self._expression())
        closing = self._expect(")")
        if len(args) != FUNCTIONS[name.text]:
            raise ExpressionSyntaxError(
                f"{name.text} expects {FUNCTIONS[name.text]} argument(s), got {len(args)}",
                closing.position,
            )
        return Call(name.text, tuple(args))


def parse_measure(src: str) -> MeasureExpr:
    """Converte o texto de uma medida em AST."""
    if not src or not src.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    return _Parser(src).parse()


def to_source(expr: MeasureExpr) -> str:
    """Impressão totalmente parentizada; reparsear devolve uma AST estruturalmente igual."""
    match expr:
        case Num(value):
            return repr(float(value))
        case Var(name):
            return name
        case Neg(operand):
            return f"(-{to_source(operand)})"
        case BinOp(op, left, right):
            return f"({to_source(left)} {op} {to_source(right)})"
        case Call(func, args):
            return f"{func}({', '.join(to_source(a) for a in args)})"
    raise TypeError(f"not a measure expression: {expr!r}")


def variables_of(expr: MeasureExpr) -> frozenset[str]:
    match expr:
        case Num():
            return frozenset()
        case Var(name):
            return frozenset([name])
        case Neg(operand):
            return variables_of(operand)
        case BinOp(_, left, right):
            return variables_of(left) | variables_of(right)
        case Call(_, args):
            return frozenset().union(*(variables_of(a) for a in args))
    raise TypeError(f"not a measure expression: {expr!r}")
