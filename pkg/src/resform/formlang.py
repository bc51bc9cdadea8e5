"""Text grammar for polynomials and differential forms.

::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | postfix
    postfix := atom ('^' (uint | atom ('^' uint)*))*
    atom    := uint | 'i' | 'z'uint | 'dz'uint | name | '(' expr ')'

``^`` followed by an integer literal is a power; otherwise it is the wedge
product.  ``*`` between two forms is also the wedge product.  Division is
only by scalar expressions; :func:`parse_poly` further requires a constant
divisor.  Names other than ``i``, ``zK`` and ``dzK`` must be bound to
constants through ``bindings``.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

from .errors import ExponentOverflowError, ParseError, PreconditionError, UnboundNameError
from .forms import DiffForm, RationalFunction, wedge
from .poly import MAX_EXPONENT, GaussianRational, Poly, format_gaussian


class RepeatedDifferentialWarning(UserWarning):
    pass


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def where(pos):
        line = max(i for i, s in enumerate(line_starts) if s <= pos)
        return line + 1, pos - line_starts[line] + 1

    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.lastindex is None:
            break
        start = m.start(m.lastindex)
        line, col = where(start)
        num, name, op = m.group(1), m.group(2), m.group(3)
        if num is not None:
            tokens.append(Token("int", num, line, col))
        elif name is not None:
            tokens.append(Token("name", name, line, col))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}", line, col)
            tokens.append(Token("op", op, line, col))
        pos = m.end()
    line, col = where(len(text))
    tokens.append(Token("end", "", line, col))
    return tokens


@dataclass(frozen=True)
class ExprAst:
    """Parse tree node.

    ``kind`` is one of number, imag, var, diff, param, sum, neg, product,
    quotient, power, wedge.  ``value`` holds the literal, index, name or
    exponent where relevant.
    """

    kind: str
    children: tuple = ()
    value: object = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


_VAR_RE = re.compile(r"(d?)z(\d+)\Z")


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self):
        return self.tokens[self.pos]

    def peek(self, k=1):
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self):
        t = self.tok
        self.pos += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def is_op(self, ch, tok=None):
        tok = tok or self.tok
        return tok.kind == "op" and tok.text == ch

    def parse(self):
        if self.tok.kind == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        first = self.tok
        terms = [self.term()]
        while self.is_op("+") or self.is_op("-"):
            op = self.advance()
            t = self.term()
            terms.append(ExprAst("neg", (t,), line=op.line, column=op.column) if op.text == "-" else t)
        if len(terms) == 1:
            return terms[0]
        return ExprAst("sum", tuple(terms), line=first.line, column=first.column)

    def term(self):
        node = self.unary()
        while self.is_op("*") or self.is_op("/"):
            op = self.advance()
            rhs = self.unary()
            kind = "product" if op.text == "*" else "quotient"
            node = ExprAst(kind, (node, rhs), line=op.line, column=op.column)
        return node

    def unary(self):
        if self.is_op("-"):
            op = self.advance()
            return ExprAst("neg", (self.unary(),), line=op.line, column=op.column)
        if self.is_op("+"):
            self.advance()
            return self.unary()
        return self.postfix()

    def _exponent(self):
        tok = self.advance()
        k = int(tok.text)
        if k > MAX_EXPONENT:
            raise ExponentOverflowError(f"exponent {k} exceeds {MAX_EXPONENT} (line {tok.line}, column {tok.column})")
        return k

    def _powers(self, node):
        while self.is_op("^") and self.peek().kind == "int":
            op = self.advance()
            node = ExprAst("power", (node,), self._exponent(), op.line, op.column)
        return node

    def postfix(self):
        node = self.atom()
        while self.is_op("^"):
            if self.peek().kind == "int":
                op = self.advance()
                node = ExprAst("power", (node,), self._exponent(), op.line, op.column)
            else:
                op = self.advance()
                rhs = self._powers(self.atom())
                node = ExprAst("wedge", (node, rhs), line=op.line, column=op.column)
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return ExprAst("number", value=int(tok.text), line=tok.line, column=tok.column)
        if tok.kind == "name":
            self.advance()
            if tok.text == "i":
                return ExprAst("imag", line=tok.line, column=tok.column)
            m = _VAR_RE.match(tok.text)
            if m:
                kind = "diff" if m.group(1) else "var"
                return ExprAst(kind, value=int(m.group(2)), line=tok.line, column=tok.column)
            return ExprAst("param", value=tok.text, line=tok.line, column=tok.column)
        if self.is_op("("):
            self.advance()
            node = self.expr()
            if not self.is_op(")"):
                raise self.error("expected ')'")
            self.advance()
            return node
        if tok.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse_ast(text: str) -> ExprAst:
    return _Parser(text).parse()


def _walk(node):
    yield node
    for c in node.children:
        yield from _walk(c)


def _max_index(node):
    return max((n.value for n in _walk(node) if n.kind in ("var", "diff")), default=-1)


def _coerce_binding(value):
    if isinstance(value, str):
        return parse_constant(value)
    return GaussianRational.coerce(value)


class _Evaluator:
    def __init__(self, nvars, bindings, strict):
        self.nvars = nvars
        self.bindings = bindings
        self.strict = strict

    def _err(self, node, message):
        return ParseError(message, node.line, node.column)

    def _form(self, v):
        return v if isinstance(v, DiffForm) else DiffForm.scalar(v, self.nvars)

    def _wedge(self, node, a, b):
        if isinstance(a, RationalFunction) and isinstance(b, RationalFunction):
            return a * b
        if isinstance(a, RationalFunction):
            return b.scale(a)
        if isinstance(b, RationalFunction):
            return a.scale(b)
        if a.degree + b.degree > self.nvars:
            raise self._err(node, f"wedge of degrees {a.degree}+{b.degree} exceeds dimension {self.nvars}")
        repeated = sorted({i for I in a.terms for J in b.terms for i in set(I) & set(J)})
        if repeated:
            message = "repeated differential " + ", ".join(f"dz{i}" for i in repeated)
            if self.strict:
                raise self._err(node, message)
            warnings.warn(f"{message} (line {node.line}, column {node.column}); term dropped",
                          RepeatedDifferentialWarning, stacklevel=4)
        return wedge(a, b)

    def eval(self, node):
        k = node.kind
        n = self.nvars
        if k == "number":
            return RationalFunction(Poly.constant(node.value, n))
        if k == "imag":
            return RationalFunction(Poly.constant(GaussianRational(0, 1), n))
        if k == "var":
            return RationalFunction(Poly.variable(node.value, n))
        if k == "diff":
            return DiffForm.basis((node.value,), n)
        if k == "param":
            return RationalFunction(Poly.constant(self.bindings[node.value], n))
        if k == "neg":
            return -self.eval(node.children[0])
        if k == "sum":
            acc = self.eval(node.children[0])
            for c in node.children[1:]:
                v = self.eval(c)
                if isinstance(acc, RationalFunction) and isinstance(v, RationalFunction):
                    acc = acc + v
                    continue
                a, b = self._form(acc), self._form(v)
                if a.degree != b.degree:
                    raise self._err(c, f"mixed degrees in one expression: {a.degree} and {b.degree}")
                acc = a + b
            return acc
        if k in ("product", "wedge"):
            return self._wedge(node, self.eval(node.children[0]), self.eval(node.children[1]))
        if k == "quotient":
            num, den = self.eval(node.children[0]), self.eval(node.children[1])
            if isinstance(den, DiffForm):
                raise self._err(node, "cannot divide by a differential form")
            if den.is_zero:
                raise self._err(node, "division by zero")
            return num / den
        if k == "power":
            base = self.eval(node.children[0])
            if isinstance(base, DiffForm):
                if node.value == 1:
                    return base
                raise self._err(node, "power of a differential form")
            return base**node.value
        raise self._err(node, f"unknown node {k}")


def _evaluate(text, bindings, nvars, strict):
    ast = parse_ast(text)
    names = {n.value for n in _walk(ast) if n.kind == "param"}
    bindings = {k: _coerce_binding(v) for k, v in (bindings or {}).items()}
    missing = names - set(bindings)
    if missing:
        raise UnboundNameError(missing)
    width = _max_index(ast) + 1
    nvars = width if nvars is None else max(nvars, width)
    return _Evaluator(nvars, bindings, strict).eval(ast), nvars, ast


def parse_poly(text: str, bindings=None, nvars=None) -> Poly:
    value, n, ast = _evaluate(text, bindings, nvars, strict=True)
    if isinstance(value, DiffForm):
        if value.degree == 0:
            value = value.coefficient(())
        else:
            raise ParseError("differentials are not allowed in a polynomial", ast.line, ast.column)
    if not value.is_polynomial():
        raise ParseError("division by a non-constant in a polynomial", ast.line, ast.column)
    return value.as_poly().extend(n)


def parse_rational(text: str, bindings=None, nvars=None) -> RationalFunction:
    value, n, ast = _evaluate(text, bindings, nvars, strict=True)
    if isinstance(value, DiffForm):
        if value.degree:
            raise ParseError("differentials are not allowed here", ast.line, ast.column)
        value = value.coefficient(())
    return value.extend(n)


def parse_form(text: str, bindings=None, nvars=None, strict=False) -> DiffForm:
    """Parse a differential form.

    A repeated differential inside one term (``dz0^dz0``) raises when
    ``strict`` is set, otherwise emits :class:`RepeatedDifferentialWarning`
    and the term is dropped.
    """
    value, n, _ = _evaluate(text, bindings, nvars, strict)
    if isinstance(value, RationalFunction):
        return DiffForm.scalar(value, n)
    return value.extend(n)


def parse_constant(text: str) -> GaussianRational:
    p = parse_poly(text)
    if not p.is_constant():
        raise PreconditionError(f"expected a constant, got {text!r}")
    return p.constant_term()


def parse_bindings(pairs):
    """``["p=-1", "q=1/4"]`` -> ``{"p": -1, "q": 1/4}``."""
    out = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or _VAR_RE.match(name) or name == "i":
            raise PreconditionError(f"bad binding {item!r}; expected name=rational")
        out[name] = parse_constant(value)
    return out


# -- rendering ---------------------------------------------------------

def _render_monomial(m):
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"z{i}")
        elif e > 1:
            parts.append(f"z{i}^{e}")
    return "*".join(parts)


def _join_signed(parts):
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def render_poly(p: Poly) -> str:
    """Terms in descending graded-lexicographic order."""
    if p.is_zero:
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        mono = _render_monomial(m)
        if not mono:
            parts.append(format_gaussian(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{format_gaussian(c)}*{mono}")
    return _join_signed(parts)


def _is_bare_power(p: Poly):
    if len(p) != 1:
        return False
    (m, c), = p.items()
    return c == 1 and sum(1 for e in m if e) == 1


def render_rational(f: RationalFunction) -> str:
    if f.den.is_constant():
        return render_poly(f.num / f.den.constant_term())
    num = render_poly(f.num)
    if len(f.num) > 1:
        num = f"({num})"
    den = render_poly(f.den)
    if not _is_bare_power(f.den):
        den = f"({den})"
    return f"{num}/{den}"


def _basis(I):
    return "^".join(f"dz{i}" for i in I)


def render_form(f: DiffForm) -> str:
    if f.degree == 0:
        return render_rational(f.coefficient(())) if f else "0"
    if f.is_zero:
        return f"0 * {_basis(range(f.degree))}"
    parts = []
    for I in sorted(f.terms):
        c = f.coefficient(I)
        if c == 1:
            parts.append(_basis(I))
        elif c == -1:
            parts.append("-" + _basis(I))
        else:
            text = render_rational(c)
            if c.is_polynomial() and len(c.num) > 1:
                text = f"({text})"
            parts.append(f"{text} * {_basis(I)}")
    return _join_signed(parts)


def render(x) -> str:
    if isinstance(x, Poly):
        return render_poly(x)
    if isinstance(x, RationalFunction):
        return render_rational(x)
    if isinstance(x, DiffForm):
        return render_form(x)
    if isinstance(x, GaussianRational):
        return format_gaussian(x)
    raise TypeError(f"cannot render {type(x).__name__}")


def render_fraction_style(f: DiffForm) -> str:
    """Display form such as ``dz1/z2``: the differential written into the numerator."""
    if f.degree == 0 or f.is_zero:
        return render_form(f)
    parts = []
    for I in sorted(f.terms):
        c = f.coefficient(I)
        basis = _basis(I)
        if c.den.is_constant():
            parts.append(render_form(DiffForm.basis(I, f.nvars, c)))
            continue
        num = c.num
        if num == 1:
            head = basis
        elif num == -1:
            head = "-" + basis
        elif len(num) == 1:
            head = f"{render_poly(num)}*{basis}"
        else:
            head = f"({render_poly(num)})*{basis}"
        den = render_poly(c.den)
        if not _is_bare_power(c.den):
            den = f"({den})"
        parts.append(f"{head}/{den}")
    return _join_signed(parts)


__all__ = [
    "ExprAst",
    "RepeatedDifferentialWarning",
    "parse_ast",
    "parse_bindings",
    "parse_constant",
    "parse_form",
    "parse_poly",
    "parse_rational",
    "render",
    "render_form",
    "render_fraction_style",
    "render_poly",
    "render_rational",
]
