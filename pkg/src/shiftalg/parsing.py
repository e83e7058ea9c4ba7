"""Text syntax for rational functions and shift operators.

Grammar (whitespace-insensitive):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('-'|'+')* atom ('^' signed_int)?
    atom   := integer | 'x' | 'S' | '(' expr ')'

`S` is the shift operator (Phi); multiplication is the Ore product, so
`S*x` parses to `(x+1)*S`.  Division is only defined by order-0
subexpressions.  parse_ratfunc rejects any appearance of `S`.

Printing is canonical and deterministic: terms ordered by decreasing
shift exponent, polynomial coefficients expanded, denominators printed as
`(num)/(den)`.
"""

from fractions import Fraction

from .errors import ParseError
from .scalars import Constant

# -- tokenizer ---------------------------------------------------------------

_PUNCT = set("+-*/^()")


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch in ("x", "S"):
            toks.append(("sym", ch, i))
            i += 1
            continue
        if ch == "*" and i + 1 < n and text[i + 1] == "*":
            toks.append(("op", "^", i))
            i += 2
            continue
        if ch in _PUNCT:
            toks.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, n))
    return toks


class _Parser:
    """Recursive descent over operator-valued expressions."""

    def __init__(self, text, step):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.step = step

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect_op(self, symbol):
        kind, val, at = self.peek()
        if kind != "op" or val != symbol:
            raise ParseError(f"expected {symbol!r}", at)
        self.advance()

    def parse(self):
        v = self.expr()
        kind, _, at = self.peek()
        if kind != "end":
            raise ParseError("trailing input", at)
        return v

    def expr(self):
        v = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                v = v + rhs if val == "+" else v - rhs
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            kind, val, at = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.factor()
                if val == "*":
                    v = v.mul(rhs)
                else:
                    if rhs.order != 0:
                        raise ParseError("division by a non-unit operator", at)
                    v = v.mul(rhs.inverse_unit())
            else:
                return v

    def factor(self):
        sign = 1
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                if val == "-":
                    sign = -sign
            else:
                break
        v = self.atom()
        kind, val, at = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            e = self.signed_int()
            v = v.pow(e)
        return v if sign == 1 else -v

    def signed_int(self):
        sign = 1
        kind, val, at = self.peek()
        if kind == "op" and val in "+-":
            self.advance()
            if val == "-":
                sign = -1
            kind, val, at = self.peek()
        if kind == "op" and val == "(":
            self.advance()
            e = self.signed_int()
            self.expect_op(")")
            return sign * e
        if kind != "int":
            raise ParseError("expected integer exponent", at)
        self.advance()
        return sign * val

    def atom(self):
        from .ore import ShiftOp
        from .ratfunc import RatFunc

        kind, val, at = self.advance()
        if kind == "int":
            return ShiftOp.of_ratfunc(RatFunc.const(Fraction(val)), self.step)
        if kind == "sym":
            if val == "x":
                return ShiftOp.of_ratfunc(RatFunc.x(), self.step)
            return ShiftOp.phi_power(self.step, self.step)
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        raise ParseError("expected a value", at)


def parse_operator(text, step=1):
    """Parse an operator expression; `S` denotes the step-sized shift."""
    return _Parser(text, step).parse()


def parse_ratfunc(text):
    """Parse a rational function; `S` is not allowed."""
    op = _Parser(text, 1).parse()
    if op.is_zero():
        from .ratfunc import R_ZERO

        return R_ZERO
    if op.order != 0 or op.low != 0:
        raise ParseError("operator symbol S in a rational function", 0)
    return op.coeffs[0]


# -- printing ------------------------------------------------------------------


def format_scalar(c):
    if isinstance(c, Constant) and not c.is_rational():
        return f"({c!r})"
    f = c.as_fraction() if isinstance(c, Constant) else Fraction(c)
    return str(f)


def format_poly(p):
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if not c:
            continue
        neg = False
        if (not isinstance(c, Constant) and c < 0) or (
                isinstance(c, Constant) and c.is_rational() and c.as_fraction() < 0):
            neg = True
            c = -c
        if i == 0:
            body = format_scalar(c)
        else:
            xpow = "x" if i == 1 else f"x^{i}"
            body = xpow if c == 1 else f"{format_scalar(c)}*{xpow}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"{'-' if neg else '+'}{body}")
    return "".join(parts)


def _poly_is_simple(p):
    """True when the printed form needs no parentheses inside a product."""
    if p.degree <= 0:
        c = p.coeff(0)
        if isinstance(c, Constant) and not c.is_rational():
            return False
        f = c.as_fraction() if isinstance(c, Constant) else Fraction(c)
        return f >= 0
    terms = sum(1 for c in p.coeffs if c)
    return terms == 1 and p.lead == 1


def format_ratfunc(f):
    if f.den.is_one():
        return format_poly(f.num)
    num = format_poly(f.num)
    den = format_poly(f.den)
    if not _poly_is_simple(f.num):
        num = f"({num})"
    if not _poly_is_simple(f.den):
        den = f"({den})"
    return f"{num}/{den}"


def format_shiftop(op):
    if op.is_zero():
        return "0"
    parts = []
    for i in range(len(op.coeffs) - 1, -1, -1):
        c = op.coeffs[i]
        if c.is_zero():
            continue
        e = op.low + i * op.step
        neg = False
        if c.den.is_one() or True:
            # sign lives in the numerator's leading coefficient
            lead = c.num.lead
            lead_f = (lead.as_fraction() if isinstance(lead, Constant)
                      and lead.is_rational() else lead)
            if isinstance(lead_f, Fraction) and lead_f < 0:
                neg = True
                c = -c
        if e == 0:
            body = format_ratfunc(c)
            if not _ratfunc_is_simple(c):
                body = f"({body})"
        else:
            spow = "S" if e == 1 else f"S^{e}"
            if c.is_one():
                body = spow
            else:
                cs = format_ratfunc(c)
                if not _ratfunc_is_simple(c):
                    cs = f"({cs})"
                body = f"{cs}*{spow}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"{'-' if neg else '+'}{body}")
    return "".join(parts)


def _ratfunc_is_simple(f):
    if not f.den.is_one():
        return _poly_is_simple(f.num) and _poly_is_simple(f.den)
    return _poly_is_simple(f.num)
