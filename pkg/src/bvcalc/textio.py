"""Text format for superfunctions.

Terms are joined by `+`/`-`. Generator tokens are x1..xn (fields), c1..cm
(ghosts), xs1..xsn (antifields), cs1..csm (antighosts). Coefficients are
`(a)` or `(a+bi)` with exact rationals a, b, with an optional `h^k` factor
for powers of the formal symbol h, e.g.

    (1/2)*x1^2 + (0+1i)*h^-1*c1*cs1

Parsing accepts anything the formatter emits (round-trips exactly) plus
unparenthesized rational coefficients and omitted unit coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .coefficients import Coefficient
from .context import Context, Generator
from .errors import ParseError
from .superfunction import Superfunction, monomial_sort_key

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<rat>\d+(?:/\d+)?)"
    r"|(?P<gen>(?:xs|cs|x|c)\d+)"
    r"|(?P<h>h)"
    r"|(?P<imag>i)"
    r"|(?P<op>[()+\-*^])"
    r")"
)

_GEN_RE = re.compile(r"(xs|cs|x|c)(\d+)")


def detect_context(*texts: str) -> Context:
    """Build the smallest context containing every generator token seen."""
    n_fields = 0
    n_ghosts = 0
    for text in texts:
        for kind, idx in _GEN_RE.findall(text):
            idx = int(idx)
            if kind in ("x", "xs"):
                n_fields = max(n_fields, idx)
            else:
                n_ghosts = max(n_ghosts, idx)
    return Context(n_fields, n_ghosts)


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items = []  # (kind, value, column)
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                col = len(text) - len(stripped) + 1
                raise ParseError(f"unexpected character {stripped[0]!r}", column=col)
            pos = m.end()
            for kind in ("rat", "gen", "h", "imag", "op"):
                val = m.group(kind)
                if val is not None:
                    self.items.append((kind, val, m.start(kind) + 1))
                    break
        self.pos = 0

    def peek(self):
        if self.pos < len(self.items):
            return self.items[self.pos]
        return (None, None, len(self.text) + 1)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, col = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val!r}", column=col)


def _parse_uint(tokens: _Tokens) -> int:
    kind, val, col = tokens.next()
    if kind != "rat" or "/" in val:
        raise ParseError("expected an integer exponent", column=col)
    return int(val)


def _parse_signed_int(tokens: _Tokens) -> int:
    kind, val, col = tokens.peek()
    sign = 1
    if kind == "op" and val in "+-":
        tokens.next()
        sign = -1 if val == "-" else 1
    return sign * _parse_uint(tokens)


def _parse_fraction(tokens: _Tokens, allow_sign=False) -> Fraction:
    kind, val, col = tokens.peek()
    sign = 1
    if allow_sign and kind == "op" and val in "+-":
        tokens.next()
        sign = -1 if val == "-" else 1
        kind, val, col = tokens.peek()
    if kind != "rat":
        raise ParseError("expected a rational number", column=col)
    tokens.next()
    return sign * Fraction(val)


def _parse_paren_coeff(tokens: _Tokens) -> Coefficient:
    # '(' already consumed; grammar: srat [('+'|'-') urat 'i'] ')'
    re_part = _parse_fraction(tokens, allow_sign=True)
    kind, val, col = tokens.peek()
    im_part = Fraction(0)
    if kind == "op" and val in "+-":
        tokens.next()
        sign = -1 if val == "-" else 1
        im_part = sign * _parse_fraction(tokens)
        kind, val, col = tokens.next()
        if kind != "imag":
            raise ParseError("expected 'i' after imaginary part", column=col)
    elif kind == "imag":
        # allow "(1i)" style
        tokens.next()
        im_part, re_part = re_part, Fraction(0)
    tokens.expect_op(")")
    return Coefficient.gauss(re_part, im_part)


def _parse_term(tokens: _Tokens, ctx: Context) -> Superfunction:
    term = Superfunction.constant(ctx, 1)
    saw_factor = False
    while True:
        kind, val, col = tokens.peek()
        if kind == "op" and val == "(":
            tokens.next()
            term = term * _parse_paren_coeff(tokens)
        elif kind == "rat":
            tokens.next()
            term = term.scaled(Fraction(val))
        elif kind == "h":
            tokens.next()
            k = 1
            nk, nv, _ = tokens.peek()
            if nk == "op" and nv == "^":
                tokens.next()
                k = _parse_signed_int(tokens)
            term = term * Superfunction.constant(ctx, Coefficient.h_power(k))
        elif kind == "gen":
            tokens.next()
            m = _GEN_RE.fullmatch(val)
            g = Generator(m.group(1), int(m.group(2)))
            if not ctx.contains(g):
                raise ParseError(f"generator {val} not in context {ctx}", column=col)
            k = 1
            nk, nv, _ = tokens.peek()
            if nk == "op" and nv == "^":
                tokens.next()
                k = _parse_uint(tokens)
            term = term * Superfunction.generator(ctx, g) ** k
        else:
            raise ParseError(f"expected a factor, found {val!r}", column=col)
        saw_factor = True
        nk, nv, _ = tokens.peek()
        if nk == "op" and nv == "*":
            tokens.next()
            continue
        break
    if not saw_factor:
        raise ParseError("empty term")
    return term


def parse_superfunction(text: str, ctx: Context | None = None) -> Superfunction:
    """Parse the text format. When ctx is None, the context is detected
    from the generator tokens that occur in the text."""
    if ctx is None:
        ctx = detect_context(text)
    tokens = _Tokens(text)
    if tokens.peek()[0] is None:
        raise ParseError("empty superfunction text")
    total = Superfunction.zero(ctx)
    sign = 1
    kind, val, _ = tokens.peek()
    if kind == "op" and val in "+-":
        tokens.next()
        sign = -1 if val == "-" else 1
    while True:
        term = _parse_term(tokens, ctx)
        total = total + (term if sign > 0 else -term)
        kind, val, col = tokens.peek()
        if kind is None:
            break
        if kind == "op" and val in "+-":
            tokens.next()
            sign = -1 if val == "-" else 1
            continue
        raise ParseError(f"expected '+' or '-', found {val!r}", column=col)
    return total


# -- formatting ------------------------------------------------------


def _monomial_tokens(mono) -> list[str]:
    evens, odds = mono
    gens = [(Generator(*g).sort_key(), Generator(*g).token(), k) for g, k in evens]
    gens += [(Generator(*g).sort_key(), Generator(*g).token(), 1) for g in odds]
    gens.sort()
    out = []
    for _, token, k in gens:
        out.append(token if k == 1 else f"{token}^{k}")
    return out

def _h_token(k: int) -> str:
    if k == 0:
        return ""
    return "h" if k == 1 else f"h^{k}"


def format_superfunction(F: Superfunction) -> str:
    """Canonical, deterministic rendering; parse(format(F)) == F."""
    if F.is_zero():
        return "0"
    rendered = []
    for mono, coeff in sorted(F.terms(), key=lambda t: monomial_sort_key(t[0])):
        gen_tokens = _monomial_tokens(mono)
        for k, (re_part, im_part) in coeff.items():
            parts = []
            if im_part == 0:
                sign = "-" if re_part < 0 else "+"
                mag = abs(re_part)
                has_tail = bool(gen_tokens) or k != 0
                if not has_tail:
                    parts.append(str(mag))
                elif mag != 1:
                    parts.append(f"({mag})")
            elif re_part == 0 and im_part < 0:
                sign = "-"
                parts.append(f"(0+{-im_part}i)")
            else:
                sign = "+"
                im_sign = "+" if im_part >= 0 else "-"
                parts.append(f"({re_part}{im_sign}{abs(im_part)}i)")
            h_tok = _h_token(k)
            if h_tok:
                parts.append(h_tok)
            parts.extend(gen_tokens)
            rendered.append((sign, "*".join(parts)))
    first_sign, first_body = rendered[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in rendered[1:]:
        text += f" {sign} {body}"
    return text
