"""Exact scalar coefficients: Laurent polynomials in the formal symbol h
with Gaussian-rational coefficients a + b*i.

All arithmetic is exact; the zero coefficient is the empty term map.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Coefficient:
    """Sum of (a + b*i) * h^k terms, keyed by the integer exponent k."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        # terms: dict[int, (Fraction re, Fraction im)] with no zero values
        self._terms = terms or {}

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero() -> "Coefficient":
        return Coefficient()

    @staticmethod
    def one() -> "Coefficient":
        return Coefficient({0: (_ONE, _ZERO)})

    @staticmethod
    def rational(a) -> "Coefficient":
        a = _as_fraction(a)
        if a == 0:
            return Coefficient()
        return Coefficient({0: (a, _ZERO)})

    @staticmethod
    def gauss(a, b, h_power: int = 0) -> "Coefficient":
        """(a + b*i) * h^h_power."""
        a = _as_fraction(a)
        b = _as_fraction(b)
        if a == 0 and b == 0:
            return Coefficient()
        return Coefficient({h_power: (a, b)})

    @staticmethod
    def imaginary_unit() -> "Coefficient":
        return Coefficient({0: (_ZERO, _ONE)})

    @staticmethod
    def h_power(k: int) -> "Coefficient":
        return Coefficient({k: (_ONE, _ZERO)})

    # -- queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        """Iterate (h_power, (re, im)) sorted by power."""
        return sorted(self._terms.items())

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: "Coefficient") -> "Coefficient":
        if not isinstance(other, Coefficient):
            return NotImplemented
        out = dict(self._terms)
        for k, (a, b) in other._terms.items():
            if k in out:
                c, d = out[k]
                a, b = a + c, b + d
                if a == 0 and b == 0:
                    del out[k]
                    continue
            elif a == 0 and b == 0:
                continue
            out[k] = (a, b)
        return Coefficient(out)

    def __neg__(self) -> "Coefficient":
        return Coefficient({k: (-a, -b) for k, (a, b) in self._terms.items()})

    def __sub__(self, other: "Coefficient") -> "Coefficient":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            if f == 0:
                return Coefficient()
            return Coefficient({k: (a * f, b * f) for k, (a, b) in self._terms.items()})
        if not isinstance(other, Coefficient):
            return NotImplemented
        out = {}
        for k1, (a1, b1) in self._terms.items():
            for k2, (a2, b2) in other._terms.items():
                k = k1 + k2
                re = a1 * a2 - b1 * b2
                im = a1 * b2 + b1 * a2
                if k in out:
                    c, d = out[k]
                    re, im = re + c, im + d
                if re == 0 and im == 0:
                    out.pop(k, None)
                else:
                    out[k] = (re, im)
        return Coefficient(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(sorted(self._terms.items())))

    def __repr__(self):
        return f"Coefficient({self.text()})"

    # -- printing ----------------------------------------------------

    def is_plain_rational(self) -> bool:
        """True when the value is a single real rational with no h."""
        if not self._terms:
            return True
        if set(self._terms) != {0}:
            return False
        return self._terms[0][1] == 0

    def is_one(self) -> bool:
        return self._terms == {0: (_ONE, _ZERO)}

    def text(self) -> str:
        """Render in the repository text format, e.g. `(1/2)` or `(0+1i)*h^-1`.

        Multi-term coefficients render joined by ` + `; callers that need one
        term per printed line should iterate items() instead.
        """
        if self.is_zero():
            return "(0)"
        parts = [format_gauss_h(k, re, im) for k, (re, im) in self.items()]
        return " + ".join(parts)


def format_gauss_h(k: int, re: Fraction, im: Fraction) -> str:
    """Format one (a+bi)*h^k factor."""
    if im == 0:
        body = f"({re})"
    else:
        sign = "+" if im >= 0 else "-"
        body = f"({re}{sign}{abs(im)}i)"
    if k == 0:
        return body
    if k == 1:
        return body + "*h"
    return body + f"*h^{k}"
