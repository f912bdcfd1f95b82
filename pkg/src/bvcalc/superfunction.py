"""Graded commutative polynomial superfunctions with exact coefficients.

A superfunction is a map from monomial keys to coefficients. A monomial key
holds the even generators with exponents plus an ordered list of distinct odd
generators; odd generators square to zero, and reordering two odd generators
flips the sign of the coefficient (the Koszul sign). Keys are always stored
in the canonical generator order (fields < ghosts < antifields < antighosts,
then by index), so equality is plain dictionary equality.

All values are immutable after construction; no operation mutates its inputs.
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import Coefficient
from .context import Context, Generator
from .errors import ContractViolation

# A monomial is (evens, odds):
#   evens: tuple of ((kind, index), exponent), sorted by generator sort key
#   odds:  tuple of (kind, index), sorted by generator sort key
EMPTY_MONOMIAL = ((), ())


def _gen_key(kind_index) -> tuple:
    return Generator(*kind_index).sort_key()


def _merge_evens(e1, e2):
    out = dict(e1)
    for g, k in e2:
        out[g] = out.get(g, 0) + k
    return tuple(sorted(out.items(), key=lambda item: _gen_key(item[0])))


def _merge_odds(o1, o2):
    """Concatenate two sorted odd-generator lists into sorted order.

    Returns (odds, sign) or (None, 0) when a generator repeats (odd square).
    The sign is -1 per transposition needed to interleave o2 into o1.
    """
    if not o1:
        return o2, 1
    if not o2:
        return o1, 1
    merged = []
    i = j = 0
    inversions = 0
    while i < len(o1) and j < len(o2):
        a, b = o1[i], o2[j]
        ka, kb = _gen_key(a), _gen_key(b)
        if ka == kb:
            return None, 0
        if ka < kb:
            merged.append(a)
            i += 1
        else:
            # b jumps left past the rest of o1
            inversions += len(o1) - i
            merged.append(b)
            j += 1
    merged.extend(o1[i:])
    merged.extend(o2[j:])
    return tuple(merged), (-1 if inversions % 2 else 1)


def monomial_ghost_degree(mono) -> int:
    evens, odds = mono
    deg = sum(Generator(*g).ghost_degree * k for g, k in evens)
    deg += sum(Generator(*g).ghost_degree for g in odds)
    return deg


def monomial_parity(mono) -> int:
    # even generators never contribute to parity
    return len(mono[1]) % 2


def monomial_total_degree(mono) -> int:
    evens, odds = mono
    return sum(k for _, k in evens) + len(odds)


def monomial_sort_key(mono):
    evens, odds = mono
    gens = [(_gen_key(g), k) for g, k in evens]
    gens += [(_gen_key(g), 1) for g in odds]
    gens.sort()
    return (monomial_total_degree(mono), tuple(gens))


class Superfunction:
    """An exact graded polynomial over a fixed generator context."""

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: Context, terms=None):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "_terms", terms or {})

    def __setattr__(self, *a):
        raise AttributeError("Superfunction is immutable")

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(ctx: Context) -> "Superfunction":
        return Superfunction(ctx)

    @staticmethod
    def constant(ctx: Context, value) -> "Superfunction":
        c = value if isinstance(value, Coefficient) else Coefficient.rational(value)
        if c.is_zero():
            return Superfunction(ctx)
        return Superfunction(ctx, {EMPTY_MONOMIAL: c})

    @staticmethod
    def generator(ctx: Context, g: Generator) -> "Superfunction":
        if not ctx.contains(g):
            raise ContractViolation(f"generator {g.token()} not in {ctx}")
        gi = (g.kind, g.index)
        mono = (((gi, 1),), ()) if g.parity == 0 else ((), (gi,))
        return Superfunction(ctx, {mono: Coefficient.one()})

    @staticmethod
    def from_terms(ctx: Context, pairs) -> "Superfunction":
        """Sum coefficient/monomial pairs, dropping exact zeros."""
        acc = {}
        for mono, coeff in pairs:
            if coeff.is_zero():
                continue
            if mono in acc:
                coeff = acc[mono] + coeff
                if coeff.is_zero():
                    del acc[mono]
                    continue
            acc[mono] = coeff
        return Superfunction(ctx, acc)

    # -- queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self):
        return self._terms.items()

    def coefficient(self, mono) -> Coefficient:
        return self._terms.get(mono, Coefficient.zero())

    def ghost_degree(self):
        """Common ghost degree of all monomials, or None when inhomogeneous."""
        degrees = {monomial_ghost_degree(m) for m in self._terms}
        if not degrees:
            return 0
        if len(degrees) > 1:
            return None
        return degrees.pop()

    def parity(self):
        """0 or 1 for parity-homogeneous values, None when mixed."""
        parities = {monomial_parity(m) for m in self._terms}
        if not parities:
            return 0
        if len(parities) > 1:
            return None
        return parities.pop()

    def parity_component(self, p: int) -> "Superfunction":
        return Superfunction(
            self.ctx,
            {m: c for m, c in self._terms.items() if monomial_parity(m) == p},
        )

    def max_total_degree(self) -> int:
        return max((monomial_total_degree(m) for m in self._terms), default=0)

    def contains_kind(self, kind: str) -> bool:
        for evens, odds in self._terms:
            if any(g[0] == kind for g, _ in evens) or any(g[0] == kind for g in odds):
                return True
        return False

    # -- ring operations ----------------------------------------------

    def _require_same_ctx(self, other: "Superfunction"):
        if self.ctx != other.ctx:
            raise ContractViolation(
                f"context mismatch: {self.ctx} vs {other.ctx}"
            )

    def __add__(self, other: "Superfunction") -> "Superfunction":
        if not isinstance(other, Superfunction):
            return NotImplemented
        self._require_same_ctx(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            if m in out:
                s = out[m] + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Superfunction(self.ctx, out)

    def __neg__(self) -> "Superfunction":
        return Superfunction(self.ctx, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Superfunction") -> "Superfunction":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Coefficient)):
            return self.scaled(other)
        if not isinstance(other, Superfunction):
            return NotImplemented
        self._require_same_ctx(other)
        out = {}
        for (e1, o1), c1 in self._terms.items():
            for (e2, o2), c2 in other._terms.items():
                odds, sign = _merge_odds(o1, o2)
                if odds is None:
                    continue
                mono = (_merge_evens(e1, e2), odds)
                c = c1 * c2
                if sign < 0:
                    c = -c
                if mono in out:
                    c = out[mono] + c
                    if c.is_zero():
                        del out[mono]
                        continue
                elif c.is_zero():
                    continue
                out[mono] = c
        return Superfunction(self.ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Coefficient)):
            return self.scaled(other)
        return NotImplemented

    def scaled(self, factor) -> "Superfunction":
        if not isinstance(factor, Coefficient):
            factor = Coefficient.rational(factor)
        if factor.is_zero():
            return Superfunction(self.ctx)
        return Superfunction(self.ctx, {m: c * factor for m, c in self._terms.items()})

    def __pow__(self, n: int) -> "Superfunction":
        if n < 0:
            raise ContractViolation("negative powers of superfunctions are undefined")
        out = Superfunction.constant(self.ctx, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Superfunction):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self._terms.items(), key=lambda t: monomial_sort_key(t[0])))))

    def __repr__(self):
        from .textio import format_superfunction

        return f"<Superfunction {format_superfunction(self)}>"


# -- the module operations -------------------------------------------


def multiply(F: Superfunction, G: Superfunction) -> Superfunction:
    """Supercommutative product; raises ContractViolation on context mismatch."""
    return F * G


def right_derivative(F: Superfunction, g: Generator) -> Superfunction:
    """Derivative that strips the target generator from the rightmost position.

    On a monomial the generator is anticommuted to the rightmost slot
    (one Koszul sign per odd generator it passes) and removed; even
    generators follow the exponent rule k*g^(k-1).
    """
    gi = (g.kind, g.index)
    out = []
    if g.parity == 1:
        for (evens, odds), coeff in F.terms():
            try:
                idx = odds.index(gi)
            except ValueError:
                continue
            hops = len(odds) - 1 - idx
            new_odds = odds[:idx] + odds[idx + 1 :]
            c = coeff if hops % 2 == 0 else -coeff
            out.append(((evens, new_odds), c))
    else:
        for (evens, odds), coeff in F.terms():
            for pos, (gen, k) in enumerate(evens):
                if gen == gi:
                    if k == 1:
                        new_evens = evens[:pos] + evens[pos + 1 :]
                    else:
                        new_evens = (
                            evens[:pos] + ((gen, k - 1),) + evens[pos + 1 :]
                        )
                    out.append((((new_evens), odds), coeff * k))
                    break
    return Superfunction.from_terms(F.ctx, out)


def left_derivative(F: Superfunction, g: Generator) -> Superfunction:
    """(-1)^(|g|(|F|+1)) times the right derivative, per parity component."""
    if g.parity == 0:
        return right_derivative(F, g)
    out = Superfunction.zero(F.ctx)
    for p in (0, 1):
        comp = F.parity_component(p)
        if comp.is_zero():
            continue
        d = right_derivative(comp, g)
        # |g| = 1 here: sign is (-1)^(p+1)
        out = out + (d if (p + 1) % 2 == 0 else -d)
    return out


def ghost_degree(F: Superfunction):
    """The common ghost degree, or None for an inhomogeneous value."""
    return F.ghost_degree()


def substitute(F: Superfunction, assignment: dict) -> Superfunction:
    """Algebra homomorphism replacing generators by superfunctions.

    The assignment must preserve parity: an odd generator may only map to an
    odd (or zero) superfunction, and likewise for even generators.
    """
    ctx = F.ctx
    images = {}
    for g, img in assignment.items():
        if not ctx.contains(g):
            raise ContractViolation(f"assignment key {g.token()} not in {ctx}")
        if img.ctx != ctx:
            raise ContractViolation("assignment image built over a different context")
        if not img.is_zero() and img.parity() != g.parity:
            raise ContractViolation(
                f"parity-violating substitution for {g.token()}"
            )
        images[(g.kind, g.index)] = img

    result = Superfunction.zero(ctx)
    for (evens, odds), coeff in F.terms():
        term = Superfunction.constant(ctx, coeff)
        for gi, k in evens:
            base = images.get(gi)
            if base is None:
                base = Superfunction.generator(ctx, Generator(*gi))
            term = term * base**k
            if term.is_zero():
                break
        else:
            for gi in odds:
                base = images.get(gi)
                if base is None:
                    base = Superfunction.generator(ctx, Generator(*gi))
                term = term * base
                if term.is_zero():
                    break
        result = result + term
    return result
