"""Generator table for the shifted cotangent bundle coordinates.

A context fixes n bosonic base coordinates x1..xn, m ghosts c1..cm and
their conjugates: antifields xs1..xsn and antighosts cs1..csm.

Ghost degrees: |cs| = -2, |xs| = -1, |x| = 0, |c| = +1; parity is the
degree mod 2, so x and cs are even while xs and c are odd.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import ContractViolation

FIELD = "x"
GHOST = "c"
ANTIFIELD = "xs"
ANTIGHOST = "cs"

_KIND_ORDER = {FIELD: 0, GHOST: 1, ANTIFIELD: 2, ANTIGHOST: 3}
_GHOST_DEGREE = {FIELD: 0, GHOST: 1, ANTIFIELD: -1, ANTIGHOST: -2}


class Generator(NamedTuple):
    """A single coordinate generator, identified by (kind, index).

    Indices are 1-based to match the text format tokens x1, c2, xs1, cs2.
    """

    kind: str
    index: int

    @property
    def ghost_degree(self) -> int:
        return _GHOST_DEGREE[self.kind]

    @property
    def parity(self) -> int:
        return _GHOST_DEGREE[self.kind] % 2

    @property
    def is_odd(self) -> bool:
        return self.parity == 1

    def sort_key(self):
        # canonical monomial order: fields < ghosts < antifields < antighosts,
        # then by index
        return (_KIND_ORDER[self.kind], self.index)

    def token(self) -> str:
        return f"{self.kind}{self.index}"


class Context:
    """Immutable generator table shared by the superfunctions built over it."""

    __slots__ = ("n_fields", "n_ghosts")

    def __init__(self, n_fields: int, n_ghosts: int = 0):
        if n_fields < 0 or n_ghosts < 0:
            raise ContractViolation("generator counts must be non-negative")
        object.__setattr__(self, "n_fields", n_fields)
        object.__setattr__(self, "n_ghosts", n_ghosts)

    def __setattr__(self, *a):
        raise AttributeError("Context is immutable")

    def field(self, i: int) -> Generator:
        return self._checked(Generator(FIELD, i))

    def ghost(self, a: int) -> Generator:
        return self._checked(Generator(GHOST, a))

    def antifield(self, i: int) -> Generator:
        return self._checked(Generator(ANTIFIELD, i))

    def antighost(self, a: int) -> Generator:
        return self._checked(Generator(ANTIGHOST, a))

    def _checked(self, g: Generator) -> Generator:
        if not self.contains(g):
            raise ContractViolation(f"generator {g.token()} not in context {self}")
        return g

    def contains(self, g: Generator) -> bool:
        if g.kind in (FIELD, ANTIFIELD):
            return 1 <= g.index <= self.n_fields
        if g.kind in (GHOST, ANTIGHOST):
            return 1 <= g.index <= self.n_ghosts
        return False

    def generators(self):
        """All generators in canonical order."""
        for kind, count in (
            (FIELD, self.n_fields),
            (GHOST, self.n_ghosts),
            (ANTIFIELD, self.n_fields),
            (ANTIGHOST, self.n_ghosts),
        ):
            for i in range(1, count + 1):
                yield Generator(kind, i)

    def conjugate_pairs(self):
        """The (base, fiber) pairs (x_i, xs_i) and (c_a, cs_a)."""
        for i in range(1, self.n_fields + 1):
            yield Generator(FIELD, i), Generator(ANTIFIELD, i)
        for a in range(1, self.n_ghosts + 1):
            yield Generator(GHOST, a), Generator(ANTIGHOST, a)

    def __eq__(self, other):
        return (
            isinstance(other, Context)
            and self.n_fields == other.n_fields
            and self.n_ghosts == other.n_ghosts
        )

    def __hash__(self):
        return hash((self.n_fields, self.n_ghosts))

    def __repr__(self):
        return f"Context(n_fields={self.n_fields}, n_ghosts={self.n_ghosts})"
