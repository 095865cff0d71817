"""Finite powerset Boolean algebras 2^n and operations on their subsets.

An algebra with n atoms has 2^n elements; an element is an n-bit integer
(bit i = atom i) and elements are indexed 0 .. 2^n - 1 by their bit
pattern.  A denotation -- a subset of the algebra -- is an integer bitset
over those element indices.  External operators are the set-theoretic
ones on denotations; internal operators apply the element operations
pointwise across denotations.  Binary internal operators materialise the
image set by a double loop over member elements; there are no algebraic
shortcuts, only a cache of previously computed results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import AlgebraMismatchError

MAX_ATOMS = 8


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of the set bits, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


class Algebra:
    """The powerset Boolean algebra on n atoms, with denotation operators."""

    def __init__(self, n_atoms: int):
        if not 0 <= n_atoms <= MAX_ATOMS:
            raise ValueError(f"n_atoms must be in 0..{MAX_ATOMS}, got {n_atoms}")
        self.n = n_atoms
        self.size = 1 << n_atoms          # number of elements
        self.top = self.size - 1          # top element (all atoms)
        self.full = (1 << self.size) - 1  # denotation containing every element
        # principal ideal / filter per element, used by closures and strict_neg
        self._down = [self._submask_bits(a) for a in range(self.size)]
        self._up = [self._supermask_bits(a) for a in range(self.size)]
        self._int_or_memo: dict[tuple[int, int], int] = {}
        self._int_and_memo: dict[tuple[int, int], int] = {}

    def __repr__(self):
        return f"Algebra(n_atoms={self.n})"

    def __eq__(self, other):
        return isinstance(other, Algebra) and other.n == self.n

    def __hash__(self):
        return hash((Algebra, self.n))

    def _submask_bits(self, a: int) -> int:
        bits = 0
        for b in range(self.size):
            if b & a == b:
                bits |= 1 << b
        return bits

    def _supermask_bits(self, a: int) -> int:
        bits = 0
        for b in range(self.size):
            if b & a == a:
                bits |= 1 << b
        return bits

    # -- element operations

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def complement(self, a: int) -> int:
        return self.top ^ a

    def leq(self, a: int, b: int) -> bool:
        return a & b == a

    def elements(self) -> range:
        return range(self.size)

    # -- external (set-theoretic) operators on denotation bitsets

    def ext_not(self, x: int) -> int:
        return self.full ^ x

    def ext_or(self, x: int, y: int) -> int:
        return x | y

    def ext_and(self, x: int, y: int) -> int:
        return x & y

    # -- internal (pointwise) operators

    def int_bot(self) -> int:
        return 1  # {bottom element}

    def int_top(self) -> int:
        return 1 << self.top

    def int_not(self, x: int) -> int:
        out = 0
        for a in iter_bits(x):
            out |= 1 << (self.top ^ a)
        return out

    def int_or(self, x: int, y: int) -> int:
        key = (x, y) if x <= y else (y, x)
        out = self._int_or_memo.get(key)
        if out is None:
            out = 0
            for a in iter_bits(x):
                for b in iter_bits(y):
                    out |= 1 << (a | b)
            self._int_or_memo[key] = out
        return out

    def int_and(self, x: int, y: int) -> int:
        key = (x, y) if x <= y else (y, x)
        out = self._int_and_memo.get(key)
        if out is None:
            out = 0
            for a in iter_bits(x):
                for b in iter_bits(y):
                    out |= 1 << (a & b)
            self._int_and_memo[key] = out
        return out

    # -- order closures and strict negation

    def down_closure(self, x: int) -> int:
        out = 0
        for a in iter_bits(x):
            out |= self._down[a]
        return out

    def up_closure(self, x: int) -> int:
        out = 0
        for a in iter_bits(x):
            out |= self._up[a]
        return out

    def strict_neg(self, x: int) -> int:
        """Elements meeting every member of x at bottom; full set when x is empty."""
        out = self.full
        for a in iter_bits(x):
            out &= self._down[self.top ^ a]  # {b | b & a == 0} = submasks of ~a
        return out

    # -- principal ideals

    def principal_ideal(self, a: int) -> int:
        return self._down[a]

    def join_of(self, x: int) -> int:
        """Join of the members; by convention 0 (bottom) for the empty set."""
        out = 0
        for a in iter_bits(x):
            out |= a
        return out

    def is_principal_ideal(self, x: int) -> bool:
        if x == 0:
            return False
        j = self.join_of(x)
        return x >> j & 1 == 1 and self.down_closure(x) == x

    # -- text form: element bit-strings, most significant atom first

    def format_element(self, a: int) -> str:
        return format(a, f"0{self.n}b") if self.n else ""

    def parse_element(self, text: str) -> int:
        if len(text) != self.n or (self.n and not set(text) <= {"0", "1"}):
            raise ValueError(f"element of a {self.n}-atom algebra needs {self.n} bits, got {text!r}")
        return int(text, 2) if text else 0

    def format_denotation(self, bits: int) -> list[str]:
        return [self.format_element(a) for a in iter_bits(bits)]

    def parse_denotation(self, texts: list[str]) -> int:
        bits = 0
        for t in texts:
            bits |= 1 << self.parse_element(t)
        return bits


@dataclass(frozen=True)
class Denotation:
    """A member of the powerset of the algebra, as an immutable value."""

    algebra: Algebra
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits <= self.algebra.full:
            raise ValueError("denotation bits out of range for the algebra")

    def _same(self, other: "Denotation") -> None:
        if other.algebra != self.algebra:
            raise AlgebraMismatchError(
                f"denotations from different algebras: n={self.algebra.n} vs n={other.algebra.n}"
            )

    def members(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __contains__(self, element: int) -> bool:
        return self.bits >> element & 1 == 1

    def ext_not(self) -> "Denotation":
        return Denotation(self.algebra, self.algebra.ext_not(self.bits))

    def ext_or(self, other: "Denotation") -> "Denotation":
        self._same(other)
        return Denotation(self.algebra, self.bits | other.bits)

    def ext_and(self, other: "Denotation") -> "Denotation":
        self._same(other)
        return Denotation(self.algebra, self.bits & other.bits)

    def int_not(self) -> "Denotation":
        return Denotation(self.algebra, self.algebra.int_not(self.bits))

    def int_or(self, other: "Denotation") -> "Denotation":
        self._same(other)
        return Denotation(self.algebra, self.algebra.int_or(self.bits, other.bits))

    def int_and(self, other: "Denotation") -> "Denotation":
        self._same(other)
        return Denotation(self.algebra, self.algebra.int_and(self.bits, other.bits))

    def down_closure(self) -> "Denotation":
        return Denotation(self.algebra, self.algebra.down_closure(self.bits))

    def up_closure(self) -> "Denotation":
        return Denotation(self.algebra, self.algebra.up_closure(self.bits))

    def strict_neg(self) -> "Denotation":
        return Denotation(self.algebra, self.algebra.strict_neg(self.bits))

    def is_principal_ideal(self) -> bool:
        return self.algebra.is_principal_ideal(self.bits)

    def join_of(self) -> int:
        return self.algebra.join_of(self.bits)

    def to_strings(self) -> list[str]:
        return self.algebra.format_denotation(self.bits)

    @classmethod
    def from_strings(cls, algebra: Algebra, texts: list[str]) -> "Denotation":
        return cls(algebra, algebra.parse_denotation(texts))


def ext_bot(algebra: Algebra) -> Denotation:
    return Denotation(algebra, 0)


def int_bot(algebra: Algebra) -> Denotation:
    return Denotation(algebra, algebra.int_bot())


def full_set(algebra: Algebra) -> Denotation:
    return Denotation(algebra, algebra.full)


def principal_ideal(algebra: Algebra, element: int) -> Denotation:
    return Denotation(algebra, algebra.principal_ideal(element))
