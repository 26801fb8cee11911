"""Arithmetic over GF(4) = {0, 1, w, W} and bit-plane vectors over it.

An element is the bit pair (a, b) meaning a*1 + b*w, so 1 = (1, 0),
w = (0, 1) and W = w^2 = w + 1 = (1, 1).  Vectors keep the two planes as
Python integers; coordinate 1 of the text form is bit 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence


class F4(IntEnum):
    ZERO = 0
    ONE = 1
    OMEGA = 2
    OMEGA_BAR = 3

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]


_SYMBOLS = "01wW"
_FROM_SYMBOL = {c: F4(i) for i, c in enumerate(_SYMBOLS)}

# discrete logs with respect to w: 1 = w^0, w = w^1, W = w^2
_LOG = {F4.ONE: 0, F4.OMEGA: 1, F4.OMEGA_BAR: 2}
_EXP = (F4.ONE, F4.OMEGA, F4.OMEGA_BAR)


def f4_add(x: int, y: int) -> F4:
    return F4(x ^ y)


def f4_mul(x: int, y: int) -> F4:
    x, y = F4(x), F4(y)
    if x == F4.ZERO or y == F4.ZERO:
        return F4.ZERO
    return _EXP[(_LOG[x] + _LOG[y]) % 3]


def f4_conj(x: int) -> F4:
    """Frobenius map x -> x^2."""
    return f4_mul(x, x)


def f4_trace(x: int) -> int:
    """Absolute trace GF(4) -> GF(2), x + x^2."""
    t = f4_add(x, f4_conj(x))
    assert t in (F4.ZERO, F4.ONE)
    return int(t)


@dataclass(frozen=True)
class F4Vector:
    """A word of length ``n`` over GF(4) stored as two bit-planes."""

    n: int
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("length must be non-negative")
        if (self.a | self.b) >> self.n:
            raise ValueError("bit-plane has bits beyond the vector length")

    @classmethod
    def zero(cls, n: int) -> "F4Vector":
        return cls(n, 0, 0)

    @classmethod
    def from_elements(cls, elems: Sequence[int]) -> "F4Vector":
        a = b = 0
        for i, e in enumerate(elems):
            e = F4(e)
            if e & 1:
                a |= 1 << i
            if e & 2:
                b |= 1 << i
        return cls(len(elems), a, b)

    @classmethod
    def from_string(cls, text: str) -> "F4Vector":
        try:
            return cls.from_elements([_FROM_SYMBOL[c] for c in text.strip()])
        except KeyError as exc:
            raise ValueError(f"bad GF(4) symbol {exc.args[0]!r} (use 0, 1, w, W)") from None

    def __getitem__(self, i: int) -> F4:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return F4(((self.a >> i) & 1) | (((self.b >> i) & 1) << 1))

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return (self[i] for i in range(self.n))

    def __add__(self, other: "F4Vector") -> "F4Vector":
        _same_length(self, other)
        return F4Vector(self.n, self.a ^ other.a, self.b ^ other.b)

    __sub__ = __add__

    def __bool__(self) -> bool:
        return bool(self.a | self.b)

    @property
    def support(self) -> int:
        return self.a | self.b

    def weight(self) -> int:
        return (self.a | self.b).bit_count()

    def scale(self, c: int) -> "F4Vector":
        return F4Vector.from_elements([f4_mul(c, x) for x in self])

    def permute(self, perm: Sequence[int]) -> "F4Vector":
        """Move coordinate i to position perm[i]."""
        a = b = 0
        for i in range(self.n):
            if (self.a >> i) & 1:
                a |= 1 << perm[i]
            if (self.b >> i) & 1:
                b |= 1 << perm[i]
        return F4Vector(self.n, a, b)

    def interleaved(self) -> int:
        """GF(2) image with coordinate i on bits 2i (plane a) and 2i+1 (plane b)."""
        return _spread(self.a) | (_spread(self.b) << 1)

    @classmethod
    def from_interleaved(cls, n: int, v: int) -> "F4Vector":
        return cls(n, _gather(v), _gather(v >> 1))

    def __str__(self) -> str:
        return "".join(_SYMBOLS[x] for x in self)

    def __repr__(self) -> str:
        return f"F4Vector({str(self)!r})"


def _same_length(x: F4Vector, y: F4Vector) -> None:
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} != {y.n}")


def _spread(v: int) -> int:
    out, i = 0, 0
    while v:
        if v & 1:
            out |= 1 << (2 * i)
        v >>= 1
        i += 1
    return out


def _gather(v: int) -> int:
    out, i = 0, 0
    while v:
        if v & 1:
            out |= 1 << i
        v >>= 2
        i += 1
    return out


def weight(x: F4Vector) -> int:
    return x.weight()


def trace_inner_product(x: F4Vector, y: F4Vector) -> int:
    """Trace form sum_i (x_i y_i^2 + x_i^2 y_i), returned as 0 or 1.

    With x_i = a + b w and y_i = c + d w the summand is ad + bc, so the
    whole sum is the parity of (a_x & b_y) ^ (b_x & a_y).
    """
    _same_length(x, y)
    return (((x.a & y.b) ^ (x.b & y.a)).bit_count()) & 1


def trace_inner_product_direct(x: F4Vector, y: F4Vector) -> int:
    """Same form evaluated with field arithmetic, one coordinate at a time."""
    _same_length(x, y)
    acc = F4.ZERO
    for xi, yi in zip(x, y):
        acc = f4_add(acc, f4_add(f4_mul(xi, f4_conj(yi)), f4_mul(f4_conj(xi), yi)))
    if acc not in (F4.ZERO, F4.ONE):
        raise AssertionError("trace form left GF(2)")
    return int(acc)


def format_vectors(vectors: Iterable[F4Vector]) -> str:
    return "\n".join(str(v) for v in vectors)
