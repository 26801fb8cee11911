"""Circulant matrices, the block matrix M(A, B) and generator rows M + wI.

Supports are 1-based in all I/O: position j of a first row is the entry
r_{j-1}, so position 1 is the diagonal.  Internally matrices are numpy
uint8 arrays and coordinate indices are 0-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf4 import F4Vector


class InvalidPairError(ValueError):
    """A support or adjacency matrix violates the construction constraints."""


class CodeSpecError(ValueError):
    """Malformed code-spec line."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = (", ".join(where) + ": ") if where else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class SupportSet:
    n: int
    positions: tuple[int, ...]

    def __init__(self, n: int, positions: Iterable[int] = ()):
        pos = tuple(sorted(int(p) for p in positions))
        if n < 1:
            raise InvalidPairError(f"circulant order must be positive, got {n}")
        if len(set(pos)) != len(pos):
            raise InvalidPairError(f"duplicate positions in {pos}")
        if pos and (pos[0] < 1 or pos[-1] > n):
            raise InvalidPairError(f"positions must lie in [1, {n}], got {pos}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "positions", pos)

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    @property
    def offsets(self) -> tuple[int, ...]:
        """0-based exponents j-1 of the first-row entries that are 1."""
        return tuple(p - 1 for p in self.positions)

    def mask(self) -> int:
        m = 0
        for p in self.positions:
            m |= 1 << (p - 1)
        return m

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "SupportSet":
        return cls(n, [i + 1 for i in range(n) if (mask >> i) & 1])

    def render(self) -> str:
        return ",".join(map(str, self.positions)) if self.positions else "-"


def mirror(n: int, j: int) -> int:
    """Position paired with j in a symmetric first row: j -> n + 2 - j (mod n)."""
    return ((n + 2 - j - 1) % n) + 1


def is_symmetric_support(s: SupportSet) -> bool:
    return all(mirror(s.n, j) in s.positions for j in s.positions)


@dataclass(frozen=True)
class CirculantPair:
    n: int
    A: SupportSet
    B: SupportSet

    def __init__(self, n: int, A: Iterable[int] | SupportSet, B: Iterable[int] | SupportSet):
        A = A if isinstance(A, SupportSet) else SupportSet(n, A)
        B = B if isinstance(B, SupportSet) else SupportSet(n, B)
        if A.n != n or B.n != n:
            raise InvalidPairError("support orders do not match the pair order")
        if 1 in A.positions:
            raise InvalidPairError("A has a nonzero diagonal (position 1 in supp A)")
        if not is_symmetric_support(A):
            bad = [j for j in A.positions if mirror(n, j) not in A.positions]
            raise InvalidPairError(f"A is not symmetric: mirrors of {bad} missing")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def length(self) -> int:
        return 2 * self.n

    def spec_line(self, name: str | None = None) -> str:
        head = f"name={name} " if name else ""
        return f"{head}n={self.n} A={self.A.render()} B={self.B.render()}"


def circulant_from_support(s: SupportSet) -> np.ndarray:
    """n x n circulant whose first row is 1 exactly on ``s``; row i+1 is row i shifted right."""
    n = s.n
    first = np.zeros(n, dtype=np.uint8)
    first[list(s.offsets)] = 1
    return np.stack([np.roll(first, i) for i in range(n)])


def block_matrix(p: CirculantPair) -> np.ndarray:
    A = circulant_from_support(p.A)
    B = circulant_from_support(p.B)
    return np.block([[A, B], [B.T, A]]).astype(np.uint8)


def check_adjacency(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.uint8)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidPairError(f"adjacency matrix must be square, got shape {m.shape}")
    if np.any(m > 1):
        raise InvalidPairError("adjacency entries must be 0 or 1")
    if not np.array_equal(m, m.T):
        raise InvalidPairError("adjacency matrix is not symmetric")
    if np.any(np.diag(m)):
        raise InvalidPairError("adjacency matrix has a nonzero diagonal")
    return m


def generator_matrix(m: np.ndarray) -> list[F4Vector]:
    """Rows of m + wI: plane a is the matrix row, plane b is the unit vector."""
    m = check_adjacency(m)
    n = m.shape[0]
    rows = []
    for i in range(n):
        a = 0
        for j in np.flatnonzero(m[i]):
            a |= 1 << int(j)
        rows.append(F4Vector(n, a, 1 << i))
    return rows


def symmetric_free_positions(n: int) -> list[int]:
    """One representative per mirror orbit of positions 2..n (the free bits of a symmetric A)."""
    reps = []
    for j in range(2, n + 1):
        if j <= mirror(n, j):
            reps.append(j)
    return reps


def symmetric_support_from_bits(n: int, bits: int) -> SupportSet:
    pos = set()
    for k, j in enumerate(symmetric_free_positions(n)):
        if (bits >> k) & 1:
            pos.add(j)
            pos.add(mirror(n, j))
    return SupportSet(n, pos)


# -- code-spec lines -------------------------------------------------------

_FIELD = re.compile(r"^(name|n|A|B)=(.*)$")


def _parse_positions(text: str, field: str, line: int | None) -> list[int]:
    if text in ("-", ""):
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise CodeSpecError(f"expected a comma list of integers or '-', got {text!r}", line, field) from None


def parse_spec_line(text: str, line: int | None = None) -> tuple[str | None, CirculantPair]:
    """Parse ``name=<s> n=<int> A=<list|-> B=<list|->``; name is optional."""
    fields: dict[str, str] = {}
    for tok in text.split():
        m = _FIELD.match(tok)
        if not m:
            raise CodeSpecError(f"unrecognised token {tok!r}", line)
        if m.group(1) in fields:
            raise CodeSpecError("field given twice", line, m.group(1))
        fields[m.group(1)] = m.group(2)
    for key in ("n", "A", "B"):
        if key not in fields:
            raise CodeSpecError("missing field", line, key)
    try:
        n = int(fields["n"])
    except ValueError:
        raise CodeSpecError(f"not an integer: {fields['n']!r}", line, "n") from None
    A = _parse_positions(fields["A"], "A", line)
    B = _parse_positions(fields["B"], "B", line)
    try:
        supp_a = SupportSet(n, A)
    except InvalidPairError as exc:
        raise CodeSpecError(str(exc), line, "A") from None
    try:
        supp_b = SupportSet(n, B)
    except InvalidPairError as exc:
        raise CodeSpecError(str(exc), line, "B") from None
    try:
        pair = CirculantPair(n, supp_a, supp_b)
    except InvalidPairError as exc:
        raise CodeSpecError(str(exc), line, "A") from None
    return fields.get("name"), pair


def parse_spec_lines(lines: Sequence[str]) -> list[tuple[str | None, CirculantPair]]:
    out = []
    for i, raw in enumerate(lines, start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            out.append(parse_spec_line(s, line=i))
    return out
