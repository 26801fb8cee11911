"""Additive GF(4) codes: GF(2)-spans of F4Vector generators."""

from __future__ import annotations

import os
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .circulant import (
    CirculantPair,
    InvalidPairError,
    SupportSet,
    block_matrix,
    check_adjacency,
    circulant_from_support,
    generator_matrix,
    is_symmetric_support,
)
from .gf4 import F4Vector, trace_inner_product

DEFAULT_BUDGET_LOG2 = 28


class BudgetExceeded(RuntimeError):
    """Full enumeration would exceed the configured 2^rank budget."""


class TypeLabel(str, Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


def enumeration_budget_log2() -> int:
    """log2 of the full-enumeration budget; ``F4CODES_BUDGET_LOG2`` overrides."""
    env = os.environ.get("F4CODES_BUDGET_LOG2")
    return int(env) if env else DEFAULT_BUDGET_LOG2


class AdditiveCode:
    """GF(2)-span of a list of length-n F4 vectors.

    ``reduced`` holds the reduced row-echelon basis of the interleaved 2n-bit
    image (coordinate i on bits 2i, 2i+1), pivots at the lowest set bit.
    ``origin`` optionally records the circulant description the code was
    built from; the minimum-weight engine uses it to pick symmetric windows.
    """

    def __init__(self, generators: Sequence[F4Vector], *, adjacency: np.ndarray | None = None,
                 origin: CirculantPair | SupportSet | None = None):
        gens = tuple(generators)
        if not gens:
            raise ValueError("an additive code needs at least one generator")
        n = gens[0].n
        if any(g.n != n for g in gens):
            raise ValueError("generators have mixed lengths")
        self.n = n
        self.generators = gens
        self.adjacency = adjacency
        self.origin = origin
        self._pivots: dict[int, int] = {}
        for g in gens:
            self._insert(g.interleaved())
        self.rank = len(self._pivots)
        self.reduced = tuple(F4Vector.from_interleaved(n, self._pivots[p]) for p in sorted(self._pivots))

    def _insert(self, v: int) -> None:
        v = self._reduce(v)
        if not v:
            return
        low = v & -v
        for p, row in self._pivots.items():
            if row & low:
                self._pivots[p] = row ^ v
        self._pivots[low] = v

    def _reduce(self, v: int) -> int:
        for p, row in self._pivots.items():
            if v & p:
                v ^= row
        return v

    def __len__(self) -> int:
        return 1 << self.rank

    @property
    def size(self) -> int:
        return 1 << self.rank

    def __contains__(self, x: F4Vector) -> bool:
        return contains(self, x)

    def __repr__(self) -> str:
        return f"AdditiveCode(n={self.n}, rank={self.rank})"

    def basis_words(self) -> np.ndarray:
        """Reduced basis as a (rank, 4) uint64 array: plane a in words 0-1, plane b in 2-3."""
        return words_of(self.reduced)


def words_of(vectors: Sequence[F4Vector]) -> np.ndarray:
    if vectors and vectors[0].n > 128:
        raise ValueError("packed kernels support lengths up to 128")
    out = np.zeros((len(vectors), 4), dtype=np.uint64)
    mask = (1 << 64) - 1
    for r, v in enumerate(vectors):
        out[r, 0] = v.a & mask
        out[r, 1] = v.a >> 64
        out[r, 2] = v.b & mask
        out[r, 3] = v.b >> 64
    return out


def vector_of_words(n: int, w) -> F4Vector:
    a = int(w[0]) | (int(w[1]) << 64)
    b = int(w[2]) | (int(w[3]) << 64)
    return F4Vector(n, a, b)


def code_from_generators(g: Sequence[F4Vector]) -> AdditiveCode:
    return AdditiveCode(g)


def graph_code(adj: np.ndarray) -> AdditiveCode:
    """The code C(G) spanned by the rows of adj + wI."""
    adj = check_adjacency(adj)
    return AdditiveCode(generator_matrix(adj), adjacency=adj)


def circulant_pair_code(p: CirculantPair) -> AdditiveCode:
    adj = block_matrix(p)
    return AdditiveCode(generator_matrix(adj), adjacency=adj, origin=p)


def single_circulant_code(s: SupportSet) -> AdditiveCode:
    """Graph code of a symmetric zero-diagonal circulant, the family of d'_max."""
    if not is_symmetric_support(s) or 1 in s.positions:
        raise InvalidPairError("single-circulant support must be symmetric without position 1")
    adj = circulant_from_support(s)
    return AdditiveCode(generator_matrix(adj), adjacency=adj, origin=s)


def contains(c: AdditiveCode, x: F4Vector) -> bool:
    if x.n != c.n:
        raise ValueError(f"length mismatch: {x.n} != {c.n}")
    return c._reduce(x.interleaved()) == 0


def is_self_orthogonal(c: AdditiveCode) -> bool:
    g = c.reduced
    a = _plane_matrix(g, "a", c.n)
    b = _plane_matrix(g, "b", c.n)
    form = (a @ b.T + b @ a.T) & 1
    return not form.any()


def is_self_dual(c: AdditiveCode) -> bool:
    return c.rank == c.n and is_self_orthogonal(c)


def _plane_matrix(vectors: Sequence[F4Vector], plane: str, n: int) -> np.ndarray:
    m = np.zeros((len(vectors), n), dtype=np.int64)
    for r, v in enumerate(vectors):
        bits = getattr(v, plane)
        while bits:
            low = bits & -bits
            m[r, low.bit_length() - 1] = 1
            bits ^= low
    return m


def automorphism_ok(c: AdditiveCode, perm: Sequence[int]) -> bool:
    """True iff the coordinate permutation maps every generator into the code."""
    if sorted(perm) != list(range(c.n)):
        return False
    return all(contains(c, g.permute(perm)) for g in c.reduced)


def weight_distribution(c: AdditiveCode, budget_log2: int | None = None, workers: int = 1) -> dict[int, int]:
    """Exact A_0..A_n by a Gray-code walk over all 2^rank codewords."""
    from .minweight import enumerate_histogram

    hist = enumerate_histogram(c, budget_log2=budget_log2, workers=workers)
    return {w: int(k) for w, k in enumerate(hist)}


def _generators_even(c: AdditiveCode) -> bool:
    return all(g.weight() % 2 == 0 for g in c.reduced)


def classify_type(c: AdditiveCode, method: str = "auto", budget_log2: int | None = None) -> TypeLabel:
    """Type II iff every codeword has even weight.

    ``auto`` uses the degree criterion for graph codes and enumeration
    otherwise.  ``enumerate`` walks the whole code and returns UNKNOWN above
    the budget.  ``parity`` checks generator weights only, which suffices
    because weight mod 2 is additive on a self-orthogonal code
    (wt(x+y) = wt(x) + wt(y) + x*y mod 2).
    """
    if not is_self_dual(c):
        raise ValueError("classify_type needs a self-dual code")
    if method == "auto":
        if c.adjacency is not None:
            return type_by_degrees(c.adjacency)
        method = "enumerate"
    if method == "parity":
        label = TypeLabel.TYPE_II if _generators_even(c) else TypeLabel.TYPE_I
    elif method == "enumerate":
        try:
            dist = weight_distribution(c, budget_log2=budget_log2)
        except BudgetExceeded:
            return TypeLabel.UNKNOWN
        even = all(k == 0 for w, k in dist.items() if w % 2)
        label = TypeLabel.TYPE_II if even else TypeLabel.TYPE_I
    else:
        raise ValueError(f"unknown method {method!r}")
    if label is TypeLabel.TYPE_II:
        assert c.n % 2 == 0, "Type II code of odd length"
    return label


def type_by_degrees(adj: np.ndarray) -> TypeLabel:
    adj = check_adjacency(adj)
    odd = (adj.sum(axis=1) % 2 == 1).all()
    return TypeLabel.TYPE_II if odd else TypeLabel.TYPE_I


def predict_type_prop1(p: CirculantPair) -> TypeLabel:
    """Type of C(A, B) read off the first rows of A and B."""
    nb = len(p.B)
    if p.n % 2 == 0:
        w = 1 if (p.n // 2 + 1) in p.A.positions else 0
        odd = (w + nb) % 2 == 1
    else:
        odd = nb % 2 == 1
    return TypeLabel.TYPE_II if odd else TypeLabel.TYPE_I


def _dual_basis(c: AdditiveCode) -> list[F4Vector]:
    """Basis of C* = {x : x * g = 0 for all g}, as a GF(2) kernel (test support)."""
    n = c.n
    rows = []
    for g in c.reduced:
        # x * g = sum a_x b_g + b_x a_g: a row over the interleaved coordinates of x
        v = F4Vector(n, g.b, g.a).interleaved()
        rows.append(v)
    return [F4Vector.from_interleaved(n, v) for v in _gf2_kernel(rows, 2 * n)]


def _gf2_kernel(rows: Iterable[int], ncols: int) -> list[int]:
    pivots: dict[int, int] = {}
    for v in rows:
        for p, r in pivots.items():
            if v >> p & 1:
                v ^= r
        if not v:
            continue
        p = (v & -v).bit_length() - 1
        for q in list(pivots):
            if pivots[q] >> p & 1:
                pivots[q] ^= v
        pivots[p] = v
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = 1 << f
        for p, r in pivots.items():
            if r >> f & 1:
                x |= 1 << p
        basis.append(x)
    return basis
