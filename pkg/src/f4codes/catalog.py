"""Reference circulant-pair codes and the [[n,0,d]] mapping."""

from __future__ import annotations

from dataclasses import dataclass, field

from .circulant import CirculantPair
from .code import AdditiveCode, TypeLabel, circulant_pair_code, is_self_dual


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    pair: CirculantPair
    claimed_d: int
    claimed_type: TypeLabel | None
    source: str
    claimed_counts: dict[int, int] = field(default_factory=dict)
    tier: str = "fast"

    @property
    def length(self) -> int:
        return self.pair.length

    def code(self) -> AdditiveCode:
        return circulant_pair_code(self.pair)

    def spec_line(self) -> str:
        return self.pair.spec_line(self.name)


def _tier(length: int) -> str:
    if length <= 28:
        return "fast"
    if length <= 40:
        return "full"
    return "long"


# (name, n, supp(r_A), supp(r_B), d)
_TABLE2 = [
    ("C14II", 7, [2, 7], [1, 2, 5], 6),
    ("C16I", 8, [2, 8], [1, 2, 3, 4, 5, 6], 6),
    ("C16II", 8, [2, 8], [1, 2, 5], 6),
    ("C18I", 9, [2, 9], [1, 2, 4, 5], 6),
    ("C18II", 9, [], [1, 2, 3, 4, 7], 6),
    ("C20I", 10, [2, 10], [1, 2, 3, 4, 5, 7, 8, 9], 8),
    ("C20II", 10, [3, 9], [1, 2, 3, 6, 7], 8),
    ("C22I", 11, [2, 3, 10, 11], [1, 2, 5, 6, 7, 9], 8),
    ("C22II", 11, [2, 11], [1, 2, 4, 7, 9], 8),
    ("C24I", 12, [2, 12], [1, 2, 3, 5, 6, 7, 9, 10], 8),
    ("C24II", 12, [], [1, 2, 4, 5, 6, 7, 9], 8),
    ("C26I", 13, [2, 13], [1, 2, 3, 4, 5, 7], 8),
    ("C26II", 13, [2, 13], [1, 2, 4, 6, 7], 8),
    ("C28I", 14, [2, 3, 4, 5, 8, 11, 12, 13, 14], [1, 2, 4, 7, 8, 10, 12], 10),
    ("C28II", 14, [2, 14], [1, 2, 4, 5, 7, 10, 12], 10),
    ("C30II", 15, [2, 3, 5, 7, 10, 12, 14, 15], [1, 2, 4, 5, 6, 7, 9, 10, 13], 12),
    ("C32I", 16, [2, 16], [1, 2, 4, 5, 6, 7, 8, 10], 10),
    ("C32II", 16, [2, 16], [1, 2, 3, 5, 7, 8, 10], 10),
    ("C34I", 17, [2, 17], [1, 2, 4, 6, 7, 8, 9, 11], 10),
    ("C34II", 17, [2, 17], [1, 2, 3, 4, 6, 7, 9], 10),
    ("C36II", 18, [2, 4, 5, 6, 14, 15, 16, 18], [1, 2, 4, 5, 7, 8, 9, 10, 11, 14, 15], 12),
    ("C38II", 19, [2, 19], [1, 2, 4, 5, 6, 8, 11, 13, 14], 12),
    ("C40I", 20, [2, 3, 19, 20], [1, 2, 4, 6, 8, 9, 10, 15], 12),
    ("C40II", 20, [2, 20], [1, 2, 4, 5, 6, 8, 9, 10, 13], 12),
]

_NEW = [
    ("C66", 33,
     [2, 3, 4, 5, 6, 8, 12, 13, 14, 16, 17, 18, 19, 21, 22, 23, 27, 29, 30, 31, 32, 33],
     [3, 4, 5, 8, 10, 11, 12, 16, 20, 21, 25, 26, 28, 29, 30, 33],
     17, {17: 3168, 18: 36003, 19: 273174, 20: 1924626}),
    ("C78", 39,
     [2, 4, 6, 8, 9, 10, 11, 13, 15, 19, 22, 26, 28, 30, 31, 32, 33, 35, 37, 39],
     [2, 4, 6, 8, 9, 15, 17, 18, 19, 21, 25, 26, 27, 28, 29, 30, 32, 33, 36, 37],
     19, {19: 2808, 20: 24336}),
    ("C94", 47,
     [2, 6, 7, 10, 11, 12, 16, 18, 19, 20, 29, 30, 31, 33, 37, 38, 39, 42, 43, 47],
     [2, 4, 9, 12, 13, 14, 16, 17, 21, 22, 24, 25, 26, 30, 31, 34, 35, 37, 38, 39, 40, 46],
     21, {}),
]

# length -> (d_max over C(A,B), d'_max over single circulants, d_max(n,0) as text)
TABLE1 = {
    14: (6, 6, "6"), 16: (6, 6, "6"), 18: (6, 6, "8"), 20: (8, 8, "8"),
    22: (8, 8, "8"), 24: (8, 8, "8-10"), 26: (8, 8, "8-10"), 28: (10, 10, "10"),
    30: (12, 12, "12"), 32: (10, 10, "10-12"), 34: (10, 10, "10-12"),
    36: (12, 11, "12-14"), 38: (12, 12, "12-14"), 40: (12, 12, "12-14"),
}

# largest minimum weight among Type I codes C(A, B) found by the exhaustive search
TYPE_I_MAXIMA = {14: 5, 30: 9, 36: 11, 38: 11}

# literature upper bounds on d_max(n, 0) for the new lengths; recorded, not verified
UPPER_BOUNDS = {66: 24, 78: 28, 94: 32}


def _build() -> dict[str, CatalogEntry]:
    out = {}
    for name, n, a, b, d in _TABLE2:
        label = TypeLabel.TYPE_II if name.endswith("II") else TypeLabel.TYPE_I
        out[name] = CatalogEntry(name, CirculantPair(n, a, b), d, label, "exhaustive", tier=_tier(2 * n))
    for name, n, a, b, d, counts in _NEW:
        out[name] = CatalogEntry(name, CirculantPair(n, a, b), d, None, "heuristic", dict(counts), "long")
    return out


CATALOG: dict[str, CatalogEntry] = _build()


def catalog_lookup(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown code {name!r}; available: {', '.join(CATALOG)}") from None


def entries(tier: str | None = None) -> list[CatalogEntry]:
    order = {"fast": 0, "full": 1, "long": 2}
    if tier is None:
        return list(CATALOG.values())
    return [e for e in CATALOG.values() if order[e.tier] <= order[tier]]


@dataclass(frozen=True)
class QuantumParams:
    n: int
    k: int
    d: int

    def __str__(self) -> str:
        return f"[[{self.n},{self.k},{self.d}]]"


def quantum_params(c: AdditiveCode, cert) -> QuantumParams:
    """[[n, 0, d]] for a self-dual code with a checked exact minimum-weight certificate."""
    from .minweight import CertificateError, check_certificate

    if not is_self_dual(c):
        raise ValueError("only a self-dual code yields an [[n,0,d]] code")
    if cert.kind != "exact":
        raise CertificateError("an exact minimum-weight certificate is required")
    check_certificate(c, cert)
    return QuantumParams(c.n, 0, cert.claimed_d)
