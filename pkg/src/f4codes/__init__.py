"""Self-dual additive codes over GF(4) built from pairs of circulant matrices."""

from __future__ import annotations

from .catalog import CATALOG, CatalogEntry, QuantumParams, catalog_lookup, quantum_params
from .circulant import CirculantPair, CodeSpecError, InvalidPairError, SupportSet, parse_spec_line
from .code import (
    AdditiveCode,
    BudgetExceeded,
    TypeLabel,
    circulant_pair_code,
    classify_type,
    contains,
    graph_code,
    is_self_dual,
    is_self_orthogonal,
    predict_type_prop1,
    single_circulant_code,
    type_by_degrees,
)
from .gf4 import F4, F4Vector, trace_inner_product, weight
from .minweight import (
    CountReport,
    WeightCertificate,
    check_certificate,
    count_words_of_weight,
    find_word_of_weight_at_most,
    min_weight,
    min_weight_enumerate,
    min_weight_windowed,
    verify_no_word_below,
)
from .search import SearchConfig, SearchRecord, exhaustive_search, random_search, single_circulant_search

__all__ = [name for name in dir() if not name.startswith("_")]
