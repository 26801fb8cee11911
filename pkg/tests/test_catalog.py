from __future__ import annotations

import copy

import numpy as np
import pytest

from f4codes import catalog as cat
from f4codes import minweight as mw
from f4codes.circulant import CirculantPair, parse_spec_line
from f4codes.code import TypeLabel, code_from_generators, graph_code, is_self_dual, predict_type_prop1
from f4codes.gf4 import F4Vector


def test_lookup_examples():
    e = cat.catalog_lookup("C14II")
    assert e.pair == CirculantPair(7, [2, 7], [1, 2, 5])
    assert (e.claimed_d, e.claimed_type, e.length) == (6, TypeLabel.TYPE_II, 14)
    assert cat.catalog_lookup("C66").claimed_counts[17] == 3168


def test_unknown_name_lists_available():
    with pytest.raises(KeyError) as info:
        cat.catalog_lookup("C12")
    assert "C14II" in str(info.value)


def test_entries_are_cumulative_by_tier():
    fast, full, every = cat.entries("fast"), cat.entries("full"), cat.entries("long")
    assert set(e.name for e in fast) < set(e.name for e in full) < set(e.name for e in every)
    assert every == cat.entries()
    assert all(e.length <= 28 for e in fast)


@pytest.mark.parametrize("e", cat.entries(), ids=lambda e: e.name)
def test_entries_are_well_formed(e):
    c = e.code()
    assert is_self_dual(c)
    if e.claimed_type is not None:
        assert predict_type_prop1(e.pair) == e.claimed_type
    assert e.claimed_d <= e.length
    assert parse_spec_line(e.spec_line()) == (e.name, e.pair)


def test_known_upper_bounds_respected():
    for e in cat.entries():
        if e.length in cat.UPPER_BOUNDS:
            assert e.claimed_d <= cat.UPPER_BOUNDS[e.length]


def test_quantum_params_trivial_code():
    c = graph_code(np.zeros((1, 1), dtype=np.uint8))
    q = cat.quantum_params(c, mw.min_weight(c))
    assert str(q) == "[[1,0,1]]" and (q.n, q.k, q.d) == (1, 0, 1)


def test_quantum_params_catalog_code():
    c = cat.catalog_lookup("C66").code()
    assert str(cat.quantum_params(c, mw.min_weight_windowed(c))) == "[[66,0,17]]"


def test_quantum_params_refuses_tampered_certificate():
    c = cat.catalog_lookup("C20II").code()
    cert = mw.min_weight(c)
    bad = copy.deepcopy(cert)
    bad.claimed_d += 2
    with pytest.raises(mw.CertificateError):
        cat.quantum_params(c, bad)


def test_quantum_params_refuses_lower_bound_only():
    c = cat.catalog_lookup("C20II").code()
    ok, cert = mw.verify_no_word_below(c, 4)
    assert ok and cert.kind != "exact"
    with pytest.raises(mw.CertificateError):
        cat.quantum_params(c, cert)


def test_quantum_params_refuses_non_self_dual():
    c = code_from_generators([F4Vector.from_string("1w")])
    cert = mw.min_weight_enumerate(c)
    with pytest.raises(ValueError):
        cat.quantum_params(c, cert)
