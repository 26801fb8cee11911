from __future__ import annotations

import copy

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from f4codes import minweight as mw
from f4codes.catalog import catalog_lookup
from f4codes.circulant import CirculantPair, SupportSet, block_matrix, symmetric_free_positions, symmetric_support_from_bits
from f4codes.code import (
    AdditiveCode,
    BudgetExceeded,
    circulant_pair_code,
    code_from_generators,
    contains,
    graph_code,
    single_circulant_code,
)
from f4codes.gf4 import F4Vector


@st.composite
def pairs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.integers(0, (1 << len(symmetric_free_positions(n))) - 1))
    B = draw(st.sets(st.integers(1, n)))
    return CirculantPair(n, symmetric_support_from_bits(n, bits), B)


@st.composite
def adjacency(draw, max_n=18):
    n = draw(st.integers(1, max_n))
    bits = draw(st.lists(st.integers(0, 1), min_size=n * n, max_size=n * n))
    upper = np.triu(np.array(bits, dtype=np.uint8).reshape(n, n), 1)
    return upper + upper.T


def code(name):
    return catalog_lookup(name).code()


# -- full enumeration ---------------------------------------------------------

def test_enumeration_examples():
    assert mw.min_weight_enumerate(code("C14II")).claimed_d == 6
    assert mw.min_weight_enumerate(graph_code(np.zeros((5, 5), dtype=np.uint8))).claimed_d == 1
    assert mw.min_weight_enumerate(code("C20II")).claimed_d == 8


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        mw.min_weight_enumerate(code("C20II"), budget_log2=12)


def test_budget_environment_override(monkeypatch):
    monkeypatch.setenv("F4CODES_BUDGET_LOG2", "8")
    with pytest.raises(BudgetExceeded):
        mw.min_weight_enumerate(code("C14II"))


@given(pairs(max_n=9))
def test_enumeration_matches_oracle(p):
    c = circulant_pair_code(p)
    gens = oracles.graph_generators(block_matrix(p).tolist())
    cert = mw.min_weight_enumerate(c)
    assert cert.claimed_d == oracles.min_weight(gens)
    assert contains(c, cert.witness) and cert.witness.weight() == cert.claimed_d
    assert mw.enumerate_histogram(c).tolist() == oracles.weight_histogram(gens).tolist()


# -- windowed engine ------------------------------------------------------------

def test_windowed_examples():
    assert mw.min_weight_windowed(code("C36II")).claimed_d == 12
    cert = mw.min_weight_windowed(code("C66"))
    assert cert.claimed_d == 17
    mw.check_certificate(code("C66"), cert)


@pytest.mark.long
def test_windowed_c94():
    c = code("C94")
    cert = mw.min_weight_windowed(c)
    assert cert.claimed_d == 21
    mw.check_certificate(c, cert)


@given(pairs(max_n=12))
def test_windowed_matches_enumeration_on_pairs(p):
    c = circulant_pair_code(p)
    a = mw.min_weight_windowed(c)
    assert a.claimed_d == mw.min_weight_enumerate(c).claimed_d
    assert mw.check_certificate(c, a)


@given(adjacency())
def test_windowed_matches_enumeration_on_graph_codes(adj):
    c = graph_code(adj)
    a = mw.min_weight_windowed(c)
    assert a.claimed_d == mw.min_weight_enumerate(c).claimed_d
    assert mw.check_certificate(c, a)


@given(st.integers(2, 22), st.data())
def test_windowed_matches_enumeration_on_single_circulants(n, data):
    bits = data.draw(st.integers(0, (1 << len(symmetric_free_positions(n))) - 1))
    c = single_circulant_code(symmetric_support_from_bits(n, bits))
    a = mw.min_weight_windowed(c)
    assert a.claimed_d == mw.min_weight_enumerate(c).claimed_d
    assert mw.check_certificate(c, a)


def test_windowed_on_non_self_dual_code():
    rows = [F4Vector.from_string(s) for s in ("1w0000", "0011w0", "w0001W", "0W1100")]
    c = code_from_generators(rows)
    assert mw.min_weight_windowed(c).claimed_d == mw.min_weight_enumerate(c).claimed_d


@given(pairs(min_n=3, max_n=12))
def test_bounds_are_monotone(p):
    cert = mw.min_weight_windowed(circulant_pair_code(p))
    bounds = [ps["lower_bound"] for ps in cert.passes if ps["lower_bound"] is not None]
    assert bounds == sorted(bounds)
    radii: dict[int, int] = {}
    for ps in cert.passes:
        assert ps["r"] >= radii.get(ps["form_index"], -1)
        radii[ps["form_index"]] = ps["r"]


def test_pair_plan_uses_symmetric_windows():
    c = code("C66")
    plan = mw.plan_windows(c)
    assert len(plan) == 2 and plan[1].base == 0
    assert set(plan[0].coords) | set(plan[1].coords) == set(range(66))


def test_long_codes_rejected():
    adj = np.zeros((130, 130), dtype=np.uint8)
    with pytest.raises(ValueError):
        mw.min_weight_windowed(graph_code(adj))


# -- verification and witnesses ---------------------------------------------------

def test_verify_examples():
    ok, cert = mw.verify_no_word_below(code("C66"), 17)
    assert ok and cert.lower_bound >= 17
    mw.check_certificate(code("C66"), cert)
    ok, cert = mw.verify_no_word_below(code("C14II"), 7)
    assert not ok and cert.kind == "counterexample" and cert.witness.weight() == 6
    mw.check_certificate(code("C14II"), cert)
    ok, cert = mw.verify_no_word_below(code("C20I"), 1)
    assert ok and cert.passes == []
    mw.check_certificate(code("C20I"), cert)


@given(pairs(min_n=2, max_n=11), st.integers(1, 12))
def test_verify_agrees_with_true_distance(p, d):
    c = circulant_pair_code(p)
    true_d = mw.min_weight_enumerate(c).claimed_d
    ok, cert = mw.verify_no_word_below(c, d)
    assert ok == (true_d >= d)
    mw.check_certificate(c, cert)


def test_find_word_examples():
    for name, d in (("C66", 17), ("C78", 19)):
        c = code(name)
        w = mw.find_word_of_weight_at_most(c, d)
        assert w is not None and contains(c, w) and w.weight() <= d
    assert mw.find_word_of_weight_at_most(code("C14II"), 5) is None
    w = mw.find_word_of_weight_at_most(code("C14II"), 6)
    assert w.weight() == 6


# -- counting -------------------------------------------------------------------

def test_count_examples():
    c66 = code("C66")
    assert mw.count_words_of_weight(c66, 17).count == 3168
    assert mw.count_words_of_weight(code("C14II"), 0).count == 1
    with pytest.raises(ValueError):
        mw.count_words_of_weight(code("C14II"), 15)


@pytest.mark.long
def test_count_c78():
    c78 = code("C78")
    r = mw.count_words_up_to(c78, 20)
    assert (r[19].count, r[20].count) == (2808, 24336)


@given(pairs(min_n=2, max_n=10), st.integers(0, 20))
def test_windowed_counts_match_enumeration(p, wmax):
    c = circulant_pair_code(p)
    wmax = min(wmax, c.n)
    full = mw.enumerate_histogram(c)
    got = mw.count_words_up_to(c, wmax, budget_log2=0)
    assert all(got[w].exhaustive for w in got)
    assert [got[w].count for w in range(wmax + 1)] == full[: wmax + 1].tolist()


@given(adjacency(max_n=14))
def test_counts_sum_to_code_size(adj):
    c = graph_code(adj)
    got = mw.count_words_up_to(c, c.n, budget_log2=0)
    assert sum(r.count for r in got.values()) == 2 ** c.rank
    assert [got[w].count for w in range(c.n + 1)] == mw.enumerate_histogram(c).tolist()


def test_counting_under_work_cap_is_partial():
    c = code("C40II")
    r = mw.count_words_up_to(c, 14, work_cap=1e3)
    assert not r[14].exhaustive
    full = mw.count_words_up_to(c, 14)
    assert r[12].count <= full[12].count and full[14].exhaustive


# -- certificates ---------------------------------------------------------------

def test_certificate_json_round_trip():
    c = code("C28I")
    cert = mw.min_weight_windowed(c)
    back = mw.WeightCertificate.from_dict(__import__("json").loads(cert.to_json()))
    assert back == cert
    assert list(cert.to_dict())[:4] == ["claimed_d", "kind", "witness", "method"]
    mw.check_certificate(c, back)


def _tamper(cert, fn):
    bad = copy.deepcopy(cert)
    fn(bad)
    return bad


@pytest.mark.parametrize("how", [
    "raise_claim", "wrong_witness", "drop_pass", "inflate_contribution", "wrong_rank",
    "fake_automorphism", "overlap_windows", "bad_full_enumeration",
])
def test_checker_rejects_tampering(how):
    c = code("C28II")
    cert = mw.min_weight_windowed(c)
    mw.check_certificate(c, cert)
    if how == "raise_claim":
        bad = _tamper(cert, lambda x: setattr(x, "claimed_d", x.claimed_d + 1))
    elif how == "wrong_witness":
        bad = _tamper(cert, lambda x: setattr(x, "witness", x.witness + F4Vector.from_elements([1] + [0] * 27)))
    elif how == "drop_pass":
        bad = _tamper(cert, lambda x: x.passes.pop())
    elif how == "inflate_contribution":
        bad = _tamper(cert, lambda x: x.passes[-1].update(contribution=x.passes[-1]["r"] + 5))
    elif how == "wrong_rank":
        bad = _tamper(cert, lambda x: x.passes[0].update(window_rank=x.passes[0]["window_rank"] - 1))
    elif how == "fake_automorphism":
        def fake(x):
            for ps in x.passes:
                if "automorphism" in ps:
                    perm = ps["automorphism"]
                    perm[0], perm[1] = perm[1], perm[0]
        bad = _tamper(cert, fake)
    elif how == "overlap_windows":
        def overlap(x):
            for ps in x.passes:
                if ps["form_index"] == 1:
                    ps["window"] = list(x.passes[0]["window"])
                    ps.pop("automorphism", None)
                    ps.pop("derived_from", None)
                    ps.pop("rotation", None)
        bad = _tamper(cert, overlap)
    else:
        bad = mw.min_weight_enumerate(code("C14II"))
        bad.passes[0]["words"] -= 1
        c = code("C14II")
    with pytest.raises(mw.CertificateError):
        mw.check_certificate(c, bad)


def test_checker_rejects_witness_outside_code():
    c = code("C14II")
    cert = mw.min_weight_enumerate(c)
    other = mw.min_weight_enumerate(code("C16II"))
    cert.witness = F4Vector(14, other.witness.a & ((1 << 14) - 1), other.witness.b & ((1 << 14) - 1))
    with pytest.raises(mw.CertificateError):
        mw.check_certificate(c, cert)


# -- determinism ------------------------------------------------------------------

def test_results_independent_of_worker_count():
    c = code("C40I")
    ref = mw.min_weight_windowed(c, workers=1).to_dict()
    for workers in (2, 4, 8):
        assert mw.min_weight_windowed(c, workers=workers).to_dict() == ref
    c24 = code("C24I")
    h = mw.enumerate_histogram(c24, workers=1).tolist()
    assert mw.enumerate_histogram(c24, workers=3).tolist() == h
    a = mw.count_words_up_to(c, 14, workers=1)
    assert mw.count_words_up_to(c, 14, workers=5) == a
