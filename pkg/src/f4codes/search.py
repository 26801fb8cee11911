"""Exhaustive and randomized searches for circulant codes of large minimum weight.

Pair candidates are numbered by ``index = (a_bits << n) | b_index`` where
``a_bits`` selects mirror pairs of A and ``b_index`` walks r_B in Gray order.
Single-circulant candidates are numbered by ``a_bits`` alone.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circulant import (
    CirculantPair,
    SupportSet,
    parse_spec_line,
    symmetric_free_positions,
    symmetric_support_from_bits,
)
from .code import TypeLabel, circulant_pair_code, single_circulant_code, type_by_degrees
from .code import predict_type_prop1
from . import minweight as mw

WITNESS_CAP = 64
DEFAULT_SPACE_CAP_LOG2 = 34


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass
class SearchConfig:
    length: int                       # 2n for pairs, n for single circulants
    mode: str = "exhaustive"          # "exhaustive" | "random"
    type_filter: str = "any"          # "any" | "TypeI" | "TypeII"
    seed: int = 0
    d_min: int = 0                    # candidates below this are rejected outright
    budget: int | None = None         # candidates (exhaustive) or moves (random)
    checkpoint_interval: int = 10_000
    workers: int = 1
    shard: tuple[int, int] = (0, 1)   # (index, count)
    reduce_equivalent: bool = False
    start: CirculantPair | None = None
    restart_prob: float = 0.1
    space_cap_log2: int = DEFAULT_SPACE_CAP_LOG2

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.type_filter not in ("any", "TypeI", "TypeII"):
            raise ValueError(f"unknown type filter {self.type_filter!r}")
        if self.length < 2:
            raise ValueError("length must be at least 2")


@dataclass
class SearchRecord:
    best_d: int = -1
    witnesses: list = field(default_factory=list)          # CirculantPair or SupportSet
    witness_index: list[int] = field(default_factory=list)
    candidates_examined: int = 0
    cursor: int = 0
    per_type: dict[str, int] = field(default_factory=dict)
    done: bool = False
    kind: str = "pair"
    n: int = 0
    rng_state: dict | None = None
    incumbent: list[int] | None = None    # random mode: (a_bits, b_mask)

    def progress_line(self) -> str:
        return f"examined={self.candidates_examined} best_d={self.best_d} cursor={self.cursor:x}"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "best_d": self.best_d,
            "candidates_examined": self.candidates_examined,
            "cursor": f"{self.cursor:x}",
            "done": self.done,
            "per_type": dict(self.per_type),
            "witnesses": [_render(w) for w in self.witnesses],
            "witness_index": list(self.witness_index),
            "rng_state": self.rng_state,
            "incumbent": self.incumbent,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "SearchRecord":
        kind = d.get("kind", "pair")
        n = int(d["n"])
        return cls(
            best_d=int(d["best_d"]),
            witnesses=[_parse_witness(kind, n, s) for s in d.get("witnesses", [])],
            witness_index=[int(i) for i in d.get("witness_index", [])],
            candidates_examined=int(d["candidates_examined"]),
            cursor=int(d["cursor"], 16),
            per_type={k: int(v) for k, v in d.get("per_type", {}).items()},
            done=bool(d.get("done", False)),
            kind=kind,
            n=n,
            rng_state=d.get("rng_state"),
            incumbent=d.get("incumbent"),
        )

    def summary(self) -> str:
        lines = [f"best_d={self.best_d} examined={self.candidates_examined} witnesses={len(self.witnesses)}"]
        for t, d in sorted(self.per_type.items()):
            lines.append(f"{t}: best_d={d}")
        for i, w in enumerate(self.witnesses):
            lines.append(_render(w, f"w{i + 1}"))
        return "\n".join(lines)


def _render(w, name: str | None = None) -> str:
    if isinstance(w, CirculantPair):
        return w.spec_line(name)
    text = f"n={w.n} A={w.render()}"
    return f"name={name} {text}" if name else text


def _parse_witness(kind: str, n: int, text: str):
    if kind == "pair":
        return parse_spec_line(text)[1]
    fields = dict(tok.split("=", 1) for tok in text.split())
    body = fields["A"]
    return SupportSet(n, [] if body == "-" else [int(x) for x in body.split(",")])


# -- candidate numbering ------------------------------------------------------

def _gray(i: int) -> int:
    return i ^ (i >> 1)


def pair_of_index(n: int, index: int) -> CirculantPair:
    a_bits, b_idx = index >> n, index & ((1 << n) - 1)
    A = symmetric_support_from_bits(n, a_bits)
    return CirculantPair(n, A, SupportSet.from_mask(n, _gray(b_idx)))


def _pair_of_bits(n: int, a_bits: int, b_mask: int) -> CirculantPair:
    return CirculantPair(n, symmetric_support_from_bits(n, a_bits), SupportSet.from_mask(n, b_mask))


def _units(n: int) -> list[int]:
    return [a for a in range(1, n) if math.gcd(a, n) == 1] if n > 1 else [1]


def is_canonical_pair(p: CirculantPair) -> bool:
    """Lexicographically least among its images under j -> a*j and shifts of supp B."""
    n = p.n
    key = (p.A.offsets, p.B.offsets)
    for a in _units(n):
        A2 = tuple(sorted((a * o) % n for o in p.A.offsets))
        Bd = [(a * o) % n for o in p.B.offsets]
        if A2 > key[0]:
            continue
        for s in range(n):
            B2 = tuple(sorted((o + s) % n for o in Bd))
            if (A2, B2) < key:
                return False
    return True


# -- evaluation ------------------------------------------------------------------

def _evaluate(c, threshold: int) -> int | None:
    """Exact minimum weight, or None once a word lighter than threshold shows up."""
    eng = mw._Engine(c.n, c.basis_words(), mw.plan_windows(c, verify=False))
    out = mw._windowed(eng, stop_at=threshold - 1)
    if out.best_w < threshold:
        return None
    return int(out.best_w)


class _Tracker:
    """Per-type bests and the first WITNESS_CAP witnesses by candidate index."""

    def __init__(self, d_min: int):
        self.d_min = d_min
        self.best: dict[str, int] = {}
        self.wit: dict[str, list[tuple[int, object]]] = {}

    def threshold(self, label: str) -> int:
        b = self.best.get(label, -1)
        if b < 0:
            return self.d_min
        full = len(self.wit.get(label, [])) >= WITNESS_CAP
        return max(self.d_min, b + 1 if full else b)

    def offer(self, label: str, d: int, index: int, cand) -> None:
        b = self.best.get(label, -1)
        if d > b:
            self.best[label] = d
            self.wit[label] = [(index, cand)]
        elif d == b and len(self.wit[label]) < WITNESS_CAP:
            self.wit[label].append((index, cand))

    def merge(self, other: "_Tracker") -> None:
        for label, d in other.best.items():
            b = self.best.get(label, -1)
            if d > b:
                self.best[label] = d
                self.wit[label] = list(other.wit[label])
            elif d == b:
                self.wit[label] = sorted(self.wit[label] + other.wit[label], key=lambda t: t[0])
            del self.wit[label][WITNESS_CAP:]

    def fill(self, rec: SearchRecord) -> None:
        rec.per_type = dict(self.best)
        if not self.best:
            rec.best_d, rec.witnesses, rec.witness_index = -1, [], []
            return
        top = max(self.best.values())
        pool = [t for label, d in self.best.items() if d == top for t in self.wit[label]]
        pool = sorted(pool, key=lambda t: t[0])[:WITNESS_CAP]
        rec.best_d = top
        rec.witness_index = [i for i, _ in pool]
        rec.witnesses = [c for _, c in pool]

    @classmethod
    def from_record(cls, rec: SearchRecord, d_min: int, label_of) -> "_Tracker":
        t = cls(d_min)
        for label, d in rec.per_type.items():
            t.best[label] = d
            t.wit[label] = []
        for i, w in zip(rec.witness_index, rec.witnesses):
            t.wit.setdefault(label_of(w), []).append((i, w))
        return t


def _type_key(label: TypeLabel) -> str:
    return label.value


# -- exhaustive -------------------------------------------------------------------

def _space(cfg: SearchConfig, single: bool) -> tuple[int, int]:
    """(n, log2 of the candidate count)."""
    if single:
        n = cfg.length
        return n, len(symmetric_free_positions(n))
    if cfg.length % 2:
        raise ValueError("a circulant-pair code has even length")
    n = cfg.length // 2
    return n, len(symmetric_free_positions(n)) + n


def _candidate(single: bool, n: int, index: int):
    if single:
        s = symmetric_support_from_bits(n, index)
        return s, single_circulant_code(s)
    p = pair_of_index(n, index)
    return p, circulant_pair_code(p)


def _label(single: bool, cand, code) -> str:
    if single:
        return _type_key(type_by_degrees(code.adjacency))
    return _type_key(predict_type_prop1(cand))


def _scan(cfg: SearchConfig, single: bool, lo: int, hi: int, tracker: _Tracker, rec: SearchRecord,
          on_checkpoint: Callable[[SearchRecord], None] | None) -> None:
    n = rec.n
    i = max(lo, rec.cursor)
    since = 0
    while i < hi:
        rec.candidates_examined += 1
        since += 1
        cand, code = _candidate(single, n, i)
        keep = single or not cfg.reduce_equivalent or is_canonical_pair(cand)
        if keep:
            label = _label(single, cand, code)
            if cfg.type_filter in ("any", label):
                d = _evaluate(code, tracker.threshold(label))
                if d is not None:
                    tracker.offer(label, d, i, cand)
        i += 1
        rec.cursor = i
        if on_checkpoint is not None and since >= cfg.checkpoint_interval:
            since = 0
            tracker.fill(rec)
            on_checkpoint(rec)
    rec.cursor = hi


def _exhaustive(cfg: SearchConfig, single: bool, resume: SearchRecord | None,
                on_checkpoint: Callable[[SearchRecord], None] | None) -> SearchRecord:
    n, bits = _space(cfg, single)
    if bits > cfg.space_cap_log2:
        raise SearchSpaceTooLarge(f"2^{bits} candidates exceed the cap 2^{cfg.space_cap_log2}")
    total = 1 << bits
    if cfg.budget is not None:
        total = min(total, cfg.budget)
    k, count = cfg.shard
    if not 0 <= k < count:
        raise ValueError("shard index out of range")
    lo, hi = total * k // count, total * (k + 1) // count
    kind = "single" if single else "pair"

    def label_of(w):
        if single:
            return _type_key(type_by_degrees(single_circulant_code(w).adjacency))
        return _type_key(predict_type_prop1(w))

    if cfg.workers > 1 and resume is None:
        parts = [SearchConfig(**{**cfg.__dict__, "workers": 1, "shard": (k * cfg.workers + j, count * cfg.workers)})
                 for j in range(cfg.workers)]
        with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
            recs = list(ex.map(lambda c: _exhaustive(c, single, None, None), parts))
        return merge_records(recs, cfg.d_min, label_of)

    rec = resume if resume is not None else SearchRecord(kind=kind, n=n, cursor=lo)
    tracker = _Tracker.from_record(rec, cfg.d_min, label_of) if resume is not None else _Tracker(cfg.d_min)
    _scan(cfg, single, lo, hi, tracker, rec, on_checkpoint)
    tracker.fill(rec)
    rec.done = True
    if on_checkpoint is not None:
        on_checkpoint(rec)
    return rec


def merge_records(recs: list[SearchRecord], d_min: int = 0, label_of=None) -> SearchRecord:
    """Combine shard results; the outcome does not depend on the split."""
    if not recs:
        raise ValueError("nothing to merge")
    if label_of is None:
        label_of = lambda w: _type_key(predict_type_prop1(w))  # noqa: E731
    tracker = _Tracker(d_min)
    for r in recs:
        tracker.merge(_Tracker.from_record(r, d_min, label_of))
    out = SearchRecord(kind=recs[0].kind, n=recs[0].n)
    out.candidates_examined = sum(r.candidates_examined for r in recs)
    out.cursor = max(r.cursor for r in recs)
    out.done = all(r.done for r in recs)
    tracker.fill(out)
    return out


def exhaustive_search(cfg: SearchConfig, resume: SearchRecord | None = None,
                      on_checkpoint: Callable[[SearchRecord], None] | None = None) -> SearchRecord:
    """Best minimum weight over all C(A, B) of length cfg.length (A symmetric)."""
    if cfg.mode != "exhaustive":
        raise ValueError("exhaustive_search needs mode='exhaustive'")
    return _exhaustive(cfg, False, resume, on_checkpoint)


def single_circulant_search(cfg: SearchConfig, resume: SearchRecord | None = None,
                            on_checkpoint: Callable[[SearchRecord], None] | None = None) -> SearchRecord:
    """Best minimum weight over graph codes of symmetric zero-diagonal circulants of order cfg.length."""
    if cfg.mode != "exhaustive":
        raise ValueError("single_circulant_search supports mode='exhaustive' only")
    return _exhaustive(cfg, True, resume, on_checkpoint)


# -- random -------------------------------------------------------------------------

def _bits_of_pair(p: CirculantPair) -> tuple[int, int]:
    free = symmetric_free_positions(p.n)
    a_bits = sum(1 << i for i, j in enumerate(free) if j in p.A.positions)
    return a_bits, p.B.mask()


def random_search(cfg: SearchConfig, resume: SearchRecord | None = None,
                  on_checkpoint: Callable[[SearchRecord], None] | None = None) -> SearchRecord:
    """Neighbourhood walk with uniform restarts; reproducible from (seed, budget).

    The start pair (cfg.start, or a uniform draw) is always evaluated;
    ``budget`` counts the moves after it.
    """
    if cfg.mode != "random":
        raise ValueError("random_search needs mode='random'")
    if cfg.length % 2:
        raise ValueError("a circulant-pair code has even length")
    n = cfg.length // 2
    na = len(symmetric_free_positions(n))
    moves = cfg.budget if cfg.budget is not None else 10_000
    rng = np.random.Generator(np.random.PCG64(cfg.seed))

    def allowed(p):
        return cfg.type_filter in ("any", _type_key(predict_type_prop1(p)))

    if resume is not None:
        rec = resume
        rng.bit_generator.state = rec.rng_state
        cur = tuple(rec.incumbent)
    else:
        rec = SearchRecord(kind="pair", n=n)
        if cfg.start is not None:
            if cfg.start.n != n:
                raise ValueError("start pair has the wrong length")
            cur = _bits_of_pair(cfg.start)
        else:
            cur = (int(rng.integers(0, 1 << na)), int(rng.integers(0, 1 << n)))
        p = _pair_of_bits(n, *cur)
        rec.candidates_examined = 1
        if allowed(p):
            d = _evaluate(circulant_pair_code(p), cfg.d_min)
            if d is not None:
                rec.best_d, rec.witnesses, rec.witness_index = d, [p], [0]
        rec.incumbent = list(cur)
        rec.rng_state = rng.bit_generator.state

    since = 0
    while rec.cursor < moves:
        step = rec.cursor + 1
        if rng.random() < cfg.restart_prob:
            nxt = (int(rng.integers(0, 1 << na)), int(rng.integers(0, 1 << n)))
        else:
            m = int(rng.integers(0, na + n))
            nxt = (cur[0] ^ (1 << m), cur[1]) if m < na else (cur[0], cur[1] ^ (1 << (m - na)))
        p = _pair_of_bits(n, *nxt)
        rec.candidates_examined += 1
        if allowed(p):
            full = len(rec.witnesses) >= WITNESS_CAP
            thr = max(cfg.d_min, rec.best_d + 1 if full else rec.best_d)
            d = _evaluate(circulant_pair_code(p), thr)
            if d is not None:
                if d > rec.best_d:
                    rec.best_d, rec.witnesses, rec.witness_index = d, [], []
                if p not in rec.witnesses and len(rec.witnesses) < WITNESS_CAP:
                    rec.witnesses.append(p)
                    rec.witness_index.append(step)
                cur = nxt
        rec.cursor = step
        rec.incumbent = list(cur)
        since += 1
        if on_checkpoint is not None and since >= cfg.checkpoint_interval:
            since = 0
            rec.rng_state = rng.bit_generator.state
            on_checkpoint(rec)
    rec.rng_state = rng.bit_generator.state
    rec.done = True
    if on_checkpoint is not None:
        on_checkpoint(rec)
    return rec


def run_search(cfg: SearchConfig, single: bool = False, resume: SearchRecord | None = None,
               on_checkpoint: Callable[[SearchRecord], None] | None = None) -> SearchRecord:
    if single:
        return single_circulant_search(cfg, resume, on_checkpoint)
    if cfg.mode == "random":
        return random_search(cfg, resume, on_checkpoint)
    return exhaustive_search(cfg, resume, on_checkpoint)
