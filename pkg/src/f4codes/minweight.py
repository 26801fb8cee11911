"""Minimum weight, low-weight counting and certificates.

Small codes are walked completely in Gray-code order.  Larger ones use
disjoint coordinate windows: for each window the code is row-reduced so the
window bits carry the pivots, and all codewords whose restriction to the
window has at most ``r`` nonzero positions are enumerated.  A word not seen
after window j reached radius r_j has at least r_j + 1 nonzero positions
there, so any unseen word weighs at least sum_j (r_j + 1).

Windows may be declared images of an earlier window under a code
automorphism (their enumeration is then implied), and a window on which an
automorphism acts as a cycle is enumerated one rotation orbit of supports
at a time.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels as K
from .circulant import CirculantPair, SupportSet
from .code import (
    AdditiveCode,
    BudgetExceeded,
    automorphism_ok,
    contains,
    enumeration_budget_log2,
    vector_of_words,
)
from .gf4 import F4Vector

KERNEL_CAP = 12        # largest window kernel dimension worth enumerating
MAX_WINDOW = 64
NCHUNKS = 64
SMALL_WORK = 4_000_000  # levels cheaper than this run as one chunk
INF = 1 << 60


@dataclass
class Window:
    coords: tuple[int, ...]
    base: int | None = None                # window this one is the image of
    perm: tuple[int, ...] | None = None    # automorphism carrying the base onto it
    rotation: tuple[int, ...] | None = None  # automorphism cycling coords in order


@dataclass
class WeightCertificate:
    claimed_d: int
    witness: F4Vector | None
    method: str                       # "full_enumeration" | "windowed_bound"
    kind: str = "exact"               # "exact" | "lower_bound" | "counterexample"
    lower_bound: int = 0
    passes: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "claimed_d": self.claimed_d,
            "kind": self.kind,
            "witness": str(self.witness) if self.witness is not None else None,
            "method": self.method,
            "lower_bound": self.lower_bound if self.lower_bound < INF else None,
            "passes": self.passes,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "WeightCertificate":
        w = d.get("witness")
        lb = d.get("lower_bound")
        return cls(
            claimed_d=int(d["claimed_d"]),
            witness=F4Vector.from_string(w) if w else None,
            method=d["method"],
            kind=d.get("kind", "exact"),
            lower_bound=INF if lb is None else int(lb),
            passes=list(d.get("passes", [])),
        )


@dataclass
class CountReport:
    weight: int
    count: int
    exhaustive: bool


# -- full enumeration ---------------------------------------------------------

def _gray_chunks(k: int) -> list[tuple[int, int]]:
    total = 1 << k
    if total <= SMALL_WORK:
        return [(0, total)]
    step = total // NCHUNKS
    return [(i * step, (i + 1) * step) for i in range(NCHUNKS)]


def _gray_run(gens: np.ndarray, n: int, workers: int):
    k = gens.shape[0]

    def job(span):
        hist = np.zeros(n + 1, dtype=np.int64)
        best = np.array([INF, 0], dtype=np.int64)
        K.gray_walk(gens, span[0], span[1], hist, best)
        return hist, (int(best[0]), int(best[1]))

    results = _map(job, _gray_chunks(k), workers)
    hist = sum(r[0] for r in results)
    best = min(r[1] for r in results)
    return hist, best


def _check_budget(c: AdditiveCode, budget_log2: int | None) -> None:
    limit = enumeration_budget_log2() if budget_log2 is None else budget_log2
    if c.rank > limit:
        raise BudgetExceeded(
            f"2^{c.rank} codewords exceed the enumeration budget 2^{limit}; "
            "use the windowed method instead")


def enumerate_histogram(c: AdditiveCode, budget_log2: int | None = None, workers: int = 1) -> np.ndarray:
    _check_budget(c, budget_log2)
    hist, _ = _gray_run(c.basis_words(), c.n, workers)
    return hist


def min_weight_enumerate(c: AdditiveCode, budget_log2: int | None = None, workers: int = 1) -> WeightCertificate:
    """Exact minimum weight by visiting every nonzero codeword."""
    _check_budget(c, budget_log2)
    gens = c.basis_words()
    _, (w, g) = _gray_run(gens, c.n, workers)
    witness = _combine(c, gens, g)
    passes = [{"method": "full_enumeration", "rank": c.rank, "words": (1 << c.rank) - 1}]
    return WeightCertificate(w, witness, "full_enumeration", "exact", w, passes)


def _combine(c: AdditiveCode, gens: np.ndarray, mask: int) -> F4Vector:
    acc = np.zeros(4, dtype=np.uint64)
    for j in range(gens.shape[0]):
        if (mask >> j) & 1:
            acc ^= gens[j]
    return vector_of_words(c.n, acc)


# -- window plans -------------------------------------------------------------

def _shift_perm(n_blocks: int, n: int, step: int) -> tuple[int, ...]:
    return tuple((i // n) * n + (i % n + step) % n for i in range(n_blocks * n))


def _pair_plan(p: CirculantPair) -> list[Window]:
    n = p.n
    rot = _shift_perm(2, n, 1)
    swap = tuple([n + (-i) % n for i in range(n)] + [(-i) % n for i in range(n)])
    left = tuple(range(n))
    right = tuple(swap[c] for c in left)
    return [Window(left, rotation=rot), Window(right, base=0, perm=swap, rotation=rot)]


def _single_plan(s: SupportSet) -> list[Window]:
    m = s.n
    if m % 2 == 0 and m >= 4:
        rot2 = _shift_perm(1, m, 2)
        rot1 = _shift_perm(1, m, 1)
        even = tuple(range(0, m, 2))
        return [Window(even, rotation=rot2), Window(tuple(rot1[c] for c in even), base=0, perm=rot1, rotation=rot2)]
    h = (m - 1) // 2
    if h == 0:
        return []
    roth = _shift_perm(1, m, h)
    first = tuple(range(h))
    return [Window(first), Window(tuple(roth[c] for c in first), base=0, perm=roth)]


def _greedy_plan(c: AdditiveCode) -> list[Window]:
    """Disjoint windows, each grown until the projection reaches full rank."""
    k = c.rank
    cols = []  # column i of plane x over the basis rows, as a k-bit integer
    for plane in ("a", "b"):
        col = [0] * c.n
        for r, v in enumerate(c.reduced):
            bits = getattr(v, plane)
            while bits:
                low = bits & -bits
                col[low.bit_length() - 1] |= 1 << r
                bits ^= low
        cols.append(col)
    remaining = list(range(c.n))
    windows: list[Window] = []
    while remaining:
        basis: dict[int, int] = {}
        chosen = []
        for i in remaining:
            gained = False
            for col in (cols[0][i], cols[1][i]):
                for p, row in basis.items():
                    if col & p:
                        col ^= row
                if col:
                    basis[col & -col] = col
                    for p in list(basis):
                        if p != (col & -col) and basis[p] & (col & -col):
                            basis[p] ^= col
                    gained = True
            if gained:
                chosen.append(i)
            if len(basis) == k or len(chosen) == MAX_WINDOW:
                break
        if not chosen or k - len(basis) > KERNEL_CAP:
            break
        windows.append(Window(tuple(chosen)))
        remaining = [i for i in remaining if i not in set(chosen)]
    return windows


def plan_windows(c: AdditiveCode, verify: bool = True) -> list[Window]:
    """Windows for the code: symmetric ones for circulant constructions, greedy otherwise."""
    plan: list[Window] = []
    if isinstance(c.origin, CirculantPair):
        plan = _pair_plan(c.origin)
    elif isinstance(c.origin, SupportSet):
        plan = _single_plan(c.origin)
    if plan and verify and not _plan_symmetries_ok(c, plan):
        plan = []
    if plan and c.n <= 128:
        delta, res, kern, rank = K.prepare_window(c.basis_words(), np.array(plan[0].coords, dtype=np.int64))
        if c.rank - rank > KERNEL_CAP:
            plan = []
    return plan or _greedy_plan(c)


def _plan_symmetries_ok(c: AdditiveCode, plan: Sequence[Window]) -> bool:
    for w in plan:
        for perm in (w.perm, w.rotation):
            if perm is not None and not automorphism_ok(c, perm):
                return False
        if w.rotation is not None and w.base is None:
            m = len(w.coords)
            if any(w.rotation[w.coords[t]] != w.coords[(t + 1) % m] for t in range(m)):
                return False
    return True


# -- the windowed engine --------------------------------------------------------

def _map(fn, items, workers):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _mask_words(coords) -> np.ndarray:
    out = np.zeros(2, dtype=np.uint64)
    for x in coords:
        out[x >> 6] |= np.uint64(1) << np.uint64(x & 63)
    return out


def level_work(m: int, level: int, rotate: bool) -> float:
    if level > m:
        return 0.0
    w = math.comb(m, level) * 3.0 ** level
    if rotate and level >= 1:
        w /= m
    return w


class _Engine:
    def __init__(self, n: int, gens: np.ndarray, windows: Sequence[Window], workers: int = 1):
        if n > 128:
            raise ValueError("the windowed engine supports lengths up to 128")
        self.n = n
        self.gens = gens
        self.k = gens.shape[0]
        self.windows = list(windows)
        self.workers = max(1, int(workers))
        self._prep: dict[int, tuple] = {}

    def prepared(self, j: int):
        if j not in self._prep:
            coords = np.array(self.windows[j].coords, dtype=np.int64)
            delta, res, kern, rank = K.prepare_window(self.gens, coords)
            inside = set(self.windows[j].coords)
            comp = np.array([x for x in range(self.n) if x not in inside][:64], dtype=np.int64)
            m = len(coords)
            cdelta = K.pack_coords(delta.reshape(3 * m, 4), comp).reshape(m, 3, 2)
            ckern = K.pack_coords(kern, comp)
            self._prep[j] = (delta, res, kern, rank, cdelta, ckern)
        return self._prep[j]

    def rank(self, j: int) -> int:
        w = self.windows[j]
        return self.prepared(w.base if w.base is not None else j)[3]

    def run_level(self, j: int, level: int, stop_at: int = -1, hist_max: int = -1,
                  conds: Sequence[tuple[int, Sequence[int], int]] = (), ngroups: int = 1,
                  rotate: bool | None = None):
        """One radius of one base window.  ``conds`` are (group, coords, threshold)."""
        win = self.windows[j]
        delta, res, kern, rank, cdelta, ckern = self.prepared(j)
        m = len(win.coords)
        if rotate is None:
            rotate = win.rotation is not None
        nres = 2 * m - rank
        work = level_work(m, level, rotate) * max(1.0, 2.0 ** (kern.shape[0] - nres))
        nchunks = 1 if work < SMALL_WORK else NCHUNKS
        cmask = np.zeros((max(len(conds), 0), 2), dtype=np.uint64)
        cthr = np.zeros(len(conds), dtype=np.int64)
        cgrp = np.zeros(len(conds), dtype=np.int64)
        for i, (g, coords, thr) in enumerate(conds):
            cmask[i] = _mask_words(coords)
            cthr[i] = thr
            cgrp[i] = g
        hsize = max(hist_max, 0) + 1

        def job(chunk):
            hist = np.zeros((ngroups, self.n + 1), dtype=np.int64)
            best = np.array([INF, 0, 0, 0, 0], dtype=np.int64)
            word = np.zeros(4, dtype=np.uint64)
            K.window_level(delta, res, kern, cdelta, ckern, level, rotate, chunk, nchunks, stop_at,
                           hist_max, cmask, cthr, cgrp, hist, best, word)
            return hist, best, word

        results = _map(job, range(nchunks), self.workers)
        hist = sum(r[0] for r in results)[:, :hsize]
        order = min(range(len(results)), key=lambda i: tuple(results[i][1][:4]))
        best = results[order][1]
        return hist, int(best[0]), results[order][2].copy(), bool(any(r[1][4] for r in results))

    def base_windows(self) -> list[int]:
        return [j for j, w in enumerate(self.windows) if w.base is None]

    def images(self, j: int) -> list[int]:
        return [i for i, w in enumerate(self.windows) if w.base == j]


@dataclass
class _Outcome:
    best_w: int
    best_word: np.ndarray | None
    lower_bound: int
    passes: list[dict]
    stopped: bool


def _one_based(coords) -> list[int]:
    return [c + 1 for c in coords]


def _windowed(eng: _Engine, stop_at: int = -1, bound_target: int | None = None,
              max_level: int | None = None) -> _Outcome:
    """Raise window radii round-robin until the bound meets the best word.

    Stops early when a word of weight <= stop_at appears, or when the lower
    bound reaches ``bound_target``.
    """
    wins = eng.windows
    done = [-1] * len(wins)
    best_w, best_word = INF, None
    passes: list[dict] = []
    lb = 0
    if not wins:
        raise ValueError("no usable window for this code")
    top = max(len(w.coords) for w in wins)
    if max_level is not None:
        top = min(top, max_level)
    for level in range(top + 1):
        for j in eng.base_windows():
            m = len(wins[j].coords)
            if level > m:
                continue
            cut = max(stop_at, lb)
            _, w, word, stopped = eng.run_level(j, level, stop_at=cut)
            if w < best_w:
                best_w, best_word = w, word
            complete = False
            for i in [j] + eng.images(j):
                done[i] = level
                if level == len(wins[i].coords):
                    complete = True
                lb = sum(d + 1 for d in done if d >= 0)
                if complete:
                    lb = INF
                passes.append(_pass_record(eng, i, level, lb))
            if best_w <= stop_at:
                return _Outcome(best_w, best_word, lb, passes, True)
            if best_w <= lb:
                return _Outcome(best_w, best_word, lb, passes, False)
            if bound_target is not None and lb >= bound_target:
                return _Outcome(best_w, best_word, lb, passes, False)
    return _Outcome(best_w, best_word, lb, passes, False)


def _pass_record(eng: _Engine, i: int, level: int, lb: int) -> dict:
    w = eng.windows[i]
    rank = eng.rank(i)
    rec = {
        "form_index": i,
        "window": _one_based(w.coords),
        "window_rank": rank,
        "kernel_dim": eng.k - rank,
        "r": level,
        "contribution": level + 1,
        "lower_bound": lb if lb < INF else None,
    }
    if w.base is not None:
        rec["derived_from"] = w.base
        rec["automorphism"] = _one_based(w.perm)
    if w.rotation is not None:
        rec["rotation"] = _one_based(w.rotation)
    return rec


def _engine_for(c: AdditiveCode, workers: int = 1, plan: Sequence[Window] | None = None) -> _Engine:
    return _Engine(c.n, c.basis_words(), plan if plan is not None else plan_windows(c), workers)


def min_weight_windowed(c: AdditiveCode, workers: int = 1, plan: Sequence[Window] | None = None) -> WeightCertificate:
    """Exact minimum weight with a replayable lower-bound trace."""
    out = _windowed(_engine_for(c, workers, plan))
    witness = vector_of_words(c.n, out.best_word)
    return WeightCertificate(out.best_w, witness, "windowed_bound", "exact", out.lower_bound, out.passes)


def min_weight(c: AdditiveCode, workers: int = 1, budget_log2: int | None = None) -> WeightCertificate:
    """Full enumeration when it fits the budget, windowed otherwise."""
    limit = enumeration_budget_log2() if budget_log2 is None else budget_log2
    if c.rank <= min(limit, 20):
        return min_weight_enumerate(c, budget_log2=limit, workers=workers)
    return min_weight_windowed(c, workers=workers)


def verify_no_word_below(c: AdditiveCode, d: int, workers: int = 1,
                         plan: Sequence[Window] | None = None) -> tuple[bool, WeightCertificate]:
    """Prove every nonzero codeword has weight >= d, or return a lighter word."""
    if d <= 1:
        return True, WeightCertificate(d, None, "windowed_bound", "lower_bound", 1, [])
    out = _windowed(_engine_for(c, workers, plan), stop_at=d - 1, bound_target=d)
    word = vector_of_words(c.n, out.best_word) if out.best_word is not None else None
    if out.best_w < d:
        return False, WeightCertificate(out.best_w, word, "windowed_bound", "counterexample",
                                        out.lower_bound, out.passes)
    kind = "exact" if out.best_w <= out.lower_bound else "lower_bound"
    claimed = out.best_w if kind == "exact" else d
    return True, WeightCertificate(claimed, word if kind == "exact" else None, "windowed_bound",
                                   kind, out.lower_bound, out.passes)


def find_word_of_weight_at_most(c: AdditiveCode, d: int, max_level: int = 12, workers: int = 1,
                                plan: Sequence[Window] | None = None) -> F4Vector | None:
    """Some codeword of weight <= d met within the radius cap, else None (not a proof)."""
    out = _windowed(_engine_for(c, workers, plan), stop_at=d, bound_target=d + 1, max_level=max_level)
    if out.best_w <= d:
        return vector_of_words(c.n, out.best_word)
    return None


# -- counting -----------------------------------------------------------------

def _count_levels(eng: _Engine, wmax: int, cap: float | None):
    """Radii with sum (r_j + 1) > wmax, raised round-robin; None-capped by work."""
    wins = eng.windows
    levels = [-1] * len(wins)
    bases = eng.base_windows()
    cost = 0.0

    def covered():
        if any(levels[i] >= len(wins[i].coords) for i in range(len(wins))):
            return True
        return sum(l + 1 for l in levels if l >= 0) > wmax

    exhaustive = True
    while not covered():
        progressed = False
        for j in bases:
            if covered():
                break
            nxt = levels[j] + 1
            if nxt > len(wins[j].coords):
                continue
            extra = level_work(len(wins[j].coords), nxt, wins[j].rotation is not None)
            if cap is not None and cost + extra > cap:
                continue
            cost += extra
            for i in [j] + eng.images(j):
                levels[i] = nxt
            progressed = True
        if not progressed:
            exhaustive = False
            break
    return levels, exhaustive


def _preimage(perm, coords):
    target = set(coords)
    return [x for x in range(len(perm)) if perm[x] in target]


def count_words_up_to(c: AdditiveCode, wmax: int, workers: int = 1, budget_log2: int | None = None,
                      work_cap: float | None = None, plan: Sequence[Window] | None = None) -> dict[int, CountReport]:
    """Exact A_w for 0 <= w <= wmax.

    A word is charged to the first window (in plan order) where its weight
    is within that window's radius, so no hash set is needed.
    """
    limit = enumeration_budget_log2() if budget_log2 is None else budget_log2
    if c.rank <= limit:
        hist = enumerate_histogram(c, budget_log2=limit, workers=workers)
        return {w: CountReport(w, int(hist[w]) if w < len(hist) else 0, True) for w in range(wmax + 1)}
    eng = _engine_for(c, workers, plan)
    levels, exhaustive = _count_levels(eng, wmax, work_cap)
    wins = eng.windows
    total = np.zeros(c.n + 1, dtype=np.int64)
    for j in eng.base_windows():
        targets = [j] + eng.images(j)
        conds = []
        for g, t in enumerate(targets):
            perm = wins[t].perm
            for i in range(t):
                if levels[i] < 0:
                    continue
                coords = wins[i].coords if perm is None else _preimage(perm, wins[i].coords)
                conds.append((g, coords, levels[i]))
        rotate = wins[j].rotation is not None
        if rotate:
            rot = wins[j].rotation
            for _, coords, _ in conds:
                if set(rot[x] for x in coords) != set(coords):
                    rotate = False
        for level in range(levels[j] + 1):
            hist, *_ = eng.run_level(j, level, hist_max=wmax, conds=conds, ngroups=len(targets), rotate=rotate)
            total[: hist.shape[1]] += hist.sum(axis=0)
    total[0] = 1
    return {w: CountReport(w, int(total[w]), exhaustive) for w in range(wmax + 1)}


def count_words_of_weight(c: AdditiveCode, w: int, workers: int = 1, budget_log2: int | None = None,
                          work_cap: float | None = None) -> CountReport:
    if not 0 <= w <= c.n:
        raise ValueError(f"weight {w} outside 0..{c.n}")
    return count_words_up_to(c, w, workers, budget_log2, work_cap)[w]


# -- certificate checking ---------------------------------------------------------

class CertificateError(ValueError):
    pass


def _projection_rank(c: AdditiveCode, coords: Sequence[int]) -> int:
    mask = 0
    for x in coords:
        mask |= 1 << x
    basis: dict[int, int] = {}
    for v in c.reduced:
        r = F4Vector(c.n, v.a & mask, v.b & mask).interleaved()
        for p, row in basis.items():
            if r & p:
                r ^= row
        if r:
            low = r & -r
            for p in list(basis):
                if basis[p] & low:
                    basis[p] ^= r
            basis[low] = r
    return len(basis)


def check_certificate(c: AdditiveCode, cert: WeightCertificate) -> bool:
    """Re-check a certificate from its trace alone; raises CertificateError on failure."""
    if cert.kind in ("exact", "counterexample"):
        if cert.witness is None:
            raise CertificateError("missing witness")
        if cert.witness.n != c.n or not contains(c, cert.witness):
            raise CertificateError("witness is not a codeword")
        if not cert.witness or cert.witness.weight() != cert.claimed_d:
            raise CertificateError("witness weight differs from the claim")
        if cert.kind == "counterexample":
            return True
    if cert.method == "full_enumeration":
        if len(cert.passes) != 1 or cert.passes[0].get("rank") != c.rank \
                or cert.passes[0].get("words") != (1 << c.rank) - 1:
            raise CertificateError("full enumeration trace does not cover the code")
        return True
    if cert.method != "windowed_bound":
        raise CertificateError(f"unknown method {cert.method!r}")
    if cert.kind == "lower_bound" and cert.claimed_d <= 1 and not cert.passes:
        return True
    latest: dict[int, dict] = {}
    windows: dict[int, set[int]] = {}
    for p in cert.passes:
        i = int(p["form_index"])
        coords = [x - 1 for x in p["window"]]
        if i in windows and windows[i] != set(coords):
            raise CertificateError(f"form {i} changes its window")
        windows[i] = set(coords)
        if any(not 0 <= x < c.n for x in coords) or len(set(coords)) != len(coords):
            raise CertificateError(f"form {i}: bad window")
        r = int(p["r"])
        if not 0 <= r <= len(coords) or p["contribution"] != r + 1:
            raise CertificateError(f"form {i}: contribution must be r + 1")
        if i in latest and r < latest[i]["r"]:
            raise CertificateError(f"form {i}: radius decreased")
        if p["window_rank"] != _projection_rank(c, coords):
            raise CertificateError(f"form {i}: window rank mismatch")
        for key in ("automorphism", "rotation"):
            if key in p:
                perm = [x - 1 for x in p[key]]
                if not automorphism_ok(c, perm):
                    raise CertificateError(f"form {i}: {key} is not a code automorphism")
        if "rotation" in p:
            rot = [x - 1 for x in p["rotation"]]
            if {rot[x] for x in coords} != set(coords):
                raise CertificateError(f"form {i}: rotation does not fix the window")
        if "derived_from" in p:
            b = int(p["derived_from"])
            if b not in latest or latest[b]["r"] < r:
                raise CertificateError(f"form {i}: base form {b} not enumerated to radius {r}")
            perm = [x - 1 for x in p["automorphism"]]
            if {perm[x] for x in windows[b]} != set(coords):
                raise CertificateError(f"form {i}: automorphism does not map the base window onto it")
        latest[i] = p
    ids = sorted(windows)
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            if windows[ids[a]] & windows[ids[b]]:
                raise CertificateError(f"windows {ids[a]} and {ids[b]} overlap")
    complete = any(p["r"] == len(windows[i]) for i, p in latest.items())
    bound = INF if complete else sum(p["contribution"] for p in latest.values())
    need = cert.claimed_d
    if bound < need:
        raise CertificateError(f"trace proves only weight >= {bound}, claim is {need}")
    return True

