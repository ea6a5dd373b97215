"""Binomials x^(2^m+1) + x^(2^i+1), their linearized kernels, and the exponent-pair scan."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .. import gf2
from ..boolfn import Domain
from ..field import TowerSpec, make_field, make_tower, v2
from ..vecfn import (VectorialFunction, component_spectra, count_bent_components,
                     differential_spectrum, max_bent_count)
from .trace import ConstructionError


def binomial(tower: TowerSpec, i: int) -> VectorialFunction:
    m = tower.m
    if not 0 <= i < m:
        raise ConstructionError(f"i = {i} outside [0, {m})")
    big = tower.big
    x = big.elements()
    tab = big.pow(x, (1 << m) + 1) ^ big.pow(x, (1 << i) + 1)
    return VectorialFunction(Domain.of_field(big), tab, f"x^(2^{m}+1)+x^(2^{i}+1)")


def _L(tower: TowerSpec, a, y, i: int):
    """L_a(y) = a^(2^i) y^(2^(2i)) + (a + a^(2^m))^(2^i) y^(2^(m+i)) + a y."""
    big = tower.big
    m = tower.m
    t1 = big.mul(big.frobenius(a, i), big.frobenius(y, 2 * i))
    t2 = big.mul(big.frobenius(a ^ tower.conj(a), i), big.frobenius(y, m + i))
    return t1 ^ t2 ^ big.mul(a, y)


def root_dimension_d(m: int, i: int) -> int:
    return math.gcd(m + i, 2 * m)


def linearized_roots(tower: TowerSpec, a: int, i: int) -> List[int]:
    """Sorted root set of L_a in F_{2^n}, via the kernel of its F_2-matrix."""
    n = tower.n
    cols = [int(_L(tower, a, 1 << j, i)) for j in range(n)]
    rows = gf2.transpose(cols, n)
    return sorted(gf2.span(gf2.kernel(rows, n)))


def is_subfield_space(tower: TowerSpec, roots: List[int], d: int) -> bool:
    """The set is closed under addition and under scaling by F_{2^d}."""
    big = tower.big
    s = set(roots)
    r = np.asarray(roots, dtype=np.int64)
    for c in big.subfield_elements(d).tolist():
        if not set(np.asarray(big.mul(c, r)).tolist()) <= s:
            return False
    return all((p ^ q) in s for p in roots for q in roots)


def kernel_dimensions(tower: TowerSpec, i: int) -> np.ndarray:
    """dim_F2 ker L_a for every a in F_{2^n}."""
    n = tower.n
    a = tower.big.elements()
    cols = np.stack([_L(tower, a, 1 << j, i) for j in range(n)], axis=1)
    out = np.empty(a.size, dtype=np.int64)
    for idx, c in enumerate(cols.tolist()):
        out[idx] = n - gf2.rank(c)
    return out


def binomial_witness(tower: TowerSpec, i: int) -> Optional[int]:
    """Smallest a outside F_{2^m} whose L_a has a nonzero root."""
    dims = kernel_dimensions(tower, i)
    outside = ~tower.in_subfield(tower.big.elements())
    idx = np.nonzero(outside & (dims > 0))[0]
    return int(idx[0]) if idx.size else None


def explicit_a_witnesses(tower: TowerSpec, i: int) -> List[Tuple[int, int]]:
    """Pairs (xi, a = 1/(1+xi)) with xi in F_{2^d}, xi^(2^(d/2)+1) = 1, xi != 1."""
    m = tower.m
    if v2(i) != v2(m):
        raise ConstructionError(f"needs v2(i) = v2(m), got i = {i}, m = {m}")
    d = root_dimension_d(m, i)
    big = tower.big
    sub = big.subfield_elements(d)
    xi = sub[(sub > 1) & (big.pow(sub, (1 << (d // 2)) + 1) == 1)]
    return [(int(x), int(big.inv(x ^ 1))) for x in xi.tolist()]


def explicit_a_check(tower: TowerSpec, i: int) -> bool:
    """Every explicit a lies outside F_{2^m} and L_a kills all of F_{2^d}."""
    d = root_dimension_d(tower.m, i)
    sub = tower.big.subfield_elements(d)
    wits = explicit_a_witnesses(tower, i)
    if not wits:
        return False
    for _, a in wits:
        if tower.in_subfield(a) or np.any(_L(tower, a, sub, i)):
            return False
    return True


def count_N_set(m: int, d: int) -> int:
    """|{y in F_{2^m}^* : Tr_{2^m/2^d}(y^(2^d - 1)) = 0}|."""
    if d <= 0 or m % d or d >= m:
        raise ConstructionError(f"need d | m and d < m, got m = {m}, d = {d}")
    K = make_field(m)
    y = K.elements()[1:]
    t = K.trace(K.pow(y, (1 << d) - 1), sub=d)
    return int(np.count_nonzero(t == 0))


def gauss_t(m: int, d: int) -> int:
    return math.gcd((1 << d) - 1, m // d)


# -- exponent-pair scan ------------------------------------------------------------------------

@dataclass(frozen=True)
class BinomialHit:
    d1: int
    d2: int
    bent_count: int
    profile_tag: str


@dataclass
class SearchResult:
    n: int
    hits: List[BinomialHit]
    complete: bool
    last_completed_outer_index: int
    evaluated: int = 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d1", "d2", "bent_count", "profile_tag"])
        for h in self.hits:
            w.writerow([self.n, h.d1, h.d2, h.bent_count, h.profile_tag])
        return buf.getvalue()


def canonical_pair(d1: int, d2: int, n: int) -> Tuple[int, int]:
    """Least representative of {(2^r d1, 2^r d2) mod 2^n - 1}, as a sorted pair."""
    N = (1 << n) - 1
    best = None
    for r in range(n):
        p = tuple(sorted(((d1 << r) % N, (d2 << r) % N)))
        if best is None or p < best:
            best = p
    return best  # type: ignore[return-value]


def _hist_key(F: VectorialFunction) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted(differential_spectrum(F).histogram.items()))


@lru_cache(maxsize=None)
def _reference_profiles(n: int) -> Tuple[Tuple[str, Tuple[Tuple[int, int], ...]], ...]:
    """Differential histograms of x^(2^m+1) and of x^(2^i)(x + x^(2^m)), 0 < i < m.

    Several i can share a histogram, so those tags list every matching i.
    """
    m = n // 2
    big = make_field(n)
    x = big.elements()
    dom = Domain.of_field(big)
    refs = [("x^(2^m+1)-like", _hist_key(VectorialFunction(dom, big.pow(x, (1 << m) + 1))))]
    by_key: dict = {}
    for i in range(1, m):
        t = big.mul(big.frobenius(x, i), x ^ big.frobenius(x, m))
        by_key.setdefault(_hist_key(VectorialFunction(dom, t)), []).append(i)
    for key, idx in by_key.items():
        refs.append((f"x^(2^i)(x+x^(2^m))-like[i={'|'.join(map(str, idx))}]", key))
    return tuple(refs)


def profile_tag(F: VectorialFunction) -> str:
    key = _hist_key(F)
    for name, ref in _reference_profiles(F.n):
        if key == ref:
            return name
    return "unknown"


def _pair_function(n: int, d1: int, d2: int) -> VectorialFunction:
    big = make_field(n)
    x = big.elements()
    return VectorialFunction(Domain.of_field(big), big.pow(x, d1) ^ big.pow(x, d2), f"x^{d1}+x^{d2}")


@lru_cache(maxsize=None)
def _probe_components(n: int) -> Tuple[np.ndarray, np.ndarray]:
    tower = make_tower(n // 2)
    outside = np.nonzero(~tower.in_subfield(tower.big.elements()))[0]
    return outside[:1], outside[:32]


def _is_maximal(F: VectorialFunction) -> bool:
    """Staged test: a few components outside F_{2^m} first, then the exact count."""
    half = 1 << (F.n // 2)
    for probe in _probe_components(F.n):
        if not np.all(np.abs(component_spectra(F, probe)) == half):
            return False
    return count_bent_components(F) == max_bent_count(F.n)


def _scan_outer(args) -> Tuple[int, List[Tuple[int, int]], int]:
    n, d1 = args
    N = (1 << n) - 1
    found = []
    evaluated = 0
    for d2 in range(d1 + 1, N):
        if canonical_pair(d1, d2, n) != (d1, d2):
            continue
        evaluated += 1
        if _is_maximal(_pair_function(n, d1, d2)):
            found.append((d1, d2))
    return d1, found, evaluated


def _load_checkpoint(path: str, n: int) -> Tuple[int, List[BinomialHit]]:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("n") != n:
        raise ConstructionError(f"checkpoint is for n = {data.get('n')}, not {n}")
    return int(data["last_completed_outer_index"]), [BinomialHit(**h) for h in data["hits"]]


def _save_checkpoint(path: str, n: int, last: int, hits: List[BinomialHit]) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"n": n, "last_completed_outer_index": last,
                   "hits": [asdict(h) for h in sorted(hits, key=lambda h: (h.d1, h.d2))]}, fh, indent=1)
        fh.write("\n")
    os.replace(tmp, path)


def search_binomials(n: int, budget: Optional[int] = None, checkpoint: Optional[str] = None,
                     jobs: int = 1) -> SearchResult:
    """Scan cyclotomic classes of exponent pairs (d1 < d2) for 2^n - 2^(n/2) bent components.

    ``budget`` caps the number of pairs examined in this call; the scan stops at an
    outer-index boundary so a checkpoint always describes a finished prefix.
    """
    if n % 2:
        raise ConstructionError(f"n must be even, got {n}")
    if not 4 <= n <= 16:
        raise ConstructionError(f"n must be in [4, 16], got {n}")
    N = (1 << n) - 1
    last, hits = 0, []
    if checkpoint and os.path.exists(checkpoint):
        last, hits = _load_checkpoint(checkpoint, n)
    evaluated = 0
    d1 = last + 1
    batch = max(1, jobs) * 4
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while d1 < N - 1:
            if budget is not None and evaluated >= budget:
                break
            outer = list(range(d1, min(d1 + batch, N - 1)))
            work = [(n, d) for d in outer]
            parts = list(pool.map(_scan_outer, work)) if pool else [_scan_outer(w) for w in work]
            for _, found, ev in parts:
                evaluated += ev
                for a, b in found:
                    F = _pair_function(n, a, b)
                    hits.append(BinomialHit(a, b, count_bent_components(F), profile_tag(F)))
            d1 = outer[-1] + 1
            last = outer[-1]
            if checkpoint:
                _save_checkpoint(checkpoint, n, last, hits)
    finally:
        if pool:
            pool.shutdown()
    hits = sorted(set(hits), key=lambda h: (h.d1, h.d2))
    return SearchResult(n, hits, d1 >= N - 1, last, evaluated)


def pair_in_class(d1: int, d2: int, e1: int, e2: int, n: int) -> bool:
    return canonical_pair(d1, d2, n) == canonical_pair(e1, e2, n)
