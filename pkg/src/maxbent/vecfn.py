"""Vectorial functions V -> V: components, bent counts, nonlinearity, differentials."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import gf2
from .boolfn import Domain, TruthTable, WalshSpectrum, plateau_k, walsh_rows

# Max entries of one component-spectrum block (rows x 2^N).
BLOCK_ENTRIES = 1 << 22


@dataclass(eq=False)
class VectorialFunction:
    """Value table of F : V -> V; entry v is the coordinate int of F(v)."""

    domain: Domain
    table: np.ndarray
    desc: str = ""

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        if t.shape != (self.domain.size,):
            raise ValueError(f"table must have length {self.domain.size}")
        if t.size and (t.min() < 0 or t.max() >= self.domain.size):
            raise ValueError("table entries must be codomain elements")
        self.table = t

    @property
    def n(self) -> int:
        return self.domain.n_vars

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, VectorialFunction) and self.domain == other.domain
                and np.array_equal(self.table, other.table))

    def __call__(self, v: int) -> int:
        return int(self.table[v])


def _component_bits(F: VectorialFunction, comps: np.ndarray) -> np.ndarray:
    masks = F.domain.pairing[np.asarray(comps, dtype=np.int64)]
    return (np.bitwise_count(F.table[None, :] & masks[:, None]) & 1).astype(np.uint8)


def component(F: VectorialFunction, a: int) -> TruthTable:
    """The Boolean function v -> <a, F(v)>."""
    if a == 0:
        raise ValueError("component index must be nonzero")
    return TruthTable(_component_bits(F, np.array([a]))[0], F.domain)


def component_spectra(F: VectorialFunction, comps: Sequence[int]) -> np.ndarray:
    """Walsh spectra of several components at once, shape (len(comps), 2^N)."""
    return walsh_rows(_component_bits(F, np.asarray(comps, dtype=np.int64)), F.domain)


def walsh_value(F: VectorialFunction, a: int, w: int) -> int:
    if a == 0:
        raise ValueError("component index must be nonzero")
    return int(component_spectra(F, [a])[0, w])


def component_spectrum(F: VectorialFunction, a: int) -> WalshSpectrum:
    if a == 0:
        raise ValueError("component index must be nonzero")
    return WalshSpectrum(component_spectra(F, [a])[0], F.domain)


def _blocks(total: int, n_vars: int) -> List[Tuple[int, int]]:
    step = max(1, BLOCK_ENTRIES >> n_vars)
    return [(lo, min(lo + step, total)) for lo in range(1, total, step)]


@dataclass
class _BlockStats:
    max_abs: np.ndarray
    flat: np.ndarray  # |W| only takes values 0 and max


def _block_stats(args) -> _BlockStats:
    F, lo, hi = args
    spec = np.abs(component_spectra(F, np.arange(lo, hi)))
    mx = spec.max(axis=1)
    flat = np.all((spec == 0) | (spec == mx[:, None]), axis=1)
    return _BlockStats(mx, flat)


def _component_stats(F: VectorialFunction, jobs: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """Per nonzero component: max |W| and plateau flag, indexed 0..2^N-2 for a = 1..2^N-1."""
    blocks = _blocks(F.domain.size, F.n)
    work = [(F, lo, hi) for lo, hi in blocks]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_block_stats, work))
    else:
        parts = [_block_stats(w) for w in work]
    return (np.concatenate([p.max_abs for p in parts]), np.concatenate([p.flat for p in parts]))


def bent_mask(F: VectorialFunction, jobs: int = 1) -> np.ndarray:
    """Boolean array over a = 1..2^N-1: is the component F_a bent."""
    mx, flat = _component_stats(F, jobs)
    if F.n % 2:
        return np.zeros(mx.size, dtype=bool)
    return flat & (mx == 1 << (F.n // 2))


def count_bent_components(F: VectorialFunction, jobs: int = 1) -> int:
    return int(bent_mask(F, jobs).sum())


@dataclass
class NonBentSet:
    """S_F restricted to nonzero a, with structure flags for S_F together with 0."""

    members: List[int]
    is_subspace: bool
    equals_subfield: Optional[bool]

    @property
    def size(self) -> int:
        return len(self.members)


def _nonbent_from_mask(F: VectorialFunction, bent: np.ndarray) -> NonBentSet:
    members = (np.nonzero(~bent)[0] + 1).tolist()
    with_zero = [0] + members
    r = gf2.rank(members)
    is_sub = len(with_zero) == 1 << r
    eq_sub: Optional[bool] = None
    if not F.domain.is_product and F.n % 2 == 0:
        sub = F.domain.field.subfield_elements(F.n // 2)
        eq_sub = len(with_zero) == sub.size and bool(np.array_equal(np.sort(with_zero), sub))
    return NonBentSet(members, is_sub, eq_sub)


def nonbent_set(F: VectorialFunction, jobs: int = 1) -> NonBentSet:
    return _nonbent_from_mask(F, bent_mask(F, jobs))


def max_bent_count(n: int) -> int:
    return (1 << n) - (1 << (n // 2))


def nonlinearity_with_argmin(F: VectorialFunction, jobs: int = 1) -> Tuple[int, int]:
    mx, _ = _component_stats(F, jobs)
    i = int(np.argmax(mx))
    return (1 << (F.n - 1)) - int(mx[i]) // 2, i + 1


def nonlinearity(F: VectorialFunction, jobs: int = 1) -> int:
    return nonlinearity_with_argmin(F, jobs)[0]


def _class_name(mx: int, flat: bool, n: int) -> str:
    if flat and n % 2 == 0 and mx == 1 << (n // 2):
        return "bent"
    k = plateau_k(mx, n) if flat else None
    return "non-plateaued" if k is None else f"plateaued:{k}"


@dataclass
class AnalysisReport:
    n: int
    func_desc: str
    bent_count: int
    is_maximal: bool
    s_f: Dict[str, object]
    nonlinearity: int
    nonlinearity_argmin: str
    walsh_max: int
    plateau_summary: Dict[str, str] = field(default_factory=dict)
    plateau_counts: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"


def analyze(F: VectorialFunction, jobs: int = 1) -> AnalysisReport:
    """Exhaustive spectral report over all 2^N - 1 components."""
    n = F.n
    mx, flat = _component_stats(F, jobs)
    bent = flat & (mx == 1 << (n // 2)) if n % 2 == 0 else np.zeros(mx.size, dtype=bool)
    sf = _nonbent_from_mask(F, bent)
    width = max(1, (n + 3) // 4)
    summary = {}
    counts: Dict[str, int] = {}
    for i, (m_, f_) in enumerate(zip(mx.tolist(), flat.tolist())):
        c = _class_name(m_, f_, n)
        summary[f"0x{i + 1:0{width}x}"] = c
        counts[c] = counts.get(c, 0) + 1
    i = int(np.argmax(mx))
    bc = int(bent.sum())
    return AnalysisReport(
        n=n,
        func_desc=F.desc,
        bent_count=bc,
        is_maximal=n % 2 == 0 and bc == max_bent_count(n),
        s_f={"size": sf.size, "is_subspace": sf.is_subspace, "equals_subfield": sf.equals_subfield},
        nonlinearity=(1 << (n - 1)) - int(mx[i]) // 2,
        nonlinearity_argmin=f"0x{i + 1:0{width}x}",
        walsh_max=int(mx[i]),
        plateau_summary=summary,
        plateau_counts=dict(sorted(counts.items())),
    )


# -- differential spectrum --------------------------------------------------------------------

def delta(F: VectorialFunction, a: int, b: int) -> int:
    if a == 0:
        raise ValueError("delta needs a nonzero shift")
    x = F.domain.points()
    return int(np.count_nonzero((F.table[x ^ a] ^ F.table) == b))


def delta_row(F: VectorialFunction, a: int) -> np.ndarray:
    """delta(a, b) for every b."""
    x = F.domain.points()
    return np.bincount(F.table[x ^ a] ^ F.table, minlength=F.domain.size)


def row_view(F: VectorialFunction, a: int) -> Dict[int, int]:
    vals, counts = np.unique(delta_row(F, a), return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


@dataclass
class DiffSpectrum:
    """Histogram {delta value: number of pairs (a != 0, b)}; rows are recomputed on demand."""

    histogram: Dict[int, int]
    func: VectorialFunction = field(repr=False)

    def row_view(self, a: int) -> Dict[int, int]:
        return row_view(self.func, a)

    def values(self) -> List[int]:
        return sorted(self.histogram)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["delta", "count"])
        for d, c in sorted(self.histogram.items()):
            w.writerow([d, c])
        return buf.getvalue()


def _diff_block(args) -> np.ndarray:
    F, lo, hi = args
    size = F.domain.size
    x = F.domain.points()
    a = np.arange(lo, hi, dtype=np.int64)
    d = F.table[x[None, :] ^ a[:, None]] ^ F.table[None, :]
    d += (np.arange(hi - lo, dtype=np.int64) * size)[:, None]
    rows = np.bincount(d.ravel(), minlength=(hi - lo) * size)
    return np.bincount(rows, minlength=size + 1)


def iter_delta_rows(F: VectorialFunction) -> Iterator[Tuple[int, np.ndarray]]:
    for a in range(1, F.domain.size):
        yield a, delta_row(F, a)


def differential_spectrum(F: VectorialFunction, jobs: int = 1) -> DiffSpectrum:
    size = F.domain.size
    work = [(F, lo, hi) for lo, hi in _blocks(size, F.n)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_diff_block, work))
    else:
        parts = [_diff_block(w) for w in work]
    hist = np.sum(parts, axis=0)
    return DiffSpectrum({int(v): int(c) for v, c in enumerate(hist.tolist()) if c}, F)
