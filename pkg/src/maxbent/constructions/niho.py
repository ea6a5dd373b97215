"""Perturbations of the Niho quadratic x^(2^m+1) that keep 2^n - 2^m bent components."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import gf2
from ..boolfn import Domain, TruthTable, derivative, dual
from ..field import TowerSpec
from ..vecfn import VectorialFunction, component, component_spectra, delta_row
from .trace import ConstructionError


@dataclass(eq=False)
class ReducedPolynomial:
    """R(X_2, ..., X_k) as a truth table; bit j of the index is X_{j+2}."""

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.uint8) & 1
        if t.ndim != 1 or t.size < 1 or t.size & (t.size - 1):
            raise ValueError("ReducedPolynomial table length must be a power of two")
        self.table = t

    @property
    def arity(self) -> int:
        return int(self.table.size).bit_length() - 1

    @property
    def k(self) -> int:
        return self.arity + 1

    @classmethod
    def zero(cls, k: int) -> "ReducedPolynomial":
        return cls(np.zeros(1 << (k - 1), dtype=np.uint8))

    @classmethod
    def product(cls, k: int) -> "ReducedPolynomial":
        """X_2 X_3 ... X_k."""
        t = np.zeros(1 << (k - 1), dtype=np.uint8)
        t[-1] = 1
        return cls(t)

    @classmethod
    def random(cls, k: int, rng: np.random.Generator) -> "ReducedPolynomial":
        return cls(rng.integers(0, 2, 1 << (k - 1), dtype=np.uint8))

    def __call__(self, args: np.ndarray) -> np.ndarray:
        """Evaluate on stacked 0/1 arrays, one row per input slot."""
        args = np.asarray(args, dtype=np.int64)
        idx = np.zeros(args.shape[1:], dtype=np.int64)
        for j in range(self.arity):
            idx |= args[j] << j
        return self.table[idx]

    def to_list(self) -> List[int]:
        return self.table.tolist()


def _tr(tower: TowerSpec, u: int, x: np.ndarray) -> np.ndarray:
    """Tr_{2^n/2}(u x) as 0/1."""
    big = tower.big
    return big.trace_bit(big.mul(u, x)).astype(np.int64)


def _trm(tower: TowerSpec, y) -> np.ndarray:
    """Tr_{2^m/2}(y) for y in the embedded subfield."""
    return np.asarray(tower.tr_small(y), dtype=np.int64)


def niho_base(tower: TowerSpec) -> VectorialFunction:
    big = tower.big
    x = big.elements()
    return VectorialFunction(Domain.of_field(big), big.pow(x, tower.small.order + 1), "x^(2^m+1)")


def gamma_of(tower: TowerSpec, beta: int) -> int:
    return int(beta ^ tower.conj(beta))


def niho_dual(tower: TowerSpec, beta: int) -> TruthTable:
    """G*_beta(x) = Tr_m(gamma^-1 x^(2^m+1)) + 1, gamma = beta + beta^(2^m)."""
    big = tower.big
    if tower.in_subfield(beta):
        raise ConstructionError("beta must lie outside F_{2^m}")
    g = big.inv(gamma_of(tower, beta))
    x = big.elements()
    bits = _trm(tower, big.mul(g, big.pow(x, tower.small.order + 1))) ^ 1
    return TruthTable(bits.astype(np.uint8), Domain.of_field(big))


def _check_subfield(tower: TowerSpec, *us: int) -> None:
    for u in us:
        if not tower.in_subfield(u):
            raise ConstructionError(f"0x{u:x} is not in F_{{2^{tower.m}}}")


def validate_niho_general(tower: TowerSpec, u1: int, us: Sequence[int]) -> None:
    k = len(us) + 1
    if not 3 <= k <= tower.m:
        raise ConstructionError(f"need 3 <= k <= m, got k = {k}, m = {tower.m}")
    _check_subfield(tower, u1, *us)
    big = tower.big
    for u in us:
        if _trm(tower, big.mul(u1, u)):
            raise ConstructionError(f"Tr_m(u1 * 0x{u:x}) != 0")


def niho_general(tower: TowerSpec, u1: int, R: ReducedPolynomial, us: Sequence[int]) -> VectorialFunction:
    """x^(2^m+1) + u1 x R(Tr(u_2 x), ..., Tr(u_k x)) with u_i in F_{2^m}."""
    validate_niho_general(tower, u1, us)
    if R.arity != len(us):
        raise ConstructionError(f"R takes {R.arity} inputs but {len(us)} u's were given")
    big = tower.big
    x = big.elements()
    args = np.stack([_tr(tower, u, x) for u in us])
    r = R(args)
    tab = niho_base(tower).table ^ np.where(r == 1, big.mul(u1, x), 0)
    return VectorialFunction(Domain.of_field(big), tab, "x^(2^m+1)+u1*x*R(...)")


def niho_general_dual_formula(tower: TowerSpec, beta: int, u1: int, R: ReducedPolynomial,
                              us: Sequence[int]) -> TruthTable:
    """G*_beta + D_{beta u1} G*_beta * R(D_{u_2} G*_beta, ...)."""
    gs = niho_dual(tower, beta)
    d1 = derivative(gs, tower.big.mul(beta, u1)).bits
    ds = np.stack([derivative(gs, u).bits for u in us])
    return TruthTable(gs.bits ^ (d1 & R(ds)), gs.domain)


def dual_derivative_check(tower: TowerSpec, beta: int, u1: int, us: Sequence[int]) -> bool:
    """Closed forms of the first derivatives of G*_beta in directions beta*u1 and u_i."""
    big = tower.big
    g = int(big.inv(gamma_of(tower, beta)))
    gs = niho_dual(tower, beta)
    x = big.elements()
    bq = int(tower.conj(beta))
    lhs = derivative(gs, int(big.mul(beta, u1))).bits
    c = int(big.mul(big.mul(g, u1), bq))
    const = int(_trm(tower, big.mul(big.mul(g, big.mul(beta, bq)), big.square(u1))))
    if not np.array_equal(lhs, _tr(tower, c, x) ^ const):
        return False
    for u in us:
        lhs = derivative(gs, u).bits
        const = int(_trm(tower, big.mul(g, big.square(u))))
        if not np.array_equal(lhs, _tr(tower, int(big.mul(g, u)), x) ^ const):
            return False
    return True


def condition_A_check(fstar: TruthTable, us: Sequence[int]) -> bool:
    """f*(x + sum w_i u_i) = f*(x) + sum w_i D_{u_i} f*(x) for all w in F_2^k and all x."""
    if not gf2.is_independent(list(us)):
        raise ValueError("condition A needs linearly independent directions")
    b = fstar.bits
    x = np.arange(b.size, dtype=np.int64)
    ders = [b[x ^ u] ^ b for u in us]
    for w in range(1, 1 << len(us)):
        shift = 0
        rhs = b.copy()
        for i, u in enumerate(us):
            if (w >> i) & 1:
                shift ^= u
                rhs ^= ders[i]
        if not np.array_equal(b[x ^ shift], rhs):
            return False
    return True


def dual_check(F: VectorialFunction, beta: int, expected: TruthTable) -> bool:
    return dual(component(F, beta)) == expected


# -- k = 2 -------------------------------------------------------------------------------------

def niho_k2_valid(tower: TowerSpec, u1: int, u2: int) -> bool:
    big = tower.big
    c = int(big.mul(u1, tower.conj(u2)))
    return bool(tower.in_subfield(c)) and int(_trm(tower, c)) == 0


def niho_k2(tower: TowerSpec, u1: int, u2: int) -> VectorialFunction:
    """x^(2^m+1) + u1 x Tr(u2 x) under u1 u2^(2^m) in F_{2^m} with zero trace."""
    if not niho_k2_valid(tower, u1, u2):
        raise ConstructionError(f"(u1, u2) = (0x{u1:x}, 0x{u2:x}) violates the k = 2 conditions")
    big = tower.big
    x = big.elements()
    tab = niho_base(tower).table ^ np.where(_tr(tower, u2, x) == 1, big.mul(u1, x), 0)
    return VectorialFunction(Domain.of_field(big), tab, f"x^(2^m+1)+0x{u1:x}*x*Tr(0x{u2:x}*x)")


def niho_k2_dual_formula(tower: TowerSpec, beta: int, u1: int, u2: int) -> TruthTable:
    """Closed-form dual of F_beta for k = 2 with lambda = beta + beta^(2^m)."""
    big = tower.big
    lam = int(big.inv(gamma_of(tower, beta)))
    x = big.elements()
    q1 = tower.small.order + 1
    bu = int(big.mul(beta, u1))
    base = niho_dual(tower, beta).bits.astype(np.int64)
    f1 = _tr(tower, int(big.mul(lam, tower.conj(bu))), x) ^ int(_trm(tower, big.mul(lam, big.pow(bu, q1))))
    f2 = _tr(tower, int(big.mul(lam, tower.conj(u2))), x) ^ int(_trm(tower, big.mul(lam, big.pow(u2, q1))))
    return TruthTable((base ^ (f1 & f2)).astype(np.uint8), Domain.of_field(big))


@lru_cache(maxsize=None)
def _k2_pairs(tower: TowerSpec) -> Tuple[Tuple[int, int], ...]:
    big = tower.big
    x = big.elements()
    u2q = tower.conj(x)
    hits = []
    for u1 in x.tolist():
        c = big.mul(u1, u2q)
        ok = tower.in_subfield(c)
        ok[ok] = _trm(tower, c[ok]) == 0
        hits.extend((u1, int(u2)) for u2 in np.nonzero(ok)[0])
    return tuple(sorted(hits))


def search_niho_k2(tower: TowerSpec, outside_only: bool = False) -> List[Tuple[int, int]]:
    """Every (u1, u2) meeting the k = 2 conditions, sorted; optionally both outside F_{2^m}."""
    pairs = _k2_pairs(tower)
    if outside_only:
        pairs = tuple(p for p in pairs if not tower.in_subfield(p[0]) and not tower.in_subfield(p[1]))
    return list(pairs)


@dataclass
class RtFailure:
    beta: int
    case: str
    expected: Dict[int, int]
    observed: Dict[int, int]


def rt_expected(tower: TowerSpec, beta: int, u1: int, u2: int) -> Tuple[str, Dict[int, int]]:
    """Predicted support {w: W_{F_beta}(w)} for beta in F_{2^m}^*."""
    n = tower.n
    bu = int(tower.big.mul(beta, u1))
    if gf2.is_independent([bu, u2]):
        h = 1 << (n - 1)
        return "independent", {0: h, bu: h, u2: h, bu ^ u2: -h}
    point = u2 if bu == u2 else 0
    return "dependent", {point: 1 << n}


def rt_check(tower: TowerSpec, F: VectorialFunction, u1: int, u2: int) -> List[RtFailure]:
    """Compare every subfield component's spectrum with the two-case prediction."""
    small_a = np.arange(1, tower.small.order)
    betas = tower.embed(small_a)
    W = component_spectra(F, betas)
    fails = []
    for row, beta in zip(W, betas.tolist()):
        case, exp = rt_expected(tower, beta, u1, u2)
        nz = np.nonzero(row)[0]
        obs = {int(w): int(row[w]) for w in nz}
        if obs != exp:
            fails.append(RtFailure(beta, case, exp, obs))
    return fails


def rt_component_nonlinearity(tower: TowerSpec, F: VectorialFunction, beta: int) -> int:
    W = component_spectra(F, [beta])[0]
    return (1 << (tower.n - 1)) - int(np.abs(W).max()) // 2


@dataclass
class DiffFailure:
    a: int
    tr: int
    values: List[int]


def diff_check(tower: TowerSpec, F: VectorialFunction, u2: int) -> List[DiffFailure]:
    """Row-by-row differential sets: {0,2} when Tr(u2 a) = 1, {0,2^(m-1),2^m} otherwise."""
    m = tower.m
    big = tower.big
    fails = []
    for a in range(1, big.order):
        vals = set(np.unique(delta_row(F, a)).tolist())
        t = int(big.trace_bit(big.mul(u2, a)))
        allowed = {0, 2} if t else {0, 1 << (m - 1), 1 << m}
        if not vals <= allowed:
            fails.append(DiffFailure(a, t, sorted(vals)))
    return fails


def orthogonal_set(tower: TowerSpec, k: int, rng: Optional[np.random.Generator] = None) -> Tuple[int, List[int]]:
    """u1 and k-1 independent u_i in F_{2^m} with Tr_m(u1 u_i) = 0, as big-field coords.

    The u_i are drawn from the hyperplane orthogonal to u1 (dimension m - 1), so
    k - 1 <= m - 1 independent choices always exist.
    """
    small = tower.small
    m = tower.m
    if rng is None:
        rng = np.random.default_rng(0)
    elems = np.arange(1, small.order)
    u1 = int(rng.choice(elems))
    perp = [int(v) for v in elems if small.trace_bit(small.mul(u1, int(v))) == 0]
    rng.shuffle(perp)
    basis: List[int] = []
    for v in perp:
        if len(basis) == k - 1:
            break
        if gf2.is_independent(basis + [v]):
            basis.append(v)
    if len(basis) < k - 1 or k > m:
        raise ConstructionError("cannot find enough orthogonal directions")
    return int(tower.embed(u1)), [int(tower.embed(v)) for v in basis]


def orthogonal_basis(tower: TowerSpec) -> Optional[List[int]]:
    """A trace-orthogonal basis {u_1..u_m} of F_{2^m}, as big-field coords, if one exists."""
    small = tower.small
    m = tower.m
    tb = lambda a, b: int(small.trace_bit(small.mul(a, b)))  # noqa: E731

    def extend(chosen: List[int], start: int):
        if len(chosen) == m:
            return chosen
        for v in range(start, small.order):
            if tb(v, v) and all(tb(v, c) == 0 for c in chosen):
                r = extend(chosen + [v], v + 1)
                if r:
                    return r
        return None

    found = extend([], 1)
    return None if found is None else [int(tower.embed(v)) for v in found]
