"""F(x) = x^(2^e) h(Tr_{2^n/2^m}(x)) and the monomial / linear analyses of h."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..boolfn import Domain, TruthTable, quadratic_rank, walsh_rows
from ..field import FieldSpec, TowerSpec, make_field
from ..vecfn import VectorialFunction, component_spectra, nonlinearity


class ConstructionError(ValueError):
    pass


def is_permutation(table: np.ndarray) -> bool:
    t = np.asarray(table)
    return np.array_equal(np.sort(t), np.arange(t.size))


def monomial_table(spec: FieldSpec, u: int) -> np.ndarray:
    return spec.pow(spec.elements(), u)


def trace_perm(tower: TowerSpec, e: int, h: np.ndarray) -> Tuple[VectorialFunction, VectorialFunction]:
    """F(x) = x^(2^e) h(Tr_{n/m}(x)) on F_{2^n}, with its companion H(x) = x^(2^e) h(x) on F_{2^m}.

    ``h`` is a table over small-field coordinates.
    """
    h = np.asarray(h, dtype=np.int64)
    if e < 0:
        raise ConstructionError("e must be non-negative")
    if h.shape != (tower.small.order,) or not is_permutation(h):
        raise ConstructionError("h must be a permutation of F_{2^m}")
    big, small = tower.big, tower.small
    x = big.elements()
    t = tower.restrict(tower.tr_rel(x))
    F = big.mul(big.frobenius(x, e), tower.embed(h[t]))
    xs = small.elements()
    H = small.mul(small.frobenius(xs, e), h)
    return (VectorialFunction(Domain.of_field(big), F, f"x^(2^{e})*h(Tr[n/m](x))"),
            VectorialFunction(Domain.of_field(small), H, f"x^(2^{e})*h(x)"))


@dataclass
class FactorizationResult:
    ok: bool
    eq_wt: bool
    eq_nf: bool
    nf_exhaustive: int
    nf_formula: int
    counterexample: Optional[Dict[str, int]] = None


def check_walsh_factorization(tower: TowerSpec, F: VectorialFunction, H: VectorialFunction) -> FactorizationResult:
    """Compare W_{F_a}(w) with 2^m W_{H_a}(w) on the subfield and 0 off it, for a in F_{2^m}^*."""
    m, n = tower.m, tower.n
    small_a = np.arange(1, tower.small.order)
    big_a = tower.embed(small_a)
    WF = component_spectra(F, big_a)
    WH = component_spectra(H, small_a)
    expected = np.zeros_like(WF)
    sub = tower.subfield
    expected[:, sub] = WH[:, tower.restrict(sub)] << m
    bad = np.argwhere(WF != expected)
    cex = None
    if bad.size:
        r, w = bad[0]
        cex = {"a": int(big_a[r]), "w": int(w), "W_F": int(WF[r, w]), "expected": int(expected[r, w])}
    nf_formula = (1 << (n - 1)) - (1 << (m - 1)) * int(np.abs(WH).max())
    nf = nonlinearity(F)
    return FactorizationResult(cex is None and nf == nf_formula, cex is None, nf == nf_formula, nf, nf_formula, cex)


def verify_walsh_factorization(tower: TowerSpec, F: VectorialFunction, H: VectorialFunction) -> bool:
    return check_walsh_factorization(tower, F, H).ok


# -- monomial h ----------------------------------------------------------------------------------

def is_degenerate_exponent(u: int, m: int) -> bool:
    """u = 2^k mod 2^m - 1 makes x^u additive."""
    q1 = (1 << m) - 1
    return any(u % q1 == (1 << k) % q1 for k in range(m))


def monomial_gcd_ok(u: int, e: int, m: int) -> bool:
    q1 = (1 << m) - 1
    return math.gcd(u, q1) == 1 and math.gcd(abs(u - (1 << e)), q1) == 1


def h1_spectrum(u: int, m: int) -> np.ndarray:
    """Walsh spectrum of Tr(x^u) on F_{2^m}."""
    K = make_field(m)
    bits = K.trace_bit(monomial_table(K, u)).astype(np.uint8)
    return walsh_rows(bits, Domain.of_field(K))


@dataclass
class LResult:
    u: int
    m: int
    L: int
    nonlinearity: int
    conjecture_bound: int
    conjecture_holds: bool
    values: List[int]


def L_of_u(u: int, m: int, e: Optional[int] = None) -> LResult:
    """max_w |W_{Tr(x^u)}(w)| over F_{2^m}, the matching N_F for n = 2m, and the conjecture check."""
    if is_degenerate_exponent(u, m):
        raise ConstructionError(f"u = {u} is a power of 2 modulo 2^{m}-1 (linear case)")
    if e is not None and not monomial_gcd_ok(u, e, m):
        raise ConstructionError(f"gcd conditions fail for u = {u}, e = {e}, m = {m}")
    W = h1_spectrum(u, m)
    L = int(np.abs(W).max())
    n = 2 * m
    bound = 1 << (n // 4 + 1)
    return LResult(u, m, L, (1 << (n - 1)) - (1 << (m - 1)) * L, bound, L >= bound,
                   sorted(set(W.tolist())))


def niho_exponent(t: int, s: int, e: int) -> int:
    """u = s(2^t - 1) + 2^(e+1), valid when 0 < s < 2^t - 1 and gcd(2^e - s, 2^t + 1) = 1."""
    if t < 1 or e < 0:
        raise ConstructionError("need t >= 1 and e >= 0")
    if not 0 < s < (1 << t) - 1:
        raise ConstructionError(f"s = {s} outside (0, 2^{t} - 1)")
    if math.gcd(abs((1 << e) - s), (1 << t) + 1) != 1:
        raise ConstructionError(f"gcd(2^{e} - {s}, 2^{t} + 1) != 1")
    return s * ((1 << t) - 1) + (1 << (e + 1))


@dataclass
class NihoCheck:
    u: int
    L: int
    divisible: bool
    bound_ok: bool
    values: List[int]


def niho_check(t: int, s: int, e: int) -> NihoCheck:
    """All H_1 Walsh values are multiples of 2^t and L(u) >= 2^(t+1)."""
    u = niho_exponent(t, s, e)
    W = h1_spectrum(u, 2 * t)
    L = int(np.abs(W).max())
    return NihoCheck(u, L, bool(np.all(W % (1 << t) == 0)), L >= 1 << (t + 1), sorted(set(W.tolist())))


def count_niho_roots(u: int, m: int) -> int:
    """Number of roots of (x+1)^u + x^u + 1 in F_{2^m}."""
    K = make_field(m)
    x = K.elements()
    v = K.pow(x ^ 1, u) ^ K.pow(x, u) ^ 1
    return int(np.count_nonzero(v == 0))


@dataclass
class ThreeValuedResult:
    u: int
    m: int
    values: List[int]
    three_valued: bool
    A: int
    R: int
    a_matches_roots: bool
    a_power_of_two: bool
    nonlinearity: int
    bound_holds: bool


def three_valued_analysis(u: int, m: int) -> ThreeValuedResult:
    """Relate the magnitude A of a {0, +-A} spectrum of Tr(x^u) to the root count R."""
    W = h1_spectrum(u, m)
    vals = sorted(set(W.tolist()))
    A = int(np.abs(W).max())
    three = len(vals) == 3 and vals == [-A, 0, A]
    R = count_niho_roots(u, m)
    n = 2 * m
    # upper bound on N_F, compared through squares: A^2 >= 2^(m+2) or 2^(m+1)
    need = m + 2 if (m % 2 == 0 and u % 3) else m + 1
    return ThreeValuedResult(u, m, vals, three, A, R, A * A == (1 << m) * R,
                             A > 0 and A & (A - 1) == 0,
                             (1 << (n - 1)) - (1 << (m - 1)) * A, A * A >= 1 << need)


# Three-valued exponent rows: name -> (u(m, e), admissibility(m, e))
def _v2(x: int) -> int:
    return (x & -x).bit_length() - 1 if x else 10 ** 9


EXPONENT_ROWS = {
    "gold": (lambda m, e: (1 << e) + 1,
             lambda m, e: _v2(e) >= _v2(m)),
    "kasami": (lambda m, e: (1 << (2 * e)) - (1 << e) + 1,
               lambda m, e: _v2(e) > _v2(m) and math.gcd(m, e) == 1),
    "row3": (lambda m, e: (1 << (m // 2)) + (1 << ((m + 2) // 4)) + 1,
             lambda m, e: _v2(m) == 1 and (m + 2) % 4 == 0 and _v2(math.gcd(m, (m + 2) // 4)) == 1),
    "row4": (lambda m, e: (1 << ((m + 2) // 4)) + 3,
             lambda m, e: _v2(m) == 1 and (m + 2) % 4 == 0 and _v2(math.gcd(m, (m + 2) // 4)) == 1),
    "row5": (lambda m, e: (1 << ((m - 1) // 4)) + 3,
             lambda m, e: _v2(m) == 0 and (m - 1) % 4 == 0),
    "row6": (lambda m, e: (1 << (2 * e)) + (1 << e) - 1,
             lambda m, e: _v2(m) == 0 and (4 * e + 1) % m == 0),
}


def row_magnitude_squared(row: str, m: int, e: int) -> int:
    """Square of the listed |W_{H_1}| value."""
    if row == "gold":
        return 1 << (math.gcd(m, e) + m)
    if row in ("kasami", "row5", "row6"):
        return 1 << (m + 1)
    if row in ("row3", "row4"):
        return 4 << m
    raise KeyError(row)


def row_exponent(row: str, m: int, e: int) -> int:
    if row not in EXPONENT_ROWS:
        raise KeyError(f"unknown exponent row {row!r}")
    u_fn, ok = EXPONENT_ROWS[row]
    if not ok(m, e):
        raise ConstructionError(f"row {row} is not admissible at m = {m}, e = {e}")
    return u_fn(m, e)


def permutation_shift(u: int, m: int) -> Optional[int]:
    """Smallest e' with gcd(u, 2^m-1) = gcd(u - 2^e', 2^m-1) = 1, so h = x^(u - 2^e') permutes."""
    for ep in range(m):
        if monomial_gcd_ok(u, ep, m):
            return ep
    return None


def monomial_h(tower: TowerSpec, u: int, e: int) -> np.ndarray:
    """Table of h(x) = x^(u - 2^e) on the small field (negative exponents wrap mod 2^m - 1)."""
    q1 = (1 << tower.m) - 1
    return monomial_table(tower.small, (u - (1 << e)) % q1 or q1)


# -- linear h ----------------------------------------------------------------------------------

def is_linear(spec: FieldSpec, table: np.ndarray) -> bool:
    t = np.asarray(table, dtype=np.int64)
    if t[0] != 0:
        return False
    x = spec.elements()
    acc = np.zeros_like(x)
    for j in range(spec.degree):
        acc ^= np.where((x >> j) & 1, t[1 << j], 0)
    return bool(np.array_equal(acc, t))


@dataclass
class LinearHResult:
    ranks: Dict[int, int]
    r: int
    nf_exhaustive: int
    nf_formula: int
    bound: int
    attains_bound: bool
    rank_condition: bool
    rank_multiset: Dict[int, int] = field(default_factory=dict)
    cor2_holds: Optional[bool] = None


def linear_h_analysis(tower: TowerSpec, e: int, h: np.ndarray) -> LinearHResult:
    """Ranks r_a of Tr(a x^(2^e) h(x)), the resulting N_F, and the tightness conditions."""
    small = tower.small
    h = np.asarray(h, dtype=np.int64)
    if not is_permutation(h) or not is_linear(small, h):
        raise ConstructionError("h must be an F_2-linear permutation")
    m, n = tower.m, tower.n
    F, H = trace_perm(tower, e, h)
    dom = Domain.of_field(small)
    ranks = {}
    for a in range(1, small.order):
        bits = small.trace_bit(small.mul(a, H.table)).astype(np.uint8)
        ranks[a] = quadratic_rank(TruthTable(bits, dom), check_degree=False)
    even = [r for r in ranks.values() if r % 2 == 0]
    r = min(even)
    nf_formula = (1 << (n - 1)) - (1 << (n - r // 2 - 1))
    nf = nonlinearity(F)
    bound = (1 << (n - 1)) - (1 << (3 * n // 4))
    multiset: Dict[int, int] = {}
    for v in ranks.values():
        multiset[v] = multiset.get(v, 0) + 1
    # tight iff the smallest even rank is m - 2 (m even) or m - 1 (m odd)
    if m % 2 == 0:
        cond = set(even) <= {m, m - 2} and m - 2 in even
    else:
        cond = set(even) == {m - 1}
    cor2 = None
    if np.array_equal(h, small.elements()):
        cor2 = (nf == bound) == (math.gcd(e, m) == 1)
    return LinearHResult(ranks, r, nf, nf_formula, bound, nf == bound, cond,
                         dict(sorted(multiset.items())), cor2)
