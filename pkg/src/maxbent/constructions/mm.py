"""Maiorana-McFarland perturbations on F_{2^m} x F_{2^m}."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from .. import gf2
from ..boolfn import Domain, TruthTable, derivative, dual
from ..field import FieldSpec
from ..vecfn import VectorialFunction, component
from .niho import ReducedPolynomial
from .trace import ConstructionError

Pair = Tuple[int, int]


def _phi(K: FieldSpec, j: int, x):
    return K.frobenius(x, j)


def _phi_inv(K: FieldSpec, j: int, x):
    return K.frobenius(x, (K.degree - j) % K.degree)


def validate_mm(K: FieldSpec, j: int, u11: int, us: Sequence[Pair]) -> None:
    m = K.degree
    k = len(us) + 1
    if not 2 <= k <= m:
        raise ConstructionError(f"need 2 <= k <= m, got k = {k}, m = {m}")
    if not 0 <= j < m:
        raise ConstructionError(f"automorphism exponent j = {j} outside [0, {m})")
    pu = int(_phi_inv(K, j, u11))
    for a, b in us:
        if int(_phi(K, j, b)) != a:
            raise ConstructionError(f"u_i1 = 0x{a:x} is not phi(u_i2) for u_i2 = 0x{b:x}")
        if K.trace_bit(K.mul(pu, b)):
            raise ConstructionError(f"Tr(phi^-1(u11) * 0x{b:x}) != 0")


def mm_construct(K: FieldSpec, j: int, u11: int, us: Sequence[Pair], R: ReducedPolynomial) -> VectorialFunction:
    """F(y, z) = (y phi(z), z) + (u11 y, 0) R(Tr(u_21 y + u_22 z), ...), phi(z) = z^(2^j)."""
    validate_mm(K, j, u11, us)
    if R.arity != len(us):
        raise ConstructionError(f"R takes {R.arity} inputs but {len(us)} pairs were given")
    dom = Domain.product(K)
    y, z = dom.split(dom.points())
    args = np.stack([K.trace_bit(K.mul(a, y) ^ K.mul(b, z)).astype(np.int64) for a, b in us])
    r = R(args)
    first = K.mul(y, _phi(K, j, z)) ^ np.where(r == 1, K.mul(u11, y), 0)
    return VectorialFunction(dom, dom.join(first, z), f"(y*z^(2^{j}), z)+(u11*y, 0)*R(...)")


def mm_base_dual(K: FieldSpec, j: int, a: int, b: int) -> TruthTable:
    """G*_{a,b}(y, z) = Tr((z + b) phi^-1(a^-1 y))."""
    if a == 0:
        raise ConstructionError("a must be nonzero")
    dom = Domain.product(K)
    y, z = dom.split(dom.points())
    bits = K.trace_bit(K.mul(z ^ b, _phi_inv(K, j, K.mul(K.inv(a), y))))
    return TruthTable(bits.astype(np.uint8), dom)


def mm_dual_formula(K: FieldSpec, j: int, u11: int, us: Sequence[Pair], R: ReducedPolynomial,
                    a: int, b: int) -> TruthTable:
    gs = mm_base_dual(K, j, a, b)
    dom = gs.domain
    d1 = derivative(gs, int(K.mul(a, u11))).bits
    ds = np.stack([derivative(gs, int(dom.join(p, q))).bits for p, q in us])
    return TruthTable(gs.bits ^ (d1 & R(ds)), dom)


def mm_dual_check(F: VectorialFunction, K: FieldSpec, j: int, u11: int, us: Sequence[Pair],
                  R: ReducedPolynomial, a: int, b: int) -> bool:
    comp = component(F, int(Domain.product(K).join(a, b)))
    return dual(comp) == mm_dual_formula(K, j, u11, us, R, a, b)


def mm_completeness_test(f: TruthTable) -> bool:
    """True iff D_(w1,0) D_(w2,0) f vanishes on y = 0 for every w1, w2, z."""
    n = f.n_vars
    if n % 2:
        raise ValueError("product domain needs an even number of variables")
    m = n // 2
    T = f.bits.reshape(1 << m, 1 << m)  # T[z, y]
    w = np.arange(1 << m)
    s = T[:, w[:, None] ^ w[None, :]] ^ T[:, w][:, :, None] ^ T[:, w][:, None, :] ^ T[:, :1][:, :, None]
    return not bool(s.any())


def mm_params(K: FieldSpec, j: int, k: int, rng: np.random.Generator) -> Tuple[int, List[Pair]]:
    """Random valid (u11, [(u_i1, u_i2)]) with independent u_i2."""
    m = K.degree
    if not 2 <= k <= m:
        raise ConstructionError(f"need 2 <= k <= m, got k = {k}")
    u11 = int(rng.integers(1, K.order))
    pu = int(_phi_inv(K, j, u11))
    perp = [v for v in range(1, K.order) if not K.trace_bit(K.mul(pu, v))]
    rng.shuffle(perp)
    chosen: List[int] = []
    for v in perp:
        if len(chosen) == k - 1:
            break
        if gf2.is_independent(chosen + [v]):
            chosen.append(v)
    return u11, [(int(_phi(K, j, v)), v) for v in chosen]


def mm_outside_witness(F: VectorialFunction) -> Optional[Pair]:
    """First component (a, b), a != 0, that fails the complete-MM criterion."""
    dom = F.domain
    K = dom.field
    for a in range(1, K.order):
        for b in range(K.order):
            if not mm_completeness_test(component(F, int(dom.join(a, b)))):
                return a, b
    return None
