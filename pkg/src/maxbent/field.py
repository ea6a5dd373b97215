"""Arithmetic in GF(2^k), traces, subfield towers and dual bases.

Elements are ints holding polynomial-basis coordinates, little-endian: bit i is
the coefficient of alpha^i.  The same int indexes truth tables and spectra.
Every :class:`FieldSpec` method accepts either a Python int or a numpy integer
array and returns the same kind.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from . import gf2

ArrayLike = Union[int, np.ndarray]

MIN_DEGREE = 2
MAX_DEGREE = 20
TABLE_DEGREE_LIMIT = 16

REGISTRY_ENV = "MAXBENT_FIELD_REGISTRY"

# Conway polynomials over F_2; subfields of these fields embed canonically
# (the norm of a root down to F_{2^d} is a root of the degree-d entry).
CONWAY_REGISTRY = """\
2:0x7
3:0xb
4:0x13
5:0x25
6:0x5b
7:0x83
8:0x11d
9:0x211
10:0x46f
11:0x805
12:0x10eb
13:0x201b
14:0x40a9
15:0x8035
16:0x1002d
17:0x20009
18:0x41403
19:0x80027
20:0x1006f3
"""


class FieldError(ValueError):
    pass


def parse_registry(text: str) -> Dict[int, int]:
    """Parse ``degree:modulus-hex`` lines; blank lines and ``#`` comments are skipped."""
    out: Dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            deg_s, mod_s = line.split(":")
            deg, mod = int(deg_s), int(mod_s, 16)
        except ValueError as exc:
            raise FieldError(f"registry line {lineno}: expected 'degree:hex', got {line!r}") from exc
        if mod.bit_length() - 1 != deg:
            raise FieldError(f"registry line {lineno}: modulus {mod:#x} does not have degree {deg}")
        out[deg] = mod
    return out


def format_registry(registry: Dict[int, int]) -> str:
    return "".join(f"{d}:{m:#x}\n" for d, m in sorted(registry.items()))


_registry_cache: Dict[Optional[str], Dict[int, int]] = {}


def default_registry(path: Optional[str] = None) -> Dict[int, int]:
    """The shipped registry, overlaid by ``path`` or the registry env var if set."""
    path = path or os.environ.get(REGISTRY_ENV) or None
    if path not in _registry_cache:
        reg = parse_registry(CONWAY_REGISTRY)
        if path:
            with open(path) as fh:
                reg.update(parse_registry(fh.read()))
        _registry_cache[path] = reg
    return dict(_registry_cache[path])


# -- polynomial arithmetic over F_2 on int bitmasks --------------------------------

def clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(clmul(a, b), m)


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(modulus: int) -> bool:
    """Rabin-style test: gcd(x^(2^j) - x, f) = 1 for 1 <= j <= deg/2."""
    k = modulus.bit_length() - 1
    if k < 1:
        return False
    if k == 1:
        return True
    t = 2  # the polynomial x
    for _ in range(k // 2):
        t = poly_mulmod(t, t, modulus)
        if poly_gcd(t ^ 2, modulus) != 1:
            return False
    return True


def prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _popcount_parity(v: ArrayLike) -> ArrayLike:
    if isinstance(v, np.ndarray):
        return (np.bitwise_count(v) & 1).astype(np.int64)
    return int(v).bit_count() & 1


class FieldSpec:
    """A concrete GF(2^k) given by an irreducible modulus and a primitive element."""

    def __init__(self, degree: int, modulus: int, generator: Optional[int] = None):
        if not MIN_DEGREE <= degree <= MAX_DEGREE:
            raise FieldError(f"degree must be in [{MIN_DEGREE}, {MAX_DEGREE}], got {degree}")
        if modulus.bit_length() - 1 != degree:
            raise FieldError(f"modulus {modulus:#x} does not have degree {degree}")
        if not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus:#x} is reducible over F_2")
        self.degree = degree
        self.modulus = modulus
        self.order = 1 << degree
        self.mask = self.order - 1
        if generator is None:
            generator = next(g for g in range(2, self.order) if self._is_primitive(g))
        elif not self._is_primitive(generator):
            raise FieldError(f"{generator:#x} is not a generator of GF(2^{degree})")
        self.generator = generator
        self._exp: Optional[np.ndarray] = None
        self._log: Optional[np.ndarray] = None
        if degree <= TABLE_DEGREE_LIMIT:
            self._build_tables()

    # -- construction helpers -------------------------------------------------------

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = poly_mulmod(r, a, self.modulus)
            a = poly_mulmod(a, a, self.modulus)
            e >>= 1
        return r

    def _is_primitive(self, g: int) -> bool:
        q1 = self.order - 1
        if not 0 < g < self.order or self._pow_slow(g, q1) != 1:
            return False
        return all(self._pow_slow(g, q1 // p) != 1 for p in prime_factors(q1))

    def _build_tables(self) -> None:
        q1 = self.order - 1
        exp = np.zeros(2 * q1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        g, mod, top = self.generator, self.modulus, self.order
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = clmul(x, g)
            if x >= top:
                x = poly_mod(x, mod)
        exp[q1:] = exp[:q1]
        self._exp, self._log = exp, log

    def __repr__(self) -> str:
        return f"FieldSpec(degree={self.degree}, modulus={self.modulus:#x})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.degree, self.modulus) == (other.degree, other.modulus)

    def __hash__(self) -> int:
        return hash((self.degree, self.modulus))

    def __getstate__(self):
        return {"degree": self.degree, "modulus": self.modulus, "generator": self.generator}

    def __setstate__(self, state):
        self.__init__(state["degree"], state["modulus"], state["generator"])

    # -- element helpers --------------------------------------------------------------

    def __call__(self, coords: int) -> "FieldElement":
        return FieldElement(int(coords), self)

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self.generator, self)

    def gen_pow(self, j: int) -> int:
        return self.pow(self.generator, j)

    # -- arithmetic ---------------------------------------------------------------------

    def add(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        return a ^ b

    def mul(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        if self._exp is None:
            return self._mul_shift(a, b)
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            a = np.asarray(a, dtype=np.int64)
            b = np.asarray(b, dtype=np.int64)
            r = self._exp[self._log[a] + self._log[b]]
            return np.where((a == 0) | (b == 0), 0, r)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def _mul_shift(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        if not (isinstance(a, np.ndarray) or isinstance(b, np.ndarray)):
            return poly_mulmod(int(a), int(b), self.modulus)
        a = np.array(a, dtype=np.int64, copy=True)
        b = np.array(b, dtype=np.int64, copy=True)
        a, b = np.broadcast_arrays(a, b)
        a, b = a.copy(), b.copy()
        r = np.zeros_like(a)
        top, red = self.order, self.modulus
        for _ in range(self.degree):
            r ^= np.where(b & 1, a, 0)
            b >>= 1
            a <<= 1
            a ^= np.where(a & top, red, 0)
        return r

    def mul_slow(self, a: int, b: int) -> int:
        """Shift-and-reduce product; independent of the log tables."""
        return poly_mulmod(a, b, self.modulus)

    def inv(self, a: ArrayLike) -> ArrayLike:
        if isinstance(a, np.ndarray):
            if np.any(a == 0):
                raise ZeroDivisionError("inverse of 0 in a field")
            return self.pow(a, self.order - 2)
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a field")
        return self.pow(a, self.order - 2)

    def div(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        return self.mul(a, self.inv(b))

    def pow(self, a: ArrayLike, e: int) -> ArrayLike:
        """a^e with 0^0 = 1 and 0^e = 0 for e > 0; negative e needs a != 0."""
        q1 = self.order - 1
        e = int(e)
        if isinstance(a, np.ndarray):
            a = np.asarray(a, dtype=np.int64)
            if e < 0 and np.any(a == 0):
                raise ZeroDivisionError("negative power of 0")
            if e == 0:
                return np.ones_like(a)
            er = e % q1
            if self._exp is not None:
                r = self._exp[(self._log[a] * er) % q1]
            else:
                r = np.ones_like(a)
                base = a.copy()
                k = er
                while k:
                    if k & 1:
                        r = self.mul(r, base)
                    base = self.mul(base, base)
                    k >>= 1
            return np.where(a == 0, 0, r)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if e == 0 else 0
        if e == 0:
            return 1
        er = e % q1
        if self._exp is not None:
            return int(self._exp[(int(self._log[a]) * er) % q1])
        return self._pow_slow(int(a), er)

    def square(self, a: ArrayLike) -> ArrayLike:
        return self.mul(a, a)

    def frobenius(self, a: ArrayLike, j: int) -> ArrayLike:
        """a^(2^j), j taken mod the degree."""
        j %= self.degree
        for _ in range(j):
            a = self.square(a)
        return a

    def trace(self, a: ArrayLike, sub: int = 1, top: Optional[int] = None) -> ArrayLike:
        """Relative trace Tr_{2^top/2^sub}(a) = sum_{i < top/sub} a^(2^(sub*i)).

        ``top`` defaults to the field degree; a smaller ``top`` applies the trace
        formula of the subfield F_{2^top} (meaningful for arguments in it).
        """
        top = self.degree if top is None else top
        if sub <= 0 or top % sub or self.degree % top:
            raise FieldError(f"Tr[{top}/{sub}] is not defined inside GF(2^{self.degree})")
        acc = a
        x = a
        for _ in range(top // sub - 1):
            x = self.frobenius(x, sub)
            acc = acc ^ x
        return acc

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("log of 0")
        if self._log is not None:
            return int(self._log[a])
        x, i = 1, 0
        while x != a:
            x = poly_mulmod(x, self.generator, self.modulus)
            i += 1
        return i

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        q1 = self.order - 1
        return q1 // math.gcd(q1, self.log(a))

    # -- trace form ---------------------------------------------------------------------

    @cached_property
    def trace_mask(self) -> int:
        """Coordinate mask t with Tr(x) = parity(x & t)."""
        return sum(self.trace(1 << i) << i for i in range(self.degree))

    def trace_bit(self, a: ArrayLike) -> ArrayLike:
        return _popcount_parity(a & self.trace_mask)

    @cached_property
    def pairing(self) -> np.ndarray:
        """pairing[w] is the mask c with Tr(w*x) = parity(c & x) for every x.

        Bit j of pairing[w] is Tr(w * alpha^j), i.e. the coordinates of w in the
        dual basis.
        """
        w = self.elements()
        out = np.zeros(self.order, dtype=np.int64)
        for j in range(self.degree):
            out |= self.trace_bit(self.mul(w, 1 << j)) << j
        out.setflags(write=False)
        return out

    def subfield_elements(self, d: int) -> np.ndarray:
        """Sorted coords of the subfield F_{2^d}: the fixed points of x -> x^(2^d)."""
        if self.degree % d:
            raise FieldError(f"{d} does not divide {self.degree}")
        x = self.elements()
        return x[self.frobenius(x, d) == x]


def make_field(degree: int, modulus: Union[int, str] = "default", registry: Optional[Dict[int, int]] = None) -> FieldSpec:
    if not MIN_DEGREE <= degree <= MAX_DEGREE:
        raise FieldError(f"degree must be in [{MIN_DEGREE}, {MAX_DEGREE}], got {degree}")
    if modulus == "default" or modulus is None:
        reg = registry if registry is not None else default_registry()
        if degree not in reg:
            raise FieldError(f"no registry modulus for degree {degree}")
        modulus = reg[degree]
    elif isinstance(modulus, str):
        modulus = int(modulus, 16) if modulus.lower().startswith("0x") else int(modulus)
    return _cached_field(degree, int(modulus))


_field_cache: Dict[Tuple[int, int], FieldSpec] = {}


def _cached_field(degree: int, modulus: int) -> FieldSpec:
    key = (degree, modulus)
    if key not in _field_cache:
        _field_cache[key] = FieldSpec(degree, modulus)
    return _field_cache[key]


@dataclass(frozen=True)
class FieldElement:
    coords: int
    spec: FieldSpec

    def __post_init__(self):
        if not 0 <= self.coords < self.spec.order:
            raise FieldError(f"{self.coords:#x} is not an element of GF(2^{self.spec.degree})")

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise FieldError("operands belong to different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.coords ^ other.coords, self.spec)

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec.mul(self.coords, other.coords), self.spec)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec.div(self.coords, other.coords), self.spec)

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.spec.pow(self.coords, e), self.spec)

    def __neg__(self) -> "FieldElement":
        return self

    def __bool__(self) -> bool:
        return self.coords != 0

    def __int__(self) -> int:
        return self.coords

    def __repr__(self) -> str:
        return f"GF(2^{self.spec.degree})({self.coords:#x})"

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec.inv(self.coords), self.spec)

    def trace(self, sub: int = 1) -> "FieldElement":
        return trace(self, sub)

    def frobenius(self, j: int) -> "FieldElement":
        return frobenius(self, j)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, e: int) -> FieldElement:
    return a ** e


def trace(x: FieldElement, subdegree: int) -> FieldElement:
    if subdegree <= 0 or x.spec.degree % subdegree:
        raise FieldError(f"subdegree {subdegree} does not divide {x.spec.degree}")
    return FieldElement(x.spec.trace(x.coords, subdegree), x.spec)


def frobenius(x: FieldElement, j: int) -> FieldElement:
    return FieldElement(x.spec.frobenius(x.coords, j), x.spec)


# -- dual basis ------------------------------------------------------------------------------

@dataclass(frozen=True)
class DualBasis:
    spec: FieldSpec
    basis: Tuple[int, ...]
    dual: Tuple[int, ...]

    def coordinates(self, x: int) -> List[int]:
        """x = sum_i Tr(x * dual_i) * basis_i; returns the coefficients."""
        return [self.spec.trace(self.spec.mul(x, d)) for d in self.dual]


def dual_basis(spec: FieldSpec) -> DualBasis:
    """Trace-dual of the polynomial basis, by inverting the Gram matrix [Tr(b_i b_j)]."""
    k = spec.degree
    basis = tuple(1 << i for i in range(k))
    gram = [sum(spec.trace(spec.mul(bi, bj)) << j for j, bj in enumerate(basis)) for bi in basis]
    ginv = gf2.inverse(gram)
    # b*_j = sum_i ginv[j][i] b_i, which as a coordinate mask is just row j
    return DualBasis(spec, basis, tuple(ginv))


# -- towers ----------------------------------------------------------------------------------

class TowerSpec:
    """F_{2^m} embedded in F_{2^n}, n = 2m."""

    def __init__(self, big: FieldSpec, small: FieldSpec):
        if big.degree != 2 * small.degree:
            raise FieldError("tower requires big degree = 2 * small degree")
        self.big, self.small = big, small
        self.m = small.degree
        self.n = big.degree
        qm1 = small.order - 1
        cof = (big.order - 1) // qm1
        root = big.pow(big.generator, cof)  # generates the order-(2^m - 1) subgroup
        poly = small.modulus
        for s in range(1, qm1):
            if math.gcd(s, qm1) != 1:
                continue
            r = big.pow(root, s)
            if _eval_poly(big, poly, r) == 0:
                self.shift = s
                break
        else:  # pragma: no cover - a degree-m irreducible always has a root here
            raise FieldError("no embedding found")
        self.image_gen = big.pow(root, self.shift)
        emb = np.zeros(small.order, dtype=np.int64)
        x = 1
        for i in range(qm1):
            emb[small.gen_pow(i)] = x
            x = big.mul(x, self.image_gen)
        emb.setflags(write=False)
        self.embed_table = emb
        back = np.full(big.order, -1, dtype=np.int64)
        back[emb] = np.arange(small.order)
        back.setflags(write=False)
        self.restrict_table = back

    def __repr__(self) -> str:
        return f"TowerSpec(m={self.m}, big={self.big!r}, small={self.small!r})"

    def __getstate__(self):
        return {"big": self.big, "small": self.small}

    def __setstate__(self, state):
        self.__init__(state["big"], state["small"])

    def embed(self, x: ArrayLike) -> ArrayLike:
        r = self.embed_table[x]
        return r if isinstance(r, np.ndarray) else int(r)

    def restrict(self, x: ArrayLike) -> ArrayLike:
        """Inverse of embed; raises if some value lies outside the subfield."""
        r = self.restrict_table[x]
        if np.any(np.asarray(r) < 0):
            raise FieldError("element is not in the embedded subfield")
        return r if isinstance(r, np.ndarray) else int(r)

    def in_subfield(self, x: ArrayLike) -> ArrayLike:
        r = self.restrict_table[x] >= 0
        return r if isinstance(r, np.ndarray) else bool(r)

    @cached_property
    def subfield(self) -> np.ndarray:
        """Sorted big-field coords of the embedded F_{2^m}."""
        return np.sort(self.embed_table)

    def conj(self, x: ArrayLike) -> ArrayLike:
        """x^(2^m)."""
        return self.big.frobenius(x, self.m)

    def tr_small(self, x: ArrayLike) -> ArrayLike:
        """Tr_{2^m/2} applied inside the big field (argument expected in F_{2^m})."""
        return self.big.trace(x, 1, self.m)

    def tr_rel(self, x: ArrayLike) -> ArrayLike:
        """Tr_{2^n/2^m}(x) = x + x^(2^m)."""
        return x ^ self.conj(x)


def _eval_poly(spec: FieldSpec, poly: int, x: int) -> int:
    acc = 0
    for i in range(poly.bit_length() - 1, -1, -1):
        acc = spec.mul(acc, x) ^ ((poly >> i) & 1)
    return acc


_tower_cache: Dict[Tuple[FieldSpec, FieldSpec], TowerSpec] = {}


def make_tower(m: int, big_modulus: Union[int, str] = "default", small_modulus: Union[int, str] = "default",
               registry: Optional[Dict[int, int]] = None) -> TowerSpec:
    if not 2 <= m <= 10:
        raise FieldError(f"tower parameter m must be in [2, 10], got {m}")
    big = make_field(2 * m, big_modulus, registry)
    small = make_field(m, small_modulus, registry)
    key = (big, small)
    if key not in _tower_cache:
        _tower_cache[key] = TowerSpec(big, small)
    return _tower_cache[key]


def v2(i: int) -> float:
    """2-adic valuation; v2(0) is +inf."""
    if i == 0:
        return math.inf
    return (i & -i).bit_length() - 1
