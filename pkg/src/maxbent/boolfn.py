"""Boolean functions on F_2-spaces carrying a trace inner product.

A :class:`Domain` is either a field F_{2^k} with <w, x> = Tr(wx) or the product
F_{2^m} x F_{2^m} with <(w1, w2), (y, z)> = Tr(w1 y) + Tr(w2 z).  Product
points are encoded as ``y | z << m``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Union

import numpy as np

from . import gf2
from .field import FieldSpec


class NotBentError(ValueError):
    pass


class DegreeError(ValueError):
    pass


class Domain:
    """Trace-form descriptor: the F_2-space V plus its inner product."""

    def __init__(self, field: FieldSpec, copies: int = 1):
        if copies not in (1, 2):
            raise ValueError("copies must be 1 (field) or 2 (product)")
        self.field = field
        self.copies = copies
        self.n_vars = field.degree * copies
        self.size = 1 << self.n_vars

    @classmethod
    def of_field(cls, field: FieldSpec) -> "Domain":
        return cls(field, 1)

    @classmethod
    def product(cls, field: FieldSpec) -> "Domain":
        return cls(field, 2)

    @property
    def is_product(self) -> bool:
        return self.copies == 2

    def __repr__(self) -> str:
        k = self.field.degree
        return f"Domain(F_2^{k})" if self.copies == 1 else f"Domain(F_2^{k} x F_2^{k})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Domain) and (self.field, self.copies) == (other.field, other.copies)

    def __hash__(self) -> int:
        return hash((self.field, self.copies))

    def __getstate__(self):
        return {"field": self.field, "copies": self.copies}

    def __setstate__(self, state):
        self.__init__(state["field"], state["copies"])

    def points(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def split(self, v):
        """(y, z) halves of product points."""
        k = self.field.degree
        return v & self.field.mask, v >> k

    def join(self, y, z):
        return y | (z << self.field.degree)

    @cached_property
    def pairing(self) -> np.ndarray:
        """pairing[w] = mask c with <w, v> = parity(c & v)."""
        p = self.field.pairing
        if self.copies == 1:
            return p
        k = self.field.degree
        w = self.points()
        out = p[w & self.field.mask] | (p[w >> k] << k)
        out.setflags(write=False)
        return out

    def inner(self, w, v):
        return np.bitwise_count(np.asarray(self.pairing[w] & v)) & 1


class DotDomain:
    """Plain coordinate dot product on F_2^N (no field structure)."""

    copies = 1

    def __init__(self, n_vars: int):
        self.n_vars = n_vars
        self.size = 1 << n_vars

    @cached_property
    def pairing(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def points(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DotDomain) and other.n_vars == self.n_vars

    def __hash__(self) -> int:
        return hash(("dot", self.n_vars))


AnyDomain = Union[Domain, DotDomain]


@dataclass(eq=False)
class TruthTable:
    """f : V -> F_2 as a 0/1 byte array indexed by point coordinates."""

    bits: np.ndarray
    domain: Optional[AnyDomain] = None

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8) & 1
        n = int(bits.size).bit_length() - 1
        if bits.ndim != 1 or bits.size != 1 << n:
            raise ValueError("truth table length must be a power of two")
        if self.domain is not None and self.domain.size != bits.size:
            raise ValueError("truth table length does not match its domain")
        self.bits = bits

    @property
    def n_vars(self) -> int:
        return int(self.bits.size).bit_length() - 1

    @property
    def size(self) -> int:
        return int(self.bits.size)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TruthTable) and np.array_equal(self.bits, other.bits)

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        return TruthTable(self.bits ^ other.bits, self.domain)

    def complement(self) -> "TruthTable":
        return TruthTable(self.bits ^ 1, self.domain)

    def weight(self) -> int:
        return int(self.bits.sum())

    def packed(self) -> bytes:
        """Bit-packed form, bit i of the stream is f(i) (little-endian in each byte)."""
        return np.packbits(self.bits, bitorder="little").tobytes()

    @classmethod
    def from_packed(cls, data: bytes, n_vars: int, domain: Optional[AnyDomain] = None) -> "TruthTable":
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")[: 1 << n_vars]
        return cls(bits, domain)

    @classmethod
    def from_function(cls, fn, domain: AnyDomain) -> "TruthTable":
        return cls(np.array([fn(int(v)) & 1 for v in domain.points()], dtype=np.uint8), domain)


@dataclass(eq=False)
class WalshSpectrum:
    values: np.ndarray
    domain: Optional[AnyDomain] = None

    @property
    def n_vars(self) -> int:
        return int(self.values.size).bit_length() - 1

    def __getitem__(self, w):
        return self.values[w]

    def max_abs(self) -> int:
        return int(np.abs(self.values).max())

    def check_invariants(self, f0: int) -> None:
        n = self.n_vars
        v = self.values.astype(np.int64)
        if int((v * v).sum()) != 1 << (2 * n):
            raise AssertionError("Parseval identity violated")
        if int(v.sum()) != (1 << n) * (1 - 2 * f0):
            raise AssertionError("spectrum sum identity violated")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["w_hex", "walsh"])
        width = max(1, (self.n_vars + 3) // 4)
        for i, val in enumerate(self.values.tolist()):
            w.writerow([f"0x{i:0{width}x}", val])
        return buf.getvalue()


# -- transforms ------------------------------------------------------------------------------

def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly along the last axis (coordinate dot product)."""
    a = np.array(a, dtype=np.int64)
    shape = a.shape
    size = shape[-1]
    lead = int(np.prod(shape[:-1], dtype=np.int64)) if len(shape) > 1 else 1
    a = a.reshape(lead, size)
    h = 1
    while h < size:
        a = a.reshape(lead, -1, 2, h)
        x, y = a[:, :, 0, :], a[:, :, 1, :]
        a = np.stack((x + y, x - y), axis=2)
        h <<= 1
    return a.reshape(shape)


def signs(bits: np.ndarray) -> np.ndarray:
    return 1 - 2 * np.asarray(bits, dtype=np.int64)


def walsh_rows(bits: np.ndarray, domain: AnyDomain) -> np.ndarray:
    """Spectra of a stack of truth tables (last axis), indexed by w in the domain."""
    raw = fwht(signs(bits))
    return raw[..., domain.pairing]


def _resolve(f: TruthTable, inner: Optional[AnyDomain]) -> AnyDomain:
    d = inner if inner is not None else f.domain
    return d if d is not None else DotDomain(f.n_vars)


def walsh_spectrum(f: TruthTable, inner: Optional[AnyDomain] = None, check: bool = True) -> WalshSpectrum:
    dom = _resolve(f, inner)
    spec = WalshSpectrum(walsh_rows(f.bits, dom), dom)
    if check:
        spec.check_invariants(int(f.bits[0]))
    return spec


def naive_walsh(f: TruthTable, w: int, inner: Optional[AnyDomain] = None) -> int:
    """Direct character sum; the reference oracle for the fast transform."""
    dom = _resolve(f, inner)
    c = int(dom.pairing[w])
    total = 0
    for v in range(f.size):
        total += 1 - 2 * ((int(f.bits[v]) + (c & v).bit_count()) & 1)
    return total


# -- spectral classification ------------------------------------------------------------------

def _spec(f) -> WalshSpectrum:
    return f if isinstance(f, WalshSpectrum) else walsh_spectrum(f)


def is_bent(f) -> bool:
    s = _spec(f)
    n = s.n_vars
    if n % 2:
        return False
    return bool(np.all(np.abs(s.values) == 1 << (n // 2)))


def plateau_profile(f) -> Dict[int, int]:
    """Multiset of |W| values as {magnitude: multiplicity}."""
    s = _spec(f)
    vals, counts = np.unique(np.abs(s.values), return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def plateau_k(max_abs: int, n: int) -> Optional[int]:
    if max_abs <= 0 or max_abs & (max_abs - 1):
        return None
    k = 2 * (max_abs.bit_length() - 1) - n
    return k if k >= 0 else None


def is_plateaued(f) -> Optional[int]:
    """k if every W value is in {0, +-2^((N+k)/2)}, else None."""
    s = _spec(f)
    a = np.abs(s.values)
    mx = int(a.max())
    if not np.all((a == 0) | (a == mx)):
        return None
    return plateau_k(mx, s.n_vars)


def profile_class(f) -> str:
    s = _spec(f)
    if is_bent(s):
        return "bent"
    k = is_plateaued(s)
    return "non-plateaued" if k is None else f"plateaued:{k}"


def nonlinearity_bool(f) -> int:
    s = _spec(f)
    return (1 << (s.n_vars - 1)) - s.max_abs() // 2


def dual(f: TruthTable, inner: Optional[AnyDomain] = None) -> TruthTable:
    s = walsh_spectrum(f, inner)
    if not is_bent(s):
        raise NotBentError("dual is only defined for bent functions")
    return TruthTable((s.values < 0).astype(np.uint8), s.domain)


# -- derivatives and degree ------------------------------------------------------------------

def derivative(f: TruthTable, a: int) -> TruthTable:
    v = np.arange(f.size, dtype=np.int64)
    return TruthTable(f.bits[v ^ a] ^ f.bits, f.domain)


def is_balanced(f: TruthTable) -> bool:
    return 2 * f.weight() == f.size


def bent_by_derivatives(f: TruthTable) -> bool:
    """Bentness through balancedness of every nonzero first derivative."""
    v = np.arange(f.size, dtype=np.int64)
    for a in range(1, f.size):
        if 2 * int((f.bits[v ^ a] ^ f.bits).sum()) != f.size:
            return False
    return True


def anf(f: TruthTable) -> np.ndarray:
    """Moebius transform: coefficient of the monomial prod_{i in mask} x_i."""
    a = f.bits.astype(np.uint8).copy()
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        a[:, 1, :] ^= a[:, 0, :]
        h <<= 1
    return a.reshape(size)


def algebraic_degree(f: TruthTable) -> int:
    coeffs = anf(f)
    idx = np.nonzero(coeffs)[0]
    if idx.size == 0:
        return 0
    return int(np.bitwise_count(idx).max())


def bilinear_matrix(f: TruthTable) -> list:
    """Rows B(e_i, .) of B(x, y) = f(x+y) + f(x) + f(y) + f(0) on the coordinate basis."""
    n = f.n_vars
    b = f.bits
    f0 = int(b[0])
    rows = []
    for i in range(n):
        ei = 1 << i
        row = 0
        for j in range(n):
            ej = 1 << j
            row |= (int(b[ei ^ ej]) ^ int(b[ei]) ^ int(b[ej]) ^ f0) << j
        rows.append(row)
    return rows


def quadratic_rank(f: TruthTable, check_degree: bool = True) -> int:
    """Rank of the symplectic form of a quadratic f (always even)."""
    if check_degree and algebraic_degree(f) > 2:
        raise DegreeError("quadratic_rank needs algebraic degree <= 2")
    return gf2.rank(bilinear_matrix(f))
