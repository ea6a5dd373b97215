"""A small expression language for functions over GF(2^n) and F_{2^m} x F_{2^m}.

Grammar (EBNF)::

    top      = expr | "(" expr "," expr ")" ;
    expr     = term { ("+" | "-") term } ;
    term     = factor { "*" factor } ;
    factor   = primary [ "^" exponent ] ;
    primary  = "x" | "y" | "z" | NAME | INT | HEX | "g" [ "^" exponent ]
             | "Tr" "[" iexpr "/" iexpr "]" "(" expr ")"
             | "Frob" "[" iexpr "]" "(" expr ")"
             | "(" expr [ "," expr ] ")" ;
    exponent = INT | "m" | "n" | "(" iexpr ")" | "-" exponent ;
    iexpr    = iterm { ("+" | "-") iterm } ;
    iterm    = ipow { "*" ipow } ;
    ipow     = iatom [ "^" ipow ] ;
    iatom    = INT | "m" | "n" | "(" iexpr ")" | "-" iatom ;

``x`` is the variable over a field domain, ``y`` and ``z`` the two variables
over a product domain.  ``m`` and ``n`` are the tower degrees (n = 2m).  INT
and HEX constants are polynomial-basis coordinates; ``g^j`` is a power of the
field generator; other names must be supplied as bindings.  Field addition and
subtraction coincide.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from .boolfn import Domain, TruthTable
from .field import FieldElement, FieldSpec, TowerSpec
from .vecfn import VectorialFunction

MAX_EXPONENT_BITS = 4096


class ExprError(ValueError):
    def __init__(self, msg: str, pos: Optional[int] = None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} at position {pos}")


# -- AST --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    coords: int


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Trace:
    top: int
    sub: int
    child: "Expr"


@dataclass(frozen=True)
class Frob:
    j: int
    child: "Expr"


@dataclass(frozen=True)
class Pair:
    left: "Expr"
    right: "Expr"


Expr = Union[Var, Const, Add, Mul, Pow, Trace, Frob, Pair]


# -- ambient ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Ambient:
    """Where an expression lives: the evaluation field and the variables allowed."""

    field: FieldSpec
    product: bool
    m: Optional[int]
    n: Optional[int]

    @property
    def variables(self) -> Tuple[str, ...]:
        return ("y", "z") if self.product else ("x",)

    @property
    def domain(self) -> Domain:
        return Domain(self.field, 2 if self.product else 1)


def field_ambient(spec: FieldSpec) -> Ambient:
    k = spec.degree
    return Ambient(spec, False, k // 2 if k % 2 == 0 else None, k)


def tower_ambient(tower: TowerSpec) -> Ambient:
    return Ambient(tower.big, False, tower.m, tower.n)


def product_ambient(small: FieldSpec) -> Ambient:
    return Ambient(small, True, small.degree, 2 * small.degree)


def _as_ambient(a) -> Ambient:
    if isinstance(a, Ambient):
        return a
    if isinstance(a, TowerSpec):
        return tower_ambient(a)
    if isinstance(a, FieldSpec):
        return field_ambient(a)
    raise TypeError(f"cannot use {type(a).__name__} as an ambient")


# -- tokenizer ----------------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(0[xX][0-9a-fA-F]+)|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    src = src.replace("−", "-")
    while pos < len(src):
        mt = _TOKEN.match(src, pos)
        if mt is None or mt.end() == pos:
            break
        if mt.group(1):
            out.append(("hex", mt.group(1), mt.start(1)))
        elif mt.group(2):
            out.append(("int", mt.group(2), mt.start(2)))
        elif mt.group(3):
            out.append(("name", mt.group(3), mt.start(3)))
        elif mt.group(4):
            ch = mt.group(4)
            if ch not in "+-*^()[]/,":
                raise ExprError(f"unexpected character {ch!r}", mt.start(4))
            out.append(("op", ch, mt.start(4)))
        pos = mt.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, amb: Ambient, bindings: Mapping[str, Union[int, FieldElement]]):
        self.toks = _tokenize(src)
        self.i = 0
        self.amb = amb
        self.q1 = amb.field.order - 1
        self.bindings = {}
        for name, val in (bindings or {}).items():
            if isinstance(val, FieldElement):
                if val.spec != amb.field:
                    raise ExprError(f"binding {name!r} belongs to a different field")
                val = val.coords
            val = int(val)
            if not 0 <= val < amb.field.order:
                raise ExprError(f"binding {name!r} is not a field element")
            self.bindings[name] = val

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, val: str) -> bool:
        t = self.peek()
        if t[0] == "op" and t[1] == val:
            self.i += 1
            return True
        return False

    def expect(self, val: str):
        t = self.peek()
        if not (t[0] == "op" and t[1] == val):
            raise ExprError(f"expected {val!r}, got {t[1] or 'end of input'!r}", t[2])
        self.i += 1

    # integer sub-language
    def _int_name(self, t) -> int:
        name = t[1]
        if name == "m" and self.amb.m is not None:
            return self.amb.m
        if name == "n" and self.amb.n is not None:
            return self.amb.n
        raise ExprError(f"unknown integer name {name!r}", t[2])

    def iexpr(self) -> int:
        v = self.iterm()
        while True:
            if self.accept("+"):
                v += self.iterm()
            elif self.accept("-"):
                v -= self.iterm()
            else:
                return v

    def iterm(self) -> int:
        v = self.ipow()
        while self.accept("*"):
            v *= self.ipow()
            self._guard(v, self.peek()[2])
        return v

    def ipow(self) -> int:
        base = self.iatom()
        if self.accept("^"):
            pos = self.peek()[2]
            e = self.ipow()
            if e < 0:
                raise ExprError("negative integer power in exponent", pos)
            if abs(base) > 1 and e * abs(base).bit_length() > MAX_EXPONENT_BITS:
                raise ExprError("exponent overflow", pos)
            base = base ** e
        return base

    def iatom(self) -> int:
        t = self.take()
        if t[0] == "int":
            return int(t[1])
        if t[0] == "name":
            return self._int_name(t)
        if t[0] == "op" and t[1] == "(":
            v = self.iexpr()
            self.expect(")")
            return v
        if t[0] == "op" and t[1] == "-":
            return -self.iatom()
        raise ExprError(f"unexpected {t[1] or 'end of input'!r} in integer expression", t[2])

    def _guard(self, v: int, pos: int):
        if abs(v).bit_length() > MAX_EXPONENT_BITS:
            raise ExprError("exponent overflow", pos)

    def exponent(self) -> int:
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            return -self.exponent()
        if t[0] == "op" and t[1] == "(":
            self.take()
            v = self.iexpr()
            self.expect(")")
            return v
        if t[0] == "int":
            self.take()
            return int(t[1])
        if t[0] == "name" and t[1] in ("m", "n"):
            self.take()
            return self._int_name(t)
        raise ExprError(f"bad exponent {t[1] or 'end of input'!r}", t[2])

    def reduce_exp(self, e: int, base: Expr, pos: int) -> int:
        q1 = self.q1
        if e > 0:
            return (e - 1) % q1 + 1
        if e == 0:
            return 0
        r = e % q1
        can_be_zero = not (isinstance(base, Const) and base.coords != 0)
        if r == 0 and can_be_zero:
            raise ExprError("negative exponent would need the inverse of 0", pos)
        return r

    # field sub-language
    def top(self) -> Expr:
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ExprError(f"unexpected {t[1]!r}", t[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.accept("+") or self.accept("-"):
            e = Add(e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.accept("*"):
            e = Mul(e, self.factor())
        return e

    def factor(self) -> Expr:
        base = self.primary()
        if self.accept("^"):
            pos = self.peek()[2]
            e = self.exponent()
            return Pow(base, self.reduce_exp(e, base, pos))
        return base

    def primary(self) -> Expr:
        t = self.take()
        kind, val, pos = t
        if kind == "hex":
            return self._const(int(val, 16), pos)
        if kind == "int":
            return self._const(int(val), pos)
        if kind == "name":
            if val in ("x", "y", "z"):
                if val not in self.amb.variables:
                    raise ExprError(f"variable {val!r} not available on this domain", pos)
                return Var(val)
            if val == "g":
                if self.accept("^"):
                    return Const(self.amb.field.pow(self.amb.field.generator, self.exponent()))
                return Const(self.amb.field.generator)
            if val == "Tr":
                return self._trace(pos)
            if val == "Frob":
                self.expect("[")
                j = self.iexpr()
                self.expect("]")
                self.expect("(")
                child = self.expr()
                self.expect(")")
                return Frob(j % self.amb.field.degree, child)
            if val in self.bindings:
                return Const(self.bindings[val])
            raise ExprError(f"unbound identifier {val!r}", pos)
        if kind == "op" and val == "(":
            e = self.expr()
            if self.accept(","):
                right = self.expr()
                self.expect(")")
                return Pair(e, right)
            self.expect(")")
            return e
        raise ExprError(f"unexpected {val or 'end of input'!r}", pos)

    def _const(self, v: int, pos: int) -> Const:
        if not 0 <= v < self.amb.field.order:
            raise ExprError(f"constant {v:#x} is not in GF(2^{self.amb.field.degree})", pos)
        return Const(v)

    def _trace(self, pos: int) -> Trace:
        self.expect("[")
        top = self.iexpr()
        self.expect("/")
        sub = self.iexpr()
        self.expect("]")
        self.expect("(")
        child = self.expr()
        self.expect(")")
        k = self.amb.field.degree
        if sub <= 0 or top <= 0 or top % sub or k % top:
            raise ExprError(f"trace degree Tr[{top}/{sub}] does not divide the ambient degree {k}", pos)
        return Trace(top, sub, child)


def parse(src: str, ambient, bindings: Optional[Mapping[str, Union[int, FieldElement]]] = None) -> Expr:
    """Parse ``src`` against an ambient (FieldSpec, TowerSpec or :class:`Ambient`)."""
    return _Parser(src, _as_ambient(ambient), bindings or {}).top()


def pretty(e: Expr) -> str:
    """Fully parenthesised source text that parses back to the same tree."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return f"0x{e.coords:x}"
    if isinstance(e, Add):
        return f"({pretty(e.left)} + {pretty(e.right)})"
    if isinstance(e, Mul):
        return f"({pretty(e.left)} * {pretty(e.right)})"
    if isinstance(e, Pow):
        return f"({pretty(e.base)})^{e.exp}"
    if isinstance(e, Trace):
        return f"Tr[{e.top}/{e.sub}]({pretty(e.child)})"
    if isinstance(e, Frob):
        return f"Frob[{e.j}]({pretty(e.child)})"
    if isinstance(e, Pair):
        return f"({pretty(e.left)}, {pretty(e.right)})"
    raise TypeError(f"not an expression node: {e!r}")


# -- evaluation -------------------------------------------------------------------------------

def _eval_vec(e: Expr, env: Dict[str, np.ndarray], F: FieldSpec):
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return np.full_like(next(iter(env.values())), e.coords)
    if isinstance(e, Add):
        return _eval_vec(e.left, env, F) ^ _eval_vec(e.right, env, F)
    if isinstance(e, Mul):
        return F.mul(_eval_vec(e.left, env, F), _eval_vec(e.right, env, F))
    if isinstance(e, Pow):
        return F.pow(_eval_vec(e.base, env, F), e.exp)
    if isinstance(e, Trace):
        return F.trace(_eval_vec(e.child, env, F), e.sub, e.top)
    if isinstance(e, Frob):
        return F.frobenius(_eval_vec(e.child, env, F), e.j)
    raise ExprError("a pair may only appear at the top level")


def _is_boolean(e: Expr) -> bool:
    return isinstance(e, Trace) and e.sub == 1


def compile_expr(e: Expr, ambient, desc: str = "") -> Union[VectorialFunction, TruthTable]:
    """Evaluate ``e`` at every domain point.

    A top-level ``Tr[k/1](...)`` yields a TruthTable when every value lies in
    F_2 (the argument stays inside F_{2^k}); anything else a VectorialFunction
    (a pair on product domains).
    """
    amb = _as_ambient(ambient)
    F = amb.field
    dom = amb.domain
    pts = dom.points()
    if amb.product:
        y, z = dom.split(pts)
        env = {"y": y, "z": z}
    else:
        env = {"x": pts}
    _check_vars(e, amb)
    if isinstance(e, Pair):
        if not amb.product:
            raise ExprError("pair-valued functions need a product domain")
        left = _eval_vec(e.left, env, F)
        right = _eval_vec(e.right, env, F)
        return VectorialFunction(dom, dom.join(left, right), desc or pretty(e))
    vals = _eval_vec(e, env, F)
    if _is_boolean(e) and not np.any(vals >> 1):
        return TruthTable(vals.astype(np.uint8), dom)
    if amb.product:
        raise ExprError("a product-domain vectorial function must be written as a pair (f, g)")
    return VectorialFunction(dom, vals, desc or pretty(e))


def _check_vars(e: Expr, amb: Ambient) -> None:
    if isinstance(e, Var):
        if e.name not in amb.variables:
            raise ExprError(f"variable {e.name!r} does not match the domain arity")
        return
    for child in _children(e):
        _check_vars(child, amb)


def _children(e: Expr):
    if isinstance(e, (Add, Mul, Pair)):
        return (e.left, e.right)
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, (Trace, Frob)):
        return (e.child,)
    return ()


def compile_source(src: str, ambient, bindings=None) -> Union[VectorialFunction, TruthTable]:
    return compile_expr(parse(src, ambient, bindings), ambient, desc=src)


def interpret(e: Expr, point: Mapping[str, int], F: FieldSpec) -> Union[int, Tuple[int, int]]:
    """Straight-line scalar evaluation with shift-and-reduce arithmetic (no lookup tables)."""
    def mul(a, b):
        return F.mul_slow(a, b)

    def pw(a, k):
        r = 1
        while k:
            if k & 1:
                r = mul(r, a)
            a = mul(a, a)
            k >>= 1
        return r

    def ev(e):
        if isinstance(e, Var):
            return point[e.name]
        if isinstance(e, Const):
            return e.coords
        if isinstance(e, Add):
            return ev(e.left) ^ ev(e.right)
        if isinstance(e, Mul):
            return mul(ev(e.left), ev(e.right))
        if isinstance(e, Pow):
            return pw(ev(e.base), e.exp)
        if isinstance(e, Trace):
            v = ev(e.child)
            acc, t = v, v
            for _ in range(e.top // e.sub - 1):
                t = pw(t, 1 << e.sub)
                acc ^= t
            return acc
        if isinstance(e, Frob):
            return pw(ev(e.child), 1 << e.j)
        if isinstance(e, Pair):
            return (ev(e.left), ev(e.right))
        raise TypeError(e)

    return ev(e)
