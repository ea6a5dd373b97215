"""JSON-replayable construction descriptors."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..field import make_tower
from ..vecfn import VectorialFunction
from .binomial import binomial
from .mm import mm_construct
from .niho import ReducedPolynomial, niho_general, niho_k2
from .trace import ConstructionError, trace_perm

KINDS = ("TracePerm", "NihoGeneral", "NihoK2", "MM", "Binomial")


@dataclass
class ConstructionSpec:
    """A family member: ``kind``, field size ``m``, kind-specific ``params`` and optional moduli."""

    kind: str
    m: int
    params: Dict[str, Any]
    big_modulus: Optional[int] = None
    small_modulus: Optional[int] = None
    _built: Optional[VectorialFunction] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConstructionError(f"unknown construction kind {self.kind!r}")
        self._built = self._build()

    @property
    def tower(self):
        return make_tower(self.m, self.big_modulus or "default", self.small_modulus or "default")

    def _build(self) -> VectorialFunction:
        p = self.params
        T = self.tower
        try:
            if self.kind == "TracePerm":
                return trace_perm(T, int(p["e"]), np.asarray(p["h"], dtype=np.int64))[0]
            if self.kind == "NihoGeneral":
                return niho_general(T, int(p["u1"]), ReducedPolynomial(np.asarray(p["R"])),
                                    [int(u) for u in p["us"]])
            if self.kind == "NihoK2":
                return niho_k2(T, int(p["u1"]), int(p["u2"]))
            if self.kind == "MM":
                return mm_construct(T.small, int(p["j"]), int(p["u11"]),
                                    [(int(a), int(b)) for a, b in p["us"]], ReducedPolynomial(np.asarray(p["R"])))
            return binomial(T, int(p["i"]))
        except KeyError as exc:
            raise ConstructionError(f"{self.kind} needs parameter {exc.args[0]!r}") from None

    def build(self) -> VectorialFunction:
        return self._built  # type: ignore[return-value]

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {"kind": self.kind, "m": self.m, "params": self.params}
        if self.big_modulus is not None:
            d["big_modulus"] = f"0x{self.big_modulus:x}"
        if self.small_modulus is not None:
            d["small_modulus"] = f"0x{self.small_modulus:x}"
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "ConstructionSpec":
        try:
            kind, m, params = d["kind"], int(d["m"]), dict(d["params"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConstructionError(f"malformed construction spec: {exc}") from None
        mods = {k: int(str(d[k]), 0) for k in ("big_modulus", "small_modulus") if d.get(k) is not None}
        return cls(kind, m, params, **mods)

    @classmethod
    def from_json(cls, text: str) -> "ConstructionSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConstructionError(f"construction spec is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConstructionError("construction spec must be a JSON object")
        return cls.from_dict(data)
