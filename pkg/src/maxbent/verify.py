"""Replayable verification suites: each returns machine-readable pass/fail assertions."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from . import gf2
from .boolfn import Domain, TruthTable, algebraic_degree, dual
from .constructions import (EXPONENT_ROWS, ReducedPolynomial, binomial, binomial_witness, check_walsh_factorization,
                            condition_A_check, count_N_set, diff_check, dual_check, gauss_t, is_subfield_space,
                            explicit_a_check, dual_derivative_check, linear_h_analysis, linearized_roots,
                            mm_completeness_test, mm_construct, mm_dual_check, mm_outside_witness, mm_params,
                            monomial_h, niho_check, niho_dual, niho_general, niho_general_dual_formula, niho_k2,
                            niho_k2_dual_formula, orthogonal_basis, orthogonal_set, permutation_shift, rt_check,
                            rt_component_nonlinearity, rt_expected, search_niho_k2, row_exponent,
                            row_magnitude_squared, three_valued_analysis, trace_perm)
from .constructions.binomial import root_dimension_d
from .constructions.trace import is_degenerate_exponent
from .field import FieldSpec, make_field, make_tower, v2
from .vecfn import component, count_bent_components, max_bent_count, nonlinearity


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    params: Dict[str, Any]
    assertions: List[Assertion] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def check(self, name: str, ok: bool, **detail) -> bool:
        self.assertions.append(Assertion(name, bool(ok), _plain(detail)))
        return bool(ok)

    def failures(self) -> List[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "params": self.params, "passed": self.passed,
                "n_assertions": len(self.assertions), "n_failed": len(self.failures()),
                "assertions": [asdict(a) for a in self.assertions]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if hasattr(x, "__dataclass_fields__"):
        return _plain(asdict(x))
    return x


def random_linear_permutation(K: FieldSpec, rng: np.random.Generator) -> np.ndarray:
    """Table of a uniformly random invertible F_2-linear map of K."""
    k = K.degree
    while True:
        cols = [int(rng.integers(1, K.order)) for _ in range(k)]
        if gf2.rank(cols) == k:
            break
    x = K.elements()
    out = np.zeros_like(x)
    for j, c in enumerate(cols):
        out ^= np.where((x >> j) & 1, c, 0)
    return out


def _maximal(F) -> bool:
    return count_bent_components(F) == max_bent_count(F.n)


# -- suites ------------------------------------------------------------------------------------

def suite_wt(m: int = 3, trials: int = 20, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("wt", {"m": m, "trials": trials, "seed": seed})
    T = make_tower(m)
    rng = np.random.default_rng(seed)
    for t in range(trials):
        h = rng.permutation(T.small.order)
        for e in range(m):
            F, H = trace_perm(T, e, h)
            r = check_walsh_factorization(T, F, H)
            rep.check(f"trial{t}/e{e}", r.ok, eq_wt=r.eq_wt, eq_nf=r.eq_nf, nf=r.nf_exhaustive,
                      nf_formula=r.nf_formula, counterexample=r.counterexample,
                      **({} if r.ok else {"h": h}))
            if t == 0:
                rep.check(f"trial{t}/e{e}/maximal", _maximal(F))
    return rep


def suite_conj_niho(m: int = 8, **_) -> SuiteReport:
    rep = SuiteReport("conj-niho", {"m": m})
    t_max = max(2, m // 2)
    for t in range(2, t_max + 1):
        for s in range(1, (1 << t) - 1):
            for e in range(2 * t):
                if math.gcd(abs((1 << e) - s), (1 << t) + 1) != 1:
                    continue
                r = niho_check(t, s, e)
                rep.check(f"t{t}/s{s}/e{e}", r.divisible and r.bound_ok, u=r.u, L=r.L, values=r.values)
    return rep


def suite_three_valued(m: int = 5, **_) -> SuiteReport:
    rep = SuiteReport("three-valued", {"m": m})
    q1 = (1 << m) - 1
    for u in range(1, q1):
        if is_degenerate_exponent(u, m) or math.gcd(u, q1) != 1:
            continue
        r = three_valued_analysis(u, m)
        if not r.three_valued:
            continue
        rep.check(f"u{u}", r.a_matches_roots and r.a_power_of_two and r.bound_holds,
                  A=r.A, R=r.R, values=r.values, nf=r.nonlinearity)
    return rep


def _row_case(rep: SuiteReport, row: str, m: int, e: int) -> None:
    u = row_exponent(row, m, e)
    r = three_valued_analysis(u, m)
    a2 = row_magnitude_squared(row, m, e)
    n = 2 * m
    listed_nf_ok = r.nonlinearity == (1 << (n - 1)) - math.isqrt((1 << (2 * m - 2)) * a2)
    detail = {"u": u, "values": r.values, "A": r.A, "listed_A_squared": a2, "nf": r.nonlinearity}
    ok = r.three_valued and r.A * r.A == a2 and listed_nf_ok
    ep = permutation_shift(u, m)
    if ep is not None and m <= 5:
        T = make_tower(m)
        F, _ = trace_perm(T, ep, monomial_h(T, u, ep))
        nf = nonlinearity(F)
        detail.update(e_used=ep, nf_exhaustive=nf)
        ok = ok and nf == r.nonlinearity
    rep.check(f"{row}/m{m}/e{e}", ok, **detail)


def suite_table1(m: int = 5, row: Optional[str] = None, e: Optional[int] = None, **_) -> SuiteReport:
    rep = SuiteReport("table1", {"m": m, "row": row, "e": e})
    rows = [row] if row else list(EXPONENT_ROWS)
    for rname in rows:
        if rname not in EXPONENT_ROWS:
            raise KeyError(f"unknown exponent row {rname!r}")
        es = [e] if e is not None else range(1, m)
        for ee in es:
            if EXPONENT_ROWS[rname][1](m, ee):
                _row_case(rep, rname, m, ee)
                if rname in ("row3", "row4", "row5"):
                    break  # u does not depend on e
            elif row and e is not None:
                rep.check(f"{rname}/m{m}/e{ee}/admissible", False)
    return rep


def suite_linear_h(m: int = 3, trials: int = 5, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("linear-h", {"m": m, "trials": trials, "seed": seed})
    T = make_tower(m)
    rng = np.random.default_rng(seed)
    hs = [("id", T.small.elements())] + [(f"rand{t}", random_linear_permutation(T.small, rng)) for t in range(trials)]
    for name, h in hs:
        for e in range(m):
            r = linear_h_analysis(T, e, h)
            rep.check(f"{name}/e{e}", r.nf_exhaustive == r.nf_formula and r.attains_bound == r.rank_condition,
                      r=r.r, nf=r.nf_exhaustive, nf_formula=r.nf_formula, bound=r.bound,
                      attains_bound=r.attains_bound, rank_condition=r.rank_condition, ranks=r.rank_multiset)
    return rep


def suite_cor2(m: int = 5, **_) -> SuiteReport:
    rep = SuiteReport("cor2", {"m_max": m})
    for mm in range(2, m + 1):
        T = make_tower(mm)
        for e in range(mm):
            r = linear_h_analysis(T, e, T.small.elements())
            rep.check(f"m{mm}/e{e}", bool(r.cor2_holds) and r.nf_exhaustive == r.nf_formula,
                      d=math.gcd(e, mm), nf=r.nf_exhaustive, bound=r.bound, r=r.r)
    return rep


def _mm_bent_dual_nonquadratic(K: FieldSpec) -> TruthTable:
    """Dual of Tr(y * z^-1) on K x K, a cubic bent function."""
    dom = Domain.product(K)
    y, z = dom.split(dom.points())
    f = TruthTable(K.trace_bit(K.mul(y, K.pow(z, K.order - 2))).astype(np.uint8), dom)
    return dual(f)


def suite_condA(m: int = 3, trials: int = 20, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("condA", {"m": m, "trials": trials, "seed": seed})
    T = make_tower(m)
    rng = np.random.default_rng(seed)
    betas = [b for b in range(T.big.order) if not T.in_subfield(b)]
    picked = betas if m <= 3 else list(rng.choice(betas, size=min(trials, len(betas)), replace=False))
    for k in range(3, m + 1):
        u1, us = orthogonal_set(T, k, rng)
        for b in picked:
            dirs = [int(T.big.mul(int(b), u1))] + us
            rep.check(f"k{k}/beta{int(b):#x}", condition_A_check(niho_dual(T, int(b)), dirs), u1=u1, us=us)
    gs = niho_dual(T, betas[0])
    rep.check("k1-trivial", all(condition_A_check(gs, [u]) for u in range(1, T.big.order)))
    fstar = _mm_bent_dual_nonquadratic(T.small)
    found = None
    for _ in range(200):
        us = [int(v) for v in rng.choice(np.arange(1, fstar.size), size=3, replace=False)]
        if gf2.is_independent(us) and not condition_A_check(fstar, us):
            found = us
            break
    rep.check("negative-control", found is not None, witness=found)
    return rep


def suite_nvec(m: int = 3, trials: int = 3, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("nvec", {"m": m, "trials": trials, "seed": seed})
    T = make_tower(m)
    rng = np.random.default_rng(seed)
    betas = [b for b in range(T.big.order) if not T.in_subfield(b)]
    picked = betas if m <= 3 else [int(b) for b in rng.choice(betas, size=min(16, len(betas)), replace=False)]
    for k in range(3, m + 1):
        for t in range(trials):
            u1, us = orthogonal_set(T, k, rng)
            R = ReducedPolynomial.random(k, rng)
            F = niho_general(T, u1, R, us)
            tag = f"k{k}/t{t}"
            rep.check(f"{tag}/bent-count", _maximal(F), u1=u1, us=us, R=R.to_list())
            bad = [b for b in picked if not dual_check(F, b, niho_general_dual_formula(T, b, u1, R, us))]
            rep.check(f"{tag}/dual", not bad, first_bad_beta=bad[:1])
            bad = [b for b in picked if not dual_derivative_check(T, b, u1, us)]
            rep.check(f"{tag}/dual-derivatives", not bad, first_bad_beta=bad[:1])
    basis = orthogonal_basis(T)
    if basis is not None and m >= 3:
        F = niho_general(T, basis[0], ReducedPolynomial.product(m), basis[1:])
        degs = [algebraic_degree(component(F, b)) for b in picked]
        rep.check("max-degree", max(degs) == m and _maximal(F), degrees=sorted(set(degs)), basis=basis)
    return rep


def _k2_sample(T, trials: int, seed: int, outside_only: bool = False):
    pairs = search_niho_k2(T, outside_only)
    if len(pairs) <= trials:
        return pairs
    rng = np.random.default_rng(seed)
    idx = sorted(rng.choice(len(pairs), size=trials, replace=False).tolist())
    return [pairs[i] for i in idx]


def suite_niho_k2(m: int = 3, trials: int = 0, seed: int = 0, **_) -> SuiteReport:
    """All valid pairs when trials = 0, else a seeded sample."""
    rep = SuiteReport("niho-k2", {"m": m, "trials": trials, "seed": seed})
    T = make_tower(m)
    pairs = search_niho_k2(T) if trials <= 0 else _k2_sample(T, trials, seed)
    rep.check("witnesses-exist", bool(pairs), count=len(pairs))
    betas = [b for b in range(T.big.order) if not T.in_subfield(b)]
    for u1, u2 in pairs:
        F = niho_k2(T, u1, u2)
        rep.check(f"({u1:#x},{u2:#x})/bent-count", _maximal(F))
    for u1, u2 in _k2_sample(T, 8, seed, outside_only=True) + [(0, 0)]:
        F = niho_k2(T, u1, u2)
        bad = [b for b in betas if not dual_check(F, b, niho_k2_dual_formula(T, b, u1, u2))]
        rep.check(f"({u1:#x},{u2:#x})/dual", not bad, first_bad_beta=bad[:1])
    return rep


def suite_rt(m: int = 3, trials: int = 0, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("rt", {"m": m, "trials": trials, "seed": seed})
    T = make_tower(m)
    pairs = search_niho_k2(T) if trials <= 0 else _k2_sample(T, trials, seed)
    n = T.n
    for u1, u2 in pairs:
        F = niho_k2(T, u1, u2)
        fails = rt_check(T, F, u1, u2)
        rep.check(f"({u1:#x},{u2:#x})/trichotomy", not fails, first_failure=fails[:1])
        comp_bad = []
        indep = []
        for s in range(1, T.small.order):
            b = int(T.embed(s))
            if rt_expected(T, b, u1, u2)[0] == "independent":
                indep.append(b)
                if rt_component_nonlinearity(T, F, b) != 1 << (n - 2):
                    comp_bad.append(b)
        if indep:
            rep.check(f"({u1:#x},{u2:#x})/case1-component-nl", not comp_bad, first_bad_beta=comp_bad[:1])
    return rep


def rt_overall_nonlinearity(m: int = 3) -> List[Dict[str, int]]:
    """Overall N_F of every k = 2 witness having an independent-case subfield component."""
    T = make_tower(m)
    out = []
    for u1, u2 in search_niho_k2(T):
        if any(rt_expected(T, int(T.embed(s)), u1, u2)[0] == "independent" for s in range(1, T.small.order)):
            out.append({"u1": u1, "u2": u2, "nf": nonlinearity(niho_k2(T, u1, u2))})
    return out


def suite_diff(m: int = 3, trials: int = 0, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("diff", {"m": m, "trials": trials, "seed": seed})
    T = make_tower(m)
    pairs = search_niho_k2(T, outside_only=True) if trials <= 0 else _k2_sample(T, trials, seed, True)
    rep.check("witnesses-exist", bool(pairs), count=len(pairs))
    for u1, u2 in pairs:
        fails = diff_check(T, niho_k2(T, u1, u2), u2)
        rep.check(f"({u1:#x},{u2:#x})", not fails, first_failure=fails[:1])
    return rep


def suite_mm(m: int = 3, trials: int = 2, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("mm", {"m": m, "trials": trials, "seed": seed})
    K = make_field(m)
    rng = np.random.default_rng(seed)
    ab = [(a, b) for a in range(1, K.order) for b in range(K.order)]
    if m > 3:
        ab = [ab[i] for i in sorted(rng.choice(len(ab), size=24, replace=False).tolist())]
    for j in range(1, m):
        for k in range(2, m + 1):
            for t in range(trials):
                u11, us = mm_params(K, j, k, rng)
                R = ReducedPolynomial.random(k, rng)
                F = mm_construct(K, j, u11, us, R)
                tag = f"j{j}/k{k}/t{t}"
                rep.check(f"{tag}/bent-count", _maximal(F), u11=u11, us=us, R=R.to_list())
                bad = [p for p in ab if not mm_dual_check(F, K, j, u11, us, R, *p)]
                rep.check(f"{tag}/dual", not bad, first_bad=bad[:1])
    return rep


def suite_mm_outside(m: int = 3, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("mm-outside", {"m": m, "seed": seed})
    K = make_field(m)
    rng = np.random.default_rng(seed)
    dom = Domain.product(K)
    for j in range(1, m):
        u11, us = mm_params(K, j, 2, rng)
        F = mm_construct(K, j, u11, us, ReducedPolynomial(np.array([0, 1])))
        w = mm_outside_witness(F)
        rep.check(f"j{j}/witness", w is not None, u11=u11, us=us, witness=w)
    y, z = dom.split(dom.points())
    plain = TruthTable(K.trace_bit(K.mul(1, K.mul(y, K.frobenius(z, 1))) ^ z).astype(np.uint8), dom)
    rep.check("control/plain-mm", mm_completeness_test(plain))
    rep.check("control/constant", mm_completeness_test(TruthTable(np.ones(dom.size, dtype=np.uint8), dom)))
    return rep


def suite_bino(m: int = 5, **_) -> SuiteReport:
    rep = SuiteReport("bino", {"m_max": m})
    for mm in range(2, m + 1):
        T = make_tower(mm)
        for i in range(mm):
            F = binomial(T, i)
            maximal = _maximal(F)
            rep.check(f"m{mm}/i{i}/maximal-iff-i0", maximal == (i == 0))
            if i:
                a = binomial_witness(T, i)
                d = root_dimension_d(mm, i)
                roots = linearized_roots(T, a, i) if a is not None else []
                rep.check(f"m{mm}/i{i}/witness", a is not None and len(roots) > 1 and is_subfield_space(T, roots, d),
                          a=a, roots=len(roots), d=d)
                if v2(i) == v2(mm):
                    rep.check(f"m{mm}/i{i}/explicit-a", explicit_a_check(T, i))
    return rep


def suite_gauss_count(m: int = 16, **_) -> SuiteReport:
    rep = SuiteReport("gauss-count", {"m_max": m})
    for mm in range(2, m + 1):
        for d in range(1, mm):
            if mm % d:
                continue
            c = count_N_set(mm, d)
            t = gauss_t(mm, d)
            ok = c >= 1 and (t != 1 or c == (1 << (mm - d)) - 1)
            rep.check(f"m{mm}/d{d}", ok, count=c, t=t)
    return rep


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "wt": suite_wt,
    "conj-niho": suite_conj_niho,
    "three-valued": suite_three_valued,
    "table1": suite_table1,
    "linear-h": suite_linear_h,
    "cor2": suite_cor2,
    "condA": suite_condA,
    "nvec": suite_nvec,
    "niho-k2": suite_niho_k2,
    "rt": suite_rt,
    "diff": suite_diff,
    "mm": suite_mm,
    "mm-outside": suite_mm_outside,
    "bino": suite_bino,
    "gauss-count": suite_gauss_count,
}


def run_suite(suite: str, **params) -> List[SuiteReport]:
    """Run one suite (or ``all``); unset parameters fall back to each suite's defaults."""
    params = {k: v for k, v in params.items() if v is not None}
    if suite == "all":
        return [fn(**params) for fn in SUITES.values()]
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    return [SUITES[suite](**params)]
