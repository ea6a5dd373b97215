import json

import numpy as np
import pytest

from maxbent.boolfn import Domain, TruthTable, algebraic_degree, dual, is_bent
from maxbent.constructions import (ConstructionError, ConstructionSpec, L_of_u, ReducedPolynomial, binomial,
                                   binomial_witness, canonical_pair, condition_A_check, count_N_set,
                                   count_niho_roots, diff_check, dual_check, gauss_t, is_subfield_space,
                                   explicit_a_check, explicit_a_witnesses, dual_derivative_check, linear_h_analysis,
                                   linearized_roots, mm_completeness_test, mm_construct, mm_dual_check,
                                   mm_outside_witness, mm_params, monomial_h, niho_dual, niho_exponent,
                                   niho_general, niho_general_dual_formula, niho_k2, niho_k2_dual_formula,
                                   niho_k2_valid, orthogonal_basis, orthogonal_set, pair_in_class, rt_check,
                                   search_binomials, search_niho_k2, three_valued_analysis, trace_perm,
                                   verify_walsh_factorization)
from maxbent.constructions.binomial import root_dimension_d
from maxbent.constructions.trace import monomial_table
from maxbent.field import make_field, make_tower, v2
from maxbent.vecfn import (VectorialFunction, component, count_bent_components, max_bent_count, nonbent_set,
                           nonlinearity)


def maximal(F):
    return count_bent_components(F) == max_bent_count(F.n)


# -- trace family -------------------------------------------------------------------------------

def test_trace_perm_identity_e0():
    T = make_tower(2)
    F, H = trace_perm(T, 0, T.small.elements())
    x = T.big.elements()
    assert np.array_equal(F.table, T.big.mul(x, T.tr_rel(x)))
    assert np.array_equal(H.table, T.small.mul(T.small.elements(), T.small.elements()))


def test_trace_perm_rejects_non_bijection():
    T = make_tower(2)
    with pytest.raises(ConstructionError):
        trace_perm(T, 0, np.zeros(4, dtype=np.int64))
    with pytest.raises(ConstructionError):
        trace_perm(T, -1, T.small.elements())


@pytest.mark.parametrize("m", [2, 3])
def test_trace_perm_random_h_is_maximal_and_factorises(m):
    T = make_tower(m)
    rng = np.random.default_rng(m)
    for _ in range(3):
        h = rng.permutation(T.small.order)
        for e in range(m):
            F, H = trace_perm(T, e, h)
            assert maximal(F)
            assert nonbent_set(F).equals_subfield
            assert verify_walsh_factorization(T, F, H)


def test_factorization_monomial_h():
    T = make_tower(3)
    F, H = trace_perm(T, 1, monomial_h(T, 3, 1))
    assert verify_walsh_factorization(T, F, H)


def test_factorization_mutation_control():
    T = make_tower(2)
    F, H = trace_perm(T, 1, np.random.default_rng(0).permutation(4))
    delta = next(d for d in range(1, 16) if not T.in_subfield(d))
    bad = F.table.copy()
    bad[5] ^= delta
    assert not verify_walsh_factorization(T, VectorialFunction(F.domain, bad), H)


def test_subfield_mutation_is_invisible_to_subfield_components():
    # Tr(a (F + d)) = Tr(a F) + Tr_m(a Tr_{n/m}(d)) and Tr_{n/m}(d) = 0 for d in F_{2^m}
    T = make_tower(2)
    F, H = trace_perm(T, 1, np.random.default_rng(0).permutation(4))
    bad = F.table.copy()
    bad[5] ^= 1
    assert verify_walsh_factorization(T, VectorialFunction(F.domain, bad), H)


def test_L_of_u_examples():
    assert L_of_u(3, 5).L == 8
    assert L_of_u(13, 5).L == 8
    r = L_of_u(31, 8)
    assert r.L == 32 and set(r.values) <= {0, 16, -16, 32}
    assert r.nonlinearity == (1 << 15) - (1 << 12)
    with pytest.raises(ConstructionError):
        L_of_u(4, 5)
    with pytest.raises(ConstructionError):
        L_of_u(3, 6, e=0)  # gcd(3, 63) = 3


def test_conjecture_bound_floor():
    r = L_of_u(3, 5)
    assert r.conjecture_bound == 1 << (10 // 4 + 1)
    assert r.conjecture_holds


def test_niho_exponent_examples():
    assert niho_exponent(4, 1, 3) == 31
    assert niho_exponent(4, 3, 2) == 53
    with pytest.raises(ConstructionError):
        niho_exponent(4, 15, 3)
    with pytest.raises(ConstructionError):
        niho_exponent(4, 0, 3)


def test_count_niho_roots():
    assert count_niho_roots(3, 5) == 2
    for u in (5, 7, 11, 13):
        if u % 3:
            assert count_niho_roots(u, 6) >= 4
    assert count_niho_roots(4, 5) == 32


def test_three_valued_gold():
    r = three_valued_analysis(3, 5)
    assert r.three_valued and r.A == 8 and r.R == 2
    assert r.a_matches_roots and r.a_power_of_two and r.bound_holds
    assert r.A ** 2 == (1 << 5) * r.R


def test_linear_h_examples():
    T3 = make_tower(3)
    r = linear_h_analysis(T3, 1, T3.small.elements())
    assert r.r == 2 and r.nf_exhaustive == 16 == r.nf_formula and r.attains_bound
    T4 = make_tower(4)
    r = linear_h_analysis(T4, 2, T4.small.elements())
    assert set(r.rank_multiset) <= {0, 4}
    assert r.nf_exhaustive == r.nf_formula and not r.attains_bound
    r = linear_h_analysis(T3, 0, T3.small.elements())
    assert r.nf_exhaustive == 0


def test_linear_h_rejects_nonlinear():
    T = make_tower(3)
    with pytest.raises(ConstructionError):
        linear_h_analysis(T, 1, monomial_table(T.small, 3))
    with pytest.raises(ConstructionError):
        linear_h_analysis(T, 1, np.zeros(8, dtype=np.int64))


# -- Niho family ------------------------------------------------------------------------------

def test_condition_a_trivial_and_errors():
    T = make_tower(3)
    x = T.big.elements()
    rng = np.random.default_rng(1)
    f = TruthTable(rng.integers(0, 2, 64).astype(np.uint8), Domain.of_field(T.big))
    assert condition_A_check(f, [int(rng.integers(1, 64))])
    with pytest.raises(ValueError):
        condition_A_check(f, [3, 5, 6])
    beta = next(b for b in range(64) if not T.in_subfield(b))
    assert is_bent(TruthTable(T.big.trace_bit(T.big.mul(beta, T.big.pow(x, 9))).astype(np.uint8)))


def test_condition_a_on_niho_duals():
    T = make_tower(3)
    rng = np.random.default_rng(2)
    for k in (2, 3):
        u1, us = orthogonal_set(T, k, rng)
        for beta in range(T.big.order):
            if T.in_subfield(beta):
                continue
            gs = niho_dual(T, beta)
            assert condition_A_check(gs, [int(T.big.mul(beta, u1))] + us)


def test_niho_dual_rejects_subfield_beta():
    T = make_tower(2)
    with pytest.raises(ConstructionError):
        niho_dual(T, 1)


def test_niho_general_zero_R_is_gold_niho():
    T = make_tower(3)
    u1, us = orthogonal_set(T, 3)
    F = niho_general(T, u1, ReducedPolynomial.zero(3), us)
    assert np.array_equal(F.table, T.big.pow(T.big.elements(), 9))


@pytest.mark.parametrize("m", [3, 4])
def test_niho_general_maximal_and_duals(m):
    T = make_tower(m)
    rng = np.random.default_rng(m)
    for k in range(3, m + 1):
        u1, us = orthogonal_set(T, k, rng)
        R = ReducedPolynomial.random(k, rng)
        F = niho_general(T, u1, R, us)
        assert maximal(F)
        betas = [b for b in range(T.big.order) if not T.in_subfield(b)][:12]
        for b in betas:
            assert dual_check(F, b, niho_general_dual_formula(T, b, u1, R, us))
            assert dual_derivative_check(T, b, u1, us)


def test_niho_general_validation():
    T = make_tower(3)
    u1, us = orthogonal_set(T, 3)
    bad = next(v for v in T.subfield.tolist() if v and T.small.trace_bit(
        T.small.mul(T.restrict(u1), T.restrict(v))))
    with pytest.raises(ConstructionError):
        niho_general(T, u1, ReducedPolynomial.zero(3), [us[0], bad])
    with pytest.raises(ConstructionError):
        niho_general(T, u1, ReducedPolynomial.zero(2), us)


def test_niho_general_max_degree():
    T = make_tower(3)
    basis = orthogonal_basis(T)
    assert basis is not None
    F = niho_general(T, basis[0], ReducedPolynomial.product(3), basis[1:])
    degs = {algebraic_degree(component(F, b)) for b in range(T.big.order) if not T.in_subfield(b)}
    assert max(degs) == 3


def test_niho_k2_trivial_pair():
    T = make_tower(3)
    assert niho_k2_valid(T, 0, 0)
    F = niho_k2(T, 0, 0)
    assert np.array_equal(F.table, T.big.pow(T.big.elements(), 9))


def test_niho_k2_search_and_checks():
    T = make_tower(3)
    pairs = search_niho_k2(T)
    assert pairs and all(niho_k2_valid(T, *p) for p in pairs)
    for u1, u2 in pairs[:: max(1, len(pairs) // 12)]:
        F = niho_k2(T, u1, u2)
        assert maximal(F)
        assert not rt_check(T, F, u1, u2)
    outside = search_niho_k2(T, outside_only=True)
    assert outside
    u1, u2 = outside[0]
    assert not T.in_subfield(u1) and not T.in_subfield(u2)
    F = niho_k2(T, u1, u2)
    assert not diff_check(T, F, u2)
    for b in range(T.big.order):
        if not T.in_subfield(b):
            assert dual_check(F, b, niho_k2_dual_formula(T, b, u1, u2))


def test_niho_k2_invalid():
    T = make_tower(3)
    bad = next((u1, u2) for u1 in range(1, 64) for u2 in range(1, 64) if not niho_k2_valid(T, u1, u2))
    with pytest.raises(ConstructionError):
        niho_k2(T, *bad)


# -- Maiorana-McFarland -------------------------------------------------------------------------

def test_mm_zero_R_is_base_map():
    K = make_field(3)
    u11, us = mm_params(K, 1, 2, np.random.default_rng(0))
    F = mm_construct(K, 1, u11, us, ReducedPolynomial.zero(2))
    dom = F.domain
    y, z = dom.split(dom.points())
    assert np.array_equal(F.table, dom.join(K.mul(y, K.frobenius(z, 1)), z))


@pytest.mark.parametrize("j", [1, 2])
def test_mm_maximal_dual_and_outside(j):
    K = make_field(3)
    rng = np.random.default_rng(j)
    u11, us = mm_params(K, j, 2, rng)
    R = ReducedPolynomial(np.array([0, 1]))
    F = mm_construct(K, j, u11, us, R)
    assert maximal(F)
    for a in range(1, 8):
        for b in range(8):
            assert mm_dual_check(F, K, j, u11, us, R, a, b)
    assert mm_outside_witness(F) is not None


def test_mm_validation():
    K = make_field(3)
    with pytest.raises(ConstructionError):
        mm_construct(K, 1, 1, [(3, 3)], ReducedPolynomial.zero(2))
    with pytest.raises(ConstructionError):
        mm_construct(K, 5, 1, [], ReducedPolynomial.zero(1))


def test_completeness_controls():
    K = make_field(3)
    dom = Domain.product(K)
    y, z = dom.split(dom.points())
    plain = TruthTable(K.trace_bit(K.mul(3, K.mul(y, K.frobenius(z, 2))) ^ K.mul(5, z)).astype(np.uint8), dom)
    assert mm_completeness_test(plain)
    assert mm_completeness_test(TruthTable(np.zeros(64, np.uint8), dom))
    cubic = TruthTable((K.trace_bit(y) & K.trace_bit(K.mul(2, y)) & K.trace_bit(z)).astype(np.uint8), dom)
    assert not mm_completeness_test(cubic)


# -- binomials ----------------------------------------------------------------------------------

@pytest.mark.parametrize("m", [2, 3, 4])
def test_binomial_maximal_iff_i0(m):
    T = make_tower(m)
    for i in range(m):
        F = binomial(T, i)
        assert maximal(F) == (i == 0)
        if i:
            a = binomial_witness(T, i)
            assert a is not None and not T.in_subfield(a)
            roots = linearized_roots(T, a, i)
            assert len(roots) > 1
            assert is_subfield_space(T, roots, root_dimension_d(m, i))
    with pytest.raises(ConstructionError):
        binomial(T, m)


def test_binomial_explicit_a():
    for m in (2, 3, 4, 5, 6):
        T = make_tower(m)
        for i in range(1, m):
            if v2(i) == v2(m):
                assert explicit_a_witnesses(T, i)
                assert explicit_a_check(T, i)
            else:
                with pytest.raises(ConstructionError):
                    explicit_a_witnesses(T, i)


def test_m4_i2_witness():
    T = make_tower(4)
    a = binomial_witness(T, 2)
    assert a is not None and not T.in_subfield(a)
    assert len(linearized_roots(T, a, 2)) > 1


def test_count_N_set_examples():
    assert count_N_set(4, 2) == 3
    assert count_N_set(6, 3) == 7
    assert gauss_t(6, 2) == 3 and count_N_set(6, 2) >= 1
    with pytest.raises(ConstructionError):
        count_N_set(6, 4)


def test_canonical_pair():
    assert canonical_pair(6, 10, 4) == canonical_pair(3, 5, 4)
    assert pair_in_class(3, 5, 6, 10, 4)
    assert not pair_in_class(3, 5, 3, 9, 4)


def test_search_binomials_n4():
    r = search_binomials(4)
    assert r.complete and r.hits
    assert any(pair_in_class(h.d1, h.d2, 1, 5, 4) or h.profile_tag.startswith("x^(2^m+1)") for h in r.hits)
    for h in r.hits:
        F = VectorialFunction(Domain.of_field(make_field(4)),
                              make_field(4).pow(np.arange(16), h.d1) ^ make_field(4).pow(np.arange(16), h.d2))
        assert count_bent_components(F) == h.bent_count == max_bent_count(4)
    assert r.to_csv().splitlines()[0] == "n,d1,d2,bent_count,profile_tag"


def test_search_binomials_n6_contains_frobenius_expansions():
    r = search_binomials(6)
    for e in range(3):
        d1, d2 = (1 << e) + 1, (1 << e) + 8
        assert any(pair_in_class(h.d1, h.d2, d1, d2, 6) for h in r.hits), e
    # pairs (2^m+1, 2^i+1) only appear for i = 0
    for i in range(1, 3):
        assert not any(pair_in_class(h.d1, h.d2, 9, (1 << i) + 1, 6) for h in r.hits)


def test_search_checkpoint_resume(tmp_path):
    full = search_binomials(6)
    ck = tmp_path / "ck.json"
    part = search_binomials(6, budget=50, checkpoint=str(ck))
    assert not part.complete
    data = json.loads(ck.read_text())
    assert data["n"] == 6 and data["last_completed_outer_index"] == part.last_completed_outer_index
    resumed = search_binomials(6, checkpoint=str(ck))
    assert resumed.complete and resumed.hits == full.hits
    again = search_binomials(6, checkpoint=str(ck))
    assert again.hits == full.hits and again.evaluated == 0


def test_search_checkpoint_wrong_n(tmp_path):
    ck = tmp_path / "ck.json"
    search_binomials(4, checkpoint=str(ck))
    with pytest.raises(ConstructionError):
        search_binomials(6, checkpoint=str(ck))


def test_search_jobs_deterministic():
    assert search_binomials(6, jobs=2).to_csv() == search_binomials(6).to_csv()


@pytest.mark.parametrize("n", [5, 2, 18])
def test_search_rejects_bad_n(n):
    with pytest.raises(ConstructionError):
        search_binomials(n)


# -- specs ------------------------------------------------------------------------------------

def _specs():
    T = make_tower(3)
    u1, us = orthogonal_set(T, 3)
    K = make_field(3)
    u11, mus = mm_params(K, 1, 2, np.random.default_rng(0))
    k2 = search_niho_k2(T)[3]
    return [
        ConstructionSpec("TracePerm", 3, {"e": 1, "h": [0, 3, 1, 2, 5, 4, 7, 6]}),
        ConstructionSpec("NihoGeneral", 3, {"u1": u1, "us": us, "R": [0, 1, 1, 0]}),
        ConstructionSpec("NihoK2", 3, {"u1": k2[0], "u2": k2[1]}),
        ConstructionSpec("MM", 3, {"j": 1, "u11": u11, "us": [list(p) for p in mus], "R": [0, 1]}),
        ConstructionSpec("Binomial", 3, {"i": 0}),
    ]


@pytest.mark.parametrize("idx", range(5))
def test_spec_json_roundtrip(idx):
    s = _specs()[idx]
    back = ConstructionSpec.from_json(s.to_json())
    assert back.to_json() == s.to_json()
    assert back.build() == s.build()
    assert maximal(s.build())


def test_spec_errors():
    with pytest.raises(ConstructionError):
        ConstructionSpec("Nope", 3, {})
    with pytest.raises(ConstructionError):
        ConstructionSpec("Binomial", 3, {})
    with pytest.raises(ConstructionError):
        ConstructionSpec.from_json("[1, 2]")
    with pytest.raises(ConstructionError):
        ConstructionSpec.from_json("{bad")
    with pytest.raises(ConstructionError):
        ConstructionSpec.from_dict({"kind": "Binomial"})


def test_spec_custom_modulus():
    s = ConstructionSpec("Binomial", 2, {"i": 0}, big_modulus=0b11001, small_modulus=0b111)
    assert maximal(s.build())
    assert ConstructionSpec.from_json(s.to_json()).big_modulus == 0b11001


def test_rt_overall_nonlinearity_is_zero_when_beta_u1_equals_u2():
    # beta = u2^(q+1) / (u1 u2^q) lies in F_{2^m}^* and makes the component linear
    T = make_tower(3)
    big = T.big
    for u1, u2 in search_niho_k2(T)[:20]:
        if u1 == 0 or u2 == 0:
            continue
        q = 1 << T.m
        beta = big.div(big.pow(u2, q + 1), big.mul(u1, big.pow(u2, q)))
        assert T.in_subfield(beta)
        assert big.mul(beta, u1) == u2
        assert nonlinearity(niho_k2(T, u1, u2)) == 0


def test_dual_niho_formula_k2_trivial_equals_gold_dual():
    T = make_tower(2)
    beta = next(b for b in range(16) if not T.in_subfield(b))
    F = niho_k2(T, 0, 0)
    assert dual(component(F, beta)) == niho_dual(T, beta)
