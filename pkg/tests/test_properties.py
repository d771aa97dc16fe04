from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import comb
from operator import or_

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from design_ideals.bits import mask_of
from design_ideals.catalog import construct, family_generators
from design_ideals.certificate import certify, check_certificate
from design_ideals.designs import (
    Design,
    derived_design,
    fano,
    intersection_distribution,
    projective_design,
    residual_design,
    strength,
)
from design_ideals.exactla import (
    ExactMatrix,
    delta_vector,
    in_row_span,
    incidence_matrix,
    modular_rank,
    rank,
)
from design_ideals.families import partial_design_generators, steiner_generators, symbibd_generators
from design_ideals.gamma import gamma1, gamma2_lower_linearization, zero_set_check
from design_ideals.poly import MultilinearPoly, jacobian_rank, multiply, partial_derivative, trivial_polys
from design_ideals.sts import complete_partial_sts, pasch_configurations, pasch_count, pasch_trade, sts
from design_ideals.witt import witt10, witt12, witt22

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small_int = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return ExactMatrix([[draw(small_int) for _ in range(c)] for _ in range(r)], c)


@st.composite
def polys(draw, v=6, max_terms=6, support=None):
    pool = support if support is not None else (1 << v) - 1
    terms = []
    for _ in range(draw(st.integers(0, max_terms))):
        m = draw(st.integers(0, (1 << v) - 1)) & pool
        terms.append((m, Fraction(draw(small_int), draw(st.integers(1, 3)))))
    return MultilinearPoly(v, terms)


subsets6 = st.integers(0, 63)


# -- exact linear algebra --------------------------------------------------------------

@SETTINGS
@given(matrices())
def test_rank_transpose(M):
    assert rank(M) == rank(M.transpose())


@SETTINGS
@given(matrices())
def test_rank_agrees_with_float(M):
    assert rank(M) == np.linalg.matrix_rank(np.array(M.rows, dtype=float))


@SETTINGS
@given(matrices())
def test_modular_rank_at_most_exact(M):
    assert modular_rank(M) <= rank(M)
    assert modular_rank(M, 3) <= rank(M)


@SETTINGS
@given(matrices(), st.lists(small_int, min_size=6, max_size=6), st.booleans())
def test_in_row_span_coefficients(M, coeffs, from_rows):
    if from_rows:
        # a genuine combination of the rows is always found
        w = [sum(c * row[j] for c, row in zip(coeffs, M.rows)) for j in range(M.ncols)]
    else:
        w = coeffs[: M.ncols] + [0] * max(0, M.ncols - len(coeffs))
    y = in_row_span(M, w)
    if from_rows:
        assert y is not None
    if y is not None:
        assert [sum(c * row[j] for c, row in zip(y, M.rows)) for j in range(M.ncols)] == w


@pytest.mark.parametrize("build,s", [(fano, 1), (witt12, 2)])
def test_ray_chaudhuri_wilson(build, s):
    d = build()
    t = strength(d).t
    assert t >= 2 * s
    assert rank(incidence_matrix(d, s)) == comb(d.v, s) <= d.b


# -- polynomials ------------------------------------------------------------------------

@SETTINGS
@given(polys(), polys(), subsets6)
def test_multiply_is_pointwise(f, g, C):
    assert multiply(f, g)(C) == f(C) * g(C)


@SETTINGS
@given(polys(support=0b000111), polys(support=0b111000), st.integers(0, 5))
def test_product_rule_disjoint_supports(f, g, i):
    lhs = partial_derivative(multiply(f, g), i)
    rhs = multiply(partial_derivative(f, i), g) + multiply(f, partial_derivative(g, i))
    assert lhs == rhs


@SETTINGS
@given(polys(), polys(), subsets6)
def test_sum_is_pointwise(f, g, C):
    assert (f + g)(C) == f(C) + g(C)


@SETTINGS
@given(st.integers(2, 40).flatmap(lambda v: st.tuples(
    st.just(v), st.integers(1, v - 1).flatmap(lambda k: st.sets(
        st.integers(0, v - 1), min_size=k, max_size=k)))))
def test_jacobian_rank_of_g0(vc):
    v, C = vc
    k = len(C)
    assert jacobian_rank(trivial_polys(v, k), tuple(C)) == v


# -- designs --------------------------------------------------------------------------

CORPUS = {
    "fano": fano, "sts9": lambda: sts(9), "sts13": lambda: sts(13), "pg22_3": lambda: projective_design(2, 1, 3),
    "pg32": lambda: projective_design(3, 1, 2), "witt10": witt10, "witt12": witt12, "witt22": witt22,
}


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_derived_and_residual_strength(name):
    d = CORPUS[name]()
    p = strength(d)
    if p.t < 2:
        pytest.skip("strength below 2")
    for i in (0, d.v - 1):
        der, _ = derived_design(d, i)
        dp = strength(der)
        assert dp.t >= p.t - 1 and dp.lam == p.lam
        res, _ = residual_design(d, i)
        assert strength(res).t >= p.t - 1


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_intersection_distribution_sums(name):
    d = CORPUS[name]()
    for B in d.blocks[:10]:
        assert sum(intersection_distribution(d, B).values()) == d.b


@pytest.mark.parametrize("q", [2, 3, 4])
def test_projective_lines_cover_pairs_once(q):
    d = projective_design(2, 1, q)
    assert all(B.bit_count() == q + 1 for B in d.blocks)
    for a, b in combinations(range(d.v), 2):
        m = mask_of((a, b))
        assert sum(1 for B in d.blocks if B & m == m) == 1


# -- triple systems ---------------------------------------------------------------------

@SETTINGS
@given(st.sampled_from([7, 9, 13, 15, 19]), st.integers(0, 10_000), st.integers(0, 7))
def test_completion_contains_partial(v, seed, keep):
    # triples of the Fano plane: the foundation grows with keep
    P = list(fano().blocks[:keep])
    found = reduce(or_, P, 0).bit_count()
    if P and v < 2 * found + 1:
        v = 15
    d = complete_partial_sts(P, v, seed=seed)
    assert set(P) <= d.block_set
    assert d.b == v * (v - 1) // 6
    assert strength(d).lam == 1


@pytest.mark.parametrize("v", [7, 9, 13, 15, 19, 21])
def test_pasch_bound(v):
    assert pasch_count(sts(v)) <= v * (v - 1) * (v - 3) // 24


@pytest.mark.parametrize("v", [15, 19, 21])
def test_pasch_trades_cover_same_pairs(v):
    for cfg in pasch_configurations(sts(v))[:20]:
        tr = pasch_trade(cfg)
        s1 = np.sum([delta_vector(t, 2, v) for t in tr.T1.triples], axis=0)
        s2 = np.sum([delta_vector(t, 2, v) for t in tr.T2.triples], axis=0)
        assert np.array_equal(s1, s2)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_maximal_partial_after_deletion(seed):
    d = complete_partial_sts([], 13, seed=seed)
    kept = d.blocks[1:]
    part = Design.from_blocks(13, kept)
    assert zero_set_check(part, partial_design_generators(part, 2)).exact


# -- families and bounds ------------------------------------------------------------------

@pytest.mark.parametrize("name", ["fano", "sts9", "sts13", "pg22_3", "pg32"])
def test_steiner_generators_exact(name):
    d = CORPUS[name]()
    assert zero_set_check(d, steiner_generators(d, 2)).exact


def test_symbibd_nontrivial():
    for d in (fano(), projective_design(2, 1, 3)):
        G = symbibd_generators(d)
        masks = [mask_of(C) for C in combinations(range(d.v), d.k) if not d.is_block(mask_of(C))]
        assert any(f(C) != 0 for f in G.extra() for C in masks[:5])
        assert all(f(B) == 0 for f in G.extra() for B in d.blocks)


@pytest.mark.parametrize("name", ["fano", "sts9", "pg22_3", "witt10"])
def test_certificate_bounds(name):
    d = CORPUS[name]()
    c = certify(d)
    p = strength(d)
    lo, hi = c.gamma2_interval
    assert p.t // 2 + 1 <= c.gamma1 <= lo <= hi <= d.k
    if p.lam == 1:
        assert hi <= p.t
    assert check_certificate(c, d).valid


@pytest.mark.parametrize("v", [15, 19])
def test_linearization_sound(v):
    d = construct("2v32", v=v)
    cert = gamma2_lower_linearization(d, 2)
    assert cert is not None and not d.is_block(mask_of(cert.C)) and cert.verify(d)


def test_gY_exact_everywhere():
    for name in ("fano", "sts9", "pg22_3", "witt10"):
        d = CORPUS[name]()
        assert zero_set_check(d, family_generators(d, "gY")).exact


def test_gamma1_at_most_gamma2_upper_witt():
    for name in ("witt10", "witt12"):
        d = CORPUS[name]()
        assert gamma1(d).value <= family_generators(d, "auto").max_degree
