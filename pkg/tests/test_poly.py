from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from design_ideals.bits import combination_masks, mask_of, subsets_of_size
from design_ideals.designs import fano
from design_ideals.poly import (
    GeneratorSet,
    Idempotent,
    LinearForm,
    MultilinearPoly,
    elementary_symmetric,
    eval_poly,
    g_BJ,
    jacobian_rank,
    multiply,
    parse_generator_set,
    partial_derivative,
    poly_from_text,
    poly_to_text,
    read_generator_set,
    trivial_generators,
    write_generator_set,
    zonal,
)
from design_ideals.witt import witt24


def _worked_example() -> MultilinearPoly:
    # 1 + x1 + 2x2 - 3x3 + 4x4 - x1x2 + 3x1x5 + 2x2x3 - 3x3x5 on points 1..5
    terms = {(): 1, (1,): 1, (2,): 2, (3,): -3, (4,): 4, (1, 2): -1, (1, 5): 3, (2, 3): 2, (3, 5): -3}
    return MultilinearPoly(6, [(mask_of(m), c) for m, c in terms.items()])


def test_worked_example_value():
    assert eval_poly(_worked_example(), (1, 2, 3)) == 2


def test_constant_and_monomial():
    assert MultilinearPoly.constant(4, 5)((0, 2)) == 5
    x = MultilinearPoly.monomial(4, (0, 1))
    assert x((0, 1, 3)) == 1 and x((0, 2)) == 0


def test_elementary_symmetric():
    e = elementary_symmetric(4, (0, 1, 3), 2)
    assert e.as_dict() == {mask_of((0, 1)): 1, mask_of((0, 3)): 1, mask_of((1, 3)): 1}


def test_multiply_reduces_squares():
    x0 = MultilinearPoly.variable(3, 0)
    assert multiply(x0, x0) == x0


def test_partial_derivative():
    f = MultilinearPoly.monomial(3, (0, 1))
    assert partial_derivative(f, 0) == MultilinearPoly.variable(3, 1)
    assert partial_derivative(f, 2).is_zero()


def test_trivial_generators():
    G = trivial_generators(3, 2)
    assert len(G.polys) == 4
    assert G.max_degree == 2
    lin = G.polys[0]
    assert lin.as_dict() == {0: -2, 1: 1, 2: 1, 4: 1}
    assert sum(isinstance(p, Idempotent) for p in G.polys) == 3


def test_jacobian_rank_g0():
    G = trivial_generators(7, 3)
    for B in fano().blocks:
        assert jacobian_rank(G.polys, B) == 7


def test_jacobian_rank_constant():
    assert jacobian_rank([MultilinearPoly.constant(4, 1)], (0, 1)) == 0


def test_jacobian_rank_with_extras():
    G = trivial_generators(7, 3)
    extra = [MultilinearPoly.monomial(7, (0, 1)), MultilinearPoly.monomial(7, (2, 3, 4))]
    assert jacobian_rank(G.polys + extra, fano().blocks[0]) == 7


def test_zonal_examples():
    assert zonal(2, (0, 1), [0]).as_dict() == {1: 1, 2: 1}
    z = zonal(1 + 1, (0,), [0, 1])
    assert all(z(C) == 0 for C in ((), (0,), (1,), (0, 1)))
    assert z.as_dict() == {}


def test_zonal_witt24_vanishes():
    d = witt24()
    B = d.blocks[0]
    z = zonal(24, B, [0, 2, 4, 8])
    masks = np.array(sorted(d.blocks), dtype=np.uint64)
    assert not z.evaluate_many(masks).any()


def test_zonal_rejects_bad_sizes():
    with pytest.raises(ValueError):
        zonal(3, (0, 1), [0, 0])
    with pytest.raises(ValueError):
        zonal(3, (0, 1), [3])


def test_g_BJ_examples():
    g = g_BJ(6, (0, 1, 3), (0, 1), 3)
    assert g((0, 1, 3)) == 0
    assert g((0, 1, 2)) == -2
    assert g((2, 4, 5)) == 0


def test_g_BJ_trichotomy_exhaustive():
    v, k = 6, 3
    for B in combinations(range(v), k):
        for j in range(1, k):
            for J in combinations(B, j):
                g = g_BJ(v, B, J, k)
                for C in combinations(range(v), k):
                    meet = len(set(B) & set(C))
                    val = g(C)
                    if set(J) <= set(C):
                        assert (val != 0) == (j <= meet < k)
                    else:
                        assert val >= 0


def test_factored_and_expanded_agree():
    f = MultilinearPoly.from_factors(8, [LinearForm.difference(0, 1), LinearForm.indicator_minus(0b11110000, 2)])
    e = MultilinearPoly(8, f.terms)
    masks = combination_masks(8, 4)
    assert np.array_equal(f.evaluate_many(masks) != 0, e.evaluate_many(masks) != 0)
    for m in masks[:40]:
        assert f(int(m)) == e(int(m))


def test_substitute_one_and_relabel():
    f = MultilinearPoly.monomial(4, (1, 2)) + MultilinearPoly.variable(4, 3)
    g = f.substitute_one(1)
    # x_1 = 1 then x_2 -> x_1, x_3 -> x_2
    assert g.as_dict() == {mask_of((1,)): 1, mask_of((2,)): 1}
    h = f.relabel((3, 2, 1, 0))
    assert h.as_dict() == {mask_of((1, 2)): 1, mask_of((0,)): 1}


def test_degree_and_sign():
    f = MultilinearPoly(4, [(mask_of((0, 1)), -2), (0, 1)])
    assert f.degree == 2
    assert f.normalized_sign() == -f or f.normalized_sign() == f


def test_poly_text_roundtrip():
    f = _worked_example() + MultilinearPoly.constant(6, Fraction(1, 3))
    assert poly_from_text(poly_to_text(f), 6) == f


def test_generator_set_roundtrip(tmp_path):
    G = trivial_generators(5, 2)
    G = GeneratorSet(5, 2, G.polys + [MultilinearPoly.monomial(5, (0, 1), 3)], "custom", "toy")
    path = tmp_path / "g.gen"
    write_generator_set(G, path)
    back = read_generator_set(path)
    assert back.family == "custom" and back.contains_trivial()
    assert back.extra() == G.extra()


def test_generator_set_parse_without_g0():
    G = parse_generator_set("family custom\nv 3\nk 1\npoly\n1: 0\n-1:\n")
    assert not G.contains_trivial()
    assert G.with_trivial().contains_trivial()


def test_unknown_family_tag():
    with pytest.raises(ValueError):
        GeneratorSet(3, 1, [], "nonsense")


def test_subset_enumeration_of_values():
    f = elementary_symmetric(5, (0, 1, 2), 1) - MultilinearPoly.constant(5, 1)
    vals = [f(C) for C in subsets_of_size(5, 2)]
    assert sorted(set(vals)) == [-1, 0, 1]
