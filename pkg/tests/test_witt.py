import random
from itertools import combinations

import numpy as np
import pytest

from design_ideals.bits import mask_of, points_of
from design_ideals.designs import derived_design, pairwise_distribution, strength
from design_ideals.witt import (
    PermGroup,
    compose,
    golay_code,
    m12_group,
    perm_from_cycles,
    witt10,
    witt10_label,
    witt11,
    witt12,
    witt22,
    witt23,
    witt24,
)


def _gf2_rank_numpy(rows: list[int], n: int) -> int:
    # independent oracle: dense elimination on a 0/1 numpy array
    A = np.array([[(r >> j) & 1 for j in range(n)] for r in rows], dtype=np.uint8)
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, A.shape[0]) if A[i, col]), None)
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        for i in range(A.shape[0]):
            if i != rank and A[i, col]:
                A[i] ^= A[rank]
        rank += 1
    return rank


def test_golay_weight_enumerator():
    code = golay_code()
    assert code.weight_enumerator() == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
    assert code.minimum_weight() == 8


def test_golay_dimension_and_self_duality():
    code = golay_code()
    assert _gf2_rank_numpy(list(code.rows), 24) == 12 == code.dimension
    assert len(code) == 4096
    assert all((a & b).bit_count() % 2 == 0 for a in code.rows for b in code.rows)


def test_weight8_supports_even_against_codewords():
    code = golay_code()
    words = list(code.codewords())[::97]
    for B in witt24().blocks[::37]:
        assert all((B & w).bit_count() % 2 == 0 for w in words)


@pytest.mark.parametrize("build,params", [
    (witt24, (5, 24, 8, 1, 759)),
    (witt23, (4, 23, 7, 1, 253)),
    (witt22, (3, 22, 6, 1, 77)),
    (witt12, (5, 12, 6, 1, 132)),
    (witt11, (4, 11, 5, 1, 66)),
    (witt10, (3, 10, 4, 1, 30)),
])
def test_witt_parameters(build, params):
    d = build()
    p = strength(d)
    assert (p.t, d.v, d.k, p.lam, d.b) == params


def test_witt24_lambda_ladder():
    assert strength(witt24()).lambdas == (759, 253, 77, 21, 5, 1)


def test_witt24_intersections():
    blocks = witt24().blocks
    sizes = {(a & b).bit_count() for a, b in combinations(blocks[:200], 2)}
    assert sizes <= {0, 2, 4}


def test_witt22_intersections():
    sizes = {(a & b).bit_count() for a, b in combinations(witt22().blocks, 2)}
    assert sizes == {0, 2}


def test_m12_order():
    assert m12_group().order() == 95040


def test_m12_order_against_sympy():
    combinatorics = pytest.importorskip("sympy.combinatorics")
    gens = [combinatorics.Permutation(list(g)) for g in m12_group().generators]
    assert combinatorics.PermutationGroup(gens).order() == 95040


def test_m12_five_transitive():
    G = m12_group()
    assert G.tuple_orbit_size((0, 1, 2, 3, 4)) == 12 * 11 * 10 * 9 * 8
    rng = random.Random(0)
    elements = G.elements()
    for _ in range(5):
        a, b = rng.sample(range(12), 5), rng.sample(range(12), 5)
        # some element maps a onto b pointwise
        assert any(all(g[x] == y for x, y in zip(a, b)) for g in elements)


def test_identity_in_group():
    assert tuple(range(12)) in m12_group()


def test_perm_helpers():
    p = perm_from_cycles(4, [(1, 2)], base=1)
    assert p == (1, 0, 2, 3)
    q = perm_from_cycles(4, [(0, 1, 2)])
    assert compose(p, q) == tuple(q[p[x]] for x in range(4))
    with pytest.raises(RuntimeError):
        PermGroup(8, [perm_from_cycles(8, [range(8)]), perm_from_cycles(8, [(0, 1)])], cap=100).order()


def test_witt12_contains_printed_block():
    assert witt12().is_block(mask_of(p - 1 for p in (1, 2, 3, 4, 5, 9)))


def test_witt12_every_five_set_once():
    blocks = witt12().blocks
    for S in combinations(range(12), 5):
        m = mask_of(S)
        assert sum(1 for B in blocks if B & m == m) == 1


def test_witt11_is_derived():
    d = derived_design(witt12(), 0)[0]
    assert d.b == 66
    assert d.digest() == witt11().digest()


def test_witt10_listed_block_and_labels():
    assert witt10().is_block(mask_of((1, 2, 4, 5)))
    assert witt10_label(0, 0) == 1 and witt10_label(2, 2) == 9


def test_witt10_pair_table():
    d = witt10()
    expected = {(0, 2): 2, (0, 4): 1, (1, 2): 8, (2, 0): 2, (2, 1): 8, (2, 2): 8, (4, 0): 1}
    pairs = [(a, b) for a, b in combinations(d.blocks, 2) if not a & b]
    assert pairs
    for a, b in pairs:
        dist = {key: val for key, val in pairwise_distribution(d, a, b).items() if val}
        assert dist == expected, points_of(a)
