from itertools import combinations

import pytest

from design_ideals.bits import mask_of, points_of
from design_ideals.designs import DesignError, fano, projective_design, strength
from design_ideals.exactla import delta_vector
from design_ideals.sts import (
    CompletionError,
    PartialTripleSystem,
    Trade,
    build_2v32,
    complete_partial_sts,
    is_trade,
    parse_trade,
    default_trade,
    pasch_configurations,
    pasch_count,
    pasch_trade,
    read_trade,
    sts,
    trade_foundation,
    trade_volume,
    write_trade,
)
from design_ideals.witt import witt10


def _pasch_bruteforce(design) -> int:
    # four triples, six points, each point twice, every two triples meet once
    count = 0
    for quad in combinations(design.blocks, 4):
        union = quad[0] | quad[1] | quad[2] | quad[3]
        if union.bit_count() != 6:
            continue
        if all((a & b).bit_count() == 1 for a, b in combinations(quad, 2)):
            count += 1
    return count


@pytest.mark.parametrize("v", [7, 9, 13, 15, 19, 21, 25, 27])
def test_sts_is_steiner(v):
    d = sts(v)
    p = strength(d)
    assert (p.t, p.lam, d.b) == (2, 1, v * (v - 1) // 6)


@pytest.mark.parametrize("v", [5, 8, 11, 6])
def test_sts_inadmissible(v):
    with pytest.raises(DesignError, match="mod 6"):
        sts(v)


def test_pasch_counts():
    assert pasch_count(fano()) == 7 == _pasch_bruteforce(fano())
    assert pasch_count(sts(9)) == 0 == _pasch_bruteforce(sts(9))
    pg = projective_design(3, 1, 2)
    assert pasch_count(pg) == 15 * 14 * 12 // 24 == 105


@pytest.mark.parametrize("v", [13, 15])
def test_pasch_matches_bruteforce(v):
    d = sts(v)
    assert pasch_count(d) == _pasch_bruteforce(d)
    assert pasch_count(d) <= v * (v - 1) * (v - 3) // 24


def test_pasch_needs_triples():
    with pytest.raises(DesignError):
        pasch_count(witt10())


def test_default_trade():
    tr = default_trade()
    assert trade_volume(tr) == 4
    assert trade_foundation(tr) == (0, 1, 2, 3, 4, 5)


def test_trade_rejections():
    t = [(0, 1, 2)]
    assert not is_trade(t, t)
    assert not is_trade([(0, 1, 2)], [(0, 1, 3)])
    with pytest.raises(DesignError):
        Trade(PartialTripleSystem.of(t), PartialTripleSystem.of(t))


def test_partial_system_rejects_shared_pair():
    with pytest.raises(DesignError, match="pair"):
        PartialTripleSystem.of([(0, 1, 2), (0, 1, 3)])


def test_pasch_trade_from_fano():
    cfg = pasch_configurations(fano())[0]
    tr = pasch_trade(cfg)
    assert is_trade(tr.T1, tr.T2)
    assert trade_volume(tr) == 4


def test_trade_pair_sums():
    tr = default_trade()
    s1 = [sum(col) for col in zip(*(delta_vector(t, 2, 6) for t in tr.T1.triples))]
    s2 = [sum(col) for col in zip(*(delta_vector(t, 2, 6) for t in tr.T2.triples))]
    assert s1 == s2


def test_trade_file_roundtrip(tmp_path):
    text = "index-base: 1\nT1:\n1 2 3\n1 4 5\n2 4 6\n3 5 6\nT2:\n1 2 4\n1 3 5\n2 3 6\n4 5 6\n"
    tr = parse_trade(text)
    assert tr == default_trade()
    assert tr.index_base == 1
    write_trade(tr, tmp_path / "t.trd")
    assert read_trade(tmp_path / "t.trd") == tr


def test_complete_fano_into_15():
    d = complete_partial_sts(fano().blocks, 15, seed=0)
    assert d.b == 35 and strength(d).lam == 1
    assert set(fano().blocks) <= d.block_set


def test_complete_empty():
    d = complete_partial_sts([], 9, seed=3)
    assert (strength(d).t, d.b) == (2, 12)


def test_complete_deterministic():
    a = complete_partial_sts([], 19, seed=5)
    b = complete_partial_sts([], 19, seed=5)
    assert a.blocks == b.blocks


def test_complete_respects_forbidden():
    first = complete_partial_sts([], 13, seed=0)
    second = complete_partial_sts([], 13, seed=1, forbidden=first.blocks)
    assert not first.block_set & second.block_set


def test_complete_preconditions():
    with pytest.raises(DesignError):
        complete_partial_sts(fano().blocks, 13)
    with pytest.raises(DesignError):
        complete_partial_sts([], 11)


def test_completion_error_reports_seed():
    with pytest.raises(CompletionError, match="seed 7"):
        # backtracking disabled above v = 15 and hill-climbing given no steps
        complete_partial_sts([], 19, seed=7, max_steps=1, restarts=1)


def test_complete_t2_star():
    tr = default_trade()
    B = mask_of((3, 4, 5))
    star = [t for t in tr.T2.triples if t != B] + [mask_of((4, 5, 6))]
    d = complete_partial_sts(star, 15, seed=0)
    assert set(star) <= d.block_set and strength(d).lam == 1


@pytest.mark.parametrize("v,b", [(15, 70), (21, 140), (19, 114)])
def test_build_2v32(v, b):
    tr = default_trade()
    d = build_2v32(tr, (3, 4, 5), v, seed=0)
    p = strength(d)
    assert (d.b, p.t, p.lam) == (b, 2, 2)
    assert not d.is_block(mask_of((3, 4, 5)))
    assert set(tr.T1.triples) <= d.block_set
    assert {t for t in tr.T2.triples if t != mask_of((3, 4, 5))} <= d.block_set
    assert d.meta["dropped_block"] == (3, 4, 5)


def test_build_2v32_preconditions():
    with pytest.raises(DesignError, match="2n\\+3"):
        build_2v32(default_trade(), (3, 4, 5), 13)
    with pytest.raises(DesignError, match="not a triple of T2"):
        build_2v32(default_trade(), (0, 1, 2), 15)


def test_build_2v32_other_drops():
    tr = default_trade()
    for B in tr.T2.triples:
        d = build_2v32(tr, B, 15, seed=2)
        assert not d.is_block(B) and strength(d).lam == 2
        assert points_of(B) == d.meta["dropped_block"]
