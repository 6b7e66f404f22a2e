"""Construction planning: golden configurations and recount oracles."""

import random

import pytest

from bwpbch.layout import plan_layout, describe_layout, solve_grid_rows


def test_solve_grid_rows_brute_force():
    rng = random.Random(97)
    etas = list(range(2, 400)) + [rng.randrange(2, 10**6) for _ in range(200)]
    for eta in etas:
        p = solve_grid_rows(eta)
        assert p * (p - 1) < eta <= p * (p + 1)
        # uniqueness: neighbors fail the sandwich
        assert not ((p - 1) * (p - 2) < eta <= (p - 1) * p)
        assert not ((p + 1) * p < eta <= (p + 1) * (p + 2))


def test_golden_config_b32():
    plan = plan_layout(32768, 3640, 32, 4)
    assert plan.eta == 1028 and plan.p == 32 and plan.case == 2
    assert plan.W == 65 and plan.m == 11 and plan.t_base == 4 and plan.theta == 53
    assert plan.word_groups() == [
        ("row", 4, 33, 5),
        ("row", 28, 32, 5),
        ("col", 21, 32, 5),
        ("col", 11, 32, 4),
        ("col", 1, 4, 4),
    ]
    assert plan.folding.widths == [8, 8, 8, 8]
    assert plan.N == 36404 and plan.slack == 4


def test_golden_config_b15():
    plan = plan_layout(32768, 3640, 15, 4)
    assert plan.eta == 2189 and plan.p == 47 and plan.case == 1
    assert plan.W == 94 and plan.m == 10 and plan.t_base == 3 and plan.theta == 66
    assert plan.word_groups() == [
        ("row", 27, 47, 4),
        ("row", 20, 46, 4),
        ("col", 19, 47, 4),
        ("col", 27, 47, 3),
        ("col", 1, 27, 3),
    ]
    assert plan.folding.widths == [8, 7]
    assert plan.N == 36402 and plan.slack == 6


def test_golden_config_zero_slack():
    plan = plan_layout(32768, 3634, 15, 4)
    assert plan.slack == 0 and plan.N == 32768 + 3634
    assert plan.m == 10 and plan.t_base == 3 and plan.theta == 66
    assert round(plan.rate, 4) == 0.9002


def test_every_block_covered_once_per_axis():
    for args in [(32768, 3640, 32, 4), (32768, 3640, 15, 4), (5000, 900, 20, 1),
                 (1200, 700, 10, 2), (777, 500, 8, 3)]:
        plan = plan_layout(*args)
        row_seen = {}
        col_seen = {}
        for wd in plan.row_words:
            for g in wd.blocks:
                assert g not in row_seen
                row_seen[g] = wd.index
        for wd in plan.col_words:
            for g in wd.blocks:
                assert g not in col_seen
                col_seen[g] = wd.index
        assert set(row_seen) == set(range(plan.eta)) == set(col_seen)
        for g in range(plan.eta):
            l, j = plan.block_coords(g)
            assert row_seen[g] == l and col_seen[g] == j


def test_redundancy_recount():
    # independent recount: R must fully fund parity blocks, per-word parity
    # bits, extension bits, and slack < m
    rng = random.Random(101)
    configs = [(32768, 3640, 32, 4), (32768, 3634, 15, 4), (4096, 700, 16, 2)]
    for _ in range(30):
        K = rng.randrange(500, 60000)
        b = rng.choice([8, 12, 15, 16, 20, 32])
        f = rng.randrange(1, 5)
        R = rng.randrange(max(40 * f, K // 12), K // 3)
        configs.append((K, R, b, f))
    planned = 0
    for K, R, b, f in configs:
        try:
            plan = plan_layout(K, R, b, f)
        except ValueError:
            continue
        planned += 1
        spent = f * b + sum(wd.t * plan.m + 1 for wd in plan.words)
        assert spent + plan.slack == R
        assert 0 <= plan.slack < plan.m
        assert plan.N == K + spent
        assert len(plan.words) == plan.W
        assert sum(1 for wd in plan.words if wd.t == plan.t_base + 1) == plan.theta
        for wd in plan.words:
            assert wd.n == len(wd.blocks) * b + wd.t * plan.m
            assert wd.n <= (1 << plan.m) - 1
    assert planned >= len(configs) - 5


def test_folding_positions():
    for args in [(32768, 3640, 32, 4), (32768, 3640, 15, 4), (5000, 900, 20, 1)]:
        plan = plan_layout(*args)
        fold = plan.folding
        p = plan.p
        assert fold.n_rs == 2 * p - 1 + plan.f
        for g in range(plan.eta - plan.f):
            l, j = plan.block_coords(g)
            assert fold.block_position[g] == l + j <= 2 * p - 2
        for i in range(plan.f):
            assert fold.block_position[plan.eta - plan.f + i] == 2 * p - 1 + i
            assert fold.position_blocks[2 * p - 1 + i] == [plan.eta - plan.f + i]
        listed = [g for blocks in fold.position_blocks for g in blocks]
        assert sorted(listed) == list(range(plan.eta))
        assert sum(fold.widths) == plan.b
        for spec in fold.specs:
            assert spec.n_rs == fold.n_rs and spec.f == plan.f


def test_word_specs_share_shapes():
    plan = plan_layout(32768, 3640, 15, 4)
    specs = plan.bch_specs()
    shapes = {(wd.n, wd.t) for wd in plan.words}
    assert set(specs) == shapes
    assert len(specs) <= 5
    for (n, t), spec in specs.items():
        assert spec.extended and spec.n == n and spec.t == t
        assert spec.k == n - spec.ctx.m * t


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        plan_layout(0, 100, 8, 1)
    with pytest.raises(ValueError):
        plan_layout(1000, 30, 8, 1)  # not even one parity bit per word
    with pytest.raises(ValueError):
        plan_layout(1000, 100, 8, 12)  # erasure parity swallows the budget
    with pytest.raises(ValueError):
        plan_layout(32768, 3640, 32, 0)


def test_describe_layout_mentions_key_figures():
    text = describe_layout(plan_layout(32768, 3640, 32, 4))
    for token in ["K=32768", "N=36404", "p=", "t=4", "t=5", "[8, 8, 8, 8]"]:
        assert token.replace("p=", "32 rows") in text or token in text


def test_pad_bits():
    plan = plan_layout(100, 200, 15, 1)
    assert plan.data_block_count == 7 and plan.pad_bits == 5
    plan2 = plan_layout(120, 200, 15, 1)
    assert plan2.pad_bits == 0


def test_block_as_symbol_mode_plan():
    plan = plan_layout(600, 520, 8, 5, folding=False)
    fold = plan.folding
    assert fold.n_rs == plan.eta and fold.widths == [plan.b]
    assert fold.block_position == list(range(plan.eta))
    assert all(fold.position_blocks[g] == [g] for g in range(plan.eta))
    assert len(fold.specs) == 1 and fold.specs[0].f == 5

    # the whole-block symbol needs the large erasure budget to pay off and a
    # field wide enough to index every block
    with pytest.raises(ValueError):
        plan_layout(600, 520, 8, 4, folding=False)
    with pytest.raises(ValueError):
        plan_layout(60000, 9000, 20, 5, folding=False)


def test_rs_width_override():
    plan = plan_layout(32768, 3640, 32, 4, rs_width=16)
    assert plan.folding.widths == [16, 16]
    assert all(spec.width == 16 for spec in plan.folding.specs)
    # requested width below what the fold positions need
    with pytest.raises(ValueError):
        plan_layout(32768, 3640, 32, 4, rs_width=4)


def test_primitive_poly_override():
    alt = {7: 137, 8: 299}
    plan = plan_layout(601, 500, 8, 4, prim_polys=alt)
    assert all(spec.ctx.poly == 137 for spec in plan.bch_specs().values())
    assert all(spec.ctx.poly == 299 for spec in plan.folding.specs)
    base = plan_layout(601, 500, 8, 4)
    assert all(spec.ctx.poly == 131 for spec in base.bch_specs().values())
    with pytest.raises(ValueError):
        # x^7+1 is reducible; the word specs refuse to build on it
        plan_layout(601, 500, 8, 4, prim_polys={7: 129}).bch_specs()


def test_radius_monotone_in_redundancy_within_field():
    # more redundancy never hurts any word while the word length stays in
    # one field; crossing into a larger m trades radius for reach
    prev = None
    for R in range(430, 520, 6):
        plan = plan_layout(600, R, 8, 4)
        if prev is not None and plan.m == prev.m:
            assert plan.t_base * plan.W + plan.theta >= prev.t_base * prev.W + prev.theta
            assert (plan.t_base, plan.theta >= prev.theta) >= (prev.t_base, True)
        prev = plan
