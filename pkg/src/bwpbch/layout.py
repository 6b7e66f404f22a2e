"""Construction planning: arrange K message bits and R redundancy bits into
a block grid protected by intersecting row and column words.

Payload is split into b-bit blocks and laid out column by column on a near
square grid of p rows.  Every grid row and every grid column forms one
extended BCH word over its blocks plus that word's own parity bits, so each
block is covered by exactly one row word and one column word.  The last f
blocks hold parity of an inner erasure code computed over anti-diagonal
block sums, which repairs the residual pattern once iterative decoding has
isolated it to few enough crossings.

Redundancy is budgeted as R = f*b + W + m*(W*t + theta) + slack, with W the
word count, m the per-word parity granularity, t the shared base correction
radius, and theta words upgraded to t+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .galois import build_field
from .bch import BchSpec, build_bch_spec
from .rs import RsSpec, balanced_slice_widths


@dataclass(frozen=True)
class WordDescriptor:
    """One row or column word: which blocks it covers and how strong it is."""

    axis: str
    index: int
    blocks: tuple[int, ...]
    t: int
    data_bits: int
    n: int

    @property
    def parity_bits(self) -> int:
        return self.n - self.data_bits

    @property
    def serialized_bits(self) -> int:
        return self.n + 1


@dataclass
class FoldingPlan:
    """Anti-diagonal folding of blocks into inner-code symbol positions."""

    n_rs: int
    f: int
    widths: list[int]
    block_position: list[int]
    position_blocks: list[list[int]]
    specs: list[RsSpec]


def solve_grid_rows(eta: int) -> int:
    """The unique p with p*(p-1) < eta <= p*(p+1)."""
    p = max(1, math.isqrt(eta))
    while p * (p - 1) >= eta:
        p -= 1
    while p * (p + 1) < eta:
        p += 1
    return p


class LayoutPlan:
    def __init__(self, K: int, R: int, b: int, f: int, folding: bool = True,
                 rs_width: int | None = None,
                 prim_polys: dict[int, int] | None = None):
        if K < 1 or R < 1 or b < 1 or f < 1:
            raise ValueError("K, R, b, f must all be positive")
        if not folding and f <= 4:
            raise ValueError("block-as-symbol mode is only available for f > 4")
        self.K, self.R, self.b, self.f = K, R, b, f
        self.folded = folding
        self.rs_width = rs_width
        self.prim_polys = dict(prim_polys) if prim_polys else {}

        data_blocks = -(-K // b)
        eta = data_blocks + f
        p = solve_grid_rows(eta)
        case2 = eta > p * p
        cols = p + 1 if case2 else p
        W = 2 * p + 1 if case2 else 2 * p
        budget = R - f * b
        if budget <= W:
            raise ValueError("R too small to give every word parity bits")
        m = (cols * b + -(-budget // W) - 1).bit_length()
        t = (budget - W) // (W * m)
        if t < 1:
            raise ValueError("R too small for a correction radius of 1")
        theta = (budget - W) // m - W * t
        self.slack = (budget - W) % m

        self.data_block_count = data_blocks
        self.eta, self.p, self.cols, self.case = eta, p, cols, 2 if case2 else 1
        self.W, self.m, self.t_base, self.theta = W, m, t, theta
        self.pad_bits = data_blocks * b - K

        full, rem = divmod(eta, p)
        self.grid_full_cols, self.grid_rem = full, rem

        def row_blocks(l: int) -> tuple[int, ...]:
            width = full + (1 if l < rem else 0)
            return tuple(j * p + l for j in range(width))

        def col_blocks(j: int) -> tuple[int, ...]:
            height = p if j < full else rem
            return tuple(j * p + l for l in range(height))

        order = [("row", l, row_blocks(l)) for l in range(p)]
        order += [("col", j, col_blocks(j)) for j in range(cols) if col_blocks(j)]
        # upgrade order: longer words first within an axis, rows before columns
        ranked = sorted(range(len(order)),
                        key=lambda i: (order[i][0] != "row", -len(order[i][2]), order[i][1]))
        upgraded = set(ranked[:theta])

        self.row_words: list[WordDescriptor] = []
        self.col_words: list[WordDescriptor] = []
        for i, (axis, idx, blocks) in enumerate(order):
            wt = t + 1 if i in upgraded else t
            data_bits = len(blocks) * b
            wd = WordDescriptor(axis, idx, blocks, wt, data_bits, data_bits + wt * m)
            (self.row_words if axis == "row" else self.col_words).append(wd)
        self.words = self.row_words + self.col_words
        assert len(self.words) == W

        limit = (1 << m) - 1
        worst = max(wd.n for wd in self.words)
        if worst > limit:
            raise ValueError(f"word length {worst} exceeds locator domain of GF(2^{m})")
        t_max = t + 1 if theta else t
        if t_max > 1 << (-(-m // 2) - 1):
            raise ValueError(f"correction radius {t_max} too large for m={m}")

        self.folding = self._build_folding()

        self.N = K + f * b + sum(wd.parity_bits + 1 for wd in self.words)
        assert self.N == K + R - self.slack
        self.rate = K / self.N

    def _build_folding(self) -> FoldingPlan:
        p, f, eta = self.p, self.f, self.eta
        if not self.folded:
            # block-as-symbol: every block is one position of one wide RS code
            if self.b > 16:
                raise ValueError("block-as-symbol mode needs b <= 16")
            spec = RsSpec(self.b, eta, f, self.prim_polys.get(self.b))
            return FoldingPlan(eta, f, [self.b], list(range(eta)),
                               [[g] for g in range(eta)], [spec])
        n_rs = 2 * p - 1 + f
        widths = balanced_slice_widths(self.b, n_rs, self.rs_width)
        block_position = []
        position_blocks: list[list[int]] = [[] for _ in range(n_rs)]
        for g in range(eta):
            if g >= eta - f:
                pos = 2 * p - 1 + (g - (eta - f))
            else:
                pos = g % p + g // p
                assert pos <= 2 * p - 2
            block_position.append(pos)
            position_blocks[pos].append(g)
        specs = [RsSpec(w, n_rs, f, self.prim_polys.get(w)) for w in widths]
        return FoldingPlan(n_rs, f, widths, block_position, position_blocks, specs)

    def block_coords(self, g: int) -> tuple[int, int]:
        return g % self.p, g // self.p

    def word_groups(self) -> list[tuple[str, int, int, int]]:
        """(axis, word count, blocks per word, t) summary rows, rows first."""
        out: list[tuple[str, int, int, int]] = []
        for wd in self.words:
            key = (wd.axis, len(wd.blocks), wd.t)
            if out and (out[-1][0], out[-1][2], out[-1][3]) == key:
                out[-1] = (key[0], out[-1][1] + 1, key[1], key[2])
            else:
                out.append((key[0], 1, key[1], key[2]))
        return out

    def bch_specs(self) -> dict[tuple[int, int], BchSpec]:
        """One shared word spec per distinct (n, t) shape."""
        ctx = build_field(self.m, self.prim_polys.get(self.m))
        out: dict[tuple[int, int], BchSpec] = {}
        for wd in self.words:
            key = (wd.n, wd.t)
            if key not in out:
                out[key] = build_bch_spec(ctx, wd.n, wd.t, extended=True)
        return out

    def __repr__(self):
        return (f"LayoutPlan(K={self.K} R={self.R} b={self.b} f={self.f} "
                f"p={self.p} case={self.case} m={self.m} t={self.t_base} "
                f"theta={self.theta} N={self.N} rate={self.rate:.4f})")


def plan_layout(K: int, R: int, b: int, f: int, folding: bool = True,
                rs_width: int | None = None,
                prim_polys: dict[int, int] | None = None) -> LayoutPlan:
    return LayoutPlan(K, R, b, f, folding, rs_width, prim_polys)


def describe_layout(plan: LayoutPlan) -> str:
    lines = [
        f"payload K={plan.K} redundancy R={plan.R} block {plan.b} bits, "
        f"{plan.f} erasure parity blocks",
        f"grid: {plan.p} rows x {plan.cols} cols, {plan.eta} blocks "
        f"({plan.data_block_count} data, pad {plan.pad_bits} bits)",
        f"words: W={plan.W}, m={plan.m}, base t={plan.t_base}, "
        f"{plan.theta} upgraded to t+1, slack {plan.slack}",
        f"frame: N={plan.N} bits, rate {plan.rate:.4f}",
        f"inner code: {plan.folding.n_rs} positions, slice widths {plan.folding.widths}",
    ]
    for axis, count, blocks, t in plan.word_groups():
        lines.append(f"  {count:3d} {axis} words of {blocks} blocks, t={t}")
    return "\n".join(lines)
