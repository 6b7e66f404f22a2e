"""Reed-Solomon erasure coding over small binary extension fields.

Block payloads are sliced into sub-symbols; each slice index forms its own
RS code across the fold positions, so a b-bit block contributes one symbol
per slice.  Slice widths are balanced and may differ by one bit, which lets
parity blocks carry full-width parity symbols with no spare bits.

Codeword convention: position j carries locator beta^j (beta primitive), and
a codeword y satisfies y(beta^i) = 0 for i = 0..f-1.  The last f positions
hold parity symbols.
"""

from __future__ import annotations

import math

from .galois import FieldContext, build_field


def balanced_slice_widths(b: int, n_rs: int, preferred: int | None = None) -> list[int]:
    """Split b bits into the fewest slices whose widths all support n_rs.

    A width-w slice needs n_rs <= 2^w - 1 distinct locators.  Widths start
    near one byte (or the caller's preferred width) and grow (by using fewer
    slices) when the minimum width demands it; within a split, widths differ
    by at most one bit.
    """
    w_min = max(2, n_rs.bit_length())
    if b < w_min:
        raise ValueError(f"block size {b} cannot index {n_rs} fold positions")
    if preferred is None:
        w_pref = max(8, w_min)
    elif preferred < w_min:
        raise ValueError(f"slice width {preferred} cannot index {n_rs} fold positions")
    else:
        w_pref = preferred
    c = max(1, math.ceil(b / w_pref))
    while b // c < w_min:
        c -= 1
    wide = b % c
    return [b // c + 1] * wide + [b // c] * (c - wide)


def split_symbols(bits: int, b: int, widths: list[int]) -> list[int]:
    """Slice a b-bit block (little-endian int) into per-slice sub-symbols."""
    out = []
    for w in widths:
        out.append(bits & ((1 << w) - 1))
        bits >>= w
    if bits:
        raise ValueError(f"value does not fit in {b} bits")
    return out


def split_block_symbols(bits: int, b: int, w: int) -> list[int]:
    """Slice a b-bit block into ceil(b/w) width-w symbols, zero-padding the last."""
    if w < 1:
        raise ValueError("symbol width must be positive")
    count = -(-b // w)
    return split_symbols(bits, b, [w] * (count - 1) + [b - w * (count - 1)])


def join_symbols(symbols: list[int], widths: list[int]) -> int:
    out = 0
    shift = 0
    for sym, w in zip(symbols, widths):
        out |= sym << shift
        shift += w
    return out


class RsSpec:
    """One slice's erasure code: n_rs positions, f parity symbols at the end."""

    def __init__(self, width: int, n_rs: int, f: int, poly: int | None = None):
        if f < 1 or n_rs <= f:
            raise ValueError("need at least one data and one parity position")
        ctx = build_field(width, poly)
        if n_rs > ctx.q - 1:
            raise ValueError(f"n_rs={n_rs} exceeds the locator count of GF(2^{width})")
        self.ctx = ctx
        self.width = width
        self.n_rs = n_rs
        self.f = f
        self.data_count = n_rs - f
        # parity solver: A[i][l] = beta^(i * parity_position_l)
        a = [[ctx.alpha_pow(i * (self.data_count + l)) for l in range(f)] for i in range(f)]
        self.parity_solver = _gf_matrix_inverse(ctx, a)

    def __repr__(self):
        return f"RsSpec(GF(2^{self.width}) n={self.n_rs} f={self.f})"


def _gf_matrix_inverse(ctx: FieldContext, a: list[list[int]]) -> list[list[int]]:
    n = len(a)
    aug = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ctx.inv(aug[col][col])
        aug[col] = [ctx.mul(inv, v) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [vr ^ ctx.mul(c, vc) for vr, vc in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def rs_encode(spec: RsSpec, data: list[int]) -> list[int]:
    """Parity symbols for the data portion (positions 0..n_rs-f-1)."""
    if len(data) != spec.data_count:
        raise ValueError(f"expected {spec.data_count} data symbols")
    ctx = spec.ctx
    q1 = ctx.q - 1
    s = []
    for i in range(spec.f):
        acc = 0
        for pos, d in enumerate(data):
            if d:
                acc ^= ctx.exp[(ctx.log[d] + i * pos % q1) % q1]
        s.append(acc)
    return [
        _dot(ctx, spec.parity_solver[l], s)
        for l in range(spec.f)
    ]


def _dot(ctx: FieldContext, row: list[int], vec: list[int]) -> int:
    acc = 0
    for a, b in zip(row, vec):
        if a and b:
            acc ^= ctx.exp[ctx.log[a] + ctx.log[b]]
    return acc


def rs_syndromes(spec: RsSpec, symbols: list[int]) -> list[int]:
    """S_i = y(beta^i) for i = 0..f-1 over the full codeword."""
    if len(symbols) != spec.n_rs:
        raise ValueError(f"expected {spec.n_rs} symbols")
    ctx = spec.ctx
    q1 = ctx.q - 1
    out = []
    for i in range(spec.f):
        acc = 0
        for pos, d in enumerate(symbols):
            if d:
                acc ^= ctx.exp[(ctx.log[d] + i * pos) % q1]
        out.append(acc)
    return out


def rs_update_syndromes(spec: RsSpec, syn: list[int], pos: int, delta: int) -> list[int]:
    """Fold a symbol change (xor delta at position pos) into syndromes in place."""
    if delta:
        ctx = spec.ctx
        q1 = ctx.q - 1
        ld = ctx.log[delta]
        for i in range(spec.f):
            syn[i] ^= ctx.exp[(ld + i * pos) % q1]
    return syn


def erasure_decode(spec: RsSpec, syn: list[int], erased: list[int]) -> dict[int, int] | None:
    """Recover erased symbol values from syndromes, or None on inconsistency.

    Erased positions must have been zeroed before the syndromes were taken,
    so the returned values are the symbols themselves.  Success requires the
    f - e unused syndrome constraints to agree with the erasure-only model;
    inconsistency means errors outside the erased set.
    """
    ctx = spec.ctx
    e = len(erased)
    if e > spec.f:
        return None
    if len(set(erased)) != e or any(not 0 <= p < spec.n_rs for p in erased):
        raise ValueError("erased positions must be distinct and in range")
    lam = [1]
    locs = [ctx.alpha_pow(p) for p in erased]
    for x in locs:
        lam = [
            (lam[d] if d < len(lam) else 0) ^ (ctx.mul(x, lam[d - 1]) if d else 0)
            for d in range(len(lam) + 1)
        ]
    om = [0] * spec.f
    for d in range(spec.f):
        acc = 0
        for i in range(min(d, e) + 1):
            if i < len(lam) and lam[i] and syn[d - i]:
                acc ^= ctx.mul(lam[i], syn[d - i])
        om[d] = acc
    if any(om[d] for d in range(e, spec.f)):
        return None
    out = {}
    deriv = [lam[d] if d % 2 == 1 else 0 for d in range(1, len(lam))]
    for pos, x in zip(erased, locs):
        xinv = ctx.inv(x)
        den = ctx.eval_poly(deriv, xinv)
        num = ctx.eval_poly(om[:e], xinv)
        out[pos] = ctx.mul(x, ctx.div(num, den)) if num else 0
    return out
