"""Core BCH behavior: construction, encoding, syndromes, unique decoding."""

import random

import numpy as np
import pytest

from bwpbch import bch
from bwpbch.bch import (
    BchSpec,
    Correction,
    bch_encode,
    berlekamp,
    build_bch_spec,
    compute_syndromes,
    decode_minus1,
    decode_unique,
    full_syndromes,
    parity_gate,
    syndrome_at,
    update_syndromes,
)
from bwpbch.galois import build_field, pb_degree, pb_mod


def _random_word(spec, weight, rng):
    word = np.zeros(spec.serialized_length, dtype=np.uint8)
    for pos in rng.sample(range(spec.n), weight):
        word[pos] = 1
    return word


def test_construction_shapes():
    ctx4 = build_field(4)
    sp = build_bch_spec(ctx4, 15, 1)
    assert sp.k == 11 and sp.generator == 0b10011
    sp2 = build_bch_spec(ctx4, 15, 2)
    assert sp2.k == 7 and pb_degree(sp2.generator) == 8

    ctx6 = build_field(6)
    sp63 = build_bch_spec(ctx6, 63, 7)
    assert sp63.k == 24
    assert pb_degree(sp63.g_plain) == 39
    # the generator divides x^(q-1) - 1, so codewords live in the cyclic code
    assert pb_mod((1 << 63) ^ 1, sp63.g_plain) == 0


def test_generator_roots_63_24():
    # designed roots alpha^1..alpha^14 plus the conjugacy extras at 17 and 19,
    # but nothing at 21
    ctx = build_field(6)
    sp = build_bch_spec(ctx, 63, 7)
    coeffs = [(sp.g_plain >> d) & 1 for d in range(pb_degree(sp.g_plain) + 1)]
    for e in list(range(1, 15)) + [17, 19]:
        assert ctx.eval_poly(coeffs, ctx.alpha_pow(e)) == 0
    assert ctx.eval_poly(coeffs, ctx.alpha_pow(21)) != 0


def test_shortened_and_invalid_params():
    ctx = build_field(6)
    sp = build_bch_spec(ctx, 45, 3)
    assert sp.n == 45 and sp.k == 45 - 18
    with pytest.raises(ValueError):
        build_bch_spec(ctx, 64, 2)
    with pytest.raises(ValueError):
        build_bch_spec(ctx, 20, 10)
    with pytest.raises(ValueError):
        build_bch_spec(ctx, 18, 3)  # deg g = 18 leaves no message bits


def test_encode_systematic_and_divisible():
    rng = random.Random(7)
    ctx = build_field(5)
    sp = build_bch_spec(ctx, 31, 3)
    for _ in range(40):
        msg = np.asarray([rng.randrange(2) for _ in range(sp.k)], dtype=np.uint8)
        cw = bch_encode(sp, msg)
        assert cw.shape == (31,)
        assert np.array_equal(cw[: sp.k], msg)
        poly = 0
        for j in range(sp.n):
            poly |= int(cw[j]) << j
        assert pb_mod(poly, sp.g_plain) == 0
        syn = compute_syndromes(sp, cw)
        assert not syn.any_nonzero() and syn.parity is None


def test_encode_extended_parity():
    rng = random.Random(8)
    ctx = build_field(5)
    sp = build_bch_spec(ctx, 31, 2, extended=True)
    assert sp.serialized_length == 32
    for _ in range(30):
        msg = np.asarray([rng.randrange(2) for _ in range(sp.k)], dtype=np.uint8)
        cw = bch_encode(sp, msg)
        assert int(cw.sum()) % 2 == 0
        syn = compute_syndromes(sp, cw)
        assert not syn.any_nonzero() and syn.parity == 0
        # flipping the trailing parity bit disturbs only the parity syndrome
        cw[sp.n] ^= 1
        syn2 = compute_syndromes(sp, cw)
        assert syn2.even == syn.even and syn2.parity == 1


def test_berlekamp_exact_locator_and_length_invariant():
    rng = random.Random(21)
    ctx = build_field(6)
    for t in (2, 3, 7):
        sp = build_bch_spec(ctx, 63, t)
        for _ in range(60):
            w = rng.randrange(t + 1)
            flips = sorted(rng.sample(range(sp.n), w))
            word = np.zeros(sp.serialized_length, dtype=np.uint8)
            word[flips] = 1
            st = berlekamp(sp, compute_syndromes(sp, word))
            assert st.l_lam + st.l_aux == 2 * t + 1
            assert st.l_lam == w
            want = [1]
            for j in flips:
                # (1 - alpha_j x) product, built termwise
                want = [want[0]] + [
                    (want[d] if d < len(want) else 0)
                    ^ ctx.mul(sp.locators[j], want[d - 1])
                    for d in range(1, len(want) + 1)
                ]
            assert st.lam == want


def test_decode_unique_roundtrip_exhaustive_patterns():
    ctx = build_field(4)
    sp = build_bch_spec(ctx, 15, 2)
    rng = random.Random(3)
    msgs = [np.zeros(sp.k, dtype=np.uint8)]
    for _ in range(8):
        msgs.append(np.asarray([rng.randrange(2) for _ in range(sp.k)], dtype=np.uint8))
    patterns = [[]] + [[i] for i in range(15)]
    patterns += [[i, j] for i in range(15) for j in range(i + 1, 15)]
    for msg in msgs:
        cw = bch_encode(sp, msg)
        for pat in patterns:
            word = cw.copy()
            word[pat] ^= 1
            got = decode_unique(sp, compute_syndromes(sp, word))
            assert got is not None
            assert sorted(got.flipped_positions) == sorted(pat)


def test_decode_unique_never_claims_invalid_codeword():
    # at weight t+1 the decoder may miscorrect toward a different codeword,
    # but any answer it does give must zero the syndromes
    rng = random.Random(5)
    ctx = build_field(4)
    sp = build_bch_spec(ctx, 15, 2)
    for _ in range(300):
        word = _random_word(sp, 3, rng)
        syn = compute_syndromes(sp, word)
        got = decode_unique(sp, syn)
        if got is not None:
            assert len(got.flipped_positions) <= sp.t
            check = syn.copy()
            update_syndromes(sp, check, got.flipped_positions)
            assert not check.any_nonzero()


def test_decode_minus1_radius_and_no_root_search_at_boundary(monkeypatch):
    rng = random.Random(11)
    ctx = build_field(6)
    sp = build_bch_spec(ctx, 63, 3)
    calls = []
    real = bch.chien_search
    monkeypatch.setattr(bch, "chien_search", lambda *a, **k: calls.append(1) or real(*a, **k))
    for _ in range(200):
        w = rng.randrange(sp.t + 2)
        flips = sorted(rng.sample(range(sp.n), w))
        word = np.zeros(sp.serialized_length, dtype=np.uint8)
        word[flips] = 1
        before = len(calls)
        got = decode_minus1(sp, compute_syndromes(sp, word))
        if w <= sp.t - 1:
            assert got is not None and sorted(got.flipped_positions) == flips
        else:
            # weights t and t+1 stop at the length check, before any search
            assert got is None
            assert len(calls) == before


def test_update_syndromes_matches_recompute_and_inverts():
    rng = random.Random(13)
    ctx = build_field(5)
    sp = build_bch_spec(ctx, 31, 3, extended=True)
    for _ in range(50):
        word = _random_word(sp, rng.randrange(8), rng)
        word[sp.n] = rng.randrange(2)
        syn = compute_syndromes(sp, word)
        flips = tuple(sorted(rng.sample(range(sp.n), rng.randrange(1, 5))))
        updated = update_syndromes(sp, syn.copy(), flips)
        flipped = word.copy()
        flipped[list(flips)] ^= 1
        direct = compute_syndromes(sp, flipped)
        assert updated.even == direct.even and updated.parity == direct.parity
        back = update_syndromes(sp, updated.copy(), flips)
        assert back.even == syn.even and back.parity == syn.parity


def test_parity_gate():
    syn = compute_syndromes(
        build_bch_spec(build_field(4), 15, 1, extended=True),
        np.zeros(16, dtype=np.uint8),
    )
    assert syn.parity == 0
    assert parity_gate(syn, 0) and parity_gate(syn, 2)
    assert not parity_gate(syn, 1)
    syn.parity = 1
    assert parity_gate(syn, 1) and not parity_gate(syn, 2)
    syn.parity = None
    assert parity_gate(syn, 1) and parity_gate(syn, 2)


def test_full_syndromes_squaring_consistency():
    rng = random.Random(17)
    ctx = build_field(6)
    sp = build_bch_spec(ctx, 63, 4)
    for _ in range(20):
        word = _random_word(sp, rng.randrange(10), rng)
        full = full_syndromes(sp, compute_syndromes(sp, word))
        for i in range(2 * sp.t):
            assert full[i] == syndrome_at(sp, word, i)


def test_custom_locators():
    # a shortened code may sit on any distinct nonzero locator set; decoding
    # reports positions in that set's indexing
    rng = random.Random(19)
    ctx = build_field(5)
    locs = tuple(ctx.alpha_pow(i) for i in range(5, 26))
    sp = build_bch_spec(ctx, 21, 2, locators=locs)
    for _ in range(30):
        flips = sorted(rng.sample(range(21), 2))
        word = np.zeros(21, dtype=np.uint8)
        word[flips] = 1
        got = decode_unique(sp, compute_syndromes(sp, word))
        assert got is not None and sorted(got.flipped_positions) == flips
