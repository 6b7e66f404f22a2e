"""Product-code frames: encoding and staged iterative decoding.

A frame serializes the message bits, the erasure-code parity blocks, and then
every word's parity region (in-domain parity bits followed by one extension
bit), rows before columns.  Pad bits of the last data block exist only in the
decoder's working array; they are pinned to zero and never transmitted.

Decoding alternates row and column half-iterations.  Phase 1 runs the
reduced-radius decode, phase 2 the full bounded-distance decode, phase 3
one-past-the-radius list decoding with cross-word candidate election, and
phase 4 (the plus2 mode's last resort) the two-past-the-radius list.  A
phase advances when a full iteration leaves the failed-row and failed-column
counts unchanged.  Deep list candidates are electorally weaker than the
radius-(t+1) kind, so they stay locked out until the shallower phases have
genuinely stalled; that ordering means plus2 can only ever extend a plus1
trajectory, never derail one.
After every half-iteration the failed-word crossing pattern is tested
against the inner erasure code, which can repair isolated blocks outright
and finish the frame; each sub-code recovers independently, so positions a
sub-code cannot resolve stay erased while the rest are repaired.

Bookkeeping discipline: a word is skipped while it is marked corrected or
while nothing has disturbed its syndromes since its last attempt.  Marks
commit one full iteration after the successful attempt and are revoked if a
crossing correction dirties the word first; a revoked mark counts as a
detected miscorrection.  A word counts as failed on its even syndromes only;
a wrong extension bit never blocks progress and is repaired by re-encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bch import (
    BchSpec,
    Syndromes,
    bch_encode,
    berlekamp,
    chien_search,
    compute_syndromes,
    decode_plus1_list,
    decode_plus2_list,
    parity_gate,
    update_syndromes,
)
from .layout import LayoutPlan, plan_layout
from .rs import erasure_decode, rs_encode, rs_syndromes, rs_update_syndromes

DECODER_MODES = ("unique", "plus1", "plus2")


@dataclass
class DecodeResult:
    ok: bool
    message: np.ndarray
    iterations: float
    stats: dict[str, int] = field(default_factory=dict)


class _State:
    def __init__(self, work: np.ndarray, syn: list[Syndromes], rs_syn: list[list[int]]):
        self.work = work
        self.syn = syn
        self.rs_syn = rs_syn
        n_words = len(syn)
        self.corrected = np.zeros(n_words, dtype=np.uint8)
        self.dirty = np.ones(n_words, dtype=np.uint8)
        self.pending_marks: dict[int, int] = {}
        self.iter_now = 0
        self.stats = {
            "corrections_phase1": 0,
            "corrections_phase2": 0,
            "corrections_phase3": 0,
            "list_invocations": 0,
            "list_commits": 0,
            "miscorrections_detected": 0,
            "erasure_repaired_blocks": 0,
            "reencoded_words": 0,
        }


class BwpCodec:
    """Encoder/decoder pair for one construction plan."""

    def __init__(self, plan: LayoutPlan):
        self.plan = plan
        self.specs = plan.bch_specs()
        self.word_spec: list[BchSpec] = [self.specs[(wd.n, wd.t)] for wd in plan.words]

        K, b, f, N = plan.K, plan.b, plan.f, plan.N
        dc = plan.data_block_count
        self.work_len = N + plan.pad_bits

        self.block_idx: list[np.ndarray] = []
        for g in range(plan.eta):
            if g < dc - 1:
                idx = np.arange(g * b, (g + 1) * b, dtype=np.int64)
            elif g == dc - 1:
                idx = np.concatenate([
                    np.arange((dc - 1) * b, K, dtype=np.int64),
                    np.arange(N, N + plan.pad_bits, dtype=np.int64),
                ])
            else:
                i = g - dc
                idx = np.arange(K + i * b, K + (i + 1) * b, dtype=np.int64)
            self.block_idx.append(idx)

        self.word_idx: list[np.ndarray] = []
        cursor = K + f * b
        for wd in plan.words:
            parts = [self.block_idx[g] for g in wd.blocks]
            parts.append(np.arange(cursor, cursor + wd.parity_bits + 1, dtype=np.int64))
            cursor += wd.parity_bits + 1
            self.word_idx.append(np.concatenate(parts))
        assert cursor == N

        # bit r of a block -> (slice index, offset inside the slice)
        self.bit_slice: list[tuple[int, int]] = []
        self.slice_offset: list[int] = []
        off = 0
        for s, w in enumerate(plan.folding.widths):
            self.slice_offset.append(off)
            self.bit_slice += [(s, r) for r in range(w)]
            off += w
        assert off == b

    @property
    def frame_length(self) -> int:
        return self.plan.N

    # -- encoding -----------------------------------------------------------

    def encode(self, message: np.ndarray) -> np.ndarray:
        plan = self.plan
        message = np.asarray(message, dtype=np.uint8)
        if message.shape != (plan.K,):
            raise ValueError(f"message must hold {plan.K} bits")
        work = np.zeros(self.work_len, dtype=np.uint8)
        work[: plan.K] = message

        fold = plan.folding
        for s, spec in enumerate(fold.specs):
            data = [0] * spec.data_count
            for g in range(plan.data_block_count):
                data[fold.block_position[g]] ^= self._block_symbol(work, g, s)
            for i, sym in enumerate(rs_encode(spec, data)):
                self._write_block_slice(work, plan.data_block_count + i, s, sym)

        for w in range(plan.W):
            spec = self.word_spec[w]
            idx = self.word_idx[w]
            cw = bch_encode(spec, work[idx[: spec.k]])
            work[idx[spec.k:]] = cw[spec.k:]
        return work[: plan.N].copy()

    def _block_symbol(self, work: np.ndarray, g: int, s: int) -> int:
        w = self.plan.folding.widths[s]
        off = self.slice_offset[s]
        bits = work[self.block_idx[g][off: off + w]]
        return int((bits.astype(np.uint64) << np.arange(w, dtype=np.uint64)).sum())

    def _write_block_slice(self, work: np.ndarray, g: int, s: int, value: int) -> None:
        w = self.plan.folding.widths[s]
        off = self.slice_offset[s]
        for r in range(w):
            work[self.block_idx[g][off + r]] = (value >> r) & 1

    # -- decoding -------------------------------------------------------------

    def decode(self, frame: np.ndarray, decoder: str = "plus2",
               max_iters: int = 32, debug: bool = False) -> DecodeResult:
        plan = self.plan
        if decoder not in DECODER_MODES:
            raise ValueError(f"decoder must be one of {DECODER_MODES}")
        frame = np.asarray(frame, dtype=np.uint8)
        if frame.shape != (plan.N,):
            raise ValueError(f"frame must hold {plan.N} bits")
        work = np.zeros(self.work_len, dtype=np.uint8)
        work[: plan.N] = frame

        syn = [compute_syndromes(self.word_spec[w], work[self.word_idx[w]])
               for w in range(plan.W)]
        fold = plan.folding
        rs_syn = []
        for s, spec in enumerate(fold.specs):
            symbols = [0] * fold.n_rs
            for g in range(plan.eta):
                symbols[fold.block_position[g]] ^= self._block_symbol(work, g, s)
            rs_syn.append(rs_syndromes(spec, symbols))
        state = _State(work, syn, rs_syn)

        top_phase = {"unique": 2, "plus1": 3, "plus2": 4}[decoder]
        outcome = self._check_success(state)
        phase = 2 if outcome == "partial" else 1
        prev_counts = self._failed_counts(state)
        halves = 0
        while outcome != "success" and halves < 2 * max_iters:
            rows_half = halves % 2 == 0
            halves += 1
            state.iter_now = (halves + 1) // 2
            lo, hi = (0, plan.p) if rows_half else (plan.p, plan.W)
            self._run_half_iteration(state, phase, lo, hi)
            if debug:
                self._verify_state(state)
            if not rows_half:
                self._commit_marks(state)
            outcome = self._check_success(state)
            if outcome == "success":
                break
            if outcome == "partial":
                phase = 2
                state.dirty[:] = 1
                prev_counts = self._failed_counts(state)
                continue
            if rows_half:
                continue
            counts = self._failed_counts(state)
            if counts == prev_counts:
                if phase >= top_phase:
                    break
                phase += 1
                state.dirty[:] = 1
            prev_counts = counts

        state.stats["phase"] = phase
        return DecodeResult(
            ok=outcome == "success",
            message=state.work[: plan.K].copy(),
            iterations=halves / 2,
            stats=state.stats,
        )

    # -- iteration machinery ----------------------------------------------------

    def _failed_counts(self, state: _State) -> tuple[int, int]:
        p = self.plan.p
        rows = sum(1 for w in range(p) if state.syn[w].any_nonzero())
        cols = sum(1 for w in range(p, self.plan.W) if state.syn[w].any_nonzero())
        return rows, cols

    def _run_half_iteration(self, state: _State, phase: int,
                            lo: int, hi: int) -> None:
        for w in range(lo, hi):
            if state.corrected[w] or not state.dirty[w]:
                continue
            state.dirty[w] = 0
            syn = state.syn[w]
            if not syn.any_nonzero():
                state.pending_marks.setdefault(w, state.iter_now)
                continue
            if phase < 3:
                flips = self._gated_unique(self.word_spec[w], syn, phase)
                if flips is not None:
                    self._apply(state, w, flips)
                    state.stats[f"corrections_phase{phase}"] += 1
                    state.pending_marks[w] = state.iter_now
            else:
                # a committed fix of a crossing word may flip bits back into
                # this word; only schedule the mark if it stayed undisturbed
                if self._phase3_attempt(state, w, phase >= 4) and not state.dirty[w]:
                    state.pending_marks[w] = state.iter_now

    def _verify_state(self, state: _State) -> None:
        """Debug invariant: stored syndromes match a recount of the working bits."""
        plan = self.plan
        for w in range(plan.W):
            ref = compute_syndromes(self.word_spec[w], state.work[self.word_idx[w]])
            assert ref.even == state.syn[w].even and ref.parity == state.syn[w].parity, \
                f"word {w} syndromes drifted"
        fold = plan.folding
        for s, spec in enumerate(fold.specs):
            symbols = [0] * fold.n_rs
            for g in range(plan.eta):
                symbols[fold.block_position[g]] ^= self._block_symbol(state.work, g, s)
            assert rs_syndromes(spec, symbols) == state.rs_syn[s], \
                f"sub-code {s} syndromes drifted"

    def _commit_marks(self, state: _State) -> None:
        for w, sched in list(state.pending_marks.items()):
            if sched < state.iter_now:
                state.corrected[w] = 1
                del state.pending_marks[w]

    def _gated_unique(self, spec: BchSpec, syn: Syndromes,
                      phase: int) -> tuple[int, ...] | None:
        st = berlekamp(spec, syn)
        limit = spec.t - 1 if phase == 1 else spec.t
        if st.l_lam > limit:
            return None
        if not parity_gate(syn, st.l_lam):
            return None
        roots = chien_search(spec, st.lam)
        if len(roots) != st.l_lam:
            return None
        return tuple(int(r) for r in roots)

    def _cross_of(self, w: int, g: int, r: int) -> tuple[int, int]:
        """Crossing word and its local bit position for block g, bit r."""
        p = self.plan.p
        if w < p:
            return p + g // p, (g % p) * self.plan.b + r
        return g % p, (g // p) * self.plan.b + r

    def _block_failed_pair(self, state: _State, g: int) -> bool:
        p = self.plan.p
        return (state.syn[g % p].any_nonzero()
                and state.syn[p + g // p].any_nonzero())

    def _mark_dirty(self, state: _State, w: int) -> None:
        state.dirty[w] = 1
        if state.corrected[w]:
            state.corrected[w] = 0
            state.stats["miscorrections_detected"] += 1
        state.pending_marks.pop(w, None)

    def _apply(self, state: _State, w: int, flips: tuple[int, ...]) -> None:
        """Commit in-domain bit flips of word w and propagate all bookkeeping."""
        if not flips:
            return
        wd = self.plan.words[w]
        spec = self.word_spec[w]
        b = self.plan.b
        state.work[self.word_idx[w][list(flips)]] ^= 1
        update_syndromes(spec, state.syn[w], flips)
        cross: dict[int, list[int]] = {}
        for local in flips:
            if local >= wd.data_bits:
                continue
            g, r = wd.blocks[local // b], local % b
            w2, local2 = self._cross_of(w, g, r)
            cross.setdefault(w2, []).append(local2)
            s, sr = self.bit_slice[r]
            rs_update_syndromes(self.plan.folding.specs[s], state.rs_syn[s],
                                self.plan.folding.block_position[g], 1 << sr)
        for w2, locals2 in cross.items():
            update_syndromes(self.word_spec[w2], state.syn[w2], tuple(locals2))
            self._mark_dirty(state, w2)

    # -- phase 3 -----------------------------------------------------------------

    def _phase3_domain(self, state: _State, w: int) -> np.ndarray:
        """Search positions: bits of doubly-failed blocks plus own parity bits."""
        wd = self.plan.words[w]
        b = self.plan.b
        dom: list[int] = []
        for bi, g in enumerate(wd.blocks):
            if self._block_failed_pair(state, g):
                dom.extend(range(bi * b, bi * b + b))
        dom.extend(range(wd.data_bits, wd.n))
        return np.asarray(dom, dtype=np.int64)

    def _phase3_attempt(self, state: _State, w: int, deep: bool) -> bool:
        spec = self.word_spec[w]
        syn = state.syn[w]
        domain = self._phase3_domain(state, w)
        state.stats["list_invocations"] += 1
        if parity_gate(syn, spec.t + 1):
            cands = decode_plus1_list(spec, syn, domain)
        elif deep:
            cands = decode_plus2_list(spec, syn, domain)
        else:
            return False
        if not cands:
            return False
        return self._elect_candidate(state, w, [c.flipped_positions for c in cands])

    def _elect_candidate(self, state: _State, w: int,
                         candidates: list[tuple[int, ...]]) -> bool:
        """Pick the candidate that makes the most failed crossing words
        decodable; commit it together with those words' corrections."""
        wd = self.plan.words[w]
        b = self.plan.b
        best = None
        for flips in sorted(candidates, key=lambda fl: (len(fl), fl)):
            cross: dict[int, list[int]] = {}
            for local in flips:
                if local < wd.data_bits:
                    g, r = wd.blocks[local // b], local % b
                    w2, local2 = self._cross_of(w, g, r)
                    cross.setdefault(w2, []).append(local2)
            wins = []
            for w2, locals2 in cross.items():
                syn2 = state.syn[w2]
                if not syn2.any_nonzero():
                    continue
                trial = syn2.copy()
                update_syndromes(self.word_spec[w2], trial, tuple(locals2))
                fix2 = self._gated_unique(self.word_spec[w2], trial, phase=2)
                if fix2 is not None:
                    wins.append((w2, fix2))
            if best is None or len(wins) > best[0]:
                best = (len(wins), flips, wins)
        if best is None or best[0] == 0:
            return False
        _, flips, wins = best
        self._apply(state, w, flips)
        state.stats["list_commits"] += 1
        state.stats["corrections_phase3"] += 1 + len(wins)
        for w2, fix2 in wins:
            self._apply(state, w2, fix2)
            state.dirty[w2] = 0
            state.pending_marks[w2] = state.iter_now
        return True

    # -- erasure completion --------------------------------------------------------

    def _check_success(self, state: _State) -> str:
        plan = self.plan
        p, f = plan.p, plan.f
        failed_rows = [w for w in range(p) if state.syn[w].any_nonzero()]
        failed_cols = [w for w in range(p, plan.W) if state.syn[w].any_nonzero()]
        if len(failed_rows) * len(failed_cols) > f:
            return "continue"
        fold = plan.folding
        pos_blocks: dict[int, list[int]] = {}
        for wr in failed_rows:
            for wc in failed_cols:
                g = (wc - p) * p + wr
                if g < plan.eta:
                    pos_blocks.setdefault(fold.block_position[g], []).append(g)
        erased = sorted(pos_blocks)
        singletons = {pos: gs[0] for pos, gs in pos_blocks.items() if len(gs) == 1}

        # each sub-code recovers on its own; a failing sub-code leaves its
        # symbols erased without blocking the repairs the others can make
        repairs: list[tuple[int, int, int]] = []  # block, slice, true symbol
        all_slices_ok = True
        for s, spec in enumerate(fold.specs):
            syn_s = list(state.rs_syn[s])
            cur_sum: dict[int, int] = {}
            for pos in erased:
                cur = 0
                for g in fold.position_blocks[pos]:
                    cur ^= self._block_symbol(state.work, g, s)
                cur_sum[pos] = cur
                rs_update_syndromes(spec, syn_s, pos, cur)
            values = erasure_decode(spec, syn_s, erased)
            if values is None:
                all_slices_ok = False
                continue
            for pos, g in singletons.items():
                cur_g = self._block_symbol(state.work, g, s)
                true_g = values[pos] ^ cur_sum[pos] ^ cur_g
                if true_g != cur_g:
                    repairs.append((g, s, true_g))

        for g, s, val in repairs:
            self._repair_block_slice(state, g, s, val)
        if repairs:
            state.stats["erasure_repaired_blocks"] += len({g for g, _, _ in repairs})
        if not all_slices_ok or len(singletons) != len(pos_blocks):
            return "partial" if repairs else "continue"

        # every suspect block now holds trusted data; any word still showing
        # damage must be damaged only in its own parity region, so re-encode it
        for w in failed_rows + failed_cols:
            if not state.syn[w].any_nonzero() and state.syn[w].parity == 0:
                continue
            spec = self.word_spec[w]
            idx = self.word_idx[w]
            cw = bch_encode(spec, state.work[idx[: spec.k]])
            state.work[idx[spec.k:]] = cw[spec.k:]
            state.syn[w] = compute_syndromes(spec, state.work[idx])
            state.stats["reencoded_words"] += 1
            assert not state.syn[w].any_nonzero()
        if any(state.syn[w].any_nonzero() for w in range(plan.W)):
            return "continue"
        if any(any(sv) for sv in state.rs_syn):
            return "continue"
        return "success"

    def _repair_block_slice(self, state: _State, g: int, s: int, value: int) -> None:
        width = self.plan.folding.widths[s]
        off = self.slice_offset[s]
        p, b = self.plan.p, self.plan.b
        row_w, col_w = g % p, p + g // p
        flips_row: list[int] = []
        flips_col: list[int] = []
        for r in range(width):
            idx = self.block_idx[g][off + r]
            if state.work[idx] != (value >> r) & 1:
                state.work[idx] ^= 1
                flips_row.append((g // p) * b + off + r)
                flips_col.append((g % p) * b + off + r)
                rs_update_syndromes(self.plan.folding.specs[s], state.rs_syn[s],
                                    self.plan.folding.block_position[g], 1 << r)
        if flips_row:
            update_syndromes(self.word_spec[row_w], state.syn[row_w], tuple(flips_row))
            update_syndromes(self.word_spec[col_w], state.syn[col_w], tuple(flips_col))
            self._mark_dirty(state, row_w)
            self._mark_dirty(state, col_w)


def make_codec(K: int, R: int, b: int, f: int) -> BwpCodec:
    return BwpCodec(plan_layout(K, R, b, f))
