"""Shortened (e)BCH codes on even syndromes: encode, unique decode, list decode.

Sensewords are uint8 arrays of length spec.n, plus one trailing overall-parity
bit when the code is extended.  Bit position j carries locator alpha_j (the
default locator set is alpha^0..alpha^(n-1)); an error at j puts the root
alpha_j^-1 into the error locator polynomial.  Only even-indexed syndromes are
stored; odd ones follow from S_{2i+1} = S_i^2 for binary codes.

The key-equation solver tracks the shifted auxiliary polynomial (x^2 times the
classical correction term), which steps the recursion two syndromes at a time
and leaves the state ready for one-bit-flip updates and for resuming past 2t
when higher code-root syndromes are available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .galois import FieldContext, minimal_polynomial, pb_degree, pb_mod, pb_mul, pb_mulx_mod, pb_pow_mod


@dataclass
class Syndromes:
    """Even-indexed syndromes S_0, S_2, ..., S_{2t-2} plus the parity syndrome."""

    even: list[int]
    parity: int | None
    t: int

    def any_nonzero(self) -> bool:
        return any(self.even)

    def copy(self) -> "Syndromes":
        return Syndromes(list(self.even), self.parity, self.t)


@dataclass
class KeyEquationState:
    lam: list[int]
    aux: list[int]
    l_lam: int
    l_aux: int

    def copy(self) -> "KeyEquationState":
        return KeyEquationState(list(self.lam), list(self.aux), self.l_lam, self.l_aux)


@dataclass(frozen=True)
class Correction:
    flipped_positions: tuple[int, ...]
    codeword_valid: bool = True


class BchSpec:
    """A shortened BCH or eBCH code over a shared FieldContext.

    n counts locator-domain bits; extended codes serialize one extra parity
    bit after them (serialized_length = n + 1) which no locator covers.
    """

    def __init__(self, ctx: FieldContext, n: int, t: int, extended: bool,
                 locators: tuple[int, ...] | None = None):
        if t < 1:
            raise ValueError("t must be at least 1")
        if n > ctx.q - 1:
            raise ValueError(f"n={n} exceeds locator domain size {ctx.q - 1}")
        if n < 2 * t + 1:
            raise ValueError(f"n={n} too short for t={t}")
        self.ctx = ctx
        self.n = n
        self.t = t
        self.extended = extended

        seen: set[int] = set()
        g = 1
        for i in range(1, 2 * t, 2):
            mu = minimal_polynomial(ctx, i)
            if mu not in seen:
                seen.add(mu)
                g = pb_mul(g, mu)
        self.g_plain = g
        self.generator = pb_mul(g, 0b11) if extended else g
        self.k = n - pb_degree(g)
        if self.k < 1:
            raise ValueError(f"t={t} leaves no message bits at n={n}")

        if locators is None:
            locators = tuple(ctx.alpha_pow(i) for i in range(n))
        if len(locators) != n:
            raise ValueError("locator list length must equal n")
        if len(set(locators)) != n or 0 in locators:
            raise ValueError("locators must be distinct nonzero field elements")
        self.locators = locators

        q1 = ctx.q - 1
        self.log_loc = np.asarray([ctx.log[a] for a in locators], dtype=np.int64)
        # inv_pow_log[d][j] = log of locator_j^(-d); exponent depth covers every
        # polynomial this spec evaluates (aux length tops out at 2t+1).
        depth = 2 * t + 3
        rows = (-np.arange(depth, dtype=np.int64)[:, None] * self.log_loc[None, :]) % q1
        self.inv_pow_log = rows
        # syn_pow[s][j] = locator_j^(2s+1), the even-syndrome contribution of bit j
        exps = (np.arange(1, 2 * t + 1, 2, dtype=np.int64)[:, None] * self.log_loc[None, :]) % q1
        self.syn_pow = ctx.exp_np[exps]
        self._full_domain = np.arange(n, dtype=np.int64)
        self._parity_rows: np.ndarray | None = None

    @property
    def serialized_length(self) -> int:
        return self.n + 1 if self.extended else self.n

    def __repr__(self):
        kind = "eBCH" if self.extended else "BCH"
        return f"BchSpec({kind} n={self.n} k={self.k} t={self.t} m={self.ctx.m})"


def build_bch_spec(ctx: FieldContext, n: int, t: int, extended: bool = False,
                   locators: tuple[int, ...] | None = None) -> BchSpec:
    return BchSpec(ctx, n, t, extended, locators)


# ---------------------------------------------------------------------------
# encoding

def _parity_rows(spec: BchSpec) -> np.ndarray:
    """Per-message-bit parity masks, packed little-endian into uint64 words."""
    if spec._parity_rows is not None:
        return spec._parity_rows
    g = spec.g_plain
    k, plen = spec.k, spec.n - spec.k
    # row_i = x^(i-k) mod g; x is invertible mod g because g(0) = 1
    h = (g ^ 1) >> 1
    v = pb_pow_mod(h, k, g)
    nwords = (plen + 63) // 64
    rows = np.zeros((k, nwords), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i in range(k):
        r = v
        for w in range(nwords):
            rows[i, w] = r & mask
            r >>= 64
        v = pb_mulx_mod(v, g)
    spec._parity_rows = rows
    return rows


def bch_encode(spec: BchSpec, message: np.ndarray) -> np.ndarray:
    """Systematic encode: message bits, then parity, then the extended bit."""
    message = np.asarray(message, dtype=np.uint8)
    if message.shape != (spec.k,):
        raise ValueError(f"message must hold {spec.k} bits")
    rows = _parity_rows(spec)
    plen = spec.n - spec.k
    sel = rows[message == 1]
    words = np.bitwise_xor.reduce(sel, axis=0) if len(sel) else np.zeros(rows.shape[1], dtype=np.uint64)
    out = np.zeros(spec.serialized_length, dtype=np.uint8)
    out[: spec.k] = message
    acc = 0
    for w in words[::-1]:
        acc = (acc << 64) | int(w)
    for d in range(plen):
        out[spec.k + d] = (acc >> d) & 1
    if spec.extended:
        out[spec.n] = int(out[: spec.n].sum()) & 1
    return out


# ---------------------------------------------------------------------------
# syndromes

def compute_syndromes(spec: BchSpec, word: np.ndarray) -> Syndromes:
    word = np.asarray(word, dtype=np.uint8)
    if word.shape != (spec.serialized_length,):
        raise ValueError(f"senseword must hold {spec.serialized_length} bits")
    positions = np.flatnonzero(word[: spec.n])
    even = [0] * spec.t
    if len(positions):
        acc = np.bitwise_xor.reduce(spec.syn_pow[:, positions], axis=1)
        even = [int(v) for v in acc]
    parity = int(word.sum()) & 1 if spec.extended else None
    return Syndromes(even, parity, spec.t)


def syndrome_at(spec: BchSpec, word: np.ndarray, i: int) -> int:
    """S_i = r(alpha^(i+1)) computed directly; used for code roots past 2t-1."""
    word = np.asarray(word, dtype=np.uint8)
    positions = np.flatnonzero(word[: spec.n])
    if not len(positions):
        return 0
    q1 = spec.ctx.q - 1
    vals = spec.ctx.exp_np[(spec.log_loc[positions] * (i + 1)) % q1]
    return int(np.bitwise_xor.reduce(vals))


def full_syndromes(spec: BchSpec, syn: Syndromes) -> list[int]:
    """Expand stored even syndromes into S_0..S_{2t-1} via S_{2i+1} = S_i^2."""
    ctx = spec.ctx
    out = [0] * (2 * spec.t)
    for s, v in enumerate(syn.even):
        out[2 * s] = v
    for j in range(1, 2 * spec.t, 2):
        out[j] = ctx.mul(out[(j - 1) // 2], out[(j - 1) // 2])
    return out


def update_syndromes(spec: BchSpec, syn: Syndromes, flips: tuple[int, ...]) -> Syndromes:
    """Fold bit flips (locator-domain positions) into stored syndromes in place."""
    if len(flips):
        pos = np.asarray(flips, dtype=np.int64)
        acc = np.bitwise_xor.reduce(spec.syn_pow[:, pos], axis=1)
        for s in range(spec.t):
            syn.even[s] ^= int(acc[s])
        if syn.parity is not None:
            syn.parity ^= len(flips) & 1
    return syn


def parity_gate(syn: Syndromes, target_count: int) -> bool:
    """False when the parity syndrome rules out a target correction weight."""
    if syn.parity is None:
        return True
    return (syn.parity + target_count) % 2 == 0


# ---------------------------------------------------------------------------
# key equation

def _poly_addmul(ctx: FieldContext, a: list[int], c: int, b: list[int]) -> list[int]:
    """a + c*b over GF(q)[x]."""
    if c == 0:
        return list(a)
    out = list(a) + [0] * max(0, len(b) - len(a))
    lc = ctx.log[c]
    exp, log = ctx.exp, ctx.log
    for i, bi in enumerate(b):
        if bi:
            out[i] ^= exp[lc + log[bi]]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _bm_step(spec: BchSpec, st: KeyEquationState, s_full: list[int], r: int) -> None:
    """One two-syndrome iteration of the key-equation recursion."""
    ctx = spec.ctx
    lam, aux = st.lam, st.aux
    delta = 0
    top = min(st.l_lam, len(lam) - 1)
    for i in range(top + 1):
        li = lam[i]
        si = s_full[r - i]
        if li and si:
            delta ^= ctx.exp[ctx.log[li] + ctx.log[si]]
    new_lam = _poly_addmul(ctx, lam, delta, aux)
    if delta != 0 and 2 * st.l_lam <= r:
        inv = ctx.inv(delta)
        st.aux = [0, 0] + [ctx.mul(inv, c) for c in lam]
        st.l_lam, st.l_aux = st.l_aux, st.l_lam + 2
    else:
        st.aux = [0, 0] + aux
        st.l_aux += 2
    st.lam = new_lam


def berlekamp(spec: BchSpec, syn: Syndromes) -> KeyEquationState:
    """Solve the key equation from all 2t syndromes.

    Returns the iteration-2t state: error locator, shifted auxiliary
    polynomial, and their formal lengths (which always sum to 2t+1).
    """
    s_full = full_syndromes(spec, syn)
    st = KeyEquationState(lam=[1], aux=[0, 1], l_lam=0, l_aux=1)
    for r in range(0, 2 * spec.t, 2):
        _bm_step(spec, st, s_full, r)
    return st


# ---------------------------------------------------------------------------
# evaluation and unique decoding

def eval_at_inverse_locators(spec: BchSpec, coeffs: list[int],
                             domain: np.ndarray | None = None) -> np.ndarray:
    """Evaluate a GF(q) polynomial at locator_j^-1 for j across the domain."""
    ctx = spec.ctx
    if domain is None:
        domain = spec._full_domain
    acc = np.zeros(len(domain), dtype=np.int64)
    q1 = ctx.q - 1
    depth = spec.inv_pow_log.shape[0]
    for d, c in enumerate(coeffs):
        if not c:
            continue
        if d < depth:
            row = spec.inv_pow_log[d][domain]
        else:
            row = (-d * spec.log_loc[domain]) % q1
        acc ^= ctx.exp_np[ctx.log_np[c] + row]
    return acc


def chien_search(spec: BchSpec, coeffs: list[int],
                 domain: np.ndarray | None = None) -> np.ndarray:
    """Positions j whose inverse locator is a root of the polynomial."""
    if domain is None:
        domain = spec._full_domain
    vals = eval_at_inverse_locators(spec, coeffs, domain)
    return domain[vals == 0]


def _pattern_matches(spec: BchSpec, syn: Syndromes, flips: tuple[int, ...]) -> bool:
    """True when flipping exactly these positions zeroes all 2t syndromes."""
    if not flips:
        return not syn.any_nonzero()
    pos = np.asarray(flips, dtype=np.int64)
    acc = np.bitwise_xor.reduce(spec.syn_pow[:, pos], axis=1)
    return all(int(acc[s]) == syn.even[s] for s in range(spec.t))


def _finish_unique(spec: BchSpec, st: KeyEquationState) -> Correction | None:
    roots = chien_search(spec, st.lam)
    if len(roots) == st.l_lam:
        return Correction(tuple(int(r) for r in roots))
    return None


def decode_minus1(spec: BchSpec, syn: Syndromes) -> Correction | None:
    """Radius-(t-1) decode: refuse the boundary length before any root search.

    The full 2t syndromes feed the recursion, so patterns of up to t-1 errors
    land strictly below l_lam = t and everything at or past the boundary is
    rejected without a Chien search.
    """
    st = berlekamp(spec, syn)
    if st.l_lam >= spec.t:
        return None
    return _finish_unique(spec, st)


def decode_unique(spec: BchSpec, syn: Syndromes) -> Correction | None:
    """Bounded-distance decode up to t errors."""
    st = berlekamp(spec, syn)
    if st.l_lam > spec.t:
        return None
    return _finish_unique(spec, st)


# ---------------------------------------------------------------------------
# list decoding at radius t+1

def _bucket_emit(values: np.ndarray, members: np.ndarray, need: int) -> list[np.ndarray]:
    """First `need` members of every value class that fills to `need`."""
    keep = values >= 0
    vals, inverse, counts = np.unique(values[keep], return_inverse=True, return_counts=True)
    out = []
    idx = members[keep]
    for ci in np.flatnonzero(counts >= need):
        out.append(idx[np.flatnonzero(inverse == ci)[:need]])
    return out


def decode_plus1_list(spec: BchSpec, syn: Syndromes,
                      domain: np.ndarray | None = None) -> list[Correction]:
    """All codewords at distance exactly t+1 (or the unique one within t).

    Failure paths: l_lam > t+1 means more than t+1 errors; l_lam < t with a
    failed root count cannot stem from a (t+1)-error pattern.  Otherwise
    positions sharing the ratio lam/aux at their inverse locator are grouped,
    and each group that fills to t+1 is a candidate flip set.  Aux roots are
    skipped: the auxiliary polynomial is not a valid locator.
    """
    t = spec.t
    st = berlekamp(spec, syn)
    if st.l_lam > t + 1:
        return []
    if st.l_lam <= t:
        unique = _finish_unique(spec, st)
        if unique is not None:
            return [unique]
        if st.l_lam < t:
            return []
    if domain is None:
        domain = spec._full_domain
    ctx = spec.ctx
    lam_v = eval_at_inverse_locators(spec, st.lam, domain)
    aux_v = eval_at_inverse_locators(spec, st.aux, domain)
    q = np.full(len(domain), -1, dtype=np.int64)
    ok = aux_v != 0
    both = ok & (lam_v != 0)
    q[ok & (lam_v == 0)] = 0
    q[both] = ctx.exp_np[(ctx.log_np[lam_v[both]] - ctx.log_np[aux_v[both]]) % (ctx.q - 1)]
    out = []
    for grp in _bucket_emit(q, domain, t + 1):
        flips = tuple(int(v) for v in grp)
        if _pattern_matches(spec, syn, flips):
            out.append(Correction(flips))
    assert len(out) <= spec.n // (t + 1)
    return out


# ---------------------------------------------------------------------------
# one-bit-flip state update and list decoding at radius t+2

def _poly_mul_x2_minus(ctx: FieldContext, coeffs: list[int], c: int) -> list[int]:
    """(x^2 - c) * poly."""
    out = [0, 0] + list(coeffs)
    for i, v in enumerate(coeffs):
        if v and c:
            out[i] ^= ctx.mul(c, v)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def chase_flip_state(spec: BchSpec, st: KeyEquationState, i: int,
                     lam_i: int | None = None, aux_i: int | None = None
                     ) -> tuple[KeyEquationState, int]:
    """Key-equation state for the senseword with bit i flipped, plus the case used.

    Case selection keys on the polynomial values at the flipped position and
    on the formal lengths; every update grows l_lam + l_aux by exactly 2.
    """
    ctx = spec.ctx
    inv_loc = ctx.inv(spec.locators[i])
    if lam_i is None:
        lam_i = ctx.eval_poly(st.lam, inv_loc)
    if aux_i is None:
        aux_i = ctx.eval_poly(st.aux, inv_loc)
    inv2 = ctx.mul(inv_loc, inv_loc)
    if lam_i == 0 and aux_i == 0:
        raise AssertionError("locator and auxiliary polynomial share a root")
    if lam_i == 0 or (aux_i != 0 and st.l_lam >= st.l_aux):
        case = 1
        lam = _poly_addmul(ctx, [ctx.mul(aux_i, c) for c in st.lam], lam_i, st.aux)
        aux = _poly_mul_x2_minus(ctx, st.aux, inv2)
        ll, la = st.l_lam, st.l_aux + 2
    elif aux_i == 0 or st.l_lam < st.l_aux - 1:
        case = 2
        lam = _poly_mul_x2_minus(ctx, st.lam, inv2)
        aux = _poly_addmul(ctx, [0, 0] + [ctx.mul(aux_i, c) for c in st.lam],
                           ctx.mul(inv2, lam_i), st.aux)
        ll, la = st.l_lam + 2, st.l_aux
    else:
        case = 3
        lam = _poly_addmul(ctx, [ctx.mul(aux_i, c) for c in st.lam], lam_i, st.aux)
        aux = _poly_addmul(ctx, [0, 0] + [ctx.mul(aux_i, c) for c in st.lam],
                           ctx.mul(inv2, lam_i), st.aux)
        ll, la = st.l_lam + 1, st.l_aux + 1
    return KeyEquationState(lam, aux, ll, la), case


def decode_plus2_list(spec: BchSpec, syn: Syndromes,
                      domain: np.ndarray | None = None) -> list[Correction]:
    """All codewords at distance exactly t+2 (delegating within t to unique).

    For each candidate first flip i, the remaining t+1 positions are grouped
    exactly as in the t+1 list stage but against the flipped state, using
    ratios formed directly from the unflipped polynomial values.  Inner
    positions stay above i: any candidate containing an earlier index was
    already emitted at that index's own turn.
    """
    t = spec.t
    st = berlekamp(spec, syn)
    if st.l_lam <= t:
        unique = _finish_unique(spec, st)
        if unique is not None:
            return [unique]
    if domain is None:
        domain = spec._full_domain
    ctx = spec.ctx
    q1 = ctx.q - 1
    lam_v = eval_at_inverse_locators(spec, st.lam, domain)
    aux_v = eval_at_inverse_locators(spec, st.aux, domain)
    inv2 = ctx.exp_np[(-2 * spec.log_loc[domain]) % q1]

    def vmul(a, b):
        out = np.zeros(len(a), dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = ctx.exp_np[ctx.log_np[a[nz]] + ctx.log_np[b[nz]]]
        return out

    found: dict[tuple[int, ...], Correction] = {}
    for pos in range(len(domain) - t - 1):
        i = int(domain[pos])
        li, bi = int(lam_v[pos]), int(aux_v[pos])
        c2i = int(inv2[pos])
        lam_j = lam_v[pos + 1:]
        aux_j = aux_v[pos + 1:]
        inv2_j = inv2[pos + 1:]
        if li == 0 or (bi != 0 and st.l_lam >= st.l_aux):
            num = vmul(np.full_like(lam_j, bi), lam_j) ^ vmul(np.full_like(aux_j, li), aux_j)
            den = vmul(inv2_j ^ c2i, aux_j)
        elif bi == 0 or st.l_lam < st.l_aux - 1:
            num = vmul(inv2_j ^ c2i, lam_j)
            den = vmul(inv2_j, vmul(np.full_like(lam_j, bi), lam_j)) ^ \
                vmul(np.full_like(aux_j, ctx.mul(c2i, li)), aux_j)
        else:
            num = vmul(np.full_like(lam_j, bi), lam_j) ^ vmul(np.full_like(aux_j, li), aux_j)
            den = vmul(inv2_j, vmul(np.full_like(lam_j, bi), lam_j)) ^ \
                vmul(np.full_like(aux_j, ctx.mul(c2i, li)), aux_j)
        qv = np.full(len(lam_j), -1, dtype=np.int64)
        ok = den != 0
        qv[ok & (num == 0)] = 0
        both = ok & (num != 0)
        qv[both] = ctx.exp_np[(ctx.log_np[num[both]] - ctx.log_np[den[both]]) % q1]
        for grp in _bucket_emit(qv, domain[pos + 1:], t + 1):
            flips = tuple(sorted([i] + [int(v) for v in grp]))
            if flips not in found and _pattern_matches(spec, syn, flips):
                found[flips] = Correction(flips)
    out = list(found.values())
    assert len(out) <= spec.n * (spec.n - 1) // ((t + 2) * (t + 1))
    return out


# ---------------------------------------------------------------------------
# syndrome-sweep list decoding past the designed distance

def decode_sweep_list(spec: BchSpec, st: KeyEquationState, syn: Syndromes,
                      known_high: list[int]) -> list[Correction]:
    """Extend the recursion beyond 2t by sweeping the first unknown syndrome.

    known_high carries S_{2t+2}, ..., S_{2t+2*tau}, which are computable from
    the senseword whenever alpha^(2t+3), ..., alpha^(2t+2*tau+1) are extra
    generator roots.  Each guess of S_{2t} continues the recursion tau+1 more
    iterations; a guess whose locator length matches its distinct root count
    (within the extended radius t+tau+1) yields a candidate codeword.
    """
    ctx = spec.ctx
    t, tau = spec.t, len(known_high)
    if tau >= t + 1:
        raise ValueError("sweep depth exceeds the squaring range of known syndromes")
    top = 2 * t + 2 * tau
    s_full = full_syndromes(spec, syn) + [0] * (2 * tau + 1)
    for i, v in enumerate(known_high):
        s_full[2 * t + 2 + 2 * i] = v
    max_len = t + tau + 1
    root_exps = list(range(1, 2 * t, 2)) + [2 * t + 2 * i + 3 for i in range(tau)]
    found: dict[tuple[int, ...], Correction] = {}
    for guess in range(ctx.q):
        s_full[2 * t] = guess
        for j in range(2 * t + 1, top + 1, 2):
            s_full[j] = ctx.mul(s_full[(j - 1) // 2], s_full[(j - 1) // 2])
        trial = st.copy()
        for r in range(2 * t, top + 1, 2):
            _bm_step(spec, trial, s_full, r)
        if not 0 < trial.l_lam <= max_len:
            continue
        roots = chien_search(spec, trial.lam)
        if len(roots) != trial.l_lam:
            continue
        flips = tuple(int(r) for r in roots)
        if flips in found:
            continue
        pos = np.asarray(flips, dtype=np.int64)
        good = True
        for s, exp_i in enumerate(root_exps):
            want = syn.even[s] if s < t else known_high[s - t]
            got = int(np.bitwise_xor.reduce(ctx.exp_np[(spec.log_loc[pos] * exp_i) % (ctx.q - 1)]))
            if got != want:
                good = False
                break
        if good:
            found[flips] = Correction(flips)
    return list(found.values())
