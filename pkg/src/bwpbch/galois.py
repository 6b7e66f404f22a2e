"""GF(2^m) arithmetic and GF(2)[x] bit-mask polynomial helpers.

Field elements are m-bit ints in the polynomial basis with alpha = x (0b10).
Binary polynomials are ints whose bit i holds the x^i coefficient.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

M_MIN = 3
M_MAX = 16


def pb_degree(a: int) -> int:
    """Degree of a bit-mask polynomial (-1 for the zero polynomial)."""
    return a.bit_length() - 1


def pb_mul(a: int, b: int) -> int:
    """Carry-less product in GF(2)[x]."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def pb_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = pb_degree(b)
    q = 0
    da = pb_degree(a)
    while da >= db:
        q |= 1 << (da - db)
        a ^= b << (da - db)
        da = pb_degree(a)
    return q, a


def pb_mod(a: int, b: int) -> int:
    return pb_divmod(a, b)[1]


def pb_mulx_mod(a: int, b: int) -> int:
    """(a * x) mod b, assuming deg(a) < deg(b)."""
    a <<= 1
    if (a >> pb_degree(b)) & 1:
        a ^= b
    return a


def pb_pow_mod(a: int, e: int, b: int) -> int:
    out = pb_mod(1, b)
    a = pb_mod(a, b)
    while e:
        if e & 1:
            out = pb_mod(pb_mul(out, a), b)
        a = pb_mod(pb_mul(a, a), b)
        e >>= 1
    return out


def _is_primitive(poly: int, m: int) -> bool:
    # poly is primitive iff x has multiplicative order 2^m - 1 in GF(2)[x]/poly;
    # that order being reached also certifies irreducibility (unit count).
    if pb_degree(poly) != m or not poly & 1:
        return False
    q = 1 << m
    x = 1
    for i in range(1, q - 1):
        x <<= 1
        if x & q:
            x ^= poly
        if x == 1:
            return False
    x <<= 1
    if x & q:
        x ^= poly
    return x == 1


@lru_cache(maxsize=None)
def default_primitive_poly(m: int) -> int:
    """Lexicographically smallest primitive polynomial of degree m."""
    if not M_MIN <= m <= M_MAX:
        raise ValueError(f"m={m} outside supported range {M_MIN}..{M_MAX}")
    for cand in range((1 << m) + 1, 1 << (m + 1), 2):
        if _is_primitive(cand, m):
            return cand
    raise AssertionError(f"no primitive polynomial of degree {m}")


class FieldContext:
    """GF(2^m) with exp/log tables keyed to a primitive polynomial."""

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not M_MIN <= m <= M_MAX:
            raise ValueError(f"m={m} outside supported range {M_MIN}..{M_MAX}")
        if primitive_poly is None:
            primitive_poly = default_primitive_poly(m)
        if not _is_primitive(primitive_poly, m):
            raise ValueError(f"0x{primitive_poly:x} is not primitive of degree {m}")
        self.m = m
        self.poly = primitive_poly
        self.q = 1 << m
        order = self.q - 1
        exp = [0] * (2 * order)
        log = [-1] * self.q
        x = 1
        for i in range(order):
            exp[i] = x
            exp[i + order] = x
            log[x] = i
            x <<= 1
            if x & self.q:
                x ^= primitive_poly
        self.exp = exp
        self.log = log
        self.exp_np = np.asarray(exp, dtype=np.int64)
        self.log_np = np.asarray(log, dtype=np.int64)

    def __repr__(self):
        return f"FieldContext(m={self.m}, poly=0x{self.poly:x})"

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2^m)")
        return self.exp[self.q - 1 - self.log[a]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0 in GF(2^m)")
        if a == 0:
            return 0
        return self.exp[self.log[a] - self.log[b] + self.q - 1]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of 0 in GF(2^m)")
            return 0
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def alpha_pow(self, e: int) -> int:
        return self.exp[e % (self.q - 1)]

    def eval_poly(self, coeffs: list[int], x: int) -> int:
        """Evaluate a GF(2^m)[y] polynomial (ascending coefficients) at y = x."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.mul(acc, x) ^ c
        return acc


def build_field(m: int, primitive_poly: int | None = None) -> FieldContext:
    return FieldContext(m, primitive_poly)


def conjugacy_class(ctx: FieldContext, i: int) -> tuple[int, ...]:
    """Exponent orbit {i * 2^j mod (q-1)} of alpha^i under squaring."""
    order = ctx.q - 1
    i %= order
    cls = []
    j = i
    while True:
        cls.append(j)
        j = (j * 2) % order
        if j == i:
            break
    return tuple(sorted(cls))


def minimal_polynomial(ctx: FieldContext, i: int) -> int:
    """Minimal polynomial of alpha^i over GF(2), as a bit mask."""
    coeffs = [1]
    for j in conjugacy_class(ctx, i):
        root = ctx.alpha_pow(j)
        nxt = [0] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] ^= c
            nxt[d] ^= ctx.mul(c, root)
        coeffs = nxt
    mask = 0
    for d, c in enumerate(coeffs):
        if c not in (0, 1):
            raise AssertionError("conjugacy product is not binary")
        mask |= c << d
    return mask
