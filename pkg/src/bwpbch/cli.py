"""Command-line front end: plan, encode, decode, simulate, selftest.

Messages and frames travel as packed binary files, least significant bit
first within each byte (bit i lives at byte i//8, position i%8).  Machine
output is CSV on stdout; human tables also go to stdout, and progress or
diagnostics to stderr, so pipelines stay clean.  Exit codes: 0 success,
1 decode failure, 2 invalid parameters or files.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .codec import DECODER_MODES, BwpCodec
from .layout import describe_layout, plan_layout
from .sim import CSV_HEADER, SweepPlan, run_fer

_CONFIG_KEYS = {"K", "R", "b", "f", "folding", "rs_width", "label"}


def _parse_config(path: str) -> dict[str, str]:
    """Flat key=value file; # starts a comment."""
    opts = {}
    for ln, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected key=value, got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_KEYS and not key.startswith("prim_poly_"):
            raise ValueError(f"{path}:{ln}: unknown key {key!r}")
        opts[key] = val
    return opts


def _gather_code_params(args):
    """Merge config file and flags (flags win) into plan_layout arguments."""
    cfg = _parse_config(args.config) if args.config else {}

    def pick(name):
        val = getattr(args, name)
        if val is None and name in cfg:
            val = int(cfg[name], 0)
        if val is None:
            raise ValueError(f"missing parameter {name}: pass --{name} or a config file")
        return val

    params = tuple(pick(name) for name in ("K", "R", "b", "f"))
    options = {}
    if "folding" in cfg:
        options["folding"] = cfg["folding"].lower() in ("1", "true", "yes")
    if "rs_width" in cfg:
        options["rs_width"] = int(cfg["rs_width"], 0)
    polys = {}
    for key, val in cfg.items():
        if key.startswith("prim_poly_"):
            polys[int(key[len("prim_poly_"):])] = int(val, 0)
    if polys:
        options["prim_polys"] = polys
    return params, options, cfg.get("label", "")


def _read_bits(path: str, nbits: int) -> np.ndarray:
    data = Path(path).read_bytes()
    need = (nbits + 7) // 8
    if len(data) != need:
        raise ValueError(f"{path}: expected {need} bytes ({nbits} bits), got {len(data)}")
    if nbits % 8 and data[-1] >> (nbits % 8):
        raise ValueError(f"{path}: padding bits beyond bit {nbits} must be zero")
    return np.unpackbits(np.frombuffer(data, np.uint8), count=nbits, bitorder="little")


def _write_bits(path: str, bits: np.ndarray) -> None:
    Path(path).write_bytes(np.packbits(bits, bitorder="little").tobytes())


def _build_codec(args) -> BwpCodec:
    (K, R, b, f), options, _ = _gather_code_params(args)
    return BwpCodec(plan_layout(K, R, b, f, **options))


def cmd_plan(args) -> int:
    (K, R, b, f), options, _ = _gather_code_params(args)
    print(describe_layout(plan_layout(K, R, b, f, **options)))
    return 0


def cmd_encode(args) -> int:
    codec = _build_codec(args)
    message = _read_bits(args.input, codec.plan.K)
    _write_bits(args.out, codec.encode(message))
    print(f"encoded {codec.plan.K} bits into a {codec.plan.N} bit frame", file=sys.stderr)
    return 0


def cmd_decode(args) -> int:
    codec = _build_codec(args)
    frame = _read_bits(args.input, codec.plan.N)
    res = codec.decode(frame, decoder=args.decoder, max_iters=args.max_iters)
    print(f"outcome {'ok' if res.ok else 'failure'}")
    print(f"iterations {res.iterations}")
    for key, val in res.stats.items():
        print(f"{key} {val}")
    if args.out:
        _write_bits(args.out, res.message)
    return 0 if res.ok else 1


def cmd_simulate(args) -> int:
    (K, R, b, f), options, label = _gather_code_params(args)
    plan = SweepPlan(
        K, R, b, f,
        decoders=tuple(args.decoder) if args.decoder else ("plus2",),
        rber_list=tuple(float(x) for x in args.rber_list.split(",")) if args.rber_list else (),
        snr_list=tuple(float(x) for x in args.snr_list.split(",")) if args.snr_list else (),
        target_failures=args.target_failures,
        frame_cap=args.frame_cap,
        max_iters=args.max_iters,
        seed=args.seed,
        label=args.label or label,
        allow_deep=args.allow_deep_fer,
        layout_options=options)
    out = open(args.out, "w") if args.out else sys.stdout
    start = time.perf_counter()
    try:
        out.write(CSV_HEADER + "\n")
        out.flush()

        def emit(rec):
            out.write(rec.csv_row() + "\n")
            out.flush()
            print(f"[{rec.decoder} rber={rec.rber:g}] frames={rec.frames_run} "
                  f"failures={rec.frame_failures} fer={rec.fer:.3g} "
                  f"({rec.wall_time:.1f}s)", file=sys.stderr)

        records = run_fer(plan, on_record=emit)
    finally:
        if args.out:
            out.close()
    frames = sum(r.frames_run for r in records)
    print(f"{len(records)} records, {frames} frames, "
          f"{time.perf_counter() - start:.1f}s total", file=sys.stderr)
    return 0


def _selftest_checks():
    import random

    from .bch import (bch_encode, build_bch_spec, compute_syndromes,
                      decode_plus1_list, decode_unique)
    from .galois import build_field
    from .rs import RsSpec, rs_encode, rs_syndromes, erasure_decode
    from .sim import write_csv
    import io

    def field_arithmetic():
        ctx = build_field(8)
        rng = random.Random(1)
        for _ in range(200):
            a, c = rng.randrange(1, 256), rng.randrange(1, 256)
            assert ctx.mul(a, ctx.inv(a)) == 1
            assert ctx.mul(a, c) == ctx.mul(c, a)
            assert ctx.mul(a, a ^ c) == ctx.mul(a, a) ^ ctx.mul(a, c)

    def word_roundtrip():
        spec = build_bch_spec(build_field(6), 63, 3, extended=True)
        rng = random.Random(2)
        for _ in range(30):
            msg = np.array([rng.randrange(2) for _ in range(spec.k)], dtype=np.uint8)
            word = bch_encode(spec, msg)
            flips = tuple(rng.sample(range(spec.n), rng.randrange(1, 4)))
            for pos in flips:
                word[pos] ^= 1
            corr = decode_unique(spec, compute_syndromes(spec, word))
            assert corr is not None and sorted(corr.flipped_positions) == sorted(flips)

    def list_rescue():
        spec = build_bch_spec(build_field(6), 63, 3, extended=True)
        rng = random.Random(3)
        for _ in range(10):
            word = bch_encode(spec, np.zeros(spec.k, dtype=np.uint8))
            flips = tuple(sorted(rng.sample(range(spec.n), 4)))
            for pos in flips:
                word[pos] ^= 1
            got = [tuple(sorted(c.flipped_positions))
                   for c in decode_plus1_list(spec, compute_syndromes(spec, word))]
            assert got, "no candidate at radius t+1"
            if len(got) == 1 and len(got[0]) <= spec.t:
                continue  # a codeword within t exists and wins outright
            assert flips in got

    def erasure_repair():
        spec = RsSpec(8, 21, 4)
        rng = random.Random(4)
        for _ in range(20):
            data = [rng.randrange(256) for _ in range(spec.data_count)]
            cw = data + rs_encode(spec, data)
            erased = rng.sample(range(spec.n_rs), rng.randrange(1, 5))
            held = {p: cw[p] for p in erased}
            for p in erased:
                cw[p] = 0
            got = erasure_decode(spec, rs_syndromes(spec, cw), erased)
            assert got == held

    def construction_goldens():
        plan = plan_layout(32768, 3640, 32, 4)
        assert (plan.eta, plan.p, plan.m, plan.t_base, plan.theta, plan.N) == \
            (1028, 32, 11, 4, 53, 36404)
        plan = plan_layout(32768, 3640, 15, 4)
        assert (plan.eta, plan.p, plan.m, plan.t_base, plan.theta, plan.N) == \
            (2189, 47, 10, 3, 66, 36402)

    def structured_rescue():
        codec = BwpCodec(plan_layout(601, 500, 8, 4))
        rng = np.random.default_rng(5)
        msg = rng.integers(0, 2, codec.plan.K, dtype=np.uint8)
        frame = codec.encode(msg)
        assert codec.decode(frame).ok
        noisy = frame.copy()
        for g in (0, 18, 1, 19):
            idx = codec.block_idx[g]
            real = idx[idx < codec.plan.N]
            noisy[rng.choice(real, size=6, replace=False)] ^= 1
        res = codec.decode(noisy, decoder="unique")
        assert res.ok and np.array_equal(res.message, msg)
        noisy = frame.copy()
        for g in (9, 1):
            idx = codec.block_idx[g]
            real = idx[idx < codec.plan.N]
            noisy[rng.choice(real, size=6, replace=False)] ^= 1
        res = codec.decode(noisy, decoder="plus2")
        assert res.ok and np.array_equal(res.message, msg)

    def sweep_determinism():
        plan = SweepPlan(601, 500, 8, 4, decoders=("plus2",), rber_list=(0.01,),
                         target_failures=2, frame_cap=10, seed=6)
        a, b = io.StringIO(), io.StringIO()
        write_csv(run_fer(plan), a)
        write_csv(run_fer(plan), b)
        assert a.getvalue() == b.getvalue() and len(a.getvalue().splitlines()) == 2

    return [
        ("field arithmetic", field_arithmetic),
        ("word roundtrip", word_roundtrip),
        ("list rescue", list_rescue),
        ("erasure repair", erasure_repair),
        ("construction goldens", construction_goldens),
        ("structured rescue", structured_rescue),
        ("sweep determinism", sweep_determinism),
    ]


def cmd_selftest(args) -> int:
    failed = 0
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as exc:
            failed += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"ok   {name}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bwpbch",
        description="Block-wise product eBCH codec with an inner RS erasure code")
    sub = parser.add_subparsers(dest="command", required=True)

    code = argparse.ArgumentParser(add_help=False)
    code.add_argument("--K", type=int, help="payload bits")
    code.add_argument("--R", type=int, help="redundancy bits")
    code.add_argument("--b", type=int, help="block size in bits")
    code.add_argument("--f", type=int, help="erasure parity blocks")
    code.add_argument("--config", help="key=value config file; flags override it")

    sp = sub.add_parser("plan", parents=[code], help="print the derived construction")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("encode", parents=[code], help="message file to frame file")
    sp.add_argument("input", help="packed message, exactly K bits")
    sp.add_argument("--out", required=True, help="packed frame output path")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", parents=[code], help="frame file to message file")
    sp.add_argument("input", help="packed frame, exactly N bits")
    sp.add_argument("--out", help="packed decoded message output path")
    sp.add_argument("--decoder", choices=DECODER_MODES, default="plus2")
    sp.add_argument("--max-iters", type=int, default=32)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("simulate", parents=[code], help="measure FER over a channel grid")
    sp.add_argument("--decoder", choices=DECODER_MODES, action="append",
                    help="repeatable; default plus2")
    sp.add_argument("--rber-list", help="comma-separated raw bit error rates")
    sp.add_argument("--snr-list", help="comma-separated SNR points in dB")
    sp.add_argument("--max-iters", type=int, default=32)
    sp.add_argument("--target-failures", type=int, default=100)
    sp.add_argument("--frame-cap", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--label", default="")
    sp.add_argument("--allow-deep-fer", action="store_true",
                    help="permit plans aiming below the default FER floor")
    sp.add_argument("--out", help="CSV path; default stdout")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("selftest", help="run quick built-in property checks")
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
