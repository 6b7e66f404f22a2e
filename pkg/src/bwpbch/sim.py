"""Frame-error-rate measurement over a binary symmetric channel.

A sweep walks a grid of channel points (given as raw bit error rates or as
SNR values, converted through the hard-decision BPSK mapping) and, per point
and decoder, runs frames until enough failures accumulate or a frame cap is
hit.  Every frame draws its randomness from a counter-based generator keyed
by (seed, point, frame), so results do not depend on execution order and any
subset of frame indices can be computed independently; the decoder is left
out of the key on purpose, which gives all decoders the same message and
noise realization at a given frame and makes decoder comparisons paired.

A frame counts as a failure when the decoder reports one, and also when it
reports success on the wrong message; the simulator has the transmitted
ground truth, so such miscorrections are tallied separately as well.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .codec import DECODER_MODES, BwpCodec
from .layout import plan_layout

FER_FLOOR = 1e-5

CSV_HEADER = "label,K,R,b,f,decoder,rber,snr_db,frames,failures,fer,mean_iters,miscorrections,seed"


def bsc_corrupt(frame: np.ndarray, rber: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit of frame independently with probability rber."""
    if not 0.0 <= rber <= 0.5:
        raise ValueError(f"rber {rber} outside [0, 0.5]")
    noisy = frame.copy()
    if rber > 0.0:
        noisy ^= (rng.random(frame.shape[0]) < rber).astype(np.uint8)
    return noisy


def q_function(x: float) -> float:
    """Gaussian tail probability P(Z > x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def snr_to_rber(snr_db: float, code_rate: float) -> float:
    """Hard-decision BPSK over AWGN at SNR = 2*Eb/N0 (dB)."""
    if not 0.0 < code_rate <= 1.0:
        raise ValueError(f"code rate {code_rate} outside (0, 1]")
    return q_function(math.sqrt(code_rate * 10.0 ** (snr_db / 10.0)))


def rber_to_snr(rber: float, code_rate: float) -> float:
    """Inverse of snr_to_rber; rber 0 and 0.5 map to the infinities."""
    if not 0.0 < code_rate <= 1.0:
        raise ValueError(f"code rate {code_rate} outside (0, 1]")
    if not 0.0 <= rber <= 0.5:
        raise ValueError(f"rber {rber} outside [0, 0.5]")
    if rber == 0.0:
        return math.inf
    x = -NormalDist().inv_cdf(rber)
    if x == 0.0:
        return -math.inf
    return 10.0 * math.log10(x * x / code_rate)


@dataclass
class FerRecord:
    """One measured grid point for one decoder."""

    label: str
    K: int
    R: int
    b: int
    f: int
    decoder: str
    rber: float
    snr_db: float
    frames_run: int
    frame_failures: int
    mean_iterations: float
    miscorrection_count: int
    seed: int
    wall_time: float

    @property
    def fer(self) -> float:
        return self.frame_failures / self.frames_run

    def csv_row(self) -> str:
        cells = [self.label, self.K, self.R, self.b, self.f, self.decoder,
                 self.rber, self.snr_db, self.frames_run, self.frame_failures,
                 self.fer, self.mean_iterations, self.miscorrection_count,
                 self.seed]
        return ",".join(repr(c) if isinstance(c, float) else str(c) for c in cells)


@dataclass
class SweepPlan:
    """Grid, stop rule, and seed for one measurement run.

    Exactly one of rber_list / snr_list gives the grid.  The frame cap
    defaults to the count at which the smallest resolvable FER is the
    desk-scale floor; caps aiming below the floor need allow_deep.
    """

    K: int
    R: int
    b: int
    f: int
    decoders: tuple[str, ...] = ("plus2",)
    rber_list: tuple[float, ...] = ()
    snr_list: tuple[float, ...] = ()
    target_failures: int = 100
    frame_cap: int = 0
    max_iters: int = 32
    seed: int = 0
    label: str = ""
    allow_deep: bool = False
    layout_options: dict = field(default_factory=dict)

    def __post_init__(self):
        if bool(self.rber_list) == bool(self.snr_list):
            raise ValueError("provide exactly one of rber_list / snr_list")
        for dec in self.decoders:
            if dec not in DECODER_MODES:
                raise ValueError(f"unknown decoder {dec!r}")
        if self.target_failures < 1:
            raise ValueError("target_failures must be positive")
        if not self.frame_cap:
            self.frame_cap = int(self.target_failures / FER_FLOOR)
        if self.frame_cap < 1:
            raise ValueError("frame_cap must be positive")
        if self.target_failures / self.frame_cap < FER_FLOOR and not self.allow_deep:
            raise ValueError(
                f"cap {self.frame_cap} aims below FER {FER_FLOOR:g}; "
                "pass allow_deep to confirm the runtime")
        if not self.label:
            self.label = f"bwp-{self.K}-{self.R}-{self.b}-{self.f}"
        if any(c in self.label for c in ",\n\r"):
            raise ValueError("label must not contain commas or line breaks")


def _frame_rng(seed: int, point: int, frame: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, point, frame))))


def run_fer(plan: SweepPlan, codec: BwpCodec | None = None, on_record=None) -> list[FerRecord]:
    """Measure FER at every (grid point, decoder) pair of the plan.

    Records appear in grid-major order; on_record is called as each one
    completes.  An interrupt flushes the point in progress as a partial
    record instead of discarding it.
    """
    if codec is None:
        codec = BwpCodec(plan_layout(plan.K, plan.R, plan.b, plan.f, **plan.layout_options))
    rate = codec.plan.K / codec.plan.N
    if plan.rber_list:
        points = [(float(r), rber_to_snr(float(r), rate)) for r in plan.rber_list]
    else:
        points = [(snr_to_rber(float(s), rate), float(s)) for s in plan.snr_list]

    records: list[FerRecord] = []
    for point_idx, (rber, snr_db) in enumerate(points):
        for decoder in plan.decoders:
            start = time.perf_counter()
            frames = failures = miscorrections = 0
            iter_sum = 0.0
            try:
                while failures < plan.target_failures and frames < plan.frame_cap:
                    rng = _frame_rng(plan.seed, point_idx, frames)
                    msg = rng.integers(0, 2, codec.plan.K, dtype=np.uint8)
                    sense = bsc_corrupt(codec.encode(msg), rber, rng)
                    res = codec.decode(sense, decoder=decoder, max_iters=plan.max_iters)
                    frames += 1
                    iter_sum += res.iterations
                    if not res.ok:
                        failures += 1
                    elif not np.array_equal(res.message, msg):
                        failures += 1
                        miscorrections += 1
            except KeyboardInterrupt:
                if frames:
                    records.append(_finish(plan, decoder, rber, snr_db, frames,
                                            failures, miscorrections, iter_sum, start))
                    if on_record:
                        on_record(records[-1])
                return records
            records.append(_finish(plan, decoder, rber, snr_db, frames,
                                    failures, miscorrections, iter_sum, start))
            if on_record:
                on_record(records[-1])
    return records


def _finish(plan, decoder, rber, snr_db, frames, failures, misc, iter_sum, start):
    return FerRecord(
        label=plan.label, K=plan.K, R=plan.R, b=plan.b, f=plan.f,
        decoder=decoder, rber=rber, snr_db=snr_db, frames_run=frames,
        frame_failures=failures, mean_iterations=iter_sum / frames,
        miscorrection_count=misc, seed=plan.seed,
        wall_time=time.perf_counter() - start)


def write_csv(records, fh) -> None:
    """Write the record table; floats use shortest round-trip decimals."""
    fh.write(CSV_HEADER + "\n")
    for rec in records:
        fh.write(rec.csv_row() + "\n")
