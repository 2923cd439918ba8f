"""Phase timing and ciphertext-size sweeps over input width and key size.

Every run executes the full client pipeline (keygen, encrypt, cloud round
trip, decrypt) and emits one :class:`BenchRecord` per phase plus a ``total``
record. Summands are drawn from a seed derived from ``(seed, param, run)`` so
two sweeps with the same seed see identical inputs.
"""
from __future__ import annotations

import csv
import logging
import statistics
import time
import tracemalloc
from contextlib import contextmanager
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import SCHEMES, HEError
from . import chen, gsw, qotp
from .client import connect

log = logging.getLogger(__name__)

PHASES = ("keygen", "encrypt", "cloud", "decrypt", "total")
CSV_HEADER = "scheme,sweep,param,phase,run,wall_ns,ct_bytes,peak_alloc_bytes"

DEFAULT_WIDTHS = tuple(range(1, 33))
DEFAULT_KEY_SIZES = (3, 4, 5, 6, 7, 8, 9, 10, 11, 12)
KEY_SWEEP_SUMMANDS = (1, 3)
GSW_INPUT_K = 8
# GSW decrypt scans every candidate message in Z_q, so its cost grows with q ~ 2**k
FULL_SPACE = "q"


@dataclass(frozen=True)
class BenchRecord:
    scheme: str
    sweep: str
    param: int
    phase: str
    run: int
    wall_ns: int
    ct_bytes: int
    peak_alloc_bytes: int = -1
    error: Optional[str] = None  # failed runs carry -1 timings and are kept

    @property
    def ok(self) -> bool:
        return self.error is None


class _Phases:
    def __init__(self, trace_memory: bool):
        self.wall: Dict[str, int] = {}
        self.peak: Dict[str, int] = {}
        self.trace = trace_memory

    @contextmanager
    def __call__(self, name: str):
        if self.trace:
            tracemalloc.reset_peak()
            base = tracemalloc.get_traced_memory()[0]
        start = time.perf_counter_ns()
        yield
        self.wall[name] = time.perf_counter_ns() - start
        if self.trace:
            self.peak[name] = max(0, tracemalloc.get_traced_memory()[1] - base)


def run_pipeline(scheme: str, x1: int, x2: int, k: Optional[int], cloud,
                 rng: np.random.Generator, phase: _Phases, gsw_bound=FULL_SPACE):
    """One timed addition. Returns ``(sum, ciphertext bytes of one operand)``.

    ``gsw_bound`` is the GSW message bound: an int, ``None`` for
    ``min(16, q)``, or ``"q"`` for the whole of Z_q.
    """
    if scheme == "chen":
        with phase("keygen"):
            keys = chen.keygen(chen.SEGMENT_BITS, rng)
        with phase("encrypt"):
            plain_carry = chen.carry(x1, x2)
            c1, c2 = chen.encrypt_pair(x1, x2, keys)
        with phase("cloud"):
            result = cloud.process("chen", chen.to_payload(c1, c2))
        with phase("decrypt"):
            total = chen.decrypt(chen.from_result(result), keys) + plain_carry
        return total, c1.nbytes
    if scheme == "gsw":
        with phase("keygen"):
            params, sk, pk = gsw.keygen(k or GSW_INPUT_K, rng, bound=None)
            bound = params.q if gsw_bound == FULL_SPACE else gsw_bound
            if bound is not None:
                params = replace(params, bound=bound)
        if x1 + x2 >= params.bound:
            raise gsw.MessageRangeError(f"{x1} + {x2} exceeds the message space [0, {params.bound})")
        with phase("encrypt"):
            c1 = gsw.encrypt(pk, params, x1, rng)
            c2 = gsw.encrypt(pk, params, x2, rng)
        with phase("cloud"):
            result = cloud.process("gsw", gsw.to_payload(c1, c2))
        with phase("decrypt"):
            total = gsw.decrypt(sk, params, gsw.from_result(result, params.q))
        return total, c1.nbytes
    if scheme == "qotp":
        w = qotp.width_for(x1, x2)
        with phase("keygen"):
            keys = qotp.keygen(w, rng)
        with phase("encrypt"):
            plain_carry = qotp.bit_carry(x1, x2, w)
            pair = qotp.encrypt(x1, x2, keys)
        with phase("cloud"):
            result = cloud.process("qotp", qotp.to_payload(pair))
        with phase("decrypt"):
            total = qotp.decrypt(result.bits, keys, plain_carry, result.phase)
        return total, pair.nbytes
    raise ValueError(f"unknown scheme {scheme!r}")


def summands(width: int, seed: int, run: int):
    """Two integers of exactly ``width`` bits (top bit set), reproducible."""
    gen = np.random.default_rng([seed, width, run])
    lo = 1 << (width - 1)
    return tuple(lo + int(gen.integers(0, lo)) if width > 1 else 1 for _ in range(2))


def _measure(scheme, sweep, param, run, x1, x2, k, cloud, seed, trace_memory, gsw_bound):
    def once(trace):
        phase = _Phases(trace)
        rng = np.random.default_rng([seed, param, run, 1])
        start = time.perf_counter_ns()
        got, ct_bytes = run_pipeline(scheme, x1, x2, k, cloud, rng, phase, gsw_bound)
        phase.wall["total"] = time.perf_counter_ns() - start
        if got != x1 + x2:
            raise HEError(f"{scheme} returned {got} for {x1} + {x2}")
        return phase, ct_bytes

    try:
        timed, ct_bytes = once(False)
        peaks = {}
        if trace_memory:
            tracemalloc.start()
            try:
                traced, _ = once(True)
                peaks = dict(traced.peak, total=max(traced.peak.values()))
            finally:
                tracemalloc.stop()
    except (HEError, ValueError) as exc:
        log.warning("%s %s sweep param=%s run=%s failed: %s", scheme, sweep, param, run, exc)
        return [BenchRecord(scheme, sweep, param, "total", run, -1, -1, -1, error=str(exc))]
    return [
        BenchRecord(scheme, sweep, param, name, run, timed.wall[name], ct_bytes, peaks.get(name, -1))
        for name in PHASES
    ]


def sweep_input_sizes(scheme: str, widths: Sequence[int] = DEFAULT_WIDTHS, runs: int = 5,
                      endpoint: str = "local", seed: int = 0, trace_memory: bool = True,
                      cloud=None, gsw_bound=FULL_SPACE) -> List[BenchRecord]:
    """Runtime/size versus summand bit-width.

    GSW runs at k=8, so widths whose sums can reach the message bound come
    back as failed records.
    """
    _check(scheme, widths, runs, 1, 32)
    cloud = cloud or connect(endpoint)
    _warm_up(scheme, cloud, gsw_bound)
    records = []
    for w in widths:
        for run in range(runs):
            x1, x2 = summands(w, seed, run)
            records += _measure(scheme, "input", w, run, x1, x2, None, cloud, seed, trace_memory, gsw_bound)
    return records


def sweep_key_sizes(scheme: str, ks: Sequence[int] = DEFAULT_KEY_SIZES, runs: int = 5,
                    endpoint: str = "local", seed: int = 0, trace_memory: bool = True,
                    x: Sequence[int] = KEY_SWEEP_SUMMANDS, cloud=None,
                    gsw_bound=FULL_SPACE) -> List[BenchRecord]:
    """Runtime/size versus key size k, with fixed summands.

    Only GSW has a key-size parameter; chen (Hamming(7,4)) and qotp record k
    and otherwise ignore it.
    """
    _check(scheme, ks, runs, 3, 12 if scheme == "gsw" else 64)
    cloud = cloud or connect(endpoint)
    x1, x2 = x
    _warm_up(scheme, cloud, gsw_bound)
    records = []
    for k in ks:
        for run in range(runs):
            records += _measure(scheme, "key", k, run, x1, x2, k, cloud, seed, trace_memory, gsw_bound)
    return records


def _warm_up(scheme, cloud, gsw_bound):
    # first-call costs (imports, allocator growth) would skew run 0
    try:
        run_pipeline(scheme, 1, 1, 4, cloud, np.random.default_rng(0), _Phases(False), gsw_bound)
    except HEError:
        pass


def _check(scheme, values, runs, lo, hi):
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if not values:
        raise ValueError("sweep needs at least one parameter value")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    bad = [v for v in values if not lo <= v <= hi]
    if bad:
        raise ValueError(f"{scheme} sweep values must lie in [{lo}, {hi}], got {bad}")


def _sort_key(r: BenchRecord):
    return (r.scheme, r.param, r.run, PHASES.index(r.phase))


def write_csv(records: Iterable[BenchRecord], path) -> int:
    records = sorted(records, key=_sort_key)
    if not records:
        raise ValueError("no records to write")
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for r in records:
            writer.writerow([r.scheme, r.sweep, r.param, r.phase, r.run, r.wall_ns, r.ct_bytes, r.peak_alloc_bytes])
    return len(records)


def read_csv(path) -> List[BenchRecord]:
    with open(path, newline="") as fh:
        return [
            BenchRecord(row["scheme"], row["sweep"], int(row["param"]), row["phase"], int(row["run"]),
                        int(row["wall_ns"]), int(row["ct_bytes"]), int(row["peak_alloc_bytes"]))
            for row in csv.DictReader(fh)
        ]


def medians(records: Iterable[BenchRecord], phase: str = "total") -> Dict[int, float]:
    """Median wall time per parameter value for one phase (failed runs skipped)."""
    by_param: Dict[int, list] = {}
    for r in records:
        if r.ok and r.phase == phase:
            by_param.setdefault(r.param, []).append(r.wall_ns)
    return {p: statistics.median(v) for p, v in sorted(by_param.items())}


def inversions(series: Sequence[float]) -> int:
    """Adjacent decreases in a series that should be non-decreasing."""
    return sum(1 for a, b in zip(series, series[1:]) if b < a)


def phase_shares(records: Iterable[BenchRecord], param: int) -> Dict[str, float]:
    """Each phase's fraction of the summed phase medians at ``param``."""
    records = [r for r in records if r.param == param]
    meds = {name: medians(records, name).get(param, 0.0) for name in PHASES[:-1]}
    whole = sum(meds.values()) or 1.0
    return {name: value / whole for name, value in meds.items()}
