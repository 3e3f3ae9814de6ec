"""Two-part partitions of a frame, exhaustive optimal search, and bound checks.

A partition of the column indices 0..n-1 is encoded as an n-bit mask: bit j
set puts column j in the second part J2.  The exhaustive search keeps column
0 in J1, so each unordered partition is visited once.
"""

from __future__ import annotations

import enum
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .frames import Frame, frobenius, is_parseval, sym_two_norm

MAX_BRUTE_FORCE_N = 24
TIE_TOL = 1e-12
BOUND_SLACK = 1e-12


class Objective(str, enum.Enum):
    DEV2 = "dev2"
    DEVF = "devF"


@dataclass(frozen=True)
class Partition:
    mask: int
    n: int
    allow_empty: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("partition needs n >= 1")
        if not 0 <= self.mask < 1 << self.n:
            raise ValidationError(f"mask {self.mask} does not fit in {self.n} bits")
        if not self.allow_empty and (self.mask == 0 or self.mask == (1 << self.n) - 1):
            raise ValidationError("both parts must be non-empty (pass allow_empty=True to permit)")

    @classmethod
    def from_second_part(cls, n: int, j2, allow_empty: bool = False) -> "Partition":
        mask = 0
        for j in j2:
            if not 0 <= j < n:
                raise ValidationError(f"index {j} out of range 0..{n - 1}")
            mask |= 1 << j
        return cls(mask, n, allow_empty)

    @classmethod
    def halves(cls, n: int) -> "Partition":
        """First n/2 columns in J1, the rest in J2."""
        return cls.from_second_part(n, range(n // 2, n))

    @property
    def j2(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.mask >> j & 1)

    @property
    def j1(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if not self.mask >> j & 1)

    @property
    def part_sizes(self) -> tuple[int, int]:
        k = bin(self.mask).count("1")
        return self.n - k, k

    def complement(self) -> "Partition":
        return Partition(((1 << self.n) - 1) ^ self.mask, self.n, self.allow_empty)


@dataclass(frozen=True)
class PartReport:
    indices: tuple[int, ...]
    op_norm: float
    dev2: float
    devF: float


@dataclass(frozen=True)
class DiscrepancyReport:
    alpha: float
    mss_bound: float
    wds_bound: float
    parts: tuple[PartReport, PartReport]
    satisfies_mss: bool
    satisfies_wds: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "mss_bound": self.mss_bound,
            "wds_bound": self.wds_bound,
            "parts": [{"indices": [i + 1 for i in p.indices], "op_norm": p.op_norm,
                       "dev2": p.dev2, "devF": p.devF} for p in self.parts],
            "satisfies": {"mss": self.satisfies_mss, "wds": self.satisfies_wds},
        }


def evaluate_mss_bound(alpha: float) -> float:
    """(1/sqrt(2) + sqrt(alpha))^2, the per-part operator-norm guarantee."""
    if not alpha > 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    return (1 / math.sqrt(2) + math.sqrt(alpha)) ** 2


def evaluate_wds_bound(alpha: float) -> float:
    """5 sqrt(alpha), the per-part deviation guarantee."""
    if not alpha > 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    return 5 * math.sqrt(alpha)


def evaluate_partition(frame: Frame, partition: Partition) -> DiscrepancyReport:
    if partition.n != frame.n:
        raise ValidationError(f"partition covers {partition.n} indices but the frame has {frame.n} vectors")
    if not is_parseval(frame):
        warnings.warn("frame is not Parseval; deviations from I/2 are not discrepancies", stacklevel=2)
    half_i = np.eye(frame.m) / 2
    parts = []
    for idx in (partition.j1, partition.j2):
        vk = frame.V[:, list(idx)]
        sk = vk @ vk.T
        parts.append(PartReport(idx, sym_two_norm(sk), sym_two_norm(sk - half_i), frobenius(sk - half_i)))
    alpha = float(np.max(frame.column_norms) ** 2)
    mss, wds = evaluate_mss_bound(alpha), evaluate_wds_bound(alpha)
    return DiscrepancyReport(
        alpha=alpha, mss_bound=mss, wds_bound=wds, parts=tuple(parts),
        satisfies_mss=all(p.op_norm <= mss + BOUND_SLACK for p in parts),
        satisfies_wds=all(p.dev2 <= wds + BOUND_SLACK for p in parts),
    )


@dataclass(frozen=True)
class BruteForceResult:
    partition: Partition
    value: float
    inspected: int


def _chunk_values(outer, total, m, masks, n, objective):
    # outer: (n, m*m) rank-one terms; bits: which columns go to J2
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(float)
    s2 = (bits @ outer).reshape(-1, m, m)
    s1 = total - s2
    half_i = np.eye(m) / 2
    d1, d2 = s1 - half_i, s2 - half_i
    if objective is Objective.DEV2:
        v1 = np.max(np.abs(np.linalg.eigvalsh(d1)), axis=1)
        v2 = np.max(np.abs(np.linalg.eigvalsh(d2)), axis=1)
    else:
        v1 = np.sqrt(np.sum(d1 * d1, axis=(1, 2)))
        v2 = np.sqrt(np.sum(d2 * d2, axis=(1, 2)))
    return np.maximum(v1, v2)


def _search_range(args):
    outer, total, m, n, objective, lo, hi = args
    # column 0 stays in J1: masks are even numbers 2*t
    masks = np.arange(lo, hi, dtype=np.int64) << 1
    values = _chunk_values(outer, total, m, masks, n, objective)
    best = values.min()
    keep = values <= best + TIE_TOL
    return values[keep], masks[keep]


def brute_force_best_partition(frame: Frame, objective: Objective | str = Objective.DEV2,
                               threads: int | None = None, allow_empty: bool = False,
                               chunk: int | None = None) -> BruteForceResult:
    """Exhaustive search for the partition minimising the worst-part deviation.

    Enumerates all 2^(n-1) masks with column 0 in J1 (skipping the empty
    second part unless ``allow_empty``).  Ties within 1e-12 go to the
    smallest mask; the result does not depend on ``threads``.
    """
    objective = Objective(objective)
    n, m = frame.n, frame.m
    if n > MAX_BRUTE_FORCE_N:
        raise ValidationError(f"brute force is capped at n = {MAX_BRUTE_FORCE_N}, frame has n = {n}")
    if n < 2 and not allow_empty:
        raise ValidationError("need at least two vectors for a non-trivial partition")
    v = frame.V
    outer = np.einsum("in,jn->nij", v, v).reshape(n, m * m)
    total = v @ v.T
    lo = 0 if allow_empty else 1
    hi = 1 << (n - 1)
    if chunk is None:
        chunk = max(1, (1 << 20) // (m * m))
    ranges = [(outer, total, m, n, objective, a, min(a + chunk, hi)) for a in range(lo, hi, chunk)]
    threads = threads or os.cpu_count() or 1
    if threads == 1 or len(ranges) == 1:
        results = list(map(_search_range, ranges))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_search_range, ranges))
    values = np.concatenate([r[0] for r in results])
    masks = np.concatenate([r[1] for r in results])
    best = values.min()
    winner = int(masks[values <= best + TIE_TOL].min())
    value = float(values[masks == winner][0])
    return BruteForceResult(Partition(winner, n, allow_empty), value, hi - lo)
