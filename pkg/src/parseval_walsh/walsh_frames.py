"""Walsh frames and their optimal two-part splits.

A plain Walsh frame of dimension m <= n = 2^r is the first m rows of
Y_r / sqrt(n).  For m <= n/2 the column halves are identical tight frames
with constant 1/2.  For n/2 < m <= n the reduced construction

    Y = [[y_1 .. y_{n/2},  y_k(1) ..  y_k(s)],
         [y_1 .. y_{n/2}, -y_k(1) .. -y_k(s)]]      (columns of Y_{r-1})

with V = Y^T / sqrt(n) splits into halves whose errors are
+-[[0, D/2], [D^T/2, 0]], D the selection matrix; the 2-norm error 1/2
cannot be improved.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NumericalCheckError, ValidationError
from .frames import Frame, frobenius, sym_two_norm
from .walsh import build_walsh_matrix

EIGEN_BUCKETS = (0.0, 0.5, 1.0)
BUCKET_RADIUS = 1e-6


class FrameKind(str, enum.Enum):
    PLAIN = "plain"
    REDUCED = "reduced"


@dataclass(frozen=True, eq=False)
class WalshFrame:
    frame: Frame
    r: int
    kind: FrameKind
    integer_matrix: np.ndarray  # V * sqrt(n), entries exactly +-1
    selected: tuple[int, ...] = ()  # 1-based k(1) < ... < k(s), reduced only

    @property
    def m(self) -> int:
        return self.frame.m

    @property
    def n(self) -> int:
        return 1 << self.r

    @property
    def s(self) -> int:
        return len(self.selected)

    def metadata(self) -> dict:
        return {"kind": self.kind.value, "order": self.r, "selected": list(self.selected)}


@dataclass(frozen=True, eq=False)
class SplitResult:
    Va: np.ndarray
    Vb: np.ndarray
    Ea: np.ndarray
    Eb: np.ndarray
    delta: Optional[np.ndarray]
    two_norm_discrepancy: float
    frobenius_discrepancy: float
    eigen_multiplicities: Optional[dict]

    @property
    def delta_cols(self) -> list[int]:
        if self.delta is None:
            return []
        return [int(i) + 1 for i in np.argmax(self.delta, axis=0)]

    def to_dict(self) -> dict:
        eigen = None
        if self.eigen_multiplicities is not None:
            eigen = {_bucket_key(k): v for k, v in self.eigen_multiplicities.items()}
        return {"two_norm": self.two_norm_discrepancy, "frobenius": self.frobenius_discrepancy,
                "eigen": eigen, "delta_cols": self.delta_cols}


def _bucket_key(b: float) -> str:
    return "0.5" if b == 0.5 else str(int(b))


def _from_integer(vint: np.ndarray, r: int, kind: FrameKind, selected=()) -> WalshFrame:
    vint = np.array(vint, dtype=np.int8)
    vint.setflags(write=False)
    return WalshFrame(Frame(vint / math.sqrt(1 << r)), r, kind, vint, tuple(selected))


def build_walsh_frame(m: int, r: int) -> WalshFrame:
    n = 1 << r
    if not 1 <= m <= n:
        raise ValidationError(f"dimension m must satisfy 1 <= m <= n = {n}, got {m}")
    y = build_walsh_matrix(r).entries
    return _from_integer(y[:m, :], r, FrameKind.PLAIN)


def build_reduced_walsh_frame(r: int, selected: Sequence[int]) -> WalshFrame:
    if r < 1:
        raise ValidationError(f"reduced Walsh frames need r >= 1, got {r}")
    half = 1 << (r - 1)
    selected = tuple(int(k) for k in selected)
    if not selected:
        raise ValidationError("select at least one column (s >= 1)")
    if any(b <= a for a, b in zip(selected, selected[1:])):
        raise ValidationError(f"selected columns must be strictly increasing, got {list(selected)}")
    if selected[0] < 1 or selected[-1] > half:
        raise ValidationError(f"selected columns must lie in 1..{half}, got {list(selected)}")
    y1 = build_walsh_matrix(r - 1).entries
    dup = y1[:, [k - 1 for k in selected]]
    y = np.block([[y1, dup], [y1, -dup]])  # n x m
    return _from_integer(y.T, r, FrameKind.REDUCED, selected)


def selection_matrix(half: int, selected: Sequence[int]) -> np.ndarray:
    delta = np.zeros((half, len(selected)))
    for col, k in enumerate(selected):
        delta[k - 1, col] = 1.0
    return delta


def eigen_multiplicities(a: np.ndarray, strict: bool = True) -> Optional[dict]:
    """Count eigenvalues of symmetric ``a`` in the buckets {0, 1/2, 1}.

    An eigenvalue outside every bucket raises (strict) or yields None.
    """
    counts = dict.fromkeys(EIGEN_BUCKETS, 0)
    for lam in np.linalg.eigvalsh(a):
        for b in EIGEN_BUCKETS:
            if abs(lam - b) <= BUCKET_RADIUS:
                counts[b] += 1
                break
        else:
            if strict:
                raise NumericalCheckError(f"eigenvalue {lam!r} is not within {BUCKET_RADIUS} of 0, 1/2 or 1")
            return None
    return counts


def split_columns(frame: Frame, cut: int, delta=None, strict_eigen: bool = False) -> SplitResult:
    """Split V = [Va | Vb] at column ``cut`` and measure both parts against I/2."""
    va, vb = frame.V[:, :cut], frame.V[:, cut:]
    half_i = np.eye(frame.m) / 2
    sa, sb = va @ va.T, vb @ vb.T
    ea, eb = sa - half_i, sb - half_i
    return SplitResult(
        Va=va, Vb=vb, Ea=ea, Eb=eb, delta=delta,
        two_norm_discrepancy=max(sym_two_norm(ea), sym_two_norm(eb)),
        frobenius_discrepancy=max(frobenius(ea), frobenius(eb)),
        eigen_multiplicities=eigen_multiplicities(sa, strict=strict_eigen),
    )


def split_half(wf: WalshFrame) -> SplitResult:
    """Even split of a plain Walsh frame with m <= n/2 into identical halves."""
    if wf.kind is not FrameKind.PLAIN:
        raise ValidationError("split_half expects a plain Walsh frame; use split_reduced for reduced frames")
    if wf.m > wf.n // 2:
        raise ValidationError(f"m = {wf.m} > n/2 = {wf.n // 2}: no even split exists; "
                              "build a reduced frame and use split_reduced")
    half = wf.n // 2
    if not np.array_equal(wf.integer_matrix[:, :half], wf.integer_matrix[:, half:]):
        raise NumericalCheckError("column halves of the Walsh frame differ")
    return split_columns(wf.frame, half, strict_eigen=True)


def split_reduced(wf: WalshFrame) -> SplitResult:
    if wf.kind is not FrameKind.REDUCED:
        raise ValidationError("split_reduced expects a reduced Walsh frame")
    half = wf.n // 2
    return split_columns(wf.frame, half, delta=selection_matrix(half, wf.selected), strict_eigen=True)


def split_walsh_frame(wf: WalshFrame) -> SplitResult:
    return split_reduced(wf) if wf.kind is FrameKind.REDUCED else split_half(wf)


def max_split_depth(m: int, r: int) -> int:
    """Number of successive even halvings: r - s with 2^(s-1) < m <= 2^s."""
    s = max(0, (m - 1).bit_length())
    return max(0, r - s)


def iterate_split(wf: WalshFrame, times: int) -> list[Frame]:
    """Halve the plain Walsh frame ``times`` times; returns 2^times frames.

    At depth l every part is the first m rows of Y_{r-l} / sqrt(n), a tight
    frame with constant 2^-l.
    """
    if wf.kind is not FrameKind.PLAIN:
        raise ValidationError("iterate_split expects a plain Walsh frame")
    if times < 0:
        raise ValidationError("times must be non-negative")
    depth = max_split_depth(wf.m, wf.r)
    if times > depth:
        raise ValidationError(f"m = {wf.m}, r = {wf.r} admits at most {depth} even halvings, asked for {times}")
    parts = [wf.integer_matrix]
    for _ in range(times):
        nxt = []
        for p in parts:
            cut = p.shape[1] // 2
            if not np.array_equal(p[:, :cut], p[:, cut:]):
                raise NumericalCheckError("halves differ during iterated split")
            nxt += [p[:, :cut], p[:, cut:]]
        parts = nxt
    scale = math.sqrt(wf.n)
    return [Frame(p / scale) for p in parts]
