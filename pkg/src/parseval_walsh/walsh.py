"""Walsh matrices (Sylvester construction) and Walsh functions.

All matrices here are exact ``int8`` arrays with entries in {-1, +1}; nothing
in this module touches floating point, so orthogonality checks are exact.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NumericalCheckError, OrderTooLargeError, ValidationError

DEFAULT_MAX_ORDER = 14
MAX_ORDER_ENV = "WALSH_MAX_ORDER"


class Ordering(str, enum.Enum):
    NATURAL = "natural"
    SEQUENCY = "sequency"


def max_order() -> int:
    """Order cap, overridable through the ``WALSH_MAX_ORDER`` env var."""
    raw = os.environ.get(MAX_ORDER_ENV)
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(f"{MAX_ORDER_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValidationError(f"{MAX_ORDER_ENV} must be non-negative, got {cap}")
    return cap


@dataclass(frozen=True, eq=False)
class WalshMatrix:
    order: int
    entries: np.ndarray
    ordering: Ordering = Ordering.NATURAL

    def __post_init__(self):
        n = 1 << self.order
        entries = np.asarray(self.entries)
        if entries.shape != (n, n):
            raise ValidationError(f"expected a {n}x{n} matrix for order {self.order}, got {entries.shape}")
        if not np.all(np.abs(entries) == 1):
            raise ValidationError("Walsh matrix entries must be exactly -1 or +1")
        entries = entries.astype(np.int8, copy=True)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "ordering", Ordering(self.ordering))

    @property
    def n(self) -> int:
        return 1 << self.order

    def gram(self) -> np.ndarray:
        """Exact integer Y^T Y."""
        y = self.entries.astype(np.int64)
        return y.T @ y

    def __eq__(self, other):
        if not isinstance(other, WalshMatrix):
            return NotImplemented
        return (self.order == other.order and self.ordering == other.ordering
                and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.order, self.ordering, self.entries.tobytes()))


def build_walsh_matrix(r: int, cap: int | None = None) -> WalshMatrix:
    """Natural-ordered Walsh matrix Y_r via ``Y <- [[Y, Y], [Y, -Y]]``."""
    if cap is None:
        cap = max_order()
    if not isinstance(r, (int, np.integer)) or r < 0:
        raise ValidationError(f"order must be a non-negative integer, got {r!r}")
    if r > cap:
        raise OrderTooLargeError(f"order {r} exceeds the cap {cap} (set {MAX_ORDER_ENV} to raise it)")
    y = np.ones((1, 1), dtype=np.int8)
    for _ in range(int(r)):
        y = np.block([[y, y], [y, -y]])
    return WalshMatrix(int(r), y, Ordering.NATURAL)


def sign_change_count(row: Sequence[int]) -> int:
    row = np.asarray(row)
    if row.ndim != 1 or row.size == 0:
        raise ValidationError("row must be a non-empty vector")
    if not np.all(np.abs(row) == 1):
        raise ValidationError("row entries must be -1 or +1")
    return int(np.count_nonzero(row[1:] != row[:-1]))


def to_sequency(y: WalshMatrix) -> WalshMatrix:
    """Permute the rows of a natural-ordered matrix by sign-change count."""
    if y.ordering is not Ordering.NATURAL:
        raise ValidationError("to_sequency expects a natural-ordered Walsh matrix")
    counts = np.count_nonzero(y.entries[:, 1:] != y.entries[:, :-1], axis=1)
    perm = np.argsort(counts, kind="stable")
    if not np.array_equal(counts[perm], np.arange(y.n)):
        raise NumericalCheckError("sign-change counts are not a permutation of 0..n-1; matrix is corrupt")
    return WalshMatrix(y.order, y.entries[perm], Ordering.SEQUENCY)


# -- Walsh functions ---------------------------------------------------------

@dataclass(frozen=True)
class BinaryExpansion:
    """Finite binary expansion of an index or of a point in [0, 1).

    ``kind == "index"``: ``bits[s-1]`` is k_s with k = sum k_s 2^(s-1)
    (least significant first).  ``kind == "point"``: ``bits[s-1]`` is x_s
    with x = sum x_s 2^(-s).  Bits beyond the declared depth are zero.
    ``ones_tail`` marks a point expansion ending in an infinite run of ones,
    which is never accepted.
    """

    bits: tuple[int, ...]
    kind: str
    ones_tail: bool = False

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) < 1:
            raise ValidationError("expansion depth must be at least 1")
        if any(b not in (0, 1) for b in bits):
            raise ValidationError("expansion bits must be 0 or 1")
        if self.kind not in ("index", "point"):
            raise ValidationError(f"unknown expansion kind {self.kind!r}")
        if self.ones_tail:
            if self.kind == "index":
                raise ValidationError("an index expansion cannot have an infinite tail")
            raise ValidationError("point expansions ending in repeated ones are excluded")
        object.__setattr__(self, "bits", bits)

    @property
    def depth(self) -> int:
        return len(self.bits)

    @classmethod
    def index(cls, k: int, depth: int | None = None) -> "BinaryExpansion":
        if k < 0:
            raise ValidationError(f"index must be non-negative, got {k}")
        if depth is None:
            depth = max(1, int(k).bit_length())
        if k >= 1 << depth:
            raise ValidationError(f"index {k} needs more than {depth} bits")
        return cls(tuple((k >> s) & 1 for s in range(depth)), "index")

    @classmethod
    def point(cls, x, depth: int = 64) -> "BinaryExpansion":
        """Expansion of x in [0, 1); x = 1 only has the excluded all-ones form."""
        x = Fraction(x)
        if not 0 <= x < 1:
            raise ValidationError(f"point must lie in [0, 1), got {x}")
        bits = []
        for _ in range(depth):
            x *= 2
            bit = int(x >= 1)
            bits.append(bit)
            x -= bit
        return cls(tuple(bits), "point")

    @property
    def value(self):
        if self.kind == "index":
            return sum(b << s for s, b in enumerate(self.bits))
        return sum(Fraction(b, 1 << (s + 1)) for s, b in enumerate(self.bits))


def gray_code(k: int) -> int:
    return k ^ (k >> 1)


def walsh_function_eval(k, x, ordering: str = "sequency") -> int:
    """Walsh function W_k(x) in {-1, +1}.

    ``ordering="paley"`` evaluates (-1)^p with p = sum_s k_s x_s directly.
    ``ordering="sequency"`` applies the same product to the Gray code of k,
    so that sampling W_k at the n interval midpoints gives row k+1 of Z_r.
    """
    if isinstance(k, BinaryExpansion):
        if k.kind != "index":
            raise ValidationError("k must be an index expansion")
        k_int = k.value
    else:
        k_int = int(k)
        if k_int < 0:
            raise ValidationError(f"index must be non-negative, got {k_int}")
    if not isinstance(x, BinaryExpansion):
        x = BinaryExpansion.point(x)
    elif x.kind != "point":
        raise ValidationError("x must be a point expansion")

    if ordering == "sequency":
        k_int = gray_code(k_int)
    elif ordering != "paley":
        raise ValidationError(f"unknown ordering {ordering!r}")
    kbits = BinaryExpansion.index(k_int).bits
    p = sum(ks & xs for ks, xs in zip(kbits, x.bits))
    return -1 if p % 2 else 1


def sample_walsh_function(k: int, r: int, ordering: str = "sequency") -> np.ndarray:
    """W_k evaluated at the midpoints (2l - 1) / 2n, l = 1..n, n = 2^r."""
    n = 1 << r
    return np.array([walsh_function_eval(k, Fraction(2 * l - 1, 2 * n), ordering)
                     for l in range(1, n + 1)], dtype=np.int8)


# -- export ------------------------------------------------------------------

def walsh_to_csv(y: WalshMatrix) -> str:
    return "".join(",".join(str(int(v)) for v in row) + "\n" for row in y.entries)


def walsh_from_csv(text: str, ordering: Ordering | str = Ordering.NATURAL) -> WalshMatrix:
    rows = [line.split(",") for line in text.splitlines() if line.strip()]
    try:
        entries = np.array([[int(v) for v in row] for row in rows])
    except ValueError as exc:
        raise ValidationError(f"Walsh CSV entries must be 1 or -1: {exc}") from None
    n = entries.shape[0]
    if n == 0 or n & (n - 1):
        raise ValidationError(f"Walsh matrix size must be a power of two, got {n}")
    return WalshMatrix(n.bit_length() - 1, entries, Ordering(ordering))


def walsh_to_json(y: WalshMatrix) -> str:
    return json.dumps({"order": y.order, "ordering": y.ordering.value,
                       "rows": y.entries.astype(int).tolist()})


def walsh_from_json(text: str) -> WalshMatrix:
    try:
        data = json.loads(text)
        return WalshMatrix(int(data["order"]), np.array(data["rows"]), Ordering(data["ordering"]))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"malformed Walsh JSON: {exc}") from None
