import math

import numpy as np
import pytest

from parseval_walsh.frames import Frame
from parseval_walsh.walsh_frames import build_walsh_frame


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_orthogonal(m, rng):
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diag(r))


def harmonic_frame(m, k, rng=None):
    """k equal-norm vectors forming a Parseval frame for R^m (needs k > m)."""
    j = np.arange(k)
    rows = []
    if m % 2:
        rows.append(np.full(k, 1 / math.sqrt(k)))
    freqs = list(range(1, (k - 1) // 2 + 1))
    if rng is not None:
        freqs = list(rng.permutation(freqs))
    for f in freqs[: m // 2]:
        rows.append(math.sqrt(2 / k) * np.cos(2 * math.pi * f * j / k))
        rows.append(math.sqrt(2 / k) * np.sin(2 * math.pi * f * j / k))
    v = np.array(rows)
    assert v.shape == (m, k), "not enough distinct frequencies"
    return v


def random_equal_norm_parseval(rng, max_k=16):
    """Random rotation of a harmonic or Walsh frame; returns a Frame (m x k)."""
    if rng.random() < 0.5:
        r = int(rng.integers(1, 5))
        n = 1 << r
        m = int(rng.integers(1, n + 1))
        v = build_walsh_frame(m, r).frame.V
    else:
        k = int(rng.integers(3, max_k + 1))
        m = int(rng.integers(1, 2 * ((k - 1) // 2) + 1))
        v = harmonic_frame(m, k, rng)
    u = random_orthogonal(v.shape[0], rng)
    perm = rng.permutation(v.shape[1])
    return Frame((u @ v)[:, perm])
