import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from parseval_walsh import frames
from parseval_walsh.errors import NotAFrameError, ValidationError
from parseval_walsh.frames import (Frame, equal_norm_constant, frame_coefficients, frame_operator,
                                   is_parseval, is_tight, reconstruct)
from parseval_walsh.walsh_frames import build_walsh_frame

from conftest import random_equal_norm_parseval

EX1_V = np.array([
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, 1, -1, -1, 1, 1, -1, -1],
]) / (2 * math.sqrt(2))
EX3_V = np.array([[-0.7746, 0.6109, -0.1637], [0.2582, 0.5417, 0.7999]])


def test_identity_frame():
    info = frame_operator(Frame(np.eye(3)))
    assert np.array_equal(info.S, np.eye(3))
    assert np.array_equal(info.J, np.eye(3))
    assert info.tight_constant == 1.0


def test_example1_frame_operator():
    info = frame_operator(Frame(EX1_V))
    assert np.allclose(info.S, np.eye(3), atol=1e-12, rtol=0)
    assert is_tight(Frame(EX1_V)) == pytest.approx(1.0, abs=1e-12)


def test_example3_printed_frame_is_parseval_to_print_precision():
    f = Frame(EX3_V)
    assert np.max(np.abs(frame_operator(f).S - np.eye(2))) <= 1e-3
    assert is_parseval(f, tol=1e-3)


def test_half_walsh_frame_is_tight_but_not_parseval():
    va = Frame(build_walsh_frame(3, 3).frame.V[:, :4])
    assert is_tight(va) == pytest.approx(0.5, abs=1e-12)
    assert not is_parseval(va)


def test_non_tight():
    f = Frame(np.array([[1.0, 0.0], [0.0, 2.0]]))
    assert is_tight(f) is None
    assert not is_parseval(f)
    assert equal_norm_constant(f) is None


def test_tolerance_must_be_positive():
    with pytest.raises(ValidationError):
        is_tight(Frame(np.eye(2)), tol=0)


def test_frame_coefficients_example3():
    eta = frame_coefficients(Frame(EX3_V), [1.0, 2.0])
    assert np.allclose(eta, [-0.2582, 1.6943, 1.4361], atol=1e-3, rtol=0)
    assert np.allclose(reconstruct(Frame(EX3_V), eta), [1, 2], atol=1e-3, rtol=0)


def test_frame_coefficients_identity_and_zero():
    f = Frame(np.eye(3))
    x = np.array([0.3, -1.0, 2.0])
    assert np.array_equal(frame_coefficients(f, x), x)
    assert np.array_equal(reconstruct(f, np.zeros(3)), np.zeros(3))


def test_rank_deficient_is_not_a_frame():
    with pytest.raises(NotAFrameError):
        frame_coefficients(Frame(np.array([[1.0, 2.0], [2.0, 4.0]])), [1.0, 0.0])


def test_dimension_mismatch():
    f = Frame(np.eye(2))
    with pytest.raises(ValidationError):
        reconstruct(f, [1.0])
    with pytest.raises(ValidationError):
        frame_coefficients(f, [1.0, 2.0, 3.0])


def test_general_frame_coefficients_use_inverse_frame_operator(rng):
    for _ in range(20):
        v = rng.standard_normal((3, 7))
        f = Frame(v)
        x = rng.standard_normal(3)
        eta = frame_coefficients(f, x)
        assert np.allclose(reconstruct(f, eta), x, atol=1e-10, rtol=0)
        # canonical dual coefficients have minimal norm among all solutions
        assert np.allclose(eta, np.linalg.lstsq(v, x, rcond=None)[0], atol=1e-10, rtol=0)


@pytest.mark.parametrize("m,r", [(1, 1), (3, 3), (5, 3), (7, 4), (16, 4)])
def test_walsh_frame_equal_norm_constant(m, r):
    assert equal_norm_constant(build_walsh_frame(m, r).frame) == pytest.approx(m / (1 << r), abs=1e-12)


def test_example3_equal_norm_constant():
    assert equal_norm_constant(Frame(EX3_V), tol=1e-3) == pytest.approx(2 / 3, abs=1e-3)


def test_column_norm_cache_matches_recomputation(rng):
    v = rng.standard_normal((4, 9))
    f = Frame(v)
    assert np.max(np.abs(f.column_norms - np.sqrt((v ** 2).sum(axis=0)))) <= 1e-12


def test_frame_is_immutable():
    f = Frame(np.eye(2))
    with pytest.raises(ValueError):
        f.V[0, 0] = 3.0


@pytest.mark.parametrize("bad", [np.zeros((0, 3)), np.ones(3), np.array([[np.nan]])])
def test_bad_matrices(bad):
    with pytest.raises(ValidationError):
        Frame(bad)


def test_parseval_properties_random_frames(rng):
    for _ in range(40):
        f = random_equal_norm_parseval(rng, max_k=32)
        info = frame_operator(f)
        J = info.J
        assert np.max(np.abs(J @ J - J)) <= 1e-10
        assert np.max(np.abs(J @ f.V.T - f.V.T)) <= 1e-10
        for _ in range(5):
            x = rng.standard_normal(f.m)
            x /= np.linalg.norm(x)
            assert abs(np.sum((f.V.T @ x) ** 2) - 1.0) <= 1e-10
            assert np.max(np.abs(reconstruct(f, frame_coefficients(f, x)) - x)) <= 1e-10


def test_equal_norm_constant_is_m_over_n(rng):
    for r in range(1, 7):
        n = 1 << r
        for m in range(1, n + 1):
            assert abs(equal_norm_constant(build_walsh_frame(m, r).frame) - m / n) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 7)),
              elements=st.floats(-1e6, 1e6, allow_nan=False, width=64)))
def test_csv_and_json_round_trip_bit_exact(v):
    f = Frame(v)
    back = frames.frame_from_csv(frames.frame_to_csv(f)).V
    assert np.array_equal(back, f.V + 0.0)
    assert np.array_equal(frames.frame_from_json(frames.frame_to_json(f)).V, f.V)


def test_json_shape_mismatch_rejected():
    with pytest.raises(ValidationError):
        frames.frame_from_json('{"m": 3, "n": 2, "matrix": [[1, 0], [0, 1]]}')
    with pytest.raises(ValidationError):
        frames.frame_from_csv("1,2\n3\n")
