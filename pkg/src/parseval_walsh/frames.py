"""Finite frames in R^m: frame operator, tightness, coefficients, reconstruction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NotAFrameError, ValidationError

DEFAULT_TOL = 1e-10


def sym_two_norm(a: np.ndarray) -> float:
    """Spectral norm of a symmetric matrix: largest |eigenvalue|."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh((a + a.T) / 2))))


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro")) if np.size(a) else 0.0


@dataclass(frozen=True, eq=False)
class Frame:
    """Pre-frame operator V (m x n); the frame vectors are its columns."""

    V: np.ndarray
    column_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.V, dtype=float)
        if v.ndim != 2 or 0 in v.shape:
            raise ValidationError(f"pre-frame operator must be a non-empty 2-D matrix, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("pre-frame operator has non-finite entries")
        v.setflags(write=False)
        norms = np.linalg.norm(v, axis=0)
        norms.setflags(write=False)
        object.__setattr__(self, "V", v)
        object.__setattr__(self, "column_norms", norms)

    @property
    def m(self) -> int:
        return self.V.shape[0]

    @property
    def n(self) -> int:
        return self.V.shape[1]

    def columns(self, idx) -> "Frame":
        return Frame(self.V[:, idx])


@dataclass(frozen=True, eq=False)
class FrameOperatorInfo:
    S: np.ndarray
    J: np.ndarray
    tight_constant: Optional[float]


def frame_operator(frame: Frame, tol: float = DEFAULT_TOL) -> FrameOperatorInfo:
    v = frame.V
    return FrameOperatorInfo(S=v @ v.T, J=v.T @ v, tight_constant=is_tight(frame, tol))


def is_tight(frame: Frame, tol: float = DEFAULT_TOL) -> Optional[float]:
    """Frame constant c if ||S - cI||_2 <= tol, with c = trace(S)/m; else None."""
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    s = frame.V @ frame.V.T
    c = float(np.trace(s)) / frame.m
    if c <= 0:
        return None
    if sym_two_norm(s - c * np.eye(frame.m)) <= tol:
        return c
    return None


def is_parseval(frame: Frame, tol: float = DEFAULT_TOL) -> bool:
    c = is_tight(frame, tol)
    return c is not None and abs(c - 1.0) <= tol


def frame_coefficients(frame: Frame, x) -> np.ndarray:
    """Coefficients eta_j = v_j^T S^-1 x, so that x = sum_j eta_j v_j.

    For Parseval frames S = I and this is just V^T x.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (frame.m,):
        raise ValidationError(f"expected a vector of length {frame.m}, got shape {x.shape}")
    if np.linalg.matrix_rank(frame.V) < frame.m:
        raise NotAFrameError("columns do not span R^m; the frame operator is singular")
    if is_parseval(frame):
        return frame.V.T @ x
    s = frame.V @ frame.V.T
    return frame.V.T @ np.linalg.solve(s, x)


def reconstruct(frame: Frame, coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (frame.n,):
        raise ValidationError(f"expected {frame.n} coefficients, got shape {coeffs.shape}")
    return frame.V @ coeffs


def equal_norm_constant(frame: Frame, tol: float = DEFAULT_TOL) -> Optional[float]:
    """Common squared column norm alpha, or None if the norms differ."""
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    norms = frame.column_norms
    if np.max(norms) - np.min(norms) > tol:
        return None
    return float(norms[0] ** 2)


# -- export ------------------------------------------------------------------

def format_float(x: float) -> str:
    # shortest round-trip repr; "-0.0" is normalised so output is stable
    x = float(x)
    return repr(0.0 if x == 0 else x)


def matrix_to_csv(a: np.ndarray) -> str:
    return "".join(",".join(format_float(v) for v in row) + "\n" for row in np.atleast_2d(a))


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [line.split(",") for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValidationError("empty CSV matrix")
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("CSV rows have different lengths")
    try:
        return np.array([[float(v) for v in row] for row in rows])
    except ValueError as exc:
        raise ValidationError(f"bad CSV entry: {exc}") from None


def frame_to_csv(frame: Frame) -> str:
    return matrix_to_csv(frame.V)


def frame_from_csv(text: str) -> Frame:
    return Frame(matrix_from_csv(text))


def frame_to_dict(frame: Frame, **extra) -> dict:
    d = {"m": frame.m, "n": frame.n, "matrix": frame.V.tolist()}
    d.update(extra)
    return d


def frame_to_json(frame: Frame, **extra) -> str:
    return json.dumps(frame_to_dict(frame, **extra))


def frame_from_dict(data: dict) -> Frame:
    try:
        frame = Frame(np.array(data["matrix"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed frame JSON: {exc}") from None
    if (data.get("m", frame.m), data.get("n", frame.n)) != (frame.m, frame.n):
        raise ValidationError(f"frame JSON declares {data.get('m')}x{data.get('n')} "
                              f"but the matrix is {frame.m}x{frame.n}")
    return frame


def frame_from_json(text: str) -> Frame:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed frame JSON: {exc}") from None
    return frame_from_dict(data)
