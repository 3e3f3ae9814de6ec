"""Embedding equal-norm Parseval frames into Walsh coordinates.

Pipeline for V (m x k, k <= n = 2^r):

    W = [V^T; 0]  (n x m, orthonormal columns)
    H = [W | completion]        orthogonal
    G = H^T                     rows: [V | 0] on top, R below
    P = F H                     F = Y_r / sqrt(n), so P G = F
    y = P [x; 0]                Walsh coordinates of an embedded vector

The embedded subspace ``{[x; 0]}`` is ``{y : (P^T y)[m:] = 0}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleParameterError, NumericalCheckError, ValidationError
from .frames import Frame, equal_norm_constant, is_parseval, sym_two_norm
from .walsh import build_walsh_matrix

ORTHONORMAL_INPUT_TOL = 1e-8
DISCARD_TOL = 1e-8
PIVOT_TOL = 1e-10


def complete_orthonormal_basis(w: np.ndarray) -> np.ndarray:
    """Extend the orthonormal columns of ``w`` (n x m) to an orthogonal n x n H.

    Standard basis vectors are appended and orthogonalised against the current
    set (modified Gram-Schmidt, two passes); any whose residual norm falls
    below 1e-8 is dropped.  The first m columns of H are ``w`` unchanged.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[1] > w.shape[0]:
        raise ValidationError(f"expected a tall n x m matrix, got shape {w.shape}")
    n, m = w.shape
    if m and np.max(np.abs(w.T @ w - np.eye(m))) > ORTHONORMAL_INPUT_TOL:
        raise ValidationError("input columns are not orthonormal")
    basis = [w[:, j] for j in range(m)]
    extra = []
    for i in range(n):
        if len(basis) == n:
            break
        v = np.zeros(n)
        v[i] = 1.0
        for _ in range(2):
            for q in basis:
                v = v - (q @ v) * q
        norm = np.linalg.norm(v)
        if norm < DISCARD_TOL:
            continue
        v = v / norm
        basis.append(v)
        extra.append(v)
    if len(basis) != n:
        raise NumericalCheckError("basis completion produced too few vectors")
    h = np.empty((n, n))
    h[:, :m] = w
    if extra:
        h[:, m:] = np.column_stack(extra)
    return h


def rref(a: np.ndarray, tol: float = PIVOT_TOL) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with partial pivoting; returns (R, pivot columns)."""
    a = np.array(a, dtype=float)
    rows, cols = a.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        p = row + int(np.argmax(np.abs(a[row:, col])))
        if abs(a[p, col]) <= tol:
            a[row:, col] = 0.0
            continue
        a[[row, p]] = a[[p, row]]
        a[row] /= a[row, col]
        for other in range(rows):
            if other != row:
                a[other] -= a[other, col] * a[row]
        pivots.append(col)
        row += 1
    return a[:row], pivots


@dataclass(frozen=True, eq=False)
class EmbeddedFrame:
    original: Frame
    r: int
    H: np.ndarray
    G: np.ndarray
    P: np.ndarray
    F: np.ndarray
    constraints: np.ndarray  # (n - m) x n, RREF
    pivots: tuple[int, ...]

    @property
    def n(self) -> int:
        return 1 << self.r

    @property
    def m(self) -> int:
        return self.original.m

    @property
    def R(self) -> np.ndarray:
        return self.G[self.m:, :]

    def lift(self, x) -> np.ndarray:
        """z = [x; 0] in R^n."""
        z = np.zeros(self.n)
        z[: self.m] = x
        return z

    def walsh_coordinates(self, x) -> np.ndarray:
        """y = P [x; 0]."""
        return self.P @ self.lift(np.asarray(x, dtype=float))

    def free_variables(self) -> list[int]:
        return [j for j in range(self.n) if j not in self.pivots]

    def nullspace_basis(self) -> np.ndarray:
        """N (n x m) with y = N u solving the constraints, u = y[free]."""
        free = self.free_variables()
        N = np.zeros((self.n, len(free)))
        N[free, range(len(free))] = 1.0
        if self.pivots:
            N[list(self.pivots), :] = -self.constraints[:, free]
        return N


def embed_frame(frame: Frame, r: int, tol: float = 1e-10) -> EmbeddedFrame:
    n = 1 << r
    m, k = frame.m, frame.n
    if k > n:
        raise ValidationError(f"frame has k = {k} vectors, more than n = 2^{r} = {n}")
    if not is_parseval(frame, tol):
        raise ValidationError("embed_frame needs a Parseval frame (V V^T = I)")
    if equal_norm_constant(frame, tol) is None:
        raise ValidationError("embed_frame needs frame vectors of equal length")
    w = np.zeros((n, m))
    w[:k, :] = frame.V.T
    h = complete_orthonormal_basis(w)
    f = build_walsh_matrix(r).entries / math.sqrt(n)
    p = f @ h
    constraints, pivots = subspace_constraint_rows(p, m)
    return EmbeddedFrame(frame, r, h, h.T.copy(), p, f, constraints, tuple(pivots))


def subspace_constraint_rows(p: np.ndarray, m: int) -> tuple[np.ndarray, list[int]]:
    n = p.shape[0]
    block = p[:, m:].T  # rows of P^T that must vanish: z = P^T y has zero tail
    if block.shape[0] == 0:
        return np.zeros((0, n)), []
    reduced, pivots = rref(block)
    if len(pivots) != n - m:
        raise NumericalCheckError(f"constraint block has rank {len(pivots)}, expected n - m = {n - m}")
    return reduced, pivots


def subspace_constraints(emb: EmbeddedFrame) -> np.ndarray:
    return emb.constraints


def embedded_representation(emb: EmbeddedFrame, x) -> tuple[np.ndarray, float]:
    """Coefficients of [x; 0] against the columns of G and the residual check.

    coeffs_j = v_j^T x (zero for padded columns); the residual is
    ||sum_j coeffs_j r_j||, which vanishes for every x.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (emb.m,):
        raise ValidationError(f"expected a vector of length {emb.m}, got shape {x.shape}")
    coeffs = emb.G[: emb.m, :].T @ x
    residual = float(np.linalg.norm(emb.R @ coeffs))
    return coeffs, residual


@dataclass(frozen=True, eq=False)
class QuadraticFormSplit:
    Qa: np.ndarray
    Qb: np.ndarray
    discrepancy_two_norm: float


def split_quadratic_form(emb: EmbeddedFrame) -> QuadraticFormSplit:
    """Split q(y) = |y|^2 into the Walsh-column halves and pull back to x.

    q_a sums (f_j^T y)^2 over the first n/2 Walsh columns, q_b over the rest.
    The constraints are solved for the pivot variables; the remaining free
    variables are expressed through x via y = P [x; 0].
    """
    n, m = emb.n, emb.m
    if n < 2:
        raise ValidationError("need n >= 2 to split")
    fa, fb = emb.F[:, : n // 2], emb.F[:, n // 2:]
    free = emb.free_variables()
    # y = N u,  u = y[free] = P[free, :m] x
    t = emb.nullspace_basis() @ emb.P[free, :m]
    qa = t.T @ (fa @ fa.T) @ t
    qb = t.T @ (fb @ fb.T) @ t
    qa, qb = (qa + qa.T) / 2, (qb + qb.T) / 2
    return QuadraticFormSplit(qa, qb, sym_two_norm(qa - np.eye(m) / 2))


def quadratic_form_coefficients(q: np.ndarray) -> list[float]:
    """(x1^2, x1 x2, x2^2, ...) coefficients of x^T q x in lexicographic order."""
    coeffs = []
    for i in range(q.shape[0]):
        for j in range(i, q.shape[0]):
            coeffs.append(float(q[i, i] if i == j else 2 * q[i, j]))
    return coeffs


TRIPLE_TSQ = 2.0 / 3.0
_SIGN_CHOICES = ((1, -1), (-1, 1), (1, 1), (-1, -1))
ORTHOGONALITY_SLACK = 1e-6


def equal_norm_triple(a_squared: float, tol: float = 1e-10) -> Frame:
    """Three vectors of length sqrt(2/3) forming a Parseval frame for R^2.

    v_j = (c_j, sqrt(t^2 - c_j^2)) with c_1^2 = a^2,
    c_2^2 = (1 - a^2 + sqrt((1-a^2)^2 - (1-2a^2)^2)) / 2, c_3^2 = 1 - a^2 - c_2^2.
    c_1 is taken negative; the signs of c_2, c_3 follow the pattern (+, -)
    when it makes the two rows orthogonal, otherwise the first pattern that does.
    """
    a2 = float(a_squared)
    t2 = TRIPLE_TSQ
    if not 0 < a2 < 1:
        raise InfeasibleParameterError(f"a^2 must lie in (0, 1), got {a2}")
    disc = (1 - a2) ** 2 - (1 - 2 * a2) ** 2
    if disc < -tol:
        raise InfeasibleParameterError(f"a^2 = {a2}: negative discriminant {disc:.3g}")
    b2 = (1 - a2 + math.sqrt(max(disc, 0.0))) / 2
    c2 = 1 - a2 - b2
    sq = [a2, b2, c2]
    if any(v < -tol or v > t2 + tol for v in sq):
        raise InfeasibleParameterError(f"a^2 = {a2}: squared first components {sq} leave [0, 2/3]")
    sq = [min(max(v, 0.0), t2) for v in sq]
    first = [math.sqrt(v) for v in sq]
    second = np.array([math.sqrt(t2 - v) for v in sq])
    rows = [np.array([-first[0], sb * first[1], sc * first[2]]) for sb, sc in _SIGN_CHOICES]
    resid = [abs(row @ second) for row in rows]
    exact = [i for i, e in enumerate(resid) if e <= tol]
    # near a^2 = 2/3 the discriminant's square root amplifies round-off to ~1e-8
    pick = exact[0] if exact else int(np.argmin(resid))
    if resid[pick] > ORTHOGONALITY_SLACK:
        raise InfeasibleParameterError(f"a^2 = {a2}: no sign choice makes the rows orthogonal")
    return Frame(np.vstack([rows[pick], second]))
