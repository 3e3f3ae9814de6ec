"""Reproduction checks for the worked examples and the frame-split sweeps.

Each suite returns a list of ``Check`` rows; ``verify`` in the CLI prints
them as a table and fails if any row failed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import discrepancy, embedding, frames, walsh, walsh_frames


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


# Printed matrices from the worked examples (integer parts, before scaling).
EX1_V8 = np.array([
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, 1, -1, -1, 1, 1, -1, -1],
])
EX1_V4 = np.array([
    [1, 1, 1, 1],
    [1, -1, -1, 1],
    [1, 1, -1, -1],
])
EX2_Y = np.array([
    [1, 1, 1, 1, 1, 1],
    [1, -1, 1, -1, 1, 1],
    [1, 1, -1, -1, 1, -1],
    [1, -1, -1, 1, 1, -1],
    [1, 1, 1, 1, -1, -1],
    [1, -1, 1, -1, -1, -1],
    [1, 1, -1, -1, -1, 1],
    [1, -1, -1, 1, -1, 1],
])
EX3_V = np.array([
    [-0.7746, 0.6109, -0.1637],
    [0.2582, 0.5417, 0.7999],
])
EX3_COEFFS = np.array([-0.2582, 1.6943, 1.4361])
EX3_Y = np.array([1.4361, -0.2582, 0.0, -1.6943])
EX3_QA = (0.9732, 0.2618, 0.3601)
EX3_QB = (0.0268, -0.2619, 0.6398)


def _close(name, got, want, tol) -> Check:
    err = float(np.max(np.abs(np.asarray(got, dtype=float) - np.asarray(want, dtype=float))))
    return Check(name, err <= tol, f"max err {err:.2e} (tol {tol:g})")


def _exact(name, got, want) -> Check:
    return Check(name, bool(np.array_equal(got, want)), "exact")


def example1() -> list[Check]:
    out = []
    v = frames.Frame(EX1_V8 / (2 * math.sqrt(2)))
    y3 = walsh.build_walsh_matrix(3).entries
    out.append(Check("ex1: printed 3x8 rows are rows 1,4,3 of Y_3",
                     bool(np.array_equal(EX1_V8, y3[[0, 3, 2]]))))
    out.append(_close("ex1: VV^T = I_3", v.V @ v.V.T, np.eye(3), 1e-12))
    va, vb = v.V[:, :4], v.V[:, 4:]
    out.append(_exact("ex1: halves identical", EX1_V8[:, :4], EX1_V8[:, 4:]))
    out.append(_close("ex1: VaVa^T = I_3/2", va @ va.T, np.eye(3) / 2, 1e-12))

    v4 = frames.Frame(EX1_V4 / 2)
    out.append(_close("ex1: renormalised VV^T = I_3", v4.V @ v4.V.T, np.eye(3), 1e-12))
    rep = discrepancy.evaluate_partition(v4, discrepancy.Partition.halves(4))
    out.append(_close("ex1: proposed split deviation 1/2 (both parts)",
                      [p.dev2 for p in rep.parts], [0.5, 0.5], 1e-10))
    best = discrepancy.brute_force_best_partition(v4, "dev2", threads=1)
    out.append(_close("ex1: exhaustive optimum 1/2", best.value, 0.5, 1e-9))
    out.append(Check("ex1: enumerated 2^(n-1)-1 partitions", best.inspected == 7, f"{best.inspected}"))
    ea = v4.V[:, :2] @ v4.V[:, :2].T - np.eye(3) / 2
    out.append(_close("ex1: s_a - s/2 = x1 x3", ea, [[0, 0, 0.5], [0, 0, 0], [0.5, 0, 0]], 1e-12))
    red = walsh_frames.build_reduced_walsh_frame(2, (1,))
    out.append(_exact("ex1: equals reduced frame r=2, k=(1) with columns 3,4 swapped",
                      red.integer_matrix[:, [0, 1, 3, 2]], EX1_V4))
    return out


def example2() -> list[Check]:
    out = []
    wf = walsh_frames.build_reduced_walsh_frame(3, (1, 3))
    out.append(_exact("ex2: Y matches printed 8x6", wf.integer_matrix.T, EX2_Y))
    out.append(_close("ex2: VV^T = I_6", wf.frame.V @ wf.frame.V.T, np.eye(6), 1e-12))
    sp = walsh_frames.split_reduced(wf)
    delta = np.array([[1, 0], [0, 0], [0, 1], [0, 0]])
    out.append(_exact("ex2: Delta = [e1, e3]", sp.delta, delta))
    sa = np.block([[np.eye(4), delta], [delta.T, np.eye(2)]]) / 2
    sb = np.block([[np.eye(4), -delta], [-delta.T, np.eye(2)]]) / 2
    out.append(_close("ex2: VaVa^T printed block", sp.Va @ sp.Va.T, sa, 1e-12))
    out.append(_close("ex2: VbVb^T printed block", sp.Vb @ sp.Vb.T, sb, 1e-12))
    out.append(_close("ex2: 2-norm deviation 1/2", sp.two_norm_discrepancy, 0.5, 1e-10))
    out.append(_close("ex2: Frobenius deviation 1", sp.frobenius_discrepancy, 1.0, 1e-10))
    out.append(_close("ex2: ||VaVa^T||_2 = 1", frames.sym_two_norm(sp.Va @ sp.Va.T), 1.0, 1e-10))
    out.append(_close("ex2: ||VaVa^T||_F = sqrt(10)/2",
                      frames.frobenius(sp.Va @ sp.Va.T), math.sqrt(10) / 2, 1e-10))
    out.append(Check("ex2: eigenvalue multiplicities {0:2, 1/2:2, 1:2}",
                     sp.eigen_multiplicities == {0: 2, 0.5: 2, 1: 2}, str(sp.eigen_multiplicities)))
    best = discrepancy.brute_force_best_partition(wf.frame, "dev2", threads=1)
    out.append(_close("ex2: exhaustive optimum 1/2", best.value, 0.5, 1e-9))
    rep = discrepancy.evaluate_partition(wf.frame, discrepancy.Partition.halves(8))
    out.append(Check("ex2: bounds (1/sqrt2+sqrt a)^2 and 5 sqrt a hold",
                     rep.satisfies_mss and rep.satisfies_wds,
                     f"alpha={rep.alpha:.4f} mss={rep.mss_bound:.4f} wds={rep.wds_bound:.4f}"))
    return out


def example3() -> list[Check]:
    out = []
    fr = embedding.equal_norm_triple(3 / 5)
    out.append(_close("ex3: V matches printed 2x3", fr.V, EX3_V, 1e-3))
    out.append(Check("ex3: Parseval", frames.is_parseval(fr)))
    out.append(_close("ex3: alpha = 2/3", frames.equal_norm_constant(fr), 2 / 3, 1e-10))
    x = np.array([1.0, 2.0])
    out.append(_close("ex3: frame coefficients of (1,2)", frames.frame_coefficients(fr, x), EX3_COEFFS, 1e-3))
    emb = embedding.embed_frame(fr, 2)
    out.append(_close("ex3: PG = F", emb.P @ emb.G, emb.F, 1e-10))
    out.append(_close("ex3: y = P[x;0]", emb.walsh_coordinates(x), EX3_Y, 1e-3))
    want = np.array([[0, 0, 1, 0], [1, -1, 0, 1]], dtype=float)
    got = emb.constraints
    proj = lambda a: a.T @ np.linalg.pinv(a.T)  # noqa: E731
    out.append(_close("ex3: constraints y3 = 0, y4 = -y1 + y2", proj(got), proj(want), 1e-3))
    qs = embedding.split_quadratic_form(emb)
    out.append(_close("ex3: q_a coefficients", embedding.quadratic_form_coefficients(qs.Qa), EX3_QA, 2e-3))
    out.append(_close("ex3: q_b coefficients", embedding.quadratic_form_coefficients(qs.Qb), EX3_QB, 2e-3))
    out.append(Check("ex3: discrepancy <= 1/2", qs.discrepancy_two_norm <= 0.5 + 1e-10,
                     f"{qs.discrepancy_two_norm:.6f}"))
    return out


def wf1_sweep(max_r: int = 6) -> list[Check]:
    out = []
    for r in range(1, max_r + 1):
        n = 1 << r
        ok, worst = True, 0.0
        for m in range(1, n // 2 + 1):
            wf = walsh_frames.build_walsh_frame(m, r)
            sp = walsh_frames.split_half(wf)
            ok &= bool(np.array_equal(sp.Va, sp.Vb))
            worst = max(worst, float(np.max(np.abs(sp.Va @ sp.Va.T - np.eye(m) / 2))))
        out.append(Check(f"wf1: r={r}, m=1..{n // 2}: identical halves, VaVa^T = I/2",
                         ok and worst <= 1e-12, f"max err {worst:.1e}"))
    return out


def wf2_sweep(max_r: int = 6, trials: int = 20, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    for r in range(2, max_r + 1):
        n, half = 1 << r, 1 << (r - 1)
        worst = 0.0
        mult_ok = True
        for _ in range(trials):
            s = int(rng.integers(1, half + 1))
            sel = sorted(rng.choice(np.arange(1, half + 1), size=s, replace=False).tolist())
            wf = walsh_frames.build_reduced_walsh_frame(r, sel)
            sp = walsh_frames.split_reduced(wf)
            m = wf.m
            worst = max(worst,
                        abs(sp.two_norm_discrepancy - 0.5),
                        abs(sp.frobenius_discrepancy - math.sqrt(s / 2)),
                        abs(frames.frobenius(sp.Va @ sp.Va.T) - math.sqrt((3 * m - n) / 4)))
            mult_ok &= sp.eigen_multiplicities == {0: s, 0.5: m - 2 * s, 1: s}
        out.append(Check(f"wf2: r={r}, {trials} random selections: closed-form norms and spectrum",
                         worst <= 1e-10 and mult_ok, f"max err {worst:.1e}"))
    return out


def optimality_oracle(orders=(2, 3)) -> list[Check]:
    out = []
    for r in orders:
        half = 1 << (r - 1)
        worst = 0.0
        attained = True
        count = 0
        for s in range(1, half + 1):
            for sel in itertools.combinations(range(1, half + 1), s):
                wf = walsh_frames.build_reduced_walsh_frame(r, sel)
                best = discrepancy.brute_force_best_partition(wf.frame, "dev2", threads=1)
                sp = walsh_frames.split_reduced(wf)
                worst = max(worst, abs(best.value - 0.5))
                attained &= sp.two_norm_discrepancy <= best.value + 1e-9
                count += 1
        out.append(Check(f"oracle: r={r}, all {count} reduced frames: optimum 1/2 attained by the half split",
                         worst <= 1e-9 and attained, f"max err {worst:.1e}"))
    return out


SUITES = {
    "ex1": example1,
    "ex2": example2,
    "ex3": example3,
    "wf1-sweep": wf1_sweep,
    "wf2-sweep": wf2_sweep,
}
