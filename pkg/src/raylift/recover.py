"""Constructive Lipschitz left inverse of the intensity measurement map.

The pipeline inverts measurements by (1) min-norm linear inversion onto
self-adjoint operators, (2) spectral retraction onto rank-one PSD operators,
(3) un-lifting to a ray. Stage (1) is linear, hence Lipschitz with constant
1/sigma_min over the row space; this replaces the non-constructive isometric
extension that only guarantees existence. The certified pipeline constant is
reported next to the theoretical one (which uses the frame's lower stability
constant) without asserting a relation between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .core import Vector
from .frames import Frame, LiftedMap, Measurement, build_lifted_map, measure, min_norm_inverse
from .metrics import RayPoint, ray, unlift
from .retraction import rank_one_retract, retraction_bound

__all__ = [
    "RecoveryReport",
    "LipBound",
    "recover",
    "recovery_lip_bound",
    "polish",
]


@dataclass(frozen=True)
class RecoveryReport:
    """Outcome of one inversion: the estimated ray, the measurement-space
    residual, intermediate stage norms, and whether iterative polish ran."""

    estimate: RayPoint
    residual: float
    pipeline_stage_norms: dict
    polished: bool

    def __post_init__(self):
        if not (math.isfinite(self.residual) and self.residual >= 0):
            raise ValueError(f"residual must be finite and >= 0, got {self.residual}")

    def to_dict(self) -> dict:
        rep = self.estimate.rep
        if rep.field.value == "complex":
            entries = [[float(z.real), float(z.imag)] for z in rep.entries]
        else:
            entries = [float(z) for z in rep.entries]
        return {
            "estimate": {"field": rep.field.value, "dim": rep.dim, "entries": entries},
            "residual": self.residual,
            "pipeline_stage_norms": dict(self.pipeline_stage_norms),
            "polished": self.polished,
        }


def recover(
    F: Frame,
    c: Union[Measurement, np.ndarray],
    group_tol: Optional[float] = None,
    lifted: Optional[LiftedMap] = None,
    do_polish: bool = False,
    polish_iters: int = 200,
) -> RecoveryReport:
    """Invert a measurement vector to a ray estimate.

    When the lifted measurement matrix has full column rank and c lies on the
    measurement range, the estimate recovers the original ray exactly (up to
    numerical tolerance). Pass a prebuilt ``lifted`` map to amortize the
    factorization over many measurements.
    """
    if not isinstance(c, Measurement):
        c = Measurement(np.asarray(c, dtype=np.float64))
    M = lifted if lifted is not None else build_lifted_map(F)
    if c.count != M.rows:
        raise ValueError(f"measurement count {c.count} does not match frame count {M.rows}")
    T = min_norm_inverse(M, c)
    R = rank_one_retract(T, group_tol)
    est = unlift(R)
    stage_norms = {
        "pseudoinverse_fro": float(np.linalg.norm(T.entries)),
        "retraction_fro": float(np.linalg.norm(R.carrier.entries)),
    }
    polished = False
    if do_polish:
        est = polish(F, c, est, iters=polish_iters)
        polished = True
    residual = float(np.linalg.norm(measure(F, est.rep).values - c.values))
    return RecoveryReport(
        estimate=est,
        residual=residual,
        pipeline_stage_norms=stage_norms,
        polished=polished,
    )


@dataclass(frozen=True)
class LipBound:
    """Lipschitz ceiling of the inversion pipeline from (R^m, ||.||_p) to rays
    with the Schatten-q metric.

    ``pipeline`` multiplies the certified constants of the constructive
    stages (measurement-norm change, linear min-norm inversion, retraction,
    metric change). ``theory`` replaces the inversion factor 1/sigma_min by
    1/sqrt(a0) when a lower stability constant estimate is supplied.
    """

    pipeline: float
    theory: Optional[float]
    sigma_min: float
    measurement_factor: float
    retraction_factor: float
    metric_factor: float


def recovery_lip_bound(
    F: Frame,
    p: float,
    q: float,
    a0: Optional[float] = None,
    lifted: Optional[LiftedMap] = None,
) -> LipBound:
    """Evaluate the pipeline's Lipschitz ceiling for input norm p and output
    metric order q."""
    for name, val in (("p", p), ("q", q)):
        if val != math.inf and not 1 <= val:
            raise ValueError(f"{name} must satisfy 1 <= {name} <= inf, got {val}")
    M = lifted if lifted is not None else build_lifted_map(F)
    invp = 0.0 if p == math.inf else 1.0 / p
    invq = 0.0 if q == math.inf else 1.0 / q
    measurement = max(1.0, M.rows ** (0.5 - invp))
    # retraction runs in the Frobenius norm when q <= 2 (metric changed after)
    # and directly in Schatten-q when q > 2
    retraction = retraction_bound(2.0 if q <= 2 else q)
    metric = 2.0 ** max(0.0, invq - 0.5)
    sigma = M.sigma_min
    pipeline = measurement * (1.0 / sigma) * retraction * metric
    theory = None
    if a0 is not None:
        if a0 <= 0:
            raise ValueError(f"a0 must be positive, got {a0}")
        theory = measurement * (1.0 / math.sqrt(a0)) * retraction * metric
    return LipBound(
        pipeline=pipeline,
        theory=theory,
        sigma_min=sigma,
        measurement_factor=measurement,
        retraction_factor=retraction,
        metric_factor=metric,
    )


def _residual_and_grad(F: Frame, c_vals: np.ndarray, x: np.ndarray):
    coeff = F.synthesis.conj() @ x
    intens = np.abs(coeff) ** 2
    diff = intens - c_vals
    h = float(np.sum(diff * diff))
    grad = 4.0 * (F.synthesis.T @ (diff * coeff))
    return h, grad


def polish(
    F: Frame,
    c: Union[Measurement, np.ndarray],
    x0: RayPoint,
    iters: int = 200,
    step_rule: str = "backtracking",
    b0_hint: Optional[float] = None,
) -> RayPoint:
    """Refine a ray estimate by gradient descent on the squared measurement
    residual (Wirtinger gradient in the complex case), with an Armijo
    backtracking line search. Accepted steps never increase the residual.
    """
    if iters < 0:
        raise ValueError(f"iters must be >= 0, got {iters}")
    if step_rule != "backtracking":
        raise ValueError(f"unknown step rule {step_rule!r}")
    vals = c.values if isinstance(c, Measurement) else np.asarray(c, dtype=np.float64)
    if vals.shape[0] != F.count:
        raise ValueError("measurement count does not match frame")
    if b0_hint is None:
        # certified upper stability constant: ||alpha(x)-alpha(y)|| <= sigma_max d1
        b0_hint = float(np.linalg.svd(build_lifted_map(F).matrix, compute_uv=False)[0]) ** 2
    step0 = 1.0 / (2.0 * max(b0_hint, 1e-300))
    x = x0.rep.entries.copy()
    h, grad = _residual_and_grad(F, vals, x)
    for _ in range(iters):
        gnorm2 = float(np.vdot(grad, grad).real)
        if gnorm2 <= 1e-30 * max(1.0, h):
            break
        t = step0
        accepted = False
        for _ in range(60):
            xn = x - t * grad
            hn, gn = _residual_and_grad(F, vals, xn)
            if hn <= h - 1e-4 * t * gnorm2:
                x, h, grad = xn, hn, gn
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        if h <= 1e-30:
            break
    return ray(Vector(x, F.field))
