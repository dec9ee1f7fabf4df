"""Stencil library, frozen-coefficient amplification factors, and
numerical consistency probes.

The amplification factors insert a Fourier mode into each scheme with
the advective coefficient frozen at a constant ``u0`` (the only
convention under which the scheme symbol is a well-defined function of
the mode angle ``theta = k dx``).  For the Crank-Nicolson scheme this
gives a conjugate ratio lambda = (1 - i g)/(1 + i g), hence |lambda| = 1
identically: the scheme is neutrally stable, never strictly damping.
The explicit scheme gives lambda = 1 + i g, hence |lambda| >= 1 with
equality only where g vanishes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .crank_nicolson import CnConfig, GammaMode, LinearizationKind, cn_step_lagged
from .errors import OracleError
from .explicit import ExplicitConfig, explicit_step
from .model import Grid1D, SchemeParams, WaveField, pde_residual_pointwise

__all__ = [
    "StencilKind",
    "AmplificationPoint",
    "ScanRow",
    "apply_stencil",
    "cn_amplification",
    "explicit_amplification",
    "stability_scan",
    "truncation_error",
    "observed_order",
]


class StencilKind(enum.Enum):
    """Centered finite-difference building blocks."""

    FIRST_DERIV_CENTERED = "first"
    SECOND_DERIV_CENTERED = "second"
    THIRD_DERIV_CENTERED = "third"
    NONLINEAR_PRODUCT = "nonlinear"


_STENCIL_REACH = {
    StencilKind.FIRST_DERIV_CENTERED: 1,
    StencilKind.SECOND_DERIV_CENTERED: 1,
    StencilKind.THIRD_DERIV_CENTERED: 2,
    StencilKind.NONLINEAR_PRODUCT: 1,
}


def apply_stencil(kind: StencilKind, u: Sequence[float], dx: float, i: int) -> float:
    """Evaluate one stencil at index ``i`` of the sample sequence ``u``."""
    u = np.asarray(u, dtype=float)
    reach = _STENCIL_REACH[kind]
    if i - reach < 0 or i + reach >= u.shape[0]:
        raise IndexError(
            f"index {i} needs neighbours +/-{reach} inside a sequence of "
            f"length {u.shape[0]}"
        )
    if kind is StencilKind.FIRST_DERIV_CENTERED:
        return float((u[i + 1] - u[i - 1]) / (2.0 * dx))
    if kind is StencilKind.SECOND_DERIV_CENTERED:
        return float((u[i + 1] - 2.0 * u[i] + u[i - 1]) / dx**2)
    if kind is StencilKind.THIRD_DERIV_CENTERED:
        return float(
            (u[i + 2] - 2.0 * u[i + 1] + 2.0 * u[i - 1] - u[i - 2]) / (2.0 * dx**3)
        )
    return float(u[i] * (u[i + 1] - u[i - 1]) / (2.0 * dx))


@dataclass(frozen=True)
class AmplificationPoint:
    """Scheme symbol lambda at one mode angle theta = k dx."""

    theta: float
    lambda_re: float
    lambda_im: float
    magnitude: float


def _cn_symbol_g(theta: float, params: SchemeParams, u0: float) -> float:
    alpha = params.alpha
    beta = params.beta
    return (
        (alpha / 2.0) * math.sin(2.0 * theta)
        - alpha * math.sin(theta)
        - (3.0 * beta / 4.0) * u0 * math.sin(theta)
    )


def cn_amplification(theta: float, params: SchemeParams, u0: float) -> AmplificationPoint:
    """Frozen-coefficient Crank-Nicolson symbol: lambda = (1 - ig)/(1 + ig).

    g(theta) = (alpha/2) sin 2theta - alpha sin theta
               - (3 beta/4) u0 sin theta.
    """
    g = _cn_symbol_g(theta, params, u0)
    denom = 1.0 + g * g
    re = (1.0 - g * g) / denom
    im = -2.0 * g / denom
    return AmplificationPoint(
        theta=theta, lambda_re=re, lambda_im=im, magnitude=math.hypot(re, im)
    )


def explicit_amplification(theta: float, params: SchemeParams, u0: float) -> AmplificationPoint:
    """Frozen-coefficient explicit symbol: lambda = 1 + ig.

    g(theta) = (3 beta/2) u0 sin theta + 2 alpha sin theta
               - alpha sin 2theta.
    """
    alpha = params.alpha
    beta = params.beta
    g = (
        (3.0 * beta / 2.0) * u0 * math.sin(theta)
        + 2.0 * alpha * math.sin(theta)
        - alpha * math.sin(2.0 * theta)
    )
    return AmplificationPoint(
        theta=theta, lambda_re=1.0, lambda_im=g, magnitude=math.hypot(1.0, g)
    )


SCHEME_CN = "cn"
SCHEME_EXPLICIT = "explicit"


@dataclass(frozen=True)
class ScanRow:
    """One stability-scan record: worst |lambda| over the sampled angles."""

    params: SchemeParams
    u0: float
    max_magnitude: float


def stability_scan(
    scheme: str,
    params_list: Sequence[SchemeParams],
    u0_list: Sequence[float],
    theta_samples: Sequence[float],
) -> list:
    """Max |lambda| over theta for every (params, u0) pair, in input order."""
    thetas = [float(t) for t in theta_samples]
    for t in thetas:
        if t < 0.0 or t > math.pi:
            raise ValueError(f"theta samples must lie in [0, pi], got {t}")
    if scheme == SCHEME_CN:
        amp = cn_amplification
    elif scheme == SCHEME_EXPLICIT:
        amp = explicit_amplification
    else:
        raise ValueError(f"unknown scheme {scheme!r}; expected 'cn' or 'explicit'")
    rows = []
    for params in params_list:
        for u0 in u0_list:
            worst = max(amp(t, params, u0).magnitude for t in thetas) if thetas else 0.0
            rows.append(ScanRow(params=params, u0=float(u0), max_magnitude=worst))
    return rows


SCHEME_CN_LAGGED = "cn-lagged"


def truncation_error(
    scheme: str,
    manufactured: Callable[[np.ndarray, float], np.ndarray],
    params: SchemeParams,
    window: Grid1D,
    t0: float = 0.0,
    oracle_step: float = 1e-3,
) -> float:
    """One-step defect of a scheme against a manufactured closed form.

    Samples ``manufactured`` on the window grid at ``t0``, advances one
    discrete step, and compares with the exact samples at ``t0 + dt``
    corrected by the function's own KdV residual (so a function that
    does not satisfy the equation is still a valid probe).  Returns the
    sup norm of the interior defect divided by dt; for a consistent
    scheme this shrinks as the steps are refined.

    The window must be wide enough that the function is negligible at
    the boundary: the discrete step pins boundary cells to zero.
    """
    if scheme not in (SCHEME_CN_LAGGED, SCHEME_EXPLICIT):
        raise ValueError(
            f"unknown scheme {scheme!r}; expected 'cn-lagged' or 'explicit'"
        )
    x = window.points()
    dt = params.dt
    samples0 = np.asarray(manufactured(x, t0), dtype=float)
    if not np.all(np.isfinite(samples0)):
        raise OracleError("manufactured function produced non-finite samples")
    field0 = WaveField(window, t0, samples0)

    if scheme == SCHEME_EXPLICIT:
        cfg = ExplicitConfig(params=params, max_amplitude=float("inf"))
        stepped = explicit_step(field0, cfg)
    else:
        cfg = CnConfig(
            params=params,
            linearization=LinearizationKind.LAGGED_COEFFICIENT,
            gamma_mode=GammaMode.ROW_VARYING,
            max_amplitude=float("inf"),
        )
        stepped = cn_step_lagged(field0, cfg)

    exact1 = np.asarray(manufactured(x, t0 + dt), dtype=float)
    residual = pde_residual_pointwise(manufactured, x, t0, oracle_step)
    target = exact1 - dt * residual
    defect = stepped.values[2:-2] - target[2:-2]
    return float(np.max(np.abs(defect)) / dt)


def observed_order(errors: Sequence) -> float:
    """Least-squares slope of log(error) against log(h).

    ``errors`` holds (h, e) pairs from a refinement study; at least two
    entries with positive h and e are required.
    """
    pairs = [(float(h), float(e)) for h, e in errors]
    if len(pairs) < 2:
        raise ValueError("observed_order needs at least two (h, e) entries")
    for h, e in pairs:
        if h <= 0 or e <= 0:
            raise ValueError(f"entries must be positive, got (h={h}, e={e})")
    log_h = np.log([h for h, _ in pairs])
    log_e = np.log([e for _, e in pairs])
    slope, _ = np.polyfit(log_h, log_e, 1)
    return float(slope)
