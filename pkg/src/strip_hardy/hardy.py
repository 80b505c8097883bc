"""Analytic continuation into the strip as a Fourier multiplier.

For ``xi`` in the strip Hardy space the continuation to ``theta + i*lam`` is
the multiplier ``e^{-lam t}`` on the frequency side.  ``lam = -pi`` gives
``Delta^{1/2}``, the multiplier ``e^{pi t}``.

The multiplier amplifies rounding noise exponentially, so coefficients below
``noise_floor * max|xi_hat|`` are discarded before it is applied.  The trust
flag then measures how much post-multiplier energy sits in the top tenth of
the retained positive band.  A genuinely decaying continuation puts almost
nothing there.  Aliasing or a non-member puts most of the energy there.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, MembershipError
from .grid import (COMPLEX, EPS, PI, REAL, BoundaryVector, StripGrid,
                   _dft_array, _idft_array, l2_norm)

LOGGER = logging.getLogger(__name__)

NOISE_FLOOR = 4 * EPS
TRUST_THRESHOLD = 1e-8
TOP_BAND = 0.1
# keeps e^{pi t} finite in longdouble with room for the coefficient scale
_EXP_CLIP = float(np.log(np.finfo(REAL).max)) - 60.0


@dataclass(frozen=True)
class ContinuationResult:
    """Output of a multiplier application.

    Attributes
    ----------
    output : BoundaryVector
        Samples on the target line.
    aliasing_indicator : float
        Fraction of post-multiplier energy in the top band.
    trusted : bool
        ``aliasing_indicator <= threshold``.
    threshold : float
    """

    output: BoundaryVector
    aliasing_indicator: float
    trusted: bool
    threshold: float = TRUST_THRESHOLD


def _denoise(coeffs: np.ndarray, noise_floor: float) -> np.ndarray:
    mag = np.abs(coeffs)
    peak = mag.max() if mag.size else 0
    if peak == 0:
        return np.zeros(coeffs.shape, dtype=bool)
    return mag > REAL(noise_floor) * peak


def top_band_fraction(t: np.ndarray, keep: np.ndarray, coeffs: np.ndarray) -> float:
    """Energy fraction of ``coeffs`` in the top 10% of the retained positive band."""
    if not np.any(keep):
        return 0.0
    energy = np.abs(coeffs) ** 2
    total = energy.sum()
    if total == 0:
        return 0.0
    t_kept = t[keep]
    lo = max(t_kept.min(), REAL(0))
    hi = t_kept.max()
    if hi <= lo:
        return 0.0
    cut = hi - REAL(TOP_BAND) * (hi - lo)
    frac = energy[keep & (t >= cut)].sum() / total
    return float(frac)


def _floor(noise_floor):
    return NOISE_FLOOR if noise_floor is None else noise_floor


def _multiplier_array(grid: StripGrid, samples: np.ndarray, mult: np.ndarray,
                      noise_floor: float | None):
    coeffs = _dft_array(grid, samples)
    keep = _denoise(coeffs, _floor(noise_floor))
    out_coeffs = np.where(keep, coeffs * mult, 0)
    indicator = top_band_fraction(grid.t, keep, out_coeffs)
    return _idft_array(grid, out_coeffs), indicator, out_coeffs


def exp_multiplier(grid: StripGrid, lam: float) -> np.ndarray:
    """``e^{-lam t_k}`` with the exponent clipped to stay finite."""
    expo = np.clip(-REAL(lam) * grid.t, -_EXP_CLIP, _EXP_CLIP)
    return np.exp(expo)


def _lam_value(lam) -> REAL:
    # snap the double -pi onto the longdouble constant so e^{pi t} is exact
    lam = REAL(lam)
    if abs(lam + PI) < 1e-12:
        return -PI
    return lam


def apply_multiplier(xi: BoundaryVector, mult, line: float = 0.0,
                     noise_floor: float | None = None,
                     threshold: float = TRUST_THRESHOLD) -> ContinuationResult:
    """Apply an arbitrary Fourier multiplier to ``xi`` with the aliasing guard.

    Parameters
    ----------
    xi : BoundaryVector
    mult : array_like
        Multiplier values on ``grid.t``.
    line : float
        Tag for the output vector.
    """
    grid = xi.grid
    mult = np.asarray(mult)
    if mult.shape != (grid.N,):
        raise InvalidParameterError("multiplier must match the frequency lattice")
    out, ind, _ = _multiplier_array(grid, xi.samples, mult, noise_floor)
    if not np.all(np.isfinite(out)):
        return ContinuationResult(grid.zeros(line), math.inf, False, threshold)
    return ContinuationResult(BoundaryVector(grid, out, line), ind, ind <= threshold,
                              threshold)


def continue_to(xi: BoundaryVector, lam: float, noise_floor: float | None = None,
                threshold: float = TRUST_THRESHOLD) -> ContinuationResult:
    """Continue ``xi`` from the real line to ``Im zeta = lam``.

    Parameters
    ----------
    xi : BoundaryVector
        Samples on line 0.
    lam : float
        Target offset in ``[-pi, 0]``; ``-pi`` realises ``Delta^{1/2}``.

    Returns
    -------
    ContinuationResult
    """
    if xi.line != 0.0:
        raise InvalidParameterError("continuation starts from the line Im zeta = 0")
    if not (-math.pi - 1e-12 <= lam <= 0.0):
        raise InvalidParameterError(f"lambda = {lam} outside [-pi, 0]")
    if lam == 0.0:
        return ContinuationResult(xi, 0.0, True, threshold)
    lam_ld = _lam_value(lam)
    res = apply_multiplier(xi, exp_multiplier(xi.grid, lam_ld), float(lam),
                           noise_floor, threshold)
    return res


def delta_half(xi: BoundaryVector, **kw) -> ContinuationResult:
    """``Delta^{1/2} xi = xi(. - pi i)``."""
    return continue_to(xi, -math.pi, **kw)


def hardy_membership(xi: BoundaryVector, tol: float = TRUST_THRESHOLD,
                     noise_floor: float | None = None) -> dict:
    """Test whether ``e^{pi t} xi_hat`` is square integrable on the grid.

    Returns
    -------
    dict
        ``member`` (bool) and ``defect``, the top-band energy fraction of
        ``e^{pi t} xi_hat``.
    """
    if xi.line != 0.0:
        raise InvalidParameterError("membership is tested on line 0")
    grid = xi.grid
    coeffs = _dft_array(grid, xi.samples)
    keep = _denoise(coeffs, _floor(noise_floor))
    amplified = np.where(keep, coeffs * exp_multiplier(grid, -PI), 0)
    finite = bool(np.all(np.isfinite(amplified)))
    if not finite:
        return {"member": False, "defect": math.inf}
    defect = top_band_fraction(grid.t, keep, amplified)
    return {"member": defect <= tol, "defect": defect}


def _evaluate_interpolant(grid: StripGrid, coeffs: np.ndarray, theta) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=REAL))
    phase = np.exp(1j * np.multiply.outer(theta, grid.t).astype(REAL))
    return phase @ coeffs * (REAL(grid.dt) / np.sqrt(2 * PI))


def pointwise_bound_check(xi: BoundaryVector, theta=None, lam: float = -math.pi / 2,
                          tol: float = TRUST_THRESHOLD) -> dict:
    """Compare ``|xi(theta + i lam)|`` with the interior bound.

    The bound is ``|xi| / sqrt(-4 pi lam) + |Delta^{1/2} xi| / sqrt(4 pi (pi + lam))``.

    Parameters
    ----------
    xi : BoundaryVector
        Member of H² sampled on line 0.
    theta : float or array_like, optional
        Evaluation abscissae.  ``None`` means every grid node.
    lam : float
        Strictly inside ``(-pi, 0)``.

    Returns
    -------
    dict
        ``value``, ``bound`` and ``margin = bound - value`` (arrays if
        ``theta`` is an array or ``None``).
    """
    if not (-math.pi < lam < 0):
        raise InvalidParameterError(f"lambda = {lam} must lie in (-pi, 0)")
    memb = hardy_membership(xi, tol)
    if not memb["member"]:
        raise MembershipError(f"vector is not in H^2 (defect {memb['defect']:.3g})")
    norm = l2_norm(xi)
    if norm == 0:
        shape = () if theta is not None and np.ndim(theta) == 0 else None
        z = 0.0 if shape == () else np.zeros(xi.grid.N if theta is None else np.size(theta))
        return {"value": z, "bound": 0.0, "margin": z}
    half = delta_half(xi)
    bound = (norm / math.sqrt(-4 * math.pi * lam)
             + l2_norm(half.output) / math.sqrt(4 * math.pi * (math.pi + lam)))
    if theta is None:
        value = np.abs(continue_to(xi, lam).output.samples).astype(float)
    else:
        grid = xi.grid
        coeffs = _dft_array(grid, xi.samples)
        keep = _denoise(coeffs, _floor(None))
        cont = np.where(keep, coeffs * exp_multiplier(grid, _lam_value(lam)), 0)
        value = np.abs(_evaluate_interpolant(grid, cont, theta)).astype(float)
        if np.ndim(theta) == 0:
            value = float(value[0])
    return {"value": value, "bound": bound, "margin": bound - value}


def j_conjugate(xi: BoundaryVector) -> BoundaryVector:
    """``(J xi)(theta) = conj(xi(-theta))`` on the periodic grid."""
    if xi.line != 0.0:
        raise InvalidParameterError("J acts on vectors on line 0")
    s = xi.samples
    idx = (-np.arange(xi.grid.N)) % xi.grid.N
    return BoundaryVector(xi.grid, np.conj(s[idx]), 0.0)
