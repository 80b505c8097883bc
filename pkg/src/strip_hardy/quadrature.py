"""Double-exponential quadrature for Poisson integrals over half-lines.

The integrals have the form

    I(z) = \\int_{half} K(z, s) g(s) ds,   K(z, s) = (1 + z s) / ((1 + s^2)(z - s))

with ``z = e^zeta`` in the closed lower half plane.  After ``s = ±e^u`` the
integrand has a plateau between ``u = 0`` and ``u = log|z|`` and decays
exponentially outside it.  Each half-line is therefore cut at those two
points: tanh-sinh on the middle piece, exp-sinh on the tails.

When ``Re z`` lies on the half-line, ``g(Re z)`` is subtracted and its
integral added back in closed form.  That removes the pole for boundary
points (the Plemelj limit from below) and tames the near-pole for interior
points close to the boundary.
"""

from __future__ import annotations

import logging
import math
import os

import numpy as np

from .errors import InvalidParameterError, QuadratureError

LOGGER = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-11
_TS_SPAN = 3.2          # tanh-sinh abscissa range in tau
_ES_LEFT = -4.5         # exp-sinh approach to the finite endpoint
_ES_RIGHT = 1.68        # e^{(pi/2) sinh tau} reaches ~60 units past the endpoint
_CHUNK = 512
_PI_LD = np.longdouble("3.14159265358979323846264338327950288")


def max_nodes() -> int:
    """Node budget per evaluation point (``STRIP_HARDY_MAX_QUAD_NODES``)."""
    raw = os.environ.get("STRIP_HARDY_MAX_QUAD_NODES")
    if raw is None:
        return 2 ** 20
    try:
        val = int(raw)
    except ValueError as exc:
        raise InvalidParameterError(f"STRIP_HARDY_MAX_QUAD_NODES={raw!r} is not an integer") from exc
    if val < 16:
        raise InvalidParameterError("STRIP_HARDY_MAX_QUAD_NODES must be at least 16")
    return val


def log_strip(z: np.ndarray, pi=math.pi) -> np.ndarray:
    """``zeta = log z`` with ``Im zeta`` in ``[-pi, 0]``.

    A negative real ``z`` is read as the limit from below, so its
    logarithm lies on the line ``Im zeta = -pi``.
    """
    z = np.asarray(z)
    if z.dtype != np.clongdouble:
        z = z.astype(complex)
    if np.any(z.imag > 0):
        raise InvalidParameterError("z must lie in the closed lower half plane")
    ang = np.arctan2(z.imag, z.real)
    ang = np.where((z.imag == 0) & (z.real < 0), -pi, ang)
    return np.log(np.abs(z)) + 1j * ang


def _ts_nodes(step: float, real=np.float64):
    pi = _PI_LD if real is np.longdouble else math.pi
    k = np.arange(-math.ceil(_TS_SPAN / step), math.ceil(_TS_SPAN / step))
    tau = (k + real(0.5)) * real(step)
    y = pi / 2 * np.sinh(tau)
    frac = 1 / (1 + np.exp(-2 * y))
    e = np.exp(-2 * np.abs(y))
    sech2 = 4 * e / (1 + e) ** 2
    w = sech2 * (pi / 4) * np.cosh(tau) * real(step)
    return frac, w


def _es_nodes(step: float, real=np.float64):
    pi = _PI_LD if real is np.longdouble else math.pi
    k = np.arange(math.floor(_ES_LEFT / step), math.ceil(_ES_RIGHT / step))
    tau = (k + real(0.5)) * real(step)
    d = np.exp(pi / 2 * np.sinh(tau))
    w = d * (pi / 2) * np.cosh(tau) * real(step)
    return d, w


def _kernel_times_abs_s(z: np.ndarray, s: np.ndarray) -> np.ndarray:
    """``K(z, s) * |s|``, evaluated without overflow for large ``|s|``."""
    out = np.empty(np.broadcast(z, s).shape, dtype=np.result_type(z, s, complex))
    zb, sb = np.broadcast_arrays(z, s)
    small = np.abs(sb) <= 1.0
    zs, ss = zb[small], sb[small]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[small] = (1 + zs * ss) * np.abs(ss) / ((1 + ss * ss) * (zs - ss))
        zl, tl = zb[~small], 1.0 / sb[~small]
        out[~small] = np.abs(tl) * (tl + zl) / ((1 + tl * tl) * (zl * tl - 1))
    return np.where(np.isfinite(out), out, 0)


def _panels(z: np.ndarray, pivot: np.ndarray):
    a = np.minimum(0.0, pivot)
    b = np.maximum(0.0, pivot)
    return a, b


def _integrate_level(g, z, sign, gstar, lo, hi, step):
    real = np.longdouble if z.dtype == np.clongdouble else np.float64
    frac, wts = _ts_nodes(step, real)
    dist, wes = _es_nodes(step, real)
    width = (hi - lo)[:, None]
    u_mid = lo[:, None] + width * frac[None, :]
    w_mid = width * wts[None, :]
    u_left = lo[:, None] - dist[None, :]
    u_right = hi[:, None] + dist[None, :]
    total = np.zeros(z.shape, dtype=z.dtype)
    for u, w in ((u_mid, w_mid), (u_left, wes[None, :]), (u_right, wes[None, :])):
        s = sign * np.exp(np.clip(u, -700.0, 700.0))
        vals = _kernel_times_abs_s(z[:, None], s) * (g(s) - gstar[:, None])
        total += np.sum(vals * w, axis=1)
    nodes = frac.size + 2 * dist.size
    return total, nodes


def poisson_integral(g, z, half: str, subtract: bool = True,
                     rtol: float = DEFAULT_RTOL, budget: int | None = None,
                     extended: bool = False) -> np.ndarray:
    """Evaluate ``\\int_{half} K(z, s) g(s) ds``.

    Parameters
    ----------
    g : callable
        Vectorised real function of ``s``.  It is even by assumption, but it is
        only ever called on the requested half-line.
    z : array_like
        Points with ``Im z <= 0``.  Real ``z`` are boundary limits from below.
    half : {"pos", "neg", "full"}
    subtract : bool
        Apply the Plemelj subtraction at ``Re z``.  It is always applied for
        boundary points on the half-line.
    rtol : float
        Stop when successive dyadic levels differ by at most
        ``rtol * max(1, |I|)``.
    extended : bool
        Work in ``longdouble``.  The truncation error is smooth in ``z``, but
        double rounding leaves white noise that ``e^{pi t}`` amplifies.

    Raises
    ------
    QuadratureError
        When the node budget is exhausted before convergence.
    """
    if half == "full":
        return (poisson_integral(g, z, "pos", subtract, rtol, budget, extended)
                + poisson_integral(g, z, "neg", subtract, rtol, budget, extended))
    if half not in ("pos", "neg"):
        raise InvalidParameterError(f"unknown half-line {half!r}")
    ctype = np.clongdouble if extended else complex
    pi = _PI_LD if extended else math.pi
    z = np.atleast_1d(np.asarray(z, dtype=ctype))
    if np.any(z == 0):
        raise InvalidParameterError("z = 0 is not an image of the strip")
    budget = max_nodes() if budget is None else budget
    sign = 1.0 if half == "pos" else -1.0
    zeta = log_strip(z, pi)
    on_half = sign * z.real > 0
    use_sub = on_half & (subtract | (z.imag == 0))
    sstar = np.where(use_sub, z.real, sign)
    gstar = np.where(use_sub, g(sstar), 0)
    base = (zeta + 1j * pi) if half == "pos" else -zeta
    pivot = np.where(use_sub, np.log(np.abs(sstar)), np.log(np.abs(z)))
    lo, hi = _panels(z, pivot)

    out = np.empty(z.shape, dtype=ctype)
    for start in range(0, z.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        step = 0.5
        prev, _ = _integrate_level(g, z[sl], sign, gstar[sl], lo[sl], hi[sl], step)
        while True:
            step /= 2
            cur, nodes = _integrate_level(g, z[sl], sign, gstar[sl], lo[sl], hi[sl], step)
            if not np.all(np.isfinite(cur)):
                raise QuadratureError("non-finite Poisson integrand")
            change = np.max(np.abs(cur - prev) / np.maximum(1.0, np.abs(cur)))
            if change <= rtol:
                break
            if 2 * nodes > budget:
                raise QuadratureError(
                    f"Poisson quadrature did not converge: change {change:.3g} "
                    f"after {nodes} nodes (budget {budget})")
            prev = cur
        out[sl] = cur
    return out + gstar * base


def log_mass(g, rtol: float = 1e-9) -> float:
    """``\\int |g(s)| / (1 + s^2) ds`` over the real line, by the same rule."""
    total = 0.0
    for sign in (1.0, -1.0):
        step = 0.5
        prev = None
        while True:
            dist, w = _es_nodes(step)
            u = np.concatenate([-dist[::-1], dist])
            ww = np.concatenate([w[::-1], w])
            s = sign * np.exp(np.clip(u, -700.0, 700.0))
            val = np.sum(np.abs(g(s)) * np.abs(s) / (1 + s * s) * ww)
            if prev is not None and abs(val - prev) <= rtol * max(1.0, abs(val)):
                break
            if 4 * dist.size > max_nodes() or not math.isfinite(val):
                raise QuadratureError("log-mass quadrature did not converge")
            prev = val
            step /= 2
        total += val
    return float(total)
