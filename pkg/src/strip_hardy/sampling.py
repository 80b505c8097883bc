"""Seeded random trial vectors that lie in H² with margin."""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError
from .grid import COMPLEX, PI, REAL, BoundaryVector, StripGrid

CENTER_RANGE = 2.0
# envelope level at +-L; the periodic jump there is amplified by e^{pi t}
EDGE_LEVEL = 1e-20


def max_sigma(grid: StripGrid, center_range: float = CENTER_RANGE) -> float:
    """Widest envelope whose value at ``±L`` stays below ``EDGE_LEVEL``."""
    return (grid.L - center_range) / np.sqrt(-2 * np.log(EDGE_LEVEL))


def random_h2_vector(grid: StripGrid, rng: np.random.Generator, *, sigma: float = 1.2,
                     t_cap: float = 3.0, center: float | None = None,
                     normalize: bool = True) -> BoundaryVector:
    """Gaussian envelope times a random trigonometric polynomial.

    The polynomial uses the grid's own frequencies ``m * pi / L`` with
    ``|m * pi / L| <= t_cap``.  Its Fourier transform is a sum of Gaussians of
    width ``1/sigma``, so ``e^{pi t}`` stays moderate on the occupied band.

    Parameters
    ----------
    sigma : float
        Envelope width in rapidity, at most :func:`max_sigma`.  Below about 1
        the spectrum is wide enough that ``e^{pi t}`` pushes the top-band
        defect past the trust threshold.
    center : float, optional
        Envelope centre.  Drawn from ``[-2, 2]`` when omitted.

    Raises
    ------
    InvalidParameterError
        If the envelope is not below ``EDGE_LEVEL`` at ``±L``.
    """
    degree = max(1, int(t_cap * grid.L / np.pi))
    m = np.arange(-degree, degree + 1)
    coeffs = rng.standard_normal(m.size) + 1j * rng.standard_normal(m.size)
    if center is None:
        center = rng.uniform(-CENTER_RANGE, CENTER_RANGE)
    if sigma > max_sigma(grid, abs(center)):
        raise InvalidParameterError(
            f"envelope width {sigma:.3g} too wide for half width {grid.L:g}")
    th = grid.theta
    freqs = m.astype(REAL) * (PI / REAL(grid.L))
    poly = np.exp(1j * np.multiply.outer(th, freqs)) @ coeffs.astype(COMPLEX)
    env = np.exp(-((th - REAL(center)) ** 2) / (2 * REAL(sigma) ** 2))
    samples = poly * env
    if normalize:
        norm = np.sqrt(np.sum(np.abs(samples) ** 2) * REAL(grid.h))
        samples = samples / norm
    return BoundaryVector(grid, samples, 0.0)
