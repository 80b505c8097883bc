"""Canonical self-adjoint extension for square symbols ``f = h^2``.

With ``f_out = h_out^2 = f_plus * f_minus``, the unimodular boundary symbol
``u = h_Bl * h_in * f_minus`` turns the extension into ``Delta^{1/2}``:
``A_f xi = conj(u) * Delta^{1/2}(u * xi)``.  Any function ``g`` of ``A_f`` is
the multiplier ``g(e^{pi t})`` conjugated by ``u``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, SymmetryAuditError
from .grid import (COMPLEX, REAL, BoundaryVector, StripGrid, _dft_array, _idft_array,
                   inner_product, l2_norm)
from .hardy import _denoise, _floor, delta_half, exp_multiplier, hardy_membership
from .sampling import max_sigma, random_h2_vector
from .symbols import (BlaschkeData, BlaschkeZero, OuterData, SingularData, SymbolSpec,
                      check_symmetry, polar_parts, _inner_boundary, _outer_poisson)

LOGGER = logging.getLogger(__name__)

UNIMODULAR_TOL = 1e-8


def square_spec(h: SymbolSpec) -> SymbolSpec:
    """The spec of ``f = h^2``: doubled zeros, masses and outer power."""
    zeros = tuple(BlaschkeZero(z.alpha, 2 * z.multiplicity) for z in h.blaschke.zeros)
    s = h.singular
    sing = SingularData(2 * s.a0, 2 * s.a_inf, tuple((a, 2 * w) for a, w in s.finite_atoms))
    return SymbolSpec(h.phase ** 2, BlaschkeData(zeros, h.blaschke.declared_infinite),
                      sing, h.outer.squared())


@dataclass(frozen=True)
class SquareSymbol:
    """A symbol given through its square root ``h``."""

    h: SymbolSpec

    @property
    def f(self) -> SymbolSpec:
        return square_spec(self.h)


@dataclass(frozen=True, eq=False)
class CanonicalExtension:
    grid: StripGrid
    u_on_0: BoundaryVector
    square: SquareSymbol


@dataclass(frozen=True)
class ExtensionResult:
    result: BoundaryVector
    in_domain: bool
    defect: float
    trusted: bool


def build_extension(sq: SquareSymbol, grid: StripGrid, tol: float = 1e-8) -> CanonicalExtension:
    """Sample ``u = h_Bl h_in f_minus`` on line 0.

    Raises
    ------
    SymmetryAuditError
        If ``h`` fails the boundary symmetry audit or ``u`` is not unimodular.
    """
    audit = check_symmetry(sq.h, grid, tol)
    if not audit["pass"]:
        raise SymmetryAuditError(
            f"square root h fails the symmetry audit (deviation {audit['max_deviation']:.3g})")
    inner0, _ = _inner_boundary(sq.h, grid.theta)
    f_out = sq.h.outer.squared()
    f_minus = f_out.minus_closed_form(grid.theta.astype(COMPLEX))
    if f_minus is None:
        # long double: double rounding noise would survive the denoise floor
        f_minus = _outer_poisson(f_out, np.exp(grid.theta) + 0j, "neg", extended=True)
    u = inner0 * f_minus
    dev = float(np.max(np.abs(np.abs(u) - 1)))
    if dev > UNIMODULAR_TOL:
        raise SymmetryAuditError(f"boundary symbol u is not unimodular (deviation {dev:.3g})")
    return CanonicalExtension(grid, BoundaryVector(grid, u, 0.0), sq)


def _check_grid(ext: CanonicalExtension, xi: BoundaryVector):
    if xi.grid != ext.grid or xi.line != 0.0:
        raise InvalidParameterError("vector must live on the extension's grid, line 0")


def apply_extension(ext: CanonicalExtension, xi: BoundaryVector) -> ExtensionResult:
    """``A_f xi = conj(u) Delta^{1/2}(u xi)`` with the domain verdict."""
    _check_grid(ext, xi)
    u = ext.u_on_0.samples
    w = BoundaryVector(ext.grid, u * xi.samples, 0.0)
    memb = hardy_membership(w)
    cont = delta_half(w)
    res = BoundaryVector(ext.grid, np.conj(u) * cont.output.samples, 0.0)
    return ExtensionResult(res, memb["member"], memb["defect"], cont.trusted)


def parse_spectral_function(text: str):
    """Parse ``identity``, ``square``, ``indicator:a,b`` or ``exp:c``.

    ``exp:c`` is ``g(x) = e^{c x}``, so ``exp:-2`` is a heat-type damping.
    """
    text = text.strip()
    if text == "identity":
        return lambda x: x
    if text == "square":
        return lambda x: x * x
    head, _, rest = text.partition(":")
    try:
        if head == "indicator":
            a, b = (float(v) for v in rest.split(","))
            if not a <= b:
                raise ValueError
            return lambda x: np.where((x >= a) & (x <= b), REAL(1), REAL(0))
        if head == "exp":
            c = REAL(float(rest))
            return lambda x: np.exp(c * x)
    except ValueError:
        pass
    raise InvalidParameterError(
        f"bad spectral function {text!r}; expected identity, square, indicator:a,b or exp:c")


def apply_spectral_function(ext: CanonicalExtension, g, xi: BoundaryVector) -> BoundaryVector:
    """``conj(u) * idft(g(e^{pi t}) * dft(u xi))``.

    Raises
    ------
    OverflowError
        If ``g`` is not finite on the occupied frequency band.
    """
    if isinstance(g, str):
        g = parse_spectral_function(g)
    _check_grid(ext, xi)
    grid = ext.grid
    u = ext.u_on_0.samples
    coeffs = _dft_array(grid, u * xi.samples)
    keep = _denoise(coeffs, _floor(None))
    with np.errstate(over="ignore", invalid="ignore"):
        mult = np.asarray(g(exp_multiplier(grid, -math.pi)), dtype=REAL)
    bad = keep & ~np.isfinite(mult)
    if np.any(bad):
        tb = grid.t[bad]
        raise OverflowError(
            f"g overflows on the occupied band t in [{float(tb.min()):.4g}, {float(tb.max()):.4g}]")
    out = np.where(keep, coeffs * np.where(keep, mult, 0), 0)
    return BoundaryVector(grid, np.conj(u) * _idft_array(grid, out), 0.0)


def symmetry_audit(ext: CanonicalExtension, trial_count: int = 50, seed: int = 42,
                   max_draws: int | None = None) -> float:
    """``max |<eta, A xi> - <A eta, xi>| / (|xi| |eta|)`` over in-domain pairs."""
    rng = np.random.default_rng(seed)
    max_draws = 20 * trial_count if max_draws is None else max_draws
    top = min(2.0, max_sigma(ext.grid))
    pool = []
    draws = 0
    while len(pool) < 2 * trial_count and draws < max_draws:
        draws += 1
        v = random_h2_vector(ext.grid, rng, sigma=rng.uniform(1.0, top))
        r = apply_extension(ext, v)
        if r.in_domain:
            pool.append((v, r.result))
    if len(pool) < 2:
        raise InvalidParameterError("could not draw in-domain trial vectors")
    worst = 0.0
    for i in range(0, len(pool) - 1, 2):
        (xi, axi), (eta, aeta) = pool[i], pool[i + 1]
        gap = abs(inner_product(eta, axi) - inner_product(aeta, xi))
        worst = max(worst, gap / (l2_norm(xi) * l2_norm(eta)))
    return worst


@dataclass(frozen=True)
class PolarDecomposition:
    unitary_symbol: BoundaryVector
    positive_part_symbol: OuterData


def polar_decomposition(spec: SymbolSpec, grid: StripGrid) -> PolarDecomposition:
    """Unitary factor ``conj(f_Bl f_in)`` on line 0 and the outer data."""
    unitary, outer = polar_parts(spec, grid)
    return PolarDecomposition(unitary, outer)
