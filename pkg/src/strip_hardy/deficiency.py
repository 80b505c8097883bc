"""Deficiency indices, explicit deficiency vectors and eigenvalue checks.

The vectors solve the eigenvalue equation

    f(theta - pi i) g(theta - pi i) = ±i g(theta)

for the operator ``M_fbar Delta^{1/2}``.  Residuals are measured through
:func:`strip_hardy.hardy.continue_to`, so they inherit its trust flag.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError
from .grid import COMPLEX, PI, REAL, BoundaryVector, StripGrid, l2_norm
from .hardy import delta_half, hardy_membership
from .sampling import max_sigma, random_h2_vector
from .symbols import (BlaschkeData, OuterData, SingularData, SymbolSpec,
                      boundary_values, boundary_values_at, exp_strip)

LOGGER = logging.getLogger(__name__)

INFINITE = math.inf
RESIDUAL_TOL = 1e-5
TAIL_TOL = 1e-12


@dataclass(frozen=True)
class FactorClass:
    blaschke_count: float
    singular_nontrivial: bool
    outer_admissible: bool


@dataclass(frozen=True)
class DeficiencyIndices:
    """``(n_plus, n_minus)``; ``math.inf`` marks an infinite index."""

    n_plus: float
    n_minus: float
    determined: bool = True
    note: str = ""

    def __str__(self):
        if not self.determined:
            return "not determined"

        def fmt(x):
            return "∞" if x == INFINITE else str(int(x))
        return f"({fmt(self.n_plus)},{fmt(self.n_minus)})"

    @property
    def equal(self) -> bool:
        return self.determined and self.n_plus == self.n_minus


@dataclass(frozen=True)
class ResidualResult:
    residual: float
    trusted: bool
    member: bool
    defect: float
    degenerate: bool = False


@dataclass(frozen=True)
class DeficiencyVector:
    """One solution of the eigenvalue equation, unit normalised on the grid.

    ``analytic_residual`` repeats the check with both sides taken from the
    closed-form expression of the vector on the line ``-pi`` instead of the
    FFT continuation.  It verifies the sign rule independently of the
    multiplier discretisation.
    """

    k: int
    eigenvalue: complex
    samples: BoundaryVector
    residual: float
    trusted: bool
    member: bool = True
    analytic_residual: float | None = None
    tags: tuple = ()


def classify(spec: SymbolSpec) -> FactorClass:
    b = spec.blaschke
    count = INFINITE if b.declared_infinite else b.count
    return FactorClass(count, spec.singular.nontrivial(), spec.outer.admissible)


def deficiency_indices(cls: FactorClass) -> DeficiencyIndices:
    """Index table for ``M_fbar Delta^{1/2}``.

    Nontrivial singular part or an infinite Blaschke family gives
    ``(inf, inf)``.  A finite count ``2m`` gives ``(m, m)`` and ``2m + 1``
    gives ``(m + 1, m)``.  Without an admissible outer factor the table does
    not apply.
    """
    if not cls.outer_admissible:
        return DeficiencyIndices(INFINITE, INFINITE, False,
                                 "indices-not-determined-by-theorem")
    if cls.singular_nontrivial or cls.blaschke_count == INFINITE:
        return DeficiencyIndices(INFINITE, INFINITE)
    n = int(cls.blaschke_count)
    m = n // 2
    return DeficiencyIndices(m + (n % 2), m)


# ------------------------------------------------------------------ residuals

def _symbol_on_line0(symbol, grid: StripGrid) -> np.ndarray:
    if isinstance(symbol, BoundaryVector):
        if symbol.grid != grid:
            raise InvalidParameterError("symbol samples live on another grid")
        return symbol.samples
    return boundary_values(symbol, grid)[0]


def eigenvalue_residual(symbol, v: BoundaryVector, eigenvalue: complex,
                        grid: StripGrid | None = None) -> ResidualResult:
    """``|Delta^{1/2}(f v) - eigenvalue * v| / |v|``.

    Parameters
    ----------
    symbol : SymbolSpec, callable or BoundaryVector
        The symbol, or its samples on line 0.
    v : BoundaryVector
        Candidate vector on line 0.
    eigenvalue : complex
        Usually ``±1j``.
    """
    grid = v.grid if grid is None else grid
    norm = l2_norm(v)
    if norm == 0:
        return ResidualResult(0.0, True, True, 0.0, degenerate=True)
    w = BoundaryVector(grid, _symbol_on_line0(symbol, grid) * v.samples, 0.0)
    memb = hardy_membership(w)
    cont = delta_half(w)
    diff = cont.output.samples - COMPLEX(eigenvalue) * v.samples
    res = float(np.sqrt(np.sum(np.abs(diff) ** 2) * REAL(grid.h))) / norm
    return ResidualResult(res, cont.trusted, memb["member"], memb["defect"])


def apply_symbol_operator(symbol, xi: BoundaryVector):
    """``conj(f) * Delta^{1/2} xi`` together with the continuation trust flag."""
    f0 = _symbol_on_line0(symbol, xi.grid)
    cont = delta_half(xi)
    return BoundaryVector(xi.grid, np.conj(f0) * cont.output.samples, 0.0), cont.trusted


def _relative_gap(lhs: np.ndarray, rhs: np.ndarray, ref: np.ndarray, h: float) -> float:
    num = np.sqrt(np.sum(np.abs(lhs - rhs) ** 2))
    den = np.sqrt(np.sum(np.abs(ref) ** 2))
    return float(num / den) if den else 0.0


def _build_vector(symbol_samples, symbol_fpi, grid, k, eig, values, values_fpi, tags):
    norm = np.sqrt(np.sum(np.abs(values) ** 2) * REAL(grid.h))
    if not np.isfinite(norm) or norm == 0:
        raise InvalidParameterError("deficiency vector is not square integrable on the grid")
    vec = BoundaryVector(grid, values / norm, 0.0)
    rr = eigenvalue_residual(BoundaryVector(grid, symbol_samples, 0.0), vec, eig)
    analytic = None
    if values_fpi is not None:
        analytic = _relative_gap(symbol_fpi * values_fpi, eig * values, values, grid.h)
    return DeficiencyVector(k, eig, vec, rr.residual, rr.trusted, rr.member, analytic, tags)


def blaschke_vector_values(alphas, k: int, zeta) -> np.ndarray:
    """``e^{(k+1/2) zeta} / prod (e^zeta - e^{alpha_j})`` evaluated stably."""
    zeta = np.asarray(zeta, dtype=COMPLEX)
    z = exp_strip(zeta)
    n = len(alphas)
    big = zeta.real > 0
    out = np.exp((REAL(k) + REAL(0.5) - np.where(big, n, 0)) * zeta)
    for a in alphas:
        ea = exp_strip(np.asarray(a))
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = 1 - ea * np.where(big, 1 / np.where(big, z, 1), 0)
        out = out / np.where(big, scaled, z - ea)
    return out


def blaschke_deficiency_basis(data: BlaschkeData, grid: StripGrid) -> list[DeficiencyVector]:
    """Vectors ``xi_k`` for ``0 <= k < n``, with eigenvalue ``(-1)^{n+k+1} i``."""
    if data.declared_infinite:
        raise InvalidParameterError("use midline_truncated_basis for declared-infinite families")
    alphas = data.alphas()
    n = len(alphas)
    if n == 0:
        return []
    spec = SymbolSpec(blaschke=BlaschkeData(data.zeros))
    f0, fpi = boundary_values(spec, grid)
    th = grid.theta.astype(COMPLEX)
    out = []
    for k in range(n):
        eig = (-1) ** (n + k + 1) * 1j
        vals = blaschke_vector_values(alphas, k, th)
        vals_pi = blaschke_vector_values(alphas, k, th - 1j * PI)
        out.append(_build_vector(f0, fpi, grid, k, eig, vals, vals_pi, ("blaschke",)))
    return out


def midline_truncated_basis(data: BlaschkeData, grid: StripGrid, k_list) -> list[DeficiencyVector]:
    """Truncated-product vectors for a declared-infinite midline family.

    Writing ``e^{alpha_j} = i gamma_j`` with ``gamma_j < 0``, zeros with
    ``gamma <= -1`` enter as ``-i gamma / (e^theta - i gamma)`` and those with
    ``-1 < gamma < 0`` as ``e^theta / (e^theta - i gamma)``.  The residual is
    measured against the product over the listed zeros only.  That product is
    the symmetric-convention Blaschke factor, in which ``xi_k`` carries
    eigenvalue ``(-1)^{n + k + m + 1} i`` with ``m`` the number of zeros with
    ``gamma > -1``.
    """
    if not data.declared_infinite:
        raise InvalidParameterError("midline truncation needs declared_infinite = true")
    alphas = data.alphas()
    if any(abs(a.imag + math.pi / 2) > 1e-9 for a in alphas):
        raise InvalidParameterError("all listed zeros must lie on the midline Im alpha = -pi/2")
    k_list = list(k_list)
    if not k_list:
        return []
    n = len(alphas)
    gammas = [-math.exp(a.real) for a in alphas]
    m_minus = sum(1 for g in gammas if g > -1)
    spec = SymbolSpec(blaschke=BlaschkeData(data.zeros))
    f0, fpi = boundary_values(spec, grid)
    th = grid.theta.astype(COMPLEX)
    out = []
    for k in k_list:
        shift = k + m_minus
        if not 0 <= shift < n:
            raise InvalidParameterError(
                f"k = {k} gives a truncated vector outside L^2 (need {-m_minus} <= k < {n - m_minus})")
        eig = (-1) ** (n + shift + 1) * 1j

        def values(zeta):
            z = exp_strip(zeta)
            v = np.exp((REAL(k) + REAL(0.5)) * zeta)
            for g in gammas:
                ig = 1j * REAL(g)
                v = v * ((-ig) / (z - ig) if g <= -1 else z / (z - ig))
            return v

        out.append(_build_vector(f0, fpi, grid, k, eig, values(th), values(th - 1j * PI),
                                 ("truncated",)))
    return out


# ------------------------------------------------------------ atomic singular

def _bump(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def mollifier(t, width: float) -> np.ndarray:
    """``kappa(t) = b(t/w) - 2 b(2t/w)``: even, supported in ``(-w, w)``, zero mean."""
    t = np.asarray(t, dtype=float)
    return _bump(t / width) - 2 * _bump(2 * t / width)


@lru_cache(maxsize=16)
def _mollifier_rule(width: float, nodes: int):
    t = np.linspace(0.0, width, nodes + 1)
    w = np.full(t.size, width / nodes)
    w[0] *= 0.5
    w[-1] *= 0.5
    return t, w * mollifier(t, width)


def mollifier_mean(width: float, nodes: int = 4096) -> float:
    """``\\int kappa`` by the trapezoid rule (spectrally accurate here)."""
    _, wk = _mollifier_rule(width, nodes)
    return float(2 * np.sum(wk))


def mollifier_transform(p, width: float, p_max: float | None = None) -> np.ndarray:
    """``kappa_hat(p) = (2/sqrt(2 pi)) \\int_0^w cos(p t) kappa(t) dt`` for real ``p``.

    The rule resolves ``cos(p_max t)`` with 16 nodes per half period.  Values
    where the decaying envelope of ``kappa_hat`` has fallen below the
    summation noise are set to 0, since they are rounding error.
    """
    p = np.abs(np.asarray(p, dtype=float))
    if p_max is None:
        p_max = float(p.max()) if p.size else 1.0
    nodes = int(min(2 ** 17, max(1024, 16 * math.ceil(p_max * width / math.pi))))
    t, wk = _mollifier_rule(width, nodes)
    noise = 1e3 * np.finfo(float).eps * np.sum(np.abs(wk))
    flat = p.ravel()
    vals = np.empty(flat.size)
    for start in range(0, flat.size, 256):
        blk = flat[start:start + 256]
        vals[start:start + 256] = np.cos(np.multiply.outer(blk, t)) @ wk
    vals *= 2 / math.sqrt(2 * math.pi)
    order = np.argsort(flat)
    env = np.maximum.accumulate(np.abs(vals[order])[::-1])[::-1]
    dead = np.empty(flat.size, dtype=bool)
    dead[order] = env < noise
    vals[dead] = 0.0
    return vals.reshape(p.shape)


def _kappa_cutoff(width: float) -> float:
    # |kappa_hat(p)| ~ exp(-sqrt(w p)) scale; beyond this it is below 1e-18
    return 4.0e3 / width


def atomic_singular_deficiency_vectors(singular: SingularData, grid: StripGrid,
                                       n_list) -> list[DeficiencyVector]:
    """Vectors ``xi_{kappa,n}`` for singular symbols with atoms at 0 or infinity.

    With ``a0 > 0`` and ``p = e^{-theta}``,
    ``xi = kappa_hat(p) exp(-i a0 p / 2 + i a_inf e^theta / 2) p^{n+1/2}`` with
    eigenvalue ``(-1)^n i`` and ``kappa`` of width ``a0/4``.  With only
    ``a_inf > 0`` the construction is mirrored through ``theta -> -theta``.
    That gives ``xi = kappa_hat(q) exp(i a_inf q / 2) q^{n+1/2}`` with
    ``q = e^theta`` and eigenvalue ``(-1)^{n+1} i``.
    """
    if singular.finite_atoms:
        raise InvalidParameterError("explicit vectors exist only for atoms at 0 and infinity")
    a0, ainf = singular.a0, singular.a_inf
    if a0 == 0 and ainf == 0:
        raise InvalidParameterError("singular part is trivial: need a0 > 0 or a_inf > 0")
    n_list = list(n_list)
    if any(int(n) != n or n < 0 for n in n_list):
        raise InvalidParameterError("n values must be nonnegative integers")
    spec = SymbolSpec(singular=singular)
    f0, fpi = boundary_values(spec, grid)
    th = grid.theta
    mirrored = a0 == 0
    width = (ainf if mirrored else a0) / 4
    p = np.exp(th) if mirrored else np.exp(-th)
    cutoff = _kappa_cutoff(width)
    live = p <= cutoff
    kh = np.zeros(grid.N)
    if np.any(live):
        kh[live] = mollifier_transform(p[live].astype(float), width, float(p[live].max()))
    kh = kh.astype(REAL)
    pr = p.astype(REAL)
    if mirrored:
        phase = np.exp(1j * REAL(ainf) * pr / 2)
        phase_pi = np.exp(-1j * REAL(ainf) * pr / 2)
    else:
        eth = np.exp(th)
        phase = np.exp(-1j * REAL(a0) * pr / 2 + 1j * REAL(ainf) * eth / 2)
        # on the lower line e^{-zeta} -> -p and e^{zeta} -> -e^theta
        phase_pi = np.exp(1j * REAL(a0) * pr / 2 - 1j * REAL(ainf) * eth / 2)
    out = []
    for n in n_list:
        n = int(n)
        powr = np.where(kh != 0, pr ** (REAL(n) + REAL(0.5)), 0)
        vals = (kh * powr * phase).astype(COMPLEX)
        rot = np.exp(-1j * PI * (REAL(n) + REAL(0.5))) if mirrored else np.exp(1j * PI * (REAL(n) + REAL(0.5)))
        vals_pi = (kh * powr * phase_pi * rot).astype(COMPLEX)
        eig = ((-1) ** (n + 1) if mirrored else (-1) ** n) * 1j
        peak = np.max(np.abs(vals))
        if not (abs(vals[0]) <= TAIL_TOL * peak and abs(vals[-1]) <= TAIL_TOL * peak):
            raise InvalidParameterError("xi_{kappa,n} does not decay at the grid edges; enlarge L")
        tags = ("atomic", "mirrored") if mirrored else ("atomic",)
        out.append(_build_vector(f0, fpi, grid, n, eig, vals, vals_pi, tags))
    return out


def gram_min_eigenvalue(vectors) -> float:
    """Smallest eigenvalue of the Gram matrix of unit-normalised vectors."""
    if not vectors:
        return math.inf
    mat = np.array([v.samples.samples if isinstance(v, DeficiencyVector) else v.samples
                    for v in vectors])
    h = mat.shape and (vectors[0].samples.grid.h if isinstance(vectors[0], DeficiencyVector)
                       else vectors[0].grid.h)
    gram = (np.conj(mat) @ mat.T).astype(complex) * h
    return float(np.linalg.eigvalsh(gram).min())


# ------------------------------------------------------------------ criteria

@dataclass(frozen=True)
class PerturbationResult:
    passes: bool
    r: float | None
    worst_point: float


def perturbation_criterion(symbol, grid: StripGrid, zero_tol: float = 1e-12) -> PerturbationResult:
    """Disc condition ``|conj f(theta) - r| <= r`` on the grid.

    Passes when ``Re conj f > zero_tol`` wherever ``|f| > zero_tol``.  Then
    ``r* = max |f|^2 / (2 Re conj f)`` is the smallest admissible radius.
    """
    f0 = boundary_values(symbol, grid)[0]
    th = grid.theta.astype(float)
    re = np.real(np.conj(f0)).astype(float)
    mag2 = (np.abs(f0) ** 2).astype(float)
    live = np.sqrt(mag2) > zero_tol
    if not np.any(live):
        return PerturbationResult(False, None, float(th[0]))
    bad = live & (re <= zero_tol)
    if np.any(bad):
        idx = int(np.argmin(np.where(live, re, np.inf)))
        return PerturbationResult(False, None, float(th[idx]))
    ratio = np.where(live, mag2 / (2 * np.where(live, re, 1)), -np.inf)
    idx = int(np.argmax(ratio))
    r = float(ratio[idx])
    return PerturbationResult(math.isfinite(r), r, float(th[idx]))


@dataclass(frozen=True)
class VonNeumannResult:
    commutes: bool
    max_deviation: float


def von_neumann_check(symbol, grid: StripGrid, tol: float = 1e-8) -> VonNeumannResult:
    """``max |conj f(theta) - f(-theta)|`` over the grid nodes."""
    th = grid.theta
    f_pos = boundary_values_at(symbol, th)[0]
    f_neg = boundary_values_at(symbol, -th)[0]
    dev = float(np.max(np.abs(np.conj(f_pos) - f_neg)))
    return VonNeumannResult(dev <= tol, dev)


@dataclass(frozen=True)
class EigenSearchResult:
    min_residual: float
    best_eigenvalue: complex
    trials: int
    residuals: tuple = field(default=(), repr=False)


def eigenvector_search(symbol, grid: StripGrid, trials: int = 200, seed: int = 42,
                       sigma_range=None) -> EigenSearchResult:
    """Random search for approximate solutions of the eigenvalue equation.

    Each trial is a random H² vector with a random envelope width.  The
    smallest residual for either ``+i`` or ``-i`` is reported.
    """
    rng = np.random.default_rng(seed)
    if sigma_range is None:
        sigma_range = (1.0, min(3.0, max_sigma(grid)))
    f0 = BoundaryVector(grid, boundary_values(symbol, grid)[0], 0.0)
    best, best_eig, all_res = math.inf, 1j, []
    for _ in range(trials):
        sigma = rng.uniform(*sigma_range)
        v = random_h2_vector(grid, rng, sigma=sigma)
        for eig in (1j, -1j):
            r = eigenvalue_residual(f0, v, eig).residual
            all_res.append(r)
            if r < best:
                best, best_eig = r, eig
    return EigenSearchResult(best, best_eig, trials, tuple(all_res))
