"""Beurling factorization data and evaluators for symmetric symbols.

A symbol is ``f = c * f_Bl * f_in * f_out`` on the strip ``R + i(-pi, 0)``,
written in terms of ``z = e^zeta``, which maps the strip onto the lower half
plane.

* ``f_Bl(zeta) = prod (z - e^{alpha}) / (z - e^{conj alpha})``
* ``f_in(zeta) = exp(i a0 / z - i a_inf z + i sum_j w_j/(1+s_j^2) (1 + z s_j)/(z - s_j))``
* ``f_out(zeta) = exp(-(i/pi) \\int ds/(1+s^2) (1 + z s)/(z - s) log phi(s))``

With ``Im z < 0`` the minus sign in ``f_out`` is what makes
``|f_out| = phi`` on the boundary.

Inner factors and the builtin outer kernels are evaluated in ``longdouble``.
Tabulated kernels go through the double precision quadrature in
:mod:`strip_hardy.quadrature`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (InadmissibleOuterError, InvalidParameterError,
                     PoleProximityError, QuadratureError)
from .grid import COMPLEX, PI, REAL, BoundaryVector, StripGrid
from .quadrature import log_mass, log_strip, poisson_integral

LOGGER = logging.getLogger(__name__)

DELTA_MIN = 1e-6
PAIR_TOL = 1e-9
ATOM_POLE_TOL = 1e-10
OUTER_KINDS = ("constant", "sech_alpha", "gauss_strip", "table")
TABLE_DECAYS = ("constant", "loglinear")


def exp_strip(zeta) -> np.ndarray:
    """``e^zeta`` in longdouble with the two boundary lines kept exactly real."""
    zeta = np.asarray(zeta, dtype=COMPLEX)
    x, y = zeta.real.astype(REAL), zeta.imag.astype(REAL)
    mag = np.exp(x)
    on_top = y == 0
    on_bottom = np.abs(y + PI) < 1e-12
    out = mag * (np.cos(y) + 1j * np.sin(y))
    out = np.where(on_top, mag + 0j, out)
    out = np.where(on_bottom, -mag + 0j, out)
    return out.astype(COMPLEX)


@dataclass(frozen=True)
class BlaschkeZero:
    """A zero ``alpha`` of the Blaschke factor with its multiplicity."""

    alpha: complex
    multiplicity: int = 1

    def __post_init__(self):
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise InvalidParameterError("Blaschke zero must be finite")
        if not (-math.pi < a.imag < 0):
            raise InvalidParameterError(f"Blaschke zero {a} is outside the open strip")
        if min(-a.imag, a.imag + math.pi) < DELTA_MIN:
            raise InvalidParameterError(
                f"Blaschke zero {a} is closer than {DELTA_MIN} to the boundary")
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise InvalidParameterError("multiplicity must be a positive integer")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "multiplicity", int(self.multiplicity))

    @property
    def partner(self) -> complex:
        return self.alpha.conjugate() - 1j * math.pi

    @property
    def on_midline(self) -> bool:
        return abs(self.alpha.imag + math.pi / 2) <= PAIR_TOL


def _pairing_ok(alphas: list[complex], tol: float = PAIR_TOL) -> bool:
    pool = list(alphas)
    while pool:
        a = pool.pop()
        if abs(a.imag + math.pi / 2) <= tol:
            continue
        target = a.conjugate() - 1j * math.pi
        dist = [abs(b - target) for b in pool]
        if not dist or min(dist) > tol:
            return False
        pool.pop(int(np.argmin(dist)))
    return True


@dataclass(frozen=True)
class BlaschkeData:
    """Listed Blaschke zeros, optionally a truncation of an infinite family."""

    zeros: tuple = ()
    declared_infinite: bool = False

    def __post_init__(self):
        zs = tuple(z if isinstance(z, BlaschkeZero) else BlaschkeZero(*z)
                   for z in self.zeros)
        object.__setattr__(self, "zeros", zs)
        if not _pairing_ok(self.alphas()):
            raise InvalidParameterError(
                "Blaschke zeros must pair alpha with conj(alpha) - pi i "
                "or lie on the midline Im alpha = -pi/2")

    def alphas(self) -> list[complex]:
        return [z.alpha for z in self.zeros for _ in range(z.multiplicity)]

    @property
    def count(self) -> int:
        return sum(z.multiplicity for z in self.zeros)


@dataclass(frozen=True)
class SingularData:
    """Point masses of the singular measure: at 0, at infinity, and finite atoms."""

    a0: float = 0.0
    a_inf: float = 0.0
    finite_atoms: tuple = ()

    def __post_init__(self):
        for name in ("a0", "a_inf"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0):
                raise InvalidParameterError(f"{name} must be a finite nonnegative number")
            object.__setattr__(self, name, v)
        atoms = []
        for s, w in self.finite_atoms:
            s, w = float(s), float(w)
            if s == 0 or not math.isfinite(s):
                raise InvalidParameterError("finite atoms need s != 0")
            if not (w > 0 and math.isfinite(w)):
                raise InvalidParameterError("atom weights must be positive")
            atoms.append((s, w))
        atoms = tuple(sorted(atoms))
        mirrored = sorted((-s, w) for s, w in atoms)
        if any(abs(a[0] - b[0]) > PAIR_TOL or abs(a[1] - b[1]) > PAIR_TOL * max(1, a[1])
               for a, b in zip(atoms, mirrored)):
            raise InvalidParameterError(
                "finite atoms must be symmetric under s -> -s with equal weights")
        object.__setattr__(self, "finite_atoms", atoms)

    def nontrivial(self) -> bool:
        return self.a0 > 0 or self.a_inf > 0 or bool(self.finite_atoms)


def _logcosh_sq_plus(x: np.ndarray, c2: float) -> np.ndarray:
    """``log(sinh(x)^2 + c2)`` without overflow."""
    ax = np.abs(x)
    e = np.exp(-2 * ax)
    return 2 * ax - 2 * math.log(2) + np.log((1 - e) ** 2 + 4 * c2 * e)


@dataclass(frozen=True)
class OuterData:
    """Outer factor given by its boundary log-modulus kernel ``log phi``.

    Parameters
    ----------
    kind : {"constant", "sech_alpha", "gauss_strip", "table"}
    params : dict
        ``{"c": c}`` for ``constant``, ``{"alpha": a}`` for ``sech_alpha``,
        nothing for ``gauss_strip``, and ``{"s": [...], "log_phi": [...],
        "decay": "constant" | "loglinear"}`` for ``table``.
    admissible : bool
        Declared growth estimate for ``1/f_out``.
    power : int
        The factor is the ``power``-th power of the kernel's outer function.
    """

    kind: str = "constant"
    params: dict = field(default_factory=dict)
    admissible: bool = True
    power: int = 1

    def __post_init__(self):
        if self.kind not in OUTER_KINDS:
            raise InvalidParameterError(f"unknown outer kind {self.kind!r}")
        if int(self.power) != self.power or self.power < 1:
            raise InvalidParameterError("outer power must be a positive integer")
        p = dict(self.params)
        if self.kind == "constant":
            c = float(p.get("c", 1.0))
            if not (c > 0 and math.isfinite(c)):
                raise InvalidParameterError("constant outer kernel needs c > 0")
            p = {"c": c}
        elif self.kind == "sech_alpha":
            a = float(p.get("alpha", math.nan))
            if not (0 < a < 1):
                raise InvalidParameterError("sech_alpha needs alpha in (0, 1)")
            p = {"alpha": a}
        elif self.kind == "gauss_strip":
            p = {}
        else:
            p = self._validate_table(p)
        object.__setattr__(self, "params", p)
        object.__setattr__(self, "admissible", bool(self.admissible))
        object.__setattr__(self, "power", int(self.power))
        if self.kind == "table":
            try:
                mass = log_mass(self.log_phi)
            except QuadratureError as exc:
                raise InvalidParameterError(f"log phi is not integrable: {exc}") from exc
            if not math.isfinite(mass):
                raise InvalidParameterError("log phi is not integrable against ds/(1+s^2)")

    def __hash__(self):
        items = tuple(sorted((k, tuple(v) if isinstance(v, (list, tuple)) else v)
                             for k, v in self.params.items()))
        return hash((self.kind, items, self.admissible, self.power))

    @staticmethod
    def _validate_table(p: dict) -> dict:
        try:
            s = [float(x) for x in p["s"]]
            lp = [float(x) for x in p["log_phi"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameterError("table kernel needs numeric 's' and 'log_phi' lists") from exc
        if len(s) != len(lp):
            raise InvalidParameterError("table 's' and 'log_phi' differ in length")
        decay = p.get("decay", "constant")
        if decay not in TABLE_DECAYS:
            raise InvalidParameterError(f"table decay must be one of {TABLE_DECAYS}")
        pos = {x: y for x, y in zip(s, lp) if x > 0}
        for x, y in zip(s, lp):
            if x < 0:
                match = [v for k, v in pos.items() if abs(k + x) <= 1e-12 * max(1, abs(x))]
                if not match or abs(match[0] - y) > 1e-9 * max(1, abs(y)):
                    raise InvalidParameterError(
                        f"table kernel is not even: no matching value at s = {-x}")
            elif x == 0 or not (math.isfinite(x) and math.isfinite(y)):
                raise InvalidParameterError("table abscissae must be finite and nonzero")
        xs = sorted(pos)
        if len(xs) < 4:
            raise InvalidParameterError("table kernel needs at least 4 positive abscissae")
        return {"s": tuple(xs), "log_phi": tuple(pos[x] for x in xs), "decay": decay}

    @property
    def is_builtin(self) -> bool:
        return self.kind != "table"

    @property
    def trivial(self) -> bool:
        return self.kind == "constant" and self.params["c"] == 1.0

    def squared(self) -> "OuterData":
        return OuterData(self.kind, dict(self.params), self.admissible, 2 * self.power)

    @cached_property
    def _spline(self):
        u = np.log(np.asarray(self.params["s"]))
        return CubicSpline(u, np.asarray(self.params["log_phi"]))

    def _table_log_phi(self, u: np.ndarray) -> np.ndarray:
        sp = self._spline
        u0, u1 = sp.x[0], sp.x[-1]
        inside = sp(np.clip(u, u0, u1))
        if self.params["decay"] == "constant":
            return inside
        d0, d1 = sp(u0, 1), sp(u1, 1)
        return np.where(u < u0, sp(u0) + d0 * (u - u0),
                        np.where(u > u1, sp(u1) + d1 * (u - u1), inside))

    def log_phi(self, s) -> np.ndarray:
        """Boundary log-modulus ``log |f_out|`` at ``theta = log|s|`` (even in ``s``)."""
        s = np.asarray(s)
        s = s.astype(REAL if s.dtype in (np.longdouble, np.clongdouble) else float)
        u = np.log(np.abs(s))
        if self.kind == "constant":
            val = np.full(u.shape, math.log(self.params["c"]))
        elif self.kind == "sech_alpha":
            a = self.params["alpha"]
            val = -0.5 * _logcosh_sq_plus(a * u, math.cos(a * math.pi / 2) ** 2)
        elif self.kind == "gauss_strip":
            val = math.pi ** 2 / 4 - u * u
        else:
            val = self._table_log_phi(u)
        return self.power * val

    def closed_form(self, zeta) -> np.ndarray:
        """Builtin kernels in closed form anywhere in the closed strip."""
        zeta = np.asarray(zeta, dtype=COMPLEX)
        p = self.power
        if self.kind == "constant":
            return np.full(zeta.shape, REAL(self.params["c"]) ** p, dtype=COMPLEX)
        if self.kind == "sech_alpha":
            a = REAL(self.params["alpha"])
            return (REAL(1) / np.cosh(a * (zeta + 1j * PI / 2))) ** p
        if self.kind == "gauss_strip":
            return np.exp(-p * (zeta + 1j * PI / 2) ** 2)
        raise InvalidParameterError("tabulated kernels have no closed form")

    def minus_closed_form(self, zeta):
        """Closed ``f_minus`` (the ``s < 0`` half of the split) or ``None``.

        Known for ``constant`` (``e^{i zeta log c / pi}``) and ``gauss_strip``.
        """
        zeta = np.asarray(zeta, dtype=COMPLEX)
        p = self.power
        if self.kind == "constant":
            return np.exp(1j * p * zeta * np.log(REAL(self.params["c"])) / PI)
        if self.kind == "gauss_strip":
            return np.exp(-1j * p * (zeta ** 3 / (3 * PI) + PI * zeta / 12))
        return None


@dataclass(frozen=True)
class SymbolSpec:
    """Full factorization data ``phase * f_Bl * f_in * f_out``."""

    phase: complex = 1.0
    blaschke: BlaschkeData = field(default_factory=BlaschkeData)
    singular: SingularData = field(default_factory=SingularData)
    outer: OuterData = field(default_factory=OuterData)

    def __post_init__(self):
        ph = complex(self.phase)
        if abs(abs(ph) - 1) > 1e-12:
            raise InvalidParameterError(f"|phase| must be 1, got {abs(ph)}")
        object.__setattr__(self, "phase", ph)

    @property
    def inner_only(self) -> bool:
        return self.outer.trivial


# ----------------------------------------------------------------- evaluators

def eval_blaschke(data: BlaschkeData, zeta) -> np.ndarray:
    """Symmetric-convention Blaschke product at ``zeta``."""
    z = exp_strip(zeta)
    out = np.ones(z.shape, dtype=COMPLEX)
    big = np.abs(z) > 1
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(big, 1 / np.where(big, z, 1), 0)
        for a in data.alphas():
            ea = exp_strip(np.asarray(a))
            eb = np.conj(ea)
            direct = (z - ea) / (z - eb)
            scaled = (1 - ea * inv) / (1 - eb * inv)
            out = out * np.where(big, scaled, direct)
    return out


def _singular_exponent(data: SingularData, z: np.ndarray, at_atom=None) -> np.ndarray:
    """Exponent of ``f_in``.

    If ``at_atom`` is a boolean array, points within the pole tolerance are
    marked in it (and given a zero exponent) instead of raising.
    """
    expo = np.zeros(z.shape, dtype=COMPLEX)
    if data.a0:
        expo = expo + 1j * REAL(data.a0) / z
    if data.a_inf:
        expo = expo - 1j * REAL(data.a_inf) * z
    for s, w in data.finite_atoms:
        sl = REAL(s)
        hit = np.abs(z - sl) < ATOM_POLE_TOL
        if np.any(hit):
            if at_atom is None:
                raise PoleProximityError(
                    f"evaluation point within {ATOM_POLE_TOL} of atom s = {s}")
            at_atom |= hit
        zs = np.where(hit, sl + 1, z)
        expo = expo + np.where(hit, 0, 1j * (REAL(w) / (1 + sl * sl)) * (1 + zs * sl) / (zs - sl))
    return expo


def eval_singular(data: SingularData, zeta) -> np.ndarray:
    """Singular inner factor at ``zeta``."""
    return np.exp(_singular_exponent(data, exp_strip(zeta)))


def _outer_poisson(data: OuterData, z: np.ndarray, half: str = "full",
                   subtract: bool = True, extended: bool = False) -> np.ndarray:
    flat = np.asarray(z, dtype=COMPLEX if extended else complex).ravel()
    integral = poisson_integral(data.log_phi, flat, half, subtract=subtract,
                                extended=extended)
    val = np.exp(-1j / PI * integral.astype(COMPLEX))
    return val.reshape(np.shape(z))


def eval_outer(data: OuterData, zeta, method: str = "auto") -> np.ndarray:
    """Outer factor at ``zeta``.

    Parameters
    ----------
    method : {"auto", "closed", "poisson"}
        ``auto`` uses the closed form for builtins and quadrature for tables.
        ``poisson`` forces the quadrature (used to cross-check builtins).
    """
    if method == "auto":
        method = "closed" if data.is_builtin else "poisson"
    if method == "closed":
        return data.closed_form(zeta)
    if method != "poisson":
        raise InvalidParameterError(f"unknown method {method!r}")
    z = exp_strip(zeta).astype(complex)
    return _outer_poisson(data, z)


def eval_symbol(spec: SymbolSpec, zeta) -> np.ndarray:
    """``phase * f_Bl * f_in * f_out`` at ``zeta``."""
    return (spec.phase * eval_blaschke(spec.blaschke, zeta)
            * eval_singular(spec.singular, zeta) * eval_outer(spec.outer, zeta))


def log_abs_symbol(spec: SymbolSpec, zeta) -> np.ndarray:
    """``log |f(zeta)|`` summed factorwise so deep decay does not underflow."""
    z = exp_strip(zeta)
    with np.errstate(divide="ignore"):
        val = np.log(np.abs(eval_blaschke(spec.blaschke, zeta)))
    val = val + _singular_exponent(spec.singular, z).real
    o = spec.outer
    zl = np.asarray(zeta, dtype=COMPLEX)
    if o.kind == "constant":
        val = val + o.power * math.log(o.params["c"])
    elif o.kind == "sech_alpha":
        a = REAL(o.params["alpha"])
        val = val - o.power * np.log(np.abs(np.cosh(a * (zl + 1j * PI / 2))))
    elif o.kind == "gauss_strip":
        val = val - o.power * ((zl + 1j * PI / 2) ** 2).real
    else:
        flat = z.astype(complex).ravel()
        integral = poisson_integral(o.log_phi, flat, "full")
        val = val + (integral.imag / math.pi).reshape(z.shape)
    return val


def _outer_boundary(data: OuterData, theta):
    th = np.asarray(theta, dtype=REAL)
    if data.is_builtin:
        top = th.astype(COMPLEX)
        return data.closed_form(top), data.closed_form(top - 1j * PI)
    a = np.exp(th.astype(float))
    return (_outer_poisson(data, a + 0j), _outer_poisson(data, -a + 0j))


def _singular_boundary(data: SingularData, zeta) -> np.ndarray:
    # the radial limit at an atom is 0, so a node sitting on one gets 0
    z = exp_strip(zeta)
    hit = np.zeros(z.shape, dtype=bool)
    val = np.exp(_singular_exponent(data, z, hit))
    return np.where(hit, 0, val)


def _inner_boundary(spec: SymbolSpec, theta):
    top = np.asarray(theta, dtype=REAL).astype(COMPLEX)
    bottom = top - 1j * PI
    f0 = eval_blaschke(spec.blaschke, top) * _singular_boundary(spec.singular, top)
    fpi = eval_blaschke(spec.blaschke, bottom) * _singular_boundary(spec.singular, bottom)
    return f0, fpi


def boundary_values_at(symbol, theta):
    """``(f(theta), f(theta - pi i))`` at real abscissae.

    ``symbol`` is a :class:`SymbolSpec` (factor-specific boundary formulas)
    or a vectorised callable of ``zeta``.
    """
    th = np.asarray(theta, dtype=REAL)
    if isinstance(symbol, SymbolSpec):
        i0, ipi = _inner_boundary(symbol, th)
        o0, opi = _outer_boundary(symbol.outer, th)
        return symbol.phase * i0 * o0, symbol.phase * ipi * opi
    top = th.astype(COMPLEX)
    f0 = np.broadcast_to(np.asarray(symbol(top), dtype=COMPLEX), th.shape)
    fpi = np.broadcast_to(np.asarray(symbol(top - 1j * PI), dtype=COMPLEX), th.shape)
    return f0, fpi


def boundary_values(symbol, grid: StripGrid):
    """``(f(theta_j), f(theta_j - pi i))`` on the grid nodes."""
    return boundary_values_at(symbol, grid.theta)


def sample_boundary(spec: SymbolSpec, grid: StripGrid) -> dict:
    """Boundary values of ``f`` on both lines.

    Returns
    -------
    dict
        ``f_on_0`` (line 0) and ``f_on_minus_pi`` (line ``-pi``).
    """
    f0, fpi = boundary_values_at(spec, grid.theta)
    return {"f_on_0": BoundaryVector(grid, f0, 0.0),
            "f_on_minus_pi": BoundaryVector(grid, fpi, -math.pi)}


def check_symmetry(symbol, grid: StripGrid, tol: float = 1e-8) -> dict:
    """Audit ``conj f(theta) = f(theta - pi i)`` on the grid nodes.

    ``symbol`` may be a :class:`SymbolSpec` or a vectorised callable of
    ``zeta``.
    """
    f0, fpi = boundary_values(symbol, grid)
    dev = float(np.max(np.abs(np.conj(f0) - fpi)))
    return {"max_deviation": dev, "pass": dev <= tol}


def inner_modulus_audit(spec: SymbolSpec, grid: StripGrid, tol: float = 1e-10,
                        atom_gap: float = 1e-6) -> dict:
    """Max of ``||f_Bl f_in| - 1|`` over both boundary lines away from atoms."""
    i0, ipi = _inner_boundary(spec, grid.theta)
    a = np.exp(grid.theta)
    mask0 = np.ones(grid.N, dtype=bool)
    maskpi = np.ones(grid.N, dtype=bool)
    for s, _ in spec.singular.finite_atoms:
        if s > 0:
            mask0 &= np.abs(a - REAL(s)) > atom_gap
        else:
            maskpi &= np.abs(a + REAL(s)) > atom_gap
    dev = max(float(np.max(np.abs(np.abs(i0[mask0]) - 1), initial=0.0)),
              float(np.max(np.abs(np.abs(ipi[maskpi]) - 1), initial=0.0)))
    return {"max_deviation": dev, "pass": dev <= tol}


def admissibility_probe(data: OuterData, grid: StripGrid, rate: float = 0.99) -> float:
    """``max log(1/|f_out(theta)|) / e^{rate |theta|}`` on the grid."""
    th = grid.theta.astype(float)
    lp = data.log_phi(np.exp(th))
    probe = float(np.max(-lp / np.exp(rate * np.abs(th))))
    if data.kind == "table":
        LOGGER.info("admissibility probe for tabulated kernel: %.6g", probe)
    return probe


@dataclass(frozen=True)
class OuterSplit:
    """Boundary samples of the half-line factors ``f_out = f_plus * f_minus``."""

    f_minus_on_0: BoundaryVector
    f_minus_on_minus_pi: BoundaryVector
    f_plus_on_0: BoundaryVector
    f_plus_on_minus_pi: BoundaryVector

    def audits(self, f_out_on_0: np.ndarray) -> dict:
        """``| |f_minus| - 1 |``, reconstruction and cross-boundary deviations."""
        fm0 = self.f_minus_on_0.samples
        return {
            "unimodular": float(np.max(np.abs(np.abs(fm0) - 1))),
            "reconstruction": float(np.max(np.abs(self.f_plus_on_0.samples * fm0 - f_out_on_0))),
            "cross_boundary": float(np.max(np.abs(self.f_plus_on_minus_pi.samples - np.conj(fm0)))),
        }


def split_outer(data: OuterData, grid: StripGrid, extended: bool = True) -> OuterSplit:
    """Split the Poisson integral of ``log phi`` at ``s = 0``.

    ``f_minus`` integrates over ``s < 0`` and ``f_plus`` over ``s > 0``.  All
    four boundary traces come from independent quadratures, in ``longdouble``
    unless ``extended`` is false.
    """
    a = np.exp(grid.theta if extended else grid.theta.astype(float))
    top, bottom = a + 0j, -a + 0j
    fm0 = _outer_poisson(data, top, "neg", extended=extended)
    fmpi = _outer_poisson(data, bottom, "neg", extended=extended)
    fp0 = _outer_poisson(data, top, "pos", extended=extended)
    fppi = _outer_poisson(data, bottom, "pos", extended=extended)
    return OuterSplit(BoundaryVector(grid, fm0, 0.0),
                      BoundaryVector(grid, fmpi, -math.pi),
                      BoundaryVector(grid, fp0, 0.0),
                      BoundaryVector(grid, fppi, -math.pi))


def split_outer_at(data: OuterData, zeta) -> tuple[np.ndarray, np.ndarray]:
    """Interior values ``(f_plus(zeta), f_minus(zeta))`` by quadrature."""
    z = exp_strip(zeta).astype(complex)
    return _outer_poisson(data, z, "pos"), _outer_poisson(data, z, "neg")


# --------------------------------------------------------------- radial profile

@dataclass(frozen=True)
class Approach:
    """A path toward the boundary or infinity.

    ``kind`` is ``ray`` (fixed ``theta``, varying ``lambda``), ``atom``
    (``e^zeta = s - i d`` with ``d -> 0``) or ``infinity`` (``zeta = ±x - pi i/2``).
    """

    kind: str
    value: float = 0.0

    @classmethod
    def parse(cls, text: str) -> "Approach":
        try:
            head, _, rest = text.partition(":")
            if head == "ray":
                key, _, val = rest.partition("=")
                if key != "theta":
                    raise ValueError
                return cls("ray", float(val))
            if head == "atom":
                key, _, val = rest.partition("=")
                if key != "s" or float(val) == 0:
                    raise ValueError
                return cls("atom", float(val))
            if head == "infinity" and rest in ("+", "-"):
                return cls("infinity", 1.0 if rest == "+" else -1.0)
        except ValueError:
            pass
        raise InvalidParameterError(
            f"bad approach {text!r}; expected ray:theta=<x>, atom:s=<s> or infinity:+/-")

    @property
    def parameter_name(self) -> str:
        return {"ray": "lambda", "atom": "offset", "infinity": "re_zeta"}[self.kind]

    def default_steps(self) -> np.ndarray:
        if self.kind == "ray":
            return -np.arange(1, 33) * (math.pi / 64)
        if self.kind == "atom":
            return np.logspace(0, -6, 25)
        return self.value * np.arange(0, 41, dtype=float)

    def points(self, steps) -> np.ndarray:
        steps = np.asarray(steps, dtype=float)
        if self.kind == "ray":
            if np.any((steps > 0) | (steps < -math.pi)):
                raise InvalidParameterError("ray offsets must lie in [-pi, 0]")
            return (self.value + 1j * steps).astype(COMPLEX)
        if self.kind == "atom":
            if np.any(steps <= 0):
                raise InvalidParameterError("atom offsets must be positive")
            return log_strip(self.value - 1j * steps).astype(COMPLEX)
        return (steps - 0.5j * math.pi).astype(COMPLEX)


@dataclass(frozen=True)
class ModulusProfile:
    approach: Approach
    steps: np.ndarray
    modulus: np.ndarray
    log_modulus: np.ndarray


def radial_modulus_profile(spec: SymbolSpec, approach, steps: Sequence[float] | None = None
                           ) -> ModulusProfile:
    """``|f|`` along an approach path, computed through ``log|f|``.

    Moduli below the double range are reported as 0; ``log_modulus`` keeps
    the exact decay.
    """
    if isinstance(approach, str):
        approach = Approach.parse(approach)
    steps = approach.default_steps() if steps is None else np.asarray(steps, dtype=float)
    pts = approach.points(steps)
    logm = np.asarray(log_abs_symbol(spec, pts), dtype=float)
    with np.errstate(under="ignore"):
        mod = np.exp(logm)
    return ModulusProfile(approach, steps, mod, logm)


def polar_parts(spec: SymbolSpec, grid: StripGrid) -> tuple[BoundaryVector, OuterData]:
    """``conj(f_Bl f_in)`` on line 0 and the outer data."""
    if not spec.outer.admissible:
        raise InadmissibleOuterError("polar decomposition needs an admissible outer factor")
    i0, _ = _inner_boundary(spec, grid.theta)
    return BoundaryVector(grid, np.conj(i0), 0.0), spec.outer
