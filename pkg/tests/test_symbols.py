import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import MIDLINE, midline_zeros, paired
from strip_hardy import (BlaschkeData, BlaschkeZero, InadmissibleOuterError,
                         InvalidParameterError, OuterData, PoleProximityError, SingularData,
                         SymbolSpec, check_symmetry, eval_symbol, make_grid,
                         polar_decomposition, radial_modulus_profile, sample_boundary,
                         split_outer)
from strip_hardy.grid import PI
from strip_hardy.symbols import (Approach, admissibility_probe, eval_blaschke, eval_outer,
                                 eval_singular, inner_modulus_audit, split_outer_at)


# ---------------------------------------------------------------- Blaschke

def test_midline_factor_at_origin():
    assert complex(eval_blaschke(midline_zeros(0.0), 0.0)) == pytest.approx(1j, abs=1e-15)


def test_blaschke_vanishes_at_its_zero():
    data = paired(-1 - 0.25j * math.pi)
    assert abs(complex(eval_blaschke(data, -1 - 0.25j * math.pi))) <= 1e-15


@given(st.floats(-300, 300))
def test_blaschke_unimodular_on_both_lines(theta):
    data = paired(-1 - 0.25j * math.pi)
    for z in (theta, theta - 1j * math.pi):
        assert abs(abs(complex(eval_blaschke(data, z))) - 1) <= 1e-12


def test_blaschke_far_out_does_not_overflow():
    val = eval_blaschke(midline_zeros(0.0), np.array([800.0, -800.0]))
    assert np.all(np.isfinite(val))


def test_zero_validation():
    with pytest.raises(InvalidParameterError):
        BlaschkeZero(-1e-8j)
    with pytest.raises(InvalidParameterError):
        BlaschkeZero(-0.5j, 0)
    with pytest.raises(InvalidParameterError):
        BlaschkeData((BlaschkeZero(0.3 - 1j),))
    BlaschkeData((BlaschkeZero(0.3 - 1j), BlaschkeZero(0.3 - (math.pi - 1) * 1j)))


# ---------------------------------------------------------------- singular

def test_singular_midpoint_value():
    val = complex(eval_singular(SingularData(1.0), -0.5j * math.pi))
    assert val == pytest.approx(math.exp(-1), abs=1e-15)


def test_trivial_singular_is_one():
    z = np.array([0.2 - 0.3j, -4 - 3j])
    np.testing.assert_array_equal(eval_singular(SingularData(), z), np.ones(2))


@given(st.floats(-30, 30))
def test_singular_unimodular_on_boundary(theta):
    val = complex(eval_singular(SingularData(1.0, 0.5), theta))
    assert abs(abs(val) - 1) <= 1e-12


def test_atom_pole_guard():
    data = SingularData(0, 0, ((-1.0, 1.0), (1.0, 1.0)))
    with pytest.raises(PoleProximityError):
        eval_singular(data, 0.0)


def test_singular_validation():
    with pytest.raises(InvalidParameterError):
        SingularData(-1.0)
    with pytest.raises(InvalidParameterError):
        SingularData(0, 0, ((1.0, 1.0),))
    with pytest.raises(InvalidParameterError):
        SingularData(0, 0, ((1.0, 1.0), (-1.0, 2.0)))
    assert not SingularData().nontrivial()
    assert SingularData(0, 0.1).nontrivial()


@given(st.floats(-8, 8), st.floats(-3.1, -0.04))
def test_inner_factors_contract_inside(x, y):
    z = complex(x, y)
    assert abs(complex(eval_blaschke(paired(-1 - 0.25j * math.pi), z))) <= 1 + 1e-12
    data = SingularData(1.0, 0.3, ((-2.0, 0.5), (2.0, 0.5)))
    assert abs(complex(eval_singular(data, z))) <= 1 + 1e-12


# ---------------------------------------------------------------- outer

@given(st.floats(-5, 5), st.floats(-3.0, -0.1))
def test_constant_kernel_by_quadrature(x, y):
    z = complex(x, y)
    val = complex(eval_outer(OuterData("constant", {"c": 3.0}), z, method="poisson"))
    assert val == pytest.approx(3.0, rel=1e-8)


def test_outer_examples():
    assert complex(eval_outer(OuterData(), 0.4 - 1j)) == 1
    assert complex(eval_outer(OuterData("gauss_strip"), -0.5j * math.pi)) == pytest.approx(1)
    f = eval_symbol(SymbolSpec(outer=OuterData("sech_alpha", {"alpha": 0.5})), 0.0)
    assert complex(f) == pytest.approx(math.sqrt(2), rel=1e-15)


@pytest.mark.parametrize("kind, params", [("sech_alpha", {"alpha": 0.5}),
                                          ("gauss_strip", {})])
def test_builtin_closed_forms_match_quadrature(kind, params):
    data = OuterData(kind, params)
    z = np.array([0.3 - 1j, -2 - 2.5j, 1.7 - 0.2j])
    np.testing.assert_allclose(eval_outer(data, z, method="poisson").astype(complex),
                               data.closed_form(z).astype(complex), rtol=1e-8)


def test_outer_validation():
    for kind, params in [("sech_alpha", {"alpha": 1.2}), ("constant", {"c": -1}),
                         ("mystery", {})]:
        with pytest.raises(InvalidParameterError):
            OuterData(kind, params)
    with pytest.raises(InvalidParameterError):
        OuterData("table", {"s": [1, 2, 3, 4, -1], "log_phi": [0, 0, 0, 0, 1]})
    with pytest.raises(InvalidParameterError):
        OuterData("table", {"s": [1, 2], "log_phi": [0, 0]})
    with pytest.raises(InvalidParameterError):
        OuterData("table", {"s": [1, 2, 3, 4], "log_phi": [0, 0, 0, 1], "decay": "wild"})


def sech_table(alpha=0.25, step=0.05, span=20.0):
    th = np.arange(-span, span + step / 2, step)
    s = np.exp(th)
    base = OuterData("sech_alpha", {"alpha": alpha})
    return OuterData("table", {"s": list(s), "log_phi": list(base.log_phi(s)),
                               "decay": "loglinear"}), base


def test_tabulated_kernel_tracks_its_builtin():
    table, base = sech_table()
    z = np.array([0.2 - 1.2j, -1.5 - 2j])
    np.testing.assert_allclose(eval_outer(table, z).astype(complex),
                               base.closed_form(z).astype(complex), rtol=1e-9)


# ---------------------------------------------------------------- assembled symbol

def test_sample_boundary_midline(small_grid):
    out = sample_boundary(SymbolSpec(blaschke=midline_zeros(0.0)), small_grid)
    a = np.exp(small_grid.theta)
    np.testing.assert_allclose(out["f_on_0"].samples, (a + 1j) / (a - 1j), atol=1e-15)
    assert out["f_on_minus_pi"].line == -math.pi
    one = sample_boundary(SymbolSpec(), small_grid)
    assert np.all(one["f_on_0"].samples == 1)


def test_symmetry_audit_examples(small_grid):
    assert check_symmetry(SymbolSpec(blaschke=paired(-1 - 0.25j * math.pi)), small_grid)["pass"]
    assert check_symmetry(SymbolSpec(blaschke=midline_zeros(0.0)), small_grid)["pass"]
    bad = check_symmetry(lambda z: np.exp(1j * z), small_grid)
    assert not bad["pass"]
    assert bad["max_deviation"] == pytest.approx(math.exp(math.pi) + 1, rel=1e-6)


@st.composite
def symmetric_specs(draw):
    zeros = []
    for _ in range(draw(st.integers(0, 2))):
        x = draw(st.floats(-3, 3))
        y = draw(st.floats(0.1, math.pi / 2 - 0.1))
        a = complex(x, -y)
        zeros += [BlaschkeZero(a), BlaschkeZero(a.conjugate() - 1j * math.pi)]
    for _ in range(draw(st.integers(0, 2))):
        zeros.append(BlaschkeZero(complex(draw(st.floats(-3, 3)), -math.pi / 2)))
    atoms = ()
    if draw(st.booleans()):
        s, w = draw(st.floats(0.2, 5)), draw(st.floats(0.1, 2))
        atoms = ((s, w), (-s, w))
    sing = SingularData(draw(st.floats(0, 2)), draw(st.floats(0, 2)), atoms)
    outer = draw(st.sampled_from([OuterData(), OuterData("constant", {"c": 2.5}),
                                  OuterData("sech_alpha", {"alpha": 0.5}),
                                  OuterData("gauss_strip")]))
    phase = draw(st.sampled_from([1.0, -1.0]))
    return SymbolSpec(phase, BlaschkeData(tuple(zeros)), sing, outer)


@given(symmetric_specs())
def test_symmetric_data_passes_audit(spec):
    g = make_grid(16, 2048)
    assert check_symmetry(spec, g)["pass"]
    if spec.outer.trivial:
        assert inner_modulus_audit(spec, g)["pass"]


def test_inner_modulus_skips_atoms(small_grid):
    spec = SymbolSpec(singular=SingularData(0, 0, ((-1.0, 1.0), (1.0, 1.0))))
    assert inner_modulus_audit(spec, small_grid)["pass"]


def test_phase_validation():
    with pytest.raises(InvalidParameterError):
        SymbolSpec(phase=1.1)


# ---------------------------------------------------------------- split

def test_split_constant(small_grid):
    data = OuterData("constant", {"c": 2.0})
    sp = split_outer(data, small_grid)
    th = small_grid.theta
    np.testing.assert_allclose(sp.f_minus_on_0.samples, np.exp(1j * th * np.log(2) / PI),
                               atol=1e-8)
    a = sp.audits(np.full(small_grid.N, 2.0))
    assert a["unimodular"] <= 1e-8
    assert a["cross_boundary"] <= 1e-6
    assert a["reconstruction"] <= 1e-8


def test_split_gauss(small_grid):
    data = OuterData("gauss_strip")
    sp = split_outer(data, small_grid)
    th = small_grid.theta
    for vec, line in ((sp.f_minus_on_0, 0), (sp.f_minus_on_minus_pi, -1)):
        z = th + 1j * line * PI
        exact = np.exp(-1j * z ** 3 / (3 * PI) - 1j * PI * z / 12)
        assert np.max(np.abs(vec.samples - exact)) <= 1e-6
    np.testing.assert_allclose(sp.f_minus_on_0.samples,
                               data.minus_closed_form(th.astype(np.clongdouble)), atol=1e-10)
    a = sp.audits(data.closed_form(th.astype(np.clongdouble)))
    assert a["unimodular"] <= 1e-8 and a["cross_boundary"] <= 1e-6


def test_split_trivial(small_grid):
    sp = split_outer(OuterData(), small_grid)
    for v in (sp.f_minus_on_0, sp.f_plus_on_0, sp.f_minus_on_minus_pi, sp.f_plus_on_minus_pi):
        assert np.all(v.samples == 1)


def test_split_reconstructs_inside():
    rng = np.random.default_rng(5)
    z = rng.uniform(-4, 4, 20) - 1j * rng.uniform(0.05, math.pi - 0.05, 20)
    for data in (OuterData("sech_alpha", {"alpha": 0.5}), OuterData("gauss_strip")):
        fp, fm = split_outer_at(data, z)
        exact = data.closed_form(z)
        assert np.max(np.abs(fp * fm - exact)) <= 1e-6


# ---------------------------------------------------------------- profiles, polar

def test_profile_at_atom_zero():
    prof = radial_modulus_profile(SymbolSpec(singular=SingularData(1.0)), "ray:theta=-5")
    assert np.all(np.diff(prof.modulus) <= 0)
    half = np.argmin(np.abs(prof.steps + math.pi / 2))
    # exp(-e^5) = 3.5e-65
    assert prof.log_modulus[half] == pytest.approx(-math.exp(5), rel=1e-12)
    assert prof.modulus[half] < 1e-30


def test_profile_trivial_and_atom_pair():
    prof = radial_modulus_profile(SymbolSpec(), "infinity:+")
    assert np.all(prof.modulus == 1)
    pair = SymbolSpec(singular=SingularData(0, 0, ((-1.0, 1.0), (1.0, 1.0))))
    prof = radial_modulus_profile(pair, "atom:s=1")
    assert np.all(np.diff(prof.modulus) <= 0)
    assert prof.modulus[-1] < 1e-6


@pytest.mark.parametrize("text", ["ray:phi=1", "atom:s=0", "infinity:*", "line"])
def test_approach_parse_errors(text):
    with pytest.raises(InvalidParameterError):
        Approach.parse(text)


def test_admissibility_probe_bounded(big_grid):
    for data in (OuterData("sech_alpha", {"alpha": 0.5}), OuterData("gauss_strip"),
                 OuterData("constant", {"c": 0.5})):
        assert math.isfinite(admissibility_probe(data, big_grid))
        assert admissibility_probe(data, big_grid) < 10


def test_polar_decomposition(small_grid):
    pure_outer = SymbolSpec(outer=OuterData("sech_alpha", {"alpha": 0.5}))
    p = polar_decomposition(pure_outer, small_grid)
    assert np.all(p.unitary_symbol.samples == 1)
    inner = SymbolSpec(singular=SingularData(1.0))
    p = polar_decomposition(inner, small_grid)
    assert p.positive_part_symbol.trivial
    np.testing.assert_allclose(p.unitary_symbol.samples,
                               np.conj(eval_singular(SingularData(1.0), small_grid.theta)),
                               atol=1e-15)
    mixed = SymbolSpec(blaschke=midline_zeros(0.0), singular=SingularData(1.0),
                       outer=OuterData("gauss_strip"))
    p = polar_decomposition(mixed, small_grid)
    assert np.max(np.abs(np.abs(p.unitary_symbol.samples) - 1)) <= 1e-10
    with pytest.raises(InadmissibleOuterError):
        polar_decomposition(SymbolSpec(outer=OuterData("constant", {"c": 2}, admissible=False)),
                            small_grid)
