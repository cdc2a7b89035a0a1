import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghgcs.coherent_states import (
    GHGSpectrum,
    LinearSpectrum,
    annihilation_eigen_check,
    cs_amplitudes,
    eigen_e,
    identity_resolution_check,
    ladder_matrices,
    moment_identity_check,
    overlap,
    structure_rho,
)
from ghgcs.errors import ConfigurationError, DivergenceError, SpectrumError
from ghgcs.special_functions import Beta, Exponential, GammaLaguerre, HyperParams, structure_constant

HO = GHGSpectrum(HyperParams())


def test_eigen_e_examples():
    assert eigen_e(HO, 5) == 5
    assert eigen_e(LinearSpectrum(0.5), 2) == 2.5
    assert eigen_e(GHGSpectrum(HyperParams((1.0,), (3.0,))), 3) == 5
    assert eigen_e(HO, 0) == 0 and eigen_e(LinearSpectrum(1.5), 0) == 1.5


def test_structure_rho_examples():
    assert structure_rho(LinearSpectrum(0.7), 0) == 1
    assert structure_rho(HO, 4) == 24
    assert structure_rho(LinearSpectrum(1.0), 3) == 24


def test_structure_rho_rejects_non_positive_eigenvalue():
    bad = GHGSpectrum.__new__(GHGSpectrum)
    object.__setattr__(bad, "params", HyperParams((-0.5,), ()))
    with pytest.raises(SpectrumError):
        structure_rho(bad, 3)
    with pytest.raises(SpectrumError):
        LinearSpectrum(-1.0)


spectra = st.one_of(
    st.floats(0, 5).map(LinearSpectrum),
    st.tuples(st.lists(st.floats(0.2, 4), max_size=2), st.lists(st.floats(0.2, 4), max_size=2)).map(
        lambda ab: GHGSpectrum(HyperParams(tuple(ab[0]), tuple(ab[1])))),
)


@given(spectra, st.integers(0, 49))
def test_rho_ratio_is_eigenvalue(spectrum, n):
    ratio = structure_rho(spectrum, n + 1) / structure_rho(spectrum, n)
    assert ratio == pytest.approx(spectrum.e(n + 1), rel=1e-12)


@given(st.tuples(st.lists(st.floats(0.2, 4), max_size=2), st.lists(st.floats(0.2, 4), max_size=2)), st.integers(0, 30))
def test_ghg_rho_matches_pochhammer_form(ab, n):
    params = HyperParams(tuple(ab[0]), tuple(ab[1]))
    assert structure_rho(GHGSpectrum(params), n) == pytest.approx(structure_constant(params, n), rel=1e-12)


def test_vacuum_state():
    state = cs_amplitudes(HyperParams((1.0,), (2.0,)), 0.0, 10)
    assert state.amps[0] == 1 and np.all(state.amps[1:] == 0) and state.norm_defect == 0


def test_poisson_statistics():
    state = cs_amplitudes(HyperParams(), cmath.exp(0.4j), 40)
    expected = [math.exp(-1) / math.factorial(n) for n in range(41)]
    np.testing.assert_allclose(state.probabilities, expected, rtol=1e-13)


def test_kummer_vacuum_probability():
    state = cs_amplitudes(HyperParams((1.0,), (2.0,)), math.sqrt(0.5), 30)
    assert state.probabilities[0] == pytest.approx(1 / float(mpmath.hyp1f1(1, 2, 0.5)), rel=1e-14)
    assert 1 / state.probabilities[0] == pytest.approx(1.2974425, rel=1e-7)


def test_amplitudes_outside_radius():
    with pytest.raises(DivergenceError):
        cs_amplitudes(HyperParams((1.0,), ()), 1.0 + 0.1j)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 3), st.floats(-math.pi, math.pi), st.sampled_from([8, 16, 40, 64]))
def test_photon_statistics_normalize(r, phi, order):
    state = cs_amplitudes(HyperParams((1.0,), (1.5,)), r * cmath.exp(1j * phi), order)
    assert abs(np.sum(state.probabilities) + state.norm_defect - 1.0) <= 1e-13


def test_overlap_examples():
    params = HyperParams((0.5,), (1.5,))
    z = 0.8 - 0.3j
    assert overlap(params, z, z) == pytest.approx(1.0, rel=1e-13)
    z1, z2 = 0.4 + 0.2j, -0.3 + 0.9j
    ho = overlap(HyperParams(), z1, z2)
    closed = cmath.exp(z1.conjugate() * z2 - abs(z1) ** 2 / 2 - abs(z2) ** 2 / 2)
    assert ho == pytest.approx(closed, rel=1e-13)
    norm = float(mpmath.hyp1f1(0.5, 1.5, abs(z1) ** 2))
    assert overlap(params, z1, 0.0) == pytest.approx(1 / math.sqrt(norm), rel=1e-13)


labels = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=30, deadline=None)
@given(st.lists(labels, min_size=1, max_size=6, unique=True))
def test_gram_matrix_positive_semidefinite(zs):
    params = HyperParams((1.0,), (2.0,))
    gram = np.array([[overlap(params, a, b) for b in zs] for a in zs])
    assert np.min(np.linalg.eigvalsh((gram + gram.conj().T) / 2)) >= -1e-10


@settings(max_examples=30, deadline=None)
@given(labels, labels)
def test_overlap_bounded_by_one(z1, z2):
    value = abs(overlap(HyperParams(), z1, z2))
    assert value <= 1 + 1e-13
    if abs(z1 - z2) > 1e-3:
        assert value < 1


def test_ladder_examples():
    ho = ladder_matrices(HO, 2)
    np.testing.assert_allclose(ho.lowering, [[0, 1, 0], [0, 0, math.sqrt(2)], [0, 0, 0]], rtol=1e-15)
    np.testing.assert_allclose(ho.number_like, np.diag([0, 1, 2]), rtol=1e-15)
    lin = ladder_matrices(LinearSpectrum(1.0), 2)
    assert lin.number_like[1, 1] == pytest.approx(2.0)
    small = ladder_matrices(HO, 1)
    assert small.lowering.shape == (2, 2) and np.count_nonzero(small.lowering) == 1
    assert np.array_equal(small.raising, small.lowering.T)


def test_eigen_residual_examples():
    vac = cs_amplitudes(HyperParams(), 0.0, 10)
    assert annihilation_eigen_check(vac, HO).residual == 0
    ho = annihilation_eigen_check(cs_amplitudes(HyperParams(), 1.0, 60), HO)
    assert ho.residual < 1e-12
    params = HyperParams((1.0,), (3.0,))
    res = annihilation_eigen_check(cs_amplitudes(params, 1j, 60), GHGSpectrum(params))
    assert res.residual < 1e-12
    assert res.truncation_bound >= 0


@pytest.mark.parametrize("family, spectrum, n_max", [
    (Exponential(), HO, 5),
    (GammaLaguerre(2.0), LinearSpectrum(2.0), 3),
    (Beta(1.0), GHGSpectrum(HyperParams((2.0,), ())), 2),
])
def test_moment_examples(family, spectrum, n_max):
    rec = moment_identity_check(family, spectrum, n_max)
    assert rec.passed and rec.error <= 1e-8


def test_moment_mismatch():
    with pytest.raises(ConfigurationError):
        moment_identity_check(Exponential(), LinearSpectrum(1.0))


@pytest.mark.parametrize("params, family", [
    (HyperParams(), Exponential()),
    (HyperParams((1.0,), (2.0,)), GammaLaguerre(1.0)),
    (HyperParams((1.5,), ()), Beta(0.5)),
    (HyperParams((3.5,), ()), Beta(2.5)),
])
def test_identity_resolution(params, family):
    res = identity_resolution_check(params, family, order=20)
    assert res.max_offdiag == 0 and res.max_diag_error <= 1e-7
    assert len(res.diagonal) == 21
