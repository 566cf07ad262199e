import numpy as np
import pytest

from brickwork_ep import (build_lindblad, build_xxz, composite_trotter_check,
                          dissipator_matrix, kraus_lindblad_spectral_map,
                          xxz_limit_check)
from brickwork_ep.gates import SIGMA_PLUS, SIGMA_ZZ

from conftest import random_density


def test_xxz_spec_values():
    spec = build_xxz(np.pi / 4)
    assert abs(spec.a0 - 1.0) < 1e-15
    assert abs(spec.b0 - np.sqrt(2.0)) < 1e-15
    assert abs(spec.J - 1.0 / np.sqrt(2.0)) < 1e-15
    assert abs(spec.Delta - np.cos(np.pi / 4)) < 1e-15
    assert np.abs(spec.h12 - spec.h12.conj().T).max() < 1e-13
    assert np.abs(spec.h12 @ SIGMA_ZZ - SIGMA_ZZ @ spec.h12).max() < 1e-13
    with pytest.raises(ValueError):
        build_xxz(0.0)


def test_xxz_limit_quadratic():
    report = xxz_limit_check(np.pi / 4, [0.02, 0.01, 0.005])
    assert report.quadratic_ok
    for ratio in report.ratios:
        assert abs(ratio - 4.0) < 1.0
    # delta = 0 is exact
    report0 = xxz_limit_check(np.pi / 4, [0.0])
    assert report0.rows[0][1] == 0.0


def test_dissipator_trace_free(rng):
    D = dissipator_matrix(SIGMA_PLUS)
    rho = random_density(rng, dim=2)
    out = (D @ rho.reshape(-1)).reshape(2, 2)
    assert abs(np.trace(out)) < 1e-13


def test_spectral_map_exact():
    rep = kraus_lindblad_spectral_map(1.0, 1.0, 10)
    assert abs(rep.epsilon - np.exp(-0.1)) < 1e-15
    expected = (1.0, np.exp(-2.0), np.exp(-1.0), np.exp(-1.0))
    for a, b in zip(rep.kraus_power_eigs, expected):
        assert abs(a - b) < 1e-14
    assert rep.max_eig_diff < 1e-14
    assert rep.channel_diff < 1e-10


def test_spectral_map_single_step_and_zero_time():
    rep = kraus_lindblad_spectral_map(0.7, 1.3, 1)
    assert rep.channel_diff < 1e-10
    rep0 = kraus_lindblad_spectral_map(1.0, 0.0, 5)
    assert rep0.epsilon == 1.0
    assert rep0.max_eig_diff == 0.0
    assert rep0.channel_diff < 1e-14


def test_lindbladian_spectrum_stability():
    spec = build_lindblad(np.pi / 4, 0.8)
    w = np.linalg.eigvals(spec.generator)
    assert np.abs(w).min() < 1e-10           # steady state
    assert w.real.max() < 1e-10              # no growing modes


def test_composite_trotter_halving():
    report = composite_trotter_check(np.pi / 4, 0.5, 1.0, [100, 200, 400])
    assert report.halving_ok
    for ratio in report.ratios:
        assert abs(ratio - 2.0) < 0.6


def test_composite_trotter_gamma_zero():
    report = composite_trotter_check(np.pi / 4, 0.0, 0.8, [50, 100])
    for _, unitary_err, composite_err in report.rows:
        assert abs(unitary_err - composite_err) < 1e-12


def test_composite_trotter_zero_time():
    report = composite_trotter_check(np.pi / 4, 0.5, 0.0, [10, 20])
    for _, unitary_err, composite_err in report.rows:
        assert unitary_err < 1e-12 and composite_err < 1e-12
