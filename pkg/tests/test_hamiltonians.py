import math

import numpy as np
import pytest
from pydantic import ValidationError

from errors import InvalidArgumentError, SingularGeneratorError
from hamiltonians import (SystemParams, check_conservation, degenerate_raman_hamiltonian, effective_block,
                          effective_eigensystem, effective_hamiltonian, full_hamiltonian,
                          reduction_scaling, sw_generator, transformed_hamiltonian,
                          verify_dispersive_reduction)
from hilbert import FockSpace
from numerics import hermitian_eig, is_hermitian


# ─── SystemParams ──────────────────────────────────────────────────────────────
def test_from_ratios_derived_quantities(paper):
    assert paper.lambda0 == pytest.approx(0.01)
    assert paper.delta == pytest.approx(0.001)
    assert paper.epsilon == pytest.approx(1e-5)
    assert paper.g2 == pytest.approx(1 / math.sqrt(1 + 1e-5))
    assert paper.g2_condition_holds()
    assert paper.time(math.pi / 2) == pytest.approx(50 * math.pi)
    assert paper.e_g2 == paper.e_g1 + paper.delta
    assert paper.dispersive_valid


def test_lambda_matches_definition(paper):
    expected = -paper.g1 * paper.g2 * (2 + paper.epsilon) / (2 * paper.Delta)
    assert paper.lam == pytest.approx(expected, rel=1e-15)


def test_params_are_frozen(paper):
    with pytest.raises(ValidationError):
        paper.Delta = 3.0


@pytest.mark.parametrize("fields", [dict(Delta=0, g1=1, g2=1), dict(Delta=1, g1=-1, g2=1)])
def test_params_reject_bad_values(fields):
    with pytest.raises(InvalidArgumentError):
        SystemParams(**fields)


def test_weak_dispersive_flags():
    p = SystemParams.from_ratios(5.0, 0.1)
    assert not p.validity_flags()["Delta_over_g1"]
    assert not p.dispersive_valid


# ─── full model ────────────────────────────────────────────────────────────────
def _brute_force_full(p, dim):
    energies = {0: p.e_g1, 1: p.e_g2, 2: p.e_e}
    h = np.zeros((3 * dim, 3 * dim), dtype=complex)
    for level in range(3):
        for n in range(dim):
            h[level * dim + n, level * dim + n] = energies[level] + p.omega * n
    for level, g in ((0, p.g1), (1, p.g2)):
        for n in range(1, dim):
            # ⟨e, n-1| H |level, n⟩ = g √n
            h[2 * dim + n - 1, level * dim + n] = g * math.sqrt(n)
            h[level * dim + n, 2 * dim + n - 1] = g * math.sqrt(n)
    return h


def test_full_hamiltonian_matches_element_oracle():
    p = SystemParams(omega=0.3, e_g1=-0.2, delta=0.15, Delta=2.0, g1=0.7, g2=0.4)
    space = FockSpace(4)
    h = full_hamiltonian(p, space)
    oracle = _brute_force_full(p, 4)
    np.testing.assert_allclose(h, oracle, atol=1e-14)
    np.testing.assert_allclose(hermitian_eig(h)[0], np.linalg.eigvalsh(oracle), atol=1e-12)


def test_full_hamiltonian_decoupled_limit():
    p = SystemParams(omega=0.5, e_g1=1.5, delta=0.2, Delta=3.0, g1=0.0, g2=0.0)
    space = FockSpace(6)
    h = full_hamiltonian(p, space)
    for n in range(6):
        v = np.zeros(18)
        v[n] = 1
        np.testing.assert_allclose(h @ v, (p.e_g1 + p.omega * n) * v, atol=1e-14)


def test_hamiltonians_hermitian_and_conserving(paper):
    space = FockSpace(10)
    assert is_hermitian(full_hamiltonian(paper, space))
    assert is_hermitian(effective_hamiltonian(paper, space))
    full, eff = check_conservation(paper, space)
    assert full <= 1e-12
    assert eff <= 1e-12


# ─── effective model ───────────────────────────────────────────────────────────
def test_degenerate_raman_equality_is_exact(raman):
    space = FockSpace(16)
    np.testing.assert_array_equal(effective_hamiltonian(raman, space),
                                  degenerate_raman_hamiltonian(1.0, 100.0, space))


def test_effective_hamiltonian_photon_number_blocks(paper):
    space = FockSpace(6)
    h = effective_hamiltonian(paper, space)
    # no element may connect different photon numbers
    for i in range(12):
        for j in range(12):
            if i % 6 != j % 6:
                assert h[i, j] == 0


# ─── Schrieffer-Wolff reduction ────────────────────────────────────────────────
def test_generator_is_antihermitian(paper):
    s = sw_generator(paper, FockSpace(8))
    np.testing.assert_allclose(s.conj().T, -s, atol=1e-15)


def test_generator_singular():
    with pytest.raises(SingularGeneratorError):
        sw_generator(SystemParams(delta=1.0, Delta=1.0, g1=0.1, g2=0.1), FockSpace(4))


def test_transformed_hamiltonian_is_hermitian(paper):
    assert is_hermitian(transformed_hamiltonian(paper, FockSpace(10)), rtol=1e-10)


def test_zero_coupling_residual_is_exactly_zero():
    report = verify_dispersive_reduction(SystemParams(delta=0.1, Delta=1.0, g1=0.0, g2=0.0), FockSpace(8))
    assert report.ground_residual == 0
    assert report.leakage == 0
    assert report.relative_residual == 0


def test_leakage_shrinks_fourfold_when_detuning_doubles():
    space = FockSpace(12)
    p = SystemParams.from_ratios(50.0, 0.1)
    for params in (p, p.model_copy(update={"Delta": 2 * p.Delta})):
        leak, residual = reduction_scaling(params, space)
        assert 2.8 <= leak <= 5.2
        assert residual >= 2.8


def test_relative_residual_bound_in_deep_dispersive_regime():
    # δ/Δ = 0.01 at Δ/g1 = 1000
    p = SystemParams.from_ratios(1000.0, 1e4)
    assert p.epsilon == pytest.approx(0.01)
    report = verify_dispersive_reduction(p, FockSpace(30))
    assert report.relative_residual <= 1e-3


def test_weak_dispersive_residual_is_degraded(paper):
    space = FockSpace(12)
    weak = verify_dispersive_reduction(SystemParams.from_ratios(5.0, 0.1), space)
    good = verify_dispersive_reduction(paper, space)
    assert not weak.dispersive_valid
    assert weak.relative_residual > 10 * good.relative_residual


# ─── eigensystem ───────────────────────────────────────────────────────────────
def test_eigensystem_symmetric_degenerate_case(raman):
    es = effective_eigensystem(raman, 1)
    assert es.c1 == pytest.approx(1 / math.sqrt(2))
    assert es.c2 == pytest.approx(1 / math.sqrt(2))
    plus, minus = es.closed_form_vectors()
    np.testing.assert_allclose(plus, np.array([-1, 1]) / math.sqrt(2))
    np.testing.assert_allclose(minus, np.array([1, 1]) / math.sqrt(2))


@pytest.mark.parametrize("n", [1, 3, 7])
def test_eigensystem_splitting_at_degeneracy(raman, n):
    es = effective_eigensystem(raman, n)
    assert es.energy_plus - es.energy_minus == pytest.approx(2 * raman.lambda0 * n, rel=1e-12)
    np.testing.assert_allclose(es.exact_energies, (es.energy_minus, es.energy_plus), atol=1e-14)


def test_closed_form_vectors_are_eigenvectors_at_degeneracy(raman):
    es = effective_eigensystem(raman, 4)
    plus, minus = es.closed_form_vectors()
    block = effective_block(raman, 4)
    np.testing.assert_allclose(block @ plus, es.energy_plus * plus, atol=1e-14)
    np.testing.assert_allclose(block @ minus, es.energy_minus * minus, atol=1e-14)


def test_eigensystem_generic_point_matches_exact_block():
    p = SystemParams(delta=0.1, Delta=100.0, g1=10.0, g2=9.5)
    es = effective_eigensystem(p, 5)
    splitting = es.energy_plus - es.energy_minus
    lo, hi = es.exact_energies
    assert abs(hi - es.energy_plus) <= 1e-3 * splitting
    assert abs(lo - es.energy_minus) <= 1e-3 * splitting
    assert es.c1 ** 2 + es.c2 ** 2 == pytest.approx(1, abs=1e-2)


def test_eigensystem_without_photons(paper):
    es = effective_eigensystem(paper, 0)
    assert es.c1 is None and es.c2 is None
    assert es.closed_form_vectors() is None
    assert es.exact_energies == pytest.approx((paper.e_g1, paper.e_g2))


def test_eigensystem_rejects_negative_n(paper):
    with pytest.raises(InvalidArgumentError):
        effective_eigensystem(paper, -1)


def test_eigenvectors_approach_symmetric_states_as_splitting_vanishes():
    deviations = []
    for eps in (1e-4, 1e-5, 1e-6):
        p = SystemParams.from_ratios(100.0, eps * 100.0 / 0.01)
        assert p.epsilon == pytest.approx(eps)
        vecs = effective_eigensystem(p, 5).exact_vectors
        target = np.array([1, 1]) / math.sqrt(2)
        deviations.append(1 - max(abs(np.vdot(target, vecs[:, k])) ** 2 for k in range(2)))
    assert deviations[0] > deviations[1] > deviations[2]
    assert deviations[2] <= 1e-5
