import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from closed_form import assembled_state, c21_entanglement
from errors import DegenerateStateError, InvalidArgumentError, NumericContractError, PathValidityError
from hamiltonians import SystemParams
from hilbert import FockSpace
from protocol import (ComputePath, CompositeState, RoundTripPoint, apply_pairwise, atomic_inversion,
                      excited_population, ground_projection, initial_transfer_state, measure_atoms,
                      prepare_c11, project_cavities, retrieve_evolve, roundtrip, sample_outcome,
                      select_outcome, singlet, transfer_evolve, transfer_outcomes)
from numerics import entanglement_entropy, fidelity


# ─── types ─────────────────────────────────────────────────────────────────────
@pytest.mark.parametrize("raw,expected", [("full", ComputePath.FULL), ("closed_form", ComputePath.CLOSED),
                                          ("Effective_Numeric", ComputePath.EFFECTIVE), (" closed ", ComputePath.CLOSED)])
def test_path_parse(raw, expected):
    assert ComputePath.parse(raw) is expected


def test_path_parse_rejects_unknown():
    with pytest.raises(InvalidArgumentError):
        ComputePath.parse("exact")


def test_composite_state_checks_dims():
    with pytest.raises(NumericContractError):
        CompositeState(np.zeros(24), (2, 3, 2, 2))
    with pytest.raises(NumericContractError):
        CompositeState(np.zeros(15), (2, 2, 2, 2))


def test_singlet_is_one_ebit():
    assert entanglement_entropy(singlet(2), (2, 2), [0]) == pytest.approx(1, abs=1e-12)
    assert entanglement_entropy(singlet(3), (3, 3), [0]) == pytest.approx(1, abs=1e-12)


def test_apply_pairwise_matches_explicit_kron(rng):
    a, f = 2, 3
    u = unitary_group.rvs(a * f, random_state=3)
    psi = rng.normal(size=a * a * f * f) + 1j * rng.normal(size=a * a * f * f)
    out = apply_pairwise(u, CompositeState(psi, (a, a, f, f))).tensor()
    # reorder to (atom1, cavA, atom2, cavB), apply U ⊗ U, reorder back
    paired = psi.reshape(a, a, f, f).transpose(0, 2, 1, 3).reshape(-1)
    expected = (np.kron(u, u) @ paired).reshape(a, f, a, f).transpose(0, 2, 1, 3)
    np.testing.assert_allclose(out, expected, atol=1e-12)


# ─── transfer ──────────────────────────────────────────────────────────────────
def test_initial_state_measurement():
    space = FockSpace.for_amplitude(2.0)
    outcomes = measure_atoms(initial_transfer_state(2.0, space))
    assert [o.label for o in outcomes] == ["g1g1", "g1g2", "g2g1", "g2g2"]
    probs = {o.label: o.probability for o in outcomes}
    assert probs["g1g2"] == pytest.approx(0.5, abs=1e-12)
    assert probs["g2g1"] == pytest.approx(0.5, abs=1e-12)
    assert select_outcome(outcomes, "g1g1").annihilated
    assert select_outcome(outcomes, "g1g2").entropy() == pytest.approx(0, abs=1e-10)
    with pytest.raises(DegenerateStateError):
        select_outcome(outcomes, "g2g2").entropy()


def test_transfer_at_time_zero_is_identity(paper):
    s0 = initial_transfer_state(1.0, FockSpace.for_amplitude(1.0))
    out = transfer_evolve(s0, 0.0, paper, "effective")
    np.testing.assert_array_equal(out.vector, s0.vector)
    assert out.vector is not s0.vector


@pytest.mark.parametrize("path", ["effective", "closed"])
def test_outcome_probabilities_sum_to_one(paper, path):
    space = FockSpace.for_amplitude(2.0)
    stored = transfer_evolve(initial_transfer_state(2.0, space), paper.time(1.1), paper, path)
    assert sum(o.probability for o in measure_atoms(stored)) == pytest.approx(1, abs=1e-9)


def test_full_path_probabilities_miss_excited_weight(paper):
    space = FockSpace.for_amplitude(1.0)
    stored = transfer_evolve(initial_transfer_state(1.0, space), paper.time(math.pi / 2), paper, "full")
    assert stored.atom_dim == 3
    prob = np.abs(stored.tensor()) ** 2
    excited = prob.sum() - prob[:2, :2].sum()
    total = sum(o.probability for o in measure_atoms(stored))
    assert total == pytest.approx(1 - excited, abs=1e-10)
    assert 0 < max(excited_population(stored)) <= 2e-3


def test_paths_agree_in_dispersive_regime(paper):
    space = FockSpace.for_amplitude(1.0)
    s0 = initial_transfer_state(1.0, space)
    t = paper.time(math.pi / 2)
    closed = transfer_evolve(s0, t, paper, "closed")
    eff = transfer_evolve(s0, t, paper, "effective")
    full = transfer_evolve(s0, t, paper, "full")
    assert fidelity(closed.vector, eff.vector) >= 1 - 1e-4
    assert fidelity(ground_projection(full).vector, eff.vector) >= 0.99


def test_closed_transfer_matches_assembled_state(paper):
    alpha, t = 1.5, paper.time(0.8)
    space = FockSpace.for_amplitude(alpha)
    closed = transfer_evolve(initial_transfer_state(alpha, space), t, paper, "closed")
    assert fidelity(closed.vector, assembled_state(alpha, t, paper, space)) == pytest.approx(1, abs=1e-10)


def test_stored_c21_entropy_matches_closed_form(paper):
    alpha, t = 3.0, paper.time(math.pi / 2)
    space = FockSpace.for_amplitude(alpha)
    stored = transfer_evolve(initial_transfer_state(alpha, space), t, paper, "closed")
    measured = select_outcome(measure_atoms(stored), "g2g1")
    assert measured.entropy() == pytest.approx(c21_entanglement(alpha, t, paper, space).entropy, abs=1e-6)


@pytest.mark.parametrize("path", ["closed", "effective", "full"])
def test_stored_c21_entropy_independent_of_field_frequency(paper, path):
    fast = SystemParams.from_ratios(100.0, 0.1, omega_over_lambda0=10.0)
    space = FockSpace.for_amplitude(2.0)
    s0 = initial_transfer_state(2.0, space)
    base = select_outcome(measure_atoms(transfer_evolve(s0, paper.time(1.1), paper, path)), "g2g1")
    moved = select_outcome(measure_atoms(transfer_evolve(s0, fast.time(1.1), fast, path)), "g2g1")
    assert moved.entropy() == pytest.approx(base.entropy(), abs=1e-9)


def test_closed_path_rejects_three_level_atoms(paper):
    state = CompositeState(np.zeros(3 * 3 * 4 * 4), (3, 3, 4, 4))
    with pytest.raises(PathValidityError):
        transfer_evolve(state, 1.0, paper, "closed")


def test_closed_path_requires_g2_condition():
    p = SystemParams.from_ratios(100.0, 0.1, g2=1.0)
    with pytest.raises(PathValidityError):
        transfer_evolve(initial_transfer_state(1.0, FockSpace(21)), 1.0, p, "closed")


def test_sample_outcome_is_seeded():
    outcomes = measure_atoms(initial_transfer_state(1.0, FockSpace(21)))
    first = [sample_outcome(outcomes, np.random.default_rng(7)).label for _ in range(3)]
    second = [sample_outcome(outcomes, np.random.default_rng(7)).label for _ in range(3)]
    assert first == second
    assert set(first) <= {"g1g2", "g2g1"}


# ─── retrieval ─────────────────────────────────────────────────────────────────
def test_c11_carries_one_ebit(paper):
    space = FockSpace.for_amplitude(2.0)
    c11 = prepare_c11(2.0, paper.time(math.pi / 2), paper, space)
    assert np.linalg.norm(c11) == pytest.approx(1, abs=1e-12)
    assert entanglement_entropy(c11, (space.dim, space.dim), [0]) == pytest.approx(1, abs=1e-9)


def test_c11_vanishes_at_time_zero(paper):
    with pytest.raises(DegenerateStateError):
        prepare_c11(2.0, 0.0, paper, FockSpace.for_amplitude(2.0))


def test_retrieve_evolve_input_checks(paper):
    with pytest.raises(NumericContractError):
        retrieve_evolve(np.ones(5) / math.sqrt(5), 1.0, paper, "effective")
    with pytest.raises(NumericContractError):
        retrieve_evolve(np.ones(4), 1.0, paper, "effective")


@pytest.mark.parametrize("path", ["closed", "effective"])
@pytest.mark.parametrize("lambda0_t", [0.4, 1.0, 2.3])
def test_retrieval_recovers_singlet(paper, path, lambda0_t):
    report = roundtrip(RoundTripPoint(alpha=2.0, retrieval_lambda0_t=lambda0_t, path=path))
    assert report.projection_weight > 0
    assert report.retrieval_fidelity == pytest.approx(1, abs=1e-9)
    assert report.e_retrieved == pytest.approx(1, abs=1e-9)
    assert report.e_stored == pytest.approx(1, abs=1e-9)
    assert report.e_initial == pytest.approx(1, abs=1e-12)


def test_retrieval_independent_of_field_frequency():
    base = roundtrip(RoundTripPoint(alpha=2.0, retrieval_lambda0_t=1.0, path="effective"))
    fast = roundtrip(RoundTripPoint(alpha=2.0, retrieval_lambda0_t=1.0, path="effective", omega_over_lambda0=10.0))
    assert fast.retrieval_fidelity == pytest.approx(1, abs=1e-9)
    assert fast.projection_weight == pytest.approx(base.projection_weight, abs=1e-9)
    assert fast.e_stored == pytest.approx(base.e_stored, abs=1e-9)


def test_projection_annihilated_at_zero_retrieval_time():
    with pytest.raises(DegenerateStateError) as err:
        roundtrip(RoundTripPoint(alpha=2.0, retrieval_lambda0_t=0.0))
    partial = err.value.partial
    assert partial.e_stored == pytest.approx(1, abs=1e-9)
    assert partial.projection_weight is None


def test_roundtrip_annihilated_outcome_reports_partial():
    with pytest.raises(DegenerateStateError) as err:
        roundtrip(RoundTripPoint(alpha=2.0, lambda0_t=0.0, outcome="g1g1"))
    partial = err.value.partial
    assert partial.outcome_probs["g1g2"] == pytest.approx(0.5, abs=1e-12)
    assert partial.e_stored is None


def test_roundtrip_product_stored_state():
    with pytest.raises(DegenerateStateError) as err:
        roundtrip(RoundTripPoint(alpha=0.0, outcome="g1g2"))
    assert err.value.partial.e_stored == pytest.approx(0, abs=1e-9)


def test_roundtrip_rejects_unknown_outcome():
    with pytest.raises(InvalidArgumentError):
        roundtrip(RoundTripPoint(alpha=1.0, outcome="ee"))


def test_transfer_outcomes_matches_roundtrip_probabilities():
    point = RoundTripPoint(alpha=2.0, retrieval_lambda0_t=1.0)
    probs = {o.label: o.probability for o in transfer_outcomes(point)}
    assert probs == pytest.approx(roundtrip(point).outcome_probs)


def test_project_cavities_rejects_orthogonal_projection():
    space = FockSpace(16)
    vec = np.zeros((2, 2, 16, 16), dtype=complex)
    vec[0, 1, 1, 0] = 1
    with pytest.raises(DegenerateStateError):
        project_cavities(CompositeState(vec, (2, 2, 16, 16)), 0.0, 0.0)
    weight, atoms = project_cavities(CompositeState(vec, (2, 2, 16, 16)), 1.0, 0.0)
    assert weight == pytest.approx(math.exp(-1), abs=1e-12)
    np.testing.assert_allclose(np.abs(atoms), [0, 1, 0, 0], atol=1e-12)


# ─── atomic inversion ──────────────────────────────────────────────────────────
@pytest.mark.parametrize("path", ["effective", "closed"])
def test_inversion_is_periodic_without_splitting(raman, path):
    times = [0.0, 0.3, 0.3 + math.pi, 1.7, 1.7 + 2 * math.pi]
    w = atomic_inversion(1.5, times, raman, path)
    assert w[0] == pytest.approx(-1, abs=1e-12)
    assert w[2] == pytest.approx(w[1], abs=1e-9)
    assert w[4] == pytest.approx(w[3], abs=1e-9)
    assert np.all(np.abs(w) <= 1 + 1e-12)


def test_inversion_full_path_tracks_effective(paper):
    times = [0.5, 1.2]
    full = atomic_inversion(1.0, times, paper, "full")
    eff = atomic_inversion(1.0, times, paper, "effective")
    np.testing.assert_allclose(full, eff, atol=1e-2)
