"""
lambda-reciprocation — transfer, storage and retrieval
━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
Composite states live on atom1 ⊗ atom2 ⊗ cavityA ⊗ cavityB. Atom1 only ever talks to
cavity A and atom2 to cavity B, so every evolution is U ⊗ U applied pairwise.

Computation paths:
  full       three-level atoms, full Hamiltonian
  effective  two-level atoms, dispersive Hamiltonian diagonalized numerically
  closed     two-level atoms, closed-form propagator (renormalized)
"""

from __future__ import annotations
import logging, math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from closed_form import closed_form_propagator, require_closed_form, special_states
from errors import (DegenerateStateError, InvalidArgumentError, NumericContractError,
                    PathValidityError)
from hamiltonians import SystemParams, effective_hamiltonian, full_hamiltonian
from hilbert import FockSpace, THREE_LEVEL, TWO_LEVEL, coherent_state
from numerics import entanglement_entropy, fidelity, propagator

logger = logging.getLogger(__name__)

OUTCOME_LABELS = ("g1g1", "g1g2", "g2g1", "g2g2")
ANNIHILATED = 1e-14
STORED_PRODUCT = 1e-9


# ─── TYPES ─────────────────────────────────────────────────────────────────────
class ComputePath(str, Enum):
    FULL      = "full"
    EFFECTIVE = "effective"
    CLOSED    = "closed"

    @classmethod
    def parse(cls, value) -> "ComputePath":
        if isinstance(value, cls):
            return value
        aliases = {"effective_numeric": "effective", "closed_form": "closed"}
        key = aliases.get(str(value).strip().lower(), str(value).strip().lower())
        try:
            return cls(key)
        except ValueError:
            raise InvalidArgumentError(f"Unknown path '{value}'. Allowed values: {[m.value for m in cls]}")

    @property
    def atom_dim(self) -> int:
        return THREE_LEVEL.dim if self is ComputePath.FULL else TWO_LEVEL.dim


@dataclass(frozen=True)
class CompositeState:
    vector: np.ndarray
    dims: Tuple[int, int, int, int]   # (atom1, atom2, cavityA, cavityB)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 4 or dims[0] != dims[1] or dims[2] != dims[3]:
            raise NumericContractError(f"Composite dims must be (A, A, F, F), got {dims}")
        if math.prod(dims) != np.asarray(self.vector).size:
            raise NumericContractError(f"dims {dims} inconsistent with vector size {np.asarray(self.vector).size}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "vector", np.asarray(self.vector, dtype=complex).ravel())

    @property
    def atom_dim(self) -> int:
        return self.dims[0]

    @property
    def fock_dim(self) -> int:
        return self.dims[2]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def tensor(self) -> np.ndarray:
        return self.vector.reshape(self.dims)


@dataclass(frozen=True)
class MeasurementOutcome:
    labels: Tuple[str, str]
    probability: float
    cavity_state: Optional[np.ndarray]   # normalized, on cavityA ⊗ cavityB
    fock_dim: int

    @property
    def label(self) -> str:
        return "".join(self.labels)

    @property
    def annihilated(self) -> bool:
        return self.cavity_state is None

    def entropy(self) -> float:
        if self.cavity_state is None:
            raise DegenerateStateError(f"Outcome {self.label} was annihilated (probability {self.probability:.3e})")
        return entanglement_entropy(self.cavity_state, (self.fock_dim, self.fock_dim), [0])


def singlet(atom_dim: int = 2) -> np.ndarray:
    """(|g1 g2⟩ − |g2 g1⟩)/√2 in an atom_dim ⊗ atom_dim space."""
    v = np.zeros(atom_dim * atom_dim, dtype=complex)
    v[0 * atom_dim + 1] = 1 / math.sqrt(2)
    v[1 * atom_dim + 0] = -1 / math.sqrt(2)
    return v


# ─── PAIR EVOLUTION ────────────────────────────────────────────────────────────
def pair_propagator(t: float, p: SystemParams, space: FockSpace, path: ComputePath) -> np.ndarray:
    """Single atom ⊗ cavity evolution operator for the chosen path."""
    path = ComputePath.parse(path)
    if path is ComputePath.FULL:
        return propagator(full_hamiltonian(p, space), t)
    if path is ComputePath.EFFECTIVE:
        return propagator(effective_hamiltonian(p, space), t)
    return closed_form_propagator(t, p, space)


def apply_pairwise(u: np.ndarray, state: CompositeState) -> CompositeState:
    a, _, f, _ = state.dims
    if u.shape != (a * f, a * f):
        raise NumericContractError(f"Pair operator {u.shape} does not match atom dim {a}, Fock dim {f}")
    u4 = u.reshape(a, f, a, f)
    psi = state.tensor()
    psi = np.einsum("imjk,jlkn->ilmn", u4, psi, optimize=True)   # atom1 with cavity A
    psi = np.einsum("jnbk,ibmk->ijmn", u4, psi, optimize=True)   # atom2 with cavity B
    return CompositeState(psi, state.dims)


def embed_three_level(state: CompositeState) -> CompositeState:
    """Two-level atoms injected as three-level atoms with zero |e⟩ amplitude."""
    if state.atom_dim == THREE_LEVEL.dim:
        return state
    _, _, f, _ = state.dims
    psi = np.zeros((3, 3, f, f), dtype=complex)
    psi[:2, :2] = state.tensor()
    return CompositeState(psi, (3, 3, f, f))


def ground_projection(state: CompositeState) -> CompositeState:
    """Drop |e⟩ components; no renormalization."""
    if state.atom_dim == TWO_LEVEL.dim:
        return state
    _, _, f, _ = state.dims
    return CompositeState(state.tensor()[:2, :2], (2, 2, f, f))


def excited_population(state: CompositeState) -> Tuple[float, float]:
    if state.atom_dim < THREE_LEVEL.dim:
        return 0.0, 0.0
    prob = np.abs(state.tensor()) ** 2
    return float(prob[2].sum()), float(prob[:, 2].sum())


def _evolve_pairs(state: CompositeState, t: float, p: SystemParams, path: ComputePath) -> CompositeState:
    path = ComputePath.parse(path)
    if path is ComputePath.FULL:
        state = embed_three_level(state)
    elif state.atom_dim != TWO_LEVEL.dim:
        raise PathValidityError(f"Path '{path.value}' needs two-level atoms, got atom dim {state.atom_dim}")
    if path is ComputePath.CLOSED:
        require_closed_form(p)
    if t == 0:
        return CompositeState(state.vector.copy(), state.dims)
    space = FockSpace(state.fock_dim)
    out = apply_pairwise(pair_propagator(t, p, space, path), state)
    if path is ComputePath.CLOSED:
        before, after = state.norm, out.norm
        logger.debug("closed-form norm defect %.3e at t=%.6g", after / before - 1, t)
        out = CompositeState(out.vector * (before / after), out.dims)
    return out


# ─── TRANSFER (atoms → cavities) ───────────────────────────────────────────────
def initial_transfer_state(alpha: complex, space: FockSpace) -> CompositeState:
    """|α⟩_a|α⟩_b (|g1 g2⟩ − |g2 g1⟩)/√2."""
    c = coherent_state(alpha, space)
    c = c / np.linalg.norm(c)
    psi = np.kron(singlet(2), np.kron(c, c))
    return CompositeState(psi, (2, 2, space.dim, space.dim))


def transfer_evolve(state: CompositeState, t: float, p: SystemParams, path) -> CompositeState:
    return _evolve_pairs(state, t, p, path)


def measure_atoms(state: CompositeState) -> List[MeasurementOutcome]:
    """Born projection onto g1g1, g1g2, g2g1, g2g2 (in that order)."""
    psi = state.tensor()
    f = state.fock_dim
    outcomes = []
    for label in OUTCOME_LABELS:
        i, j = TWO_LEVEL.index(label[:2]), TWO_LEVEL.index(label[2:])
        comp = psi[i, j].ravel()
        prob = float(np.vdot(comp, comp).real)
        cavity = comp / math.sqrt(prob) if prob >= ANNIHILATED else None
        outcomes.append(MeasurementOutcome((label[:2], label[2:]), prob, cavity, f))
    total = sum(o.probability for o in outcomes)
    logger.debug("measure_atoms total probability %.12g", total)
    return outcomes


def select_outcome(outcomes: Sequence[MeasurementOutcome], label: str) -> MeasurementOutcome:
    for o in outcomes:
        if o.label == label:
            return o
    raise InvalidArgumentError(f"Unknown outcome '{label}'. Allowed values: {list(OUTCOME_LABELS)}")


def sample_outcome(outcomes: Sequence[MeasurementOutcome], rng: np.random.Generator) -> MeasurementOutcome:
    probs = np.array([o.probability for o in outcomes])
    return outcomes[int(rng.choice(len(outcomes), p=probs / probs.sum()))]


# ─── RETRIEVAL (cavities → atoms) ──────────────────────────────────────────────
def prepare_c11(alpha: complex, t_i: float, p: SystemParams, space: FockSpace) -> np.ndarray:
    """Normalized |ξ⁺⟩_a|α−⟩_b − |α−⟩_a|ξ⁺⟩_b at the preparation time t_i."""
    st = special_states(alpha, t_i, p, space)
    c11 = np.kron(st.xi_plus, st.alpha_minus) - np.kron(st.alpha_minus, st.xi_plus)
    norm2 = float(np.vdot(c11, c11).real)
    if norm2 < ANNIHILATED:
        raise DegenerateStateError(f"C_11 vanishes at alpha={alpha}, lambda0*t_i={p.lambda0 * t_i:.6g}")
    return c11 / math.sqrt(norm2)


def retrieve_evolve(cavities: np.ndarray, t: float, p: SystemParams, path) -> CompositeState:
    """Fresh atoms in |g1 g1⟩ cross the cavities for time t."""
    cav = np.asarray(cavities, dtype=complex).ravel()
    f = math.isqrt(cav.size)
    if f * f != cav.size:
        raise NumericContractError(f"Cavity vector size {cav.size} is not a square")
    if abs(np.linalg.norm(cav) - 1) > 1e-9:
        raise NumericContractError("Cavity state must be normalized")
    atoms = np.kron(TWO_LEVEL.ket("g1"), TWO_LEVEL.ket("g1"))
    return _evolve_pairs(CompositeState(np.kron(atoms, cav), (2, 2, f, f)), t, p, path)


def project_cavities(state: CompositeState, alpha_a: complex, alpha_b: complex) -> Tuple[float, np.ndarray]:
    """Contract the cavities with ⟨α_a|⟨α_b|; returns (weight, normalized atomic state)."""
    space = FockSpace(state.fock_dim)
    ca, cb = coherent_state(alpha_a, space), coherent_state(alpha_b, space)
    rem = np.einsum("ijmn,m,n->ij", state.tensor(), ca.conj(), cb.conj()).ravel()
    weight = float(np.vdot(rem, rem).real)
    if weight < ANNIHILATED:
        raise DegenerateStateError(f"Coherent projection annihilated the state (weight {weight:.3e})")
    return weight, rem / math.sqrt(weight)


def retrieval_amplitude(alpha: complex, t_i: float, t_r: float, p: SystemParams) -> complex:
    """Freely rotated initial amplitude e^{-iω(t_i + t_r)}α."""
    return complex(np.exp(-1j * p.omega * (t_i + t_r)) * alpha)


# ─── ATOMIC INVERSION ──────────────────────────────────────────────────────────
def atomic_inversion(alpha: complex, lambda0_times: Sequence[float], p: SystemParams, path,
                     label: str = "g1", space: Optional[FockSpace] = None) -> np.ndarray:
    """⟨σ_g2g2 − σ_g1g1⟩ of one atom ⊗ cavity pair started in |label, α⟩."""
    path = ComputePath.parse(path)
    space = space or FockSpace.for_amplitude(alpha)
    basis = THREE_LEVEL if path is ComputePath.FULL else TWO_LEVEL
    c = coherent_state(alpha, space)
    psi0 = np.kron(basis.ket(label), c / np.linalg.norm(c))
    out = []
    for lt in lambda0_times:
        psi = pair_propagator(p.time(lt), p, space, path) @ psi0
        pop = (np.abs(psi.reshape(basis.dim, space.dim)) ** 2).sum(axis=1)
        out.append((pop[1] - pop[0]) / pop.sum())
    return np.array(out)


# ─── ROUND TRIP ────────────────────────────────────────────────────────────────
class RoundTripPoint(BaseModel):
    alpha: float
    lambda0_t: float = math.pi / 2
    retrieval_lambda0_t: float = math.pi / 2
    delta_over_lambda0: float = 0.1
    Delta_over_g1: float = 100.0
    omega_over_lambda0: float = 0.0
    g1: float = 1.0
    e_g1: float = 0.0
    outcome: str = "g1g1"
    path: str = "closed"
    fock_dim: Optional[int] = None


class RoundTripReport(BaseModel):
    outcome: str
    path: str
    e_initial: float
    outcome_probs: Dict[str, float] = {}
    e_stored: Optional[float] = None
    projection_weight: Optional[float] = None
    retrieval_fidelity: Optional[float] = None
    e_retrieved: Optional[float] = None
    excited_population: float = 0.0


def _setup(point: RoundTripPoint) -> Tuple[ComputePath, SystemParams, FockSpace]:
    path = ComputePath.parse(point.path)
    if point.outcome not in OUTCOME_LABELS:
        raise InvalidArgumentError(f"Unknown outcome '{point.outcome}'. Allowed values: {list(OUTCOME_LABELS)}")
    p = SystemParams.from_ratios(point.Delta_over_g1, point.delta_over_lambda0, point.omega_over_lambda0,
                                 g1=point.g1, e_g1=point.e_g1)
    return path, p, FockSpace.for_amplitude(point.alpha, dim=point.fock_dim)


def transfer_outcomes(point: RoundTripPoint) -> List[MeasurementOutcome]:
    """The four measurement outcomes after the transfer stage of a round trip."""
    path, p, space = _setup(point)
    stored = transfer_evolve(initial_transfer_state(point.alpha, space), p.time(point.lambda0_t), p, path)
    return measure_atoms(stored)


def roundtrip(point: RoundTripPoint) -> RoundTripReport:
    path, p, space = _setup(point)
    t_i, t_r = p.time(point.lambda0_t), p.time(point.retrieval_lambda0_t)

    state0 = initial_transfer_state(point.alpha, space)
    report = RoundTripReport(outcome=point.outcome, path=path.value,
                             e_initial=entanglement_entropy(state0.vector, state0.dims, [0]))

    stored = transfer_evolve(state0, t_i, p, path)
    report.excited_population = max(excited_population(stored))
    outcomes = measure_atoms(stored)
    report.outcome_probs = {o.label: o.probability for o in outcomes}
    chosen = select_outcome(outcomes, point.outcome)
    if chosen.annihilated:
        raise DegenerateStateError(f"Outcome {chosen.label} has probability {chosen.probability:.3e}", partial=report)
    report.e_stored = chosen.entropy()
    if report.e_stored <= STORED_PRODUCT:
        raise DegenerateStateError(f"Stored cavity state for {chosen.label} is a product state", partial=report)

    retrieved = retrieve_evolve(chosen.cavity_state, t_r, p, path)
    report.excited_population = max(report.excited_population, *excited_population(retrieved))
    amp = retrieval_amplitude(point.alpha, t_i, t_r, p)
    try:
        weight, atoms = project_cavities(retrieved, amp, amp)
    except DegenerateStateError as e:
        raise DegenerateStateError(e.detail, partial=report)
    a = retrieved.atom_dim
    report.projection_weight = weight
    report.retrieval_fidelity = fidelity(atoms, singlet(a))
    report.e_retrieved = entanglement_entropy(atoms, (a, a), [0])
    logger.info("roundtrip alpha=%s outcome=%s path=%s fidelity=%.12g weight=%.6g",
                point.alpha, point.outcome, path.value, report.retrieval_fidelity, weight)
    return report
