"""
lambda-reciprocation — Hamiltonians of the lambda atom / single-mode cavity
━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
Full model on (g1, g2, e) ⊗ Fock, dispersive model on (g1, g2) ⊗ Fock.
Kron ordering is atom ⊗ field, so basis index = level * F + n.
"""

from __future__ import annotations
import logging, math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from errors import InvalidArgumentError, SingularGeneratorError
from hilbert import FockSpace, THREE_LEVEL, TWO_LEVEL, atom_projector, ladder_ops
from numerics import commutator, exp_antihermitian, hermitian_eig
import settings

logger = logging.getLogger(__name__)

G2_CONDITION_RTOL = 1e-6


# ─── PARAMETERS ────────────────────────────────────────────────────────────────
class SystemParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    omega: float = 0.0
    e_g1:  float = 0.0
    delta: float = 0.0
    Delta: float
    g1:    float
    g2:    float

    @model_validator(mode="after")
    def _check(self):
        if not self.Delta > 0:
            raise InvalidArgumentError(f"Delta must be > 0, got {self.Delta}")
        if self.g1 < 0 or self.g2 < 0:
            raise InvalidArgumentError(f"Couplings must be >= 0, got g1={self.g1}, g2={self.g2}")
        return self

    @classmethod
    def from_ratios(cls, Delta_over_g1: float, delta_over_lambda0: float = 0.1,
                    omega_over_lambda0: float = 0.0, g1: float = 1.0, e_g1: float = 0.0,
                    g2: Optional[float] = None) -> "SystemParams":
        """Point in λ0 units; g2 defaults to the closed-form condition g1/√(1+ε)."""
        if not g1 > 0 or not Delta_over_g1 > 0:
            raise InvalidArgumentError(f"g1 and Delta/g1 must be > 0, got {g1}, {Delta_over_g1}")
        Delta = Delta_over_g1 * g1
        lambda0 = g1 * g1 / Delta
        delta = delta_over_lambda0 * lambda0
        if g2 is None:
            g2 = g1 / math.sqrt(1 + delta / Delta)
        return cls(omega=omega_over_lambda0 * lambda0, e_g1=e_g1, delta=delta, Delta=Delta, g1=g1, g2=g2)

    # derived
    @property
    def epsilon(self) -> float:
        return self.delta / self.Delta

    @property
    def gamma(self) -> float:
        return self.g2 / self.g1

    @property
    def lambda0(self) -> float:
        return self.g1 * self.g1 / self.Delta

    @property
    def lam(self) -> float:
        return -self.g1 * self.g2 * (2 + self.epsilon) / (2 * self.Delta)

    @property
    def e_g2(self) -> float:
        return self.e_g1 + self.delta

    @property
    def e_e(self) -> float:
        return self.e_g1 + self.Delta + self.omega

    def time(self, lambda0_t: float) -> float:
        if self.lambda0 == 0:
            raise InvalidArgumentError("lambda0 is zero; times cannot be given in units of 1/lambda0")
        return lambda0_t / self.lambda0

    def validity_flags(self) -> Dict[str, bool]:
        """True means the dispersive condition holds. Reported, never enforced."""
        return {
            "Delta_over_g1":    self.g1 == 0 or self.Delta / self.g1 >= settings.MIN_DELTA_OVER_G,
            "Delta_over_g2":    self.g2 == 0 or self.Delta / self.g2 >= settings.MIN_DELTA_OVER_G,
            "delta_over_Delta": abs(self.epsilon) <= settings.MAX_EPSILON,
        }

    @property
    def dispersive_valid(self) -> bool:
        return all(self.validity_flags().values())

    def g2_condition_holds(self, rtol: float = G2_CONDITION_RTOL) -> bool:
        target = self.g1 / math.sqrt(1 + self.epsilon)
        return target > 0 and abs(self.g2 - target) <= rtol * target


# ─── OPERATORS ─────────────────────────────────────────────────────────────────
def _op(basis, j: str, k: str, field: np.ndarray) -> np.ndarray:
    return np.kron(atom_projector(basis, j, k), field)


def full_hamiltonian(p: SystemParams, space: FockSpace) -> np.ndarray:
    a, ad, n = ladder_ops(space)
    one = np.eye(space.dim, dtype=complex)
    b = THREE_LEVEL
    h0 = (p.omega * np.kron(np.eye(b.dim), n)
          + p.e_g1 * _op(b, "g1", "g1", one)
          + p.e_g2 * _op(b, "g2", "g2", one)
          + p.e_e * _op(b, "e", "e", one))
    h1 = (p.g1 * (_op(b, "e", "g1", a) + _op(b, "g1", "e", ad))
          + p.g2 * (_op(b, "e", "g2", a) + _op(b, "g2", "e", ad)))
    return h0 + h1


def excitation_number(space: FockSpace) -> np.ndarray:
    """a†a + σ_ee on the three-level space."""
    _, _, n = ladder_ops(space)
    return np.kron(np.eye(THREE_LEVEL.dim), n) + _op(THREE_LEVEL, "e", "e", np.eye(space.dim))


def effective_coupling_part(p: SystemParams, space: FockSpace) -> np.ndarray:
    """λ a†a (σ_g2g1 + σ_g1g2)."""
    _, _, n = ladder_ops(space)
    return p.lam * np.kron(atom_projector(TWO_LEVEL, "g2", "g1") + atom_projector(TWO_LEVEL, "g1", "g2"), n)


def effective_hamiltonian(p: SystemParams, space: FockSpace) -> np.ndarray:
    _, _, n = ladder_ops(space)
    one = np.eye(space.dim, dtype=complex)
    b = TWO_LEVEL
    stark1 = p.g1 * p.g1 / p.Delta
    stark2 = p.g2 * p.g2 / p.Delta * (1 + p.epsilon)
    return (p.omega * np.kron(np.eye(b.dim), n)
            + p.e_g1 * _op(b, "g1", "g1", one)
            + p.e_g2 * _op(b, "g2", "g2", one)
            - stark1 * _op(b, "g1", "g1", n)
            - stark2 * _op(b, "g2", "g2", n)
            + effective_coupling_part(p, space))


def degenerate_raman_hamiltonian(g: float, Delta: float, space: FockSpace,
                                 omega: float = 0.0, e_g1: float = 0.0) -> np.ndarray:
    _, _, n = ladder_ops(space)
    one = np.eye(space.dim, dtype=complex)
    b = TWO_LEVEL
    both = atom_projector(b, "g1", "g1") + atom_projector(b, "g2", "g2")
    flip = atom_projector(b, "g2", "g1") + atom_projector(b, "g1", "g2")
    shift = g * g / Delta
    return (omega * np.kron(np.eye(b.dim), n)
            + e_g1 * np.kron(both, one)
            - shift * np.kron(both, n)
            - shift * np.kron(flip, n))


def sw_generator(p: SystemParams, space: FockSpace) -> np.ndarray:
    """S = (g1/Δ)(aσ_eg1 − a†σ_g1e) + (g2/(Δ−δ))(aσ_eg2 − a†σ_g2e); anti-Hermitian."""
    if p.Delta == p.delta:
        raise SingularGeneratorError(f"Generator undefined for Delta == delta ({p.Delta})")
    a, ad, _ = ladder_ops(space)
    b = THREE_LEVEL
    return (p.g1 / p.Delta * (_op(b, "e", "g1", a) - _op(b, "g1", "e", ad))
            + p.g2 / (p.Delta - p.delta) * (_op(b, "e", "g2", a) - _op(b, "g2", "e", ad)))


# ─── DISPERSIVE REDUCTION ──────────────────────────────────────────────────────
@dataclass(frozen=True)
class DispersiveReport:
    ground_residual:   float   # ‖P H′ P − H_e‖₂
    relative_residual: float   # ground_residual / ‖H_e^1‖₂
    leakage:           float   # ‖Q H′ P‖₂
    coupling_norm:     float   # ‖H_e^1‖₂
    dispersive_valid:  bool


def transformed_hamiltonian(p: SystemParams, space: FockSpace) -> np.ndarray:
    """H′ = e^S H e^{−S} by exact conjugation."""
    h = full_hamiltonian(p, space)
    s = sw_generator(p, space)
    if not np.any(s):
        return h
    u = exp_antihermitian(s)
    return u @ h @ u.conj().T


def verify_dispersive_reduction(p: SystemParams, space: FockSpace) -> DispersiveReport:
    ground = 2 * space.dim
    hp = transformed_hamiltonian(p, space)
    he = effective_hamiltonian(p, space)
    residual = float(np.linalg.norm(hp[:ground, :ground] - he, 2))
    leakage = float(np.linalg.norm(hp[ground:, :ground], 2))
    coupling = float(np.linalg.norm(effective_coupling_part(p, space), 2))
    if coupling > 0:
        relative = residual / coupling
    else:
        relative = 0.0 if residual == 0 else math.inf
    report = DispersiveReport(residual, relative, leakage, coupling, p.dispersive_valid)
    logger.debug("dispersive reduction Delta/g1=%.4g dim=%d: %s", p.Delta / p.g1 if p.g1 else math.inf,
                 space.dim, report)
    return report


def reduction_scaling(p: SystemParams, space: FockSpace) -> Tuple[float, float]:
    """(leakage ratio, ground-residual ratio) between Δ and 2Δ at fixed g1, g2, δ."""
    base = verify_dispersive_reduction(p, space)
    doubled = verify_dispersive_reduction(p.model_copy(update={"Delta": 2 * p.Delta}), space)
    ratio = lambda x, y: x / y if y > 0 else math.inf
    return ratio(base.leakage, doubled.leakage), ratio(base.ground_residual, doubled.ground_residual)


# ─── EIGENSYSTEM OF THE n-PHOTON BLOCK ─────────────────────────────────────────
@dataclass(frozen=True)
class EffectiveEigensystem:
    n: int
    energy_plus: float
    energy_minus: float
    c1: Optional[float]
    c2: Optional[float]
    exact_energies: Tuple[float, float]   # ascending
    exact_vectors: np.ndarray             # columns in the (g1, g2) basis

    def closed_form_vectors(self) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """(|φ+⟩, |φ−⟩) = (−c1, c2), (c2, c1); None when c1/c2 are undefined."""
        if self.c1 is None:
            return None
        return np.array([-self.c1, self.c2]), np.array([self.c2, self.c1])


def effective_block(p: SystemParams, n: int) -> np.ndarray:
    """The 2×2 block of H_e on {|g1,n⟩, |g2,n⟩}."""
    stark1 = p.g1 * p.g1 / p.Delta
    stark2 = p.g2 * p.g2 / p.Delta * (1 + p.epsilon)
    base = p.omega * n
    return np.array([[base + p.e_g1 - stark1 * n, p.lam * n],
                     [p.lam * n, base + p.e_g2 - stark2 * n]], dtype=complex)


def effective_eigensystem(p: SystemParams, n: int) -> EffectiveEigensystem:
    if n < 0:
        raise InvalidArgumentError(f"Photon number must be >= 0, got {n}")
    g, eps = p.gamma, p.epsilon
    s = 1 + g * g
    e_plus = p.omega * n + p.e_g1 + p.delta / s
    e_minus = (p.omega * n + p.e_g1 - p.g1 * p.g1 * n / p.Delta * (1 + g * g * (1 + eps))
               + p.delta * g * g / s)
    c1 = c2 = None
    if n > 0:
        k = p.delta * p.Delta / (p.g1 * p.g1 * n * s * s)
        pref = g / math.sqrt(s)
        c1 = pref * (1 + eps / (2 * s) - k)
        c2 = pref * (1 / g - g * eps / (2 * s) + g * k)
    evals, evecs = hermitian_eig(effective_block(p, n))
    return EffectiveEigensystem(n, e_plus, e_minus, c1, c2, (float(evals[0]), float(evals[1])), evecs)


def check_conservation(p: SystemParams, space: FockSpace) -> Tuple[float, float]:
    """max|[H, a†a + σ_ee]| for the full model and max|[H_e, a†a]| for the dispersive one."""
    _, _, n = ladder_ops(space)
    full = np.max(np.abs(commutator(full_hamiltonian(p, space), excitation_number(space))))
    eff = np.max(np.abs(commutator(effective_hamiltonian(p, space), np.kron(np.eye(2), n))))
    return float(full), float(eff)
