"""
lambda-reciprocation — closed-form single-pair evolution
━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
Valid under g2 = g1/√(1+ε), to first order in δ/(λ0 n):

  e^{-iH_e t}|α, g1⟩ = |ξ⁺⟩|g1⟩ − ½|α−⟩|g2⟩
  e^{-iH_e t}|α, g2⟩ = |ξ⁻⟩|g2⟩ − ½|α−⟩|g1⟩

up to the common phase e^{-i(E_g1 + δ/2)t}. All returned field states are unnormalized.
"""

from __future__ import annotations
import cmath, logging, math
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from errors import DegenerateStateError, InvalidArgumentError, PathValidityError
from hamiltonians import SystemParams
from hilbert import FockSpace, TWO_LEVEL, chi_state, coherent_state
from numerics import DensityOperator, entropy_bits, von_neumann_entropy

logger = logging.getLogger(__name__)

SERIES_CUTOFF   = 1e-14
ABSENT_BRANCH   = 1e-20   # ⟨α−|α−⟩ below this: the α− branch is treated as absent
DEGENERATE_NORM = 1e-12
CROSS_CHECK_TOL = 1e-9

C_OUTCOMES = ("g1g1", "g1g2", "g2g1", "g2g2")


def require_closed_form(p: SystemParams) -> None:
    if not p.g2_condition_holds():
        raise PathValidityError(
            f"Closed form needs g2 = g1/sqrt(1+eps) within 1e-6 relative "
            f"(g1={p.g1:.12g}, g2={p.g2:.12g}, eps={p.epsilon:.3e})"
        )


# ─── AMPLITUDES AND OVERLAPS ───────────────────────────────────────────────────
def rotated_amplitudes(alpha: complex, t: float, p: SystemParams) -> Tuple[complex, complex]:
    """(α′, α″) = (e^{-iωt}α, e^{2iλ0 t}α′)."""
    a1 = cmath.exp(-1j * p.omega * t) * alpha
    return a1, cmath.exp(2j * p.lambda0 * t) * a1


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """⟨α|β⟩ = exp(−|α|²/2 − |β|²/2 + α*β)."""
    return cmath.exp(-abs(alpha) ** 2 / 2 - abs(beta) ** 2 / 2 + alpha.conjugate() * beta)


def series_overlap(alpha: complex, beta: complex, power: int = 2) -> complex:
    """Σ_{n≥1} c_n(α)* c_n(β) / n^power for coherent amplitudes c_n, summed to a 1e-14 term cutoff."""
    z = complex(alpha).conjugate() * beta
    if z == 0:
        return 0j
    w = math.exp(-(abs(alpha) ** 2 + abs(beta) ** 2) / 2)
    total, n = 0j, 1
    while n < 100000:
        w *= z / n
        term = w / n ** power
        total += term
        if n > abs(z) and abs(term) < SERIES_CUTOFF:
            break
        n += 1
    return total


def chi_overlap(alpha: complex, beta: complex) -> complex:
    """⟨χ_α|χ_β⟩."""
    return series_overlap(alpha, beta, power=2)


# ─── SPECIAL STATES ────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class SpecialStates:
    alpha_minus: np.ndarray
    alpha_plus:  np.ndarray
    chi_minus:   np.ndarray
    chi_plus:    np.ndarray
    xi_plus:     np.ndarray
    xi_minus:    np.ndarray


def special_states(alpha: complex, t: float, p: SystemParams, space: FockSpace) -> SpecialStates:
    a1, a2 = rotated_amplitudes(alpha, t, p)
    c1, c2 = coherent_state(a1, space), coherent_state(a2, space)
    x1, x2 = chi_state(a1, space), chi_state(a2, space)
    am, ap = c1 - c2, c1 + c2
    cm, cp = x1 - x2, x1 + x2
    k = p.delta / (4 * p.lambda0) if p.delta else 0.0
    vac = math.exp(-abs(alpha) ** 2 / 2)
    xi = {}
    for sign in (+1, -1):
        v = 0.5 * ap - sign * k * cm
        v[0] += vac * (cmath.exp(sign * 0.5j * p.delta * t) - 1)
        xi[sign] = v
    return SpecialStates(am, ap, cm, cp, xi[+1], xi[-1])


def analytic_norms(alpha: complex, t: float, p: SystemParams) -> Dict[str, float]:
    """⟨α−|α−⟩ and ⟨ξ±|ξ±⟩ from scalar overlap formulas (untruncated)."""
    a1, a2 = rotated_amplitudes(alpha, t, p)
    ov = coherent_overlap(a1, a2)
    vac = math.exp(-abs(alpha) ** 2 / 2)
    k = p.delta / (4 * p.lambda0) if p.delta else 0.0
    chi_m2 = (chi_overlap(a1, a1) + chi_overlap(a2, a2) - 2 * chi_overlap(a1, a2).real).real
    plus_chi = sum(series_overlap(x, a1, 1) - series_overlap(x, a2, 1) for x in (a1, a2))
    out = {"alpha_minus": 2 - 2 * ov.real}
    for sign, key in ((+1, "xi_plus"), (-1, "xi_minus")):
        z = vac * (cmath.exp(sign * 0.5j * p.delta * t) - 1)
        out[key] = (0.5 * (1 + ov.real) + abs(z) ** 2 + k * k * chi_m2
                    + 2 * vac * z.real - sign * k * plus_chi.real)
    return out


# ─── EVOLUTION ─────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class BranchPair:
    label: str
    same_branch: np.ndarray
    flip_branch: np.ndarray   # −½ already applied

    def norm2(self) -> float:
        return float(np.vdot(self.same_branch, self.same_branch).real
                     + np.vdot(self.flip_branch, self.flip_branch).real)

    def assemble(self) -> np.ndarray:
        """Vector on (g1, g2) ⊗ Fock."""
        other = "g2" if self.label == "g1" else "g1"
        return (np.kron(TWO_LEVEL.ket(self.label), self.same_branch)
                + np.kron(TWO_LEVEL.ket(other), self.flip_branch))


def evolve_closed_form(atom_label: str, alpha: complex, t: float,
                       p: SystemParams, space: FockSpace) -> BranchPair:
    if atom_label not in ("g1", "g2"):
        raise InvalidArgumentError(f"Atom label must be g1 or g2, got '{atom_label}'")
    require_closed_form(p)
    st = special_states(alpha, t, p, space)
    same = st.xi_plus if atom_label == "g1" else st.xi_minus
    return BranchPair(atom_label, same, -0.5 * st.alpha_minus)


def closed_form_propagator(t: float, p: SystemParams, space: FockSpace,
                           with_phase: bool = False) -> np.ndarray:
    """The operator on (g1, g2) ⊗ Fock that the closed form defines by linearity."""
    require_closed_form(p)
    n = space.numbers
    w = np.exp(-1j * p.omega * t * n)
    r = np.exp(2j * p.lambda0 * t * n)
    kinv = np.zeros(space.dim)
    kinv[1:] = 1.0 / n[1:]
    k = p.delta / (4 * p.lambda0)
    a_minus = w * (1 - r)
    blocks = {}
    for sign in (+1, -1):
        xi = 0.5 * w * (1 + r) - sign * k * kinv * a_minus
        xi[0] += cmath.exp(sign * 0.5j * p.delta * t) - 1
        blocks[sign] = xi
    f = space.dim
    u = np.zeros((2 * f, 2 * f), dtype=complex)
    u[:f, :f] = np.diag(blocks[+1])
    u[f:, f:] = np.diag(blocks[-1])
    u[f:, :f] = u[:f, f:] = np.diag(-0.5 * a_minus)
    if with_phase:
        u *= cmath.exp(-1j * (p.e_g1 + p.delta / 2) * t)
    return u


# ─── CONDITIONAL CAVITY STATES ─────────────────────────────────────────────────
def conditional_cavity_states(alpha: complex, t: float, p: SystemParams,
                              space: FockSpace) -> Dict[str, np.ndarray]:
    """Unnormalized C_ij on cavity a ⊗ cavity b, for an initial |α⟩|α⟩ ⊗ singlet."""
    st = special_states(alpha, t, p, space)
    am, xp, xm = st.alpha_minus, st.xi_plus, st.xi_minus
    quarter = 0.25 * np.kron(am, am)
    return {
        "g1g1": np.kron(xp, am) - np.kron(am, xp),
        "g2g2": np.kron(am, xm) - np.kron(xm, am),
        "g2g1": quarter - np.kron(xm, xp),
        "g1g2": np.kron(xp, xm) - quarter,
    }


# amplitude prefactor of each C_ij in the assembled two-pair state (before the 1/√2)
C_PREFACTORS = {"g1g1": -0.5, "g1g2": 1.0, "g2g1": 1.0, "g2g2": -0.5}


def assembled_state(alpha: complex, t: float, p: SystemParams, space: FockSpace) -> np.ndarray:
    """Composite vector over (atom1, atom2, cavityA, cavityB), global phase dropped."""
    require_closed_form(p)
    cs = conditional_cavity_states(alpha, t, p, space)
    out = 0
    for label, vec in cs.items():
        atoms = np.kron(TWO_LEVEL.ket(label[:2]), TWO_LEVEL.ket(label[2:]))
        out = out + C_PREFACTORS[label] * np.kron(atoms, vec)
    return out / math.sqrt(2)


# ─── C21 SCHMIDT ANALYSIS ──────────────────────────────────────────────────────
@dataclass(frozen=True)
class C21Analysis:
    outcome:  str
    coeff_a:  float
    coeff_d:  float
    n1:       float
    n2:       float
    n_c21:    float
    mu_plus:  float
    mu_minus: float
    entropy:  float
    entropy_gram: float


def gram_entropy(coeffs: Sequence[complex], left_states: Sequence[np.ndarray],
                 right_states: Sequence[np.ndarray]) -> float:
    """Entropy (bits) of Σ_k c_k |L_k⟩|R_k⟩ from the Gram matrices of the branch states."""
    c = np.asarray(coeffs, dtype=complex)
    left, right = np.column_stack(left_states), np.column_stack(right_states)
    g_left = left.conj().T @ left
    g_right = right.conj().T @ right
    m = np.outer(c, c.conj()) * g_right.T
    evals, evecs = np.linalg.eigh((g_left + g_left.conj().T) / 2)
    root = (evecs * np.sqrt(np.clip(evals, 0, None))) @ evecs.conj().T
    rho = root @ m @ root
    rho = (rho + rho.conj().T) / 2
    tr = np.trace(rho).real
    if tr <= 0:
        raise DegenerateStateError("Two-branch state has zero norm")
    return von_neumann_entropy(DensityOperator(rho / tr, (len(c),)))


def _unit(v: np.ndarray, norm2: float) -> np.ndarray:
    return v / math.sqrt(norm2) if norm2 > 0 else v


def c21_entanglement(alpha: complex, t: float, p: SystemParams, space: FockSpace,
                     outcome: str = "g2g1") -> C21Analysis:
    """Schmidt analysis of C_21 (or C_12 = −SWAP(C_21))."""
    if outcome not in ("g2g1", "g1g2"):
        raise InvalidArgumentError(f"c21_entanglement handles g2g1 or g1g2, got '{outcome}'")
    st = special_states(alpha, t, p, space)
    sign = 1.0 if outcome == "g2g1" else -1.0
    left, right = (st.xi_minus, st.xi_plus) if outcome == "g2g1" else (st.xi_plus, st.xi_minus)
    s = float(np.vdot(st.alpha_minus, st.alpha_minus).real)
    nl, nr = float(np.vdot(left, left).real), float(np.vdot(right, right).real)
    pp = math.sqrt(nl * nr)

    ref = analytic_norms(alpha, t, p)
    measured = {"alpha_minus": s, "xi_plus": float(np.vdot(st.xi_plus, st.xi_plus).real),
                "xi_minus": float(np.vdot(st.xi_minus, st.xi_minus).real)}
    for key, value in measured.items():
        if abs(value - ref[key]) > CROSS_CHECK_TOL:
            logger.warning("overlap %s: vector %.12g vs analytic %.12g", key, value, ref[key])

    if s <= ABSENT_BRANCH:
        if pp <= DEGENERATE_NORM:
            raise DegenerateStateError(f"C_{outcome[1]}{outcome[3]} vanishes at alpha={alpha}, t={t}")
        return C21Analysis(outcome, 0.0, -sign, 1.0, 1.0, pp, 1.0, 0.0, 0.0, 0.0)

    au = st.alpha_minus / math.sqrt(s)
    o1, o2 = np.vdot(au, _unit(left, nl)), np.vdot(au, _unit(right, nr))
    n_sq = s * s / 16 + pp * pp - (s * pp / 2) * (o1 * o2).real
    if n_sq <= DEGENERATE_NORM ** 2:
        raise DegenerateStateError(f"C_{outcome[1]}{outcome[3]} vanishes at alpha={alpha}, t={t}")
    norm = math.sqrt(n_sq)
    a, d = sign * s / (4 * norm), -sign * pp / norm
    n1 = math.sqrt(max(0.0, 1 - abs(o1) ** 2))
    n2 = math.sqrt(max(0.0, 1 - abs(o2) ** 2))
    root = math.sqrt(max(0.0, 1 - 4 * (a * d * n1 * n2) ** 2))
    mu_plus, mu_minus = 0.5 + 0.5 * root, 0.5 - 0.5 * root
    entropy = entropy_bits([mu_plus, mu_minus])
    gram = gram_entropy([sign * 0.25, -sign], [st.alpha_minus, left], [st.alpha_minus, right])
    logger.debug("C21 alpha=%s t=%.6g N=%.6g mu+=%.12g E=%.12g gram=%.12g", alpha, t, norm, mu_plus, entropy, gram)
    return C21Analysis(outcome, a, d, n1, n2, norm, mu_plus, mu_minus, entropy, gram)


# ─── RETRIEVAL AUXILIARY STATES ────────────────────────────────────────────────
def retrieval_aux_states(alpha: complex, t_i: float, t: float, p: SystemParams,
                         space: FockSpace) -> Tuple[np.ndarray, np.ndarray]:
    """(aux-1, aux-2) with α1 = α′(t_i); χ⁺ taken as χ_{β′} + χ_{β″}.

    e^{-iH_e t}|g1⟩|ξ⁺(t_i)⟩ = ½(|g1⟩|aux-1⟩ + |g2⟩|aux-2⟩) up to a global phase; exact at δ = 0
    with λ0 t_i = π/2. At δ/λ0 = 0.1 they differ from exact H_e evolution by 1 − F ≈ 1e-4; the
    closed retrieval path uses closed_form_propagator instead.
    """
    a1, _ = rotated_amplitudes(alpha, t_i, p)
    pos, neg = special_states(a1, t, p, space), special_states(-a1, t, p, space)
    k = p.delta / (4 * p.lambda0) if p.delta else 0.0
    aux1 = pos.xi_plus + neg.xi_plus - k * (pos.chi_plus - neg.chi_plus)
    aux1[0] += 2 * math.exp(-abs(alpha) ** 2 / 2) * (cmath.exp(0.5j * p.delta * t) - 1)
    aux2 = -0.5 * (pos.alpha_minus + neg.alpha_minus) + k * (pos.chi_minus - neg.chi_minus)
    return aux1, aux2
