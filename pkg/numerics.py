"""
lambda-reciprocation — dense complex linear algebra
━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
Kets are 1-D complex ndarrays, operators 2-D complex ndarrays. ħ = 1.
Subsystem ordering for composite objects is fixed: atom1, atom2, cavityA, cavityB.
"""

from __future__ import annotations
import logging, string
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from errors import NumericContractError

logger = logging.getLogger(__name__)

HERMITIAN_RTOL   = 1e-12
TRACE_TOL        = 1e-10
NEGATIVE_EIG_TOL = 1e-10
ENTROPY_CUTOFF   = 1e-12

Array = np.ndarray


# ─── VALIDATION ────────────────────────────────────────────────────────────────
def as_vector(psi) -> Array:
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise NumericContractError(f"Expected a non-empty 1-D state vector, got shape {v.shape}")
    return v


def as_square(m) -> Array:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NumericContractError(f"Expected a square matrix, got shape {a.shape}")
    return a


def is_hermitian(m, rtol: float = HERMITIAN_RTOL) -> bool:
    a = np.asarray(m)
    scale = np.max(np.abs(a)) if a.size else 0.0
    return bool(np.max(np.abs(a - a.conj().T)) <= rtol * scale) if scale > 0 else True


def require_hermitian(m) -> Array:
    a = as_square(m)
    if not is_hermitian(a):
        raise NumericContractError("Matrix is not Hermitian within tolerance")
    return a


def commutator(a: Array, b: Array) -> Array:
    return a @ b - b @ a


# ─── SPECTRAL TOOLS ────────────────────────────────────────────────────────────
def hermitian_eig(m) -> Tuple[Array, Array]:
    """Eigenvalues ascending and orthonormal eigenvectors (columns) of a Hermitian matrix."""
    a = require_hermitian(m)
    evals, evecs = scipy.linalg.eigh(a)
    return evals, evecs


def propagator(h, t: float) -> Array:
    """e^{-iht} from the spectral decomposition of h."""
    evals, evecs = hermitian_eig(h)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def evolve(h, t: float, psi) -> Array:
    v = as_vector(psi)
    a = as_square(h)
    if a.shape[0] != v.size:
        raise NumericContractError(f"Dimension mismatch: operator {a.shape[0]} vs state {v.size}")
    if t == 0:
        return v.copy()
    return propagator(a, t) @ v


def exp_antihermitian(s) -> Array:
    """e^{S} for anti-Hermitian S, via the Hermitian matrix -iS."""
    a = as_square(s)
    if not is_hermitian(1j * a):
        raise NumericContractError("Generator is not anti-Hermitian within tolerance")
    evals, evecs = scipy.linalg.eigh(-1j * a)
    return (evecs * np.exp(1j * evals)) @ evecs.conj().T


# ─── TENSOR ALGEBRA ────────────────────────────────────────────────────────────
def tensor(a, b) -> Array:
    """Kronecker product; vectors with vectors, matrices with matrices."""
    x, y = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if x.ndim != y.ndim or x.ndim not in (1, 2):
        raise NumericContractError(f"tensor() needs two vectors or two matrices, got ndim {x.ndim} and {y.ndim}")
    return np.kron(x, y)


# ─── DENSITY OPERATORS ─────────────────────────────────────────────────────────
@dataclass(frozen=True)
class DensityOperator:
    matrix: Array
    dims: Tuple[int, ...]

    def __post_init__(self):
        m = as_square(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        if any(d < 1 for d in dims) or prod(dims) != m.shape[0]:
            raise NumericContractError(f"dims {dims} inconsistent with matrix size {m.shape[0]}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_vector(cls, psi, dims: Sequence[int]) -> "DensityOperator":
        v = as_vector(psi)
        norm2 = np.vdot(v, v).real
        if norm2 <= 0:
            raise NumericContractError("Cannot build a density operator from a zero vector")
        return cls(np.outer(v, v.conj()) / norm2, tuple(dims))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> Array:
        """Eigenvalues with [-1e-10, 0) clipped to 0; anything more negative is a contract violation."""
        if not is_hermitian(self.matrix, rtol=HERMITIAN_RTOL):
            raise NumericContractError("Density operator is not Hermitian")
        evals = scipy.linalg.eigvalsh(self.matrix)
        if evals.size and evals[0] < -NEGATIVE_EIG_TOL:
            raise NumericContractError(f"Density operator has negative eigenvalue {evals[0]:.3e}")
        return np.clip(evals, 0.0, None)


def _check_keep(dims: Sequence[int], keep: Iterable[int]) -> list:
    keep = sorted(set(int(k) for k in keep))
    bad = [k for k in keep if k < 0 or k >= len(dims)]
    if bad:
        raise NumericContractError(f"Invalid subsystem index {bad} for dims {tuple(dims)}")
    return keep


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    dims = list(rho.dims)
    keep = _check_keep(dims, keep)
    n = len(dims)
    letters = string.ascii_letters
    if 2 * n > len(letters):
        raise NumericContractError("Too many subsystems for partial_trace")
    rows = [letters[i] for i in range(n)]
    cols = [letters[n + i] for i in range(n)]
    for i in range(n):
        if i not in keep:
            cols[i] = rows[i]
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    reduced = np.einsum("".join(rows) + "".join(cols) + "->" + out, rho.matrix.reshape(dims + dims))
    kept_dims = tuple(dims[i] for i in keep)
    d = prod(kept_dims) if kept_dims else 1
    return DensityOperator(reduced.reshape(d, d), kept_dims or (1,))


def reduced_density(psi, dims: Sequence[int], keep: Iterable[int]) -> DensityOperator:
    """Tr over the complement of `keep` of |ψ⟩⟨ψ|/⟨ψ|ψ⟩, without forming the full projector."""
    v = as_vector(psi)
    dims = [int(d) for d in dims]
    if prod(dims) != v.size:
        raise NumericContractError(f"dims {tuple(dims)} inconsistent with vector size {v.size}")
    keep = _check_keep(dims, keep)
    rest = [i for i in range(len(dims)) if i not in keep]
    kept_dims = tuple(dims[i] for i in keep)
    m = v.reshape(dims).transpose(keep + rest).reshape(prod(kept_dims), -1)
    norm2 = np.vdot(v, v).real
    if norm2 <= 0:
        raise NumericContractError("Cannot reduce a zero vector")
    return DensityOperator((m @ m.conj().T) / norm2, kept_dims)


# ─── ENTROPY / FIDELITY ────────────────────────────────────────────────────────
def entropy_bits(probabilities) -> float:
    p = np.asarray(probabilities, dtype=float)
    p = p[p > ENTROPY_CUTOFF]
    return float(-np.sum(p * np.log2(p))) if p.size else 0.0


def von_neumann_entropy(rho: Union[DensityOperator, Array]) -> float:
    if not isinstance(rho, DensityOperator):
        m = as_square(rho)
        rho = DensityOperator(m, (m.shape[0],))
    if abs(rho.trace - 1.0) > TRACE_TOL:
        raise NumericContractError(f"Density operator trace {rho.trace:.12g} is not 1")
    return max(0.0, entropy_bits(rho.eigenvalues()))


def entanglement_entropy(psi, dims: Sequence[int], keep: Iterable[int]) -> float:
    return von_neumann_entropy(reduced_density(psi, dims, keep))


def fidelity(psi, phi) -> float:
    """|⟨ψ|φ⟩|² / (⟨ψ|ψ⟩⟨φ|φ⟩); insensitive to global phases."""
    a, b = as_vector(psi), as_vector(phi)
    if a.size != b.size:
        raise NumericContractError(f"Dimension mismatch: {a.size} vs {b.size}")
    na, nb = np.vdot(a, a).real, np.vdot(b, b).real
    if na == 0 or nb == 0:
        raise NumericContractError("fidelity() of a zero vector is undefined")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2 / (na * nb)))
