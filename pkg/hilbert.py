"""
lambda-reciprocation — atomic and Fock bases
━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
Atom levels are indexed g1 = 0, g2 = 1, e = 2. Fock levels 0..dim-1.
"""

from __future__ import annotations
import logging, math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.stats import poisson

from errors import InvalidArgumentError, TruncationError

logger = logging.getLogger(__name__)

TAIL_TOL = 1e-12
MIN_FOCK_DIM = 16


# ─── FOCK SPACE ────────────────────────────────────────────────────────────────
def tail_weight(alpha: complex, dim: int) -> float:
    """Poisson probability of n >= dim for a coherent state of amplitude alpha."""
    return float(poisson.sf(dim - 1, abs(alpha) ** 2))


def default_dim(alpha: complex) -> int:
    r = abs(alpha)
    return max(MIN_FOCK_DIM, math.ceil(r * r + 8 * r + 12))


def required_dim(alpha: complex, tol: float = TAIL_TOL) -> int:
    """Smallest dimension whose discarded tail is within tol."""
    candidates = np.arange(2, 2 * default_dim(alpha) + 2)
    tails = poisson.sf(candidates - 1, abs(alpha) ** 2)
    ok = np.nonzero(tails <= tol)[0]
    return int(candidates[ok[0]]) if ok.size else int(candidates[-1])


@dataclass(frozen=True)
class FockSpace:
    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise InvalidArgumentError(f"Fock dimension must be an integer >= 2, got {self.dim}")

    @classmethod
    def for_amplitude(cls, *alphas: complex, dim: int | None = None) -> "FockSpace":
        """Default-rule space for the largest amplitude, or an explicit override checked against all of them."""
        largest = max((abs(a) for a in alphas), default=0.0)
        space = cls(int(dim) if dim is not None else default_dim(largest))
        space.check(largest)
        return space

    def check(self, alpha: complex) -> None:
        tail = tail_weight(alpha, self.dim)
        if tail > TAIL_TOL:
            raise TruncationError(
                f"Fock dim {self.dim} truncates |alpha|={abs(alpha):.6g} with tail weight {tail:.3e}",
                required_dim=required_dim(alpha),
            )

    @property
    def numbers(self) -> np.ndarray:
        return np.arange(self.dim)


def number_state(n: int, space: FockSpace) -> np.ndarray:
    if not 0 <= n < space.dim:
        raise InvalidArgumentError(f"Photon number {n} outside Fock space of dim {space.dim}")
    v = np.zeros(space.dim, dtype=complex)
    v[n] = 1.0
    return v


def _coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    # c_n = c_{n-1} alpha / sqrt(n), c_0 = e^{-|alpha|^2/2}
    steps = np.concatenate(([1.0 + 0j], alpha / np.sqrt(np.arange(1, dim))))
    return np.exp(-abs(alpha) ** 2 / 2) * np.cumprod(steps)


def coherent_state(alpha: complex, space: FockSpace) -> np.ndarray:
    space.check(alpha)
    return _coherent_amplitudes(complex(alpha), space.dim)


def chi_state(alpha: complex, space: FockSpace) -> np.ndarray:
    """Unnormalized Σ_{n≥1} c_n/n |n⟩ built from the coherent amplitudes c_n."""
    space.check(alpha)
    c = _coherent_amplitudes(complex(alpha), space.dim)
    out = np.zeros(space.dim, dtype=complex)
    out[1:] = c[1:] / np.arange(1, space.dim)
    return out


def ladder_ops(space: FockSpace) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = np.diag(np.sqrt(np.arange(1, space.dim)).astype(complex), k=1)
    return a, a.conj().T, np.diag(np.arange(space.dim).astype(complex))


# ─── ATOMS ─────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class AtomBasis:
    levels: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.levels)) != len(self.levels):
            raise InvalidArgumentError(f"Atom level labels must be unique: {self.levels}")

    @property
    def dim(self) -> int:
        return len(self.levels)

    def index(self, label: str) -> int:
        try:
            return self.levels.index(label)
        except ValueError:
            raise InvalidArgumentError(f"Unknown atom level '{label}'. Allowed: {list(self.levels)}")

    def ket(self, label: str) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(label)] = 1.0
        return v


THREE_LEVEL = AtomBasis(("g1", "g2", "e"))
TWO_LEVEL   = AtomBasis(("g1", "g2"))


def atom_projector(basis: AtomBasis, j: str, k: str) -> np.ndarray:
    """σ_jk = |j⟩⟨k|."""
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    m[basis.index(j), basis.index(k)] = 1.0
    return m
