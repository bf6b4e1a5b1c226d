"""Quasispin Hamiltonian of the two-level pairing model.

H = eps*Jz + (lam/2)*(J+^2 + J-^2) + (gam/2)*(J+J- + J-J+)

acting on a single spin-j multiplet in the Dicke basis |j, m>, m = -j..j.
The interaction only connects m with m+-2, so the matrix is banded and the
even/odd sublattices (j+m even / odd) never mix.

Control parameters:
    gamma_x = (2j-1)(gam + lam)/eps,   gamma_y = (2j-1)(gam - lam)/eps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError

PARITY_EVEN = "even"
PARITY_ODD = "odd"
PARITY_MIXED = "mixed"

_PARITY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the quasispin Hamiltonian for one multiplet.

    j is a positive integer (number of particles N = 2j).  eps is the level
    splitting, lam the pair-exchange coupling, gam the scattering coupling.
    """

    j: int
    eps: float = 1.0
    lam: float = 0.0
    gam: float = 0.0

    def __post_init__(self):
        if not isinstance(self.j, (int, np.integer)) or self.j < 1:
            raise ValueError(f"j must be a positive integer, got {self.j!r}")
        if self.eps == 0:
            raise ValueError("eps must be nonzero")

    @classmethod
    def from_gammas(cls, j: int, gamma_x: float, gamma_y: float,
                    eps: float = 1.0) -> "ModelParams":
        if not isinstance(j, (int, np.integer)) or j < 1:
            raise ValueError(f"j must be a positive integer, got {j!r}")
        scale = eps / (2.0 * (2 * j - 1))
        return cls(j=int(j), eps=eps,
                   lam=scale * (gamma_x - gamma_y),
                   gam=scale * (gamma_x + gamma_y))

    @property
    def gamma_x(self) -> float:
        return (2 * self.j - 1) * (self.gam + self.lam) / self.eps

    @property
    def gamma_y(self) -> float:
        return (2 * self.j - 1) * (self.gam - self.lam) / self.eps

    @property
    def t(self) -> float:
        """Trajectory parameter sqrt|gamma_x / gamma_y|."""
        gy = self.gamma_y
        if gy == 0.0:
            raise ZeroDivisionError("t undefined: gamma_y = 0")
        return math.sqrt(abs(self.gamma_x / gy))


def _detect_parity(coeffs: np.ndarray) -> str:
    """Even means support only on j+m even, odd only on j+m odd."""
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        return PARITY_MIXED
    even_weight = float(np.max(np.abs(coeffs[0::2]), initial=0.0))
    odd_weight = float(np.max(np.abs(coeffs[1::2]), initial=0.0))
    if odd_weight <= _PARITY_TOL * scale:
        return PARITY_EVEN
    if even_weight <= _PARITY_TOL * scale:
        return PARITY_ODD
    return PARITY_MIXED


@dataclass(frozen=True)
class StateVector:
    """Normalized state on one spin-j multiplet.

    coeffs[k] multiplies |j, m=k-j>, i.e. coefficients are stored by the
    Dicke index k = j + m = 0..2j.
    """

    j: int
    coeffs: np.ndarray
    parity: str = field(init=False)

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.shape != (2 * self.j + 1,):
            raise ValueError(
                f"need {2*self.j+1} coefficients for j={self.j}, got shape {arr.shape}")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > 1e-12:
            if norm == 0.0:
                raise ValueError("zero vector is not a state")
            arr = arr / norm
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "parity", _detect_parity(arr))

    @classmethod
    def dicke(cls, j: int, m: int) -> "StateVector":
        if not -j <= m <= j:
            raise ValueError(f"m must lie in [-{j}, {j}], got {m}")
        c = np.zeros(2 * j + 1, dtype=complex)
        c[j + m] = 1.0
        return cls(j=j, coeffs=c)

    def coefficient(self, m: int) -> complex:
        return complex(self.coeffs[self.j + m])


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense symmetric matrix of H in the Dicke basis, with its parameters."""

    params: ModelParams
    matrix: np.ndarray

    @property
    def norm(self) -> float:
        """Max row sum (induced infinity norm), used to scale tolerances."""
        return float(np.max(np.sum(np.abs(self.matrix), axis=1)))


def build_hamiltonian(params: ModelParams) -> HamiltonianMatrix:
    """Assemble the banded Dicke-basis matrix.

    Diagonal:   <m|H|m>   = eps*m + gam*(j(j+1) - m^2)
    Off-band:   <m+2|H|m> = (lam/2) * sqrt((j-m)(j+m+1)(j-m-1)(j+m+2))
    """
    j, eps, lam, gam = params.j, params.eps, params.lam, params.gam
    dim = 2 * j + 1
    H = np.zeros((dim, dim))
    for k in range(dim):
        m = k - j
        H[k, k] = eps * m + gam * (j * (j + 1) - m * m)
        if m + 2 <= j:
            v = 0.5 * lam * math.sqrt(
                (j - m) * (j + m + 1) * (j - m - 1) * (j + m + 2))
            H[k + 2, k] = v
            H[k, k + 2] = v
    H.setflags(write=False)
    return HamiltonianMatrix(params=params, matrix=H)


def split_parity(h: HamiltonianMatrix
                 ) -> tuple[np.ndarray, np.ndarray, tuple[np.ndarray, np.ndarray]]:
    """Return (even block, odd block, index maps); each block is tridiagonal.

    The even block acts on Dicke indices 0, 2, 4, ... (j+m even), the odd
    block on 1, 3, 5, ...; the index maps give each block row's position
    in the full Dicke basis.
    """
    dim = h.matrix.shape[0]
    even_idx = np.arange(0, dim, 2)
    odd_idx = np.arange(1, dim, 2)
    return (h.matrix[0::2, 0::2], h.matrix[1::2, 1::2], (even_idx, odd_idx))


@dataclass(frozen=True)
class EigenPair:
    """One eigenpair.  `degenerate` means degenerate *within its parity
    sector*: that is the condition under which the eigenvector (hence its
    zeros) stops being well defined.  Cross-sector coincidences are
    harmless here because the sectors are solved independently and parity
    pins the basis; they are visible in the energies themselves."""

    energy: float
    state: StateVector
    index: int
    degenerate: bool


def diagonalize(h: HamiltonianMatrix,
                degeneracy_rtol: float = 1e-9) -> list[EigenPair]:
    """All eigenpairs, sorted by ascending energy.

    Each parity sector is solved separately (they are exactly decoupled),
    so eigenvectors carry exact structural zeros on the other sublattice
    and a sharp parity label.  States closer than degeneracy_rtol * |H|
    to a same-sector neighbor are flagged degenerate.
    """
    dim = h.matrix.shape[0]
    gap_tol = degeneracy_rtol * h.norm
    merged: list[tuple[float, np.ndarray, bool]] = []
    for name, offset in ((PARITY_EVEN, 0), (PARITY_ODD, 1)):
        block = h.matrix[offset::2, offset::2]
        d = np.diag(block).copy()
        e = np.diag(block, 1).copy() if block.shape[0] > 1 else np.zeros(0)
        try:
            w, v = eigh_tridiagonal(d, e)
        except Exception as exc:  # pragma: no cover - LAPACK failure is exotic
            raise ConvergenceError(
                f"tridiagonal solve failed in the {name} sector: {exc}") from exc
        close = np.diff(w) < gap_tol
        flags = np.zeros(len(w), dtype=bool)
        flags[:-1] |= close
        flags[1:] |= close
        for col in range(v.shape[1]):
            full = np.zeros(dim)
            full[offset::2] = v[:, col]
            merged.append((float(w[col]), full, bool(flags[col])))
    merged.sort(key=lambda item: item[0])

    out = []
    for idx, (en, vec, flag) in enumerate(merged):
        out.append(EigenPair(energy=en,
                             state=StateVector(j=h.params.j, coeffs=vec),
                             index=idx,
                             degenerate=flag))
    return out


def expectation(h: HamiltonianMatrix, state: StateVector) -> float:
    return float(np.real(np.conj(state.coeffs) @ (h.matrix @ state.coeffs)))


def eigen_residual(h: HamiltonianMatrix, state: StateVector) -> float:
    """|| H psi - <H> psi || / |H|, a scale-free eigenvector quality measure."""
    hv = h.matrix @ state.coeffs
    ev = np.real(np.conj(state.coeffs) @ hv)
    return float(np.linalg.norm(hv - ev * state.coeffs) / h.norm)
