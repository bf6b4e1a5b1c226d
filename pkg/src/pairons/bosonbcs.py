"""Uniform-coupling pairing model for N bosons on L+1 levels.

    H = sum_l eps_l n_l + (gamma/4) sum_{k,l} bk+ bk+ bl bl

(both sums unrestricted, including k = l).  Per-level occupation parities
are conserved, so each seniority vector nu = (nu_0..nu_L) in {0,1}^(L+1)
labels a sector.  Eigenstates with M = (N - |nu|)/2 pairs are

    prod_a [ sum_l bl+ bl+ / (2 eps_l - e_a) ] |nu>,

the e_a being the pairons; they satisfy E = sum_l eps_l nu_l + sum_a e_a.
The SU(L+1) coherent amplitude of such a state vanishes on the quadrics
sum_l zeta_l^2 / xi_{l,a}^2 = 1 with

    xi_{l,a}^2 = (2 eps_l - conj(e_a)) / (conj(e_a) - 2 eps_0),

one ellipsoid-like surface per pairon.  Restricting to a coordinate axis
l* gives a polynomial of degree M in zeta_{l*}^2 whose roots w_a return
the pairons through e_a = 2 (eps_l* + eps_0 conj(w_a)) / (1 + conj(w_a)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .errors import DegenerateStateError, InconsistentPaironsError
from .phasespace import _aberth

AXIS_POLE_FLAG = "axis-pole"  # root at w = -1: pairon at infinity of the map

LEVEL_DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class BosonModel:
    """Level energies and the uniform pair coupling.

    Equal level energies are fine for building and diagonalizing the
    Hamiltonian; only the pairon inversion needs them pairwise distinct
    (see has_degenerate_levels).
    """

    levels: tuple[float, ...]
    gamma: float
    n_bosons: int

    def __post_init__(self):
        if len(self.levels) < 2:
            raise ValueError("need at least two levels")
        if list(self.levels) != sorted(self.levels):
            raise ValueError("level energies must be non-decreasing")
        if self.n_bosons < 1:
            raise ValueError("need at least one boson")

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def has_degenerate_levels(self) -> bool:
        """True when some pair of levels is closer than the inversion can
        separate (the quadric axes coincide and the axis map loses rank)."""
        return any(self.levels[i + 1] - self.levels[i] <= LEVEL_DEGENERACY_TOL
                   for i in range(len(self.levels) - 1))


def fock_basis(n_levels: int, n_bosons: int) -> list[tuple[int, ...]]:
    """All occupation tuples with sum = n_bosons, lexicographically sorted."""
    states = []
    for combo in combinations_with_replacement(range(n_levels), n_bosons):
        occ = [0] * n_levels
        for lvl in combo:
            occ[lvl] += 1
        states.append(tuple(occ))
    states.sort()
    return states


def build_bcs_hamiltonian(model: BosonModel
                          ) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    basis = fock_basis(model.n_levels, model.n_bosons)
    index = {occ: i for i, occ in enumerate(basis)}
    dim = len(basis)
    H = np.zeros((dim, dim))
    g4 = model.gamma / 4.0
    for i, occ in enumerate(basis):
        H[i, i] = sum(e * n for e, n in zip(model.levels, occ))
        for l, n_l in enumerate(occ):
            if n_l < 2:
                continue
            amp_down = math.sqrt(n_l * (n_l - 1))
            for k in range(model.n_levels):
                if k == l:
                    H[i, i] += g4 * n_l * (n_l - 1)
                    continue
                target = list(occ)
                target[l] -= 2
                target[k] += 2
                jdx = index[tuple(target)]
                H[jdx, i] += g4 * amp_down * math.sqrt(
                    (occ[k] + 1) * (occ[k] + 2))
    return H, basis


@dataclass(frozen=True)
class BosonState:
    """Eigenstate data: energy, coefficients over the Fock basis, seniority."""

    model: BosonModel
    energy: float
    coeffs: np.ndarray
    basis: tuple[tuple[int, ...], ...]
    seniority: tuple[int, ...]
    degenerate: bool

    @property
    def n_pairs(self) -> int:
        return (self.model.n_bosons - sum(self.seniority)) // 2


def diagonalize_boson(model: BosonModel,
                      degeneracy_rtol: float = 1e-9) -> list[BosonState]:
    """All eigenstates sorted by energy, labeled by per-level parity.

    Each seniority sector (per-level occupation parities) is solved
    separately; it is exactly conserved, and the split keeps the labels
    sharp even when different sectors are accidentally degenerate.  The
    `degenerate` flag marks near-coincidence *within* a sector - the case
    where the eigenvector itself is ill-defined; cross-sector
    coincidences leave every eigenvector (and its pairons) intact.
    """
    H, basis = build_bcs_hamiltonian(model)
    norm = float(np.max(np.sum(np.abs(H), axis=1)))
    sectors: dict[tuple[int, ...], list[int]] = {}
    for i, occ in enumerate(basis):
        sectors.setdefault(tuple(n % 2 for n in occ), []).append(i)

    gap_tol = degeneracy_rtol * max(norm, 1.0)
    merged: list[tuple[float, np.ndarray, tuple[int, ...], bool]] = []
    for parity in sorted(sectors):
        idx = np.array(sectors[parity])
        w, v = np.linalg.eigh(H[np.ix_(idx, idx)])
        close = np.diff(w) < gap_tol
        flags = np.zeros(len(w), dtype=bool)
        flags[:-1] |= close
        flags[1:] |= close
        for col in range(v.shape[1]):
            full = np.zeros(len(basis))
            full[idx] = v[:, col]
            merged.append((float(w[col]), full, parity, bool(flags[col])))
    merged.sort(key=lambda item: item[0])

    out = []
    for en, vec, parity, flag in merged:
        out.append(BosonState(
            model=model, energy=en, coeffs=vec, basis=tuple(basis),
            seniority=parity, degenerate=flag))
    return out


def boson_husimi_amplitude(state: BosonState, zetas: np.ndarray) -> complex:
    """<psi|zeta> for the SU(L+1) coherent state labeled by (zeta_1..zeta_L).

    <psi|zeta> = (1 + sum|zeta_l|^2)^(-N/2)
                 * sum_n conj(c_n) sqrt(N!/prod n_l!) prod zeta_l^n_l.
    """
    z = np.asarray(zetas, dtype=complex)
    model = state.model
    if z.shape != (model.n_levels - 1,):
        raise ValueError(f"need {model.n_levels - 1} coordinates")
    n_fact = math.lgamma(model.n_bosons + 1)
    total = 0.0 + 0.0j
    for c, occ in zip(state.coeffs, state.basis):
        if c == 0:
            continue
        weight = math.exp(0.5 * (n_fact - sum(math.lgamma(n + 1) for n in occ)))
        mono = np.prod(z ** np.array(occ[1:]))
        total += np.conj(c) * weight * mono
    norm = (1.0 + float(np.sum(np.abs(z) ** 2))) ** (model.n_bosons / 2.0)
    return complex(total / norm)


def axis_slice_coefficients(state: BosonState, axis: int) -> np.ndarray:
    """Coefficients g_q of the degree-M polynomial in y = zeta_axis^2.

    Restricting the amplitude to the axis keeps only basis states with
    n_l = nu_l off the axis (the seniority factor is divided out); the
    surviving amplitudes, ordered by the pair count q on the axis, are
    the slice polynomial.
    """
    model = state.model
    if not 1 <= axis <= model.n_levels - 1:
        raise ValueError(f"axis must be 1..{model.n_levels - 1}")
    nu = state.seniority
    M = state.n_pairs
    n_fact = math.lgamma(model.n_bosons + 1)
    g = np.zeros(M + 1, dtype=complex)
    for c, occ in zip(state.coeffs, state.basis):
        if any(occ[l] != nu[l] for l in range(model.n_levels)
               if l not in (0, axis)):
            continue
        # the basis spans all seniority sectors; occupations whose level-0
        # or axis parity disagrees with nu carry zero weight in this state
        # but would alias onto wrong (even negative) q slots
        if occ[axis] < nu[axis] or (occ[axis] - nu[axis]) % 2:
            continue
        if occ[0] < nu[0] or (occ[0] - nu[0]) % 2:
            continue
        q = (occ[axis] - nu[axis]) // 2
        weight = math.exp(0.5 * (n_fact - sum(math.lgamma(n + 1) for n in occ)))
        g[q] = np.conj(c) * weight
    return g


@dataclass(frozen=True)
class BosonPaironSet:
    model: BosonModel
    seniority: tuple[int, ...]
    energies: tuple[complex, ...]
    n_at_infinity: int  # slice roots at w = -1 (pairons off the map)
    flags: tuple[str, ...] = ()

    def energy_sum(self) -> complex:
        base = sum(e * n for e, n in zip(self.model.levels, self.seniority))
        return base + sum(self.energies)


def extract_boson_pairons(state: BosonState, axis: int = 1,
                          pole_tol: float = 1e-9) -> BosonPaironSet:
    """Pairons from the roots of the axis-slice polynomial.

    e_a = 2 (eps_axis + eps_0 conj(w_a)) / (1 + conj(w_a)); roots with
    |1 + w| <= pole_tol are pairons pushed to infinity of the axis map
    and are counted separately with a flag.
    """
    if state.degenerate:
        raise DegenerateStateError(
            f"state at E={state.energy:.6g} is degenerate within its sector")
    model = state.model
    if model.has_degenerate_levels:
        raise DegenerateStateError(
            "level energies are not pairwise distinct; the axis map "
            "cannot be inverted")
    g = axis_slice_coefficients(state, axis)
    mags = np.abs(g)
    if mags.max() == 0.0:
        raise ValueError("slice polynomial vanished; axis cannot see this state")
    cut = 1e-13 * float(mags.max())
    live = np.nonzero(mags > cut)[0]
    lo, hi = int(live[0]), int(live[-1])
    # trailing deficiency: roots at y = 0 <-> pairons at 2 eps_axis;
    # degree deficiency: roots at y = inf <-> pairons at 2 eps_0
    energies: list[complex] = []
    energies.extend([complex(2.0 * model.levels[axis])] * lo)
    energies.extend([complex(2.0 * model.levels[0])] * (len(g) - 1 - hi))
    n_pole = 0
    flags: list[str] = []
    eps0 = model.levels[0]
    eps_ax = model.levels[axis]
    for w in _aberth(g[lo:hi + 1]):
        wc = np.conj(w)
        if abs(1.0 + wc) <= pole_tol:
            n_pole += 1
            continue
        energies.append(complex(2.0 * (eps_ax + eps0 * wc) / (1.0 + wc)))
    if n_pole:
        flags.append(AXIS_POLE_FLAG)
    energies.sort(key=lambda e: (e.real, e.imag))
    return BosonPaironSet(model=model, seniority=state.seniority,
                          energies=tuple(energies), n_at_infinity=n_pole,
                          flags=tuple(flags))


def reconstruct_boson_state(model: BosonModel, seniority: tuple[int, ...],
                            pairons: tuple[complex, ...]) -> BosonState:
    """Build prod_a [sum_l w_l(a) bl+ bl+] |nu> on the Fock basis.

    Uses the pole-free homogeneous weights w_l(a) = prod_{k != l}
    (2 eps_k - e_a), proportional to 1/(2 eps_l - e_a) whenever no pairon
    sits exactly on a pair level.
    """
    levels = model.levels
    L1 = model.n_levels
    if len(seniority) != L1 or any(s not in (0, 1) for s in seniority):
        raise ValueError("seniority must be a 0/1 tuple, one per level")
    n_rest = model.n_bosons - sum(seniority)
    if n_rest < 0 or n_rest % 2:
        raise ValueError("seniority incompatible with boson number")
    if len(pairons) != n_rest // 2:
        raise ValueError(f"need {n_rest // 2} pairons, got {len(pairons)}")

    amp: dict[tuple[int, ...], complex] = {tuple([0] * L1): 1.0}
    for e in pairons:
        weights = []
        for l in range(L1):
            w = 1.0 + 0.0j
            for k in range(L1):
                if k != l:
                    w *= (2.0 * levels[k] - e)
            weights.append(w)
        new: dict[tuple[int, ...], complex] = {}
        for occ, val in amp.items():
            for l in range(L1):
                if weights[l] == 0:
                    continue
                key = list(occ)
                key[l] += 1
                key = tuple(key)
                new[key] = new.get(key, 0.0) + val * weights[l]
        scale = max(abs(v) for v in new.values())
        if scale == 0.0:
            raise ValueError("pairon product vanished; invalid pairon set")
        amp = {k: v / scale for k, v in new.items()}

    basis = fock_basis(L1, model.n_bosons)
    index = {occ: i for i, occ in enumerate(basis)}
    coeffs = np.zeros(len(basis), dtype=complex)
    for pair_counts, val in amp.items():
        occ = tuple(2 * p + s for p, s in zip(pair_counts, seniority))
        weight = math.exp(0.5 * sum(math.lgamma(n + 1) for n in occ))
        coeffs[index[occ]] += val * weight
    nrm = np.linalg.norm(coeffs)
    if nrm == 0:
        raise ValueError("reconstructed state vanished")
    coeffs /= nrm

    energy = sum(e * s for e, s in zip(levels, seniority)) + sum(
        np.real(e) for e in pairons)
    return BosonState(model=model, energy=float(energy), coeffs=coeffs,
                      basis=tuple(basis), seniority=tuple(seniority),
                      degenerate=False)


def boson_fidelity(a: BosonState, b: BosonState) -> float:
    return float(abs(np.vdot(a.coeffs, b.coeffs)))


def boson_energy(pairons: BosonPaironSet, imag_tol: float = 1e-8) -> float:
    """Total energy from the sum rule, as a real number.

    Complex pairons must come in conjugate pairs, so the imaginary parts
    have to cancel; a residue above imag_tol means the extraction that
    produced the set was inconsistent, and the sum cannot be trusted.
    """
    if pairons.n_at_infinity:
        raise InconsistentPaironsError(
            f"{pairons.n_at_infinity} pairon(s) at infinity; the energy "
            "sum is not defined")
    total = pairons.energy_sum()
    if abs(total.imag) > imag_tol:
        raise InconsistentPaironsError(
            f"imaginary parts of the pairon sum fail to cancel "
            f"({total.imag:.3e}); extraction is inconsistent")
    return float(total.real)


def ellipsoid_axes(model: BosonModel, pairon: complex) -> np.ndarray:
    """xi_l^2 for l = 1..L: the squared semi-axes of the pairon's quadric."""
    eps0 = model.levels[0]
    ec = np.conj(pairon)
    if abs(ec - 2.0 * eps0) == 0:
        raise ZeroDivisionError("pairon sits at 2 eps_0; quadric is at infinity")
    return np.array([(2.0 * e - ec) / (ec - 2.0 * eps0)
                     for e in model.levels[1:]])


def verify_ellipsoid(state: BosonState, pairon: complex, n_points: int = 100,
                     seed: int = 0) -> float:
    """Max relative amplitude over random points of the pairon's quadric.

    Points are drawn as zeta_l = xi_l u_l with sum u_l^2 = 1 (complex
    normalization of the bilinear sum).  The return value measures the
    cancellation |sum terms| / sum |terms| of the amplitude, so an exact
    zero of the polynomial gives ~1e-16 regardless of overall scale.
    """
    model = state.model
    xi2 = ellipsoid_axes(model, pairon)
    xi = np.sqrt(xi2.astype(complex))
    rng = np.random.default_rng(seed)
    L = model.n_levels - 1
    worst = 0.0
    n_fact = math.lgamma(model.n_bosons + 1)
    occs = np.array(state.basis)
    weights = np.exp(0.5 * (n_fact - np.array(
        [sum(math.lgamma(n + 1) for n in occ) for occ in state.basis])))
    base = np.conj(state.coeffs) * weights
    for _ in range(n_points):
        g = rng.normal(size=L) + 1j * rng.normal(size=L)
        s = np.sum(g * g)
        while abs(s) < 1e-12:
            g = rng.normal(size=L) + 1j * rng.normal(size=L)
            s = np.sum(g * g)
        u = g / np.sqrt(s)
        z = xi * u
        monos = np.prod(z[None, :] ** occs[:, 1:], axis=1)
        terms = base * monos
        total = abs(np.sum(terms))
        scale = float(np.sum(np.abs(terms)))
        if scale > 0:
            worst = max(worst, total / scale)
    return worst
