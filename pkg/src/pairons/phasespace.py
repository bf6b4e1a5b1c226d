"""Phase-space representation: coherent amplitudes, Husimi function, zeros.

A state sum_m c_m |j,m> has coherent amplitude

    <psi|zeta> = P(zeta) / (1+|zeta|^2)^j,
    P(zeta)    = sum_k conj(c_{k-j}) * sqrt(C(2j,k)) * zeta^k,

so the Husimi function Q = |<psi|zeta>|^2 is fixed, up to the positive
prefactor, by the 2j roots of P on the sphere (roots at infinity make up
any degree deficiency).  Everything downstream runs on those roots.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError
from .sphere import SpherePoint, chordal_distance
from .spin import PARITY_EVEN, PARITY_ODD, StateVector

# Coefficients below DEGREE_RTOL * max|d| at either end of the coefficient
# vector are treated as structural zeros (roots at the origin / infinity).
DEGREE_RTOL = 1e-13

DEFAULT_CLUSTER_RADIUS = 1e-6


def _binomial_sqrt(two_j: int) -> np.ndarray:
    out = np.empty(two_j + 1)
    for k in range(two_j + 1):
        out[k] = math.sqrt(math.comb(two_j, k))
    return out


@dataclass(frozen=True)
class MajoranaPoly:
    """The amplitude numerator P as a coefficient vector, lowest power first."""

    j: int
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.shape != (2 * self.j + 1,):
            raise ValueError(
                f"need {2*self.j+1} coefficients for j={self.j}, got shape {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        """Largest power whose coefficient is not structurally zero."""
        mags = np.abs(self.coeffs)
        cut = DEGREE_RTOL * float(mags.max())
        live = np.nonzero(mags > cut)[0]
        if live.size == 0:
            raise ValueError("polynomial is identically zero")
        return int(live[-1])

    def origin_multiplicity(self) -> int:
        mags = np.abs(self.coeffs)
        cut = DEGREE_RTOL * float(mags.max())
        live = np.nonzero(mags > cut)[0]
        return int(live[0])

    def to_state(self) -> StateVector:
        c = np.conj(self.coeffs) / _binomial_sqrt(2 * self.j)
        return StateVector(j=self.j, coeffs=c)


def majorana_poly(state: StateVector) -> MajoranaPoly:
    d = np.conj(state.coeffs) * _binomial_sqrt(2 * state.j)
    return MajoranaPoly(j=state.j, coeffs=d)


def coherent_overlap(state: StateVector, point: SpherePoint | complex) -> complex:
    """<psi|zeta> evaluated stably on either chart.

    For |zeta| > 1 the reversed polynomial in w = 1/zeta is used; at the
    south pole itself the returned value is conj(c_j), the amplitude in
    the w chart (the phase there is chart convention).
    """
    d = majorana_poly(state).coeffs
    two_j = 2 * state.j
    zeta = point.zeta if isinstance(point, SpherePoint) else complex(point)
    if zeta is None:
        return complex(d[two_j])
    if abs(zeta) <= 1.0:
        num = complex(np.polynomial.polynomial.polyval(zeta, d))
        return num / (1.0 + abs(zeta) ** 2) ** state.j
    w = 1.0 / zeta
    rev = d[::-1]
    num = complex(np.polynomial.polynomial.polyval(w, rev))
    phase = cmath.exp(-2j * state.j * cmath.phase(w))
    return phase * num / (1.0 + abs(w) ** 2) ** state.j


def husimi(state: StateVector, point: SpherePoint | complex) -> float:
    amp = coherent_overlap(state, point)
    return float(abs(amp) ** 2)


def husimi_quadrature(state: StateVector, n_theta: int = 128,
                      n_phi: int = 128) -> float:
    """Integral of Q over the sphere with measure (2j+1)/(4 pi) sin(theta).

    Gauss-Legendre in cos(theta) crossed with a uniform azimuthal grid;
    both are spectrally exact once n exceeds the bandwidth 2j, so the
    result is 1.0 to roundoff for any normalized state.
    """
    j = state.j
    d = majorana_poly(state).coeffs
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    tan_half = np.tan(theta / 2.0)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi

    zeta = tan_half[:, None] * np.exp(-1j * phi[None, :])
    # evaluate on the safe chart row by row: rows with tan(theta/2) > 1 flip
    q = np.empty((n_theta, n_phi))
    rev = d[::-1]
    big = tan_half > 1.0
    if np.any(~big):
        z = zeta[~big]
        num = np.polynomial.polynomial.polyval(z, d)
        q[~big] = np.abs(num) ** 2 / (1.0 + np.abs(z) ** 2) ** (2 * j)
    if np.any(big):
        w = 1.0 / zeta[big]
        num = np.polynomial.polynomial.polyval(w, rev)
        q[big] = np.abs(num) ** 2 / (1.0 + np.abs(w) ** 2) ** (2 * j)

    weights = wx[:, None] * (2.0 * math.pi / n_phi)
    return float((2 * j + 1) / (4.0 * math.pi) * np.sum(q * weights))


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

def _factor_defect(c: np.ndarray, roots: np.ndarray) -> float:
    """Shape distance between c and lead * prod (z - r_i).

    Both coefficient vectors are compared at unit max magnitude, so the
    measure is scale-free and safe against overflow for long products.
    A wrong or lost root shows up as an O(1) defect; a correct root set,
    clustered or not, reconstructs the shape to rounding.
    """
    prod = np.array([1.0 + 0.0j])
    for r in roots:
        prod = np.convolve(prod, np.array([-r, 1.0]))
        peak = np.max(np.abs(prod))
        if peak == 0 or not np.isfinite(peak):
            return math.inf
        prod = prod / peak
    ref = c / np.max(np.abs(c))
    k = int(np.argmax(np.abs(prod)))
    if prod[k] == 0 or ref[k] == 0:
        return math.inf
    aligned = prod * (ref[k] / prod[k])
    return float(np.max(np.abs(aligned - ref)))


def _aberth(coeffs: np.ndarray, tol: float = 1e-14,
            max_iter: int = 200) -> np.ndarray:
    """All roots of sum_k coeffs[k] z^k by simultaneous Aberth iteration.

    Requires coeffs[0] != 0 and coeffs[-1] != 0 (callers strip structural
    zeros first).  Finishes each root with a guarded Newton polish, then
    cross-checks the factorization against the input coefficients; near
    multiple roots the iteration can stall a member inside the cluster
    while losing an isolated root, which residuals alone cannot see, so
    a failed cross-check falls back to companion-matrix eigenvalues.
    """
    c = np.asarray(coeffs, dtype=complex)
    c = c / np.max(np.abs(c))
    deg = len(c) - 1
    if deg == 0:
        return np.zeros(0, dtype=complex)
    if deg == 1:
        return np.array([-c[0] / c[1]])
    if deg == 2:
        a, b, cc = c[2], c[1], c[0]
        disc = cmath.sqrt(b * b - 4 * a * cc)
        # pick the sign that avoids cancellation in the large root
        if (b.conjugate() * disc).real < 0:
            disc = -disc
        q = -0.5 * (b + disc)
        r1 = q / a
        r2 = cc / q if q != 0 else -b / a - r1
        return np.array([r1, r2])

    dc = c[1:] * np.arange(1, deg + 1)

    radius = (np.max(np.abs(c)) / abs(c[-1])) ** (1.0 / deg)
    k = np.arange(deg)
    angles = 2.0 * math.pi * (k + 0.35) / deg + 0.4 * np.sin(k + 1.0) / deg
    z = radius * np.exp(1j * angles)

    coeff_mags = np.abs(c)
    eps = np.finfo(float).eps
    converged = np.zeros(deg, dtype=bool)
    for _ in range(max_iter):
        p = np.polynomial.polynomial.polyval(z, c)
        # unimprovable when |P(z)| is below the evaluation noise floor
        noise = np.polynomial.polynomial.polyval(np.abs(z), coeff_mags)
        converged |= np.abs(p) <= 4.0 * eps * noise
        if converged.all():
            break
        dp = np.polynomial.polynomial.polyval(z, dc)
        newton = np.where(dp != 0, p / np.where(dp == 0, 1, dp), 0.1)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulsion = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * repulsion
        step = np.where(np.abs(denom) > 1e-300, newton / denom, newton)
        step = np.where(converged, 0.0, step)
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            break

    def polish(zz: np.ndarray) -> np.ndarray:
        # Newton steps, accepted only when the residual improves
        for _ in range(2):
            p = np.polynomial.polynomial.polyval(zz, c)
            dp = np.polynomial.polynomial.polyval(zz, dc)
            ok = dp != 0
            z_new = np.where(ok, zz - np.where(ok, p, 0) / np.where(ok, dp, 1),
                             zz)
            p_new = np.polynomial.polynomial.polyval(z_new, c)
            zz = np.where(np.abs(p_new) < np.abs(p), z_new, zz)
        return zz

    def acceptable(zz: np.ndarray) -> bool:
        p = np.polynomial.polynomial.polyval(zz, c)
        noise = np.polynomial.polynomial.polyval(np.abs(zz), coeff_mags)
        if not np.all(np.abs(p) <= 1e6 * eps * np.maximum(noise, 1e-300)):
            return False
        return _factor_defect(c, zz) <= 1e-6

    z = polish(z)
    if not acceptable(z):
        # companion eigenvalues are backward stable as a set; polishing
        # would sharpen members of a root cluster individually while
        # corrupting their symmetric functions, so take them as-is
        z = np.roots(c[::-1])
        if not acceptable(z):
            raise ConvergenceError(
                f"root finding failed for degree {deg}", partial=z)
    return z


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of a Majorana polynomial with multiplicities summing to 2j."""

    j: int
    zeros: tuple[tuple[SpherePoint, int], ...]

    def __post_init__(self):
        total = sum(mult for _, mult in self.zeros)
        if total != 2 * self.j:
            raise ValueError(
                f"multiplicities sum to {total}, expected {2*self.j}")

    @property
    def total_multiplicity(self) -> int:
        return sum(mult for _, mult in self.zeros)

    def multiplicity_at_infinity(self) -> int:
        return sum(mult for pt, mult in self.zeros if pt.is_infinity)

    def multiplicity_at_origin(self) -> int:
        return sum(mult for pt, mult in self.zeros
                   if not pt.is_infinity and pt.zeta == 0)

    def expand(self) -> list[SpherePoint]:
        """Each zero repeated by its multiplicity."""
        out: list[SpherePoint] = []
        for pt, mult in self.zeros:
            out.extend([pt] * mult)
        return out


def poly_roots(poly: MajoranaPoly) -> ZeroSet:
    """Zeros of P on the sphere, exploiting parity structure when present.

    Structural zeros at the origin come from trailing coefficients below
    the degree threshold; the multiplicity at infinity is 2j - degree.
    For a parity eigenstate P is (zeta times) a polynomial in zeta^2,
    which is solved in u = zeta^2 so the +-zeta pairs come out exact.
    """
    d = poly.coeffs
    two_j = 2 * poly.j
    deg = poly.degree
    n0 = poly.origin_multiplicity()
    n_inf = two_j - deg

    zeros: list[tuple[SpherePoint, int]] = []
    if n0 > 0:
        zeros.append((SpherePoint.from_zeta(0.0), n0))
    if n_inf > 0:
        zeros.append((SpherePoint.infinity(), n_inf))

    core = d[n0:deg + 1]
    if len(core) > 1:
        mags = np.abs(core)
        cut = DEGREE_RTOL * float(mags.max())
        odd_live = np.any(mags[1::2] > cut)
        if not odd_live:
            # polynomial in u = zeta^2: emit each u-root as an exact +- pair
            for u in _aberth(core[0::2]):
                root = cmath.sqrt(u)
                zeros.append((SpherePoint.from_zeta(root), 1))
                zeros.append((SpherePoint.from_zeta(-root), 1))
        else:
            for r in _aberth(core):
                zeros.append((SpherePoint.from_zeta(r), 1))
    return ZeroSet(j=poly.j, zeros=tuple(zeros))


def root_residual(poly: MajoranaPoly, zeros: ZeroSet) -> float:
    """max over finite roots of |P(root)| / (max|d| * max(1,|root|)^deg)."""
    d = poly.coeffs
    deg = poly.degree
    scale = float(np.max(np.abs(d)))
    worst = 0.0
    for pt, _ in zeros.zeros:
        if pt.is_infinity:
            continue
        val = abs(complex(np.polynomial.polynomial.polyval(pt.zeta, d)))
        worst = max(worst, val / (scale * max(1.0, abs(pt.zeta)) ** deg))
    return worst


def cluster_zeros(zeros: ZeroSet,
                  radius: float = DEFAULT_CLUSTER_RADIUS) -> ZeroSet:
    """Merge zeros within chordal radius by single linkage.

    Cluster centers are multiplicity-weighted means, computed on the
    w = 1/zeta chart when the cluster sits nearer the south pole, so a
    cluster containing the infinity point is well defined.
    """
    items = list(zeros.zeros)
    n = len(items)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(n):
        for b in range(a + 1, n):
            if chordal_distance(items[a][0], items[b][0]) <= radius:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra

    groups: dict[int, list[tuple[SpherePoint, int]]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(items[i])

    merged: list[tuple[SpherePoint, int]] = []
    for members in groups.values():
        total = sum(m for _, m in members)
        if len(members) == 1:
            merged.append((members[0][0], total))
            continue
        merged.append((_embedded_mean(members), total))
    return ZeroSet(j=zeros.j, zeros=tuple(merged))


def _embedded_mean(members: list[tuple[SpherePoint, int]]) -> SpherePoint:
    """Multiplicity-weighted mean taken on the embedded unit sphere.

    Chart-free, so clusters containing the infinity point are handled
    uniformly; the normalized 3-vector mean is mapped back by inverse
    stereographic projection.
    """
    acc = np.zeros(3)
    total = 0
    for pt, mult in members:
        if pt.is_infinity:
            vec = np.array([0.0, 0.0, -1.0])
        else:
            z = pt.zeta
            den = 1.0 + abs(z) ** 2
            vec = np.array([2.0 * z.real / den, -2.0 * z.imag / den,
                            (1.0 - abs(z) ** 2) / den])
        acc += mult * vec
        total += mult
    mean = acc / total
    norm = np.linalg.norm(mean)
    if norm < 1e-300:
        raise ValueError("cluster mean is at the sphere center; radius too large")
    x, y, zc = mean / norm
    if zc <= -1.0 + 1e-15:
        return SpherePoint.infinity()
    return SpherePoint.from_zeta(complex(x, -y) / (1.0 + zc))
