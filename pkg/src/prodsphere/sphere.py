"""Spherical harmonics on the unit sphere and their quadrature grids.

The grid is tensor Gauss-Legendre in mu = cos(polar angle) times equispaced
azimuth.  Harmonics are orthonormal with respect to the plain surface measure
(total area 4*pi):  Y[n, j](mu, phi) = Q[n, |j|](mu) * exp(i*j*phi), where Q is
the fully normalized associated Legendre function scaled so that the integral
of Q^2 over mu equals 1/(2*pi).  With this convention conj(Y[n, j]) equals
Y[n, -j] exactly, so conjugation never changes the degree.

The normalized three-term recurrence is stable far past the degrees used
here; expect gradual precision loss only beyond degree ~1000.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ResolutionError
from .reports import EstimateReport
from .rng import complex_gaussian, make_rng
from .spectrum import jbracket


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature grid: Gauss-Legendre in mu, equispaced azimuth.

    Integrates spherical polynomials of degree at most 2*n_mu - 1 exactly in
    mu, and azimuthal frequencies up to n_phi - 1 exactly.
    """

    n_mu: int
    n_phi: int
    mu: np.ndarray = field(repr=False)
    w_mu: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, n_mu: int, n_phi: int) -> "SphereGrid":
        if n_mu < 1 or n_phi < 1:
            raise ValueError("grid sizes must be positive")
        mu, w = np.polynomial.legendre.leggauss(n_mu)
        phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
        return cls(n_mu=n_mu, n_phi=n_phi, mu=mu, w_mu=w, phi=phi)

    @property
    def area_weights(self) -> np.ndarray:
        """(n_mu, n_phi) surface-measure weights; they sum to 4*pi."""
        return np.broadcast_to(self.w_mu[:, None] * (2.0 * np.pi / self.n_phi),
                               (self.n_mu, self.n_phi))

    def max_degree(self) -> int:
        """Largest degree representable for analysis/synthesis round trips."""
        return min(self.n_mu - 1, (self.n_phi - 1) // 2)

    def require_degree(self, n: int):
        if n > self.max_degree():
            raise ResolutionError(
                f"grid ({self.n_mu}, {self.n_phi}) supports degree "
                f"{self.max_degree()}, requested {n}")

    def require_product_degree(self, deg: int):
        """Exact quadrature of a squared product needs 2*n_mu - 1 >= 2*deg in
        mu and n_phi > 2*deg in azimuth."""
        if 2 * self.n_mu - 1 < 2 * deg or self.n_phi <= 2 * deg:
            raise ResolutionError(
                f"grid ({self.n_mu}, {self.n_phi}) cannot integrate "
                f"|product|^2 of degree {deg} exactly")

    def l2_norm(self, values: np.ndarray) -> float:
        v2 = np.abs(values) ** 2
        return float(np.sqrt(np.sum(self.w_mu @ v2) * (2.0 * np.pi / self.n_phi)))


def grid_for_degree(n: int, oversample: int = 1) -> SphereGrid:
    """Smallest grid whose analysis/synthesis supports degree n."""
    return SphereGrid.build(oversample * (n + 1), oversample * (2 * n + 1))


_TABLE_CACHE: dict = {}


def legendre_table(n_max: int, grid: SphereGrid):
    """Normalized associated Legendre values on the grid nodes.

    Returns a list indexed by order j of arrays with shape
    (n_max - j + 1, n_mu); row r holds degree n = j + r.
    """
    key = (n_max, grid.n_mu)
    cached = _TABLE_CACHE.get(key)
    if cached is not None:
        return cached
    x = grid.mu
    sq = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    tables = []
    # seed of the diagonal recurrence: Q[0,0] = sqrt(1/(4 pi))
    qjj = np.full_like(x, np.sqrt(1.0 / (4.0 * np.pi)))
    for j in range(n_max + 1):
        rows = np.empty((n_max - j + 1, x.size))
        rows[0] = qjj
        if n_max - j >= 1:
            a = np.sqrt(4.0 * (j + 1) ** 2 - 1.0) / np.sqrt((j + 1) ** 2 - j * j)
            rows[1] = a * x * rows[0]
        for n in range(j + 2, n_max + 1):
            a = np.sqrt((4.0 * n * n - 1.0) / (n * n - j * j))
            b = np.sqrt(((2.0 * n + 1.0) * ((n - 1.0) ** 2 - j * j))
                        / ((2.0 * n - 3.0) * (n * n - j * j)))
            rows[n - j] = a * x * rows[n - j - 1] - b * rows[n - j - 2]
        tables.append(rows)
        if j < n_max:
            qjj = qjj * sq * np.sqrt((2.0 * j + 3.0) / (2.0 * j + 2.0))
    _TABLE_CACHE[key] = tables
    return tables


def sph_harm_eval(n: int, j: int, grid: SphereGrid) -> np.ndarray:
    """Point values of the orthonormal harmonic Y[n, j] on the grid."""
    if abs(j) > n:
        raise ValueError(f"|j| <= n required, got n={n}, j={j}")
    grid.require_degree(n)
    q = legendre_table(n, grid)[abs(j)][n - abs(j)]
    return q[:, None] * np.exp(1j * j * grid.phi)[None, :]


def sphere_synthesize(coeffs: np.ndarray, grid: SphereGrid) -> np.ndarray:
    """Dense coefficients c[n, j + n_max] -> grid values (n_mu, n_phi)."""
    n_max = coeffs.shape[0] - 1
    grid.require_degree(n_max)
    tables = legendre_table(n_max, grid)
    spec = np.zeros((grid.n_mu, grid.n_phi), dtype=complex)
    for j in range(-n_max, n_max + 1):
        col = coeffs[abs(j):, j + n_max]
        if not col.any():
            continue
        spec[:, j % grid.n_phi] += tables[abs(j)].T @ col
    return np.fft.ifft(spec, axis=1) * grid.n_phi


def sphere_analyze(values: np.ndarray, n_max: int, grid: SphereGrid) -> np.ndarray:
    """Grid values -> dense coefficients c[n, j + n_max] by quadrature."""
    grid.require_degree(n_max)
    tables = legendre_table(n_max, grid)
    hat = np.fft.fft(values, axis=1) * (2.0 * np.pi / grid.n_phi)
    coeffs = np.zeros((n_max + 1, 2 * n_max + 1), dtype=complex)
    for j in range(-n_max, n_max + 1):
        fj = hat[:, j % grid.n_phi] * grid.w_mu
        coeffs[abs(j):, j + n_max] = tables[abs(j)] @ fj
    return coeffs


def random_eigenspace_field(n: int, rng) -> np.ndarray:
    """Unit-norm coefficients over orders -n..n, rotation-invariant law."""
    c = complex_gaussian(rng, 2 * n + 1)
    return c / np.linalg.norm(c)


def _cluster_candidates(n: int):
    """Deterministic coefficient vectors that are classical near-extremizers:
    zonal (pole concentration) and highest order (great-circle beam)."""
    zonal = np.zeros(2 * n + 1, dtype=complex)
    zonal[n] = 1.0
    beam = np.zeros(2 * n + 1, dtype=complex)
    beam[-1] = 1.0
    flat = np.ones(2 * n + 1, dtype=complex) / np.sqrt(2 * n + 1)
    return [zonal, beam, flat]


def cluster_trilinear_ratio(n1: int, n2: int, n3: int, trials: int, seed: int,
                            refine: bool = False, grid: SphereGrid | None = None
                            ) -> EstimateReport:
    """Worst sampled ratio of the product norm against (<n2><n3>)^(1/4).

    Samples unit-norm fields in the three eigenspaces (plus deterministic
    zonal/beam/flat candidates), measures the L2 norm of the pointwise triple
    product by exact quadrature, and optionally runs 50 coordinate-ascent
    steps from the best sample.
    """
    if not (n1 >= n2 >= n3 >= 0):
        raise ValueError("need n1 >= n2 >= n3 >= 0")
    deg = n1 + n2 + n3
    if grid is None:
        grid = SphereGrid.build(deg + 1, 2 * deg + 1)
    grid.require_product_degree(deg)
    rhs = (jbracket(n2) * jbracket(n3)) ** 0.25
    tabs = [legendre_table(n, grid) for n in (n1, n2, n3)]

    def synth_one(n, tab, c):
        spec = np.zeros((grid.n_mu, grid.n_phi), dtype=complex)
        for j in range(-n, n + 1):
            spec[:, j % grid.n_phi] += tab[abs(j)][n - abs(j)] * c[j + n]
        return np.fft.ifft(spec, axis=1) * grid.n_phi

    def ratio_of(cs):
        prod = np.ones((grid.n_mu, grid.n_phi), dtype=complex)
        for n, tab, c in zip((n1, n2, n3), tabs, cs):
            prod = prod * synth_one(n, tab, c / np.linalg.norm(c))
        return grid.l2_norm(prod) / rhs

    rng = make_rng(seed, 0)
    best_ratio = -np.inf
    best_cs = None
    cand_lists = [_cluster_candidates(n) for n in (n1, n2, n3)]
    starts = [[cand_lists[0][k], cand_lists[1][k], cand_lists[2][k]] for k in range(3)]
    for _ in range(int(trials)):
        starts.append([random_eigenspace_field(n, rng) for n in (n1, n2, n3)])
    for cs in starts:
        r = ratio_of(cs)
        if r > best_ratio:
            best_ratio, best_cs = r, cs
    if refine:
        from .ascent import coordinate_ascent
        best_cs, best_ratio = coordinate_ascent(best_cs, ratio_of)
    return EstimateReport(
        estimate_id="cluster_trilinear",
        params={"n1": n1, "n2": n2, "n3": n3, "refine": int(refine)},
        lhs=float(best_ratio * rhs),
        rhs_bound=float(rhs),
        trials=int(trials) + 3,
        seed=seed,
    )
