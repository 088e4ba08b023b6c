"""Spectral fields on the circle-times-sphere manifold.

A field is a dense complex coefficient array over (m, n, j) in the
orthonormal basis e(m, theta) * Y[n, j](omega), where
e(m, theta) = exp(i*m*theta) / sqrt(2*pi) and Y is the orthonormal harmonic
from :mod:`prodsphere.sphere`.  The squared L2 norm over the manifold is the
plain sum of squared coefficient moduli, and the Laplace eigenvalue of mode
(m, n) is m*m + n*n + n, so the free propagator is a diagonal phase.

Array layout: coeffs[m + m_max, n, j + n_max]; entries with |j| > n are
structurally zero.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResolutionError, UnderResolvedTimeError
from .rng import complex_gaussian
from .spectrum import block_lambda_range, jbracket
from .sphere import SphereGrid, sphere_analyze, sphere_synthesize

TAU0 = 8.0 * np.pi  # reference space-time interval [0, 8*pi]
_TWO_PI = 2.0 * np.pi


def lambda_table(m_max: int, n_max: int) -> np.ndarray:
    """Eigenvalues lam[m + m_max, n] = m^2 + n^2 + n as int64."""
    m = np.arange(-m_max, m_max + 1, dtype=np.int64)
    n = np.arange(n_max + 1, dtype=np.int64)
    return m[:, None] ** 2 + (n * n + n)[None, :]


def order_mask(m_max: int, n_max: int) -> np.ndarray:
    """Boolean mask of structurally valid entries (|j| <= n)."""
    n = np.arange(n_max + 1)
    j = np.arange(-n_max, n_max + 1)
    mask_nj = np.abs(j)[None, :] <= n[:, None]
    return np.broadcast_to(mask_nj, (2 * m_max + 1, n_max + 1, 2 * n_max + 1))


@dataclass
class SpectralField:
    coeffs: np.ndarray = field(repr=False)
    m_max: int = 0
    n_max: int = 0

    @classmethod
    def zeros(cls, m_max: int, n_max: int) -> "SpectralField":
        shape = (2 * m_max + 1, n_max + 1, 2 * n_max + 1)
        return cls(np.zeros(shape, dtype=complex), m_max, n_max)

    @classmethod
    def single_mode(cls, m: int, n: int, j: int, amplitude=1.0,
                    m_max=None, n_max=None) -> "SpectralField":
        m_max = abs(m) if m_max is None else m_max
        n_max = n if n_max is None else n_max
        if abs(j) > n:
            raise ValueError("|j| <= n required")
        f = cls.zeros(m_max, n_max)
        f.coeffs[m + m_max, n, j + n_max] = amplitude
        return f

    @classmethod
    def random(cls, m_max: int, n_max: int, rng, unit: bool = True) -> "SpectralField":
        f = cls.zeros(m_max, n_max)
        mask = order_mask(m_max, n_max)
        f.coeffs[mask] = complex_gaussian(rng, int(mask.sum()))
        if unit:
            f.coeffs /= np.linalg.norm(f.coeffs)
        return f

    def copy(self) -> "SpectralField":
        return SpectralField(self.coeffs.copy(), self.m_max, self.n_max)

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def sobolev_norm(self, s: float) -> float:
        lam = lambda_table(self.m_max, self.n_max)
        w = (1.0 + lam.astype(float) ** 2) ** (s / 2.0)
        return float(np.sqrt(np.sum(w[:, :, None] * np.abs(self.coeffs) ** 2)))

    def mass(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def h1_norm(f: SpectralField) -> float:
    return f.sobolev_norm(1.0)


def field_like(f: SpectralField, coeffs: np.ndarray) -> SpectralField:
    return SpectralField(coeffs, f.m_max, f.n_max)


def add(f: SpectralField, g: SpectralField, alpha=1.0) -> SpectralField:
    if (f.m_max, f.n_max) != (g.m_max, g.n_max):
        raise ValueError("field caps differ")
    return field_like(f, f.coeffs + alpha * g.coeffs)


def scale(f: SpectralField, alpha) -> SpectralField:
    return field_like(f, alpha * f.coeffs)


def block_mask(m_max: int, n_max: int, N: int) -> np.ndarray:
    """(2m_max+1, n_max+1) membership mask of the dyadic block N."""
    lo, hi = block_lambda_range(N)
    lam = lambda_table(m_max, n_max)
    return (lam >= lo) & (lam <= hi)


def project_dyadic(f: SpectralField, N: int) -> SpectralField:
    """Keep exactly the coefficients whose mode lies in the dyadic block N."""
    mask = block_mask(f.m_max, f.n_max, N)
    return field_like(f, f.coeffs * mask[:, :, None])


def blocks_present(f: SpectralField):
    """Dyadic N values intersecting the field's cap rectangle."""
    lam_max = int(lambda_table(f.m_max, f.n_max).max())
    out = []
    N = 1
    while True:
        lo, hi = block_lambda_range(N)
        if lo > lam_max:
            break
        out.append(N)
        N *= 2
    return out


def _phase_mod_2pi(lam: np.ndarray, t: float) -> np.ndarray:
    """lam * t reduced mod 2*pi in extended precision.

    Eigenvalues are integers, so reducing t first keeps the product small and
    the longdouble pass makes group-law phase errors ~1e-15 even for
    eigenvalues in the tens of thousands.
    """
    tr = math.fmod(float(t), _TWO_PI)
    ph = lam.astype(np.longdouble) * np.longdouble(tr)
    return np.mod(ph, np.longdouble(_TWO_PI)).astype(float)


def free_propagate(f: SpectralField, t: float) -> SpectralField:
    """Exact free evolution: each coefficient picks up exp(-i * lam * t)."""
    lam = lambda_table(f.m_max, f.n_max)
    phase = np.exp(-1j * _phase_mod_2pi(lam, t))
    return field_like(f, f.coeffs * phase[:, :, None])


@dataclass
class MGridField:
    """Point values on the tensor grid: equispaced theta x sphere grid."""

    values: np.ndarray = field(repr=False)  # (n_theta, n_mu, n_phi)
    sphere: SphereGrid = None

    @property
    def n_theta(self) -> int:
        return self.values.shape[0]

    def weights(self) -> np.ndarray:
        w = self.sphere.w_mu[:, None] * (_TWO_PI / self.sphere.n_phi)
        return (_TWO_PI / self.n_theta) * np.broadcast_to(
            w, (self.sphere.n_mu, self.sphere.n_phi))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights() * np.abs(self.values) ** 2)))

    def lp_power(self, p: float) -> float:
        """Integral of |values|^p over the manifold."""
        return float(np.sum(self.weights() * np.abs(self.values) ** p))


def synthesize(f: SpectralField, n_theta: int, grid: SphereGrid) -> MGridField:
    """Evaluate the field on the tensor grid (exact for band-limited data)."""
    if n_theta < 2 * f.m_max + 1:
        raise ResolutionError(
            f"n_theta={n_theta} below 2*m_max+1={2 * f.m_max + 1}")
    grid.require_degree(f.n_max)
    spec = np.zeros((n_theta, grid.n_mu, grid.n_phi), dtype=complex)
    for im, m in enumerate(range(-f.m_max, f.m_max + 1)):
        block = f.coeffs[im]
        if not block.any():
            continue
        spec[m % n_theta] += sphere_synthesize(block, grid)
    values = np.fft.ifft(spec, axis=0) * (n_theta / np.sqrt(_TWO_PI))
    return MGridField(values, grid)


def analyze(gf: MGridField, m_max: int, n_max: int) -> SpectralField:
    """Quadrature inner products against the basis; inverse of synthesize."""
    n_theta = gf.n_theta
    if n_theta < 2 * m_max + 1:
        raise ResolutionError(
            f"n_theta={n_theta} below 2*m_max+1={2 * m_max + 1}")
    gf.sphere.require_degree(n_max)
    hat = np.fft.fft(gf.values, axis=0) * (_TWO_PI / n_theta / np.sqrt(_TWO_PI))
    out = SpectralField.zeros(m_max, n_max)
    for im, m in enumerate(range(-m_max, m_max + 1)):
        out.coeffs[im] = sphere_analyze(hat[m % n_theta], n_max, gf.sphere)
    return out


def required_time_samples(p: float, phase_cap: int) -> int:
    """Distinct samples per 2*pi period for exact L^p quadrature of a trig
    polynomial whose phase magnitudes stay at or below phase_cap.

    For even p the integrand |f|^p has frequencies bounded by p * phase_cap;
    one sample beyond that kills every alias.  Odd/non-integer p round up to
    the next even integer (the rule is then a safety margin, not exactness).
    """
    p_even = 2 * math.ceil(p / 2.0)
    return p_even * int(phase_cap) + 1


def nyquist_phase_cap(k_blocks: int, N1: int) -> int:
    """Phase-magnitude cap for a product of k_blocks dyadic factors with top
    block N1: each factor's eigenvalue stays below (2*N1)^2 + 1."""
    return k_blocks * (1 + (2 * N1) ** 2)


def lp_norm_spacetime(f_of_t, p: float, t_samples: int, phase_cap: int,
                      n_theta: int, grid: SphereGrid) -> float:
    """L^p norm over [0, 8*pi] x M by uniform time sampling and exact space
    quadrature.

    Sampling is uniform on [0, 8*pi); because spectra are integer the
    integrand is 2*pi periodic and the rule collapses to
    t_samples / gcd(t_samples, 4) distinct nodes per period, which must reach
    required_time_samples(p, phase_cap).  Callers get 4x that by default,
    mirroring the uniform-on-tau0 description.
    """
    if p < 1:
        raise ValueError("p >= 1 required")
    t_samples = int(t_samples)
    distinct = t_samples // math.gcd(t_samples, 4)
    needed = required_time_samples(p, phase_cap)
    if distinct < needed:
        raise UnderResolvedTimeError(
            f"{t_samples} samples give {distinct} distinct nodes per period; "
            f"p={p}, phase_cap={phase_cap} needs {needed}")
    acc = 0.0
    for k in range(t_samples):
        t = TAU0 * k / t_samples
        acc += synthesize(f_of_t(t), n_theta, grid).lp_power(p)
    return float((TAU0 * acc / t_samples) ** (1.0 / p))


def default_time_samples(p: float, phase_cap: int) -> int:
    return 4 * required_time_samples(p, phase_cap)


# -- serialization ----------------------------------------------------------

def field_to_rows(f: SpectralField):
    """Nonzero coefficients as (m, n, j, re, im) rows sorted by (m, n, j)."""
    rows = []
    for im, m in enumerate(range(-f.m_max, f.m_max + 1)):
        for n in range(f.n_max + 1):
            for j in range(-n, n + 1):
                c = f.coeffs[im, n, j + f.n_max]
                if c != 0:
                    rows.append((m, n, j, float(c.real), float(c.imag)))
    return rows


def field_from_rows(rows, m_max=None, n_max=None) -> SpectralField:
    rows = list(rows)
    if m_max is None:
        m_max = max((abs(int(r[0])) for r in rows), default=0)
    if n_max is None:
        n_max = max((int(r[1]) for r in rows), default=0)
    f = SpectralField.zeros(m_max, n_max)
    for m, n, j, re, im in rows:
        f.coeffs[int(m) + m_max, int(n), int(j) + n_max] = complex(float(re), float(im))
    return f


def save_field(path, f: SpectralField, fmt: str = "csv"):
    rows = field_to_rows(f)
    with open(path, "w") as fh:
        if fmt == "csv":
            fh.write("m,n,j,re,im\n")
            for m, n, j, re, im in rows:
                fh.write(f"{m},{n},{j},{re:.17g},{im:.17g}\n")
        elif fmt == "jsonl":
            for m, n, j, re, im in rows:
                fh.write(json.dumps({"m": m, "n": n, "j": j, "re": re, "im": im}) + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")


def load_field(path, m_max=None, n_max=None) -> SpectralField:
    rows = []
    with open(path) as fh:
        first = fh.readline()
        if first.startswith("{"):
            for line in [first] + fh.readlines():
                if line.strip():
                    d = json.loads(line)
                    rows.append((d["m"], d["n"], d["j"], d["re"], d["im"]))
        else:
            for line in fh:
                if line.strip():
                    parts = line.split(",")
                    rows.append(tuple(float(x) for x in parts))
    return field_from_rows(rows, m_max=m_max, n_max=n_max)
