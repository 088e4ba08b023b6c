"""Trilinear space-time estimates for frequency-localized free evolutions.

Everything here measures L2 norms over [0, 8*pi] x manifold of products
u1 * u2 * u3 with u_j = P(N_j) exp(i t Laplacian) phi_j, through three exact
routes that cross-check each other:

* grid route: sample the product in time on a uniform grid that beats the
  eigenvalue spread and integrate in space by exact quadrature;
* resonance route: Plancherel in (t, theta) reduces the square to sums of
  sphere-norm squares over classes with fixed (sum of eigenvalues, sum of m);
* lattice route: for each polar quadrature node the factors are trig
  polynomials on a torus whose frequencies live on the integer lattice
  (eigenvalue, m, order), so padded FFTs of the coefficient tables evaluate
  the product spectrum and discrete Parseval finishes the integral.

The lattice route is the sweep engine: its cost scales with the data's
frequency bounding box, which stays small for the localized data families the
sweeps sample (zonal profiles; for the top factor, sectors with an m-window
of width N2 and a sqrt(eigenvalue)-window of width max(N2^2/N1, 1), mirroring
the almost-orthogonal pieces the full estimate decomposes into).
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import fftn, next_fast_len

from .errors import ResolutionError
from .fields import (SpectralField, block_mask, free_propagate, lambda_table,
                     project_dyadic, synthesize)
from .lattice import mode_spans
from .reports import EstimateReport
from .rng import complex_gaussian, make_rng, stream_id
from .spectrum import block_dimension, block_lambda_range, dyadic_block, is_dyadic
from .sphere import SphereGrid, legendre_table

# Polar-node batch size for the streamed FFT products; small batches keep the
# working set in cache, which is worth ~10x on this kind of box.
_MU_BATCH_CELLS = 200_000


def _abs2(g):
    return g.real**2 + g.imag**2


# ---------------------------------------------------------------------------
# block data: one factor's modes and coefficients
# ---------------------------------------------------------------------------

@dataclass
class BlockData:
    """Modes (m, n) with coefficient rows over sphere orders.

    coeff has shape (k, 2*j_band + 1) with order j at column j + j_band;
    j_band = 0 means zonal data (order zero only).
    """

    m: np.ndarray
    n: np.ndarray
    lam: np.ndarray
    coeff: np.ndarray
    j_band: int

    def __post_init__(self):
        self.m = np.asarray(self.m, dtype=np.int64)
        self.n = np.asarray(self.n, dtype=np.int64)
        self.lam = np.asarray(self.lam, dtype=np.int64)
        self.coeff = np.atleast_2d(np.asarray(self.coeff, dtype=complex))

    @property
    def size(self) -> int:
        return self.m.size

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.coeff))

    def normalized(self) -> "BlockData":
        nrm = self.l2_norm()
        if nrm == 0:
            raise ValueError("cannot normalize zero data")
        return BlockData(self.m, self.n, self.lam, self.coeff / nrm, self.j_band)

    def n_band(self) -> int:
        return int(self.n.max())

    def order_extent(self) -> int:
        """Largest |order| actually carrying a nonzero coefficient."""
        if self.j_band == 0:
            return 0
        nz = np.nonzero(np.any(self.coeff != 0, axis=0))[0]
        if nz.size == 0:
            return 0
        return int(max(abs(nz.min() - self.j_band), abs(nz.max() - self.j_band)))


def block_data_from_field(f: SpectralField, N: int) -> BlockData:
    """Extract the dyadic-block part of a field as BlockData (full orders)."""
    mask = block_mask(f.m_max, f.n_max, N)
    lam = lambda_table(f.m_max, f.n_max)
    im, inn = np.nonzero(mask)
    return BlockData(
        m=im - f.m_max, n=inn, lam=lam[im, inn],
        coeff=f.coeffs[im, inn, :], j_band=f.n_max)


def zonal_block_data(modes, coeff) -> BlockData:
    m = np.array([md[0] for md in modes], dtype=np.int64)
    n = np.array([md[1] for md in modes], dtype=np.int64)
    return BlockData(m=m, n=n, lam=m * m + n * n + n,
                     coeff=np.asarray(coeff, dtype=complex).reshape(-1, 1),
                     j_band=0)


# ---------------------------------------------------------------------------
# grid route
# ---------------------------------------------------------------------------

def _factor_bands(f: SpectralField):
    """(m_band, n_band, lam_min, lam_max) of the nonzero coefficients, or
    None when the field vanishes."""
    nz = np.abs(f.coeffs).sum(axis=2) > 0
    if not nz.any():
        return None
    im, inn = np.nonzero(nz)
    lam = lambda_table(f.m_max, f.n_max)[im, inn]
    return (int(np.abs(im - f.m_max).max()), int(inn.max()),
            int(lam.min()), int(lam.max()))


def trilinear_lhs(phi1, phi2, phi3, N1: int, N2: int, N3: int,
                  t_oversample: float = 1.0, n_theta: int | None = None,
                  grid: SphereGrid | None = None) -> float:
    """L2 norm over [0, 8*pi] x M of the product of projected free evolutions,
    by time sampling and exact space quadrature.

    The integrand is 2*pi periodic (integer spectrum), so uniform samples on
    one period with count above the summed eigenvalue spread give the exact
    integral; t_oversample > 1 pads that count for refinement checks.
    """
    for N in (N1, N2, N3):
        if not is_dyadic(N):
            raise ValueError("block indices must be dyadic")
    if not (N1 >= N2 >= N3):
        raise ValueError("need N1 >= N2 >= N3")
    parts = [project_dyadic(phi, N)
             for phi, N in ((phi1, N1), (phi2, N2), (phi3, N3))]
    bands = [_factor_bands(p) for p in parts]
    if any(b is None for b in bands):
        return 0.0
    m_sum = sum(b[0] for b in bands)
    n_sum = sum(b[1] for b in bands)
    span = sum(b[3] - b[2] for b in bands)
    T = next_fast_len(int(math.ceil((span + 1) * t_oversample)))
    if n_theta is None:
        n_theta = next_fast_len(2 * m_sum + 1)
    elif n_theta < 2 * m_sum + 1:
        raise ResolutionError(f"n_theta={n_theta} below product band {2 * m_sum + 1}")
    if grid is None:
        grid = SphereGrid.build(n_sum + 1, next_fast_len(2 * n_sum + 1))
    else:
        grid.require_product_degree(n_sum)
    weights = None
    acc = 0.0
    for k in range(T):
        t = 2.0 * np.pi * k / T
        prod = None
        for p in parts:
            gv = synthesize(free_propagate(p, t), n_theta, grid).values
            prod = gv if prod is None else prod * gv
        if weights is None:
            w = grid.w_mu[:, None] * (2.0 * np.pi / grid.n_phi)
            weights = (2.0 * np.pi / n_theta) * np.broadcast_to(
                w, (grid.n_mu, grid.n_phi))
        acc += float(np.sum(weights * _abs2(prod)))
    return float(np.sqrt(4.0 * (2.0 * np.pi / T) * acc))


# ---------------------------------------------------------------------------
# resonance route (coefficient-space Plancherel in t and theta)
# ---------------------------------------------------------------------------

def _mode_profiles(f: SpectralField, N: int, grid: SphereGrid):
    """Per-mode sphere profiles of the block part: list of (lam, m, values)."""
    data = block_data_from_field(f, N)
    tables = legendre_table(max(int(data.n.max(initial=0)), 0), grid)
    profiles = []
    for i in range(data.size):
        n = int(data.n[i])
        spec = np.zeros((grid.n_mu, grid.n_phi), dtype=complex)
        row = data.coeff[i]
        for j in range(-n, n + 1):
            c = row[j + data.j_band]
            if c != 0:
                spec[:, j % grid.n_phi] += tables[abs(j)][n - abs(j)] * c
        profiles.append((int(data.lam[i]), int(data.m[i]),
                         np.fft.ifft(spec, axis=1) * grid.n_phi))
    return profiles


def trilinear_lhs_resonance(phi1, phi2, phi3, N1: int, N2: int, N3: int,
                            grid: SphereGrid | None = None) -> float:
    """Independent coefficient-space evaluation: group mode triples by
    (sum of eigenvalues, sum of m) and sum sphere-norm squares per class."""
    parts = [(phi1, N1), (phi2, N2), (phi3, N3)]
    bands = [_factor_bands(project_dyadic(p, N)) for p, N in parts]
    if any(b is None for b in bands):
        return 0.0
    n_sum = sum(b[1] for b in bands)
    if grid is None:
        grid = SphereGrid.build(n_sum + 1, next_fast_len(2 * n_sum + 1))
    else:
        grid.require_product_degree(n_sum)
    p1, p2, p3 = [_mode_profiles(p, N, grid) for p, N in parts]
    classes: dict = {}
    for lam1, m1, f1 in p1:
        for lam2, m2, f2 in p2:
            base = f1 * f2
            for lam3, m3, f3 in p3:
                key = (lam1 + lam2 + lam3, m1 + m2 + m3)
                acc = classes.get(key)
                if acc is None:
                    classes[key] = base * f3
                else:
                    acc += base * f3
    w = grid.w_mu[:, None] * (2.0 * np.pi / grid.n_phi)
    total = 0.0
    for g in classes.values():
        total += float(np.sum(w * _abs2(g)))
    return float(np.sqrt((2.0 / np.pi) * total))


# ---------------------------------------------------------------------------
# lattice route
# ---------------------------------------------------------------------------

def _lattice_tables(blocks):
    """Per-factor dense (mu, lam, m[, order]) tables plus the product box."""
    zonal = all(b.order_extent() == 0 for b in blocks)
    n_bands = [b.n_band() for b in blocks]
    n_mu = sum(n_bands) + 1
    mu, w_mu = np.polynomial.legendre.leggauss(n_mu)
    grid_stub = SphereGrid(n_mu=n_mu, n_phi=1, mu=mu, w_mu=w_mu, phi=np.zeros(1))
    tables = legendre_table(max(n_bands), grid_stub)
    spans = [mode_spans(b.lam, b.m) for b in blocks]
    T = next_fast_len(sum(s[0][1] for s in spans) + 1)
    Theta = next_fast_len(sum(s[1][1] for s in spans) + 1)
    if zonal:
        Phi = 1
        j_exts = [0, 0, 0]
    else:
        j_exts = [b.order_extent() for b in blocks]
        Phi = next_fast_len(2 * sum(j_exts) + 1)
    xs = []
    built: dict = {}
    for b, ((lam0, ls), (m0, ms)), jext in zip(blocks, spans, j_exts):
        if id(b) in built:
            xs.append(built[id(b)])
            continue
        li = (b.lam - lam0).astype(np.intp)
        mi = (b.m - m0).astype(np.intp)
        if zonal:
            X = np.zeros((n_mu, ls + 1, ms + 1), dtype=complex)
            q0 = tables[0]  # (n_band + 1, n_mu)
            X[:, li, mi] = q0[b.n, :].T * b.coeff[:, b.j_band][None, :]
        else:
            X = np.zeros((n_mu, ls + 1, ms + 1, 2 * jext + 1), dtype=complex)
            for j in range(-jext, jext + 1):
                sel = np.nonzero((np.abs(j) <= b.n)
                                 & (b.coeff[:, j + b.j_band] != 0))[0]
                if sel.size == 0:
                    continue
                q = tables[abs(j)][b.n[sel] - abs(j), :].T
                X[:, li[sel], mi[sel], j + jext] = q * b.coeff[sel, j + b.j_band][None, :]
        built[id(b)] = X
        xs.append(X)
    return xs, (T, Theta, Phi), w_mu


def _zonal_kernel(blocks, f_idx: int) -> np.ndarray:
    """Hermitian K with lhs^2 = c^H K c, c = coefficients of factor f_idx.

    Writing the squared norm with the other two factors frozen, the quadratic
    kernel only needs the DFT of |product of the others|^2 at the lag
    (eigenvalue difference, m difference) of every coefficient pair, weighted
    by the polar-node quadrature and the two zonal profiles.
    """
    if any(b.order_extent() != 0 for b in blocks):
        raise ValueError("kernel refinement handles zonal data only")
    xs, (T, Theta, Phi), w_mu = _lattice_tables(blocks)
    target = blocks[f_idx]
    (lam0, _), (m0, _) = mode_spans(target.lam, target.m)
    dl = np.mod((target.lam - lam0)[:, None] - (target.lam - lam0)[None, :], T)
    dm = np.mod((target.m - m0)[:, None] - (target.m - m0)[None, :], Theta)
    lag = (dl * Theta + dm).ravel()
    n_mu = xs[0].shape[0]
    mu, _ = np.polynomial.legendre.leggauss(n_mu)
    grid_stub = SphereGrid(n_mu=n_mu, n_phi=1, mu=mu, w_mu=w_mu, phi=np.zeros(1))
    q0 = legendre_table(target.n_band(), grid_stub)[0]
    prof = q0[target.n, :]  # (k, n_mu)
    k = target.size
    K = np.zeros((k, k), dtype=complex)
    others = [X for i, X in enumerate(xs) if i != f_idx]
    batch = max(1, _MU_BATCH_CELLS // (T * Theta))
    for i0 in range(0, n_mu, batch):
        sl = slice(i0, i0 + batch)
        hats = {}
        prod = None
        for X in others:
            key = id(X)
            if key not in hats:
                hats[key] = fftn(X[sl], s=(T, Theta), axes=(1, 2))
            prod = hats[key] if prod is None else prod * hats[key]
        spec = fftn(_abs2(prod), axes=(1, 2))
        gathered = spec.reshape(spec.shape[0], -1)[:, lag]  # (batch, k*k)
        wq = prof[:, sl] * w_mu[sl][None, :]  # (k, batch)
        for i in range(wq.shape[1]):
            K += np.outer(wq[:, i], prof[:, sl][:, i]) * gathered[i].reshape(k, k)
    # the sum built here pairs c_k with conj(c_k'); the Rayleigh form c^H K c
    # wants its transpose, which by Hermiticity is the conjugate
    return K.conj() * (4.0 / (T * Theta * Phi))


def _coordinate_steps(K: np.ndarray, c: np.ndarray, iters: int, step: float):
    """Spec-style coordinate ascent on the Rayleigh quotient c^H K c / |c|^2
    with O(k) exact updates per trial direction."""
    c = c.astype(complex).copy()
    g = K @ c
    num = float(np.real(np.vdot(c, g)))
    den = float(np.real(np.vdot(c, c)))
    k = c.size
    for it in range(int(iters)):
        j = it % k
        improved = False
        best = (num / den, None)
        for d in (step, -step, 1j * step, -1j * step):
            nn = num + 2.0 * np.real(np.conj(d) * g[j]) + abs(d) ** 2 * float(np.real(K[j, j]))
            dd = den + 2.0 * np.real(np.conj(d) * c[j]) + abs(d) ** 2
            if nn / dd > best[0] * (1 + 1e-15):
                best = (nn / dd, d)
        if best[1] is not None:
            d = best[1]
            num += 2.0 * np.real(np.conj(d) * g[j]) + abs(d) ** 2 * float(np.real(K[j, j]))
            den += 2.0 * np.real(np.conj(d) * c[j]) + abs(d) ** 2
            c[j] += d
            g += d * K[:, j]
            improved = True
        if not improved:
            step *= 0.5
    return c / np.linalg.norm(c)


def refine_zonal_triple(blocks, iters: int = 50, step: float = 0.5):
    """Coordinate-ascent refinement of a zonal data triple; the iteration
    budget is split round-robin over the three factors, rebuilding the
    quadratic kernel when the active factor changes."""
    blocks = [b.normalized() for b in blocks]
    share = [iters // 3 + (1 if r < iters % 3 else 0) for r in range(3)]
    for f_idx in range(3):
        if share[f_idx] == 0 or blocks[f_idx].size == 0:
            continue
        K = _zonal_kernel(blocks, f_idx)
        c = _coordinate_steps(K, blocks[f_idx].coeff[:, 0], share[f_idx], step)
        b = blocks[f_idx]
        blocks[f_idx] = BlockData(b.m, b.n, b.lam, c.reshape(-1, 1), 0)
    return blocks, trilinear_lhs_lattice(*blocks)


def trilinear_lhs_lattice(b1: BlockData, b2: BlockData, b3: BlockData) -> float:
    """Exact product L2 norm from padded FFTs of the coefficient lattices.

    Cost scales with n_mu times the product bounding box, so keep the data
    localized (zonal and/or sector-sampled) for large blocks.
    """
    blocks = [b1, b2, b3]
    xs, box, w_mu = _lattice_tables(blocks)
    T, Theta, Phi = box
    axes = (1, 2) if xs[0].ndim == 3 else (1, 2, 3)
    s = (T, Theta) if xs[0].ndim == 3 else (T, Theta, Phi)
    n_mu = xs[0].shape[0]
    cells = T * Theta * Phi
    batch = max(1, _MU_BATCH_CELLS // cells)
    total = 0.0
    # identical factor objects share their FFT (the l6 path feeds b, b, b)
    for i0 in range(0, n_mu, batch):
        sl = slice(i0, i0 + batch)
        hats = {}
        prod = None
        for b, X in zip(blocks, xs):
            key = id(X)
            if key not in hats:
                hats[key] = fftn(X[sl], s=s, axes=axes)
            prod = hats[key] if prod is None else prod * hats[key]
        red = _abs2(prod).reshape(prod.shape[0], -1).sum(axis=1)
        total += float(np.dot(w_mu[sl], red))
    return float(np.sqrt(4.0 * total / cells))


def l6_norm_lattice(b: BlockData) -> float:
    """L6 space-time norm of one free evolution (cube norm via the product)."""
    return trilinear_lhs_lattice(b, b, b) ** (1.0 / 3.0)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

_BLOCK_CACHE: dict = {}


def _block_modes(N: int):
    if N not in _BLOCK_CACHE:
        _BLOCK_CACHE[N] = dyadic_block(N)
    return _BLOCK_CACHE[N]


def sector_window_width(N1: int, N2: int) -> int:
    """Width of the sqrt(eigenvalue) window the top factor is localized to."""
    return max(N2 * N2 // N1, 1)


def sample_zonal_block(N: int, rng) -> BlockData:
    modes = _block_modes(N)
    return zonal_block_data(modes, complex_gaussian(rng, len(modes))).normalized()


def flat_zonal_block(N: int) -> BlockData:
    modes = _block_modes(N)
    return zonal_block_data(modes, np.ones(len(modes))).normalized()


def sample_zonal_sector(N1: int, N2: int, rng, flat: bool = False) -> BlockData:
    """Top-factor sample localized the way the estimate's proof localizes it:
    m in a width-N2 window and sqrt(eigenvalue) in a width-M window, anchored
    at a random block mode so the sector is never empty."""
    modes = _block_modes(N1)
    M = sector_window_width(N1, N2)
    anchor = modes[int(rng.integers(0, len(modes)))]
    m_lo = anchor.m - int(rng.integers(0, N2 + 1))
    # keep the anchor inside [b, b+M]: floor-sqrt anchoring needs offset < M
    r_anchor = math.isqrt(anchor.lam)
    b = max(0, r_anchor - int(rng.integers(0, M)))
    lam_lo, lam_hi = b * b, (b + M) * (b + M)
    sel = [md for md in modes
           if m_lo <= md.m <= m_lo + N2 and lam_lo <= md.lam <= lam_hi]
    coeff = np.ones(len(sel)) if flat else complex_gaussian(rng, len(sel))
    return zonal_block_data(sel, coeff).normalized()


def single_mode_block(N: int, rng) -> BlockData:
    modes = _block_modes(N)
    md = modes[int(rng.integers(0, len(modes)))]
    return zonal_block_data([md], np.ones(1))


def sample_dense_block(N: int, rng, m_cap=None, n_cap=None) -> SpectralField:
    """Full-order Gaussian data supported on the dyadic block (for the small-N
    oracle comparisons; cost grows too fast for sweeps)."""
    lo, hi = block_lambda_range(N)
    if m_cap is None:
        m_cap = math.isqrt(hi)
    if n_cap is None:
        n_cap = int((math.isqrt(4 * hi + 1) - 1) // 2)
    f = SpectralField.random(m_cap, n_cap, make_rng(0, 0) if rng is None else rng)
    p = project_dyadic(f, N)
    nrm = p.l2_norm()
    if nrm == 0:
        raise ValueError("block outside the caps")
    p.coeffs /= nrm
    return p


# ---------------------------------------------------------------------------
# sweep with ratio fit
# ---------------------------------------------------------------------------

@dataclass
class SweepFit:
    delta_hat: float
    stderr: float
    reports: list = field(default_factory=list)

    def confidence_interval(self, z: float = 1.96):
        return (self.delta_hat - z * self.stderr, self.delta_hat + z * self.stderr)


def sweep_triples(n1_max: int, n23_max: int):
    out = []
    N1 = 1
    while N1 <= n1_max:
        N2 = 1
        while N2 <= min(N1, n23_max):
            N3 = 1
            while N3 <= N2:
                out.append((N1, N2, N3))
                N3 *= 2
            N2 *= 2
        N1 *= 2
    return out


def _point_best(N1, N2, N3, trials, seed, refine):
    rng = make_rng(seed, stream_id(N1, N2, N3))

    def draw(flat):
        if N1 > N2:
            b1 = sample_zonal_sector(N1, N2, rng, flat=flat)
        else:
            b1 = flat_zonal_block(N1) if flat else sample_zonal_block(N1, rng)
        b2 = flat_zonal_block(N2) if flat else sample_zonal_block(N2, rng)
        b3 = flat_zonal_block(N3) if flat else sample_zonal_block(N3, rng)
        return b1, b2, b3

    candidates = [draw(flat=True),
                  (single_mode_block(N1, rng), single_mode_block(N2, rng),
                   single_mode_block(N3, rng))]
    for _ in range(int(trials)):
        candidates.append(draw(flat=False))
    best_val, best = -1.0, None
    for data in candidates:
        val = trilinear_lhs_lattice(*data)
        if val > best_val:
            best_val, best = val, data
    if refine:
        _, refined = refine_zonal_triple(list(best))
        best_val = max(best_val, refined)
    return best_val


def trilinear_sweep_fit(n1_max: int = 64, n23_max: int = 8, trials: int = 50,
                        seed: int = 0, refine: bool = False) -> SweepFit:
    """Estimate the critical gain exponent.

    For every dyadic triple N1 >= N2 >= N3 in range, the worst sampled ratio
    lhs / (N2 * N3) over unit data is recorded, and log-ratio is regressed on
    log(N3/N1 + 1/N2).  The fitted slope is the reported exponent; its
    positivity is the quantitative signature of the critical gain.
    """
    reports = []
    xs, ys = [], []
    for N1, N2, N3 in sweep_triples(n1_max, n23_max):
        t0 = time.monotonic()
        best = _point_best(N1, N2, N3, trials, seed, refine)
        ratio = best / (N2 * N3)
        xs.append(math.log(N3 / N1 + 1.0 / N2))
        ys.append(math.log(ratio))
        reports.append(EstimateReport(
            "trilinear", {"N1": N1, "N2": N2, "N3": N3,
                          "M": sector_window_width(N1, N2), "refine": int(refine)},
            lhs=best, rhs_bound=float(N2 * N3), trials=trials, seed=seed,
            runtime_ms=int(1000 * (time.monotonic() - t0))))
    x = np.array(xs)
    y = np.array(ys)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = max(1, x.size - 2)
    se = math.sqrt(float(np.sum(resid**2)) / dof / float(np.sum((x - x.mean()) ** 2)))
    return SweepFit(delta_hat=float(slope), stderr=se, reports=reports)


# ---------------------------------------------------------------------------
# single-block and off-diagonal reports
# ---------------------------------------------------------------------------

def l6_block_estimate(N: int, trials: int, seed: int) -> EstimateReport:
    """Worst sampled L6 norm of a unit free evolution against N^(2/3)."""
    rng = make_rng(seed, stream_id(N, 6))
    best = l6_norm_lattice(flat_zonal_block(N))
    for _ in range(int(trials)):
        best = max(best, l6_norm_lattice(sample_zonal_block(N, rng)))
    return EstimateReport("l6_block", {"N": N}, lhs=best,
                          rhs_bound=float(N) ** (2.0 / 3.0),
                          trials=trials + 1, seed=seed)


def sample_zonal_annulus(N: int, rng, width: int = 1, flat: bool = False) -> BlockData:
    """Zonal data on a thin sqrt(eigenvalue) annulus of the block (a data
    family whose lattice cost stays flat as N grows)."""
    modes = _block_modes(N)
    anchor = modes[int(rng.integers(0, len(modes)))]
    b = max(0, math.isqrt(anchor.lam) - int(rng.integers(0, width)))
    sel = [md for md in modes if b * b <= md.lam <= (b + width) * (b + width)]
    coeff = np.ones(len(sel)) if flat else complex_gaussian(rng, len(sel))
    return zonal_block_data(sel, coeff).normalized()


def off_diagonal_bound_check(N1: int, N2: int, N3: int, trials: int,
                             seed: int) -> EstimateReport:
    """Record C in lhs <= C * (N2*N3)^(3/2) over unit free data; the point of
    the sweep is that the recorded C does not drift with N1."""
    if not (N1 >= N2 >= N3):
        raise ValueError("need N1 >= N2 >= N3")
    rng = make_rng(seed, stream_id(N1, N2, N3, 33))
    best = -1.0
    for k in range(int(trials) + 1):
        flat = k == 0
        b1 = (sample_zonal_annulus(N1, rng, flat=flat) if N1 > N2
              else (flat_zonal_block(N1) if flat else sample_zonal_block(N1, rng)))
        b2 = flat_zonal_block(N2) if flat else sample_zonal_block(N2, rng)
        b3 = flat_zonal_block(N3) if flat else sample_zonal_block(N3, rng)
        best = max(best, trilinear_lhs_lattice(b1, b2, b3))
    return EstimateReport("off_diagonal", {"N1": N1, "N2": N2, "N3": N3},
                          lhs=best, rhs_bound=float(N2 * N3) ** 1.5,
                          trials=trials + 1, seed=seed)


def sup_norm_report(phi: SpectralField, N: int, seed: int, t_samples: int = 24,
                    n_theta: int = 48, grid: SphereGrid | None = None) -> EstimateReport:
    """Grid maximum of the free evolution against the finite-dimensional
    Cauchy-Schwarz bound sqrt(dim / (8 pi^2)) * l2-norm."""
    p = project_dyadic(phi, N)
    bands = _factor_bands(p)
    if grid is None:
        mb, nb = (bands[0], bands[1]) if bands else (0, 0)
        grid = SphereGrid.build(max(nb + 1, 2), max(2 * nb + 1, 4))
        n_theta = max(n_theta, 2 * mb + 1)
    sup = 0.0
    for k in range(t_samples):
        gv = synthesize(free_propagate(p, 2.0 * np.pi * k / t_samples),
                        n_theta, grid).values
        sup = max(sup, float(np.abs(gv).max()))
    dim = block_dimension(N)
    rhs = math.sqrt(dim / (8.0 * np.pi**2)) * p.l2_norm()
    return EstimateReport("sup_norm", {"N": N, "dim": dim}, lhs=sup,
                          rhs_bound=rhs, trials=1, seed=seed)


def holder_l6_chain(b1: BlockData, b2: BlockData, b3: BlockData):
    """(lhs, product of the three L6 norms); Hoelder makes lhs <= product."""
    lhs = trilinear_lhs_lattice(b1, b2, b3)
    prod = l6_norm_lattice(b1) * l6_norm_lattice(b2) * l6_norm_lattice(b3)
    return lhs, prod


@dataclass
class TrilinearConstant:
    """Right-hand scale (N3/N1 + 1/N2)^delta * N2 * N3 of the critical bound."""

    delta: float
    N1: int
    N2: int
    N3: int

    def __post_init__(self):
        if not (0.0 < self.delta < 0.5):
            raise ValueError("delta must lie in (0, 1/2)")
        if not (self.N1 >= self.N2 >= self.N3 >= 1):
            raise ValueError("need N1 >= N2 >= N3 >= 1")
        for N in (self.N1, self.N2, self.N3):
            if not is_dyadic(N):
                raise ValueError("blocks must be dyadic")

    @property
    def value(self) -> float:
        return (self.N3 / self.N1 + 1.0 / self.N2) ** self.delta * self.N2 * self.N3
