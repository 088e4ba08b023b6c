"""Joint spectrum of the Laplacian on the circle-times-sphere manifold.

A mode is a pair (m, n) with m the circle frequency and n the spherical
degree; its Laplace eigenvalue is m*m + n*n + n.  Dyadic blocks collect the
modes whose bracketed eigenvalue root lies in [N, 2N), and sector sets are
translated-cube subsets with sqrt(eigenvalue) pinned to a short interval.
All enumerations are returned in lexicographic (n, m) order.
"""

import math
from typing import NamedTuple

import numpy as np

from .reports import EstimateReport
from .rng import make_rng, stream_id

# |m|, n at or below this keep eigenvalues comfortably inside int64.
INDEX_CAP = 2**20


class Mode(NamedTuple):
    m: int
    n: int
    lam: int


def eigenvalue(m: int, n: int) -> int:
    """Laplace eigenvalue m^2 + n^2 + n, exact integer arithmetic."""
    if n < 0:
        raise ValueError(f"spherical degree must be nonnegative, got {n}")
    if abs(m) > INDEX_CAP or n > INDEX_CAP:
        raise ValueError(f"|m|, n capped at {INDEX_CAP} to avoid 64-bit overflow")
    return m * m + n * n + n


def jbracket(x: float) -> float:
    """Bracket weight (1 + x^2)^(1/2); equals 1 at x = 0 and grows with |x|."""
    return math.sqrt(1.0 + float(x) * float(x))


def is_dyadic(N: int) -> bool:
    return N >= 1 and (N & (N - 1)) == 0


def block_lambda_range(N: int):
    """Inclusive eigenvalue range [lo, hi] of the dyadic block N.

    Membership is N <= (1 + lam^2)^(1/4) < 2N, i.e. N^4 - 1 <= lam^2 <= 16N^4 - 2.
    """
    if not is_dyadic(N):
        raise ValueError(f"N must be a power of two >= 1, got {N}")
    n4 = N**4
    t = math.isqrt(n4 - 1)
    lo = t if t * t == n4 - 1 else t + 1
    hi = math.isqrt(16 * n4 - 2)
    return lo, hi

def block_for_lambda(lam: int) -> int:
    """The unique dyadic N whose block contains eigenvalue lam."""
    if lam < 0:
        raise ValueError("eigenvalue must be nonnegative")
    x = 1 + lam * lam
    N = 1
    while 16 * N**4 <= x:
        N *= 2
    return N


def modes_in_lambda_range(lo: int, hi: int):
    """All modes (m, n >= 0) with lo <= eigenvalue <= hi, sorted by (n, m)."""
    out = []
    n = 0
    while n * n + n <= hi:
        rem_hi = hi - n * n - n
        rem_lo = lo - n * n - n
        m_hi = math.isqrt(rem_hi)
        if rem_lo <= 0:
            m_lo = 0
        else:
            t = math.isqrt(rem_lo)
            m_lo = t if t * t == rem_lo else t + 1
        if m_lo <= m_hi:
            if m_lo == 0:
                ms = range(-m_hi, m_hi + 1)
            else:
                ms = list(range(-m_hi, -m_lo + 1)) + list(range(m_lo, m_hi + 1))
            for m in ms:
                out.append(Mode(m, n, eigenvalue(m, n)))
        n += 1
    out.sort(key=lambda md: (md.n, md.m))
    return out


def dyadic_block(N: int):
    """Modes of the dyadic block N, sorted by (n, m)."""
    lo, hi = block_lambda_range(N)
    return modes_in_lambda_range(lo, hi)


def block_dimension(N: int) -> int:
    """L^2 dimension of the block: sum of (2n + 1) over its modes."""
    return sum(2 * md.n + 1 for md in dyadic_block(N))


def sector_set(z, N: int, b: int, M: int, raw_z2: bool = False):
    """Modes in the cube z + {0..N}^2 whose sqrt(eigenvalue) lies in [b, b + M].

    Pairs with n < 0 do not label eigenfunctions and are dropped unless
    raw_z2 is set, in which case plain (m, n, lam) tuples over all of Z^2 are
    returned (the eigenvalue formula stays m^2 + n^2 + n, which is
    nonnegative for every integer n).
    """
    if M > N:
        raise ValueError(f"sector width M={M} must not exceed cube side N={N}")
    if M < 0 or b < 0:
        raise ValueError("b and M must be nonnegative")
    z1, z2 = int(z[0]), int(z[1])
    lam_lo = b * b
    lam_hi = (b + M) * (b + M)
    out = []
    for n in range(z2, z2 + N + 1):
        if n < 0 and not raw_z2:
            continue
        nn = n * n + n
        for m in range(z1, z1 + N + 1):
            lam = m * m + nn
            if lam_lo <= lam <= lam_hi:
                out.append(Mode(m, n, lam) if n >= 0 else (m, n, lam))
    out.sort(key=lambda md: (md[1], md[0]))
    return out


def _count_in_sector(z1, z2, N, b, M, raw_z2):
    m = np.arange(z1, z1 + N + 1, dtype=np.int64)
    n = np.arange(z2, z2 + N + 1, dtype=np.int64)
    lam = m[:, None] ** 2 + (n**2 + n)[None, :]
    mask = (lam >= b * b) & (lam <= (b + M) * (b + M))
    if not raw_z2:
        mask &= n[None, :] >= 0
    return int(mask.sum())


def count_ratio_sweep(N_list, M_list, trials: int, seed: int, raw_z2: bool = False,
                      z_span_factor: int = 4):
    """Sample random translates and radii and record the worst count/(M*N).

    For each admissible (N, M) pair, ``trials`` random sectors are drawn:
    z uniform in [-z_span_factor*N, z_span_factor*N]^2 and b uniform over the
    sqrt(eigenvalue) range the cube can reach (so sectors are rarely empty).
    Returns (reports, rows): one report per (N, M) carrying the maximal count
    and ratio, plus per-sector rows for the CSV schema
    N,M,z1,z2,b,count,ratio,seed.
    """
    reports = []
    rows = []
    for N in N_list:
        for M in M_list:
            M_eff = int(min(M, N))
            rng = make_rng(seed, stream_id(N, M_eff, int(raw_z2)))
            best = (-1.0, None)
            for _ in range(int(trials)):
                span = z_span_factor * N
                z1 = int(rng.integers(-span, span + 1))
                z2 = int(rng.integers(-span, span + 1))
                # sqrt(lam) range reachable inside the cube
                corners_m = np.array([z1, z1 + N], dtype=np.int64)
                corners_n = np.array([z2, z2 + N], dtype=np.int64)
                lam_corners = corners_m[:, None] ** 2 + (corners_n**2 + corners_n)[None, :]
                r_hi = math.isqrt(int(lam_corners.max()))
                b = int(rng.integers(0, max(1, r_hi + 1)))
                count = _count_in_sector(z1, z2, N, b, M_eff, raw_z2)
                ratio = count / (M_eff * N)
                rows.append({"N": N, "M": M_eff, "z1": z1, "z2": z2, "b": b,
                             "count": count, "ratio": ratio, "seed": seed})
                if ratio > best[0]:
                    best = (ratio, (z1, z2, b, count))
            z1, z2, b, count = best[1]
            reports.append(EstimateReport(
                estimate_id="count_ratio",
                params={"N": N, "M": M_eff, "z1": z1, "z2": z2, "b": b, "raw": int(raw_z2)},
                lhs=float(count),
                rhs_bound=float(M_eff * N),
                trials=int(trials),
                seed=seed,
            ))
    return reports, rows
