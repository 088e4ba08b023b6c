"""Integer-lattice helpers for exact space-time quadrature.

Free evolutions on the manifold are trigonometric polynomials whose time and
circle frequencies are integers (the eigenvalue and the circle mode).  Placing
coefficients on the integer lattice (eigenvalue, m) and applying FFTs
evaluates such sums on uniform grids with exact integer phases, and discrete
Parseval turns grid sums of even powers into exact integrals once the grid
exceeds the frequency spread.
"""

import numpy as np
from scipy.fft import next_fast_len


def mode_spans(lam: np.ndarray, m: np.ndarray):
    """((lam0, lam_span), (m0, m_span)) bounding box of the mode set."""
    lam0, lam1 = int(lam.min()), int(lam.max())
    m0, m1 = int(m.min()), int(m.max())
    return (lam0, lam1 - lam0), (m0, m1 - m0)


def grid_size(span: int, half_power: int, oversample: float = 1.0) -> int:
    """FFT length whose uniform grid integrates |F|^(2*half_power) exactly
    for a trig polynomial of frequency spread `span` (then rounded up to a
    fast length)."""
    need = half_power * span + 1
    return next_fast_len(int(np.ceil(need * oversample)))


def place_table(lam, m, values, lam0, m0, shape) -> np.ndarray:
    """Dense (lam, m) table; (m, n) -> (lam, m) is injective so plain
    assignment is safe."""
    table = np.zeros(shape, dtype=complex)
    table[lam - lam0, m - m0] = values
    return table
