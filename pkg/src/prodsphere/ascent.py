"""Deterministic coordinate ascent used by the extremizer refinement.

Maximizes a ratio over a list of unit-norm complex coefficient vectors with a
fixed iteration budget: each step perturbs one coordinate (cycling through
vectors and entries), tries the four unit directions, renormalizes, keeps the
best improvement, and halves the step when nothing improves.
"""

import numpy as np


def coordinate_ascent(vectors, eval_fn, iters: int = 50, step: float = 0.5):
    vecs = [np.array(v, dtype=complex) / np.linalg.norm(v) for v in vectors]
    best = eval_fn(vecs)
    coords = [(vi, k) for vi, v in enumerate(vecs) for k in range(v.size)]
    ptr = 0
    for _ in range(int(iters)):
        vi, k = coords[ptr % len(coords)]
        ptr += 1
        improved = False
        for d in (1.0, -1.0, 1.0j, -1.0j):
            trial = [v.copy() for v in vecs]
            trial[vi][k] += step * d
            trial[vi] /= np.linalg.norm(trial[vi])
            r = eval_fn(trial)
            if r > best:
                best, vecs, improved = r, trial, True
        if not improved:
            step *= 0.5
    return vecs, best
