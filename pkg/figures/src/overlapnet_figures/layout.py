"""Seeded force-directed node placement (Fruchterman–Reingold)."""
from __future__ import annotations

import numpy as np


def spring_layout(n_nodes: int, edges, seed: int, iterations: int = 150
                  ) -> np.ndarray:
    """Positions in [0, 1]^2, a deterministic function of (inputs, seed).

    Standard FR: repulsion k^2/d between all pairs, attraction d^2/k along
    edges, displacement capped by a linearly cooling temperature.
    """
    rng = np.random.default_rng(seed)
    pos = rng.random((n_nodes, 2)) * 2.0 - 1.0
    if n_nodes == 1:
        return np.array([[0.5, 0.5]])

    A = np.zeros((n_nodes, n_nodes))
    for u, v in edges:
        if u != v:
            A[u, v] = A[v, u] = 1.0

    k = 1.0 / np.sqrt(n_nodes)
    t = 0.1
    dt = t / (iterations + 1)
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.clip(dist, 0.01, None, out=dist)
        # repulsive k^2/d for every pair, attractive d^2/k along edges
        force = k * k / dist**2 - A * dist / k
        disp = (delta * force[..., None]).sum(axis=1)
        length = np.linalg.norm(disp, axis=1)
        np.clip(length, 0.01, None, out=length)
        pos += disp / length[:, None] * np.minimum(length, t)[:, None]
        t -= dt

    pos -= pos.min(axis=0)
    span = pos.max(axis=0)
    span[span == 0] = 1.0
    return 0.05 + 0.9 * pos / span
