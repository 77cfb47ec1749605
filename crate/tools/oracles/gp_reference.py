"""Independent reference for the radial GP ground state in V = r^2.

Uses a fourth-order five-point stencil on u = r*Phi with Dirichlet ends,
a self-consistent loop around scipy's sparse eigensolver, and Richardson
extrapolation in the grid spacing. The library uses a different (three-point,
gradient-flow) scheme, so agreement is a genuine cross-check.
"""
import sys

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


def solve(g, h, r_out=10.0, tol=1e-13):
    """Ground state for N = 1, a = g (so Na = g)."""
    m = int(round(r_out / h))
    r = h * np.arange(1, m)
    n = r.size
    # fourth-order -u'' with odd reflection at r = 0 (u(-h) = -u(h))
    c0, c1, c2 = 30.0 / 12, -16.0 / 12, 1.0 / 12
    main = np.full(n, c0)
    main[0] = c0 - c2  # ghost u(-h) = -u(h) enters the i=1 row through c2
    lap = sp.diags(
        [np.full(n - 2, c2), np.full(n - 1, c1), main, np.full(n - 1, c1), np.full(n - 2, c2)],
        [-2, -1, 0, 1, 2],
    ) / h**2
    v = r**2
    u = r * np.exp(-r**2 / 2)
    u /= np.sqrt(4 * np.pi * h * np.sum(u**2))
    lam_old = 0.0
    for it in range(2000):
        phi2 = (u / r) ** 2
        ham = lap + sp.diags(v + 8 * np.pi * g * phi2)
        vals, vecs = spla.eigsh(ham.tocsc(), k=1, sigma=0.0, which="LM")
        new = np.abs(vecs[:, 0])
        new /= np.sqrt(4 * np.pi * h * np.sum(new**2))
        u = 0.5 * u + 0.5 * new
        u /= np.sqrt(4 * np.pi * h * np.sum(u**2))
        if abs(vals[0] - lam_old) < tol and it > 5:
            break
        lam_old = vals[0]
    phi2 = (u / r) ** 2
    kin = 4 * np.pi * h * np.dot(u, lap @ u)
    trap = 4 * np.pi * h * np.sum(v * u**2)
    quart = 4 * np.pi * h * np.sum(u**4 / r**2)
    energy = kin + trap + 4 * np.pi * g * quart
    lam = (kin + trap + 8 * np.pi * g * quart)
    return energy, lam, quart


if __name__ == "__main__":
    g = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
    hs = [0.04, 0.02, 0.01]
    res = [solve(g, h) for h in hs]
    for h, (e, lam, rb) in zip(hs, res):
        print(f"h={h}: E={e:.15f} lambda={lam:.15f} rho_bar={rb:.15f}")
    # fourth-order: Richardson with factor 16
    for name, idx in [("E", 0), ("lambda", 1), ("rho_bar", 2)]:
        x1, x2 = res[1][idx], res[2][idx]
        print(f"{name} extrapolated = {(16 * x2 - x1) / 15:.15f}")
