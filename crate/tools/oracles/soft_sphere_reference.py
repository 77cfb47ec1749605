"""Closed-form zero-energy scattering lengths for soft spheres.

Inside the core u'' = kappa^2 u with kappa = sqrt(V0/2) gives u = sinh(kappa r);
matching to the free solution A (r - a) at r = Rc yields a = Rc - tanh(kappa Rc)/kappa.
"""
from mpmath import mp, mpf, sqrt, tanh

mp.dps = 50


def soft_sphere_length(v0, rc):
    kappa = sqrt(mpf(v0) / 2)
    return mpf(rc) - tanh(kappa * mpf(rc)) / kappa


if __name__ == "__main__":
    for v0, rc in [(100, 1), (1, 1), (10, 0.5), (1000, 2), (0.01, 1)]:
        print(f"V0={v0} Rc={rc}: a =", mp.nstr(soft_sphere_length(v0, rc), 25))
