"""Extended-precision reference values for the homogeneous-gas formulas.

Run with `python3 homog_reference.py`; the printed values are frozen into
crates/core/src/homog.rs tests and the CLI sweep test.
"""
from mpmath import mp, mpf, pi, sqrt, cbrt

mp.dps = 50


def gas_parameter(rho, a):
    return 4 * pi * rho * a**3 / 3


def dyson_upper(y):
    c = cbrt(y)
    return (1 + 2 * c) / (1 - c) ** 2


def thermo_ratio(y, c=1):
    return 1 - c * y ** (mpf(1) / 17)


if __name__ == "__main__":
    print("Y(rho=1,a=0.01)      =", mp.nstr(gas_parameter(mpf(1), mpf("0.01")), 25))
    print("dyson lower          =", mp.nstr(1 / (10 * sqrt(2)), 25))
    for y in ["1e-6", "1e-8", "1e-4", "1e-3", "0.01", "0.049"]:
        print(f"dyson upper Y={y:6}   =", mp.nstr(dyson_upper(mpf(y)), 25))
    for y in ["1e-17", "1e-8", "1e-4", "0.01", "0.049"]:
        print(f"thermo ratio Y={y:6}  =", mp.nstr(thermo_ratio(mpf(y)), 25))
    # box example: n = 100, L = 100, a = 0.1
    rho = mpf(100) / mpf(100) ** 3
    a = mpf("0.1")
    y = gas_parameter(rho, a)
    print("box Y                =", mp.nstr(y, 25))
    print("box per-particle     =", mp.nstr(4 * pi * rho * a * thermo_ratio(y), 25))
    print("box Y^-6/17          =", mp.nstr(y ** (mpf(-6) / 17), 25))
    print("leading n=10,L=10    =", mp.nstr(4 * pi * mpf("0.01") * 100 / 1000, 25))
    # CLI sweep: 7 log-spaced points on [1e-8, 1e-2]
    for k in range(7):
        y = mpf(10) ** (-8 + k)
        print(f"sweep {k}: Y={mp.nstr(y,5)} upper={mp.nstr(dyson_upper(y), 20)} thermo={mp.nstr(thermo_ratio(y), 20)}")
