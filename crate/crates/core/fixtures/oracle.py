"""Independent oracle for the sharpness fixtures.

Derivatives come from mpmath numerical differentiation at 40 digits, image
disc radii from the closed form of the Mobius image, and the crescent
coefficients from an FFT on a circle. Run from this directory:

    python3 oracle.py > sharpness_oracle.json
"""

import json
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 40

SCHEDULE = ["1.1", "1.01", "1.001"]


def g(rho, big_r):
    shift = rho**2 / (rho**2 - big_r**2)
    return lambda z: rho / (z - rho) + shift


def image_radius(rho, big_r):
    return rho * big_r / (rho**2 - big_r**2)


def deriv_coeff(n, big_r, r, r_a):
    return 2 * mp.factorial(n) * big_r * (big_r - r_a) / ((big_r - r) ** (n + 1) * (big_r + r_a))


def increment_coeff(n, big_r, r):
    return 2 * mp.factorial(n) * (big_r ** (n + 1) - (big_r - r) ** (n + 1)) / ((big_r - r) ** (n + 1) * big_r**n)


def deriv_sweep(n, big_r, r, r_a, sign):
    ratios = []
    for factor in SCHEDULE:
        rho = mp.mpf(factor) * big_r
        f = g(rho, big_r)
        lhs = abs(mp.diff(f, sign * r, n))
        scale = image_radius(rho, big_r) - abs(f(sign * r_a))
        ratios.append(float(lhs / (deriv_coeff(n, big_r, r, r_a) * scale)))
    return ratios


def increment_sweep(n, big_r, r):
    ratios = []
    for factor in SCHEDULE:
        rho = mp.mpf(factor) * big_r
        f = g(rho, big_r)
        lhs = abs(mp.diff(f, r, n) - mp.diff(f, 0, n))
        scale = image_radius(rho, big_r) - abs(f(0))
        ratios.append(float(lhs / (increment_coeff(n, big_r, r) * scale)))
    return ratios


def crescent_coefficients(a, p, count, radius=0.95, samples=1 << 16):
    theta = 2 * np.pi * np.arange(samples) / samples
    psi = radius * np.exp(1j * theta)
    values = 1.0 / (np.log(psi - p) / (4 * a * np.pi) - 0.5j / a)
    c = np.fft.fft(values) / samples
    return [complex(c[k] / radius**k) for k in range(count)]


def main():
    big_r, r, r_a = mp.mpf(1), mp.mpf("0.5"), mp.mpf("0.25")
    aligned = deriv_sweep(2, big_r, r, r_a, 1)
    opposite = deriv_sweep(2, big_r, r, r_a, -1)
    increment = increment_sweep(1, big_r, r)
    coeffs = crescent_coefficients(1.0, -1j, 64)
    r_bohr = 0.3
    bohr_lhs = sum(abs(c) * r_bohr**k for k, c in enumerate(coeffs) if k >= 1)
    bohr_coeff = 2 * r_bohr / (1 - r_bohr)
    out = {
        "generator": "oracle.py",
        "digits": mp.mp.dps,
        "deriv_aligned": {
            "n": 2, "R": 1.0, "r": 0.5, "r_a": 0.25,
            "schedule": [float(s) for s in SCHEDULE],
            "ratios": aligned,
            # frozen acceptance threshold: oracle final ratio rounded down to 3 decimals
            "threshold": math.floor(aligned[-1] * 1000) / 1000,
        },
        "deriv_opposite": {
            "n": 2, "R": 1.0, "r": 0.5, "r_a": 0.25,
            "schedule": [float(s) for s in SCHEDULE],
            "ratios": opposite,
        },
        "increment_aligned": {
            "n": 1, "R": 1.0, "r": 0.5,
            "schedule": [float(s) for s in SCHEDULE],
            "ratios": increment,
        },
        "crescent": {
            "a": 1.0, "p": [0.0, -1.0],
            "c0": [coeffs[0].real, coeffs[0].imag],
            "abs_coeffs": [abs(c) for c in coeffs[:9]],
            "bohr_m1_q1_r03": {"lhs": bohr_lhs, "rhs": bohr_coeff * 4 / 3},
        },
    }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
