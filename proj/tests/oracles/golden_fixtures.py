#!/usr/bin/env python3
"""Regenerates the frozen numeric fixtures asserted in the C++ unit tests.

Everything here is computed independently of the C++ implementation:
exact rational arithmetic (fractions) for the rate laws and derivative
vector, a NumPy RK4 integrator at h = 0.001 for the reference end state,
and closed forms for the statistics fixtures.
"""

from fractions import Fraction as Fr
import math

import numpy as np

# Nominal kinetic parameters and fixed plant constants.
K_B, K_P, K_M = Fr(6, 1000), Fr(1, 10000), Fr(1, 10000)
MU_MAX, RHO_MAX, M_S = Fr(11, 100), Fr(55, 10000), Fr(29, 1000)
S_F, K_DEG, K_IN = Fr(500), Fr(1, 100), Fr(1, 10)
Y_BS, Y_PS = Fr(47, 100), Fr(12, 10)


def rates(b, s):
    if s <= 0:
        return Fr(0), Fr(0), Fr(0)
    mu = MU_MAX * s / (K_B * b + s)
    rho = RHO_MAX * s / (K_P + s * (1 + s / K_IN))
    gamma = M_S * s / (K_M + s)
    return mu, rho, gamma


def rhs(b, p, s, v, f):
    mu, rho, gamma = rates(b, s)
    db = mu * b - (b / (S_F * v)) * f
    dp = rho * b - K_DEG * p - (p / (S_F * v)) * f
    ds = -mu * (b / Y_BS) - rho * (b / Y_PS) - gamma * b + (1 - s / S_F) * f / v
    dv = f / S_F
    return db, dp, ds, dv


def main():
    mu, _, _ = rates(Fr(15, 10), Fr(10))
    print(f"mu(B=1.5,S=10)      = {float(mu):.17g}")
    _, rho, _ = rates(Fr(1), Fr(2, 100))
    print(f"rho(S=0.02)         = {float(rho):.17g}")
    _, _, gam = rates(Fr(1), Fr(10))
    print(f"gamma(S=10)         = {float(gam):.17g}")

    d = rhs(Fr(15, 10), Fr(0), Fr(10), Fr(7), Fr(25))
    for name, val in zip("BPSV", d):
        print(f"d{name}/dt nominal      = {float(val):.17g}")

    # Reference end state: nominal recipe, RK4 h = 0.001 over [0, 150],
    # states clamped at zero after every step.
    def rhs_np(x, f):
        b, p, s, v = x
        if s <= 0.0:
            mu = rho = gam = 0.0
        else:
            mu = 0.11 * s / (0.006 * b + s)
            rho = 0.0055 * s / (1e-4 + s * (1.0 + s / 0.1))
            gam = 0.029 * s / (1e-4 + s)
        return np.array([
            mu * b - (b / (500.0 * v)) * f,
            rho * b - 0.01 * p - (p / (500.0 * v)) * f,
            -mu * b / 0.47 - rho * b / 1.2 - gam * b + (1.0 - s / 500.0) * f / v,
            f / 500.0,
        ])

    x = np.array([1.5, 0.0, 0.0, 7.0])
    f, h, n = 25.0, 0.001, 150000
    for _ in range(n):
        k1 = rhs_np(x, f)
        k2 = rhs_np(x + 0.5 * h * k1, f)
        k3 = rhs_np(x + 0.5 * h * k2, f)
        k4 = rhs_np(x + h * k3, f)
        x = np.maximum(x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4), 0.0)
    print("end state t=150 (B,P,S,V):")
    for name, val in zip("BPSV", x):
        print(f"  {name} = {val:.17g}")

    # Profit fixture.
    print(f"profit(P=1,V=10,t=100,F=25) = {0.025 * 10 - 168 * 100 - 8.5e-4 * 25 * 100:.17g}")

    # Expected improvement at mu=1, sigma=1, best=0.
    z = 1.0
    ei = z * 0.5 * math.erfc(-z / math.sqrt(2)) + math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    print(f"EI(mu=1,sigma=1,best=0) = {ei:.17g}")

    # RBF with unit hyperparameters at squared distance 2.
    print(f"rbf |a-b|^2=2           = {math.exp(-1.0):.17g}")


if __name__ == "__main__":
    main()
