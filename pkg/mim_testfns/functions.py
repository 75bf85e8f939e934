"""Native-unit benchmark formulas, vectorized over rows of a 2-D array.

Domains and formulas follow the Virtual Library of Simulation Experiments:

- Levy, [-10, 10]^d: w = 1 + (x - 1)/4,
  sin^2(pi w_1) + sum_{k<d} (w_k - 1)^2 [1 + 10 sin^2(pi w_k + 1)]
  + (w_d - 1)^2 [1 + sin^2(2 pi w_d)].
- Ackley, [-32.768, 32.768]^d, a=20, b=0.2, c=2pi.
- Rastrigin, [-5.12, 5.12]^d, A=10.
- Friedman, [0, 1]^5: 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5.
- Dette & Pepelyshev, [0, 1]^8: 4(x1 - 2 + 8x2 - 8x2^2)^2 + (3 - 4x2)^2
  + 16 sqrt(x3 + 1)(2x3 - 1)^2 + sum_{i=4}^{8} i log(1 + sum_{j=3}^{i} x_j).
- OTL circuit (6): Rb1, Rb2, Rf, Rc1, Rc2, beta.
- Piston (7): M, S, V0, k, P0, Ta, T0.
- Robot arm (8): theta_1..theta_4 in [0, 2pi], L_1..L_4 in [0, 1].
- Wing weight (10): Sw, Wfw, A, Lambda (degrees), q, lambda, t/c, Nz, Wdg, Wp.
"""

from __future__ import annotations

import numpy as np

Domain = tuple[tuple[float, float], ...]


def levy(x: np.ndarray) -> np.ndarray:
    w = 1.0 + (x - 1.0) / 4.0
    first = np.sin(np.pi * w[:, 0]) ** 2
    inner = w[:, :-1]
    mid = np.sum((inner - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * inner + 1.0) ** 2), axis=1)
    last = (w[:, -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[:, -1]) ** 2)
    return first + mid + last


def ackley(x: np.ndarray, a: float = 20.0, b: float = 0.2, c: float = 2.0 * np.pi) -> np.ndarray:
    d = x.shape[1]
    s1 = np.sqrt(np.sum(x**2, axis=1) / d)
    s2 = np.sum(np.cos(c * x), axis=1) / d
    return -a * np.exp(-b * s1) - np.exp(s2) + a + np.e


def rastrigin(x: np.ndarray, A: float = 10.0) -> np.ndarray:
    d = x.shape[1]
    return A * d + np.sum(x**2 - A * np.cos(2.0 * np.pi * x), axis=1)


def friedman(x: np.ndarray) -> np.ndarray:
    return (
        10.0 * np.sin(np.pi * x[:, 0] * x[:, 1])
        + 20.0 * (x[:, 2] - 0.5) ** 2
        + 10.0 * x[:, 3]
        + 5.0 * x[:, 4]
    )


def dette_pepelyshev(x: np.ndarray) -> np.ndarray:
    x1, x2, x3 = x[:, 0], x[:, 1], x[:, 2]
    out = 4.0 * (x1 - 2.0 + 8.0 * x2 - 8.0 * x2**2) ** 2 + (3.0 - 4.0 * x2) ** 2
    out = out + 16.0 * np.sqrt(x3 + 1.0) * (2.0 * x3 - 1.0) ** 2
    partial = np.cumsum(x[:, 2:8], axis=1)
    for i in range(4, 9):
        out = out + i * np.log1p(partial[:, i - 3])
    return out


def otl_circuit(x: np.ndarray) -> np.ndarray:
    rb1, rb2, rf, rc1, rc2, beta = (x[:, k] for k in range(6))
    vb1 = 12.0 * rb2 / (rb1 + rb2)
    denom = beta * (rc2 + 9.0) + rf
    return (
        (vb1 + 0.74) * beta * (rc2 + 9.0) / denom
        + 11.35 * rf / denom
        + 0.74 * rf * beta * (rc2 + 9.0) / (denom * rc1)
    )


def piston(x: np.ndarray) -> np.ndarray:
    m, s, v0, k, p0, ta, t0 = (x[:, i] for i in range(7))
    a = p0 * s + 19.62 * m - k * v0 / s
    v = s / (2.0 * k) * (np.sqrt(a**2 + 4.0 * k * p0 * v0 * ta / t0) - a)
    return 2.0 * np.pi * np.sqrt(m / (k + s**2 * p0 * v0 * ta / (t0 * v**2)))


def robot_arm(x: np.ndarray) -> np.ndarray:
    angles = np.cumsum(x[:, :4], axis=1)
    lengths = x[:, 4:8]
    u = np.sum(lengths * np.cos(angles), axis=1)
    v = np.sum(lengths * np.sin(angles), axis=1)
    return np.sqrt(u**2 + v**2)


def wing_weight(x: np.ndarray) -> np.ndarray:
    sw, wfw, aspect, sweep_deg, q, taper, tc, nz, wdg, wp = (x[:, i] for i in range(10))
    cos_sweep = np.cos(np.deg2rad(sweep_deg))
    return (
        0.036
        * sw**0.758
        * wfw**0.0035
        * (aspect / cos_sweep**2) ** 0.6
        * q**0.006
        * taper**0.04
        * (100.0 * tc / cos_sweep) ** (-0.3)
        * (nz * wdg) ** 0.49
        + sw * wp
    )


OTL_DOMAIN: Domain = (
    (50.0, 150.0),
    (25.0, 70.0),
    (0.5, 3.0),
    (1.2, 2.5),
    (0.25, 1.2),
    (50.0, 300.0),
)
PISTON_DOMAIN: Domain = (
    (30.0, 60.0),
    (0.005, 0.020),
    (0.002, 0.010),
    (1000.0, 5000.0),
    (90000.0, 110000.0),
    (290.0, 296.0),
    (340.0, 360.0),
)
ROBOT_DOMAIN: Domain = ((0.0, 2.0 * np.pi),) * 4 + ((0.0, 1.0),) * 4
WING_DOMAIN: Domain = (
    (150.0, 200.0),
    (220.0, 300.0),
    (6.0, 10.0),
    (-10.0, 10.0),
    (16.0, 45.0),
    (0.5, 1.0),
    (0.08, 0.18),
    (2.5, 6.0),
    (1700.0, 2500.0),
    (0.025, 0.08),
)
