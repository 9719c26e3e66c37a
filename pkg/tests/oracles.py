"""Independent reference implementations used as test oracles.

Plain Python loops with ``math`` and ``math.fsum``; nothing here calls
into the package, so a bug in the vectorised engine cannot hide itself.
"""

import math

SQRT_2PI = math.sqrt(2 * math.pi)


def K(u):
    return math.exp(-0.5 * u * u) / SQRT_2PI


def Kdd(u):
    return (u * u - 1.0) * K(u)


def empirical(xs, z, alpha):
    terms = []
    for x in xs:
        if alpha == 0:
            terms.append(1.0 if x < z else 0.0)
        else:
            terms.append(max(0.0, 1.0 - x / z) ** alpha)
    return math.fsum(terms) / len(xs)


def grid_sum(xs, z, alpha, h, mu2=0.0):
    """Double sum over observations and grid cells i = 0..floor(z/h)."""
    m = math.floor(z / h)
    terms = []
    for x in xs:
        for i in range(m + 1):
            u = (i * h - x) / h
            w = (1.0 - i * h / z) ** alpha
            terms.append(w * (K(u) - 0.5 * h * h * mu2 * Kdd(u)))
    return math.fsum(terms) / len(xs)


def adaptive_sum(xs, z, alpha, h, lambdas):
    terms = []
    for x, lam in zip(xs, lambdas):
        s = h * lam
        for i in range(math.floor(z / s) + 1):
            terms.append(((z - i * s) / z) ** alpha * K((i * s - x) / s))
    return math.fsum(terms) / len(xs)


def riemann_sum(xs, z, alpha, h, mu2=1.0):
    """Riemann sum of the bias-corrected density over [0, z]: full cells
    i < floor(z/h) plus the partial last cell."""
    m = math.floor(z / h)
    n = len(xs)
    terms = []
    for x in xs:
        for i in range(m):
            u = (i * h - x) / h
            terms.append((1.0 - i * h / z) ** alpha * (K(u) - 0.5 * h * h * mu2 * Kdd(u)) / n)
        u = (m * h - x) / h
        bracket = K(u) - 0.5 * h * h * mu2 * Kdd(u)
        terms.append((z - h * m) * (1.0 - h * m / z) ** alpha * bracket / (n * h))
    return math.fsum(terms)


def kde(xs, h, x):
    return math.fsum(K((x - xi) / h) for xi in xs) / (len(xs) * h)


def kde_corrected(xs, h, x, mu2=1.0):
    n = len(xs)
    return (math.fsum(K((x - xi) / h) for xi in xs) / (n * h)
            - h / (2 * n) * mu2 * math.fsum(Kdd((x - xi) / h) for xi in xs))
