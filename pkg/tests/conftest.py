import math


def rel(a: float, b: float) -> float:
    """Relative deviation |a - b| / |b| (b is the reference)."""
    if b == 0.0:
        return abs(a)
    return abs(a - b) / abs(b)


def logspace(lo: float, hi: float, n: int):
    if n == 1:
        return [lo]
    r = (hi / lo) ** (1.0 / (n - 1))
    return [lo * r**i for i in range(n)]


def assert_close(a: float, b: float, rtol: float, what: str = ""):
    assert rel(a, b) <= rtol, f"{what}: {a!r} vs {b!r} (rel {rel(a, b):.3e} > {rtol})"


def neville_to_zero(xs, ys):
    """Polynomial extrapolation of (xs, ys) samples to x = 0."""
    tab = list(ys)
    n = len(tab)
    for lvl in range(1, n):
        new = []
        for i in range(n - lvl):
            x0, x1 = xs[i], xs[i + lvl]
            new.append((x0 * tab[i + 1] - x1 * tab[i]) / (x0 - x1))
        tab = new
    return tab[0]


def ulps_apart(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / math.ulp(max(abs(a), abs(b)))
