import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# (p, r) pairs small enough for exhaustive checks everywhere
SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2)]


# -- schoolbook oracle: polynomials over Z_p reduced by the modulus ----------
# Shares no code with the library's log/exp tables.


def ref_mul(a, b, modulus, p):
    r = len(modulus) - 1
    prod = [0] * (2 * r)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, r - 1, -1):
        c = prod[k]
        if c:
            for i in range(r + 1):
                prod[k - r + i] = (prod[k - r + i] - c * modulus[i]) % p
    return tuple(prod[:r])


def ref_pow(a, e, modulus, p):
    r = len(modulus) - 1
    out = tuple([1] + [0] * (r - 1))
    for _ in range(e):
        out = ref_mul(out, a, modulus, p)
    return out


def ref_add(a, b, p):
    return tuple((x + y) % p for x, y in zip(a, b))


def ref_trace(a, modulus, p):
    """sum of a^(p^i), i < r, by repeated multiplication."""
    r = len(modulus) - 1
    total = tuple([0] * r)
    x = tuple(a)
    for _ in range(r):
        total = ref_add(total, x, p)
        x = ref_pow(x, p, modulus, p)
    assert all(c == 0 for c in total[1:])
    return total[0]


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
