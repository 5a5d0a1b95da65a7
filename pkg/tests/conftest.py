import random
from fractions import Fraction

import pytest

from formal_kuranishi.contraction import build_contraction
from formal_kuranishi.dgla import Dgla
from formal_kuranishi.graded import ChainComplex
from formal_kuranishi.hpt import compute_tau_and_D
from formal_kuranishi.problem import load_example

CORPUS = ["abelian", "circle", "fourterm", "heisenberg", "obstruction"]

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def small_rational(r: random.Random, zero_weight: int = 1) -> Fraction:
    if r.randrange(zero_weight + 2) < zero_weight:
        return Fraction(0)
    return Fraction(r.choice([-3, -2, -1, 1, 2, 3]), r.choice([1, 1, 2, 3]))


def random_two_term(seed: int, max_dim: int = 4, d_rank: int | None = None) -> Dgla:
    """Algebra on ``x_i`` (degree -1) and ``y_j`` (degree -2) with a random
    differential and a random symmetric bracket ``k_{-1} × k_{-1} → k_{-2}``.

    Jacobi and Leibniz hold automatically: every triple bracket and every
    term of the Leibniz rule lands in degree ≤ -3.
    """
    r = random.Random(seed)
    a = r.randint(1, max_dim)
    b = r.randint(1, max_dim)
    X = [f"x{i}" for i in range(a)]
    Y = [f"y{j}" for j in range(b)]
    rank = r.randint(0, min(a, b)) if d_rank is None else d_rank
    diff = {}
    # rank-limited differential: images are combinations of `rank` random vectors
    images = [{y: small_rational(r, 0) for y in Y} for _ in range(rank)]
    for x in X:
        coeffs = [small_rational(r) for _ in range(rank)]
        col = {}
        for c, img in zip(coeffs, images):
            for y, v in img.items():
                col[y] = col.get(y, 0) + c * v
        diff[x] = col
    cx = ChainComplex.from_entries({-1: X, -2: Y}, diff)
    entries = {}
    for i, x in enumerate(X):
        for z in X[i:]:
            entries[(x, z)] = {y: small_rational(r) for y in Y}
    return Dgla.from_upper(cx, entries)


def random_obstructed(seed: int, max_dim: int = 3) -> Dgla:
    """A random two-term algebra whose bracket hits homology (``𝒟¹ ≠ 0``)."""
    s = seed
    while True:
        g = random_two_term(s, max_dim)
        c, _ = build_contraction(g.complex)
        _, D = compute_tau_and_D(g, c, 2)
        if D.part(1):
            return g
        s += 1000


@pytest.fixture(scope="session")
def corpus():
    return {name: load_example(name) for name in CORPUS}


@pytest.fixture(scope="session")
def circle():
    g = load_example("circle").to_dgla()
    c, _ = build_contraction(g.complex)
    return g, c


@pytest.fixture(scope="session")
def obstruction():
    g = load_example("obstruction").to_dgla()
    c, _ = build_contraction(g.complex)
    return g, c


def random_complex(seed: int, degrees=(0, -1, -2, -3), max_count: int = 2) -> tuple[ChainComplex, dict]:
    """Random complex with known homology dimensions.

    Built as a sum of homology generators and acyclic pairs ``e → f``,
    followed by a random change of basis in every degree. Returns the
    complex and ``{degree: dim H}``.
    """
    from formal_kuranishi.graded import GradedMap, GradedSpace
    from formal_kuranishi.linalg import Matrix, rref

    r = random.Random(seed)
    h = {j: r.randint(0, max_count) for j in degrees}
    pairs = {j: r.randint(0, max_count) for j in degrees[:-1]}  # pairs from j to j-1
    dims = {j: h[j] + pairs.get(j, 0) + pairs.get(j + 1, 0) for j in degrees}
    labels = {j: [f"g{-j}_{i}" for i in range(dims[j])] for j in degrees}
    # in degree j: first the targets of pairs from j+1, then homology, then pair sources
    std = {}
    for j in degrees:
        m, n = dims.get(j - 1, 0), dims[j]
        if not n or not m:
            continue
        block = [[0] * n for _ in range(m)]
        src0 = pairs.get(j + 1, 0) + h[j]
        for p in range(pairs.get(j, 0)):
            block[p][src0 + p] = 1
        std[j] = Matrix.from_rows(block, n)

    def invertible(n):
        while True:
            rows = [[small_rational(r) for _ in range(n)] for _ in range(n)]
            m = Matrix.from_rows(rows, n) if n else Matrix.zeros(0, 0)
            reduced, piv, t = rref(m)
            if len(piv) == n:
                return m, t

    change = {j: invertible(dims[j]) for j in degrees}
    blocks = {}
    for j, b in std.items():
        P_low, _ = change[j - 1]
        _, P_inv = change[j]
        blocks[j] = P_low @ b @ P_inv
    space = GradedSpace(labels)
    return ChainComplex(space, GradedMap(space, space, -1, blocks)), h
