"""Flat-torus grids with the glide reflection (i, j) -> (i + m/2, -j).

Vertex (i, j) has id i*n + j, with i the column along phi and j the row
along theta. Squares in even rows are cut along '/', odd rows along '\\', so
the involution maps triangles to triangles.
"""
from fractions import Fraction
import math
import random
from typing import Callable

from data_models import DiscreteOneForm, SurfaceComplex
from fixtures.base import FixtureBuilder
from logger import get_logger
from mesh_core import check_simple_morse_odd, vertex_link

logger = get_logger(__name__)

VALUE_SCALE = 10 ** 6
TIE_BREAK_SCALE = 10 ** 12
RANDOM_TERMS = 4
MAX_RANDOM_ATTEMPTS = 200
MONKEY_STEP = Fraction(1, 1000)

Height = Callable[[float, float], float]


def grid_vertex(m: int, n: int, i: int, j: int) -> int:
    return (i % m) * n + (j % n)


def grid_triangles(m: int, n: int) -> tuple[tuple[int, int, int], ...]:
    triangles = []
    for i in range(m):
        for j in range(n):
            p00 = grid_vertex(m, n, i, j)
            p10 = grid_vertex(m, n, i + 1, j)
            p11 = grid_vertex(m, n, i + 1, j + 1)
            p01 = grid_vertex(m, n, i, j + 1)
            if j % 2 == 0:
                triangles += [(p00, p10, p11), (p00, p11, p01)]
            else:
                triangles += [(p00, p10, p01), (p10, p11, p01)]
    return tuple(triangles)


def grid_involution(m: int, n: int) -> dict[int, int]:
    return {grid_vertex(m, n, i, j): grid_vertex(m, n, i + m // 2, -j)
            for i in range(m) for j in range(n)}


def _check_size(m: int, n: int):
    if m < 4 or n < 4 or m % 2 or n % 2:
        raise ValueError(f"Grid torus needs even sides of at least 4, got {m}x{n}")


def grid_torus(m: int, n: int, height: Height) -> SurfaceComplex:
    """Samples height on the columns i < m/2 and extends it oddly.

    Values are rounded to six decimals and separated by a tie-break far
    below the rounding step.
    """
    _check_size(m, n)
    involution = grid_involution(m, n)
    f = {}
    for i in range(m // 2):
        for j in range(n):
            v = grid_vertex(m, n, i, j)
            x = height(2 * math.pi * i / m, 2 * math.pi * j / n)
            value = (Fraction(round(x * VALUE_SCALE), VALUE_SCALE) +
                     Fraction(v + 1, TIE_BREAK_SCALE))
            f[v] = value
            f[involution[v]] = -value
    triangles = grid_triangles(m, n)
    return SurfaceComplex(f, triangles, tuple(Fraction(1) for _ in triangles),
                          involution)


def _random_height(rng: random.Random) -> Height:
    """Sum of Fourier modes that are odd under (phi, theta) -> (phi + pi, -theta)."""
    terms = []
    for _ in range(RANDOM_TERMS):
        kind = rng.choice(("cc", "sc", "cs", "ss"))
        if kind in ("cc", "sc"):
            p = rng.choice((1, 3))
            q = rng.randint(0, 2)
        else:
            p = rng.choice((0, 2)) if kind == "cs" else 2
            q = rng.randint(1, 2)
        terms.append((kind, p, q, rng.uniform(-1, 1)))

    def height(phi, theta):
        total = 0.0
        for kind, p, q, coeff in terms:
            a = math.cos(p * phi) if kind[0] == "c" else math.sin(p * phi)
            b = math.cos(q * theta) if kind[1] == "c" else math.sin(q * theta)
            total += coeff * a * b
        return total

    return height


def random_torus(seed: int, m: int = 16, n: int = 16) -> SurfaceComplex:
    """A random simple Morse odd function on the grid torus.

    Raises:
        ValueError: If no attempt gave a simple function.
    """
    for attempt in range(MAX_RANDOM_ATTEMPTS):
        rng = random.Random(seed * MAX_RANDOM_ATTEMPTS + attempt)
        s = grid_torus(m, n, _random_height(rng))
        if check_simple_morse_odd(s).passed:
            return s
        logger.warning("Random torus attempt %d for seed %d is not simple",
                       attempt + 1, seed)
    raise ValueError(f"No simple random torus for seed {seed}")


def wave_torus(m: int = 16, n: int = 16) -> SurfaceComplex:
    """f = sin(theta) + cos(phi)/100: min, two saddles, max.

    Both parallel edges of its Reeb graph are fixed by the involution.
    """
    if n % 4:
        raise ValueError(f"Wave torus needs a row count divisible by 4, got {n}")
    return grid_torus(m, n, lambda phi, theta: math.sin(theta) + math.cos(phi) / 100)


def even_seam_cocycle(s: SurfaceComplex, m: int, n: int, kappa=1) -> DiscreteOneForm:
    """kappa on every edge crossing from column m-1 to 0 or from m/2-1 to m/2.

    Closed, even and not exact: it integrates to 2*kappa around a column loop.
    """
    kappa = Fraction(kappa)
    seams = {(m - 1, 0), (m // 2 - 1, m // 2)}
    values = {}
    for u, v in s.edge_triangles:
        cu, cv = u // n, v // n
        if (cu, cv) in seams:
            values[(u, v)] = kappa
        elif (cv, cu) in seams:
            values[(u, v)] = -kappa
    return DiscreteOneForm(values)


def monkey_saddle(s: SurfaceComplex, v: int) -> SurfaceComplex:
    """Makes v and I(v) link-degenerate by alternating the link of v.

    The links of v and I(v) must be disjoint.
    """
    link = vertex_link(s, v)
    image = s.involution[v]
    if image in link or set(link) & set(vertex_link(s, image)):
        raise ValueError(f"Links of {v} and {image} overlap")
    center = s.f[v]
    f = dict(s.f)
    for k, w in enumerate(link):
        step = MONKEY_STEP * (k // 2 + 1)
        f[w] = center - step if k % 2 == 0 else center + step
        f[s.involution[w]] = -f[w]
    return s.with_values(f)


class RandomTorusBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "random-torus"

    def build(self):
        return random_torus(self.seed, self.grid_size, self.grid_size)


class GridTorusBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "grid-torus"

    def build(self):
        return wave_torus(self.grid_size, self.grid_size)


class MonkeySaddleBuilder(FixtureBuilder):
    """The wave torus with a monkey saddle pair at column m/4, row n/2."""

    def get_fixture_name(self):
        return "monkey-saddle"

    def build(self):
        m = n = self.grid_size
        s = wave_torus(m, n)
        return monkey_saddle(s, grid_vertex(m, n, m // 4, n // 2))
