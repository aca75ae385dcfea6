"""The octahedron with the antipodal map: a double cover of RP^2."""
from fractions import Fraction

from data_models import SurfaceComplex
from fixtures.base import FixtureBuilder

NORTH, SOUTH, E1, E2, E3, E4 = range(6)

TRIANGLES = (
    (NORTH, E1, E2), (NORTH, E2, E3), (NORTH, E3, E4), (NORTH, E4, E1),
    (SOUTH, E2, E1), (SOUTH, E3, E2), (SOUTH, E4, E3), (SOUTH, E1, E4),
)
ANTIPODE = {NORTH: SOUTH, SOUTH: NORTH, E1: E3, E3: E1, E2: E4, E4: E2}


def octahedron(values: dict[int, Fraction]) -> SurfaceComplex:
    return SurfaceComplex(dict(values), TRIANGLES,
                          tuple(Fraction(1) for _ in TRIANGLES), dict(ANTIPODE))


def height_octahedron() -> SurfaceComplex:
    """f = z: the four equator vertices all sit at level 0."""
    zero = Fraction(0)
    return octahedron({NORTH: Fraction(1), SOUTH: Fraction(-1),
                       E1: zero, E2: zero, E3: zero, E4: zero})


def sphere_octahedron() -> SurfaceComplex:
    """A simple odd function with one minimum and one maximum."""
    return octahedron({
        NORTH: Fraction(1), SOUTH: Fraction(-1),
        E1: Fraction(3, 10), E2: Fraction(1, 10),
        E3: Fraction(-3, 10), E4: Fraction(-1, 10),
    })


class OctahedronBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "octahedron"

    def build(self):
        return height_octahedron()


class SphereBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "sphere"

    def build(self):
        return sphere_octahedron()
