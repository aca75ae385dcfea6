"""Exact piecewise-quadratic cumulative measure carried by one graph edge."""

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from rationals import MalformedInputError, format_rational, parse_rational

ZERO = Fraction(0)

Quadratic = tuple[Fraction, Fraction, Fraction]


def evaluate(poly: Quadratic, t: Fraction) -> Fraction:
    a, b, c = poly
    return (a * t + b) * t + c


def add_polys(p: Quadratic, q: Quadratic) -> Quadratic:
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


def sub_polys(p: Quadratic, q: Quadratic) -> Quadratic:
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


@dataclass(frozen=True)
class EdgeMeasureProfile:
    """Cumulative mass m(t) of an edge, m(t) = a*t**2 + b*t + c on each piece.

    pieces[i] is valid on [knots[i], knots[i+1]] where knots are
    (lo, *breaks, hi). Below lo the mass is 0, above hi it is the total.
    """
    lo: Fraction
    hi: Fraction
    breaks: tuple[Fraction, ...]
    pieces: tuple[Quadratic, ...]

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(
                f"Profile interval is empty: [{self.lo}, {self.hi}]")
        if len(self.pieces) != len(self.breaks) + 1:
            raise ValueError(
                f"Profile has {len(self.pieces)} pieces for "
                f"{len(self.breaks)} breakpoints")
        knots = self.knots
        if any(p >= q for p, q in zip(knots, knots[1:])):
            raise ValueError("Profile breakpoints must be strictly inside "
                             "the interval and increasing")

    @property
    def knots(self) -> tuple[Fraction, ...]:
        return (self.lo, *self.breaks, self.hi)

    @property
    def mass(self) -> Fraction:
        return evaluate(self.pieces[-1], self.hi)

    @property
    def segments(self):
        """Yields (start, end, (a, b, c)) for every piece."""
        knots = self.knots
        for i, poly in enumerate(self.pieces):
            yield knots[i], knots[i + 1], poly

    def poly_at(self, t: Fraction) -> Quadratic:
        """Polynomial active at t, extended by constants outside [lo, hi]."""
        if t < self.lo:
            return (ZERO, ZERO, ZERO)
        if t > self.hi:
            return (ZERO, ZERO, self.mass)
        return self.pieces[bisect_right(self.breaks, t)]

    def value(self, t) -> Fraction:
        t = Fraction(t)
        return evaluate(self.poly_at(t), t)

    def density(self, t) -> Fraction:
        """Derivative m'(t), taken from the piece on the right of a break."""
        t = Fraction(t)
        if t < self.lo or t > self.hi:
            return ZERO
        a, b, _ = self.poly_at(t)
        return 2 * a * t + b

    def moment(self, k: int) -> Fraction:
        """Returns the exact k-th moment of the measure, sum of t**k dm(t)."""
        if k < 0:
            raise ValueError(f"Moment order must be non-negative, got {k}")
        total = ZERO
        for p, q, (a, b, _) in self.segments:
            total += (2 * a * (q ** (k + 2) - p ** (k + 2)) / (k + 2) +
                      b * (q ** (k + 1) - p ** (k + 1)) / (k + 1))
        return total

    def flux(self) -> Fraction:
        return self.moment(1)

    def partial_flux(self, t) -> Fraction:
        """Returns the integral of s dm(s) over [lo, t]."""
        t = min(max(Fraction(t), self.lo), self.hi)
        total = ZERO
        for p, q, (a, b, _) in self.segments:
            if p >= t:
                break
            q = min(q, t)
            total += (2 * a * (q ** 3 - p ** 3) / 3 +
                      b * (q ** 2 - p ** 2) / 2)
        return total

    def mirror(self) -> "EdgeMeasureProfile":
        """Profile of the image edge, t -> mass - m(-t) on [-hi, -lo]."""
        mass = self.mass
        return EdgeMeasureProfile(
            lo=-self.hi,
            hi=-self.lo,
            breaks=tuple(-x for x in reversed(self.breaks)),
            pieces=tuple((-a, b, mass - c) for a, b, c in reversed(self.pieces)),
        )

    def canonical(self) -> "EdgeMeasureProfile":
        """Merges adjacent pieces carrying the same polynomial."""
        breaks: list[Fraction] = []
        pieces: list[Quadratic] = [self.pieces[0]]
        for x, poly in zip(self.breaks, self.pieces[1:]):
            if poly == pieces[-1]:
                continue
            breaks.append(x)
            pieces.append(poly)
        return EdgeMeasureProfile(self.lo, self.hi, tuple(breaks), tuple(pieces))

    def distance(self, other: "EdgeMeasureProfile") -> Fraction:
        """Exact sup-norm distance between two cumulative profiles."""
        knots = sorted(set(self.knots) | set(other.knots))
        candidates = set(knots)
        for p, q in zip(knots, knots[1:]):
            mid = (p + q) / 2
            a, b, _ = sub_polys(self.poly_at(mid), other.poly_at(mid))
            if a != 0:
                vertex = -b / (2 * a)
                if p < vertex < q:
                    candidates.add(vertex)
        return max(abs(self.value(t) - other.value(t)) for t in candidates)

    def is_monotone(self) -> bool:
        """True when m is continuous, starts at 0 and never decreases."""
        if evaluate(self.pieces[0], self.lo) != 0:
            return False
        for i, (p, q, poly) in enumerate(self.segments):
            if i > 0 and evaluate(self.pieces[i - 1], p) != evaluate(poly, p):
                return False
            a, b, _ = poly
            if 2 * a * p + b < 0 or 2 * a * q + b < 0:
                return False
        return self.mass > 0

    @classmethod
    def uniform(cls, lo, hi, mass) -> "EdgeMeasureProfile":
        return cls.from_unit_polynomial(lo, hi, mass, (Fraction(1), ZERO))

    @classmethod
    def from_unit_polynomial(cls, lo, hi, mass,
                             coeffs: tuple) -> "EdgeMeasureProfile":
        """Builds m(t) = mass * (c1*u + c2*u**2) with u = (t - lo)/(hi - lo).

        The coefficients must satisfy c1 + c2 = 1 and c1 >= 0, c1 + 2*c2 >= 0.
        """
        lo, hi, mass = Fraction(lo), Fraction(hi), Fraction(mass)
        c1, c2 = (Fraction(c) for c in coeffs)
        if c1 + c2 != 1 or c1 < 0 or c1 + 2 * c2 < 0:
            raise ValueError(f"Not a cumulative unit polynomial: {coeffs}")
        w = hi - lo
        a = mass * c2 / w ** 2
        b = mass * (c1 / w - 2 * c2 * lo / w ** 2)
        c = mass * (-c1 * lo / w + c2 * lo ** 2 / w ** 2)
        return cls(lo, hi, (), ((a, b, c),))

    def to_json(self) -> dict:
        return {
            "breaks": [format_rational(x) for x in self.breaks],
            "pieces": [[format_rational(x) for x in poly]
                       for poly in self.pieces],
        }

    @classmethod
    def from_json(cls, data: dict, lo, hi) -> "EdgeMeasureProfile":
        try:
            breaks = tuple(parse_rational(x) for x in data["breaks"])
            pieces = tuple(
                tuple(parse_rational(x) for x in poly) for poly in data["pieces"])
        except (KeyError, TypeError) as e:
            raise MalformedInputError(f"Malformed profile: {data!r}") from e
        if any(len(poly) != 3 for poly in pieces):
            raise MalformedInputError("Profile pieces must have three coefficients")
        try:
            return cls(Fraction(lo), Fraction(hi), breaks, pieces)
        except ValueError as e:
            raise MalformedInputError(str(e)) from e


def profile_from_polys(lo: Fraction, hi: Fraction,
                       events: list[tuple[Fraction, Quadratic]],
                       start: Optional[Quadratic] = None) -> EdgeMeasureProfile:
    """Accumulates coefficient jumps into a canonical profile on [lo, hi].

    Each event (x, delta) adds delta to the active polynomial from x on.
    Events at or below lo are folded into the first piece, events at or
    above hi are ignored.
    """
    active = start or (ZERO, ZERO, ZERO)
    breaks: list[Fraction] = []
    pieces: list[Quadratic] = []
    for x, delta in sorted(events, key=lambda item: item[0]):
        if x >= hi:
            break
        if x > lo and (not breaks or breaks[-1] != x):
            pieces.append(active)
            breaks.append(x)
        active = add_polys(active, delta)
    pieces.append(active)
    return EdgeMeasureProfile(lo, hi, tuple(breaks), tuple(pieces)).canonical()
