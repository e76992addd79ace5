"""Exact arithmetic on external angles under the degree-d angle map.

Angles are rationals in [0, 1) acted on by multiplication by d (mod 1).
Everything here is exact; floating point never enters the combinatorics,
so ray labels at any depth are unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class BoundaryAngleError(ValueError):
    """Raised when a query angle coincides with a cycle angle."""


@dataclass(frozen=True)
class ExternalAngle:
    """A rational angle num/den in [0, 1), stored in lowest terms."""

    num: int
    den: int

    def __lt__(self, other: "ExternalAngle") -> bool:
        return self.num * other.den < other.num * self.den

    def __le__(self, other: "ExternalAngle") -> bool:
        return self.num * other.den <= other.num * self.den

    def __gt__(self, other: "ExternalAngle") -> bool:
        return self.num * other.den > other.num * self.den

    def __ge__(self, other: "ExternalAngle") -> bool:
        return self.num * other.den >= other.num * self.den

    def __init__(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("angle denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    @classmethod
    def from_fraction(cls, f: Fraction) -> "ExternalAngle":
        return cls(f.numerator, f.denominator)

    @classmethod
    def parse(cls, text: str) -> "ExternalAngle":
        """Parse the exact serialized form "num/den".

        Rejects non-reduced or out-of-range forms: the wire format is the
        canonical representative, nothing else.
        """
        parts = text.strip().split("/")
        if len(parts) == 1:
            num, den = int(parts[0]), 1
        elif len(parts) == 2:
            num, den = int(parts[0]), int(parts[1])
        else:
            raise ValueError(f"malformed angle {text!r}")
        if den <= 0 or not (0 <= num < den) or gcd(num, den) != 1:
            if not (num == 0 and den == 1):
                raise ValueError(f"angle {text!r} is not reduced in [0,1)")
        return cls(num, den)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __float__(self) -> float:
        return self.num / self.den

    def times(self, k: int) -> "ExternalAngle":
        return ExternalAngle(self.num * k, self.den)

    def plus(self, other: "ExternalAngle") -> "ExternalAngle":
        return ExternalAngle(
            self.num * other.den + other.num * self.den, self.den * other.den
        )


def multiply_by_d(a: ExternalAngle, d: int) -> ExternalAngle:
    """The angle map theta -> d*theta (mod 1), exact."""
    if d < 2:
        raise ValueError("degree must be >= 2")
    return ExternalAngle(a.num * d, a.den)


def preimage_angles(a: ExternalAngle, d: int) -> list[ExternalAngle]:
    """The d solutions of d*x = a (mod 1), sorted."""
    if d < 2:
        raise ValueError("degree must be >= 2")
    return sorted(ExternalAngle(a.num + k * a.den, a.den * d) for k in range(d))


def orbit(a: ExternalAngle, d: int, limit: int = 10_000) -> list[ExternalAngle]:
    """Forward orbit of a under multiplication by d, up to first repeat."""
    seen: dict[ExternalAngle, int] = {}
    out: list[ExternalAngle] = []
    cur = a
    while cur not in seen:
        if len(out) > limit:
            raise RuntimeError("angle orbit exceeded limit")
        seen[cur] = len(out)
        out.append(cur)
        cur = multiply_by_d(cur, d)
    return out


def exact_period(a: ExternalAngle, d: int) -> int | None:
    """Period of a under x d if periodic, else None (preperiodic/escaping)."""
    orb = orbit(a, d)
    back = multiply_by_d(orb[-1], d)
    if back == orb[0]:
        return len(orb)
    return None


@dataclass(frozen=True)
class RotationCycle:
    """A period-q cycle of the angle map whose circular permutation is
    rotation by p/q."""

    d: int
    p: int
    q: int
    angles: tuple[ExternalAngle, ...]  # circularly sorted, smallest first

    def __post_init__(self):
        if not (0 < self.p < self.q) or gcd(self.p, self.q) != 1:
            raise ValueError("rotation number must be p/q in lowest terms, 0<p<q")
        if len(self.angles) != self.q:
            raise ValueError("cycle must contain exactly q angles")

    def index_of(self, a: ExternalAngle) -> int | None:
        try:
            return self.angles.index(a)
        except ValueError:
            return None


def _is_rotation_by_p(sorted_cycle: Sequence[ExternalAngle], d: int, p: int) -> bool:
    q = len(sorted_cycle)
    pos = {a: i for i, a in enumerate(sorted_cycle)}
    shift = None
    for i, a in enumerate(sorted_cycle):
        j = pos.get(multiply_by_d(a, d))
        if j is None:
            return False
        s = (j - i) % q
        if shift is None:
            shift = s
        elif s != shift:
            return False
    return shift == p % q


def rotation_cycles(d: int, p: int, q: int) -> list[RotationCycle]:
    """All period-q cycles of x d acting as rotation by p/q, sorted by
    smallest angle.

    Periodic angles of period q have denominator dividing d^q - 1, so the
    search over numerators mod d^q - 1 is exhaustive.  For d = 2 exactly one
    cycle exists for each p/q; its absence is reported as an error.
    """
    if d < 2:
        raise ValueError("degree must be >= 2")
    if not (0 < p < q) or gcd(p, q) != 1:
        raise ValueError("need 0 < p < q with gcd(p, q) = 1")
    den = d**q - 1
    seen: set[ExternalAngle] = set()
    cycles: list[RotationCycle] = []
    for num in range(den):
        a = ExternalAngle(num, den)
        if a in seen:
            continue
        orb = orbit(a, d)
        seen.update(orb)
        if len(orb) != q:
            continue
        cyc = tuple(sorted(orb))
        if _is_rotation_by_p(cyc, d, p):
            cycles.append(RotationCycle(d=d, p=p, q=q, angles=cyc))
    cycles.sort(key=lambda c: c.angles[0].as_fraction())
    if d == 2 and not cycles:
        raise RuntimeError(f"no {p}/{q} rotation cycle found for d=2; impossible")
    return cycles


def circular_sector(
    a: ExternalAngle, cuts: Sequence[ExternalAngle]
) -> int:
    """Index of the circular arc [cuts[j], cuts[j+1]) containing a.

    Arcs are half-open counterclockwise; index j names the arc starting at
    cuts[j].  Index 0 is the arc that wraps through angle 0 when the cuts do
    not include 0, matching the convention that arcs are enumerated from the
    last cut back around to the first.
    """
    cuts = sorted(cuts)
    if a in cuts:
        raise BoundaryAngleError(f"angle {a} lies on a cut")
    # arc j is [cuts[j-1], cuts[j]) for j >= 1; arc 0 is [cuts[-1], cuts[0])
    for j in range(1, len(cuts)):
        if cuts[j - 1] < a < cuts[j]:
            return j
    return 0


def sector_of(a: ExternalAngle, cycle: RotationCycle) -> int:
    """Which arc between consecutive cycle angles contains a.

    Raises BoundaryAngleError when a is itself a cycle angle; callers treat
    that as the on-ray case.
    """
    return circular_sector(a, cycle.angles)


def angle_depth(a: ExternalAngle, cycle: RotationCycle, max_depth: int = 512) -> int | None:
    """Smallest k >= 0 with d^k * a in the cycle, or None."""
    cur = a
    members = set(cycle.angles)
    for k in range(max_depth + 1):
        if cur in members:
            return k
        cur = multiply_by_d(cur, cycle.d)
    return None


def arcs_preimage(
    arcs: Iterable[tuple[ExternalAngle, ExternalAngle]], d: int
) -> list[tuple[ExternalAngle, ExternalAngle]]:
    """Preimage under x d of a union of ccw arcs (a, b): d arcs per input,
    each one-d-th the width, sorted by start angle."""
    out = []
    for a, b in arcs:
        width = (b.as_fraction() - a.as_fraction()) % 1
        if width == 0:  # full-circle arc degenerates; caller avoids this
            width = Fraction(1)
        for k in range(d):
            lo = ExternalAngle(a.num + k * a.den, a.den * d)
            hi_f = (lo.as_fraction() + width / d) % 1
            out.append((lo, ExternalAngle(hi_f.numerator, hi_f.denominator)))
    out.sort(key=lambda ab: ab[0].as_fraction())
    return out
