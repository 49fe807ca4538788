"""Exact reproduction of the piecewise-linear infinite-state example.

A planar map rotates points quadrant-wise with branch-dependent scaling;
nine regions (eight explicit boxes-unions plus the unbounded complement E)
induce a finite quotient.  Everything here is exact rational arithmetic:
region images are computed as box unions with open/closed endpoint flags,
and the quotient's transition structure is *proved* by box containment,
including the E-to-E closure via branch preimages.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .system import TransitionSystem

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Interval:
    """A rational interval; ``None`` endpoints are infinite (always open)."""

    lo: Fraction | None
    hi: Fraction | None
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if self.lo is None and not self.lo_open:
            object.__setattr__(self, "lo_open", True)
        if self.hi is None and not self.hi_open:
            object.__setattr__(self, "hi_open", True)

    def __str__(self):
        l = "(" if self.lo_open else "["
        r = ")" if self.hi_open else "]"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"{l}{lo},{hi}{r}"

    def contains(self, v: Fraction) -> bool:
        if self.lo is not None and (v < self.lo or (v == self.lo and self.lo_open)):
            return False
        if self.hi is not None and (v > self.hi or (v == self.hi and self.hi_open)):
            return False
        return True

    def scale(self, c: Fraction) -> "Interval":
        """Image under multiplication by a nonzero rational.

        Negative factors swap the endpoints and their openness flags.
        """
        if c > 0:
            lo = None if self.lo is None else self.lo * c
            hi = None if self.hi is None else self.hi * c
            return Interval(lo, hi, self.lo_open, self.hi_open)
        if c < 0:
            lo = None if self.hi is None else self.hi * c
            hi = None if self.lo is None else self.lo * c
            return Interval(lo, hi, self.hi_open, self.lo_open)
        raise ValueError("zero scale factor")


def interval(lo, hi, lo_open=False, hi_open=False) -> Interval | None:
    """Build an interval, returning None when it would be empty."""
    lo = None if lo is None else Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    if lo is not None and hi is not None:
        if lo > hi:
            return None
        if lo == hi and (lo_open or hi_open):
            return None
    return Interval(lo, hi, lo_open, hi_open)


def _intersect(a: Interval, b: Interval) -> Interval | None:
    if a.lo is None:
        lo, lo_open = b.lo, b.lo_open
    elif b.lo is None or a.lo > b.lo:
        lo, lo_open = a.lo, a.lo_open
    elif b.lo > a.lo:
        lo, lo_open = b.lo, b.lo_open
    else:
        lo, lo_open = a.lo, a.lo_open or b.lo_open
    if a.hi is None:
        hi, hi_open = b.hi, b.hi_open
    elif b.hi is None or a.hi < b.hi:
        hi, hi_open = a.hi, a.hi_open
    elif b.hi < a.hi:
        hi, hi_open = b.hi, b.hi_open
    else:
        hi, hi_open = a.hi, a.hi_open or b.hi_open
    return interval(lo, hi, lo_open, hi_open)


def _subtract(a: Interval, b: Interval) -> list[Interval]:
    """The (at most two) pieces of ``a`` outside ``b``."""
    pieces = []
    if b.lo is not None:
        below = _intersect(a, Interval(None, b.lo, True, not b.lo_open))
        if below is not None:
            pieces.append(below)
    if b.hi is not None:
        above = _intersect(a, Interval(b.hi, None, not b.hi_open, True))
        if above is not None:
            pieces.append(above)
    return pieces


@dataclass(frozen=True)
class RationalBox:
    """The product of two rational intervals; empty boxes are rejected."""

    x: Interval
    y: Interval

    def __str__(self):
        return f"{self.x}x{self.y}"

    def contains(self, p: Point) -> bool:
        return self.x.contains(p[0]) and self.y.contains(p[1])

    def corner(self) -> tuple:
        return (self.x.lo, self.y.lo)


def box(x: Interval | None, y: Interval | None) -> RationalBox | None:
    if x is None or y is None:
        return None
    return RationalBox(x, y)


def make_box(x_lo, x_hi, y_lo, y_hi, *, xo=(False, False), yo=(False, False)) -> RationalBox:
    b = box(interval(x_lo, x_hi, *xo), interval(y_lo, y_hi, *yo))
    if b is None:
        raise ValueError("empty box")
    return b


def box_intersect(a: RationalBox, b: RationalBox) -> RationalBox | None:
    return box(_intersect(a.x, b.x), _intersect(a.y, b.y))


def box_subtract(a: RationalBox, b: RationalBox) -> list[RationalBox]:
    """Decompose ``a`` minus ``b`` into at most four disjoint boxes."""
    if box_intersect(a, b) is None:
        return [a]
    pieces = []
    for xs in _subtract(a.x, b.x):
        pieces.append(RationalBox(xs, a.y))
    overlap_x = _intersect(a.x, b.x)
    if overlap_x is not None:
        for ys in _subtract(a.y, b.y):
            pieces.append(RationalBox(overlap_x, ys))
    return pieces


def box_in_union(a: RationalBox, targets) -> bool:
    """Exact containment of a box in a finite union of boxes."""
    residue = [a]
    for t in targets:
        residue = [piece for r in residue for piece in box_subtract(r, t)]
        if not residue:
            return True
    return not residue


def box_residue(a: RationalBox, targets) -> list[RationalBox]:
    residue = [a]
    for t in targets:
        residue = [piece for r in residue for piece in box_subtract(r, t)]
    return residue


HALF = Fraction(1, 2)

#: The eight explicit regions as disjoint box unions.  The *2 regions are
#: box differences in their defining form; the decompositions below are
#: derived once and unit-tested against the defining membership predicates.
REGIONS: dict[str, tuple[RationalBox, ...]] = {
    "A1": (make_box(0, HALF, 0, HALF, xo=(True, False)),),
    "A2": (
        make_box(HALF, 1, 0, 1, xo=(True, False)),
        make_box(0, HALF, HALF, 1, xo=(True, False), yo=(True, False)),
    ),
    "B1": (make_box(-1, 0, 0, 1, yo=(True, False)),),
    "B2": (
        make_box(-2, -1, 0, 2, xo=(False, True), yo=(True, False)),
        make_box(-1, 0, 1, 2, yo=(True, False)),
    ),
    "C1": (make_box(-HALF, 0, -HALF, 0, xo=(False, True)),),
    "C2": (
        make_box(-1, -HALF, -1, 0, xo=(False, True)),
        make_box(-HALF, 0, -1, -HALF, xo=(False, True), yo=(False, True)),
    ),
    "D1": (make_box(0, HALF, -HALF, 0, yo=(False, True)),),
    "D2": (
        make_box(HALF, 1, -1, 0, xo=(True, False), yo=(False, True)),
        make_box(0, HALF, -1, -HALF, yo=(False, True)),
    ),
}

REGION_NAMES = ("A1", "A2", "B1", "B2", "C1", "C2", "D1", "D2", "E")

#: Output value of each region (the observation map of the demo).
REGION_OUTPUT = {
    "A1": "1", "A2": "1",
    "B1": "2", "B2": "2",
    "C1": "3", "C2": "3",
    "D1": "4", "D2": "4",
    "E": "5",
}

#: Successor region of each region in the finite quotient.
REGION_SUCCESSOR = {
    "A1": "B1", "A2": "B2",
    "B1": "C1", "B2": "C2",
    "C1": "D1", "C2": "D2",
    "D1": "A1", "D2": "A2",
    "E": "E",
}


@dataclass(frozen=True)
class Branch:
    """One branch of the dynamics: domain boxes and a rotation factor.

    The linear part is always (x, y) -> (-c*y, c*x).
    """

    label: str
    domain: tuple[RationalBox, ...]
    factor: Fraction

    def map_box(self, b: RationalBox) -> RationalBox:
        return RationalBox(b.y.scale(-self.factor), b.x.scale(self.factor))

    def preimage_box(self, target: RationalBox) -> RationalBox:
        inv = Fraction(1, 1) / self.factor
        return RationalBox(target.y.scale(inv), target.x.scale(-inv))


_POS = Interval(Fraction(0), None, lo_open=True)
_NONNEG = Interval(Fraction(0), None)
_NEG = Interval(None, Fraction(0), hi_open=True)
_NONPOS = Interval(None, Fraction(0))

#: Priority-ordered branches; the first two are disjoint by construction
#: and the third covers the rest of the plane.
BRANCHES = (
    Branch("x1>0,x2>=0", (RationalBox(_POS, _NONNEG),), Fraction(2)),
    Branch("x1<=0,x2>0", (RationalBox(_NONPOS, _POS),), Fraction(1, 2)),
    Branch(
        "otherwise",
        (RationalBox(_POS, _NEG), RationalBox(_NONPOS, _NONPOS)),
        Fraction(1),
    ),
)


def classify_point(p) -> str:
    """The unique region containing ``p``; E when outside all eight."""
    p = (Fraction(p[0]), Fraction(p[1]))
    for name in REGION_NAMES[:-1]:
        if any(b.contains(p) for b in REGIONS[name]):
            return name
    return "E"


def point_output(p) -> str:
    return REGION_OUTPUT[classify_point(p)]


def apply_dynamics(p) -> Point:
    """Exact image of a point under the first matching branch."""
    x1, x2 = Fraction(p[0]), Fraction(p[1])
    if x1 > 0 and x2 >= 0:
        c = Fraction(2)
    elif x1 <= 0 and x2 > 0:
        c = Fraction(1, 2)
    else:
        c = Fraction(1)
    return (-c * x2, c * x1)


def region_image(
    name: str, regions: Mapping[str, tuple[RationalBox, ...]] | None = None
) -> list[tuple[int, RationalBox]]:
    """Exact image of a region, split by dynamics branch.

    Each region box is cut along the branch domains (which partition the
    plane) and each nonempty piece mapped by its branch's linear part.
    """
    if name == "E":
        raise ValueError("E is not represented as boxes; use the preimage check")
    regions = REGIONS if regions is None else regions
    images = []
    for b in regions[name]:
        for i, branch in enumerate(BRANCHES):
            for dom in branch.domain:
                piece = box_intersect(b, dom)
                if piece is not None:
                    images.append((i, branch.map_box(piece)))
    return images


@dataclass(frozen=True)
class Containment:
    kind: str  # "image" or "preimage"
    source: str
    branch: str
    piece: str
    target: str
    ok: bool

    def __str__(self):
        arrow = "⊆" if self.ok else "⊄"
        return f"{self.kind}: {self.source} via {self.branch}: {self.piece} {arrow} {self.target}"


@dataclass(frozen=True)
class RegionCheck:
    holds: bool
    containments: tuple[Containment, ...]
    a1_image_equals_b1: bool
    failures: tuple[str, ...]


def verify_region_transitions(
    regions: Mapping[str, tuple[RationalBox, ...]] | None = None,
) -> RegionCheck:
    """Prove the quotient's transition structure by exact box containment.

    Forward: the image of each explicit region is contained in its
    successor region.  E-closure: for every branch, the branch-restricted
    preimage of every explicit region lies inside the union of the eight
    explicit regions, so no point of E can escape E.
    """
    regions = REGIONS if regions is None else regions
    containments: list[Containment] = []
    failures: list[str] = []

    for name in REGION_NAMES[:-1]:
        target = REGION_SUCCESSOR[name]
        target_boxes = regions[target]
        for branch_i, img in region_image(name, regions):
            ok = box_in_union(img, target_boxes)
            containments.append(Containment(
                "image", name, BRANCHES[branch_i].label, str(img), target, ok,
            ))
            if not ok:
                corner = box_residue(img, target_boxes)[0].corner()
                failures.append(
                    f"image of {name} via branch {BRANCHES[branch_i].label} "
                    f"not contained in {target}; escaping box corner {corner}"
                )

    a1_images = [img for _, img in region_image("A1", regions)]
    b1_boxes = list(regions["B1"])
    eq = all(box_in_union(img, b1_boxes) for img in a1_images) and all(
        box_in_union(b, a1_images) for b in b1_boxes
    )

    all_region_boxes = [b for name in REGION_NAMES[:-1] for b in regions[name]]
    for branch in BRANCHES:
        for name in REGION_NAMES[:-1]:
            for target_box in regions[name]:
                pre = branch.preimage_box(target_box)
                for dom in branch.domain:
                    piece = box_intersect(pre, dom)
                    if piece is None:
                        continue
                    ok = box_in_union(piece, all_region_boxes)
                    containments.append(Containment(
                        "preimage", name, branch.label, str(piece), "A1..D2", ok,
                    ))
                    if not ok:
                        corner = box_residue(piece, all_region_boxes)[0].corner()
                        failures.append(
                            f"branch {branch.label} preimage of {name} leaves "
                            f"the explicit regions; escaping box corner {corner}"
                        )

    return RegionCheck(
        holds=not failures,
        containments=tuple(containments),
        a1_image_equals_b1=eq,
        failures=tuple(failures),
    )


def build_pwa_quotient() -> TransitionSystem:
    """The verified nine-state quotient of the piecewise-linear system.

    All states initial, A1 secret, one input; transitions exactly the
    verified successor map.  Raises when the symbolic verification fails.
    """
    check = verify_region_transitions()
    if not check.holds:
        raise RuntimeError(
            "region transition verification failed: " + "; ".join(check.failures)
        )
    transitions = [
        (name, "u", REGION_SUCCESSOR[name]) for name in REGION_NAMES
    ]
    return TransitionSystem(
        name="eq5-quotient",
        states=REGION_NAMES,
        initial=REGION_NAMES,
        secret={"A1"},
        inputs=("u",),
        outputs=sorted(set(REGION_OUTPUT.values())),
        output_map=REGION_OUTPUT,
        transitions=transitions,
    )
