"""Singleton-type bounds for entanglement-assisted codes and their rate regions.

Structural bounds are compared in exact rational arithmetic; the entropic
refinements take measured block entropies (bits) and compare at 1e-9.

Bound identifiers:

``ea_singleton``
    k <= c + max(0, n - 2d + 2)
``erasure_singleton``
    k <= n - d + 1
``high_distance``
    k <= (n-d+1)(c + 2d - 2 - n) / (3d - 3 - n), only when 2(d-1) >= n
``pure_singleton``
    k <= n - 2d + 2 + c, only for codes flagged pure
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Union

from .errors import DeltaOutOfRange, InvalidParams, SigmaOutOfRange

Rational = Union[int, Fraction, str]

ENTROPIC_TOL = 1e-9
GENERAL_BOUNDS = ("ea_singleton", "erasure_singleton", "high_distance")


def as_fraction(value: Rational) -> Fraction:
    if isinstance(value, float):
        raise TypeError("bound parameters must be exact; pass 'p/q' strings or Fractions")
    return Fraction(value)


@dataclass(frozen=True)
class CodeParams:
    """Parameters [[n, k, d; c]]_q; k = log_q K and c = net ebit pairs consumed."""

    n: int
    k: Fraction
    d: int
    c: Fraction = Fraction(0)
    q: int = 2
    pure: bool | None = None
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "k", as_fraction(self.k))
        object.__setattr__(self, "c", as_fraction(self.c))
        if self.n < 1:
            raise InvalidParams("n must be positive")
        if not 1 <= self.d <= self.n + 1:
            raise InvalidParams(f"need 1 <= d <= n+1, got d={self.d}, n={self.n}")
        if not 0 <= self.k <= self.n:
            raise InvalidParams(f"need 0 <= k <= n, got k={self.k}")
        if self.q < 2:
            raise InvalidParams("alphabet size q must be >= 2")

    @property
    def delta(self) -> Fraction:
        return Fraction(self.d - 1, self.n)

    @property
    def high_distance(self) -> bool:
        return 2 * (self.d - 1) >= self.n

    @property
    def key(self) -> tuple:
        return (self.n, self.k, self.d, self.c, self.q)

    @property
    def rate_point(self) -> tuple[Fraction, Fraction]:
        return self.c / self.n, self.k / self.n

    def with_(self, **changes) -> CodeParams:
        return replace(self, **changes)

    def __str__(self) -> str:
        body = f"{self.n},{self.k},{self.d}"
        if self.c:
            body += f";{self.c}"
        return f"[[{body}]]_{self.q}"


@dataclass(frozen=True)
class BoundCheck:
    bound: str
    applicable: bool
    lhs: Fraction | float | None
    rhs: Fraction | float | None
    satisfied: bool
    tight: bool


@dataclass(frozen=True)
class BoundVerdict:
    params: CodeParams
    checks: tuple[BoundCheck, ...]
    entropic: bool = False

    def check(self, bound: str) -> BoundCheck:
        return next(c for c in self.checks if c.bound == bound)

    @property
    def admissible(self) -> bool:
        return all(c.satisfied for c in self.checks if c.applicable)

    @property
    def violating(self) -> list[str]:
        return [c.bound for c in self.checks if c.applicable and not c.satisfied]

    @property
    def inapplicable(self) -> list[str]:
        return [c.bound for c in self.checks if not c.applicable]

    @property
    def tight(self) -> list[str]:
        return [c.bound for c in self.checks if c.applicable and c.tight]

    @property
    def eaqmds(self) -> bool:
        """Admissible and on the upper boundary of the general region."""
        return self.admissible and any(b in GENERAL_BOUNDS for b in self.tight)

    def to_dict(self) -> dict:
        def conv(v):
            return str(v) if isinstance(v, Fraction) else v

        p = self.params
        return {
            "params": {
                "n": p.n, "k": str(p.k), "d": p.d, "c": str(p.c), "q": p.q,
                "pure": p.pure, "source": p.source,
            },
            "admissible": self.admissible,
            "eaqmds": self.eaqmds,
            "violating": self.violating,
            "tight": self.tight,
            "inapplicable": self.inapplicable,
            "checks": [{k: conv(v) for k, v in asdict(c).items()} for c in self.checks],
        }


def _exact(bound: str, lhs: Fraction, rhs: Fraction | None) -> BoundCheck:
    if rhs is None:
        return BoundCheck(bound, False, lhs, None, True, False)
    return BoundCheck(bound, True, lhs, rhs, lhs <= rhs, lhs == rhs)


def classify(params: CodeParams) -> BoundVerdict:
    """Evaluate every structural bound on ``params`` exactly."""
    n, k, d, c = params.n, params.k, params.d, params.c
    checks = [
        _exact("ea_singleton", k, c + max(0, n - 2 * d + 2)),
        _exact("erasure_singleton", k, Fraction(n - d + 1)),
    ]
    if params.high_distance:
        rhs = Fraction(n - d + 1) * (c + 2 * d - 2 - n) / (3 * d - 3 - n)
        checks.append(_exact("high_distance", k, rhs))
    else:
        checks.append(_exact("high_distance", k, None))
    checks.append(_exact("pure_singleton", k, n - 2 * d + 2 + c if params.pure else None))
    return BoundVerdict(params, tuple(checks))


def _approx(bound: str, lhs: float, rhs: float | None, tol: float) -> BoundCheck:
    if rhs is None:
        return BoundCheck(bound, False, lhs, None, True, False)
    return BoundCheck(bound, True, lhs, rhs, lhs <= rhs + tol, abs(lhs - rhs) <= tol)


def entropic_classify(
    params: CodeParams, sigma_bar: float, sigma_bar_bar: float, tol: float = ENTROPIC_TOL
) -> BoundVerdict:
    """Bounds on log2 K refined by measured block entropies.

    ``sigma_bar`` is the per-system entropy of a random (d-1)-block and
    ``sigma_bar_bar`` that of a random (n-d+1)-block, both in bits.  With
    both at log2 q this reproduces :func:`classify` in bit units.
    """
    log_q = math.log2(params.q)
    for name, s in (("sigma_bar", sigma_bar), ("sigma_bar_bar", sigma_bar_bar)):
        if not -tol <= s <= log_q + tol:
            raise SigmaOutOfRange(f"{name}={s} outside [0, log2 q = {log_q}]")
    n, d = params.n, params.d
    lhs = float(params.k) * log_q
    ell = float(params.c) * log_q
    if not params.high_distance:
        checks = [
            _approx("ea_singleton", lhs, (n - 2 * d + 2) * sigma_bar + ell, tol),
            _approx("erasure_singleton", lhs, (n - d + 1) * sigma_bar_bar, tol),
            _approx("high_distance", lhs, None, tol),
        ]
    else:
        piecewise = (n - d + 1) / (3 * d - 3 - n) * (ell + (2 * d - 2 - n) * sigma_bar_bar)
        checks = [
            _approx("ea_singleton", lhs, ell, tol),
            _approx("erasure_singleton", lhs, (n - d + 1) * sigma_bar_bar, tol),
            _approx("high_distance", lhs, piecewise, tol),
        ]
    pure_rhs = (n - 2 * d + 2) * log_q + ell if params.pure else None
    checks.append(_approx("pure_singleton", lhs, pure_rhs, tol))
    return BoundVerdict(params, tuple(checks), entropic=True)


# --- rate regions ----------------------------------------------------------------

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class HalfPlane:
    """a*x + b*y <= beta, with x the ebit rate c/n and y the qubit rate k/n."""

    a: Fraction
    b: Fraction
    beta: Fraction
    name: str

    def value(self, x: Fraction, y: Fraction) -> Fraction:
        return self.a * x + self.b * y

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return self.value(x, y) <= self.beta

    def on_boundary(self, x: Fraction, y: Fraction) -> bool:
        return self.value(x, y) == self.beta


@dataclass(frozen=True)
class Segment:
    start: Point
    end: Point | None  # None: horizontal ray to x = +infinity
    status: str  # "attained" or "open"


@dataclass(frozen=True)
class RateRegion:
    delta: Fraction
    regime: str
    vertices: tuple[Point, ...]
    half_planes: tuple[HalfPlane, ...]
    segments: tuple[Segment, ...]
    points: dict[str, Point] = field(default_factory=dict)
    line_a: HalfPlane | None = None


def _regime(delta: Fraction) -> str:
    if delta < Fraction(1, 2):
        return "delta<1/2"
    return "delta=1/2" if delta == Fraction(1, 2) else "delta>1/2"


def region_half_planes(delta: Fraction) -> tuple[HalfPlane, ...]:
    one = Fraction(1)
    planes = [
        HalfPlane(-one, one, max(Fraction(0), 1 - 2 * delta), "ea_singleton"),
        HalfPlane(Fraction(0), one, 1 - delta, "erasure_singleton"),
    ]
    if 2 * delta >= 1:
        slope = (1 - delta) / (3 * delta - 1)
        planes.append(HalfPlane(-slope, one, slope * (2 * delta - 1), "high_distance"))
    planes.append(HalfPlane(Fraction(0), -one, Fraction(0), "nonnegative_rate"))
    return tuple(planes)


def rate_region(delta: Rational) -> RateRegion:
    """Outer bound on achievable (c/n, k/n) for relative distance (d-1)/n = delta."""
    delta = as_fraction(delta)
    if not 0 <= delta <= 1:
        raise DeltaOutOfRange(f"delta={delta} outside [0, 1]")
    zero, half = Fraction(0), Fraction(1, 2)
    eaq = (delta, 1 - delta)
    points = {"EAQ": eaq}
    if delta < half:
        start = (-(1 - 2 * delta), zero)
        points["QMDS"] = (zero, 1 - 2 * delta)
        vertices = [start, eaq]
        segments = [Segment(start, eaq, "attained"), Segment(eaq, None, "attained")]
    elif delta == half:
        vertices = [(zero, zero), eaq]
        points["MDS"] = ((1 - delta) / 2, (1 - delta) / 2)
        segments = [Segment((zero, zero), eaq, "attained"), Segment(eaq, None, "attained")]
    else:
        mds = ((1 - delta) / 2, (1 - delta) / 2)
        points["MDS"] = mds
        vertices = [(zero, zero), mds, eaq]
        segments = [
            Segment((zero, zero), mds, "attained"),
            Segment(mds, eaq, "open"),
            Segment(eaq, None, "attained"),
        ]
    deduped: list[Point] = []
    for v in vertices:
        if v not in deduped:
            deduped.append(v)
    segments = [s for s in segments if s.start != s.end]
    line_a = HalfPlane(Fraction(-1), Fraction(1), 1 - 2 * delta, "pure_singleton")
    return RateRegion(
        delta, _regime(delta), tuple(deduped), region_half_planes(delta), tuple(segments), points, line_a
    )


def region_contains(region: RateRegion, x: Rational, y: Rational) -> bool:
    x, y = as_fraction(x), as_fraction(y)
    return y >= 0 and all(h.contains(x, y) for h in region.half_planes)


def segment_slope(segment: Segment) -> Fraction:
    if segment.end is None:
        return Fraction(0)
    (x0, y0), (x1, y1) = segment.start, segment.end
    return (y1 - y0) / (x1 - x0)


# --- export -------------------------------------------------------------------

def region_to_csv(region: RateRegion) -> str:
    """Rows ``kind,label,v1,v2,v3``: vertices, named points, half-planes, segments."""
    labels = {v: name for name, v in region.points.items()}
    rows = ["kind,label,v1,v2,v3"]
    for v in region.vertices:
        rows.append(f"vertex,{labels.get(v, '')},{v[0]},{v[1]},")
    for name, (x, y) in region.points.items():
        rows.append(f"point,{name},{x},{y},")
    for h in region.half_planes:
        rows.append(f"halfplane,{h.name},{h.a},{h.b},{h.beta}")
    if region.line_a is not None:
        h = region.line_a
        rows.append(f"annotation,{h.name},{h.a},{h.b},{h.beta}")
    for s in region.segments:
        end = "inf" if s.end is None else f"{s.end[0]};{s.end[1]}"
        rows.append(f"segment,{s.status},{s.start[0]};{s.start[1]},{end},{segment_slope(s)}")
    return "\n".join(rows) + "\n"


def vertices_str(region: RateRegion) -> str:
    return ";".join(f"({x},{y})" for x, y in region.vertices)


def region_svg(regions: list[RateRegion], panel: int = 260) -> str:
    """Static SVG with one panel per region, axes x in [-1, 1] and y in [0, 1]."""
    pad = 30
    width = len(regions) * (panel * 2 + pad) + pad
    height = panel + 2 * pad

    def to_px(i: int, x: Fraction, y: Fraction) -> tuple[float, float]:
        ox = pad + i * (2 * panel + pad)
        return ox + (float(x) + 1) * panel, pad + (1 - float(y)) * panel

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">'
    ]
    for i, region in enumerate(regions):
        x0, y0 = to_px(i, Fraction(-1), Fraction(0))
        x1, y1 = to_px(i, Fraction(1), Fraction(1))
        xm, _ = to_px(i, Fraction(0), Fraction(0))
        parts.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="#999"/>')
        parts.append(f'<line x1="{xm}" y1="{y0}" x2="{xm}" y2="{y1}" stroke="#ccc"/>')
        outline = list(region.vertices)
        last = region.vertices[-1]
        if last[0] < 1:
            outline.append((Fraction(1), last[1]))
        outline += [(max(Fraction(1), last[0]), Fraction(0))]
        if outline[0][1] != 0:
            outline.append((outline[0][0], Fraction(0)))
        pts = " ".join("{:.2f},{:.2f}".format(*to_px(i, x, y)) for x, y in outline)
        parts.append(f'<polygon points="{pts}" fill="#cfe0f5" stroke="#1f4e8c" stroke-width="1.5"/>')
        if region.line_a is not None:
            beta = region.line_a.beta
            xa = max(Fraction(-1), -beta)
            xb = min(Fraction(1), 1 - beta)
            ax, ay = to_px(i, xa, xa + beta)
            bx, by = to_px(i, xb, xb + beta)
            parts.append(
                f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
                f'stroke="#b03a2e" stroke-dasharray="4 3"/>'
            )
            parts.append(f'<text x="{bx - 12:.2f}" y="{by + 12:.2f}" fill="#b03a2e">A</text>')
        for name, (x, y) in region.points.items():
            px, py = to_px(i, x, y)
            parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="black"/>')
            parts.append(f'<text x="{px + 4:.2f}" y="{py - 4:.2f}">{name}</text>')
        parts.append(f'<text x="{x0 + 4}" y="{y1 + 14}">delta = {region.delta}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
