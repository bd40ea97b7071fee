"""Service-region geometry, segmented-waveguide layouts, and antenna placements.

Coordinate convention: users live in the horizontal rectangle
x in [0, d_x], y in [-d_y/2, +d_y/2] at height z = 0.  The waveguide runs
along the x axis at y = 0, z = height.  Each of the M segments has length
``seg_length`` and is fed at its left end; one pinching antenna (PA) may be
activated per segment at a point psi with feed_x[m] <= psi <= feed_x[m] + L.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .rng import philox_stream

ARCHITECTURES = ("SS", "SA1", "SA2", "PASS")

# Relative slack for validating that segment feeds are at least one segment
# length apart; build_layout produces exact spacing but float arithmetic on
# arbitrary inputs can be off by one ulp.
_SPACING_RTOL = 1e-12


@dataclass(frozen=True)
class ServiceRegion:
    """Rectangular user region: x in [0, d_x], y in [-d_y/2, +d_y/2]."""

    d_x: float
    d_y: float

    def __post_init__(self) -> None:
        if not (self.d_x > 0 and self.d_y > 0):
            raise ValueError(
                f"region sides must be positive, got d_x={self.d_x}, d_y={self.d_y}"
            )


@dataclass(frozen=True, eq=False)
class UserDrop:
    """One realization of K user positions, shape (K, 2) with columns (u_x, u_y)."""

    positions: np.ndarray

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise ValueError(f"positions must have shape (K, 2) with K >= 1, got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise ValueError("user positions must be finite")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def k(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True, eq=False)
class WaveguideLayout:
    """A segmented waveguide: M segments of length seg_length fed at feed_x.

    ``feed_x`` must be strictly increasing with consecutive feeds at least one
    segment length apart, so segments never overlap.  ``height`` is the
    vertical clearance between the waveguide and the user plane.
    """

    m_segments: int
    seg_length: float
    feed_x: np.ndarray
    height: float

    def __post_init__(self) -> None:
        if self.m_segments < 1:
            raise ValueError(f"m_segments must be >= 1, got {self.m_segments}")
        if not self.seg_length > 0:
            raise ValueError(f"seg_length must be positive, got {self.seg_length}")
        if not self.height > 0:
            raise ValueError(f"height must be positive, got {self.height}")
        feeds = np.asarray(self.feed_x, dtype=float)
        if feeds.shape != (self.m_segments,):
            raise ValueError(
                f"feed_x must have shape ({self.m_segments},), got {feeds.shape}"
            )
        gaps = np.diff(feeds)
        min_gap = self.seg_length * (1.0 - _SPACING_RTOL)
        if self.m_segments > 1 and not np.all(gaps >= min_gap):
            raise ValueError("feed_x must be strictly increasing with gaps >= seg_length")
        feeds.setflags(write=False)
        object.__setattr__(self, "feed_x", feeds)

    def segment_end(self, segment: int) -> float:
        return float(self.feed_x[segment]) + self.seg_length

    @property
    def span(self) -> tuple[float, float]:
        """Leftmost feed to rightmost segment end (the aperture hull)."""
        return float(self.feed_x[0]), float(self.feed_x[-1]) + self.seg_length


@dataclass(frozen=True, eq=False)
class Placement:
    """Activated PA positions (and, for SA2, per-segment phase shifts).

    architecture:
        "SS"   - one segment active; pa_x has one entry, ``segment`` says which.
        "SA1"  - all segments active, no phase shifters; pa_x has M entries.
        "SA2"  - all segments active with phase shifts; ``phases`` has M entries.
        "PASS" - conventional single-waveguide baseline; pa_x has one entry on
                 the spanning segment (``segment`` is 0).
    """

    architecture: str
    pa_x: np.ndarray
    segment: Optional[int] = None
    phases: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.architecture not in ARCHITECTURES:
            raise ValueError(
                f"unknown architecture {self.architecture!r}, expected one of {ARCHITECTURES}"
            )
        pa = np.atleast_1d(np.asarray(self.pa_x, dtype=float))
        if pa.ndim != 1 or pa.size < 1:
            raise ValueError("pa_x must be a non-empty 1-d array")
        pa.setflags(write=False)
        object.__setattr__(self, "pa_x", pa)
        if self.architecture in ("SS", "PASS"):
            if pa.size != 1:
                raise ValueError(f"{self.architecture} placements carry exactly one PA")
            if self.segment is None:
                raise ValueError(f"{self.architecture} placements need a segment index")
        if self.phases is not None:
            ph = np.atleast_1d(np.asarray(self.phases, dtype=float))
            if ph.shape != pa.shape:
                raise ValueError("phases must match pa_x in shape")
            ph.setflags(write=False)
            object.__setattr__(self, "phases", ph)
        if self.architecture == "SA2" and self.phases is None:
            raise ValueError("SA2 placements need phases")


@dataclass(frozen=True)
class Violation:
    """One violated placement rule.

    kind is "out_of_segment" (PA off its segment) or "spacing" (two PAs closer
    than the minimum spacing); ``segments`` lists the offending segment indices.
    """

    kind: str
    segments: tuple
    detail: str


@dataclass(frozen=True, eq=False)
class Scene:
    """A service region, a waveguide layout above it, and one user drop."""

    region: ServiceRegion
    layout: WaveguideLayout
    users: UserDrop

    @property
    def k(self) -> int:
        return self.users.k

    @property
    def user_x(self) -> np.ndarray:
        return self.users.positions[:, 0]

    @property
    def line_dist_sq(self) -> np.ndarray:
        """Squared distance of each user from the waveguide line: height^2 + u_y^2."""
        return self.layout.height**2 + self.users.positions[:, 1] ** 2


def build_layout(
    m_segments: int, seg_length: float, region: ServiceRegion, height: float
) -> WaveguideLayout:
    """Build an M-segment waveguide centered over the region.

    Segments tile contiguously; the block of total length M * seg_length is
    centered on [0, d_x], so feed_x[m] = (d_x - M * L) / 2 + m * L.  The block
    may overhang the region when M * L > d_x.
    """
    if m_segments < 1:
        raise ValueError(f"m_segments must be >= 1, got {m_segments}")
    if not seg_length > 0:
        raise ValueError(f"seg_length must be positive, got {seg_length}")
    x0 = (region.d_x - m_segments * seg_length) / 2.0
    feeds = x0 + np.arange(m_segments) * seg_length
    return WaveguideLayout(m_segments, seg_length, feeds, height)


def sample_users(region: ServiceRegion, k: int, seed: int) -> UserDrop:
    """Draw K users i.i.d. uniform over the region from a Philox stream.

    Draw order is fixed: one (K, 2) block of unit uniforms, column 0 scaled to
    [0, d_x] and column 1 to [-d_y/2, +d_y/2], so a given seed always yields
    the same drop.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    g = philox_stream(seed)
    u = g.random((k, 2))
    pos = np.empty((k, 2))
    pos[:, 0] = u[:, 0] * region.d_x
    pos[:, 1] = (u[:, 1] - 0.5) * region.d_y
    return UserDrop(pos)


def validate_placement(
    layout: WaveguideLayout, placement: Placement, delta_min: float
) -> list[Violation]:
    """Report every violated placement rule; an empty list means feasible.

    Rules: each PA must sit on its own segment, and any two PAs must be at
    least ``delta_min`` apart.
    """
    violations: list[Violation] = []
    if placement.architecture in ("SS", "PASS"):
        seg = placement.segment
        if seg is None or not (0 <= seg < layout.m_segments):
            raise ValueError(f"segment index {seg} out of range")
        lo = float(layout.feed_x[seg])
        hi = lo + layout.seg_length
        x = float(placement.pa_x[0])
        if not (lo <= x <= hi):
            violations.append(
                Violation("out_of_segment", (seg,), f"pa_x={x} outside [{lo}, {hi}]")
            )
        return violations

    if placement.pa_x.size != layout.m_segments:
        raise ValueError(
            f"expected {layout.m_segments} PA positions, got {placement.pa_x.size}"
        )
    for m in range(layout.m_segments):
        lo = float(layout.feed_x[m])
        hi = lo + layout.seg_length
        x = float(placement.pa_x[m])
        if not (lo <= x <= hi):
            violations.append(
                Violation("out_of_segment", (m,), f"pa_x={x} outside [{lo}, {hi}]")
            )
    for m in range(layout.m_segments):
        for mp in range(m + 1, layout.m_segments):
            gap = abs(float(placement.pa_x[m]) - float(placement.pa_x[mp]))
            if gap < delta_min:
                violations.append(
                    Violation(
                        "spacing",
                        (m, mp),
                        f"|pa_x[{m}] - pa_x[{mp}]| = {gap} < {delta_min}",
                    )
                )
    return violations


def grid_points(layout: WaveguideLayout, segment: int, q: int) -> np.ndarray:
    """Uniform Q-point search grid on one segment, both endpoints included."""
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    if not (0 <= segment < layout.m_segments):
        raise ValueError(f"segment index {segment} out of range")
    lo = float(layout.feed_x[segment])
    return np.linspace(lo, lo + layout.seg_length, q)


def feasible_grid(
    layout: WaveguideLayout,
    segment: int,
    q: int,
    other_pa_x: Sequence[float],
    delta_min: float,
) -> np.ndarray:
    """Grid points on ``segment`` at least ``delta_min`` from every fixed PA.

    May be empty; callers keep the incumbent position in that case.
    """
    pts = grid_points(layout, segment, q)
    others = np.atleast_1d(np.asarray(other_pa_x, dtype=float))
    if others.size == 0:
        return pts
    dist = np.abs(pts[:, None] - others[None, :]).min(axis=1)
    return pts[dist >= delta_min]
