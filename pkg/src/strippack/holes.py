"""Hole analysis for BottomLeft packings.

After closing the packing with a side-1 square, every free component below
the top is a bounded hole.  Each hole's boundary is traversed
counterclockwise and grouped into per-square runs; the hole is classified by
how its last boundary square attaches to the previous one; left-leaning
diagonals are removed by splitting holes and covering each cut with a
virtual copy of the square above it; the resulting diagonal-free holes are
bounded by the squared lengths of at most four boundary segments, and those
terms are charged to square sides.  A square never accumulates more than
5/2 in total charge.

Boundary bookkeeping runs on integer grid vertices; exact coordinates enter
only through segment lengths and the diagonal-ray intersections.

Structural facts used here are theorems for BottomLeft packings, so they
are asserted and raise AnalysisError loudly when violated: that means an
implementation bug (or a non-BottomLeft input).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (ObstacleGrid, Rect, RectilinearRegion, merge_spans,
                       trace_boundary)
from .numbers import HALF, ONE, ZERO, Scalar
from .packing import Packing, Placement, SquareItem

SIDE_LEFT = "left"
SIDE_BOTTOM = "bottom"
SIDE_RIGHT = "right"
SIDE_TOP = "top"

TYPE_I = "I"
TYPE_II = "II"

KIND_INTERIOR = "interior"
KIND_LEFT_WALL = "left-wall"
KIND_RIGHT_WALL = "right-wall"


class AnalysisError(AssertionError):
    """A proven structural property failed: implementation bug or bad input."""

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"{name}: {detail}" if detail else name)


@dataclass(frozen=True)
class VirtualLid:
    """Imaginary copy of a square covering the unsupported cut MN."""

    owner: Placement
    rect: Rect
    mn_left: Scalar
    mn_right: Scalar
    level: Scalar

    @property
    def span(self) -> Scalar:
        return self.mn_right - self.mn_left


@dataclass(frozen=True)
class Diagonal:
    """A slope +-1 ray anchoring the hole area bounds.

    The left diagonal (slope -1) starts where the boundary leaves the second
    square; crossings of it back into the hole trigger splits.  The right
    diagonal (slope +1) starts at the last transition and provably never
    cuts the hole.
    """

    origin: tuple
    slope: int

    def __post_init__(self):
        if self.slope not in (-1, 1):
            raise AnalysisError("diagonal", f"slope {self.slope}")


def left_diagonal(hole: "Hole") -> Diagonal:
    return Diagonal(_diagonal_origin(hole), -1)


def _sq(idx: int):
    return ("sq", idx)


OWNER_GROUND = ("ground",)
OWNER_LWALL = ("lwall",)
OWNER_RWALL = ("rwall",)
OWNER_SEAM = ("seam",)


def close_packing(p: Packing) -> Packing:
    """Append the side-1 closing square; it can only rest at the packing
    height with its left side on the wall."""
    closing = SquareItem(len(p.placements) + 1, ONE)
    return p.extended(Placement(closing, ZERO, p.height))


class _Context:
    """Shared grid decomposition for all holes of one closed packing."""

    def __init__(self, p: Packing):
        self.packing = p
        self.placements = p.placements
        self.ceiling = p.height
        self.grid = ObstacleGrid(p.obstacles(), self.ceiling)
        self.copies: dict[int, VirtualLid] = {}
        g = self.grid
        self.cell_area = [[(g.xs[i + 1] - g.xs[i]) * (g.ys[j + 1] - g.ys[j])
                           for j in range(g.ny)] for i in range(g.nx)]
        # per-placement grid index rectangles (il, ir, jb, jt)
        self.idx_rect = [(g.xi[pl.left], g.xi[pl.right],
                          g.yi[pl.bottom], g.yi[pl.top])
                         for pl in self.placements]

    def fpt(self, v: tuple[int, int]) -> tuple[Scalar, Scalar]:
        return (self.grid.xs[v[0]], self.grid.ys[v[1]])

    def supported_spans(self, level: Scalar):
        """Closed x-spans with solid material immediately below a horizontal
        line of this height: squares spanning the line from below.  A point
        of the line outside these spans has free space directly under it."""
        spans = [(pl.left, pl.right) for pl in self.placements
                 if pl.bottom < level <= pl.top]
        return merge_spans(spans)


@dataclass
class _Run:
    owner: tuple
    points: list                       # grid vertices (i, j)
    side_lengths: dict = field(default_factory=dict)

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    def rect(self, ctx: _Context) -> Optional[Rect]:
        if self.owner[0] == "sq":
            return ctx.placements[self.owner[1]].rect()
        if self.owner[0] == "copy":
            return self.owner[1].rect
        return None


class Hole:
    """One hole: a set of free grid cells plus its traversed boundary."""

    def __init__(self, ctx: _Context, cells: frozenset,
                 overrides: Optional[dict] = None,
                 lid_virtual: Optional[VirtualLid] = None):
        self.ctx = ctx
        self.cells = cells
        self.overrides = dict(overrides or {})
        self.lid_virtual = lid_virtual
        self._build()

    # -- construction -------------------------------------------------------

    def _resolve_owner(self, p1, p2):
        """Owner of a directed boundary edge (interior on the left).

        Carve overrides win over the raw grid: a virtual lid owns the whole
        cut segment even where a real square happens to roof part of it.
        """
        grid = self.ctx.grid
        key = (p1, p2) if p1 <= p2 else (p2, p1)
        own = self.overrides.get(key)
        if own is not None:
            return own
        (i1, j1), (i2, j2) = p1, p2
        if j1 == j2:    # horizontal; outside below (eastward) or above
            i = min(i1, i2)
            if i2 > i1:
                if j1 == 0:
                    return OWNER_GROUND
                cell = (i, j1 - 1)
            else:
                if j1 == grid.ny:
                    raise AnalysisError("unbounded", "hole touches the ceiling")
                cell = (i, j1)
        else:           # vertical; outside right (northward) or left
            j = min(j1, j2)
            if j2 > j1:
                if i1 == grid.nx:
                    return OWNER_RWALL
                cell = (i1, j)
            else:
                if i1 == 0:
                    return OWNER_LWALL
                cell = (i1 - 1, j)
        owner = grid.owner[cell[0]][cell[1]]
        if owner is not None:
            return _sq(owner)
        raise AnalysisError("boundary", f"free neighbor without seam at {key}")

    def _build(self):
        ctx = self.ctx
        cycle = trace_boundary(self.cells)
        edges = [(p1, p2, self._resolve_owner(p1, p2)) for p1, p2 in cycle]
        runs: list[_Run] = []
        for p1, p2, owner in edges:
            if runs and runs[-1].owner == owner:
                runs[-1].points.append(p2)
            else:
                runs.append(_Run(owner, [p1, p2]))
        if len(runs) > 1 and runs[0].owner == runs[-1].owner:
            runs[-1].points.extend(runs[0].points[1:])
            runs[0] = runs.pop()
        # Lemma 1: each square contributes one connected boundary curve
        seen = set()
        for r in runs:
            if r.owner[0] in ("sq", "copy", "lwall", "rwall"):
                if r.owner in seen:
                    raise AnalysisError(
                        "lemma1", f"owner {r.owner} contributes twice")
                seen.add(r.owner)
        self.touches_left = OWNER_LWALL in seen
        self.touches_right = OWNER_RWALL in seen
        if self.touches_left and self.touches_right:
            raise AnalysisError("two-walls", "hole touches both strip walls")
        lid_idx = self._lid_index(runs)
        self.runs = runs[lid_idx:] + runs[:lid_idx]
        for r in self.runs:
            self._measure_sides(r)
        area = ZERO
        cell_area = ctx.cell_area
        for (i, j) in self.cells:
            area += cell_area[i][j]
        self.area = area
        lid = self.runs[0]
        rect = lid.rect(ctx)
        if rect is None:
            raise AnalysisError("lid", f"lid owner {lid.owner} is not a square")
        jb = min(j for _, j in lid.points)
        if ctx.grid.ys[jb] != rect.bottom:
            raise AnalysisError("lid", "lid segment not on the lid's bottom")
        on_bottom = [i for i, j in lid.points if j == jb]
        self.P = (ctx.grid.xs[min(on_bottom)], ctx.grid.ys[jb])
        self.Q = (ctx.grid.xs[max(on_bottom)], ctx.grid.ys[jb])
        if self.lid_virtual is not None and lid.owner[0] != "copy":
            raise AnalysisError("lid", "virtual-lid hole traversed a real lid")

    def _lid_index(self, runs) -> int:
        if self.touches_left:
            # lid run precedes the (southward) wall run counterclockwise
            w = next(i for i, r in enumerate(runs) if r.owner == OWNER_LWALL)
            return (w - 1) % len(runs)
        if self.touches_right:
            # lid run follows the (northward) wall run
            w = next(i for i, r in enumerate(runs) if r.owner == OWNER_RWALL)
            return (w + 1) % len(runs)
        best = None
        best_key = None
        for i, r in enumerate(runs):
            for p1, p2 in zip(r.points, r.points[1:]):
                if p1[1] == p2[1] and p2[0] < p1[0]:   # westward: interior below
                    key = (-p1[1], p2[0])
                    if best_key is None or key < best_key:
                        best_key = key
                        best = i
        if best is None:
            raise AnalysisError("lid", "no top boundary edge found")
        return best

    def _measure_sides(self, run: _Run):
        ctx = self.ctx
        if run.owner[0] == "sq":
            il, ir, jb, jt = ctx.idx_rect[run.owner[1]]
        elif run.owner[0] == "copy":
            il = ir = jb = jt = None
        else:
            return
        xs, ys = ctx.grid.xs, ctx.grid.ys
        totals = {SIDE_LEFT: ZERO, SIDE_BOTTOM: ZERO,
                  SIDE_RIGHT: ZERO, SIDE_TOP: ZERO}
        for p1, p2 in zip(run.points, run.points[1:]):
            if p1[0] == p2[0]:
                length = abs(ys[p2[1]] - ys[p1[1]])
                if p1[0] == il:
                    side = SIDE_LEFT
                elif p1[0] == ir:
                    side = SIDE_RIGHT
                else:
                    raise AnalysisError("boundary", "edge off its owner's sides")
            else:
                length = abs(xs[p2[0]] - xs[p1[0]])
                if run.owner[0] == "copy":
                    side = SIDE_BOTTOM      # copies own only their cut line
                elif p1[1] == jb:
                    side = SIDE_BOTTOM
                elif p1[1] == jt:
                    side = SIDE_TOP
                else:
                    raise AnalysisError("boundary", "edge off its owner's sides")
            totals[side] += length
        run.side_lengths = totals

    # -- structure accessors ------------------------------------------------

    @property
    def kind(self) -> str:
        if self.touches_left:
            return KIND_LEFT_WALL
        if self.touches_right:
            return KIND_RIGHT_WALL
        return KIND_INTERIOR

    def square_runs(self) -> list[_Run]:
        return [r for r in self.runs if r.owner[0] in ("sq", "copy")]

    def contributing_squares(self) -> list[Placement]:
        return [self.ctx.placements[r.owner[1]] for r in self.runs
                if r.owner[0] == "sq"]

    def transition_points(self) -> list:
        return [self.ctx.fpt(r.start) for r in self.runs]

    def region(self) -> RectilinearRegion:
        return RectilinearRegion.from_cells(
            set(self.cells), self.ctx.grid.xs, self.ctx.grid.ys)

    def _run_after_lid(self) -> _Run:
        if len(self.runs) < 2 or self.runs[1].rect(self.ctx) is None:
            raise AnalysisError("structure", "no square run after the lid")
        return self.runs[1]

    def _run_before_lid(self) -> _Run:
        if len(self.runs) < 2:
            raise AnalysisError("structure", "hole has a single run")
        last = self.runs[-1]
        if last.owner[0] in ("lwall", "rwall"):
            last = self.runs[-2]
        if last.rect(self.ctx) is None:
            raise AnalysisError("structure", "no square run before the lid")
        return last

    def _run_before(self, run: _Run) -> _Run:
        pos = self.runs.index(run)
        return self.runs[(pos - 1) % len(self.runs)]

    def _run_after(self, run: _Run) -> _Run:
        pos = self.runs.index(run)
        return self.runs[(pos + 1) % len(self.runs)]

    def classify(self) -> str:
        """Type I if the last boundary square is a right neighbor of the
        previous one, Type II if it rests on the previous one's top.  A
        pseudo-floor (ground or carve seam) before the last square acts as a
        top that never gets charged, which matches the Type I shape."""
        if self.touches_left or self.touches_right:
            raise AnalysisError("classify", "wall holes are not typed")
        last = self._run_before_lid()
        prev = self._run_before(last)
        prev_rect = prev.rect(self.ctx)
        if prev_rect is None:
            if prev.owner in (OWNER_GROUND, OWNER_SEAM):
                return TYPE_I
            raise AnalysisError("lemma3", f"odd run {prev.owner} before the last")
        rect = last.rect(self.ctx)
        if prev_rect.right == rect.left \
                and min(prev_rect.top, rect.top) > max(prev_rect.bottom, rect.bottom):
            return TYPE_I
        if prev_rect.top == rect.bottom \
                and min(prev_rect.right, rect.right) > max(prev_rect.left, rect.left):
            return TYPE_II
        raise AnalysisError("lemma3", "last square neither right nor top neighbor")


# ---------------------------------------------------------------------------
# diagonals and hole splitting
# ---------------------------------------------------------------------------

def _diagonal_origin(hole: Hole):
    """Start of the left diagonal: the point where the boundary leaves the
    second square, or that square's lower-right corner."""
    a2 = hole._run_after_lid()
    rect = a2.rect(hole.ctx)
    p23 = hole.ctx.fpt(a2.end)
    if p23[0] == rect.right:
        return p23
    return (rect.right, rect.bottom)


def _ray_hit(hole: Hole, origin):
    """First counterclockwise boundary point where the slope -1 ray from
    ``origin`` passes INTO the hole's interior (out of solid material).

    The ray's own start qualifies when the hole lies immediately southeast
    of it (then the split degenerates to a cut through the start level).
    Points where the ray leaves the hole, grazes a corner, or dives into a
    seam or floor are not crossings in this sense.
    """
    ctx = hole.ctx
    xs, ys = ctx.grid.xs, ctx.grid.ys
    c = origin[0] + origin[1]
    for run in hole.runs[1:] + hole.runs[:1]:
        pts = run.points
        for a in range(len(pts) - 1):
            (i1, j1), (i2, j2) = pts[a], pts[a + 1]
            if i1 == i2:
                x = xs[i1]
                y = c - x
                ylo, yhi = (ys[j1], ys[j2]) if j1 < j2 else (ys[j2], ys[j1])
                if not (ylo <= y <= yhi):
                    continue
                pt = (x, y)
            else:
                y = ys[j1]
                x = c - y
                xlo, xhi = (xs[i1], xs[i2]) if i1 < i2 else (xs[i2], xs[i1])
                if not (xlo <= x <= xhi):
                    continue
                pt = (x, y)
            if pt[0] < origin[0]:
                continue
            if _enters_hole_southeast(hole, pt):
                return pt
    return None


def _enters_hole_southeast(hole: Hole, pt) -> bool:
    """Is the cell infinitesimally southeast of pt a free cell of the hole
    while the northwest side is solid?"""
    grid = hole.ctx.grid
    x, y = pt
    ie = bisect_right(grid.xs, x) - 1          # column just right of x
    js = bisect_left(grid.ys, y) - 1           # row just below y
    if not (0 <= ie < grid.nx and 0 <= js < grid.ny):
        return False
    if (ie, js) not in hole.cells:
        return False
    iw = ie if grid.xs[ie] < x else ie - 1     # column just left of x
    jn = js if grid.ys[js + 1] > y else js + 1  # row just above y
    if not (0 <= iw < grid.nx and 0 <= jn < grid.ny):
        return False
    return grid.owner[iw][jn] is not None


def _northwest_square(hole: Hole, pt) -> int:
    grid = hole.ctx.grid
    x, y = pt
    ie = bisect_right(grid.xs, x) - 1
    js = bisect_left(grid.ys, y) - 1
    iw = ie if grid.xs[ie] < x else ie - 1
    jn = js if grid.ys[js + 1] > y else js + 1
    owner = grid.owner[iw][jn]
    assert owner is not None
    return owner


@dataclass(frozen=True)
class SplitEvent:
    case: str                          # "A" (right side) or "B" (bottom)
    f_point: tuple
    up: Placement
    low: Placement
    lid: VirtualLid


def _find_split(hole: Hole) -> Optional[SplitEvent]:
    origin = _diagonal_origin(hole)
    pt = _ray_hit(hole, origin)
    if pt is None:
        return None
    ctx = hole.ctx
    sq_idx = _northwest_square(hole, pt)
    sq = ctx.placements[sq_idx]
    try:
        sq_run = next(r for r in hole.runs if r.owner == ("sq", sq_idx))
    except StopIteration:
        raise AnalysisError("split", f"crossing square {sq_idx} has no run")
    if pt[1] == sq.bottom:
        case = "B"
        up = sq
        low_run = hole._run_after(sq_run)
        if low_run.owner[0] != "sq":
            raise AnalysisError("lemma5", "no square below the overhang")
        low = ctx.placements[low_run.owner[1]]
    elif pt[0] == sq.right:
        case = "A"
        low = sq
        up_run = hole._run_before(sq_run)
        if up_run.owner[0] != "sq":
            raise AnalysisError("lemma5", "no square above the split point")
        up = ctx.placements[up_run.owner[1]]
    else:
        raise AnalysisError("split", f"crossing {pt} on neither R nor B of {sq}")
    # Lemma: the upper square rests on the lower one
    if not (up.bottom == low.top and up.left < low.right and low.left < up.right):
        raise AnalysisError(
            "lemma5", f"split pair not stacked: up={up} low={low}")
    level = low.top
    x_m = low.right
    x_n = None
    for lo, hi in ctx.supported_spans(level):
        if lo > x_m:
            x_n = lo
            break
        if hi > x_m:
            raise AnalysisError("lemma6", "cut start is supported")
    if x_n is None:
        if not hole.touches_right:
            raise AnalysisError("cor1", "no support right of the cut")
        x_n = ONE
    if not (x_n - x_m) < up.side:
        raise AnalysisError("lemma7", f"cut {x_n - x_m} not shorter than {up.side}")
    lid = VirtualLid(owner=up,
                     rect=Rect.of(x_n - up.side, level, x_n, level + up.side),
                     mn_left=x_m, mn_right=x_n, level=level)
    return SplitEvent(case, pt, up, low, lid)


def _carve(hole: Hole, ev: SplitEvent) -> tuple[Hole, Optional[Hole]]:
    """Remove the sub-hole below the cut; returns (below, remainder)."""
    ctx = hole.ctx
    grid = ctx.grid
    level = ev.lid.level
    j_top = grid.yi[level]
    i_lo = grid.xi[ev.lid.mn_left]
    i_hi = grid.xi[ev.lid.mn_right]
    throat = [(i, j_top - 1) for i in range(i_lo, i_hi)
              if (i, j_top - 1) in hole.cells]
    if not throat:
        raise AnalysisError("split", "empty throat under the cut")
    below = set(throat)
    stack = list(throat)
    while stack:
        i, j = stack.pop()
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            cell = (i + di, j + dj)
            if cell in below or cell not in hole.cells:
                continue
            if cell[1] + 1 > j_top:
                continue
            below.add(cell)
            stack.append(cell)
    rest = hole.cells - below
    over_star = dict(hole.overrides)
    over_rest = dict(hole.overrides)
    for i in range(i_lo, i_hi):
        key = ((i, j_top), (i + 1, j_top))
        over_star[key] = ("copy", ev.lid)
        over_rest[key] = OWNER_SEAM
    star = Hole(ctx, frozenset(below), over_star, lid_virtual=ev.lid)
    remainder = Hole(ctx, frozenset(rest), over_rest,
                     lid_virtual=hole.lid_virtual) if rest else None
    # uniqueness: at most one virtual copy per square
    key = ev.up.item.index
    if key in ctx.copies:
        raise AnalysisError("copy-uniqueness",
                            f"square {key} used as a virtual lid twice")
    ctx.copies[key] = ev.lid
    return star, remainder


def split_hole(hole: Hole) -> list[Hole]:
    """Fully process one hole: repeatedly carve away the part below each
    diagonal crossing (each carved part re-enters processing as its own
    hole with a virtual lid) until no crossing remains."""
    if hole.touches_left:
        return [hole]
    out = []
    current = hole
    for _ in range(len(hole.cells) + 1):
        ev = _find_split(current)
        if ev is None:
            out.append(current)
            return out
        star, remainder = _carve(current, ev)
        out.extend(split_hole(star))
        if remainder is None:
            return out
        current = remainder
    raise AnalysisError("split", "splitting did not terminate")


# ---------------------------------------------------------------------------
# area bounds, wall charges, ledger
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChargeTerm:
    square_index: int          # 1-based arrival index (n+1 = closing square)
    side: str
    virtual: bool              # charged to the square's virtual copy
    coeff: Fraction            # ledger coefficient (virtual lid bottom: 1/2)
    coeff_full: Fraction       # per-hole bound coefficient (lid bottom: 1)
    segment: Scalar

    @property
    def bound_part(self) -> Scalar:
        return self.coeff_full * self.segment * self.segment


def _charge_items(hole: Hole) -> list[ChargeTerm]:
    """Charged boundary terms of one diagonal-free hole, by hole kind."""
    ctx = hole.ctx
    lid = hole.runs[0]
    lid_virtual = lid.owner[0] == "copy"
    if lid_virtual:
        lid_square = lid.owner[1].owner
    else:
        lid_square = ctx.placements[lid.owner[1]]
    beta1 = lid.side_lengths[SIDE_BOTTOM]
    items = [ChargeTerm(lid_square.item.index, SIDE_BOTTOM, lid_virtual,
                        HALF if lid_virtual else Fraction(1), Fraction(1),
                        beta1)]

    def term(run: _Run, side: str, coeff: Fraction):
        seg = run.side_lengths[side]
        if run.owner[0] == "copy":
            raise AnalysisError("charge", "side charge landed on a copy")
        sq = ctx.placements[run.owner[1]]
        items.append(ChargeTerm(sq.item.index, side, False, coeff, coeff, seg))

    if hole.touches_left:
        term(hole._run_before_lid(), SIDE_LEFT, HALF)
        return items
    term(hole._run_after_lid(), SIDE_RIGHT, HALF)
    if hole.touches_right:
        return items
    if hole.classify() == TYPE_II:
        last = hole._run_before_lid()
        prev = hole._run_before(last)
        if prev.owner[0] != "sq":
            raise AnalysisError("structure", "no square carries the overhang")
        term(last, SIDE_BOTTOM, Fraction(1))
        term(prev, SIDE_LEFT, HALF)
    return items


def hole_area_bound(hole: Hole) -> Scalar:
    """Bound the hole area by its charged boundary segments and assert it."""
    bound = sum((t.bound_part for t in _charge_items(hole)), ZERO)
    if hole.area > bound:
        raise AnalysisError(
            "area-bound", f"hole area {hole.area} exceeds bound {bound}")
    _assert_right_diagonal(hole)
    return bound


def wall_hole_charges(hole: Hole) -> list[ChargeTerm]:
    if not (hole.touches_left or hole.touches_right):
        raise AnalysisError("wall", "not a wall hole")
    return _charge_items(hole)


def _assert_right_diagonal(hole: Hole):
    """The slope +1 diagonal from the last transition never cuts the hole."""
    if hole.touches_right:
        return                      # cut off by the wall; no right diagonal
    last = hole._run_before_lid()
    if hole.touches_left or hole.classify() == TYPE_I:
        q_prime = hole.ctx.fpt(last.start)
    else:
        q_prime = hole.ctx.fpt(hole._run_before(last).start)
    d = q_prime[0] - q_prime[1]
    grid = hole.ctx.grid
    for (i, j) in hole.cells:
        l, r = grid.xs[i], grid.xs[i + 1]
        b, t = grid.ys[j], grid.ys[j + 1]
        lo = max(l, d + b)
        hi = min(r, d + t, q_prime[0])
        if lo < hi:
            raise AnalysisError("lemma4", "right diagonal cuts the hole")


class ChargeLedger:
    """Per-square, per-side maximum charge coefficients plus the raw terms."""

    def __init__(self):
        self.terms: list[ChargeTerm] = []
        self.max_coeff: dict[tuple[int, str, bool], Fraction] = {}

    def add(self, terms: list[ChargeTerm]):
        for t in terms:
            self.terms.append(t)
            key = (t.square_index, t.side, t.virtual)
            if self.max_coeff.get(key, ZERO) < t.coeff:
                self.max_coeff[key] = t.coeff

    def total_charge(self, square_index: int) -> Fraction:
        return sum((c for (idx, _, _), c in self.max_coeff.items()
                    if idx == square_index), ZERO)

    def side_charge(self, square_index: int, side: str,
                    virtual: bool = False) -> Fraction:
        return self.max_coeff.get((square_index, side, virtual), ZERO)

    def bound_terms_sum(self) -> Scalar:
        return sum((t.bound_part for t in self.terms), ZERO)


def compute_charges(holes: Sequence[Hole]) -> ChargeLedger:
    ledger = ChargeLedger()
    for h in holes:
        ledger.add(_charge_items(h))
    for idx in {t.square_index for t in ledger.terms}:
        total = ledger.total_charge(idx)
        if total > Fraction(5, 2):
            raise AnalysisError("charge", f"square {idx} charged {total} > 5/2")
    return ledger


# ---------------------------------------------------------------------------
# top-level driver
# ---------------------------------------------------------------------------

def extract_holes(p_closed: Packing) -> list[Hole]:
    ctx = _Context(p_closed)
    holes = []
    for comp in ctx.grid.free_components():
        if comp["bounded"]:
            holes.append(Hole(ctx, frozenset(comp["cells"])))
    return holes


def classify_hole(hole: Hole) -> str:
    return hole.classify()


@dataclass
class Check:
    name: str
    ok: bool
    lhs: str
    cmp: str
    rhs: str

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"CHECK {self.name} {status} {self.lhs} {self.cmp} {self.rhs}"


@dataclass
class BottomLeftAnalysis:
    packing: Packing
    closed: Packing
    raw_holes: list
    holes: list
    ledger: ChargeLedger
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def hole_sum(self) -> Scalar:
        return sum((h.area for h in self.raw_holes), ZERO)

    def report(self) -> str:
        lines = []
        for i, h in enumerate(self.holes, 1):
            kind = h.kind
            typ = "-" if kind != KIND_INTERIOR else h.classify()
            lid = "virtual" if h.lid_virtual is not None else "real"
            bound = sum((t.bound_part for t in _charge_items(h)), ZERO)
            lines.append(f"hole {i}: kind={kind} type={typ} lid={lid} "
                         f"area={h.area} bound={bound}")
        for idx in sorted({t.square_index for t in self.ledger.terms}):
            lines.append(f"square {idx}: charge={self.ledger.total_charge(idx)}")
        lines.extend(c.line() for c in self.checks)
        return "\n".join(lines)


def run_bottomleft_analysis(p: Packing) -> BottomLeftAnalysis:
    """Close the packing, extract and split all holes, build the ledger, and
    evaluate every exact accounting identity and bound."""
    closed = close_packing(p)
    raw = extract_holes(closed)
    finals = []
    for h in raw:
        finals.extend(split_hole(h))
    for h in finals:
        hole_area_bound(h)
    ledger = compute_charges(finals)

    checks = []
    area_sum = sum((pl.item.side ** 2 for pl in p.placements), ZERO)
    hole_sum = sum((h.area for h in raw), ZERO)
    height = p.height
    checks.append(Check("height-identity", height == area_sum + hole_sum,
                        str(height), "==", f"{area_sum} + {hole_sum}"))
    final_sum = sum((h.area for h in finals), ZERO)
    checks.append(Check("split-conservation", final_sum == hole_sum,
                        str(final_sum), "==", str(hole_sum)))
    closed_area = area_sum + ONE
    checks.append(Check("aggregate-bound",
                        hole_sum <= Fraction(5, 2) * closed_area,
                        str(hole_sum), "<=", f"5/2 * {closed_area}"))
    terms_sum = ledger.bound_terms_sum()
    checks.append(Check("terms-soundness", hole_sum <= terms_sum,
                        str(hole_sum), "<=", str(terms_sum)))
    ledger_sum = sum((ledger.total_charge(pl.item.index) * pl.item.side ** 2
                      for pl in closed.placements), ZERO)
    checks.append(Check("ledger-soundness", hole_sum <= ledger_sum,
                        str(hole_sum), "<=", str(ledger_sum)))
    max_charge = max((ledger.total_charge(pl.item.index)
                      for pl in closed.placements), default=ZERO)
    checks.append(Check("max-charge", max_charge <= Fraction(5, 2),
                        str(max_charge), "<=", "5/2"))
    checks.append(Check("theorem1",
                        height <= Fraction(7, 2) * area_sum + Fraction(5, 2),
                        str(height), "<=", f"7/2 * {area_sum} + 5/2"))
    return BottomLeftAnalysis(p, closed, raw, finals, ledger, checks)
