"""Shared helpers: instance builders and brute-force oracles."""

from __future__ import annotations

import random
from collections import deque
from fractions import Fraction

from strippack.packing import Packing, Placement, SquareItem

GRID = 2 ** 20


def items(*sides) -> list[SquareItem]:
    return [SquareItem(i, Fraction(s)) for i, s in enumerate(sides, 1)]


def random_items(seed: int, n: int, lo=Fraction(1, 64), hi=Fraction(1)) -> list[SquareItem]:
    rng = random.Random(seed)
    lo_n = -((-lo * GRID).__floor__())
    hi_n = (hi * GRID).__floor__()
    return [SquareItem(i, Fraction(rng.randint(lo_n, hi_n), GRID))
            for i in range(1, n + 1)]


def packing_of(coords) -> Packing:
    """Build a packing directly from (side, x, y) triples."""
    p = Packing.empty()
    for i, (side, x, y) in enumerate(coords, 1):
        p = p.extended(Placement(SquareItem(i, Fraction(side)),
                                 Fraction(x), Fraction(y)))
    return p


def grid_bfs_reachable(p: Packing, a: Fraction, step: Fraction):
    """Brute-force motion-planning oracle on a square grid.

    Configurations are left-edge positions; moves are left, right, down by
    one step; a configuration is legal iff the closed square's interior
    avoids every placed square.  The walk starts from all legal positions at
    the packing's top level.  Returns (reachable, nx, ny) where reachable is
    a set of (ix, iy) grid indices with x = ix*step, y = iy*step.
    """
    x_hi = (Fraction(1) - a) / step
    y_hi = p.height / step
    assert x_hi.denominator == 1 and y_hi.denominator == 1, "grid mismatch"
    nx, ny = int(x_hi), int(y_hi)

    # blocked[ix][iy]: the closed square's interior would hit an obstacle;
    # strict inequalities make index ranges half-open on both sides
    blocked = [bytearray(ny + 1) for _ in range(nx + 1)]
    for pl in p.placements:
        ix_lo = _strict_above((pl.left - a) / step)
        ix_hi = _strict_below(pl.right / step, nx)
        iy_lo = _strict_above((pl.bottom - a) / step)
        iy_hi = _strict_below(pl.top / step, ny)
        for ix in range(ix_lo, ix_hi + 1):
            row = blocked[ix]
            for iy in range(iy_lo, iy_hi + 1):
                row[iy] = 1

    reachable = set()
    queue = deque()
    for ix in range(nx + 1):
        if not blocked[ix][ny]:
            reachable.add((ix, ny))
            queue.append((ix, ny))
    while queue:
        ix, iy = queue.popleft()
        for jx, jy in ((ix - 1, iy), (ix + 1, iy), (ix, iy - 1)):
            if 0 <= jx <= nx and 0 <= jy <= ny and not blocked[jx][jy] \
                    and (jx, jy) not in reachable:
                reachable.add((jx, jy))
                queue.append((jx, jy))
    return reachable, nx, ny


def _strict_above(v: Fraction) -> int:
    """Smallest index strictly greater than v, at least 0."""
    return max(v.__floor__() + 1, 0)


def _strict_below(v: Fraction, cap: int) -> int:
    """Largest index strictly smaller than v, at most cap."""
    f = v.__floor__()
    idx = f - 1 if f == v else f
    return min(idx, cap)
