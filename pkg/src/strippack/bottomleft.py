"""The BottomLeft strategy: lowest, then leftmost, reachable supported spot.

Candidate resting levels are 0 and the tops of placed squares; within a
level the leftmost feasible x is one of finitely many event coordinates
(reachable-corridor left endpoints and support-alignment positions), so the
search is exact and terminates.
"""

from __future__ import annotations

from typing import Sequence

from .geometry import merge_open_spans, spans_contain
from .numbers import ONE, ZERO
from .packing import (Packing, PackingError, Placement, SquareItem,
                      reachable_positions)


def bl_place_next(p: Packing, item: SquareItem) -> Placement:
    """Lowest reachable supported position, ties broken leftmost."""
    a = item.side
    sweep = reachable_positions(p, a)
    levels = sorted({ZERO} | {pl.top for pl in p.placements})
    for y in levels:
        reach = sweep.at_level(y)
        if not reach:
            continue
        if y == ZERO:
            return Placement(item, reach[0][0], y)
        supports = merge_open_spans(
            [(pl.left - a, pl.right) for pl in p.placements if pl.top == y])
        if not supports:
            continue
        candidates = sorted({lo for lo, _ in reach}
                            | {lo for lo, _ in supports if lo >= ZERO})
        for x in candidates:
            if x > ONE - a:
                break
            if spans_contain(reach, x) and _in_open(supports, x):
                return Placement(item, x, y)
        # a reachable supported position with no attained minimum would
        # contradict the level being minimal; re-check and fail loudly
        if any(rlo < shi and rhi > slo
               for rlo, rhi in reach for slo, shi in supports):
            raise PackingError("internal: minimum x not attained at minimal level")
    raise PackingError("internal: no feasible position found")


def _in_open(opens, x) -> bool:
    for lo, hi in opens:
        if lo < x < hi:
            return True
        if lo >= x:
            return False
    return False


def bl_run(seq: Sequence[SquareItem]) -> Packing:
    p = Packing.empty()
    for item in seq:
        p = p.extended(bl_place_next(p, item))
    return p


class BottomLeftState:
    """Stateful wrapper used by the adversary harness."""

    def __init__(self):
        self.packing = Packing.empty()

    def place(self, item: SquareItem) -> Placement:
        pl = bl_place_next(self.packing, item)
        self.packing = self.packing.extended(pl)
        return pl
