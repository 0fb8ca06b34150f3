"""Online square packing in a unit-width strip under Tetris and gravity rules.

Squares arrive one at a time from above and must reach their final position
by a collision-free path that never moves up, resting on the strip bottom or
another square's top with positive-length contact.  The package provides:

* an exact-rational packing model with an independent validity verifier
  (:mod:`strippack.packing`),
* the lowest-then-leftmost strategy (:mod:`strippack.bottomleft`) and the
  dyadic slot strategy (:mod:`strippack.slots`),
* exact accounting of the space each strategy wastes: hole extraction,
  splitting and per-side charges for the first (:mod:`strippack.holes`),
  shadows, widenings and charged regions for the second
  (:mod:`strippack.shadows`),
* an adaptive adversary forcing height 5/4 per round on average against any
  strategy, with a verified near-optimal counter-packing
  (:mod:`strippack.adversary`),
* instance I/O, generators, statistics and SVG rendering behind a CLI
  (:mod:`strippack.harness`, :mod:`strippack.cli`).
"""

from .numbers import Scalar, format_scalar, scalar

__all__ = ["Scalar", "scalar", "format_scalar"]
__version__ = "0.1.0"
