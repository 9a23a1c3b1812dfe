"""Exact solutions of the T-system (octahedron recurrence) with principal coefficients.

Five independent routes to the same Laurent polynomial:

* :func:`solve_oracle` -- the recurrence itself, with exact division;
* :func:`solve_matching` -- perfect matchings with face and pairing weights;
* :func:`solve_edge` -- matchings of the closure with edge weights;
* :func:`solve_path` -- non-intersecting path families;
* :func:`solve_network` -- a principal minor of the network matrix.
"""

from .laurent import LaurentPoly, Ratio, c, parse, render, t
from .matching import solve_edge, solve_matching
from .network import solve_network
from .oracle import Instance, solve_oracle
from .path import solve_path
from .specialize import lambda_scheme, pentagram_scheme, separation_eval, speyer_scheme
from .surface import Point3, SteppedSurface

__version__ = "0.1.0"

__all__ = [
    "Instance",
    "LaurentPoly",
    "Point3",
    "Ratio",
    "SteppedSurface",
    "c",
    "lambda_scheme",
    "parse",
    "pentagram_scheme",
    "render",
    "separation_eval",
    "solve_edge",
    "solve_matching",
    "solve_network",
    "solve_oracle",
    "solve_path",
    "speyer_scheme",
    "t",
]
