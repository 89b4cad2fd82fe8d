"""Exact calculus for quotient surface singularities and their completions."""

from .dualgraph import *  # noqa: F401,F403
from .equivariant import *  # noqa: F401,F403
from .exactmath import *  # noqa: F401,F403
from .pencil import *  # noqa: F401,F403
from .polynomial import ParseError, SparsePoly, parse_poly, resultant  # noqa: F401
from .quotient import *  # noqa: F401,F403

__version__ = "0.1.0"
