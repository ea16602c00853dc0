"""Filtered, ordered K-theory of graph C*-algebras.

Thin Python surface over the C++ core: exact integer linear algebra,
gauge-invariant ideal lattices, interval K-theory diagrams, and stable
isomorphism decisions for the supported graph classes.
"""

from fkt._core import *  # noqa: F401,F403
from fkt._core import __version__  # noqa: F401
