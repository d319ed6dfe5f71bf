"""Zonotopic backward reachable sets, Minkowski differences and controllers."""

from ._zonoreach import *  # noqa: F401,F403
from ._zonoreach import __doc__  # noqa: F401
