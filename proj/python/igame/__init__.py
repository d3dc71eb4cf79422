"""Interactive-game detection and analysis toolkit (C++ core bindings)."""

from ._igame import *  # noqa: F401,F403
from ._igame import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
