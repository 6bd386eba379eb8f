"""Laboratory for NK fitness landscapes with adjacent neighborhoods on a ring."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
