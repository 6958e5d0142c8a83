from ._conespec import *  # noqa: F401,F403
from ._conespec import __doc__  # noqa: F401
