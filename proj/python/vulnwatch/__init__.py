"""Unsupervised cyber-relevance filtering and data mining for tweet archives."""

try:
    from ._core import *  # noqa: F401,F403  (wheel layout)
    from ._core import __version__  # noqa: F401
except ImportError:  # build tree: _core sits next to the package on sys.path
    from _core import *  # type: ignore # noqa: F401,F403
    from _core import __version__  # type: ignore # noqa: F401
