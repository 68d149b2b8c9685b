"""Python access to the hcarleson C++ core."""

try:
    from ._hcarleson import *  # noqa: F401,F403
    from ._hcarleson import __version__  # noqa: F401
except ImportError:  # in-tree build: the extension sits next to the tests
    from _hcarleson import *  # type: ignore  # noqa: F401,F403
    from _hcarleson import __version__  # type: ignore  # noqa: F401
