"""Python interface to the two-qudit gravitational entanglement toolkit.

Everything lives in the compiled extension; this package just re-exports it.
"""

try:
    from ._qgem import *  # noqa: F401,F403
    from ._qgem import __version__  # noqa: F401
except ImportError:  # extension built outside the package (plain CMake build)
    from _qgem import *  # noqa: F401,F403
    from _qgem import __version__  # noqa: F401
