"""Stress-relaxation flow laboratory: python face of the native core."""

try:
    from relaxflow._core import *  # noqa: F401,F403
except ImportError:
    # Development layout: the extension sits on PYTHONPATH next to the build
    # tree instead of inside the installed package.
    from _core import *  # noqa: F401,F403

__version__ = "0.1.0"
