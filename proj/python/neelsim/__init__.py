"""Pseudospectral Neel-wall dynamics bindings."""

try:
    from ._neelsim import *  # noqa: F401,F403 (wheel layout)
except ImportError:  # in-tree build: the extension sits on sys.path directly
    from _neelsim import *  # noqa: F401,F403

__version__ = "0.1.0"
