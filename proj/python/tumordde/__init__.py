"""Delayed tumour-immune interaction model: Hopf analysis, center-manifold
normal forms and delay-system integration (C++ core)."""

try:
    from ._tumordde import *  # wheel layout: extension inside the package
    from ._tumordde import __version__
except ImportError:  # in-tree build: extension on PYTHONPATH
    from _tumordde import *
    from _tumordde import __version__
