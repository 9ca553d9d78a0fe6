"""Independent brute-force oracles over small finite fields."""

from .bench import *  # noqa: F401,F403
from .gf import GF, MatrixGroupElement, element, field, gl_elements  # noqa: F401
from .bench import __all__ as _bench_all

__all__ = [*_bench_all, "GF", "element", "field", "gl_elements"]
