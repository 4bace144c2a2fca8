"""
meanfield - maxima of mean-field interacting diffusions

Monte Carlo library and CLI that simulates mean-field particle systems with
Euler-Maruyama, normalizes their maxima with Gumbel constants and measures how
close the probability integral transform of those maxima is to uniform.
"""

from .__version__ import __author__, __version__

__all__ = ["__version__", "__author__"]
