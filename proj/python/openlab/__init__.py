"""Open quantum systems on a line: closed-form stationary states, grid
evolution of the master equation, Wigner transforms and invariant checks."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401


def p2(f=0.0, lam=0.0):
    """Reference parameter set: hbar = m = 1, nu = 0.5, d0 = d2 = 0.5."""
    return EnvParams(nu=0.5, d0=0.5, d2=0.5, f=f, lam=lam)  # noqa: F405
