"""Quadrature oracles shared by the test modules.

tanh-sinh (double exponential) nodes tolerate the endpoint-singular slopes
of the power-law reconstructions; 1e-13 accuracy uniformly over the
exponent range allowed by the limiter cutoff.
"""

import numpy as np

_H = 0.04
_T = np.arange(-3.4, 3.4 + 0.5 * _H, _H)
_U = np.tanh(0.5 * np.pi * np.sinh(_T))
_W = 0.5 * np.pi * np.cosh(_T) / np.cosh(0.5 * np.pi * np.sinh(_T)) ** 2 * _H

# nodes/weights for the mean over s in [-1/2, 1/2]
TS_NODES_S = 0.5 * _U
TS_WEIGHTS = 0.5 * _W


def cell_mean_ts(recon) -> float:
    """Mean of a cell reconstruction over s in [-1/2, 1/2]."""
    return float(np.sum(TS_WEIGHTS * recon(TS_NODES_S)))


GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def cell_mean_gl(recon) -> float:
    """32-node Gauss-Legendre mean; exact for parabola cells."""
    return float(np.sum(GL_WEIGHTS * recon(0.5 * GL_NODES)) * 0.5)
