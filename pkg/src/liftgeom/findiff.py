"""Central finite differences with one Richardson extrapolation level.

The independent oracle used to validate jet-computed derivatives: it
shares no code path with the Taylor arithmetic.
"""

from __future__ import annotations

import sys
from itertools import product

import numpy as np

# central stencils per derivative order, as (offset, weight) pairs; all O(h^2)
_STENCILS = {
    0: ((0, 1.0),),
    1: ((1, 0.5), (-1, -0.5)),
    2: ((1, 1.0), (0, -2.0), (-1, 1.0)),
    3: ((2, 0.5), (1, -1.0), (-1, 1.0), (-2, -0.5)),
}


def fd_derivative(func, point, mu):
    """Mixed partial d^mu of func at point, |mu| <= 3.

    Step per coordinate: max(|x_i|, 1) * eps^(1/(|mu|+2)), halved once for
    the Richardson step that cancels the leading O(h^2) error.
    """
    point = np.asarray(point, dtype=float)
    mu = tuple(int(k) for k in mu)
    total = sum(mu)
    if total > 3:
        raise ValueError("finite-difference oracle supports |mu| <= 3")
    if total == 0:
        return float(func(point))
    eps = sys.float_info.epsilon
    base_h = eps ** (1.0 / (total + 2))
    steps = np.array([max(abs(x), 1.0) * base_h for x in point])

    def estimate(scale):
        h = steps * scale
        axes = [_STENCILS[k] for k in mu]
        acc = 0.0
        for combo in product(*axes):
            x = point.copy()
            w = 1.0
            for i, (off, wt) in enumerate(combo):
                x[i] += off * h[i]
                w *= wt
            acc += w * func(x)
        denom = 1.0
        for i, k in enumerate(mu):
            denom *= h[i] ** k
        return acc / denom

    d1 = estimate(1.0)
    d2 = estimate(0.5)
    return (4.0 * d2 - d1) / 3.0
