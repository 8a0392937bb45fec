"""Pure numpy implementation of the amplification kernels.

Both kernels apply Q = -A S_0^phi A^-1 S_chi^varphi through the reflection
form A S_0^phi A^-1 = I - (1 - phi)|psi><psi|, where psi = A|0>.
"""

import numpy as np


def q_iterate(v, psi, mask, phi, varphi, m):
    """Apply Q to ``v`` in place ``m`` times."""
    good = mask.view(np.bool_)
    c = 1.0 - phi
    for _ in range(m):
        v[good] *= varphi
        overlap = np.vdot(psi, v)
        v -= (c * overlap) * psi
        np.negative(v, out=v)
    return v


def power_rows(out, psi, mask, phi, varphi):
    """Fill rows 1.. of ``out`` with successive Q powers of row 0."""
    good = mask.view(np.bool_)
    c = 1.0 - phi
    for j in range(1, out.shape[0]):
        row = out[j]
        row[:] = out[j - 1]
        row[good] *= varphi
        overlap = np.vdot(psi, row)
        row -= (c * overlap) * psi
        np.negative(row, out=row)
    return out
