"""Ground state of a boxed harmonic oscillator on successively finer grids.

Run with ``python demos/01_grid_convergence.py``.
"""

import numpy as np

from itp_confine import Harmonic, make_symmetric_grid, solve_state

# A small box (R = 0.5) is dominated by the walls, a wide one (R = 5) by
# the well.  Either way the five-point scheme should lose error like h^4.
for R in (0.5, 5.0):
    print(f"\nR = {R}")
    print(f"{'N':>6} {'h':>9} {'energy':>20} {'change':>11} {'iterations':>10}")
    hs, es = [], []
    for N in (101, 201, 401, 801, 1601, 3201):
        grid = make_symmetric_grid(R, N)
        res = solve_state(Harmonic(1), grid)
        change = f"{res.energy - es[-1]:11.3e}" if es else " " * 11
        hs.append(grid.h)
        es.append(res.energy)
        print(f"{N:6d} {grid.h:9.6f} {res.energy:20.13f} {change} {res.iterations:10d}")

    # h halves each row, so successive changes shrink by 2**p
    d = -np.diff(es)
    print("observed order:", np.round(np.log2(d[:-1] / d[1:]), 3))

# The wide box is practically the free oscillator: E0 -> 1/2.
