"""An off-centre well, checked against direct diagonalization.

The box is [-1, 1] and the well minimum sits at x = d.  As d grows the
lowest states are squeezed against the right wall.  Every ITP energy is
compared with the band eigensolver on the same grid.
Run with ``python demos/03_offset_box_and_oracle.py``.
"""

from itp_confine import (
    ShiftedHarmonic,
    build_hamiltonian,
    lowest_eigenpairs,
    make_symmetric_grid,
    solve_spectrum,
)

grid = make_symmetric_grid(1.0, 2001)
print(f"{'d':>5} {'n':>2} {'E (ITP)':>18} {'E (direct)':>18} {'diff':>9} {'<x^2>':>10}")
for d in (0.0, 0.6, 1.08, 1.92, 3.0):
    spec = ShiftedHarmonic(d)
    ladder = solve_spectrum(spec, grid, n_states=3)
    direct, _ = lowest_eigenpairs(build_hamiltonian(spec, grid), 3)
    for r, e in zip(ladder, direct):
        print(f"{d:5.2f} {r.state_index:2d} {r.energy:18.12f} {e:18.12f} "
              f"{r.energy - e:9.1e} {r.moments[0]:10.6f}")

# <x^2> is measured from the box centre: the ground state drifts towards
# x = 1 and its <x^2> grows, while the excited states already fill the box.
# Without the walls every level would stay at n + 1/2.
