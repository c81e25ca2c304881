"""Lowest levels of attractive and repulsive oscillators as the box grows.

Writes ``spectra.csv`` (columns R, potential, n, energy) for plotting and
prints a short summary.  Run with ``python demos/02_spectra_vs_box_size.py``.
"""

import csv

import numpy as np

from itp_confine import Harmonic, make_symmetric_grid, solve_spectrum

R_values = [float(R) for R in np.linspace(0.5, 6.0, 12)]
n_states = 4
rows = []
for name, spec in (("attractive", Harmonic(1)), ("repulsive", Harmonic(-1))):
    for R in R_values:
        ladder = solve_spectrum(spec, make_symmetric_grid(R, 1001), n_states=n_states)
        rows += [(R, name, r.state_index, r.energy) for r in ladder]

with open("spectra.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["R", "potential", "n", "energy"])
    w.writerows(rows)
print(f"wrote {len(rows)} rows to spectra.csv")

E = {(R, p, n): e for R, p, n, e in rows}

# small boxes look like a particle in a box: E_n ~ (n+1)^2 pi^2 / (8 R^2)
R = R_values[0]
box = [(n + 1) ** 2 * float(np.pi) ** 2 / (8 * R**2) for n in range(n_states)]
print(f"\nR = {R}: attractive", [round(E[R, 'attractive', n], 4) for n in range(n_states)])
print(f"        box only  ", [round(b, 4) for b in box])

# wide boxes: attractive levels approach n + 1/2, repulsive ones pair up
R = R_values[-1]
print(f"\nR = {R}: attractive", [round(E[R, 'attractive', n], 6) for n in range(n_states)])
pairs = [E[R, "repulsive", n + 1] - E[R, "repulsive", n] for n in (0, 2)]
print(f"        repulsive splittings within pairs: {pairs[0]:.2e}, {pairs[1]:.2e}")

# the repulsive ground state changes sign somewhere between R = 2 and 3
for lo, hi in zip(R_values, R_values[1:]):
    if E[lo, "repulsive", 0] > 0 > E[hi, "repulsive", 0]:
        print(f"repulsive E0 crosses zero between R = {lo} and {hi}")
