"""
Emission versus drive angle
===========================

Writes psi sweeps for (3,2,3) and (2,1,1) to CSV files next to this script and,
if matplotlib is installed, plots w and P against psi.
"""

import csv
from pathlib import Path

import numpy as np

from photon_pistol import AtomicState, LevelScheme, sweep_psi

out_dir = Path(__file__).resolve().parent / "output"
out_dir.mkdir(exist_ok=True)
grid = np.linspace(0, np.pi / 2, 64)

curves = {}
for js in [(3, 2, 3), (2, 1, 1)]:
    s = LevelScheme(*js)
    rows = sweep_psi(s, AtomicState.pure(s, 0), grid)
    curves[js] = rows
    path = out_dir / f"sweep_{''.join(map(str, js))}_pure0.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(rows[0]._fields)
        writer.writerows(rows)
    best = max((r for r in rows if r.defined), key=lambda r: r.P)
    print(f"{js}: wrote {path.name}; max P = {best.P:.4f} at psi = {best.psi:.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available, skipping plot")
else:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharex=True)
    for ax, (js, rows) in zip(axes, curves.items()):
        psi = [r.psi for r in rows]
        ax.plot(psi, [r.w for r in rows], label="w")
        ax.plot(psi, [r.P for r in rows], label="P")
        ax.set_title(f"(J_a, J_b, J_c) = {js}, m_a = 0")
        ax.set_xlabel("psi [rad]")
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_dir / "sweeps.png", dpi=120)
    print("saved", out_dir / "sweeps.png")
