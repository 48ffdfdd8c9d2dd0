"""
Photon emission for three level schemes
=======================================

Emission probability and polarization in the adiabatic limit, for the
schemes (3,2,3), (2,1,1) and (0,1,1). The drive is linearly polarized in the
XZ plane at angle psi from the cavity axis; the cavity modes are X and Y.
"""

import numpy as np

from photon_pistol import AtomicState, Geometry, LevelScheme, classify, emission


def show(label, res):
    if res.defined:
        xi = ", ".join(f"{x:+.4f}" for x in res.stokes)
        print(f"  {label:<28} w={res.w:.6f}  xi=({xi})  P={res.P:.5f}")
    else:
        print(f"  {label:<28} w={res.w:.2e}  (no photon, polarization undefined)")


s = LevelScheme(3, 2, 3)
print("(3,2,3), equilibrium ground state")
for psi in (0.0, np.pi / 4, np.pi / 2):
    show(f"psi={psi:.3f}", emission(s, Geometry.from_psi(psi), AtomicState.equilibrium(s)))

# w is the fraction of ground sublevels that belong to the dark-ab family
rep = classify(s, Geometry.from_psi(0.0))
print(f"  N_ab_d / (2J_a+1) = {rep.N_ab_d}/{rep.n_a} = {rep.N_ab_d / rep.n_a:.6f}")

print("\n(3,2,3), pure m_a=0")
for psi in (0.0, 0.685, np.pi / 2):
    show(f"psi={psi:.3f}", emission(s, Geometry.from_psi(psi), AtomicState.pure(s, 0)))

s = LevelScheme(2, 1, 1)
print("\n(2,1,1), pure m_a=0")
for psi in (0.0, np.pi / 2):
    show(f"psi={psi:.3f}", emission(s, Geometry.from_psi(psi), AtomicState.pure(s, 0)))

s = LevelScheme(0, 1, 1)
print("\n(0,1,1)")
show("psi=pi/2", emission(s, Geometry.from_psi(np.pi / 2), AtomicState.equilibrium(s)))

# a circularly polarized drive
s = LevelScheme(2, 1, 1)
geo = Geometry(l_c=np.array([1, 1j, 0]) / np.sqrt(2))
print("\n(2,1,1), equilibrium, circular drive in the transverse plane")
show("l_c=(1,i,0)/sqrt2", emission(s, geo, AtomicState.equilibrium(s)))
