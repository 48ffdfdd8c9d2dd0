"""
Angular algebra behind the couplings
====================================

A short tour of the 3j symbols and circular components that every coupling
matrix is built from.
"""

import numpy as np

from photon_pistol import build_g_a, spherical_components, wigner_3j, LevelScheme

# a few 3j symbols, computed exactly and converted to float once
print("(1 1 0; 1 -1 0) =", wigner_3j(1, 1, 0, 1, -1, 0), " expected 1/sqrt3 =", 1 / np.sqrt(3))
print("(2 1 3; 0 0 0)  =", wigner_3j(2, 1, 3, 0, 0, 0), " expected -sqrt(3/35) =", -np.sqrt(3 / 35))
print("(3 1 3; 0 0 0)  =", wigner_3j(3, 1, 3, 0, 0, 0), " (odd sum, all m = 0)")

# half-integers are fine too, as strings or Fractions
print("(1/2 1/2 1; 1/2 -1/2 0) =", wigner_3j("1/2", "1/2", 1, "1/2", "-1/2", 0))

# circular components: order is (q=-1, q=0, q=+1)
for name, v in [("e_x", [1, 0, 0]), ("e_y", [0, 1, 0]), ("e_z", [0, 0, 1])]:
    c = spherical_components(v).as_array()
    print(f"{name}: {np.round(c, 6)}")

# a pi-polarized drive between J=3 levels leaves m_a=0 uncoupled
g = build_g_a(LevelScheme(3, 2, 3), [0, 0, 1])
print("\ng_a for (3,2,3) with l_c = e_z, diagonal entries:")
print(np.round(np.diag(g).real, 4))
