"""
Checking the adiabatic limit by brute force
===========================================

Integrates the full atom+cavity density matrix through the pulse pair and
compares the emitted-photon statistics with the closed-form result. Longer
pulses approach the adiabatic limit; the smoothstep shape converges faster
than the sine pair because its derivatives vanish at both ends.
"""

import time

import numpy as np

from photon_pistol import AtomicState, Geometry, LevelScheme, emission
from photon_pistol.dynamics import PulseSchedule, convergence_study, integrate

s = LevelScheme(3, 2, 3)
geo = Geometry.from_psi(np.pi / 4)
init = AtomicState.equilibrium(s)
closed = emission(s, geo, init)
print(f"closed form: w = {closed.w:.6f}, P = {closed.P:.5f}")

t0 = time.perf_counter()
rows = convergence_study(s, geo, init, PulseSchedule(1.0, 1.0, 100.0), [1, 2, 4, 8], base_steps=5000)
print(f"\nsine pulses ({time.perf_counter() - t0:.1f} s)")
print("  Omega*T   |w_num - w|   leakage")
for r in rows:
    print(f"  {r.omega_T:7.0f}   {r.deviation:.2e}     {r.leakage:.2e}")

print("\nsmoothstep pulses, pure m_a=0 at psi=0.685")
init = AtomicState.pure(s, 0)
geo = Geometry.from_psi(0.685)
closed = emission(s, geo, init)
for omega_T in (200, 400, 800):
    res = integrate(s, geo, init, PulseSchedule(1.0, 1.0, omega_T, shape="smoothstep"), steps=50 * omega_T)
    print(f"  Omega*T={omega_T:4d}: w_num={res.w_num:.5f} (closed {closed.w:.5f}), "
          f"P_num={res.P_num:.4f} (closed {closed.P:.4f})")
