"""
Collective populations
======================

Projecting the density matrix on |ee>, |psi+>, |psi->, |gg> shows where the
excitation goes. Near theta0 = 0 with separate coupling |psi-> hardly decays.
"""
import numpy as np

from giant_atoms import collective_basis, collective_populations, evolve, rates_for, transition_rates

pi = np.pi
r = rates_for("separate", 1e-3)
basis = collective_basis(r)
tr = transition_rates(r)
print(f"Gamma_+0 = {tr.gp0:.4f}, Gamma_-0 = {tr.gm0:.2e}")

traj = evolve("eg", r, None, np.linspace(0, 5, 6))
pops = collective_populations(traj, basis)
print(" t    rho++    rho--    rho00")
for k, t in enumerate(traj.times):
    print(f"{t:2.0f}  {pops.rho_pp[k]:.5f}  {pops.rho_mm[k]:.5f}  {pops.rho00[k]:.5f}")

# from |ee> the top level empties at Gamma_a + Gamma_b
r = rates_for("nested", 0.85 * pi)
traj = evolve("ee", r, None, np.linspace(0, 2, 5))
pops = collective_populations(traj, collective_basis(r))
print("\nnested 0.85pi, rho22:", np.round(pops.rho22, 5))
print("exp(-(Ga+Gb) t):     ", np.round(np.exp(-(r.Gamma_a + r.Gamma_b) * traj.times), 5))
