"""
Coupling geometry and the master-equation coefficients
======================================================

Each giant atom touches the waveguide at two points. Where those points sit
(separate, braided, nested) decides how the phase shift theta0 = k0 d enters
the Lamb shifts, the exchange coupling and the decay rates.
"""
import numpy as np

from giant_atoms import coupling_geometry, rates_for, transition_rates, DegenerateBasisError
from giant_atoms.rates import CouplingKind

pi = np.pi

for kind in CouplingKind:
    print(f"{kind.value:9s} coupling points (units of d): {coupling_geometry(kind).positions}")

# a few points where the rates take simple values
print()
for kind, th, label in [
    ("separate", pi, "pi"),
    ("braided", pi / 2, "pi/2"),
    ("nested", pi / 3, "pi/3"),
]:
    r = rates_for(kind, th)
    print(f"{kind} at theta0 = {label}:")
    for name, value in r.as_dict().items():
        print(f"    {name:14s}{round(value, 12) + 0.0: .6f}")

# transition rates between the collective levels
print()
for kind, th in [("separate", 0.5001 * pi), ("nested", 0.85 * pi)]:
    tr = transition_rates(rates_for(kind, th))
    print(f"{kind} at {th / pi:.4f} pi:", {k: float(f"{v:.3g}") for k, v in tr.as_dict().items()})

# where the two single-excitation levels coincide the collective basis is not defined
try:
    transition_rates(rates_for("separate", 0.0))
except DegenerateBasisError as exc:
    print("\nseparate at theta0 = 0:", exc)
