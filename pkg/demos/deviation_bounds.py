"""Sandwiching an unmeasured expectation value between two bounds.

If a state was measured to give <phi|M|phi> = x but the state actually
sent overlaps |phi> only with fidelity y, the true expectation value
<psi|M|psi> can still be pinned down: it always lies between
g_lower(x, y) and g_upper(x, y). The bounds widen smoothly as the
fidelity degrades and collapse onto x at y = 1.
"""

import numpy as np

from mdiqkd import g_lower, g_upper

print("x = 0.25, fidelity sweep:")
print(f"  {'y':>6} {'g_lower':>10} {'g_upper':>10}")
for y in (1.0, 0.999, 0.99, 0.9, 0.8, 0.5):
    print(f"  {y:>6} {g_lower(0.25, y):>10.6f} {g_upper(0.25, y):>10.6f}")

# both bounds are piecewise: below x = 1 - y^2 the lower bound is
# pinned at 0, above x = y^2 the upper bound is pinned at 1
y = 0.9
print(f"\nseam check at y = {y}:")
print(f"  g_lower(1 - y^2, y) = {g_lower(1 - y * y, y):.2e} (meets the 0 branch)")
print(f"  g_upper(y^2, y)     = {g_upper(y * y, y):.6f} (meets the 1 branch)")

print("\nrandom spot check of the sandwich property:")
rng = np.random.default_rng(7)
a = rng.normal(size=4) + 1j * rng.normal(size=4)
a /= np.linalg.norm(a)
r = rng.normal(size=4) + 1j * rng.normal(size=4)
r /= np.linalg.norm(r)
q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
m = (q * rng.uniform(0, 1, 4)) @ q.conj().T

x = float(np.real(a.conj() @ m @ a))
y = float(abs(a.conj() @ r))
target = float(np.real(r.conj() @ m @ r))
print(f"  x = {x:.6f}, y = {y:.6f}")
print(f"  {g_lower(x, y):.6f} <= {target:.6f} <= {g_upper(x, y):.6f}")
