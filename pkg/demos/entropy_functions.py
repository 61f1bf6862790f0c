"""The scalar functions behind the upper bound: h2, its inverse, f and phi."""
# %%
import numpy as np

from streamswitch.entropy import LOG2, binary_entropy, binary_entropy_inverse, f_func, phi_func
from streamswitch import properties

# binary entropy and its inverse on [0, 1/2]
for x in (0.01, 0.1, 0.25, 0.5):
    t = binary_entropy(x)
    print(f"h2({x}) = {t:.12f}   h2^-1 back = {binary_entropy_inverse(t):.12f}")

# %%
# phi(t) = f(h2^-1(t)) rises from 0 to f(1/2) = log(2)/2 and is convex
ts = np.linspace(0, LOG2, 9)
for t in ts:
    print(f"phi({t:.4f}) = {phi_func(t):.6f}")
print("f(1/2) =", f_func(0.5), " log(2)/2 =", LOG2 / 2)

# %%
# the same checks the CLI runs under `verify-functions`
for check in properties.run_all(points=2_000, stirling_max=300):
    print(f"{check.name:45s} worst slack {check.worst_slack:+.3e}  passed={check.passed}")
