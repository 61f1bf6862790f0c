"""Sampling the collision detector where enumeration is out of reach."""
# %%
from streamswitch.collision import analytic_accept_probability, build_collision_algorithm
from streamswitch.montecarlo import estimate_accept, estimate_tv_advantage
from streamswitch.streaming import MemoryProfile

profile = MemoryProfile.constant(2**20, 2**10, 64)
alg = build_collision_algorithm(profile)
exact = analytic_accept_probability(profile.n, alg.capacities)
print("capacities start", alg.k[:6], "... analytic Q[accept] =", exact)

# %%
q_est = estimate_accept(alg, "Q", 100_000, seed=1, workers=4)
p_est = estimate_accept(alg, "P", 100_000, seed=2, workers=4)
print(f"Q: {q_est.value:.5f} +/- {q_est.stderr:.5f}  (z = {(q_est.value - exact) / q_est.stderr:+.2f})")
print(f"P: {p_est.value} ({p_est.hits} hits)")

# %%
small = build_collision_algorithm(MemoryProfile(4, 3, (3, 5, 1)))
print("TV advantage, N=4:", estimate_tv_advantage(small, 200_000, seed=3), "exact 5/8")
