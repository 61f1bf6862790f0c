"""Memory profiles, their normalized form, and running an algorithm inside it."""
# %%
import itertools

from streamswitch.streaming import (
    MemoryProfile,
    NormalizedSimulation,
    normalize_profile,
    random_algorithm,
    run_stream,
    sample_with_replacement,
    sample_without_replacement,
)

raw = MemoryProfile(4, 3, (5, 1, 9))
print(raw, "->", normalize_profile(raw))  # growth capped at ceil(log2 4) = 2 bits per step

# %%
# a random table-driven algorithm on the raw profile, simulated within the capped one
inner = random_algorithm(raw, seed=3)
sim = NormalizedSimulation(inner)
agree = all(
    sim.decode(3, run_stream(sim, x)) == run_stream(inner, x)
    for x in itertools.product(range(1, 5), repeat=3)
)
print("simulation reproduces every final state:", agree)

# %%
# streams come from the two samplers being told apart
print("with replacement    :", sample_with_replacement(10, 5, seed=1))
print("without replacement :", sample_without_replacement(10, 5, seed=2))
