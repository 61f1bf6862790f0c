"""Exact output laws by enumeration, and the information inequalities they satisfy."""
# %%
import math

from streamswitch.collision import build_collision_algorithm
from streamswitch.oracle import enumerate_distributions, verify_lemma1, verify_lemma2
from streamswitch.streaming import MemoryProfile, random_algorithm

# the list-storing collision detector with room for one symbol after step 1
alg = build_collision_algorithm(MemoryProfile(4, 2, (3, 1)))
res = enumerate_distributions(alg)
print(res.describe())
print("KL(P||Q) =", res.kl_exact, " log(4/3) =", math.log(4 / 3))
print("accepts under P:", res.p_accept_count, "  Q[accept] =", res.q_bit.prob(1))

# %%
# per-step information and the two verdicts
print("I(X_i; S_{i-1}) :", [round(v, 6) for v in res.mi_per_step])
v = verify_lemma1(res)
print(f"  {v.name:22s} lhs={v.lhs:.6f} rhs={v.rhs:.6f} passed={v.passed}")
for v in verify_lemma2(res) + verify_lemma2(res, use_memory=True):
    print(f"  {v.name:22s} lhs={v.lhs:.6f} rhs={v.rhs:.6f} passed={v.passed}")

# %%
# a batch of random algorithms: nothing beats the bounds
profile = MemoryProfile(6, 3, (2, 3, 2))
worst = min(verify_lemma1(enumerate_distributions(random_algorithm(profile, s))).slack
            for s in range(200))
print(f"200 random algorithms on {profile}: smallest slack {worst:.3e}")
