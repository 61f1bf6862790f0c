"""Upper and lower bounds side by side as q grows."""
# %%
from streamswitch.bounds import bound_report
from streamswitch.streaming import MemoryProfile

n, s = 1024, 32
print(f"{'q':>4} {'chain (nats)':>13} {'upper lead':>11} {'lower':>9} {'construction':>13}  flags")
for q in (2, 4, 8, 16, 32):
    r = bound_report(MemoryProfile.constant(n, q, s))
    print(f"{q:>4} {r.lemma2_chain:13.6f} {r.theorem1_leading:11.6f} {r.theorem2_lower:9.6f} "
          f"{r.collision_exact_kl:13.6f}  {','.join(r.flags)}")

# %%
# at q = N^(1-eps) the two leading terms coincide
r = bound_report(MemoryProfile.constant(1024, 16, 32), epsilon=0.6)
print(r.theorem1_leading, r.corollary1_leading)
