"""Which fillers drive the divergence of a slot?"""

# %%
from depchange.divergence import Distribution, jsd, jsd_decompose, slot_change

P = Distribution({"a": 0.5, "b": 0.5})
Q = Distribution({"a": 1.0})
print("jsd:", round(jsd(P, Q), 6))

# %% each filler's share; the shares add up to the total
for c in jsd_decompose(P, Q).contributions:
    print(f"{c.filler}\t{c.contribution:.6f}\t{c.direction}")

# %% same thing from raw counts of one slot
change = slot_change(
    "chi_amod",
    {"vertical": 6, "horizontal": 4},
    {"vertical": 1, "military": 5, "american": 4},
)
print(change.slot, round(change.jsd, 6))
for c in change.contributions:
    print(f"  {c.filler:<11} {c.count_1:>2} -> {c.count_2:<2} {c.contribution:.4f} {c.direction}")
