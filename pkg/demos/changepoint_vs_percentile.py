"""Two ways to turn a ranking into binary labels."""

# %%
import numpy as np

from depchange.aggregate import LemmaScore, classify_changepoint, classify_percentile, rank_lemmas

rng = np.random.default_rng(3)
# 6 strongly changed words, 14 mostly stable ones
values = np.concatenate([rng.uniform(0.6, 0.9, 6), rng.uniform(0.0, 0.3, 14)])
scores = [LemmaScore(f"w{i:02d}", float(v)) for i, v in enumerate(values)]
ranked = rank_lemmas(scores)

# %% a fixed share of the list is called changed
pct = classify_percentile(ranked, 0.43)
print("percentile positives:", sum(pct.values()))

# %% the split that minimizes within-group squared error follows the gap
k, cp = classify_changepoint(scores)
print("change-point split after rank", k, "positives:", sum(cp.values()))

for e in ranked.entries:
    print(f"{e.target_id} {e.score:.3f} pct={pct[e.target_id]} cp={cp[e.target_id]}")
