"""Slot profiles for the bundled demo word 'plane', period by period."""

# %%
from depchange.cli import demo_paths
from depchange.slots import build_profiles
from depchange.conllu import read_corpus
from depchange.targets import NormalizationRules, load_targets

paths = demo_paths()
specs = load_targets(paths["targets"])
rules = NormalizationRules.preset("se")

# %% one profile per target and period
profiles = {}
for period, key in ((1, "corpus1"), (2, "corpus2")):
    profiles[period] = build_profiles(read_corpus(paths[key]), specs, rules, keep_pos=False, period=period)

# %% the amod slot shifts from geometry to aviation
for period in (1, 2):
    plane = profiles[period]["plane_nn"]
    print(f"period {period}: {plane.occurrences} occurrences")
    for slot in sorted(plane.counts):
        print("   ", slot, dict(sorted(plane.counts[slot].items())))
