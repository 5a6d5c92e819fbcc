"""
TER with expensive term edits
=============================

TERm prices every edit on a reference term token (and every shift of a
block that carries a term word) at C_term instead of 1. With C_term = 1
it is ordinary TER.
"""

from termeval import CostSchema, ter
from termeval.ter import brute_force_ter

ref = "the patient had dry cough and fever".split()
mask = (False, False, False, True, True, False, True)  # "dry cough", "fever"

candidates = {
    "term wrong": "the patient had wet cough and fever".split(),
    "context wrong": "a patient had dry cough and fever".split(),
    "term moved": "the patient had and fever dry cough".split(),
}

for c in (1.0, 2.0, 3.0):
    sch = CostSchema(mask, c)
    row = []
    for name, hyp in candidates.items():
        r = ter(hyp, ref, sch, normalize="length")
        row.append(f"{name}: {r.weighted_cost:g} ({1 - r.score:.3f})")
    print(f"C_term={c:g}  " + "   ".join(row))

# the greedy search is checked against an exhaustive two-shift search
hyp = candidates["term moved"]
sch = CostSchema(mask, 2.0)
print("greedy", ter(hyp, ref, sch).score, "exhaustive", brute_force_ter(hyp, ref, sch))
