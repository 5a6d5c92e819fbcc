"""
Term matching on a single annotated sentence
============================================

An English-Spanish sentence with four annotated terms (two of them nested:
"tos" and "tos seca") and two system outputs. The second output drops
"seca", which costs a full term under exact match but only half a term
under partial match.
"""

from termeval import exact_match, partial_match, rp_match
from termeval.fixtures import example_corpus, example_outputs

corpus = example_corpus()
mt1, mt2 = example_outputs()

seg = corpus.segments[0]
print("reference:", " ".join(t.surface for t in seg.reference))
for occ in seg.occurrences:
    print("  term", occ.entry_id, "->", " ".join(seg.target_form(occ)), "at", occ.ref_span)

# exact match wants the whole target form, contiguous, in the hypothesis
for name, hyps in (("MT1", mt1), ("MT2", mt2)):
    acc, per_term = exact_match(corpus, hyps)
    print(f"{name}: exact {acc.percent:.1f}%  ", [r.matched for r in per_term])

# partial credit counts term words, reordering penalty discounts them by position
print(f"MT2 partial match {partial_match(corpus, mt2).percent:.1f}%")
print(f"MT2 rp match      {rp_match(corpus, mt2).percent:.2f}%")
