"""
Term-centred phrase BLEU
========================

Each term's reference span is projected onto the hypothesis through a
word alignment; both spans get k words of context and the phrase pairs
are scored as one small corpus.
"""

from termeval import exact_order_match, extract_term_phrases, term_bleu
from termeval.fixtures import example_corpus, example_outputs

corpus = example_corpus()
mt1, mt2 = example_outputs()

for p in extract_term_phrases(corpus.segments[0], mt2[0].tokens, k=2):
    print(" ".join(p.ref_phrase), "|||", " ".join(p.hyp_phrase))

for k in (2, 3):
    print(f"k={k}: term BLEU MT1 {term_bleu(corpus, mt1, k):.2f}  MT2 {term_bleu(corpus, mt2, k):.2f}"
          f"   exact order MT1 {exact_order_match(corpus, mt1, k):.2f}"
          f"  MT2 {exact_order_match(corpus, mt2, k):.2f}")
