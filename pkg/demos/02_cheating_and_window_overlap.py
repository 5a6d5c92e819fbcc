"""
Why presence metrics are easy to game
=====================================

A cheating system appends every missing term at the end of its output.
Exact match jumps to 100%, BLEU barely moves, but the appended terms sit
in the wrong context: window overlap and 1-TERm both go down.
"""

from termeval import EvalConfig, evaluate_system, make_hypotheses, naive_cheat, smart_cheat
from termeval.fixtures import generate_corpus
from termeval.report import to_markdown

# 200 synthetic segments; the honest output misses about 30% of the terms
sc = generate_corpus(200, seed=0)
honest = make_hypotheses(sc.honest, sc.corpus.stopwords)

systems = {
    "honest": honest,
    "smart-cheat": smart_cheat(sc.corpus, honest),
    "naive-cheat": naive_cheat(sc.corpus, honest),
}

print("example segment")
print("  honest:", sc.honest[0])
print("  cheat: ", " ".join(t.surface for t in systems["smart-cheat"][0].tokens))

config = EvalConfig(windows=(2, 3))
reports = [evaluate_system(sc.corpus, h, name, config, jobs=4, is_cheating=name != "honest").report
           for name, h in systems.items()]
print()
print(to_markdown(reports))
