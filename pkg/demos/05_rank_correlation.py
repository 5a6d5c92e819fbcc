"""
Do term metrics rank systems like BLEU does?
============================================

Six systems of decreasing quality, made by corrupting one honest output,
scored with BLEU, exact match and window overlap. Spearman's rho compares
the system rankings; cells with p > 0.2 are left out.
"""

import random

from termeval import EvalConfig, evaluate_system, make_hypotheses, spearman
from termeval.fixtures import generate_corpus

sc = generate_corpus(80, seed=5)
rng = random.Random(0)


def degrade(line, rate):
    # each word is replaced by a junk token with probability rate
    return " ".join("junk" if rng.random() < rate else w for w in line.split())


reports = []
for k, rate in enumerate([0.0, 0.05, 0.1, 0.2, 0.3, 0.45]):
    hyps = make_hypotheses([degrade(x, rate) for x in sc.honest], sc.corpus.stopwords)
    reports.append(evaluate_system(sc.corpus, hyps, f"sys{k}", EvalConfig(windows=(3,))).report)

for r in reports:
    print(f"{r.system_name}: BLEU {100 * r.bleu:.2f}  exact {100 * r.exact_match:.2f}"
          f"  window3 {100 * r.window_overlap[3]:.2f}")

bleu = [r.bleu for r in reports]
for name, other in (("exact match", [r.exact_match for r in reports]),
                    ("window overlap 3", [r.window_overlap[3] for r in reports])):
    res = spearman(bleu, other)
    print(f"BLEU vs {name}: rho={res.rho:.3f} p={res.p_value:.4f} cell={res.render()}")

# with only three systems even a perfect ranking is too weak to report
res = spearman(bleu[:3], [r.exact_match for r in reports[:3]])
print(f"first three systems: rho={res.rho:.3f} p={res.p_value:.4f} cell={res.render()}")
