"""
End to end with the command line
================================

annotate -> evaluate (with cheat variants) -> correlate, in a scratch
directory, using the bundled example sentence.
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

from termeval.fixtures import SPANISH_FIXTURE_STOPWORDS, EXAMPLE_DIR


def run(*args):
    print("$ termeval", " ".join(args), flush=True)
    subprocess.run([sys.executable, "-m", "termeval", *args], check=True)


work = Path(tempfile.mkdtemp(prefix="termeval-demo-"))
for f in EXAMPLE_DIR.iterdir():
    shutil.copy(f, work / f.name)
(work / "stop.txt").write_text("\n".join(sorted(SPANISH_FIXTURE_STOPWORDS)) + "\n", encoding="utf-8")

run("annotate", "--source", str(work / "source.txt"), "--reference", str(work / "reference.txt"),
    "--terminology", str(work / "terminology.tsv"), "--output-dir", str(work / "ann"))

corpus = ["--segments", str(work / "ann" / "segments.jsonl"), "--terminology", str(work / "terminology.tsv"),
          "--stopwords", str(work / "stop.txt")]
run("evaluate", *corpus, "--hyp", f"mt1={work / 'mt1.txt'}", "--hyp", f"mt2={work / 'mt2.txt'}",
    "--add-cheats", "smart", "--output-dir", str(work / "ev"))

# the cheat rows are flagged and left out of the correlation unless asked for
run("correlate", "--reports", str(work / "ev" / "report.tsv"), "--include-cheating", "--show-all")
print("outputs in", work)
