#!/usr/bin/env python3
"""Compile data/lexicon.tsv from WordNet 3.0 index files.

Usage: make_lexicon.py <wordnet-dict-dir> <out.tsv>

Only single-word, purely alphabetic lemmas are kept. Closed-class words
(determiners, pronouns, prepositions, auxiliaries, conjunctions and a few
high-frequency adverbs) are dropped even where WordNet lists an obscure
noun or adjective sense for them ("a" as vitamin A, "be" as beryllium).
"""
import re
import sys
from pathlib import Path

CLOSED_CLASS = set("""
a an the this that these those some any each every either neither no none
i me my mine myself we us our ours ourselves you your yours yourself yourselves
he him his himself she her hers herself it its itself they them their theirs
themselves one ones who whom whose which what whatever whichever whoever
is am are was were be been being do does did done doing have has had having
will would shall should can could may might must ought
and or but nor so yet for if then than because although though while whereas
unless until since as
of in on at by to from with without within into onto upon about above below
over under after before between among through during against across along
around behind beneath beside besides beyond near off out up down toward towards
via per like unlike
not very too also just only still even ever never always often here there
where when why how all both few many more most much other such own same
""".split())

WORD = re.compile(r"^[a-z]+(?:-[a-z]+)*$")


def lemmas(path):
    with open(path, encoding="latin-1") as fh:
        for line in fh:
            if line.startswith(" "):
                continue
            lemma = line.split(" ", 1)[0]
            if WORD.match(lemma) and lemma not in CLOSED_CLASS:
                yield lemma


def main():
    src, out = Path(sys.argv[1]), Path(sys.argv[2])
    tags = {}
    for name, tag in (("index.noun", "N"), ("index.adj", "ADJ")):
        for lemma in lemmas(src / name):
            tags.setdefault(lemma, set()).add(tag)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for word in sorted(tags):
            fh.write(f"{word}\t{','.join(sorted(tags[word], key=['N', 'ADJ'].index))}\n")


if __name__ == "__main__":
    main()
