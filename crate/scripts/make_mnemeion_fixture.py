#!/usr/bin/env python3
"""Builds the bundled single-lemma alignment fixture.

The corpus is one English translation (`web`) of 2,862 Gospel verses.
John 19:41-42 carry their real text and are the only verses holding
μνημεῖον in the nominative singular. 33 further verses hold the lemma in
other forms; two of those are missing from the corpus. All remaining
verses are filler text in which the tokens of John 19:41-42 appear in a
controlled number of verses:

    tomb 6, garden 4, laid 29, the 1916   (verse presence, V and U pooled)

Usage: scripts/make_mnemeion_fixture.py [OUTDIR]
"""

import random
import sys
import unicodedata
from pathlib import Path

SEED = 2862
OUT = Path(sys.argv[1] if len(sys.argv) > 1 else "crates/core/fixtures/mnemeion")

V_TEXT = {
    ("JHN", 19, 41): "Now in the place where he was crucified there was a garden. "
    "In the garden was a new tomb in which no man had ever yet been laid.",
    ("JHN", 19, 42): "Then because of the Jews' Preparation Day (for the tomb "
    "was near at hand) they laid Jesus there.",
}

# verse presence over the 2,831 eligible verses (V and U together)
PRESENCE = {
    "tomb": 6,
    "garden": 4,
    "laid": 29,
    "the": 1916,
    "was": 600,
    "there": 150,
    ".": 2500,
    "in": 500,
    "Now": 40,
    "place": 60,
    "where": 90,
    "he": 900,
    "crucified": 12,
    "a": 700,
    "In": 35,
    "new": 25,
    "which": 200,
    "no": 120,
    "man": 150,
    "had": 220,
    "ever": 8,
    "yet": 30,
    "been": 80,
    "Then": 110,
    "because": 140,
    "of": 1100,
    "Jews": 70,
    "'": 45,
    "Preparation": 5,
    "Day": 20,
    "(": 15,
    ")": 15,
    "for": 500,
    "near": 30,
    "at": 260,
    "hand": 40,
    "they": 700,
    "Jesus": 800,
}

CHAPTERS = {"MAT": 28, "MRK": 16, "LUK": 24, "JHN": 21}
VERSES_PER_CHAPTER = 36
CAPTURED = 2862
OTHER_FORM_VERSES = 33
MISSING = 2

# (case, number) for the 33 verses holding μνημεῖον in other forms
OTHER_FORMS = (
    [("accusative", "singular")] * 10
    + [("genitive", "singular")] * 8
    + [("dative", "singular")] * 6
    + [("nominative", "plural")] * 2
    + [("accusative", "plural")] * 4
    + [("dative", "plural")] * 3
)


def is_punct(s):
    return all(unicodedata.category(c).startswith("P") for c in s)


def unigrams(text):
    out = []
    for word in text.split():
        chars = list(word)
        start = 0
        while start < len(chars) and is_punct(chars[start]):
            start += 1
        end = len(chars)
        while end > start and is_punct(chars[end - 1]):
            end -= 1
        out += chars[:start]
        if start < end:
            out.append("".join(chars[start:end]))
        out += chars[end:]
    return out


def filler_vocab(rng, size, banned):
    cons = "bdfgklmnprstvz"
    vows = "aeiou"
    words = set()
    while len(words) < size:
        w = "".join(rng.choice(cons) + rng.choice(vows) for _ in range(rng.randint(2, 3)))
        if w not in banned:
            words.add(w)
    return sorted(words)


def render(tokens):
    """Joins unigram tokens so that re-tokenizing yields exactly them."""
    words = []
    pending_open = ""
    for t in tokens:
        if t == "(":
            pending_open += t
        elif is_punct(t):
            words[-1] += t
        else:
            words.append(pending_open + t)
            pending_open = ""
    assert not pending_open
    return " ".join(words)


def main():
    rng = random.Random(SEED)
    refs = []
    for book, chapters in CHAPTERS.items():
        for c in range(1, chapters + 1):
            last = 42 if (book, c) == ("JHN", 19) else VERSES_PER_CHAPTER
            refs += [(book, c, v) for v in range(1, last + 1)]

    v_refs = list(V_TEXT)
    pool = [r for r in refs if r not in V_TEXT]
    rng.shuffle(pool)
    other = sorted(pool[:OTHER_FORM_VERSES])
    missing = set(rng.sample(other, MISSING))
    u_count = CAPTURED - len(v_refs) - (OTHER_FORM_VERSES - MISSING)
    u_refs = pool[OTHER_FORM_VERSES : OTHER_FORM_VERSES + u_count]
    assert len(u_refs) + len(v_refs) + len(other) - MISSING == CAPTURED

    v_tokens = [set(unigrams(t)) for t in V_TEXT.values()]
    assert set(PRESENCE) == set().union(*v_tokens), set().union(*v_tokens) ^ set(PRESENCE)

    u_tokens = {r: [] for r in u_refs}
    for tok, count in PRESENCE.items():
        in_v = sum(tok in s for s in v_tokens)
        for r in rng.sample(u_refs, count - in_v):
            u_tokens[r].append(tok)

    fillers = filler_vocab(rng, 3000, set(PRESENCE))
    texts = {}
    for r in u_refs:
        toks = [t for t in u_tokens[r] if not is_punct(t)]
        toks += [rng.choice(fillers) for _ in range(rng.randint(6, 18))]
        rng.shuffle(toks)
        if "(" in u_tokens[r]:
            toks.insert(1, "(")
        for p in ("'", ")"):
            if p in u_tokens[r]:
                toks.insert(3, p)
        if "." in u_tokens[r]:
            toks.append(".")
        text = render(toks)
        assert set(unigrams(text)) == set(u_tokens[r]) | (set(toks) - set(PRESENCE)), r
        texts[r] = text
    for r in other:
        if r not in missing:
            texts[r] = render(
                ["They", "came", "to", "the", "tomb"]
                + [rng.choice(fillers) for _ in range(8)]
                + ["."]
            )
    texts.update(V_TEXT)
    assert len(texts) == CAPTURED

    def order(r):
        return (list(CHAPTERS).index(r[0]), r[1], r[2])

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "corpus.tsv", "w", encoding="utf-8", newline="\n") as f:
        for r in sorted(texts, key=order):
            f.write(f"web\teng\t\t{r[0]}\t{r[1]}\t{r[2]}\t{texts[r]}\n")

    rows = [(r, "μνημεῖον", "nominative", "singular") for r in v_refs]
    rows += [(r, "μνημεῖον", c, n) for r, (c, n) in zip(other, OTHER_FORMS)]
    with open(OUT / "annotations.tsv", "w", encoding="utf-8", newline="\n") as f:
        for r, lemma, case, number in sorted(rows, key=lambda x: order(x[0])):
            f.write(f"{r[0]}\t{r[1]}\t{r[2]}\t0\t{lemma}\t{lemma}\tnoun\tneuter\t{number}\t{case}\n")

    # self-check of the presence counts over the eligible verses
    eligible = [r for r in texts if r not in other]
    assert len(eligible) == 2831
    for tok, count in PRESENCE.items():
        got = sum(tok in set(unigrams(texts[r])) for r in eligible)
        assert got == count, (tok, got, count)


if __name__ == "__main__":
    main()
