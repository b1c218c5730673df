#!/usr/bin/env python3
"""Captures reference-scorer outputs for the bundled 30-pair golden set.

Requires sacrebleu (pip install sacrebleu). Run from the repository root:
    python3 tools/capture_golden.py
Writes data/golden/golden30.jsonl and data/golden/sacrebleu_scores.json.
The C++ scorer tests compare against these frozen values.
"""
import json
import random

import sacrebleu
from sacrebleu.metrics import BLEU, CHRF, TER


def load_table(path):
    with open(path, encoding="utf-8") as f:
        rules = json.load(f)["rules"]
    return {r["from"]: r["to"] for r in rules}


def translit(text, table):
    longest = max(len(k) for k in table)
    out, i = [], 0
    while i < len(text):
        for n in range(min(longest, len(text) - i), 0, -1):
            if text[i:i + n] in table:
                out.append(table[text[i:i + n]])
                i += n
                break
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def main():
    rng = random.Random(7)
    with open("data/sample_corpus.jsonl", encoding="utf-8") as f:
        corpus = [json.loads(line) for line in f]
    tj2fa = load_table("data/tables/tj2fa.json")
    fa2tj = load_table("data/tables/fa2tj.json")
    picks = rng.sample(corpus, 26)
    items = []
    for k, row in enumerate(picks):
        if k % 2 == 0:
            src, ref, table = row["tajik"], row["farsi"], tj2fa
        else:
            src, ref, table = row["farsi"], row["tajik"], fa2tj
            # sentence-initial capital, as in running Tajik text
            ref = ref[:1].upper() + ref[1:]
        hyp = translit(src, table)
        mode = k % 5
        if mode == 1:
            hyp = ref
        elif mode == 2:
            words = ref.split()
            rng.shuffle(words)
            hyp = " ".join(words)
        elif mode == 3:
            hyp = ref.lower() if k % 2 else hyp
        items.append({"hyp": hyp, "ref": ref, "category": row["category"]})
    # hand-written cases: punctuation, digits, quotes, empty hypothesis
    items.append({"hyp": "«Шоҳнома»-и Фирдавсӣ, соли 1010.", "ref": "«Шоҳнома»-и Фирдавсӣ соли 1010.",
                  "category": "prose_parts"})
    items.append({"hyp": "شاهنامه (فردوسی): ۱۰۱۰", "ref": "«شاهنامه»ی فردوسی، ۱۰۱۰.",
                  "category": "prose_parts"})
    items.append({"hyp": "", "ref": "сулҳ ва ҳамкорӣ", "category": "words"})
    items.append({"hyp": "ДУШАНБЕ - пойтахти Тоҷикистон!", "ref": "Душанбе пойтахти Тоҷикистон аст.",
                  "category": "dr"})
    assert len(items) == 30
    with open("data/golden/golden30.jsonl", "w", encoding="utf-8") as f:
        for it in items:
            f.write(json.dumps(it, ensure_ascii=False) + "\n")

    hyps = [it["hyp"] for it in items]
    refs = [[it["ref"] for it in items]]
    chrf = CHRF(word_order=2)
    scores = {
        "sacrebleu_version": sacrebleu.__version__,
        "chrf_pp": chrf.corpus_score(hyps, refs).score,
        "chrf_pp_signature": str(chrf.get_signature()),
        "sentence_chrf_pp": [chrf.sentence_score(h, [r]).score for h, r in zip(hyps, refs[0])],
        "bleu_13a": BLEU().corpus_score(hyps, refs).score,
        "bleu_intl": BLEU(tokenize="intl").corpus_score(hyps, refs).score,
        "ter_default": TER().corpus_score(hyps, refs).score,
        "ter_case_sensitive": TER(case_sensitive=True).corpus_score(hyps, refs).score,
        "sentence_ter_default": [TER().sentence_score(h, [r]).score for h, r in zip(hyps, refs[0])],
    }
    with open("data/golden/sacrebleu_scores.json", "w", encoding="utf-8") as f:
        json.dump(scores, f, ensure_ascii=False, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
