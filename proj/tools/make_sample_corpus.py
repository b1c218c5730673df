#!/usr/bin/env python3
"""Builds the bundled 1,000-pair sample corpus from a small bilingual lexicon.

Segments are assembled word by word, so they are parallel but not fluent.
The category mix follows the domain distribution of the full corpus.
Run from the repository root: python3 tools/make_sample_corpus.py
"""
import json
import random

LEXICON = [
    ("салом", "سلام"), ("дар", "در"), ("ва", "و"), ("мардум", "مردم"),
    ("китоб", "کتاب"), ("дӯст", "دوست"), ("шаҳр", "شهر"), ("хона", "خانه"),
    ("об", "آب"), ("нон", "نان"), ("дил", "دل"), ("ҷон", "جان"),
    ("гул", "گل"), ("бод", "باد"), ("шаб", "شب"), ("рӯз", "روز"),
    ("кор", "کار"), ("роҳ", "راه"), ("ишқ", "عشق"), ("ғам", "غم"),
    ("шодӣ", "شادی"), ("ҷаҳон", "جهان"), ("замин", "زمین"), ("осмон", "آسمان"),
    ("ситора", "ستاره"), ("моҳ", "ماه"), ("офтоб", "آفتاب"),
    ("дарё", "دریا"), ("кӯҳ", "کوه"), ("ватан", "وطن"), ("забон", "زبان"),
    ("сухан", "سخن"), ("шеър", "شعر"), ("шоир", "شاعر"), ("подшоҳ", "پادشاه"),
    ("паҳлавон", "پهلوان"), ("ҷанг", "جنگ"), ("сулҳ", "صلح"), ("давлат", "دولت"),
    ("вазир", "وزیر"), ("мамлакат", "مملکت"), ("хабар", "خبر"), ("рӯзнома", "روزنامه"),
    ("донишгоҳ", "دانشگاه"), ("мактаб", "مکتب"), ("муаллим", "معلم"), ("шогирд", "شاگرد"),
    ("хуб", "خوب"), ("бад", "بد"), ("калон", "کلان"), ("хурд", "خرد"),
    ("сафед", "سفید"), ("сиёҳ", "سیاه"), ("сабз", "سبز"), ("сурх", "سرخ"),
    ("бародар", "برادر"), ("хоҳар", "خواهر"), ("модар", "مادر"), ("падар", "پدر"),
    ("фарзанд", "فرزند"), ("одам", "آدم"), ("зан", "زن"), ("мард", "مرد"),
    ("чашм", "چشم"), ("даст", "دست"), ("сар", "سر"), ("по", "پا"),
    ("ман", "من"), ("ту", "تو"), ("ӯ", "او"), ("мо", "ما"),
    ("шумо", "شما"), ("онҳо", "آنها"), ("ин", "این"), ("он", "آن"),
    ("аз", "از"), ("бо", "با"), ("то", "تا"), ("бар", "بر"),
    ("ки", "که"), ("чӣ", "چه"), ("кӣ", "کی"), ("ҳам", "هم"),
    ("буд", "بود"), ("аст", "است"), ("шуд", "شد"), ("кард", "کرد"),
    ("гуфт", "گفت"), ("омад", "آمد"), ("рафт", "رفت"), ("дид", "دید"),
    ("меравад", "می‌رود"), ("мегӯяд", "می‌گوید"), ("медонад", "می‌داند"),
    ("менависад", "می‌نویسد"), ("тарҷума", "ترجمه"), ("ҳамкорӣ", "همکاری"),
    ("иқтисод", "اقتصاد"), ("фарҳанг", "فرهنگ"), ("таърих", "تاریخ"), ("ҷумҳурӣ", "جمهوری"),
    ("Тоҷикистон", "تاجیکستان"), ("Эрон", "ایران"), ("Душанбе", "دوشنبه"), ("Бухоро", "بخارا"),
    ("Самарқанд", "سمرقند"), ("Хуҷанд", "خجند"), ("Рӯдакӣ", "رودکی"), ("Фирдавсӣ", "فردوسی"),
    ("Ҳофиз", "حافظ"), ("Саъдӣ", "سعدی"), ("Мавлоно", "مولانا"), ("Рустам", "رستم"),
    ("Суҳроб", "سهراب"), ("Исмоил", "اسماعیل"), ("Сино", "سینا"), ("Хайём", "خیام"),
]
PLACES = {"Тоҷикистон", "Эрон", "Душанбе", "Бухоро", "Самарқанд", "Хуҷанд"}
PERSONS = {"Рӯдакӣ", "Фирдавсӣ", "Ҳофиз", "Саъдӣ", "Мавлоно", "Рустам", "Суҳроб", "Исмоил", "Сино", "Хайём"}
COMMON = [p for p in LEXICON if p[0] not in PLACES | PERSONS]
PLACE_PAIRS = [p for p in LEXICON if p[0] in PLACES]
PERSON_PAIRS = [p for p in LEXICON if p[0] in PERSONS]

SHARES = [
    ("poetry_parts", 472), ("masnavi", 119), ("unique_tajik_words", 116),
    ("shahnameh", 76), ("prose_parts", 73), ("paranames_per", 61),
    ("words", 44), ("paranames_loc", 29), ("dr", 3), ("jj", 3),
    ("paranames_org", 2), ("bbc", 2),
]


def phrase(rng, lo, hi, pool):
    k = rng.randint(lo, hi)
    words = [rng.choice(pool) for _ in range(k)]
    return " ".join(w[0] for w in words), " ".join(w[1] for w in words)


def make(rng, category):
    if category in ("poetry_parts", "masnavi", "shahnameh"):
        t, f = phrase(rng, 4, 9, COMMON + PERSON_PAIRS[:3])
        return t, f
    if category in ("prose_parts", "dr", "jj", "bbc"):
        t, f = phrase(rng, 6, 14, COMMON + PLACE_PAIRS)
        if rng.random() < 0.5:
            t, f = t + ".", f + "."
        return t, f
    if category == "paranames_per":
        return phrase(rng, 1, 2, PERSON_PAIRS)
    if category == "paranames_loc":
        return phrase(rng, 1, 3, PLACE_PAIRS)
    if category == "paranames_org":
        t, f = phrase(rng, 1, 2, PLACE_PAIRS)
        head = rng.choice([("Донишгоҳи", "دانشگاه"), ("Вазорати", "وزارت")])
        return head[0] + " " + t, head[1] + " " + f
    return phrase(rng, 1, 2, COMMON)


def main():
    rng = random.Random(20240601)
    rows = []
    seen = set()
    for category, count in SHARES:
        made = 0
        while made < count:
            t, f = make(rng, category)
            if (t, f) in seen:
                continue
            seen.add((t, f))
            rows.append({"tajik": t, "farsi": f, "category": category})
            made += 1
    rng.shuffle(rows)
    with open("data/sample_corpus.jsonl", "w", encoding="utf-8") as out:
        for row in rows:
            out.write(json.dumps(row, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
