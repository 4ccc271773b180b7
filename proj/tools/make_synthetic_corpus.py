#!/usr/bin/env python3
"""Regenerates tests/data/synthetic_corpus.csv.

2000 rows of (password, year, gender): passwords are a common word with a
birth year 1917..1995 appended, years drawn from a bell-shaped table
centered on 1980, genders assigned uniformly and independently of the
password. The RNG is a self-contained xorshift64* so the file is
byte-stable across Python versions.
"""

import os

WORDS = [
    "dragon", "princess", "shadow", "monkey", "sunshine", "football",
    "superman", "batman", "killer", "charlie", "jordan", "tigger",
    "jessica", "ashley", "daniel", "michael", "soccer", "purple",
    "summer", "angela", "ginger", "pepper", "mustang", "maggie",
    "sparky", "liverpool", "chelsea", "butterfly", "diamond", "cookie",
    "banana", "flower", "rocket", "silver", "golden", "winter",
    "autumn", "orange", "smokey", "buddy",
]

YEARS = list(range(1917, 1996))


class XorShift:
    def __init__(self, seed):
        self.state = seed & 0xFFFFFFFFFFFFFFFF

    def next(self):
        x = self.state
        x ^= (x >> 12) & 0xFFFFFFFFFFFFFFFF
        x ^= (x << 25) & 0xFFFFFFFFFFFFFFFF
        x ^= (x >> 27) & 0xFFFFFFFFFFFFFFFF
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & 0xFFFFFFFFFFFFFFFF

    def below(self, n):
        return self.next() % n


def weighted_tables():
    # Zipf-ish word weights, bell-shaped year weights (integer tables so
    # sampling is exact modular arithmetic).
    word_weights = [1000 // (k + 2) for k in range(len(WORDS))]
    year_weights = []
    for y in YEARS:
        d = abs(y - 1980)
        year_weights.append(max(1, 120 - d * d // 2))
    return word_weights, year_weights


def pick(rng, weights):
    total = sum(weights)
    target = rng.below(total)
    running = 0
    for index, w in enumerate(weights):
        running += w
        if target < running:
            return index
    return len(weights) - 1


def main():
    rng = XorShift(0x5EEDBEEF2024)
    word_weights, year_weights = weighted_tables()
    out_path = os.path.join(os.path.dirname(__file__), "..", "tests", "data",
                            "synthetic_corpus.csv")
    out_path = os.path.normpath(out_path)
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    with open(out_path, "w", newline="") as out:
        out.write("password,year,gender\n")
        for _ in range(2000):
            word = WORDS[pick(rng, word_weights)]
            year = YEARS[pick(rng, year_weights)]
            gender = "f" if rng.below(2) else "m"
            out.write(f"{word}{year},{year},{gender}\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
