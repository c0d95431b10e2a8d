#!/usr/bin/env python3
"""Write the bundled 200-review fixture corpus (JSON lines) to stdout.

Reviews mix planted explanation phrases (which recur across reviews with
case and punctuation changes), first-person sentences the filter must drop,
and one-off sentences that never form a group. Output is deterministic.
"""
import json
import random

PLANTED = [
    "The acting is superb",
    "The cast is first rate",
    "Great story and acting",
    "This is a wonderful movie",
    "Excellent movie",
    "The sound is okay",
    "The special effects are amazing",
    "The plot is predictable",
    "A wonderful movie for all ages",
    "Beautiful cinematography",
    "The dialogue is clever",
    "The ending was disappointing",
]

PERSONAL = [
    "I loved this film",
    "My kids watched it twice",
    "We saw it in the theater",
    "You will not regret it",
    "She cried at the end",
    "I bought it for my husband",
]

ADJ = ["strange", "quiet", "bright", "heavy", "gentle", "rough", "odd", "slow", "sharp", "pale"]
NOUN = ["harbor", "lantern", "garden", "engine", "violin", "canyon", "ladder", "meadow",
        "pillow", "window", "bridge", "castle", "forest", "mirror", "rocket"]


def one_off(rng, k):
    a, b = rng.sample(ADJ, 2)
    n1, n2 = rng.sample(NOUN, 2)
    return f"The {a} {n1} near the {b} {n2} in scene {k}"


def decorate(rng, phrase):
    variant = rng.choice([phrase, phrase.lower(), phrase.upper(), phrase + "!", phrase + "!!"])
    if not variant.endswith("!"):
        variant += "."
    return variant


def main():
    rng = random.Random(20211)
    users = [f"U{n:03d}" for n in range(40)]
    items = [f"M{n:03d}" for n in range(25)]
    weights = [14, 12, 11, 10, 10, 9, 8, 7, 7, 3, 2, 2]
    pairs = set()
    serial = 0
    out = []
    while len(out) < 200:
        user, item = rng.choice(users), rng.choice(items)
        if (user, item) in pairs:
            continue
        pairs.add((user, item))
        parts = []
        for _ in range(rng.choice([0, 1, 1, 2])):
            parts.append(decorate(rng, rng.choices(PLANTED, weights)[0]))
        if rng.random() < 0.5:
            parts.append(rng.choice(PERSONAL) + ".")
        serial += 1
        parts.append(one_off(rng, serial) + ".")
        rng.shuffle(parts)
        record = {
            "user": user,
            "item": item,
            "rating": rng.randint(1, 5),
            "timestamp": 1400000000 + 86400 * rng.randint(0, 2000),
            "text": " ".join(parts),
        }
        if rng.random() < 0.3:
            record["title"] = decorate(rng, rng.choices(PLANTED, weights)[0])
        out.append(record)
    for record in out:
        print(json.dumps(record, ensure_ascii=False))


if __name__ == "__main__":
    main()
