#!/usr/bin/env python3
"""Regenerate the synthetic aviation-style JSONL fixtures.

    python3 fixtures/generate_fixtures.py

Output is fully determined by the seeds below.
"""
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent

THEMES = {
    "powerplant": [
        "engine", "fuel", "power", "carburetor", "cylinder", "pump", "tank", "mixture",
        "magneto", "crankshaft", "exhaust", "throttle", "selector", "starvation", "oil",
        "piston", "ignition", "detonation",
    ],
    "landing": [
        "runway", "landing", "touchdown", "flare", "bounce", "gear", "brakes", "crosswind",
        "taxiway", "overrun", "threshold", "centerline", "ground", "veered", "tailwheel",
        "rollout", "approach", "pavement",
    ],
    "weather": [
        "weather", "visibility", "clouds", "icing", "instrument", "forecast", "fog",
        "ceiling", "thunderstorm", "turbulence", "briefing", "meteorological", "rain",
        "disorientation", "spatial", "overcast", "precipitation", "front",
    ],
    "rotorcraft": [
        "helicopter", "rotor", "tail", "hover", "autorotation", "collective", "cyclic",
        "skid", "blade", "gearbox", "transmission", "pedal", "yaw", "hovering",
        "mast", "swashplate", "torque", "sling",
    ],
}

COMMON = [
    "airplane", "pilot", "flight", "aircraft", "reported", "airport", "accident",
    "damage", "substantial", "minutes", "feet", "time", "left", "right", "stated",
]

FILLER = [
    "the", "and", "of", "to", "a", "was", "in", "that", "he", "it", "on", "with",
    "his", "for", "at", "after", "during", "which", "then", "about", "from", "not",
]


def sentence(rng, theme_words, weights, length):
    words = []
    for _ in range(length):
        r = rng.random()
        if r < 0.45:
            words.append(rng.choices(theme_words, weights)[0])
        elif r < 0.70:
            words.append(rng.choice(COMMON))
        else:
            words.append(rng.choice(FILLER))
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def narrative(rng, themes, n_tokens):
    pool = [w for t in themes for w in THEMES[t]]
    weights = [1.0 / (1 + i % len(THEMES[themes[0]])) for i in range(len(pool))]
    out, left = [], n_tokens
    while left > 0:
        k = min(left, rng.randint(8, 14))
        out.append(sentence(rng, pool, weights, k))
        left -= k
    return " ".join(out)


def make_corpus(n_docs, seed, mixed_fraction):
    rng = random.Random(seed)
    names = sorted(THEMES)
    docs = []
    for i in range(n_docs):
        primary = names[i % len(names)]
        themes = [primary]
        if rng.random() < mixed_fraction:
            themes.append(rng.choice([t for t in names if t != primary]))
        docs.append({
            "id": f"SYN{seed:02d}-{i:04d}",
            "narrative": narrative(rng, themes, rng.randint(40, 160)),
            "event_date": f"20{10 + i % 14:02d}-{1 + i % 12:02d}-{1 + i % 28:02d}",
            "operation_type": "Part 91: General aviation",
            "theme": "+".join(themes),
        })
    rng.shuffle(docs)
    return docs


def write_jsonl(path, docs):
    with open(path, "w", encoding="utf-8") as f:
        for d in docs:
            f.write(json.dumps(d, sort_keys=True) + "\n")


def main():
    write_jsonl(HERE / "synthetic_500.jsonl", make_corpus(500, 11, 0.0))
    write_jsonl(HERE / "mini.jsonl", make_corpus(80, 7, 0.0))
    with open(HERE / "three_docs.jsonl", "w", encoding="utf-8") as f:
        f.write('{"id":"a1","narrative":"engine lost power on climb"}\n')
        f.write('{"id":"a2","summary":"no narrative field on this line"}\n')
        f.write('{"id":"a3","narrative":"runway excursion during crosswind landing"}\n')


if __name__ == "__main__":
    main()
