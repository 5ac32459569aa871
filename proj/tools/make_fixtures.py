#!/usr/bin/env python3
"""Regenerate the synthetic fixtures under data/fixture/.

Every word vector is mu + sum_d s_d * a_d + noise, with mu large and orthogonal
to the mutually orthogonal axes a_d. Survey means are read off the planted
coordinates, so embedding scores should track the surveys closely.

    python3 tools/make_fixtures.py [--out data/fixture]
"""

import argparse
import csv
import json
import math
from pathlib import Path

import numpy as np

DIM = 32
MU = 6.0

BINARY = ["Evaluation", "Potency", "Activity", "gender", "age", "extraversion", "agreeableness"]
RACE = ["White", "Black", "Asian"]            # White sits at the origin of its block
INSTITUTIONS = ["family", "politics", "religion"]  # family sits at the origin

POLES = {
    # dimension: (left words, right words); right is the high survey end
    "Evaluation": (["bad", "awful"], ["good", "nice"]),
    "Evaluation+": (["terrible", "horrible"], ["great", "pleasant"]),
    "Potency": (["powerless", "little"], ["powerful", "big"]),
    "Activity": (["slow", "quiet", "inactive"], ["fast", "noisy", "active"]),
    "gender": (["male"], ["female"]),
    "gender-prior": (["he", "him"], ["she", "her"]),
    "age": (["young"], ["old"]),
    "extraversion": (["introvert", "reserved"], ["extrovert", "outgoing"]),
    "agreeableness": (["rude", "harsh"], ["kind", "warm"]),
}
CATEGORY_WORDS = {
    "White": ["white", "caucasian"],
    "Black": ["black", "african"],
    "Asian": ["asian", "chinese"],
    "family": ["family", "home"],
    "politics": ["politics", "government"],
    "religion": ["religion", "church"],
}

IDENTITIES = [
    "mother", "father", "boy", "girl", "doctor", "nurse", "thug", "child", "teacher", "lawyer",
    "judge", "soldier", "priest", "banker", "farmer", "artist", "senator", "police officer", "grandmother",
    "grandfather", "bully", "hero", "coward", "athlete", "librarian", "engineer", "secretary", "ceo",
    "janitor", "baby", "teenager", "criminal", "pastor", "mayor", "chef", "student", "professor",
    "sister", "brother", "zookeeper",
]
OOV = {"zookeeper"}  # in the surveys, absent from the embeddings


def axes():
    index = {d: k for k, d in enumerate(BINARY)}
    index["Black"] = len(BINARY)
    index["Asian"] = len(BINARY) + 1
    index["politics"] = len(BINARY) + 2
    index["religion"] = len(BINARY) + 3
    basis = {}
    for name, k in index.items():
        v = np.zeros(DIM)
        v[k] = 1.0
        basis[name] = v
    basis["White"] = np.zeros(DIM)
    basis["family"] = np.zeros(DIM)
    return basis


def mu():
    v = np.zeros(DIM)
    v[DIM - 1] = MU
    return v


def planted(rng):
    """Planted coordinates in [-1, 1] per identity and axis."""
    coords = {}
    for ident in IDENTITIES:
        c = {d: rng.uniform(-1, 1) for d in BINARY}
        c["Black"] = rng.uniform(-1, 1)
        c["Asian"] = rng.uniform(-1, 1)
        c["politics"] = rng.uniform(-1, 1)
        c["religion"] = rng.uniform(-1, 1)
        coords[ident] = c
    return coords


def survey_means(coords, rng):
    """Survey means on [0, 1] derived from the planted coordinates."""
    means = {}
    for ident, c in coords.items():
        m = {d: (c[d] + 1) / 2 for d in BINARY}
        m["Black"] = (c["Black"] + 1) / 2
        m["Asian"] = (c["Asian"] + 1) / 2
        m["White"] = float(np.clip(1 - m["Black"] + rng.normal(0, 0.03), 0, 1))
        m["politics"] = (c["politics"] + 1) / 2
        m["religion"] = (c["religion"] + 1) / 2
        m["family"] = float(np.clip(1 - m["politics"] + rng.normal(0, 0.03), 0, 1))
        means[ident] = m
    return means


def embedding(rng, coords, noise, drop=()):
    basis = axes()
    base = mu()
    words = {}
    for ident, c in coords.items():
        if ident in OOV:
            continue
        v = base.copy()
        for name, value in c.items():
            v += value * basis[name]
        v += rng.normal(0, noise, DIM)
        words[ident.replace(" ", "_")] = v
    for dim, (left, right) in POLES.items():
        axis = basis[dim.split("+")[0].split("-")[0]]
        for w in left:
            words[w] = base - 1.5 * axis + rng.normal(0, 0.02, DIM)
        for w in right:
            words[w] = base + 1.5 * axis + rng.normal(0, 0.02, DIM)
    for cat, ws in CATEGORY_WORDS.items():
        for w in ws:
            words[w] = base + 1.5 * basis[cat] + rng.normal(0, 0.02, DIM)
    # Two words sharing one vector: a pole built from them has no direction.
    words["idle"] = base.copy()
    words["busy"] = base.copy()
    filler = ["the", "of", "and", "table", "river", "cloud", "paper", "window"]
    for w in filler:
        words[w] = base + rng.normal(0, 0.5, DIM)
    for w in drop:
        words.pop(w, None)
    return words


def write_embedding(path, words, header):
    with open(path, "w") as f:
        if header:
            f.write(f"{len(words)} {DIM}\n")
        for w, v in words.items():
            f.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")


def dimension_specs(degenerate=False):
    def pairs(dim):
        left, right = POLES[dim]
        return {"left": left, "right": right}

    dims = [
        {"name": "Evaluation", "source": "survey-matched", **pairs("Evaluation")},
        {"name": "Evaluation", "source": "survey-augmented",
         "note": "best-effort thesaurus extension; not the original wordset",
         "left": POLES["Evaluation"][0] + POLES["Evaluation+"][0],
         "right": POLES["Evaluation"][1] + POLES["Evaluation+"][1]},
        {"name": "Potency", "source": "survey-matched", **pairs("Potency")},
        {"name": "Activity", "source": "survey-matched", **pairs("Activity")},
        {"name": "gender", "source": "survey-matched", **pairs("gender")},
        {"name": "gender", "source": "prior-work", "pairs": [["he", "she"], ["him", "her"]]},
        {"name": "age", "source": "survey-matched", **pairs("age")},
        {"name": "extraversion", "source": "survey-matched", **pairs("extraversion")},
        {"name": "agreeableness", "source": "survey-matched", **pairs("agreeableness")},
        {"name": "race", "source": "survey-matched",
         "multiclass": {"default": "White", "contrast": "Black",
                        "categories": [{"name": c, "words": CATEGORY_WORDS[c]} for c in RACE]}},
        {"name": "institutions", "source": "survey-matched",
         "multiclass": {"default": "family", "contrast": "politics",
                        "categories": [{"name": c, "words": CATEGORY_WORDS[c]} for c in INSTITUTIONS]}},
    ]
    if degenerate:
        for d in dims:
            if d["name"] == "Potency":
                d["left"], d["right"] = ["idle"], ["busy"]
    return {"dimensions": dims}


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def this_paper_survey(means, rng):
    rows = []
    for ident in IDENTITIES:
        freq = round(rng.uniform(2, 7), 4)
        syn = int(rng.integers(1, 9))
        for dim in BINARY[:5] + RACE + INSTITUTIONS:
            sd = round(rng.uniform(0.08, 0.25), 4)
            rows.append([ident, dim, f"{means[ident][dim]:.6f}", sd, 15, freq, syn])
    return rows


def standardized(means, dims, identities):
    x = np.array([[means[i][d] for d in dims] for i in identities])
    return (x - x.mean(axis=0)) / x.std(axis=0, ddof=1)


def labeling_rows(means, rng, questions):
    """Selection driven by Evaluation distance only: IsA favours close answers,
    SeenWith favours distant ones."""
    dims = sorted(BINARY[:5] + RACE + INSTITUTIONS)
    x = standardized(means, dims, IDENTITIES)
    e = dims.index("Evaluation")
    rows = []
    qid = 0
    for qtype, beta in (("IsA", -3.0), ("SeenWith", 2.0)):
        for _ in range(questions):
            qid += 1
            picks = rng.choice(len(IDENTITIES), 5, replace=False)
            q, answers = picks[0], picks[1:]
            if rng.uniform() < 0.05:
                sel = "all are equally unlikely"
            else:
                logits = np.array([beta * abs(x[q, e] - x[a, e]) for a in answers])
                p = np.exp(logits - logits.max())
                p /= p.sum()
                sel = IDENTITIES[answers[rng.choice(4, p=p)]]
            rows.append([qid, qtype, IDENTITIES[q]] + [IDENTITIES[a] for a in answers] + [sel])
    return rows


CONFIG = """\
// Fixture run configuration. Paths are relative to this file.
{
  // Embeddings: name, path, format (auto | word2vec | glove).
  "embeddings": [
    {"name": "planted-a", "path": "planted_a.txt", "format": "word2vec"},
    {"name": "planted-b", "path": "planted_b.txt", "format": "glove"}
  ],
  "dimensions": "%(dimensions)s",
  // Identities to score; omit to use every identity in the surveys.
  "identities": "identities.txt",
  "surveys": [
    {"name": "this-paper", "path": "survey_this_paper.csv", "schema": "this-paper"},
    {"name": "bolukbasi", "path": "survey_bolukbasi.csv", "schema": "bolukbasi"},
    {"name": "personality", "path": "survey_personality.csv", "schema": "personality-traits", "range": [1, 5]},
    {"name": "epa", "path": "survey_epa.csv", "schema": "epa-dictionary"}
  ],
  "labeling": "labeling.csv",
  "salience_dataset": "this-paper",
  // Omitted measures default to all seven.
  "seed": 20240101,
  "sign_align": true,
  "ridge": 1e-6,
  "bootstrap_resamples": 200,
  "bootstrap_level": 0.95,
  "jobs": 1,
  "output_dir": "%(out)s"
}
"""


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "fixture"))
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rng = np.random.default_rng(20240101)
    coords = planted(rng)
    means = survey_means(coords, rng)

    write_embedding(out / "planted_a.txt", embedding(rng, coords, 0.04), header=True)
    write_embedding(out / "planted_b.txt", embedding(rng, coords, 0.06, drop=("nice",)), header=False)

    for name, spec in (("dimensions.json", dimension_specs()),
                       ("dimensions_degenerate.json", dimension_specs(degenerate=True))):
        (out / name).write_text(json.dumps(spec, indent=2) + "\n")

    (out / "identities.txt").write_text("# identities scored by the fixture runs\n" +
                                        "\n".join(IDENTITIES) + "\n")

    write_csv(out / "survey_this_paper.csv",
              ["identity", "dimension", "mean", "sd", "n", "log_frequency", "synsets"],
              this_paper_survey(means, rng))
    write_csv(out / "survey_bolukbasi.csv", ["identity", "mean"],
              [[i, f"{2 * means[i]['gender'] - 1:.6f}"] for i in IDENTITIES[:32]])
    write_csv(out / "survey_personality.csv", ["identity", "dimension", "mean", "sd", "n"],
              [[i, d, f"{1 + 4 * means[i][d]:.6f}", round(rng.uniform(0.4, 1.0), 4), 20]
               for i in IDENTITIES[5:35] for d in ("extraversion", "agreeableness")])
    write_csv(out / "survey_epa.csv", ["identity", "dimension", "mean", "sd", "n"],
              [[i, d, f"{-4.3 + 8.6 * means[i][d]:.6f}", round(rng.uniform(0.8, 2.0), 4), 30]
               for i in IDENTITIES for d in ("Evaluation", "Potency", "Activity")])
    write_csv(out / "labeling.csv",
              ["question_id", "type", "question_identity", "answer_1", "answer_2", "answer_3", "answer_4",
               "selected"],
              labeling_rows(means, rng, 700))

    (out / "config.jsonc").write_text(CONFIG % {"dimensions": "dimensions.json", "out": "out"})
    (out / "degenerate.jsonc").write_text(
        "// Same fixture, with Potency induced by two words that share one vector.\n" +
        CONFIG % {"dimensions": "dimensions_degenerate.json", "out": "out-degenerate"})


if __name__ == "__main__":
    main()
