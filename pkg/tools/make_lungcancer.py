"""Write the bundled lung-cancer example network (LUCAS-style structure).

The structure is the textbook lung-cancer example; CPT values are
illustrative choices, not estimates from any published data.
"""
import json
import sys

T, F = 1, 0  # state index: 0 = False, 1 = True


def bern(p_true):
    return [1.0 - p_true, p_true]


NODES = [
    ("Anxiety", [], [bern(0.64)]),
    ("PeerPressure", [], [bern(0.33)]),
    ("Smoking", ["Anxiety", "PeerPressure"],
     [bern(0.43), bern(0.74), bern(0.86), bern(0.92)]),
    ("YellowFingers", ["Smoking"], [bern(0.23), bern(0.95)]),
    ("Genetics", [], [bern(0.16)]),
    ("LungCancer", ["Smoking", "Genetics"],
     [bern(0.23), bern(0.86), bern(0.83), bern(0.99)]),
    ("Allergy", [], [bern(0.33)]),
    ("Coughing", ["LungCancer", "Allergy"],
     [bern(0.13), bern(0.64), bern(0.76), bern(0.99)]),
    ("Fatigue", ["LungCancer", "Coughing"],
     [bern(0.35), bern(0.56), bern(0.80), bern(0.89)]),
    ("AttentionDisorder", ["Genetics"], [bern(0.28), bern(0.68)]),
    ("CarAccident", ["AttentionDisorder", "Fatigue"],
     [bern(0.22), bern(0.77), bern(0.78), bern(0.97)]),
    ("BornAnEvenDay", [], [bern(0.5)]),
]

doc = {"format": "unifsel/1", "name": "lungcancer",
       "nodes": [{"name": n, "cardinality": 2, "states": ["False", "True"], "parents": ps, "cpt": cpt}
                 for n, ps, cpt in NODES]}
out = sys.argv[1] if len(sys.argv) > 1 else "lungcancer.json"
with open(out, "w") as fh:
    json.dump(doc, fh, indent=1)
