#!/usr/bin/env python
# Loading an automaton from JSON and checking what the formulas need.

import json

from soficdyck import HKind, check_h_codeterminism, check_h_determinism, zeta_det_route, PreconditionError
from soficdyck.automaton import dumps, loads

doc = {
    "alphabet": {"call": ["a"], "return": ["b"], "internal": ["c"]},
    "states": ["1", "2"],
    "edges": [
        {"from": "1", "label": "a", "to": "1"},
        {"from": "1", "label": "b", "to": "1"},
        {"from": "1", "label": "c", "to": "2"},
        {"from": "2", "label": "c", "to": "2"},
        {"from": "2", "label": "b", "to": "1"},
    ],
    "matched": [[0, 1], [0, 4]],
}
a = loads(json.dumps(doc))
print(dumps(a), end="")

print(check_h_determinism(a, HKind.CStarMc, 6))
print(check_h_codeterminism(a, HKind.MrPlusC, 6))
try:
    print(zeta_det_route(a, cap=10))
except PreconditionError as exc:
    print("no zeta:", exc)

# b enters state 1 from both states, and so does c for state 2: relabel one of each
doc["alphabet"]["return"] = ["b", "d"]
doc["alphabet"]["internal"] = ["c", "e"]
doc["edges"][3]["label"] = "e"
doc["edges"][4]["label"] = "d"
a = loads(json.dumps(doc))
print(check_h_determinism(a, HKind.CStarMc, 6))
print(check_h_codeterminism(a, HKind.MrPlusC, 6))
print("zeta =", zeta_det_route(a, cap=10))
