"""JSON automaton files.

Weights and the discount factor are stored as ``{"num": int, "den": int}`` so
that no value ever passes through a float.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .core import INF, Automaton, DSAError

FORMAT_VERSION = 1


class FormatError(DSAError):
    pass


def rational_to_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def rational_from_json(obj: Any, where: str) -> Fraction:
    if not isinstance(obj, dict) or set(obj) != {"num", "den"}:
        raise FormatError(f"{where}: expected {{num, den}}, got {obj!r}")
    num, den = obj["num"], obj["den"]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (num, den)):
        raise FormatError(f"{where}: num and den must be integers")
    if den == 0:
        raise FormatError(f"{where}: zero denominator")
    return Fraction(num, den)


def gap_to_json(g) -> str:
    return "inf" if g == INF else str(g)


def to_dict(a: Automaton, metadata: Optional[dict] = None) -> dict:
    out = {
        "version": FORMAT_VERSION,
        "discount_factor": rational_to_json(a.lam.value),
        "alphabet": list(a.alphabet),
        "states": list(a.states),
        "initial": a.states[a.initial],
        "transitions": [
            {
                "from": a.states[t.src],
                "symbol": a.alphabet[t.symbol],
                "to": a.states[t.dst],
                "weight": rational_to_json(t.weight),
            }
            for t in a.transitions
        ],
    }
    if metadata:
        out["metadata"] = metadata
    return out


def _string_list(obj, key) -> list[str]:
    v = obj.get(key)
    if not isinstance(v, list) or not all(isinstance(s, str) for s in v):
        raise FormatError(f"{key}: expected a list of strings")
    return v


def from_dict(obj: Any) -> Automaton:
    if not isinstance(obj, dict):
        raise FormatError("automaton file must hold a JSON object")
    version = obj.get("version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version!r}")
    missing = {"discount_factor", "alphabet", "states", "initial", "transitions"} - set(obj)
    if missing:
        raise FormatError(f"missing fields: {', '.join(sorted(missing))}")
    lam = rational_from_json(obj["discount_factor"], "discount_factor")
    alphabet = _string_list(obj, "alphabet")
    states = _string_list(obj, "states")
    if not isinstance(obj["initial"], str):
        raise FormatError("initial: expected a state name")
    if not isinstance(obj["transitions"], list):
        raise FormatError("transitions: expected a list")
    ts = []
    for i, t in enumerate(obj["transitions"]):
        if not isinstance(t, dict) or set(t) != {"from", "symbol", "to", "weight"}:
            raise FormatError(f"transitions[{i}]: expected fields from, symbol, to, weight")
        ts.append((t["from"], t["symbol"], t["to"], rational_from_json(t["weight"], f"transitions[{i}].weight")))
    return Automaton.build(alphabet, states, obj["initial"], ts, lam)


def dumps(a: Automaton, metadata: Optional[dict] = None) -> str:
    return json.dumps(to_dict(a, metadata), indent=2) + "\n"


def loads(text: str) -> Automaton:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not valid JSON: {e}") from None
    return from_dict(obj)


def load(path: Union[str, Path]) -> Automaton:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(a: Automaton, path: Union[str, Path], metadata: Optional[dict] = None):
    Path(path).write_text(dumps(a, metadata), encoding="utf-8")
