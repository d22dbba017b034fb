"""Reading and writing cryptosystem spec files (JSON).

Layout::

    {"messages": [{"label": "0", "prior": "9/10"}, ...],
     "keys": [{"label": "0", "prob": "1/2"}, ...],
     "ciphertexts": ["0", "1"],
     "table": {"<key>": {"<message>": "<ciphertext>", ...}, ...}}

Unknown fields anywhere are rejected.  Errors carry a field path such as
``messages[1].prior`` (or a line/column for JSON syntax errors).
"""

from __future__ import annotations

import json
from pathlib import Path

from .cryptosystem import FiniteCryptosystem, system_to_json
from .errors import SecrecyLabError, SpecError
from .probability import Dist, parse_prob

_TOP_FIELDS = {"messages", "keys", "ciphertexts", "table"}


def _expect(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise SpecError(where, msg)


def _entries(doc: dict, name: str, prob_field: str) -> list[tuple[str, object]]:
    items = doc[name]
    _expect(isinstance(items, list) and items, name, "must be a non-empty list")
    out = []
    for i, item in enumerate(items):
        where = f"{name}[{i}]"
        _expect(isinstance(item, dict), where, "must be an object")
        extra = set(item) - {"label", prob_field}
        _expect(not extra, where, f"unknown field(s) {sorted(extra)}")
        for f in ("label", prob_field):
            _expect(f in item, where, f"missing field {f!r}")
        _expect(isinstance(item["label"], str), f"{where}.label", "must be a string")
        try:
            p = parse_prob(item[prob_field])
        except ValueError as exc:
            raise SpecError(f"{where}.{prob_field}", str(exc)) from None
        out.append((item["label"], p))
    return out


def _dist(entries, where: str) -> Dist:
    try:
        return Dist(entries)
    except SecrecyLabError as exc:
        raise SpecError(where, str(exc)) from None


def system_from_json(doc: object) -> FiniteCryptosystem:
    _expect(isinstance(doc, dict), "<root>", "must be a JSON object")
    extra = set(doc) - _TOP_FIELDS
    _expect(not extra, "<root>", f"unknown field(s) {sorted(extra)}")
    missing = _TOP_FIELDS - set(doc)
    _expect(not missing, "<root>", f"missing field(s) {sorted(missing)}")

    messages = _entries(doc, "messages", "prior")
    keys = _entries(doc, "keys", "prob")

    ciphers = doc["ciphertexts"]
    _expect(
        isinstance(ciphers, list) and ciphers and all(isinstance(c, str) for c in ciphers),
        "ciphertexts",
        "must be a non-empty list of strings",
    )

    raw_table = doc["table"]
    _expect(isinstance(raw_table, dict), "table", "must be an object keyed by key label")
    table = {}
    for k, row in raw_table.items():
        _expect(isinstance(row, dict), f"table.{k}", "must be an object keyed by message label")
        for m, c in row.items():
            _expect(isinstance(c, str), f"table.{k}.{m}", "ciphertext label must be a string")
            table[(k, m)] = c

    return FiniteCryptosystem(
        messages=[m for m, _ in messages],
        keys=[k for k, _ in keys],
        ciphertexts=ciphers,
        table=table,
        key_dist=_dist(keys, "keys"),
        prior=_dist(messages, "messages"),
    )


def loads(text: str) -> FiniteCryptosystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return system_from_json(doc)


def load(path: str | Path) -> FiniteCryptosystem:
    return loads(Path(path).read_text(encoding="utf-8"))


def dumps(sys: FiniteCryptosystem) -> str:
    return json.dumps(system_to_json(sys), indent=2) + "\n"
