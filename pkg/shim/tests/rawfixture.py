"""Deterministic raw-JSONL fixtures for the shim tests.

Index arithmetic instead of RNG: the fixture is part of the contract the
tests freeze, so it must be stable across runs and platforms.
"""

import json

COMMUNITIES = ("alpha", "beta", "gamma")

_PLAIN = (
    "I like turtles.",
    "This movie was great and I loved it!",
    "The team lost again. Everyone was sad.",
    "My brother can't come today; he's busy.",
    "It is 3.5 stars, nothing more.",
)
_LAYERED = (
    "However, one might consider both sides before judging.",
    "Perhaps a compromise can reconcile the two views, although it is hard.",
    "Some people disagree, but each position seems to depend on context.",
    "While the plan may fail, a mutual balance would account for both needs.",
    "The unity of these ideas matters more than either claim alone.",
)
_MARKUP = (
    "**Bold claim** with [a link](http://example.org/x) inside.",
    "> quoted reply that should vanish\nActual content stays here.",
    "Some `inline code` and &amp; entities, plus https://nowhere.test/y trailing.",
    "## Header line\nBody text under the header.",
    "Table | cells | here\n--- | --- | ---\nLeft | middle | right",
)


def record_text(i: int) -> str:
    if i == 42:
        return ""
    parts = [_PLAIN[i % 5]]
    if i % 2 == 0:
        parts.append(_LAYERED[(i // 2) % 5])
    if i % 4 == 1:
        parts.append(_MARKUP[(i // 4) % 5])
    return " ".join(parts)


def make_records(n: int = 100) -> list[dict]:
    records = []
    for i in range(n):
        rec = {
            "id": f"r{i:03d}",
            "community": COMMUNITIES[i % 3],
            "text": "the cat sleeps" if i == 0 else record_text(i),
        }
        if i % 5 != 4:
            rec["kind"] = "POST" if i % 2 == 0 else "COMMENT"
        if i % 7 != 6:
            rec["community_score"] = (i * 7) % 50 - 10
        if i % 2 == 0:
            rec["ic"] = i % 7 + 1
        records.append(rec)
    return records


def make_train_records(n: int = 35) -> list[dict]:
    """All-labeled records for training runs; bands cycle 1..7."""
    records = []
    for i in range(n):
        band = i % 7 + 1
        text = _PLAIN[i % 5] if band <= 3 else _LAYERED[i % 5]
        records.append(
            {
                "id": f"t{i:03d}",
                "community": COMMUNITIES[i % 3],
                "kind": "POST",
                "text": text,
                "ic": band,
            }
        )
    return records


def write_jsonl(path, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
