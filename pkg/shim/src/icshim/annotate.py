"""Raw JSONL records to CoNLL-U document blocks.

One `# newdoc` block per input record, in input order. A record either
annotates completely or is skipped and reported; a block is never written
half-finished. Sharding splits the record list into contiguous chunks,
annotates them in parallel, and concatenates the chunk outputs in input
order, so the bytes written are independent of the shard count.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import PIPELINE_VERSION
from .deps import attach_heads
from .markup import strip_markup
from .segment import split_sentences, tokenize
from .sentiment import compound_score
from .tagger import tag_sentence

_META_SANITIZE = str.maketrans({"\t": " ", "\n": " ", "\r": " "})


class SchemaError(ValueError):
    """A record violates the raw JSONL schema."""


@dataclass
class RawRecord:
    id: str
    text: str
    community: str | None = None
    kind: str | None = None
    community_score: str | None = None
    ic: int | None = None


@dataclass
class AnnotationResult:
    blocks: list[str] = field(default_factory=list)
    skipped: list[tuple[str, str, str]] = field(default_factory=list)
    sentences: int = 0
    tokens: int = 0


def _schema_check(data: object, lineno: int, seen_ids: set[str]) -> RawRecord:
    if not isinstance(data, dict):
        raise SchemaError(f"line {lineno}: record is not a JSON object")
    rec_id = data.get("id")
    if isinstance(rec_id, bool) or not isinstance(rec_id, (str, int)):
        raise SchemaError(f"line {lineno}: missing or non-string id")
    rec_id = str(rec_id)
    if not rec_id:
        raise SchemaError(f"line {lineno}: empty id")
    if rec_id in seen_ids:
        raise SchemaError(f"line {lineno}: duplicate id {rec_id!r}")
    text = data.get("text")
    if not isinstance(text, str):
        raise SchemaError(f"line {lineno}: missing or non-string text")

    def opt_str(key):
        value = data.get(key)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (str, int, float)):
            raise SchemaError(f"line {lineno}: {key} must be a string or number")
        return str(value)

    ic = data.get("ic")
    if ic is not None:
        if isinstance(ic, bool) or not isinstance(ic, int) or not 1 <= ic <= 7:
            raise SchemaError(f"line {lineno}: ic must be an integer in 1..7")
    record = RawRecord(
        id=rec_id,
        text=text,
        community=opt_str("community"),
        kind=opt_str("kind"),
        community_score=opt_str("community_score"),
        ic=ic,
    )
    seen_ids.add(rec_id)
    return record


def read_raw_records(path: str) -> tuple[list[RawRecord], list[tuple[int, str]]]:
    """Parse a JSONL file; returns (records, per-line problems)."""
    records: list[RawRecord] = []
    problems: list[tuple[int, str]] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append((lineno, f"line {lineno}: invalid JSON ({exc.msg})"))
                continue
            try:
                records.append(_schema_check(data, lineno, seen_ids))
            except SchemaError as exc:
                problems.append((lineno, str(exc)))
    return records, problems


def annotate_record(record: RawRecord, valences: dict[str, float] | None = None) -> str:
    """Produce one complete CoNLL-U block (with trailing blank line)."""
    tagged_sentences = []
    for sentence in split_sentences(strip_markup(record.text)):
        tokens = tokenize(sentence)
        if tokens:
            tagged_sentences.append(tag_sentence(tokens))
    sentiment = compound_score(tagged_sentences, valences)

    meta = {"sentiment": f"{sentiment:.4f}"}
    if record.community is not None:
        meta["community"] = record.community.translate(_META_SANITIZE)
    if record.kind is not None:
        meta["kind"] = record.kind.translate(_META_SANITIZE)
    if record.community_score is not None:
        meta["community_score"] = record.community_score.translate(_META_SANITIZE)

    lines = [f"# newdoc id = {record.id.translate(_META_SANITIZE)}"]
    if record.ic is not None:
        lines.append(f"# ic = {record.ic}")
    for key in sorted(meta):
        lines.append(f"# meta.{key} = {meta[key]}")
    # a blank line closes each sentence; the last one also ends the block
    for tagged in tagged_sentences:
        heads = attach_heads([xpos for _, _, xpos in tagged])
        for idx, ((surface, lemma, xpos), (head, deprel)) in enumerate(
            zip(tagged, heads), start=1
        ):
            lines.append(
                f"{idx}\t{surface}\t{lemma}\t_\t{xpos}\t_\t{head}\t{deprel}\t_\t_"
            )
        lines.append("")
    if not tagged_sentences:
        lines.append("")
    return "\n".join(lines) + "\n"


def annotate_records(
    records: list[RawRecord], valences: dict[str, float] | None = None
) -> AnnotationResult:
    result = AnnotationResult()
    for record in records:
        try:
            block = annotate_record(record, valences)
        except Exception as exc:  # skip, never emit a partial block
            result.skipped.append((record.id, "annotation", str(exc)))
            continue
        result.blocks.append(block)
        body = [ln for ln in block.splitlines() if ln and not ln.startswith("#")]
        result.tokens += len(body)
        result.sentences += sum(1 for ln in body if ln.startswith("1\t"))
    return result


def _annotate_chunk(records: list[RawRecord]) -> AnnotationResult:
    return annotate_records(records)


def run_annotation(
    input_path: str,
    output_path: str,
    shards: int = 1,
    skip_list_path: str | None = None,
) -> dict:
    """Full file-to-file run; returns the sidecar summary dict."""
    records, problems = read_raw_records(input_path)
    if skip_list_path is None:
        skip_list_path = output_path + ".skipped"

    effective_shards = 1 if shards <= 1 else min(shards, max(1, len(records)))
    if effective_shards == 1:
        results = [annotate_records(records)]
    else:
        size, rem = divmod(len(records), effective_shards)
        chunks, start = [], 0
        for i in range(effective_shards):
            end = start + size + (1 if i < rem else 0)
            chunks.append(records[start:end])
            start = end
        with ProcessPoolExecutor(max_workers=effective_shards) as pool:
            results = list(pool.map(_annotate_chunk, chunks))

    skipped = [(f"line {lineno}", "schema", msg) for lineno, msg in problems]
    blocks: list[str] = []
    sentences = tokens = 0
    for part in results:
        blocks.extend(part.blocks)
        skipped.extend(part.skipped)
        sentences += part.sentences
        tokens += part.tokens

    with open(output_path, "w", encoding="utf-8") as fh:
        fh.write("".join(blocks))

    if skipped:
        with open(skip_list_path, "w", encoding="utf-8") as fh:
            for ref, stage, message in skipped:
                fh.write(f"{ref}\t{stage}\t{message}\n")
    elif os.path.exists(skip_list_path):
        os.remove(skip_list_path)

    summary = {
        "pipeline_version": PIPELINE_VERSION,
        "input": os.path.basename(input_path),
        "records": len(records) + len(problems),
        "annotated": len(blocks),
        "skipped": len(skipped),
        "schema_problems": [msg for _, msg in problems],
        "sentences": sentences,
        "tokens": tokens,
        "shards": effective_shards,
    }
    with open(output_path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary
