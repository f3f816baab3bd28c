"""JSON model files.

A model file is the reviewable form of a trained classifier: the word set of
every class plus its partition count table, keyed by bit string::

    {
      "format_version": 1,
      "normalization": "lower-az-collapse/bounded-v1",
      "classes": ["earn", "acq"],
      "models": [
        {"label": "earn", "patterns": [" cts", " net "],
         "partitions": {"00": {"in_count": 424, "out_count": 3514}, ...},
         "provenance": {...}},
        ...
      ],
      "provenance": {...}
    }

Serialization is deterministic, so loading and re-saving a file reproduces it
byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

from .classifier import MultiClassModel
from .evidence import ClassFrame
from .partition import ClassModel, PartitionStats, WordSet, format_bits, parse_bits
from .textkit import MAX_PATTERN_LEN, NORMALIZATION_ID

__all__ = ["FORMAT_VERSION", "ModelFileError", "to_dict", "from_dict", "dumps", "loads", "save", "load"]

FORMAT_VERSION = 1


class ModelFileError(ValueError):
    pass


def to_dict(model: MultiClassModel) -> dict:
    models = []
    for cm, prov in zip(model.models, model.class_provenance):
        width = len(cm.word_set)
        models.append(
            {
                "label": cm.label,
                "patterns": list(cm.word_set.patterns),
                "partitions": {
                    format_bits(k, width): {"in_count": s.in_count, "out_count": s.out_count}
                    for k, s in sorted(cm.table.items())
                },
                "provenance": prov,
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "normalization": NORMALIZATION_ID,
        "classes": list(model.labels),
        "models": models,
        "provenance": model.provenance,
    }


def from_dict(data: dict) -> MultiClassModel:
    try:
        version = data["format_version"]
        if version != FORMAT_VERSION:
            raise ModelFileError(f"unsupported model format version {version}")
        if data["normalization"] != NORMALIZATION_ID:
            raise ModelFileError(
                f"model uses normalization {data['normalization']!r}, expected {NORMALIZATION_ID!r}"
            )
        frame = ClassFrame(tuple(data["classes"]))
        models = []
        provs = []
        for entry in data["models"]:
            patterns = tuple(entry["patterns"])
            ws = WordSet(patterns, max(len(patterns), 1), MAX_PATTERN_LEN)
            table = {}
            for bits, counts in entry["partitions"].items():
                if len(bits) != len(patterns):
                    raise ModelFileError(
                        f"class {entry['label']!r}: partition {bits!r} does not match {len(patterns)} patterns"
                    )
                table[parse_bits(bits)] = PartitionStats(int(counts["in_count"]), int(counts["out_count"]))
            models.append(ClassModel(entry["label"], ws, table))
            provs.append(entry.get("provenance", {}))
        return MultiClassModel(frame, tuple(models), data.get("provenance", {}), tuple(provs))
    except ModelFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"malformed model file: {exc}") from exc


def dumps(model: MultiClassModel) -> str:
    return json.dumps(to_dict(model), indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> MultiClassModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"model file is not valid JSON: {exc}") from exc
    return from_dict(data)


def save(model: MultiClassModel, path: str | Path) -> None:
    Path(path).write_text(dumps(model), encoding="utf-8")


def load(path: str | Path) -> MultiClassModel:
    return loads(Path(path).read_text(encoding="utf-8"))
