"""Corpus readers: Reuters-21578 SGML (ModApte, single label) and a TSV format.

Simple format, one record per line, UTF-8::

    <split>\\t<label>\\t<id>\\t<body>

``split`` is ``train`` or ``test``. Inside ``body`` a tab, newline or backslash
is written as ``\\t``, ``\\n`` or ``\\\\``. Blank lines are ignored.
"""

from __future__ import annotations

import html
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

__all__ = [
    "LabeledDocument",
    "CorpusSummary",
    "CorpusError",
    "CorpusFormatError",
    "ReutersParseError",
    "NO_TOPIC_LABEL",
    "load_reuters",
    "parse_reuters_sgml",
    "load_simple",
    "parse_simple",
    "dump_simple",
    "format_simple",
    "toy_corpus",
]

NO_TOPIC_LABEL = "__none__"
SPLITS = ("train", "test")


class CorpusError(Exception):
    pass


class CorpusFormatError(CorpusError):
    def __init__(self, message: str, line: int, path: str | None = None):
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.path = path


class ReutersParseError(CorpusError):
    def __init__(self, message: str, path: str, offset: int):
        super().__init__(f"{path} @ offset {offset}: {message}")
        self.path = path
        self.offset = offset


@dataclass(frozen=True)
class LabeledDocument:
    id: str
    label: str
    split: str
    body: str


@dataclass
class CorpusSummary:
    parsed: int = 0
    kept: int = 0
    dropped: Counter = field(default_factory=Counter)
    per_class: dict[str, dict[str, int]] = field(default_factory=dict)
    empty_body: int = 0
    settings: dict = field(default_factory=dict)

    def add(self, doc: LabeledDocument) -> None:
        self.kept += 1
        counts = self.per_class.setdefault(doc.label, {s: 0 for s in SPLITS})
        counts[doc.split] += 1
        if not doc.body.strip():
            self.empty_body += 1

    def as_dict(self) -> dict:
        return {
            "parsed": self.parsed,
            "kept": self.kept,
            "dropped": dict(sorted(self.dropped.items())),
            "per_class": {k: dict(v) for k, v in sorted(self.per_class.items())},
            "empty_body": self.empty_body,
            "settings": dict(self.settings),
        }


# --- Reuters-21578 -------------------------------------------------------

_OPEN = re.compile(r"<REUTERS\b([^>]*)>")
_CLOSE = "</REUTERS>"
_ATTR = re.compile(r'([A-Za-z]+)\s*=\s*"([^"]*)"')
_TOPICS = re.compile(r"<TOPICS>(.*?)</TOPICS>", re.S)
_D = re.compile(r"<D>(.*?)</D>", re.S)
_TEXT = re.compile(r"<TEXT\b([^>]*)>(.*?)</TEXT>", re.S)
_TITLE = re.compile(r"<TITLE>(.*?)</TITLE>", re.S)
_BODY = re.compile(r"<BODY>(.*?)</BODY>", re.S)
_DATELINE = re.compile(r"<DATELINE>(.*?)</DATELINE>", re.S)
_TAG = re.compile(r"<[^>]*>")
_ENTITY = re.compile(r"&(#[0-9]+|#[xX][0-9a-fA-F]+|[A-Za-z][A-Za-z0-9]*);")


def _decode_entities(text: str) -> str:
    def repl(m: re.Match) -> str:
        decoded = html.unescape(m.group(0))
        return " " if decoded == m.group(0) else decoded

    return _ENTITY.sub(repl, text)


def _field(pattern: re.Pattern, text: str) -> str:
    m = pattern.search(text)
    return m.group(1) if m else ""


def parse_reuters_sgml(
    text: str,
    path: str = "<string>",
    *,
    modapte_strict: bool = True,
    zero_topic: str = "drop",
    include_dateline: bool = False,
    summary: CorpusSummary | None = None,
) -> list[LabeledDocument]:
    """Parse the ``<REUTERS>`` records of one SGML file.

    Kept: LEWISSPLIT TRAIN or TEST (and TOPICS="YES" when ``modapte_strict``)
    with exactly one ``<D>`` topic. ``zero_topic="negative"`` keeps topic-less
    documents under :data:`NO_TOPIC_LABEL` instead of dropping them.
    """
    if zero_topic not in ("drop", "negative"):
        raise ValueError(f"zero_topic must be 'drop' or 'negative', got {zero_topic!r}")
    summary = summary if summary is not None else CorpusSummary()
    docs = []
    pos = 0
    while True:
        m = _OPEN.search(text, pos)
        if m is None:
            if _CLOSE in text[pos:]:
                raise ReutersParseError("closing </REUTERS> without opening tag", path, text.index(_CLOSE, pos))
            break
        end = text.find(_CLOSE, m.end())
        nxt = _OPEN.search(text, m.end())
        if end < 0 or (nxt is not None and nxt.start() < end):
            raise ReutersParseError("<REUTERS> record is not closed", path, m.start())
        stray = text.find(_CLOSE, pos, m.start())
        if stray >= 0:
            raise ReutersParseError("closing </REUTERS> without opening tag", path, stray)
        attrs = dict(_ATTR.findall(m.group(1)))
        inner = text[m.end() : end]
        pos = end + len(_CLOSE)
        summary.parsed += 1

        if "NEWID" not in attrs or "LEWISSPLIT" not in attrs:
            raise ReutersParseError("record lacks NEWID or LEWISSPLIT", path, m.start())
        split = attrs["LEWISSPLIT"].lower()
        if split not in SPLITS:
            summary.dropped["unused_split"] += 1
            continue
        if modapte_strict and attrs.get("TOPICS", "").upper() != "YES":
            summary.dropped["topics_attr_no"] += 1
            continue
        topics = [t.strip() for t in _D.findall(_field(_TOPICS, inner))]
        if len(topics) > 1:
            summary.dropped["multi_label"] += 1
            continue
        if not topics:
            if zero_topic == "drop":
                summary.dropped["zero_topic"] += 1
                continue
            label = NO_TOPIC_LABEL
        else:
            label = topics[0]

        text_m = _TEXT.search(inner)
        parts = []
        if text_m is not None:
            tattrs, tbody = dict(_ATTR.findall(text_m.group(1))), text_m.group(2)
            parts.append(_field(_TITLE, tbody))
            if include_dateline:
                parts.append(_field(_DATELINE, tbody))
            body_m = _BODY.search(tbody)
            if body_m is not None:
                parts.append(body_m.group(1))
            elif tattrs.get("TYPE", "").upper() == "UNPROC":
                # unprocessed stories carry their text directly inside <TEXT>
                parts.append(_TAG.sub(" ", tbody))
        body = _decode_entities(" ".join(p for p in parts if p))
        doc = LabeledDocument(attrs["NEWID"], label, split, body)
        summary.add(doc)
        docs.append(doc)
    return docs


def load_reuters(
    path: str | Path,
    *,
    modapte_strict: bool = True,
    zero_topic: str = "drop",
    include_dateline: bool = False,
) -> tuple[list[LabeledDocument], CorpusSummary]:
    """Read every ``reut2-*.sgm`` file in a Reuters-21578 directory, in name order."""
    root = Path(path)
    if not root.is_dir():
        raise FileNotFoundError(f"Reuters directory not found: {root}")
    files = sorted(root.glob("reut2-*.sgm"))
    if not files:
        raise CorpusError(f"no reut2-*.sgm files in {root}")
    summary = CorpusSummary(
        settings={
            "modapte_strict": modapte_strict,
            "zero_topic": zero_topic,
            "include_dateline": include_dateline,
            "body": "TITLE + BODY",
        }
    )
    docs: list[LabeledDocument] = []
    for f in files:
        text = f.read_bytes().decode("latin-1")
        docs.extend(
            parse_reuters_sgml(
                text,
                str(f),
                modapte_strict=modapte_strict,
                zero_topic=zero_topic,
                include_dateline=include_dateline,
                summary=summary,
            )
        )
    seen = set()
    for d in docs:
        if d.id in seen:
            raise CorpusError(f"duplicate NEWID {d.id}")
        seen.add(d.id)
    return docs, summary


# --- simple TSV format ---------------------------------------------------

_ESCAPES = {"t": "\t", "n": "\n", "\\": "\\"}


def _unescape(body: str, line: int, path: str | None) -> str:
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            if i + 1 >= len(body) or body[i + 1] not in _ESCAPES:
                raise CorpusFormatError(f"bad escape at column {i + 1}", line, path)
            out.append(_ESCAPES[body[i + 1]])
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _escape(body: str) -> str:
    return body.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def parse_simple(lines: Iterable[str], path: str | None = None) -> list[LabeledDocument]:
    docs = []
    seen: set[str] = set()
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        fields = line.split("\t", 3)
        if len(fields) != 4:
            raise CorpusFormatError(
                f"expected 4 tab-separated fields, got {len(fields)}", lineno, path
            )
        split, label, doc_id, body = fields
        if split not in SPLITS:
            raise CorpusFormatError(f"split must be train or test, got {split!r}", lineno, path)
        if not label:
            raise CorpusFormatError("empty label", lineno, path)
        if not doc_id:
            raise CorpusFormatError("empty id", lineno, path)
        if doc_id in seen:
            raise CorpusFormatError(f"duplicate id {doc_id!r}", lineno, path)
        seen.add(doc_id)
        docs.append(LabeledDocument(doc_id, label, split, _unescape(body, lineno, path)))
    return docs


def load_simple(path: str | Path) -> list[LabeledDocument]:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_simple(fh, str(path))


def format_simple(docs: Iterable[LabeledDocument]) -> str:
    return "".join(f"{d.split}\t{d.label}\t{d.id}\t{_escape(d.body)}\n" for d in docs)


def dump_simple(docs: Iterable[LabeledDocument], path: str | Path) -> None:
    Path(path).write_text(format_simple(docs), encoding="utf-8")


def toy_corpus() -> list[LabeledDocument]:
    """The thirteen labeled example documents (classes A and B)."""
    text = resources.files("partition_rules").joinpath("data/toy_corpus.tsv").read_text("utf-8")
    return parse_simple(text.splitlines(), "toy_corpus.tsv")
