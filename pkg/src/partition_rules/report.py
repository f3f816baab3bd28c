"""Plain-text rendering of models, audits and evaluations."""

from __future__ import annotations

from typing import Sequence

from .classifier import AuditRow, EvalReport, MultiClassModel


def _sig(x: float | None, digits: int = 3) -> str:
    if x is None:
        return "-"
    if x == 0:
        return "0"
    # '#' keeps significant trailing zeros: 0.0510, not 0.051
    return f"{x:#.{digits}g}".rstrip(".")


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def render_model(model: MultiClassModel) -> str:
    """Word sets followed by the partition count table of every class."""
    words = [(cm.label, ", ".join(repr(p) for p in cm.word_set.patterns)) for cm in model.models]
    counts = []
    for cm in model.models:
        for k, s in cm.table.items():
            counts.append((cm.label, cm.bits(k), str(s.in_count), str(s.out_count), _sig(s.precision())))
    return (
        "Word sets\n"
        + _table(("class", "words"), words)
        + "\n\nPartition counts (bits follow the word order above)\n"
        + _table(("class", "partition", "in", "out", "p"), counts)
        + "\n"
    )


def render_audit(rows: Sequence[AuditRow]) -> str:
    out = []
    for r in rows:
        if r.result is None:
            out.append((r.label, r.bits, "-", "-", "-", "-", "-", r.note))
            continue
        t = r.result
        out.append(
            (
                r.label,
                r.bits,
                _sig(t.p),
                _sig(t.p_prime),
                str(t.dof),
                f"{t.t_crit:.2f}",
                _sig(t.t),
                "yes" if t.reject else "no",
            )
        )
    n_rej = sum(r.reject for r in rows)
    return (
        _table(("class", "partition", "p", "p'", "f", "t_crit", "t", "p != p'"), out)
        + f"\n\n{n_rej} rejection(s) of p = p' out of {sum(r.comparable for r in rows)} comparable partitions\n"
    )


def render_eval(reports: Sequence[tuple[str, EvalReport]]) -> str:
    """Precision / recall rows; each report is tagged (e.g. ``"train"``) and
    reports sharing a gate are printed side by side as ``a / b``."""
    by_gate: dict[tuple[str, float], list[tuple[str, EvalReport]]] = {}
    for tag, rep in reports:
        by_gate.setdefault((rep.gate.mode, rep.gate.q), []).append((tag, rep))
    rows = []
    tags = ""
    for (mode, q), group in by_gate.items():
        tags = " / ".join(t for t, _ in group)
        labels = [c.label for c in group[0][1].classes]
        for label in labels:
            prec = " / ".join(_sig(rep[label].precision) for _, rep in group)
            rec = " / ".join(_sig(rep[label].recall) for _, rep in group)
            rows.append((label, f"{mode} > {q:g}", prec, rec))
    return f"columns: {tags}\n" + _table(("class", "measure", "precision", "recall"), rows) + "\n"
