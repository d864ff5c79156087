"""Mining reports and their JSON, CSV and plain-text renderings.

JSON layout::

    {
      "target": "S_2",
      "thresholds": {"min_support": .., "min_confidence": .., "min_correlation": ..},
      "items": [...], "item_supports": [...], "l1": [...],
      "levels": [{"k": 2,
                  "with_target": [{"lhs": [...], "rhs": [...], "support": ..,
                                   "correlation": .. | null, "passed": true}, ...],
                  "without_target": [...]}, ...],
      "candidate_rules": [{..., "passed": bool}, ...],
      "rules": [{"antecedent": [...], "consequent": [...], "support": ..,
                 "confidence": .., "correlation": ..}, ...],
      "capped": false,
      "diagnostics": [...]
    }

Numbers are rounded to 6 decimals.
"""

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Tuple

from .dataset import format_decimal

PLACES = 6


def _num(x):
    return None if x is None else round(float(x), PLACES)


@dataclass(frozen=True)
class LevelRow:
    lhs: Tuple[str, ...]
    rhs: Tuple[str, ...]
    support: float
    correlation: Optional[float]
    passed: bool

    def to_dict(self):
        return {"lhs": list(self.lhs), "rhs": list(self.rhs),
                "support": _num(self.support),
                "correlation": _num(self.correlation), "passed": self.passed}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["lhs"]), tuple(d["rhs"]), d["support"],
                   d["correlation"], bool(d["passed"]))


@dataclass(frozen=True)
class LevelTable:
    k: int
    with_target: Tuple[LevelRow, ...]
    without_target: Tuple[LevelRow, ...]

    def to_dict(self):
        return {"k": self.k,
                "with_target": [r.to_dict() for r in self.with_target],
                "without_target": [r.to_dict() for r in self.without_target]}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["k"]),
                   tuple(LevelRow.from_dict(r) for r in d["with_target"]),
                   tuple(LevelRow.from_dict(r) for r in d["without_target"]))


@dataclass(frozen=True)
class RuleRow:
    antecedent: Tuple[str, ...]
    consequent: Tuple[str, ...]
    support: float
    confidence: float
    correlation: float
    passed: Optional[bool] = None

    def to_dict(self):
        d = {"antecedent": list(self.antecedent), "consequent": list(self.consequent),
             "support": _num(self.support), "confidence": _num(self.confidence),
             "correlation": _num(self.correlation)}
        if self.passed is not None:
            d["passed"] = self.passed
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["antecedent"]), tuple(d["consequent"]), d["support"],
                   d["confidence"], d["correlation"], d.get("passed"))


@dataclass(frozen=True)
class MiningReport:
    target: str
    thresholds: dict
    items: Tuple[str, ...]
    item_supports: Tuple[float, ...]
    l1: Tuple[str, ...]
    levels: Tuple[LevelTable, ...]
    candidate_rules: Tuple[RuleRow, ...]
    rules: Tuple[RuleRow, ...]
    capped: bool = False
    diagnostics: Tuple[str, ...] = ()

    def level(self, k):
        for table in self.levels:
            if table.k == k:
                return table
        return LevelTable(k, (), ())

    def to_dict(self):
        return {
            "target": self.target,
            "thresholds": {k: _num(v) for k, v in self.thresholds.items()},
            "items": list(self.items),
            "item_supports": [_num(s) for s in self.item_supports],
            "l1": list(self.l1),
            "levels": [t.to_dict() for t in self.levels],
            "candidate_rules": [r.to_dict() for r in self.candidate_rules],
            "rules": [r.to_dict() for r in self.rules],
            "capped": self.capped,
            "diagnostics": list(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            target=d["target"],
            thresholds=dict(d["thresholds"]),
            items=tuple(d.get("items", ())),
            item_supports=tuple(d.get("item_supports", ())),
            l1=tuple(d.get("l1", ())),
            levels=tuple(LevelTable.from_dict(t) for t in d["levels"]),
            candidate_rules=tuple(RuleRow.from_dict(r)
                                  for r in d.get("candidate_rules", ())),
            rules=tuple(RuleRow.from_dict(r) for r in d["rules"]),
            capped=bool(d.get("capped", False)),
            diagnostics=tuple(d.get("diagnostics", ())),
        )


def to_json(report):
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"


def from_json(text):
    return MiningReport.from_dict(json.loads(text))


def _set(names):
    return names[0] if len(names) == 1 else "{" + ", ".join(names) + "}"


def _full(x):
    if x is None:
        return "undefined"
    # full precision, minus float noise past 12 decimals
    return repr(round(x, 12) + 0.0)


def _grid(header, rows):
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    line = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [line.format(*header).rstrip(), line.format(*("-" * w for w in widths))]
    out.extend(line.format(*r).rstrip() for r in rows)
    return "\n".join(out)


def to_table(report):
    """Human-readable report shaped like the usual audit tables."""
    out = [f"target: {report.target}",
           "thresholds: " + ", ".join(f"{k}={_full(v)}"
                                      for k, v in report.thresholds.items()),
           ""]
    out.append("Level 1: item supports")
    l1 = set(report.l1)
    out.append(_grid(["item", "support", "in L1"],
                     [(n, _full(s), "yes" if n in l1 else "no")
                      for n, s in zip(report.items, report.item_supports)]))
    for table in report.levels:
        for label, rows in ((f"C_{table.k}", table.with_target),
                            (f"C'_{table.k}", table.without_target)):
            out.append("")
            out.append(f"Level {table.k}: {label}")
            if not rows:
                out.append("(empty)")
                continue
            out.append(_grid(["bipartition", "fsupp", "r", "passed"],
                             [(f"({_set(r.lhs)}, {_set(r.rhs)})", _full(r.support),
                               _full(r.correlation), "yes" if r.passed else "no")
                              for r in rows]))
    out.append("")
    out.append("Candidate rules")
    if report.candidate_rules:
        out.append(_grid(["rule", "fconf", "passed"],
                         [(f"{_set(r.antecedent)} -> {_set(r.consequent)}",
                           _full(r.confidence), "yes" if r.passed else "no")
                          for r in report.candidate_rules]))
    else:
        out.append("(none)")
    out.append("")
    if report.rules:
        out.append(f"Interesting rules ({len(report.rules)})")
        out.append(_grid(["rule", "fsupp", "fconf", "r"],
                         [(f"{_set(r.antecedent)} -> {_set(r.consequent)}",
                           _full(r.support), _full(r.confidence),
                           _full(r.correlation)) for r in report.rules]))
    else:
        out.append("No interesting rules found.")
    if report.capped:
        out.append("")
        out.append("warning: level growth stopped at max_level")
    for msg in report.diagnostics:
        out.append(f"note: {msg}")
    return "\n".join(out) + "\n"


def to_csv(report):
    """Interesting rules as CSV; itemsets are ``;``-joined item names."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["antecedent", "consequent", "support", "confidence", "correlation"])
    for r in report.rules:
        w.writerow([";".join(r.antecedent), ";".join(r.consequent),
                    format_decimal(r.support), format_decimal(r.confidence),
                    format_decimal(r.correlation)])
    return buf.getvalue()


RENDERERS = {"json": to_json, "csv": to_csv, "table": to_table}
