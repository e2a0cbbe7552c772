"""Verification reports: a list of named relations with exact pass/fail status."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .scalar import format_rational

PASS = "exact-pass"
FAIL = "fail"


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class Relation:
    name: str
    operands: list
    passed: bool
    witness: Any = None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "operands": _jsonable(self.operands),
            "status": PASS if self.passed else FAIL,
        }
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


@dataclass
class Report:
    suite: str
    relations: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name, operands, passed, witness=None) -> Relation:
        rel = Relation(name, list(operands), bool(passed), witness)
        self.relations.append(rel)
        return rel

    def extend(self, other: "Report"):
        self.relations.extend(other.relations)
        self.data.update(other.data)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.relations)

    @property
    def failures(self) -> list:
        return [r for r in self.relations if not r.passed]

    def summary(self) -> dict:
        failed = len(self.failures)
        return {"total": len(self.relations), "passed": len(self.relations) - failed, "failed": failed}

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "relations": [r.to_dict() for r in self.relations],
            "data": _jsonable(self.data),
            "summary": self.summary(),
        }


def merge_reports(config: dict, reports) -> dict:
    """One JSON document for several suites, relations sorted by key."""
    relations = []
    data = {}
    for rep in reports:
        for rel in rep.relations:
            d = rel.to_dict()
            d["suite"] = rep.suite
            relations.append(d)
        if rep.data:
            data[rep.suite] = _jsonable(rep.data)
    relations.sort(key=lambda d: (d["suite"], d["name"], json.dumps(d["operands"], sort_keys=True)))
    failed = sum(1 for d in relations if d["status"] != PASS)
    return {
        "config": _jsonable(config),
        "relations": relations,
        "data": data,
        "summary": {"total": len(relations), "passed": len(relations) - failed, "failed": failed},
    }


def matrix_witness(m) -> dict | None:
    """Location and size of a nonzero residual, for failure reports."""
    first = m.first_nonzero()
    if first is None:
        return None
    r, c, v = first
    return {
        "nonzero_entries": m.nonzero_count(),
        "first": {"row": list(m.grid.points[r]), "col": list(m.grid.points[c]), "value": v},
    }
