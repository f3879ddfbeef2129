"""Structured verification records and report serialization.

A report is a list of self-describing records.  Comparison records carry
a pass flag (residual within tolerance); measurement records carry the
measured quantity only and never fail, they exist to put adjudications
(sign resolutions, variant matches, claimed-versus-computed verdicts) on
the record.  Two runs with the same scenario and seed produce identical
reports up to the timestamp field.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

TOOL_VERSION = "0.1.0"


@dataclass
class CheckRecord:
    check_id: str
    group: str
    kind: str                    # "comparison" | "measurement"
    claim: str                   # the formula or quantity being checked
    residual: float | None = None
    tolerance: float | None = None
    passed: bool | None = None   # None for measurements
    point: list | None = None
    detail: str = ""

    def as_dict(self):
        return {
            "check_id": self.check_id,
            "group": self.group,
            "kind": self.kind,
            "claim": self.claim,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "point": self.point,
            "detail": self.detail,
        }


@dataclass
class Report:
    scenario_name: str
    scenario_hash: str
    seed: int
    records: list = field(default_factory=list)
    tool_version: str = TOOL_VERSION
    created: str = ""

    def __post_init__(self):
        if not self.created:
            self.created = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())

    # -- accumulation -------------------------------------------------------

    def comparison(self, check_id, group, claim, residual, tolerance,
                   point=None, detail=""):
        rec = CheckRecord(check_id, group, "comparison", claim,
                          residual=float(residual), tolerance=float(tolerance),
                          passed=bool(residual <= tolerance),
                          point=_round_point(point), detail=detail)
        self.records.append(rec)
        return rec

    def measurement(self, check_id, group, claim, value, point=None, detail=""):
        rec = CheckRecord(check_id, group, "measurement", claim,
                          residual=float(value), tolerance=None, passed=None,
                          point=_round_point(point), detail=detail)
        self.records.append(rec)
        return rec

    # -- summaries ----------------------------------------------------------

    @property
    def n_comparisons(self):
        return sum(1 for r in self.records if r.kind == "comparison")

    @property
    def n_failed(self):
        return sum(1 for r in self.records if r.passed is False)

    @property
    def all_passed(self):
        return self.n_failed == 0

    def summary(self):
        return {
            "checks": self.n_comparisons,
            "failed": self.n_failed,
            "measurements": len(self.records) - self.n_comparisons,
            "all_passed": self.all_passed,
        }

    # -- serialization ------------------------------------------------------

    def as_dict(self):
        return {
            "scenario": self.scenario_name,
            "scenario_hash": self.scenario_hash,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "created": self.created,
            "records": [r.as_dict() for r in self.records],
            "summary": self.summary(),
        }

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        rep = Report(data["scenario"], data["scenario_hash"], data["seed"],
                     tool_version=data["tool_version"], created=data["created"])
        for r in data["records"]:
            rep.records.append(CheckRecord(
                r["check_id"], r["group"], r["kind"], r["claim"],
                residual=r["residual"], tolerance=r["tolerance"],
                passed=r["passed"], point=r["point"], detail=r["detail"]))
        return rep

    def render_text(self):
        lines = [f"scenario {self.scenario_name}  "
                 f"(hash {self.scenario_hash}, seed {self.seed}, "
                 f"tool {self.tool_version})"]
        for r in self.records:
            if r.kind == "comparison":
                status = "PASS" if r.passed else "FAIL"
                lines.append(f"[{status}] {r.check_id}: {r.claim}  "
                             f"residual {r.residual:.3e} <= {r.tolerance:.1e}"
                             + (f"  @ {r.point}" if r.point else ""))
            else:
                lines.append(f"[info] {r.check_id}: {r.claim}  "
                             f"value {r.residual:.6g}"
                             + (f"  @ {r.point}" if r.point else "")
                             + (f"  ({r.detail})" if r.detail else ""))
        s = self.summary()
        lines.append(f"{s['checks']} checks, {s['failed']} failed, "
                     f"{s['measurements']} measurements")
        return "\n".join(lines)


def _round_point(point):
    if point is None:
        return None
    return [round(float(x), 12) for x in point]
