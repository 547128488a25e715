"""Check records and JSON reports shared by the checkers and the CLI."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None
    tolerance: object = None

    @property
    def status(self):
        return "pass" if self.passed else "fail"

    def to_dict(self):
        return {"name": self.name, "status": self.status, "witness": self.witness, "tolerance": self.tolerance}


@dataclass
class Report:
    checks: list = field(default_factory=list)
    scope: str = ""

    def add(self, name, passed, witness=None, tolerance=None):
        self.checks.append(Check(name, bool(passed), witness, tolerance))
        return bool(passed)

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.tolerance))

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        out = {"checks": [c.to_dict() for c in self.checks]}
        if self.scope:
            out["scope"] = self.scope
        return out


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def jsonable(obj):
    """Convert numpy scalars/arrays and Fractions for json.dump."""
    import numpy as np
    from fractions import Fraction

    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if v == v and abs(v) != float("inf") else str(v)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj
