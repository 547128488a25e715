import json
from fractions import Fraction

import numpy as np

from bdyqft.errors import BdyQFTError, CoverNotFound
from bdyqft.report import Report, config_hash, jsonable


def test_report_collects_failures():
    rep = Report(scope="s")
    rep.add("a", True)
    rep.add("b", False, witness=1.5, tolerance=1.0)
    other = Report()
    other.add("c", True)
    rep.extend(other, prefix="x: ")
    assert not rep.ok
    assert [c.name for c in rep.failures()] == ["b"]
    assert rep.checks[-1].name == "x: c"
    assert rep.to_dict()["checks"][1]["status"] == "fail"


def test_config_hash_ignores_key_order():
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_jsonable():
    doc = jsonable({"f": Fraction(1, 3), "arr": np.arange(2), "b": np.bool_(True), "inf": float("inf")})
    json.dumps(doc)
    assert doc["arr"] == [0, 1] and doc["b"] is True and doc["inf"] == "inf"


def test_error_payload():
    err = CoverNotFound("no cover", label="f4", region="BB")
    assert isinstance(err, BdyQFTError)
    d = err.to_dict()
    assert d["error"] == "CoverNotFound" and d["witness"] == {"label": "f4", "region": "BB"}
