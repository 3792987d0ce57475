"""Verdicts: a claim, its status and a certificate that can be recomputed."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

VERSION = "verdict_v1"
STATUSES = ("confirmed", "refuted", "inconclusive")


@dataclass
class Verdict:
    claim: str
    status: str
    certificate: dict
    stats: dict = field(default_factory=dict)
    version: str = VERSION

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def confirmed(self) -> bool:
        return self.status == "confirmed"

    def to_json(self) -> dict:
        return jsonable(asdict(self))

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, obj, validate: bool = True) -> "Verdict":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj.get("version") != VERSION:
            raise ValueError(f"unsupported verdict version {obj.get('version')!r}")
        v = cls(obj["claim"], obj["status"], obj["certificate"], obj.get("stats", {}), obj["version"])
        if validate and v.confirmed:
            from .checkers import validate_certificate

            if not validate_certificate(v):
                raise ValueError(f"certificate for {v.claim} does not re-validate")
        return v


def jsonable(x):
    """Plain JSON types; big ints stay ints, rationals become 'a/b' strings."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    if hasattr(x, "to_json"):
        return x.to_json()
    return x
