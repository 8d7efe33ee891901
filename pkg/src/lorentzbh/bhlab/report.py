"""Inequality reports and verdicts."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

REL_TOL = 1e-9
HOLDS = "holds"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


@dataclass
class InequalityReport:
    """One checked instance of ``lhs <= constant_used * base``.

    ``base_lower``/``base_upper`` bracket the right-hand factor (equal for
    exactly computable quantities). ``rhs`` is reported from the upper end.
    """

    lemma_id: str
    lhs: float
    rhs: float
    constant_used: float
    verdict: str
    base_lower: float = 0.0
    base_upper: float | None = None
    instance: dict = field(default_factory=dict)
    instance_hash: str = ""

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def implied_constant(self) -> float:
        """Smallest constant that makes this instance hold (lhs / base)."""
        base = self.base_upper if self.base_upper is not None else self.base_lower
        if base == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / base

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict:
        d = asdict(self)
        d["margin"] = self.margin
        d["implied_constant"] = self.implied_constant
        return d

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), sort_keys=True, allow_nan=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def instance_hash(descriptor: dict, data=None) -> str:
    h = hashlib.sha256(json.dumps(_jsonable(descriptor), sort_keys=True).encode())
    if data is not None:
        h.update(np.ascontiguousarray(np.asarray(data, dtype=complex)).tobytes())
    return h.hexdigest()[:16]


def judge(
    lemma_id: str,
    lhs: float,
    constant: float,
    base_lower: float,
    base_upper: float | None = math.nan,
    instance: dict | None = None,
    data=None,
    rel_tol: float = REL_TOL,
) -> InequalityReport:
    """Verdict for ``lhs <= constant * base`` with ``base`` in [base_lower, base_upper].

    Holds when even the lower end suffices; violated when even the upper end
    fails; inconclusive in between or when no upper end is known. Pass
    ``base_upper=nan`` (the default) for an exactly known base.
    """
    if base_upper is not None and math.isnan(base_upper):
        base_upper = base_lower
    lhs, base_lower = float(lhs), float(base_lower)
    if lhs <= constant * base_lower * (1 + rel_tol):
        verdict = HOLDS
    elif base_upper is not None and lhs > constant * base_upper * (1 + rel_tol):
        verdict = VIOLATED
    else:
        verdict = INCONCLUSIVE
    instance = dict(instance or {})
    rhs = constant * (base_upper if base_upper is not None else base_lower)
    return InequalityReport(
        lemma_id, lhs, float(rhs), float(constant), verdict, base_lower,
        None if base_upper is None else float(base_upper), instance, instance_hash(instance, data),
    )


def fitted_constant(reports) -> float:
    """Smallest constant under which every report would hold."""
    return max((r.implied_constant for r in reports), default=0.0)
