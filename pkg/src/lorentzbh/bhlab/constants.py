"""Constants entering the inequality checks.

Only A_p <= sqrt(2) and S_1 <= sqrt(2) are known numerically; every other
universal constant is a configuration input (default 1) and can be fitted
from trial reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..errors import BadParams

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class BHConstantTable:
    khinchine_Ap: dict = field(default_factory=dict)
    steinhaus_poly_Sp: dict = field(default_factory=dict)
    bh_mult: dict = field(default_factory=lambda: {1: 1.0})
    ksz_constant: float = 1.0
    kappa: float = 1.0
    L: float = 1.0
    Cq: dict = field(default_factory=lambda: {2: 1.0})
    envelope_C: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            vals = v.values() if isinstance(v, dict) else [v]
            for c in vals:
                if not c >= 1:
                    raise BadParams(f"constant {f.name}={v} must be >= 1")

    @property
    def euler_gamma(self) -> float:
        return float(np.euler_gamma)

    def A(self, p: float) -> float:
        """Khinchine-Steinhaus constant for degree-1 forms, 1 <= p <= 2."""
        if not 1 <= p <= 2:
            raise BadParams(f"A_p needs 1 <= p <= 2, got {p}")
        return float(self.khinchine_Ap.get(p, SQRT2))

    def S(self, p: float) -> float:
        if not 1 <= p <= 2:
            raise BadParams(f"S_p needs 1 <= p <= 2, got {p}")
        return float(self.steinhaus_poly_Sp.get(p, SQRT2))

    def bh(self, k: int) -> float:
        """Upper bound for the multilinear BH constant of l_{2k/(k+1)} in arity k."""
        try:
            return float(self.bh_mult[k])
        except KeyError:
            raise BadParams(f"no multilinear BH bound configured for k={k}; supply one") from None

    def C(self, q: float) -> float:
        return float(self.Cq.get(q, 1.0))

    @property
    def C2(self) -> float:
        return self.C(2)

    def with_overrides(self, **kw) -> "BHConstantTable":
        return replace(self, **kw)


DEFAULT_CONSTANTS = BHConstantTable()


def chain_constant(m: int, constants: BHConstantTable = DEFAULT_CONSTANTS) -> float:
    """Constant of the polynomial BH chain for l_{2m/(m+1),1}:
    L m C_2 m m^{(m-1)/(2m)} sqrt2^{m-1} (m-1)! m^m / ((m-1)^{m-1} m!) BH(1)."""
    if m < 1:
        raise BadParams(f"m={m} must be >= 1")
    sym = math.factorial(m - 1) * m**m / ((m - 1) ** (m - 1) * math.factorial(m))
    return (
        constants.L * m * constants.C2 * m * m ** ((m - 1) / (2 * m))
        * constants.S(1) ** (m - 1) * sym * constants.bh(1)
    )
