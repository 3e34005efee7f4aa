"""Probabilities used directly as odds, optionally floored."""
import numpy as np

from ..errors import InputError
from .types import OddsAssignment, Provenance, Utility, check_simplex


def probabilistic_odds(p_hat, floor=0.0, utility=Utility.LINEAR):
    """Odds ``q_i = max(p_hat_i, floor)``.

    A floor of 0.1 caps the payout of a unit bet at 9.
    """
    p = check_simplex(p_hat)
    if not 0.0 <= floor < 1.0:
        raise InputError(f"floor must lie in [0, 1), got {floor}")
    q = np.maximum(p, floor)
    prov = Provenance.PROBABILISTIC if floor == 0.0 else Provenance.CAPPED_PROBABILISTIC
    return OddsAssignment(tuple(q), utility, prov, {"floor": floor})
