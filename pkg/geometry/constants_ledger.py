"""
Closed-form constants of CP^n: sphere, RP^n and Clifford-torus volumes,
the kinematic calibration ratio vol(SU(n+1))/c_n, the volume lower bound
for Hamiltonian deformations of L_n and the ratio a_n.

Floating values come from the closed forms with Gamma evaluated on
integers and half-integers by recurrence; the symbolic column is built
by sympy from the same expressions.
"""

import logging
import math
from typing import Dict, Tuple

import sympy as sp

from exceptions import NumericalError, ValidationError
from models import ConstantsRow

logger = logging.getLogger(__name__)

CLOSED_FORM_TOLERANCE = 1e-14


def _check_dimension(n: int):
    """Raises ValidationError unless n is an integer >= 1."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError("Dimension n must be an integer >= 1.")


def gamma_half(k: int) -> float:
    """
    Gamma(k/2) for a positive integer k, from Gamma(1) = 1,
    Gamma(1/2) = sqrt(pi) and Gamma(x + 1) = x Gamma(x).
    """
    if k < 1:
        raise ValidationError("gamma_half needs a positive integer.")
    value = 1.0 if k % 2 == 0 else math.sqrt(math.pi)
    x = 1.0 if k % 2 == 0 else 0.5
    while x < k / 2:
        value *= x
        x += 1.0
    return value


def sphere_volume(n: int) -> float:
    """n-dimensional measure of the unit sphere S^n."""
    _check_dimension(n)
    return 2.0 * math.pi ** ((n + 1) / 2) / gamma_half(n + 1)


def rp_volume(n: int) -> float:
    """vol(RP^n) = vol(S^n)/2."""
    return sphere_volume(n) / 2.0


def clifford_volume(n: int) -> float:
    """vol(L_n) = vol(T^(n+1))/(2 pi) with radii 1/sqrt(n+1)."""
    _check_dimension(n)
    return (2.0 * math.pi / math.sqrt(n + 1)) ** (n + 1) / (2.0 * math.pi)


def eqsup_ratio(n: int) -> float:
    """vol(SU(n+1))/c_n = vol(RP^n)^2/(n+1)."""
    return rp_volume(n) ** 2 / (n + 1)


def a_n_closed_form(n: int) -> float:
    """a_n = 2^(n/2) (n+1)^(n/2) vol(S^n) / (2 (2 pi)^n)."""
    _check_dimension(n)
    return (
        2.0 ** (n / 2) * (n + 1) ** (n / 2) * sphere_volume(n)
        / (2.0 * (2.0 * math.pi) ** n)
    )


def lower_bound_and_a(n: int) -> Tuple[float, float]:
    """
    Minimal volume of a Hamiltonian deformation of L_n and a_n.

    Raises:
        NumericalError: the chained value of a_n and its closed form
            disagree beyond 1e-14 relative
    """
    lower_bound = 2.0 ** (n / 2) * rp_volume(n) / math.sqrt(n + 1)
    a_n = lower_bound / clifford_volume(n)
    closed = a_n_closed_form(n)
    if not math.isclose(a_n, closed, rel_tol=CLOSED_FORM_TOLERANCE):
        raise NumericalError(f"a_{n}: chained {a_n!r} != closed form {closed!r}.")
    return lower_bound, a_n


def symbolic_constants(n: int) -> Dict[str, str]:
    """Exact expressions of one ledger row, keyed like ConstantsRow fields."""
    _check_dimension(n)
    m = sp.Integer(n + 1)
    sphere = 2 * sp.pi ** (m / 2) / sp.gamma(m / 2)
    rp = sphere / 2
    clifford = (2 * sp.pi / sp.sqrt(m)) ** m / (2 * sp.pi)
    ratio = rp ** 2 / m
    bound = sp.sqrt(2) ** n * rp / sp.sqrt(m)
    expressions = {
        'vol_sphere_n': sphere,
        'vol_rp_n': rp,
        'vol_clifford_n': clifford,
        'eqsup_ratio': ratio,
        'lower_bound': bound,
        'a_n': bound / clifford
    }
    return {
        key: str(sp.simplify(expr)).replace('**', '^')
        for key, expr in expressions.items()
    }


def constants_row(n: int) -> ConstantsRow:
    """One full ledger row for dimension n."""
    _check_dimension(n)
    lower_bound, a_n = lower_bound_and_a(n)
    row = ConstantsRow(
        n=n,
        vol_sphere_n=sphere_volume(n),
        vol_rp_n=rp_volume(n),
        vol_clifford_n=clifford_volume(n),
        eqsup_ratio=eqsup_ratio(n),
        lower_bound=lower_bound,
        a_n=a_n,
        symbolic=symbolic_constants(n)
    )
    logger.debug("Constants row n=%d: a_n=%.15f", n, a_n)
    return row


def constants_table(n_max: int):
    """Rows for n = 1..n_max."""
    _check_dimension(n_max)
    return [constants_row(n) for n in range(1, n_max + 1)]
