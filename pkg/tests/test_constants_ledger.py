import math

import mpmath
import pytest
import sympy as sp

from exceptions import ValidationError
from geometry.constants_ledger import (
    a_n_closed_form,
    clifford_volume,
    constants_row,
    constants_table,
    gamma_half,
    lower_bound_and_a,
    rp_volume,
    sphere_volume,
    symbolic_constants
)

PI = math.pi


@pytest.mark.parametrize("k", range(1, 21))
def test_gamma_half_matches_the_gamma_function(k):
    assert gamma_half(k) == pytest.approx(math.gamma(k / 2), rel=1e-14)


def test_dimension_two_row():
    row = constants_row(2)
    assert row.vol_rp_n == pytest.approx(2 * PI, rel=1e-12)
    assert row.eqsup_ratio == pytest.approx(4 * PI ** 2 / 3, rel=1e-12)
    assert row.eqsup_ratio == pytest.approx(13.159473, abs=1e-6)
    assert row.vol_clifford_n == pytest.approx(4 * PI ** 2 / (3 * math.sqrt(3)), rel=1e-12)
    assert row.vol_clifford_n == pytest.approx(7.597812, abs=1e-6)
    assert row.lower_bound == pytest.approx(4 * PI / math.sqrt(3), rel=1e-12)
    assert row.lower_bound == pytest.approx(7.255197, abs=1e-6)
    assert row.a_n == pytest.approx(3 / PI, rel=1e-12)
    assert row.a_n == pytest.approx(0.954930, abs=1e-6)


def test_dimension_one_row():
    row = constants_row(1)
    assert row.vol_sphere_n == pytest.approx(2 * PI, rel=1e-14)
    assert row.vol_clifford_n == pytest.approx(PI, rel=1e-14)
    assert row.a_n == pytest.approx(1.0, rel=1e-14)


def test_a_3_against_high_precision_arithmetic():
    mpmath.mp.dps = 40
    exact = 2 * mpmath.sqrt(2) / mpmath.pi
    assert a_n_closed_form(3) == pytest.approx(float(exact), rel=1e-14)
    assert lower_bound_and_a(3)[1] == pytest.approx(0.9003163161571061, rel=1e-14)


@pytest.mark.parametrize("n", range(1, 9))
def test_chain_identities(n):
    lower_bound, a_n = lower_bound_and_a(n)
    assert lower_bound ** 2 == pytest.approx(2 ** n * rp_volume(n) ** 2 / (n + 1), rel=1e-13)
    assert a_n == pytest.approx(a_n_closed_form(n), rel=1e-14)
    assert a_n == pytest.approx(lower_bound / clifford_volume(n), rel=1e-14)
    assert rp_volume(n) == pytest.approx(sphere_volume(n) / 2, rel=1e-15)


def test_symbolic_column_agrees_with_floats():
    symbolic = symbolic_constants(2)
    a_2 = sp.sympify(symbolic['a_n'].replace('^', '**'))
    assert sp.simplify(a_2 - 3 / sp.pi) == 0
    for key, text in symbolic.items():
        value = float(sp.sympify(text.replace('^', '**')))
        assert value == pytest.approx(getattr(constants_row(2), key), rel=1e-12)


def test_constants_table_rows():
    rows = constants_table(4)
    assert [row.n for row in rows] == [1, 2, 3, 4]
    assert set(rows[0].to_record()) >= {'vol_sphere_n', 'a_n', 'symbolic'}


def test_rejects_bad_dimensions():
    with pytest.raises(ValidationError):
        constants_row(0)
    with pytest.raises(ValidationError):
        sphere_volume(-1)
