import numpy as np
import pytest

from spin2cv.identities import (
    check_identity,
    eight_term_identity,
    evaluate,
    fifteen_term_identity,
    printed_two_mode_value,
    two_mode_identity,
)


@pytest.mark.parametrize("kind", ["eight_term", "fifteen_term", "two_mode"])
def test_identity_holds(kind):
    assert check_identity(kind, n_points=200, seed=1) < 1e-12


def test_printed_eight_term_signs_fail():
    assert check_identity("printed_eight_term") > 1e-2


def test_printed_two_mode_fails():
    assert check_identity("printed_two_mode") > 1e-2
    assert printed_two_mode_value(2.0, 0.0) == pytest.approx(2.0)  # lhs is 0


def test_term_counts():
    assert len(eight_term_identity()) == 8
    assert len(fifteen_term_identity()) == 15
    assert len(two_mode_identity()) == 4


def test_fifteen_term_singletons_and_pairs():
    ident = fifteen_term_identity()
    active = [sum(1 for s in signs if s) for _, signs in ident]
    assert sorted(active) == [1] * 4 + [2] * 6 + [3] * 4 + [4]


def test_eight_term_at_unit_point():
    assert evaluate(eight_term_identity(), np.ones(4)) == pytest.approx(1.0)


def test_unknown_kind():
    with pytest.raises(ValueError):
        check_identity("nine_term")
