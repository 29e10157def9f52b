import pytest

from elemtrans.poly import parse_poly


@pytest.fixture(scope="session")
def groebner_fixtures():
    """Twenty small ideals used to exercise the Buchberger postcondition."""
    two = [
        ["x", "y"],
        ["1 + 2*x*y", "x^2"],
        ["x^2"],
        ["x^2 - y", "x*y - 1"],
        ["x^2 + y^2 - 1", "x - y"],
        ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
        ["x*y - 1", "y^2 - 1"],
        ["x^2 + y", "x + y^2"],
        ["2*x^2*y - y", "3*x*y^2 - x"],
        ["x^4 - y^3", "x^2 - y"],
        ["x + y", "x - y", "x^2"],
        ["x^2*y^2 - x", "x*y^3 - y"],
        ["x^3 + x + 1", "y - x^2"],
        ["x^2 - 2", "y^2 - 3"],
        ["5"],
        ["x^2 + x*y + y^2", "x + y"],
    ]
    three = [
        ["x1 - x2", "x2 - x3"],
        ["x1*x2 - x3", "x2*x3 - x1", "x3*x1 - x2"],
        ["x1^2 - x2", "x1^3 - x3"],
        ["x1 + x2 + x3", "x1*x2 + x2*x3 + x3*x1", "x1*x2*x3 - 1"],
    ]
    fixtures = [[parse_poly(t, 2) for t in gens] for gens in two]
    fixtures += [[parse_poly(t, 3) for t in gens] for gens in three]
    assert len(fixtures) == 20
    return fixtures
