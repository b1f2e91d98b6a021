import random

import pytest

from apolarity.dpring import DpPoly, Operator, monomials_up_to
from apolarity.fields import QQ, FieldSpec
from apolarity.parser import parse_operator, parse_poly

FIELDS = [QQ, FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(7)]


def P(text, n=None, field=QQ):
    return parse_poly(text, n, field)


def S(text, n=None, field=QQ):
    return parse_operator(text, n, field)


def random_dp(rng, n, d, field=QQ, density=0.5, low=0, bound=3):
    """Random f with deg f == d (leading monomial forced)."""
    terms = {}
    for m in monomials_up_to(n, d):
        if sum(m) >= low and rng.random() < density:
            c = field(rng.randint(-bound, bound))
            if c != 0:
                terms[m] = c
    lead = tuple([d] + [0] * (n - 1)) if not any(sum(m) == d for m in terms) else None
    if lead is not None:
        terms[lead] = field.one
    return DpPoly(n, field, terms)


def random_op(rng, n, max_deg, field=QQ, density=0.5, low=0, bound=3):
    terms = {}
    for m in monomials_up_to(n, max_deg):
        if sum(m) >= low and rng.random() < density:
            terms[m] = field(rng.randint(-bound, bound))
    return Operator(n, field, terms)


def random_unipotent(rng, n, max_deg, field=QQ):
    from apolarity.dpring import Automorphism

    offs = [random_op(rng, n, max_deg, field, density=0.3, low=2) for _ in range(n)]
    return Automorphism.from_offsets(offs)


def random_linear(rng, n, field=QQ):
    from apolarity.dpring import linear_substitution_dual
    from apolarity.errors import InvalidAutomorphismError

    while True:
        mat = [[field(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        try:
            return linear_substitution_dual(mat, n, field)
        except InvalidAutomorphismError:
            continue


@pytest.fixture
def rng():
    return random.Random(20261015)


# acceptance reporting: one PASS/FAIL line per criterion

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    key = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _ACCEPTANCE[key] = ("PASS" if rep.passed else "FAIL", mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[key]
        terminalreporter.write_line(f"{status}  criterion {key}: {title}")
