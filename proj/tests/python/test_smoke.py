import sympy as sp
import pytest

import dmod


def test_parse_and_print():
    assert str(dmod.parse("d1*x1", 1)) == "x1*d1 + 1"
    assert str(dmod.parse("(x1+d1)^2", 1)) == "x1^2 + 2*x1*d1 + d1^2 + 1"
    a = dmod.parse("x1^2 - 1/2", 1)
    assert dmod.parse(str(a), 1) == a


def test_errors():
    with pytest.raises(dmod.ParseError):
        dmod.parse("x1 +", 1)
    with pytest.raises(dmod.IndexOutOfRangeError):
        dmod.parse("x2", 1)
    with pytest.raises(dmod.DmodError):
        dmod.parse("x2", 1)


def test_action_matches_sympy():
    x, y = sp.symbols("x1 x2")
    f = x**3 * y + 2 * x * y**2 - 5
    fd = dmod.parse("x1^3*x2 + 2*x1*x2^2 - 5", 2)
    # d1 * x2 * d2 applied to f is d/dx1 (x2 * df/dx2)
    got = dmod.apply(dmod.parse("d1*x2*d2", 2), fd)
    want = sp.expand(sp.diff(y * sp.diff(f, y), x))
    assert dmod.parse(str(want).replace("**", "^"), 2) == got
    a, b = dmod.parse("x1*d1^2 + d2", 2), dmod.parse("d1*x2 - x1", 2)
    assert dmod.apply(a * b, fd) == dmod.apply(a, dmod.apply(b, fd))


def test_syzygy_and_multiples():
    d1, x1 = dmod.parse("d1", 1), dmod.parse("x1", 1)
    s = dmod.syzygy([[d1, x1]], K=[1])
    c = s["c"]
    assert (d1 * c[0] + x1 * c[1]).is_zero()
    assert s["degree"] <= s["bound"]
    cm = dmod.common_multiple([x1, d1], side="right", K=[1])
    assert x1 * cm["c"][0] == d1 * cm["c"][1] == cm["value"]
    zero, unit = dmod.parse("0", 1), dmod.parse("1", 1)
    b = [[unit, zero], [d1, unit]]
    c = dmod.quasi_inverse(b)
    cb = [[c[i][0] * b[0][j] + c[i][1] * b[1][j] for j in range(2)] for i in range(2)]
    assert cb[0][1].is_zero() and cb[1][0].is_zero()
    assert not cb[0][0].is_zero() and not cb[1][1].is_zero()


def test_solver_fixtures():
    one = dmod.parse("1", 1)
    r = dmod.solve([[dmod.parse("x1", 1)]], [one])
    assert r["status"] == "SOLVED"
    num, den = r["solution"][0]
    assert str(num) == "1" and str(den) == "x1"
    assert dmod.solve([[dmod.parse("d1", 1)]], [one])["status"] == "UNSOLVABLE"
    assert dmod.solve([[dmod.parse("d1", 1)]], [one], K_den=[1])["status"] == "SOLVED"
    assert dmod.solve([[dmod.parse("d1", 1)]], [one], method="ansatz", max_degree=3)["status"] == "UNDECIDED_AT_CAP"


def test_hilbert():
    r = dmod.hilbert([[dmod.parse("d1", 2)]], n=1, zmax=6)
    assert r["hf"] == [1, 2, 3, 4, 5, 6, 7]
    assert r["t"] == 1 and r["l"] == (1, 1)
    rep = dmod.bezout_check([[dmod.parse("d1^3", 1)]], n=1, zmax=8)
    assert rep["t"] == 0 and rep["l"] == (3, 1) and rep["kolchin_sum"] == 3 and rep["satisfied"]
    b, coeffs = dmod.principal_element([[dmod.parse("d1", 2)], [dmod.parse("d2", 2)]], 1, 1, [1])
    assert str(b) == "d1"


def test_bounds():
    assert dmod.theorem_solution_bound(1, 0, 1, 1, 1) == 65536
    assert dmod.lemma_vector_bound(1, 1, 2, 1) == 4
    assert dmod.bezout_bound(1, 1, 2, 1, 1) == 256
    assert dmod.bezout_bound(2, 3, 2, 2, 0) == 2 * 64**16
