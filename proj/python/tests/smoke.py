"""Smoke tests for the python bindings; plain asserts, no test framework."""

import fixdiff

BTREE = """
semiring nat
truncate 9
param z
var B
B = z + z*B^2
"""


def test_solve_btree():
    for method in ("kleene", "newton"):
        result = fixdiff.solve(BTREE, method=method)
        table = result["solution"]["B"]
        assert table["z"] == "1"
        assert table["z^3"] == "1"
        assert table["z^5"] == "2"
        assert table["z^7"] == "5"
        assert table["z^9"] == "14"
    newton = fixdiff.solve(BTREE, method="newton")
    assert newton["steps"] <= 6
    assert newton["rate_applicable"] is True
    assert newton["trace_csv"].startswith("step,distance_exponent,rate_ok")


def test_grammar():
    result = fixdiff.solve_grammar("S -> S S | a\n", semiring="nat", degree=6)
    assert result["solution"]["S"]["z^5"] == "14"
    tropical = fixdiff.solve_grammar(
        "S -> a S b | c\nweight a 2\nweight b 1\nweight c 5\n",
        semiring="tropical",
        degree=7,
    )
    assert tropical["solution"]["S"]["z"] == "5"
    assert tropical["solution"]["S"]["z^3"] == "8"


def test_laws():
    reports = fixdiff.laws(suite="cd", seed=3, cases=25, semiring="nat", degree=4)
    assert len(reports) == 7
    assert all(r["passed"] for r in reports)
    monus = fixdiff.laws(suite="monus", semiring="tropical", cases=50)
    assert all(r["passed"] for r in monus)


def test_series_helpers():
    assert fixdiff.derivative("x^2", ["x"], semiring="nat", degree=4) == "2*x*a_x"
    assert fixdiff.star("z", ["z"], semiring="nat", degree=3) == "1 + z + z^2 + z^3"


def test_errors():
    try:
        fixdiff.solve("semiring nat\ntruncate 4\nparam z\nvar B\nB = w\n")
    except RuntimeError as e:
        assert "undeclared identifier 'w'" in str(e)
    else:
        raise AssertionError("expected a parse error")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"PASS  {name}")
            except AssertionError as e:
                failures += 1
                print(f"FAIL  {name}: {e}")
    raise SystemExit(failures)
