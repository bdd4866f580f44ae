import os
from pathlib import Path

import pytest

import semio

DATA = Path(__file__).resolve().parents[2] / "data"


def test_algebra_ops():
    p = semio.Algebra.product()
    assert p.tensor(0.5, 0.5) == pytest.approx(0.25)
    assert p.residuum(0.5, 0.25) == pytest.approx(0.5)
    assert p.top() == 1.0 and p.bot() == 0.0
    assert p.leq(0.2, 0.3)
    assert all(p.validate().values())
    assert p.divisible()
    pair = semio.Algebra.product_of([semio.Algebra.godel(), semio.Algebra.product()])
    assert pair.width == 2
    assert pair.meet((0.5, 1.0), (1.0, 0.25)) == (0.5, 0.25)
    with pytest.raises(semio.SemioError):
        p.tensor(1.5, 0.5)


def test_load_and_relation():
    ws = semio.Workspace.load_file(str(DATA / "additive.sem"))
    assert "identity" in ws.diagrams
    rows = ws.relation("identity").rows()
    assert [v for _, v in rows] == [1.0, 1.0, 1.0]
    assert all(c["ok"] or c["informational"] for c in ws.check())
    text = ws.print()
    assert semio.Workspace.load(text).print() == text


def test_linear_transitivity_fails():
    ws = semio.Workspace.load_file(str(DATA / "linear.sem"))
    bad = [c for c in ws.check() if not c["ok"] and not c["informational"]]
    assert [c["subject"] for c in bad] == ["transitive"]


def test_diagnostics():
    ws, diags = semio.parse("algebra W boolean\nsign a\noset A : a { support x y }\ncomp f : a -> a {\n  entry x z = 1\n}\n")
    assert ws is None
    assert diags[0]["kind"] == "reference" and diags[0]["line"] == 5
    with pytest.raises(semio.SemioError) as e:
        semio.Workspace.load("algebra W frobnicate\n", file="bad.sem")
    assert e.value.kind == "parse"
    assert e.value.diagnostics[0]["file"] == "bad.sem"


def test_gamma_and_pool():
    ws = semio.Workspace.load_file(str(DATA / "pool.sem"))
    d0 = ws.relation("d0")
    g, q = semio.gamma(d0, d0)
    assert q == 1.0
    assert all(v == 1.0 for _, v in g.rows())
    assert ws.relation("m0") == d0


def test_cli_exit_codes():
    code, out, _ = semio.run(["check", str(DATA / "additive.sem")])
    assert code == 0
    code, out, _ = semio.run(["check", str(DATA / "linear.sem")])
    assert code == 1 and "FAIL  total transitive" in out
    code, _, err = semio.run(["check", "/nonexistent.sem"])
    assert code == 2
    code, _, err = semio.run(["limit", str(DATA / "linear.sem"), "-d", "transitive", "--cap", "100"])
    assert code == 3 and "cap is 100" in err


def test_csv_round_trip():
    ws = semio.Workspace.load_file(str(DATA / "additive.sem"))
    csv = ws.relation("identity").csv()
    lines = csv.splitlines()
    assert lines[0].endswith(",value")
    assert len(lines) == 4


def test_integrate():
    parts = [semio.Workspace.load_file(str(DATA / f)) for f in ("int_godel.sem", "int_product.sem")]
    merged = semio.integrate(parts)
    assert merged.algebra.width == 2
