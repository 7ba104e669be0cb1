import json
import random
from fractions import Fraction

import pytest

from jetflow.cli import run
from jetflow.errors import ParseError
from jetflow.parsing import parse_poly
from jetflow.poly import EXACT, FLOAT, MultiPoly, PolyMap
from jetflow.serialize import (poly_from_json, poly_to_json, polymap_from_json,
                               polymap_to_json)

from conftest import rand_poly


def test_parse_examples():
    p = parse_poly("-4*x^3*y^3", ["x", "y"])
    assert p.terms == {(3, 3): Fraction(-4)}
    q = parse_poly("(x^2+y^2)*(x^2+2*y^2)", ["x", "y"])
    assert q.terms == {(4, 0): Fraction(1), (2, 2): Fraction(3), (0, 4): Fraction(2)}
    r = parse_poly("1/2 + x - 2*y^2", ["x", "y"])
    assert r.coefficient((0, 0)) == Fraction(1, 2)


def test_parse_errors():
    with pytest.raises(ParseError) as err:
        parse_poly("x^(2)", ["x"])
    assert err.value.offset == 2
    with pytest.raises(ParseError):
        parse_poly("x + w", ["x", "y"])
    with pytest.raises(ParseError):
        parse_poly("1/0", ["x"])
    with pytest.raises(ParseError):
        parse_poly("   ", ["x"])
    with pytest.raises(ParseError):
        parse_poly("x + ", ["x"])


def test_parse_unary_minus():
    p = parse_poly("x - -y", ["x", "y"])
    assert p == MultiPoly.variable(2, 0) + MultiPoly.variable(2, 1)
    q = parse_poly("-(x + y)", ["x", "y"])
    assert q == -(MultiPoly.variable(2, 0) + MultiPoly.variable(2, 1))
    # the exponent binds to the whole base, including a leading minus
    r = parse_poly("-x^2", ["x"])
    assert r == MultiPoly.variable(1, 0) ** 2


def test_parse_print_parse_identity():
    rng = random.Random(77)
    names = ["x", "y"]
    for _ in range(25):
        p = rand_poly(rng, 2, 5)
        assert parse_poly(p.to_string(names), names) == p


def test_json_roundtrip_polys():
    rng = random.Random(78)
    for _ in range(20):
        p = rand_poly(rng, 3, 4)
        assert poly_from_json(poly_to_json(p), 3) == p
    f = rand_poly(rng, 2, 3, mode=FLOAT)
    assert poly_from_json(poly_to_json(f), 2, FLOAT) == f


def test_json_roundtrip_maps():
    rng = random.Random(79)
    m = PolyMap([rand_poly(rng, 2, 4) for _ in range(2)], 4)
    assert polymap_from_json(polymap_to_json(m)) == m


def test_cli_reduce_ham(capsys):
    code = run(["reduce-ham", "-g", "x^3*y^4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "D = x^2*y^3" in out
    assert "F = (-4*x, 3*y)" in out


def test_cli_check_star_witness(capsys):
    code = run(["check-star", "-F", "x, x"])
    out = capsys.readouterr().out
    assert code == 0
    assert "nondivisible = no" in out
    assert "witness = x" in out


def test_cli_recover_round_trip(capsys):
    from jetflow.jet import VectorFieldJet, shift_jet

    names = ["x", "y"]
    coords = [parse_poly("-3*x^2*y-4*y^3", names), parse_poly("2*x^3+3*x*y^2", names)]
    field = VectorFieldJet(PolyMap(coords))
    alpha = parse_poly("1/2 + x - 2*y^2", names)
    h = shift_jet(field, alpha, 8)
    code = run(["recover", "-F", "-3*x^2*y-4*y^3, 2*x^3+3*x*y^2",
                "-h", h.to_string(names), "-K", "8", "--json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["command"] == "recover"
    assert doc["result"]["residual_ok"] is True
    omegas = doc["result"]["omegas"]
    assert omegas[0] == [{"exps": [0, 0], "num": "1", "den": "2"}]
    assert omegas[1] == [{"exps": [1, 0], "num": "1", "den": "1"}]
    assert omegas[2] == [{"exps": [0, 2], "num": "-2", "den": "1"}]


def test_cli_json_reingestion(capsys):
    code = run(["cross", "-f", "x^3*y^4", "--json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    h = polymap_from_json(doc["result"]["H"])
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    assert h.coords[0] == (x ** 3 * y ** 3).scale(-4)
    assert h.coords[1] == (x ** 2 * y ** 4).scale(3)


def test_cli_exit_codes(capsys):
    assert run([]) == 1
    capsys.readouterr()
    assert run(["shift-jet", "-F", "x^(2)", "-a", "x", "-K", "3"]) == 2
    capsys.readouterr()
    assert run(["integral-rep", "-F", "x, y", "-f", "x^2+y^2"]) == 3
    capsys.readouterr()
    assert run(["recover", "-F", "x^2", "-h", "x, y", "-K", "3"]) == 1  # coord count mismatch
    capsys.readouterr()
    assert run(["reduce-ham", "-g", "x^2", "--vars", "x,y,z"]) == 1  # wrong --vars arity
    capsys.readouterr()


def test_cli_error_envelope(capsys):
    code = run(["integral-rep", "-F", "x, y", "-f", "x^2+y^2", "--json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 3
    assert doc["ok"] is False
    assert doc["error"]["kind"] == "NoSuchFactor"


def test_cli_inconsistent_carries_order(capsys):
    code = run(["recover", "-F", "-3*x^2*y-4*y^3, 2*x^3+3*x*y^2",
                "-h", "x + x^5, y", "-K", "6", "--json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 3
    assert doc["error"]["kind"] == "Inconsistent"
    assert "order" in doc["error"]


def test_cli_vars_override(capsys):
    code = run(["reduce-ham", "-g", "u^3*v^4", "--vars", "u,v"])
    out = capsys.readouterr().out
    assert code == 0
    assert "D = u^2*v^3" in out


def test_cli_classify(capsys):
    assert run(["classify-exp", "-L", "0,-1;1,0"]) == 0
    assert "tag = Circle" in capsys.readouterr().out
    assert run(["classify-exp", "-L", "1,0;0,-1"]) == 0
    assert "tag = ClosedLine" in capsys.readouterr().out


def test_cli_flow_and_float(capsys):
    assert run(["flow-jet", "-F", "x^2", "-N", "3", "-K", "6"]) == 0
    out = capsys.readouterr().out
    assert "v_3 = (6*x^4)" in out
    assert run(["shift-jet", "-F", "-4*x, 3*y", "-a", "1/4", "-K", "2", "--float"]) == 0
    capsys.readouterr()
    # the same input is transcendental in exact mode: usage error
    assert run(["shift-jet", "-F", "-4*x, 3*y", "-a", "1/4", "-K", "2"]) == 1
    capsys.readouterr()


def test_cli_borel(tmp_path, capsys):
    from jetflow.serialize import jets_to_json

    u = MultiPoly.variable(1, 0)
    omegas = [MultiPoly.const(1, 1), u, u ** 2]
    path = tmp_path / "jets.json"
    path.write_text(json.dumps(jets_to_json(omegas, 1)))
    code = run(["borel", "--jets", str(path), "--eval", "0.01",
                "--fd-order", "2", "--json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert abs(doc["result"]["value"] - (1 + 0.01 + 0.0001)) < 1e-12
    coeffs = doc["result"]["fd_coeffs"]
    for key, want in (("0", 1.0), ("1", 1.0), ("2", 1.0)):
        assert abs(coeffs[key] - want) < 1e-6


def test_cli_json_operand_round_trip(tmp_path, capsys):
    # a float map produced by shift-jet --json feeds back into recover via @file
    code = run(["shift-jet", "-F", "-4*x, 3*y", "-a", "1/4 + x^2", "-K", "5",
                "--float", "--json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    path = tmp_path / "map.json"
    path.write_text(json.dumps(doc["result"]["map"]))
    code = run(["recover", "-F", "-4*x, 3*y", "-h", f"@{path}", "-K", "5",
                "--float", "--json"])
    doc2 = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc2["result"]["residual_ok"] is True
    omega0 = doc2["result"]["omegas"][0][0]
    assert abs(float(omega0["num"]) - 0.25) < 1e-6


def test_cli_batch(tmp_path, capsys):
    script = tmp_path / "batch.txt"
    script.write_text('reduce-ham -g "x^3*y^4"\n# comment\ncheck-star -F "-4*x, 3*y"\n')
    code = run(["--batch", str(script)])
    out = capsys.readouterr().out
    assert code == 0
    assert "D = x^2*y^3" in out
    assert "nondivisible = yes" in out


def test_float_tol_env_override(monkeypatch):
    from jetflow import config

    monkeypatch.setenv("JETFLOW_FLOAT_TOL", "0.125")
    assert config.residual_tol() == 0.125
    assert config.delta0_tol() == 0.125
    monkeypatch.delenv("JETFLOW_FLOAT_TOL")
    assert config.residual_tol() == config.RESIDUAL_TOL
    assert config.residual_tol(1e-3) == 1e-3
