from __future__ import annotations

import json

import pytest
from gmpy2 import mpq

from hexeq.catalog import eval_quad, parse_spec
from hexeq.errors import HexeqError, IllegalPair, NotApplicable, SingularSolve
from hexeq.hexsys import (ROWS_A, ROWS_C, HexSystem, all_systems, c_pairs, cah_verify, elliptic_system,
                          hex_solve_pair, hex_symmetry_check, is_consecutive, listed_pair,
                          relaxed_orderings, solve_corner, solve_hexagon, solve_linear, solve_paths,
                          solved_sample, symmetry_system)


def test_row_structure():
    for rows in (ROWS_A, ROWS_C):
        for row in rows:
            assert row.missing == (row.face + 3) % 6
    assert [r.role for r in ROWS_C if r.bar] == ["a", "e", "f"]


def test_solve_linear_probe_example():
    # H1(0) as a quad row: (2 - x_d)(1 - 0) + 2(1 - 0) = 0 gives x_d = 4
    h1 = parse_spec("H1:e=0")
    u = solve_linear(lambda t: eval_quad(h1, (mpq(2), mpq(1), mpq(0), t), mpq(1), mpq(0)))
    assert u == 4
    assert eval_quad(h1, (mpq(2), mpq(1), mpq(0), u), mpq(1), mpq(0)) == 0


def test_solve_linear_recovers_q1_coefficients():
    # Q1(0) at x_a=1, x_b=5, x_c=3, alpha=1, beta=2 in the unknown x_d = u:
    # (1-3)(5-u) - 2(1-5)(3-u) = -10 + 2u + 24 - 8u = 14 - 6u
    q1 = parse_spec("Q1:d=0")
    f = lambda u: eval_quad(q1, (mpq(1), mpq(5), mpq(3), u), mpq(1), mpq(2))
    assert f(mpq(0)) == 14 and f(mpq(1)) - f(mpq(0)) == -6
    assert solve_linear(f) == mpq(7, 3)


def test_solve_linear_singular():
    with pytest.raises(SingularSolve):
        solve_linear(lambda u: mpq(3))


def test_solve_corner_resubstitution_and_face_slot():
    system = HexSystem.type_a("A2:1,0")
    vals, ps = solved_sample(system, seed=4)
    row = system.row("a")
    knowns = list(vals)
    knowns[2] = None
    u = solve_corner(system, row, 2, knowns, ps)
    assert u == vals[2]
    knowns[2] = u
    assert system.eval_row(row, knowns, ps) == 0
    with pytest.raises(HexeqError):
        solve_corner(system, row, row.face, vals, ps)


def test_hex_solve_pair_uses_rows_a_and_f():
    system = HexSystem.type_a("A2:1,0")
    vals, ps = solved_sample(system, seed=2, i=4)
    knowns = list(vals)
    knowns[2] = knowns[3] = None
    xc, xd = hex_solve_pair(system, 4, knowns, ps)
    assert (xc, xd) == (vals[2], vals[3])
    # the row omitting x_d solves x_c and the row omitting x_c solves x_d
    assert solve_corner(system, system.row("a"), 2, knowns, ps) == xc
    assert solve_corner(system, system.row("f"), 3, knowns, ps) == xd


def test_remaining_rows_vanish():
    system = HexSystem.type_a("A2:1,0")
    vals, ps = solved_sample(system, seed=9)
    assert all(v == 0 for v in system.residuals(vals, ps).values())


def test_eight_paths_agree():
    for system in (HexSystem.type_a("A3:d=1"), HexSystem.type_c("C2:1,1,0", "C2:1,0,1")):
        vals, ps = solved_sample(system, seed=1)
        for i in range(6):
            paths = solve_paths(system, i, vals, ps)
            assert len(paths) == 8
            assert len({v for _, v in paths}) == 1


def test_relaxed_ordering():
    system = HexSystem.type_a("A2:0,0")
    vals, ps = solved_sample(system, seed=3)
    knowns = list(vals)
    knowns[1] = knowns[5] = None  # three consecutive plus one
    assert is_consecutive(knowns) is None
    orders = relaxed_orderings(system, knowns)
    assert orders == sorted(orders) and orders
    done, how = solve_hexagon(system, knowns, ps, relaxed=True)
    assert how[0] == "relaxed" and done == list(vals)
    with pytest.raises(HexeqError):
        solve_hexagon(system, knowns, ps)


def test_cah_type_a_example():
    report = cah_verify(HexSystem.type_a("A3:d=1"), trials=20, seed=0)
    assert report.ok
    assert all(e.status == "exact-zero" for e in report.entries.values())


def test_cah_c_pair_example():
    report = cah_verify(HexSystem.type_c("C1:d=1", "C2:0,0,0"), trials=20, seed=0)
    assert report.ok


def test_cah_mismatched_pair_fails():
    with pytest.raises(IllegalPair):
        HexSystem.type_c("C1:d=1", "C1:d=1")
    system = HexSystem.type_c("C1:d=1", "C1:d=1", allow_unlisted=True)
    report = cah_verify(system, trials=5, seed=0, paths=False)
    assert not report.ok
    assert any(e.worst != 0 for e in report.entries.values())


def test_cah_elliptic_numeric():
    report = cah_verify(elliptic_system("A4", seed=0), trials=3, seed=0)
    assert report.ok
    assert all(e.status == "within-tol" for e in report.entries.values())


def test_pair_listing():
    assert len(c_pairs()) == 7
    assert listed_pair(parse_spec("C2:0,0,0"), parse_spec("C1:d=1"))
    assert listed_pair(parse_spec("C1:d=1"), parse_spec("C2:0,0,0"))
    assert not listed_pair(parse_spec("C1:d=1"), parse_spec("C1:d=1"))
    assert len(all_systems()) == 12


def test_symmetries_type_a():
    report = hex_symmetry_check(HexSystem.type_a("A2:1,1"), samples=2)
    assert report.ok
    assert any(":rotation-pi/3:" in k for k in report.entries)


def test_symmetry_c_with_equal_pair():
    system = HexSystem.type_c("C3:1,0,0", "C3:1,0,0")
    assert symmetry_system(system, "reflection-2") == system
    assert hex_symmetry_check(system, samples=2).ok


def test_symmetry_c_pi_rotation_needs_exchange():
    system = HexSystem.type_c("C3:1/2,1/2,0", "C3:1/2,0,1/2")
    report = hex_symmetry_check(system, samples=2)
    assert report.ok
    assert any(k.startswith("sym-control:") and "rotation-pi" in k for k in report.entries)
    with pytest.raises(NotApplicable):
        symmetry_system(system, "rotation-pi/3")


def test_system_json_roundtrip():
    d = json.loads(HexSystem.type_c("C2:1,1,0", "C2:1,0,1").to_json())
    assert d["variant"] == "C" and len(d["rows"]) == 6
    assert d["rows"][0]["equation"] == "Cbar"
