from __future__ import annotations

import csv
import json

import pytest
from gmpy2 import mpq

from hexeq.errors import ConfigError, HexeqError, PatternTooSmall, Stalled
from hexeq.hexsys import HexSystem, is_consecutive
from hexeq.lattice import (EDGE_LABELS, IvpSpec, edge_param, evolve, face_vertices, init_lattice,
                           pattern_fixture, pattern_layout, run_evolution, write_lattice)


def test_face_labels():
    for f in [(0, 0), (1, 1), (2, 4), (3, 7)]:
        vs = face_vertices(*f)
        assert tuple(edge_param(vs[k], vs[(k + 1) % 6]) for k in range(6)) == EDGE_LABELS
    with pytest.raises(HexeqError):
        edge_param((0, 0), (2, 0))


@pytest.mark.parametrize("kind", ["staircase", "corner", "column", "row"])
def test_fixture_matches_generator(kind):
    fx = pattern_fixture()[kind]
    faces, known = pattern_layout(kind, fx["rows"], fx["cols"])
    assert sorted(map(list, faces)) == sorted(fx["faces"])
    assert sorted(map(list, known)) == sorted(fx["known"])


def test_staircase_initial_state():
    system = HexSystem.type_a("A2:1,0")
    lat = init_lattice(IvpSpec("staircase", 8, 8, seed=1), system)
    counts = [sum(v is not None for v in lat.face_values(f)) for f in lat.faces]
    assert all(0 <= k <= 4 for k in counts)
    frontier = [f for f in lat.faces if sum(v is not None for v in lat.face_values(f)) == 4]
    assert frontier and all(is_consecutive(lat.face_values(f)) is not None for f in frontier)


def test_corner_initial_state():
    faces, known = pattern_layout("corner", 8, 8)
    assert {(0, c) for c in range(17)} <= known
    verts = {v for f in faces for v in face_vertices(*f)}
    for r in range(9):
        assert (r, min(c for rr, c in verts if rr == r)) in known


def test_staircase_a2_evolution():
    system = HexSystem.type_a("A2:1,0")
    lat = init_lattice(IvpSpec("staircase", 8, 8, seed=0), system)
    done, report, face_ok = evolve(lat, system)
    assert not done.unknown
    assert report.ok and all(face_ok.values())
    assert report.entries["lattice:cross-face"].count > 0
    assert report.entries["lattice:dual-order"].failures == 0


def test_corner_c_pair_evolution():
    system = HexSystem.type_c("C3:1,0,0", "C3:1,0,0")
    lat = init_lattice(IvpSpec("corner", 6, 6, seed=0), system)
    done, report, face_ok = evolve(lat, system)
    assert report.ok and all(face_ok.values()) and not done.unknown


def test_order_scramble_and_determinism():
    system = HexSystem.type_a("A3:d=0")
    ivp = IvpSpec("corner", 5, 5, seed=7)
    lat = init_lattice(ivp, system)
    runs = [run_evolution(lat, system, order) for order in ("forward", "reverse", 3, 11)]
    assert all(r.values == runs[0].values for r in runs[1:])
    again = run_evolution(init_lattice(ivp, system), system, 5)
    assert again.values == runs[0].values


def test_column_pattern_evolves():
    system = HexSystem.type_a("A2:0,0")
    lat = init_lattice(IvpSpec("column", 4, 4, seed=2), system)
    _, report, face_ok = evolve(lat, system)
    assert report.ok and all(face_ok.values())


def test_stalled_and_too_small():
    system = HexSystem.type_a("A2:1,0")
    # bottom row plus one left vertex: evolution starts but cannot finish
    faces, known = pattern_layout("corner", 3, 3)
    trimmed = tuple(v for v in known if v[0] == 0 or v in {(1, 0)})
    lat = init_lattice(IvpSpec("explicit", 3, 3, known=trimmed), system)
    with pytest.raises(Stalled) as err:
        run_evolution(lat, system)
    assert err.value.args
    with pytest.raises(PatternTooSmall):
        init_lattice(IvpSpec("explicit", 2, 2, known=((0, 0), (0, 1))), system)


def test_config_errors():
    with pytest.raises(ConfigError):
        IvpSpec("spiral")
    with pytest.raises(ConfigError):
        pattern_layout("corner", 0, 3)
    with pytest.raises(ConfigError):
        init_lattice(IvpSpec("corner", 3, 3), HexSystem.type_a("A4"))


def test_write_lattice(tmp_path):
    system = HexSystem.type_a("A2:1,1")
    lat = init_lattice(IvpSpec("staircase", 3, 3, seed=0), system)
    done, _, face_ok = evolve(lat, system)
    out, csv_path = tmp_path / "lat.json", tmp_path / "lat.csv"
    write_lattice(done, str(out), system, face_ok, str(csv_path))
    data = json.loads(out.read_text())
    assert data["pattern"] == "staircase" and all(f["residual_zero"] for f in data["faces"])
    rows = list(csv.DictReader(csv_path.open()))
    assert len(rows) == len(done.values)
    assert all(mpq(r["value"]) == done.values[(int(r["row"]), int(r["col"]))] for r in rows)
