"""Command line interface: outputs, formats, and exit codes."""

import math

import numpy as np
import pytest

from hillmono import Potential, load_potential, read_json, write_json
from hillmono.cli import main
from oracles import rel_l2

TAU = math.tau


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, q in (("qm1", Potential.constant(-1.0)),
                    ("q0", Potential.constant(0.0)),
                    ("qq", Potential.constant(-0.25)),
                    ("qp1", Potential.constant(1.0)),
                    ("mathieu", Potential.trig_poly([2.0])),
                    ("trig", Potential.trig_poly([0.3], [0.0, 0.1]))):
        p = tmp_path / f"{name}.json"
        write_json(q.to_dict(), p)
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_monodromy_vertex_output(files):
    out = str(files["dir"] / "mono.json")
    assert main(["monodromy", "--potential", files["qm1"], "-o", out]) == 0
    data = read_json(out)
    assert data["stratum"]["kind"] == "parabolic_vertex"
    assert data["stratum"]["component_index"] == 2
    assert abs(data["trace"] - 2.0) < 1e-8
    assert abs(data["omega"] + TAU) < 1e-6
    assert abs(data["theta_R"] - TAU) < 1e-6
    assert data["component"] == "+"


def test_monodromy_leaf_output(files):
    out = str(files["dir"] / "mono0.json")
    assert main(["monodromy", "--potential", files["q0"], "-o", out]) == 0
    data = read_json(out)
    assert data["stratum"]["kind"] == "parabolic_leaf_plus"
    assert data["stratum"]["component_index"] == 0
    assert abs(data["matrix"][0][1] - TAU) < 1e-8


def test_monodromy_malformed_input_exits_2(files):
    bad = files["dir"] / "bad.json"
    bad.write_text("{broken")
    assert main(["monodromy", "--potential", str(bad)]) == 2
    assert main(["monodromy", "--potential",
                 str(files["dir"] / "missing.json")]) == 2


def test_kepler_round_trip(files):
    orbit = str(files["dir"] / "orbit.json")
    back = str(files["dir"] / "back.json")
    assert main(["kepler", "to-orbit", "--potential", files["trig"],
                 "--steps", "4096", "-o", orbit]) == 0
    assert main(["kepler", "to-potential", "--orbit", orbit,
                 "--steps", "4096", "-o", back]) == 0
    q1 = load_potential(files["trig"])
    q2 = load_potential(back)
    t = np.linspace(0.0, TAU, 2049)
    assert rel_l2(q2(t), q1(t), t) < 1e-4


def test_kepler_constant_minus_one_round_orbit(files):
    orbit = str(files["dir"] / "round.json")
    assert main(["kepler", "to-orbit", "--potential", files["qm1"],
                 "-o", orbit]) == 0
    data = read_json(orbit)
    assert abs(data["theta_max"] - TAU) < 1e-8
    assert np.abs(np.array(data["rho"]) - 1.0).max() < 1e-8


def test_kepler_bad_orbit_exits_2(files):
    orbit = str(files["dir"] / "orbit2.json")
    main(["kepler", "to-orbit", "--potential", files["trig"], "-o", orbit])
    data = read_json(orbit)
    data["rho"] = [1.5 * v for v in data["rho"]]
    broken = files["dir"] / "broken.json"
    write_json(data, broken)
    assert main(["kepler", "to-potential", "--orbit", str(broken)]) == 2


def test_synthesize_from_monodromy_output(files):
    target = str(files["dir"] / "target.json")
    synth = str(files["dir"] / "synth.json")
    check = str(files["dir"] / "check.json")
    assert main(["monodromy", "--potential", files["trig"],
                 "-o", target]) == 0
    assert main(["synthesize", "--target", target, "--coeffs", "0.05,-0.02",
                 "-o", synth]) == 0
    assert main(["monodromy", "--potential", synth, "-o", check]) == 0
    a = read_json(target)
    b = read_json(check)
    dev = np.abs(np.array(a["matrix"]) - np.array(b["matrix"])).max()
    assert dev < 1e-6
    assert abs(a["omega"] - b["omega"]) < 1e-6


def test_synthesize_rejects_targets_off_image(files):
    ident = files["dir"] / "ident.json"
    write_json({"m": [1.0, 0.0, 0.0, 1.0], "omega": 0.0, "component": "+"},
               ident)
    assert main(["synthesize", "--target", str(ident)]) == 2


def test_synthesize_verify_gate_exits_3(files):
    target = str(files["dir"] / "target3.json")
    main(["monodromy", "--potential", files["trig"], "-o", target])
    assert main(["synthesize", "--target", target,
                 "--verify-tol", "1e-15"]) == 3


def test_spectrum_flat_csv(files):
    out = str(files["dir"] / "flat.csv")
    assert main(["spectrum", "--q0", files["q0"], "--qplus", files["qp1"],
                 "--nmax", "4", "-o", out]) == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "n,s,multiplicity,component,trace,theta_R"
    assert len(lines) == 6
    rows = [line.split(",") for line in lines[1:]]
    s = np.array([float(r[1]) for r in rows])
    np.testing.assert_allclose(s, [0.0, 1.0, 1.0, 4.0, 4.0], atol=1e-6)
    assert rows[0][3] == "hyperplane"
    assert rows[1][3] == "vertex(1)" and rows[3][3] == "vertex(2)"
    assert [r[2] for r in rows] == ["1", "2", "2", "2", "2"]


def test_spectrum_mathieu_split_pairs(files):
    out = str(files["dir"] / "mathieu.csv")
    assert main(["spectrum", "--q0", files["mathieu"], "--qplus",
                 files["qp1"], "--nmax", "4", "-o", out]) == 0
    rows = [line.split(",") for line in open(out).read().splitlines()[1:]]
    assert rows[1][3] == "cone_leaf(1-)" and rows[2][3] == "cone_leaf(1+)"
    assert rows[3][3] == "cone_leaf(2-)" and rows[4][3] == "cone_leaf(2+)"


def test_spectrum_negative_direction_exits_2(files):
    neg = files["dir"] / "neg.json"
    write_json(Potential.constant(-2.0).to_dict(), neg)
    assert main(["spectrum", "--q0", files["q0"], "--qplus", str(neg),
                 "--nmax", "2"]) == 2


def test_boundary_separated_output(files):
    out = str(files["dir"] / "sep.json")
    half_pi = repr(math.pi / 2)
    assert main(["boundary", "separated", "--potential", files["qq"],
                 "--theta0", half_pi, "--theta2pi", half_pi,
                 "-o", out]) == 0
    data = read_json(out)
    assert data["has_solution"] is True
    assert data["index"] == 1
    assert abs(data["residual"]) < 1e-9


def test_boundary_general_output(files):
    out = str(files["dir"] / "gen.json")
    assert main(["boundary", "general", "--potential", files["qq"],
                 "--A=-1,0,0,-1", "-o", out]) == 0
    data = read_json(out)
    assert data["has_solution"] is True
    assert data["all_solutions"] is True
    assert data["beta_stratum"]["kind"] == "parabolic_vertex"
    antiperiodic_on_zero = str(files["dir"] / "gen0.json")
    assert main(["boundary", "general", "--potential", files["q0"],
                 "--A=-1,0,0,-1", "-o", antiperiodic_on_zero]) == 0
    assert read_json(antiperiodic_on_zero)["has_solution"] is False


def test_boundary_singular_matrix_exits_2(files):
    assert main(["boundary", "general", "--potential", files["q0"],
                 "--A=1,0,0,0"]) == 2


def test_classify_command(files):
    target = str(files["dir"] / "ct.json")
    out = str(files["dir"] / "stratum.json")
    main(["monodromy", "--potential", files["trig"], "-o", target])
    assert main(["classify", "--element", target, "-o", out]) == 0
    data = read_json(out)
    assert data["kind"] == "elliptic"


def test_plotdata_trace_levels(files):
    out = str(files["dir"] / "levels.csv")
    assert main(["plotdata", "--levels", "2,3", "--alpha-samples", "201",
                 "-o", out]) == 0
    rows = [line.split(",") for line in open(out).read().splitlines()[1:]]
    vals = np.array([[float(x) for x in r] for r in rows])
    # The c = 2 branch passes through the origin of the chart.
    on_two = vals[vals[:, 0] == 2.0]
    origin = on_two[np.abs(on_two[:, 1]).argmin()]
    assert abs(origin[1]) < 1e-12 and abs(origin[2]) < 1e-12
    # Identity holds on every emitted point.
    err = np.abs(2.0 * np.cos(vals[:, 1]) * np.cosh(vals[:, 2]) - vals[:, 0])
    assert err.max() < 1e-12


def test_plotdata_zero_level_vertical_lines(files):
    out = str(files["dir"] / "zero.csv")
    assert main(["plotdata", "--levels", "0", "--alpha-min", "0",
                 "--alpha-max", str(TAU), "-o", out]) == 0
    rows = [line.split(",") for line in open(out).read().splitlines()[1:]]
    alphas = sorted({float(r[1]) for r in rows})
    np.testing.assert_allclose(alphas, [math.pi / 2, 3 * math.pi / 2],
                               atol=1e-12)


def test_plotdata_curve_output(files):
    out = str(files["dir"] / "curve.csv")
    assert main(["plotdata", "--curve-of", files["q0"], "--steps", "64",
                 "-o", out]) == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "t,v1,v2,v1p,v2p"
    first = [float(x) for x in lines[1].split(",")]
    assert first == [0.0, 1.0, 0.0, 0.0, 1.0]


def test_sample_potential_variants(files):
    out = str(files["dir"] / "sp.json")
    assert main(["sample-potential", "--cos", "0.5", "--sin", "0,0.25",
                 "-o", out]) == 0
    q = load_potential(out)
    assert abs(q(0.0) - 0.5) < 1e-12
    assert main(["sample-potential", "--constant", "-1", "--grid", "33",
                 "-o", out]) == 0
    assert read_json(out)["kind"] == "sampled"
    assert main(["sample-potential", "--constant", "-1", "-o", out]) == 0
    assert load_potential(out)(1.0) == -1.0
    assert main(["sample-potential", "--constant", "-1", "--cos", "1",
                 "-o", out]) == 2
    assert main(["sample-potential", "-o", out]) == 2


def test_outputs_are_deterministic(files):
    a = str(files["dir"] / "a.json")
    b = str(files["dir"] / "b.json")
    for out in (a, b):
        assert main(["monodromy", "--potential", files["mathieu"],
                     "-o", out]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()
