import json

import numpy as np
import pytest

from qca import io
from qca.cli import main
from qca.models import single_spin, two_spin


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def state_doc(psi):
    return io.state_to_dict(np.asarray(psi, complex))


def test_model_and_analyze_two_spin(workdir, capsys):
    assert main(["model", "two-spin", "--coupling", "ising", "--J", "1", "--gamma1", "1",
                 "--gamma2", "1.1", "-o", "ts.json"]) == 0
    assert main(["analyze", "ts.json", "--json", "report.json"]) == 0
    out = capsys.readouterr().out
    assert "dim L = 15" in out and "dim B = 6" in out
    report = json.loads((workdir / "report.json").read_text())
    assert report["dim_L"] == 15 and report["dim_B"] == 6
    assert report["oc"] and report["oc_flavor"] == "special-unitary"
    assert report["small_time_obstruction"] == "B-not-transitive"
    assert len(report["input_sha256"]) == 64
    assert isinstance(report["dim_L"], int)


def test_report_is_deterministic(workdir):
    main(["model", "two-spin", "--J", "1", "--gamma1", "1", "--gamma2", "1.1", "-o", "ts.json"])
    main(["analyze", "ts.json", "--json", "a.json"])
    main(["analyze", "ts.json", "--json", "b.json"])
    assert (workdir / "a.json").read_bytes() == (workdir / "b.json").read_bytes()
    text = (workdir / "a.json").read_text()
    keys = list(json.loads(text))
    assert keys == sorted(keys)


def test_example_sp2_round_trip(workdir, capsys):
    assert main(["model", "example-sp2", "-o", "sp.json"]) == 0
    doc = json.loads((workdir / "sp.json").read_text())
    assert len(doc["controls"]) == 10
    assert main(["analyze", "sp.json", "--json", "r.json"]) == 0
    r = json.loads((workdir / "r.json").read_text())
    assert r["psc"] and not r["oc"] and r["classification"] == "sp-conjugate"


def test_single_spin_model(workdir):
    assert main(["model", "single-spin", "--omega", "1", "-o", "s.json"]) == 0
    doc = json.loads((workdir / "s.json").read_text())
    assert doc["n"] == 2
    model = io.system_from_dict(doc)
    assert np.allclose(model.drift, single_spin(1.0).drift)


def test_model_round_trip_exact(workdir):
    main(["model", "two-spin", "--J", "0.3", "--gamma1", "1.7", "--gamma2", "-0.4", "-o", "m.json"])
    model = io.system_from_dict(json.loads((workdir / "m.json").read_text()))
    ref = two_spin(0.3, 1.7, -0.4)
    assert np.array_equal(model.drift, ref.drift)
    assert all(np.array_equal(a, b) for a, b in zip(model.controls, ref.controls))


def test_model_missing_parameter(workdir, capsys):
    assert main(["model", "two-spin", "--J", "1"]) == 2
    assert "gamma1" in capsys.readouterr().err


def test_model_unknown_family(workdir):
    with pytest.raises(SystemExit) as exc:
        main(["model", "three-spin"])
    assert exc.value.code == 2


def test_analyze_malformed_matrix(workdir, capsys):
    doc = io.system_to_dict(single_spin(1.0))
    doc["controls"][1][0] = doc["controls"][1][0][:1]
    assert main(["analyze", write(workdir / "bad.json", doc)]) == 2
    assert "system.controls[1][0]" in capsys.readouterr().err


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda d: d.pop("drift"), "drift"),
        (lambda d: d.update(n=3), "rows"),
        (lambda d: d.update(extra=1), "unknown keys"),
        (lambda d: d["drift"][0].__setitem__(0, "x"), "system.drift[0][0]"),
        (lambda d: d.update(drift=[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]), "skew-Hermitian"),
    ],
)
def test_schema_errors(workdir, capsys, mutate, field):
    doc = io.system_to_dict(single_spin(1.0))
    mutate(doc)
    assert main(["analyze", write(workdir / "bad.json", doc)]) == 2
    assert field in capsys.readouterr().err


def test_invalid_json(workdir, capsys):
    (workdir / "x.json").write_text("{not json")
    assert main(["analyze", "x.json"]) == 2


def test_missing_file(workdir):
    assert main(["analyze", "nope.json"]) == 1


def test_hermitian_flag(workdir):
    m = single_spin(1.0)
    doc = io.system_to_dict(m)
    doc["drift"] = io.encode_matrix(-1j * m.drift)
    doc["controls"] = [io.encode_matrix(-1j * b) for b in m.controls]
    doc["hermitian"] = True
    model = io.system_from_dict(doc)
    assert np.allclose(model.drift, m.drift)


def test_density_option_orbit(workdir, capsys):
    assert main(["model", "example-orbit", "--n", "4", "-o", "sp.json", "--density-out", "rho.json"]) == 0
    assert main(["analyze", "sp.json", "--density", "rho.json", "--json", "r.json"]) == 0
    assert "orbit equality for rho: False" in capsys.readouterr().out
    r = json.loads((workdir / "r.json").read_text())
    assert r["density"]["orbit_equality"] is False
    assert (r["density"]["full_orbit_dim"], r["density"]["L_orbit_dim"]) == (8, 4)


def test_density_conditioning_exit_code(workdir):
    main(["model", "example-orbit", "--n", "4", "-o", "sp.json"])
    rho = {"n": 4, "matrix": io.encode_matrix(np.diag([0.5 + 5e-8, 0.5 - 5e-8, 0, 0]))}
    assert main(["analyze", "sp.json", "--density", write(workdir / "rho.json", rho)]) == 3


def test_density_schema(workdir):
    main(["model", "example-orbit", "--n", "4", "-o", "sp.json"])
    rho = {"n": 4, "matrix": io.encode_matrix(np.diag([1.0, 1.0, 0, 0]))}
    assert main(["analyze", "sp.json", "--density", write(workdir / "rho.json", rho)]) == 2


def test_closure_command(workdir, capsys):
    main(["model", "single-spin", "--omega", "1", "-o", "s.json"])
    assert main(["closure", "s.json"]) == 0
    assert "dim L = 3" in capsys.readouterr().out
    main(["model", "two-spin", "--J", "1", "--gamma1", "1", "--gamma2", "1.1", "-o", "ts.json"])
    assert main(["closure", "ts.json", "--controls-only", "--dump", "b.json"]) == 0
    assert "dim B = 6" in capsys.readouterr().out
    dump = json.loads((workdir / "b.json").read_text())
    assert dump["dim"] == 6 and len(dump["controls"]) == 6
    # re-closing the dumped basis is idempotent
    assert main(["closure", "b.json"]) == 0
    assert "dim L = 6" in capsys.readouterr().out


def test_closure_dump_full(workdir, capsys):
    main(["model", "two-spin", "--J", "1", "--gamma1", "1", "--gamma2", "1.1", "-o", "ts.json"])
    main(["closure", "ts.json", "--dump", "l.json"])
    capsys.readouterr()
    main(["closure", "l.json"])
    assert "dim L = 15" in capsys.readouterr().out


def _pulses(segments):
    return {"segments": [{"dt": dt, "u": u} for dt, u in segments]}


def test_simulate_zero_segments(workdir, capsys):
    main(["model", "single-spin", "--omega", "1", "-o", "s.json"])
    write(workdir / "p.json", _pulses([]))
    write(workdir / "psi.json", state_doc([0.6, 0.8j]))
    assert main(["simulate", "s.json", "p.json", "--initial", "psi.json"]) == 0
    out = capsys.readouterr().out
    assert "+0.6000000000+0.0000000000j, +0.0000000000+0.8000000000j" in out
    assert "norm: 1.000000000000000" in out


def test_simulate_pi_pulse(workdir, capsys):
    main(["model", "single-spin", "--omega", "0", "--controls", "x", "-o", "s.json"])
    write(workdir / "p.json", _pulses([(1.0, [np.pi])]))
    write(workdir / "e1.json", state_doc([1, 0]))
    write(workdir / "e2.json", state_doc([0, 1]))
    assert main(["simulate", "s.json", "p.json", "--initial", "e1.json", "--target", "e2.json"]) == 0
    out = capsys.readouterr().out
    line = next(ln for ln in out.splitlines() if ln.startswith("fidelity"))
    assert abs(float(line.split(":")[1]) - 1) <= 1e-9
    assert "equivalent up to phase: True" in out


def test_simulate_random_norm(workdir, capsys):
    main(["model", "two-spin", "--J", "1", "--gamma1", "1", "--gamma2", "1.1", "-o", "ts.json"])
    rng = np.random.default_rng(0)
    write(workdir / "p.json", _pulses([(float(rng.uniform(0.1, 1)), list(rng.uniform(-5, 5, 3))) for _ in range(10)]))
    write(workdir / "psi.json", state_doc([0.5, 0.5, 0.5, 0.5]))
    assert main(["simulate", "ts.json", "p.json", "--initial", "psi.json"]) == 0
    line = next(ln for ln in capsys.readouterr().out.splitlines() if ln.startswith("norm"))
    assert abs(float(line.split(":")[1]) - 1) <= 1e-10


def test_simulate_dimension_errors(workdir):
    main(["model", "single-spin", "-o", "s.json"])
    write(workdir / "p.json", _pulses([(0.1, [1.0])]))
    write(workdir / "psi.json", state_doc([1, 0]))
    assert main(["simulate", "s.json", "p.json", "--initial", "psi.json"]) == 2
    write(workdir / "p.json", _pulses([(0.1, [1.0, 0.0])]))
    write(workdir / "psi3.json", state_doc([1, 0, 0]))
    assert main(["simulate", "s.json", "p.json", "--initial", "psi3.json"]) == 2


def test_pulses_round_trip():
    from qca.sim import PulseSequence

    p = PulseSequence([0.1, 0.25], [[1.0, -2.0], [0.0, 3.5]])
    q = io.pulses_from_dict(io.pulses_to_dict(p), 2)
    assert np.array_equal(p.durations, q.durations) and np.array_equal(p.amplitudes, q.amplitudes)
