import numpy as np

from dsrigidity import cli


def run(argv):
    return cli.main(argv)


def test_check_cone_single(capsys):
    assert run(["check-cone", "identity 2"]) == 0
    out = capsys.readouterr().out
    assert "PlusCone" in out
    assert run(["check-cone", "diag 1 -2"]) == 0
    assert "Outside" in capsys.readouterr().out


def test_check_cone_pair_gap(capsys):
    assert run(["check-cone", "identity 2", "diag 2 1"]) == 0
    out = capsys.readouterr().out
    assert "gap=0.0857864376" in out


def test_check_cone_rejects_garbage(capsys):
    assert run(["check-cone", "not a matrix"]) == 2
    assert run(["check-cone", "1 2; 3"]) == 2
    assert run(["check-cone", "diag 1 2", "identity 3"]) == 2  # dimension mismatch


def test_matrix_parser():
    np.testing.assert_allclose(cli.parse_matrix("diag 1 -2"), np.diag([1.0, -2.0]))
    np.testing.assert_allclose(cli.parse_matrix("identity 3"), np.eye(3))
    np.testing.assert_allclose(
        cli.parse_matrix("0 1; 1 0"), np.array([[0.0, 1.0], [1.0, 0.0]])
    )


def _write(path, text):
    path.write_text(text)
    return str(path)


def test_geometry_command_passes(tmp_path, capsys):
    cfg = _write(
        tmp_path / "geo.cfg",
        "[surface]\nkind = slice\nrho0 = 0.5\n",
    )
    report = tmp_path / "report.txt"
    code = run(["geometry", "--config", cfg, "--quad", "24x48", "--report", str(report)])
    assert code == 0
    text = report.read_text()
    assert "pre_integral" in text and "pass=true" in text
    assert "claim=" in text


def test_geometry_gate_failure_is_exit_two_with_passing_lemmas(tmp_path, capsys):
    cfg = _write(tmp_path / "eq.cfg", "[surface]\nkind = slice\nrho0 = 0.0\n")
    code = run(["geometry", "--config", cfg, "--quad", "24x48"])
    out = capsys.readouterr().out
    assert code == 2
    assert "[FAIL] curvature_gate" in out
    assert "[PASS] pre_integral" in out
    assert "[PASS] newton_divergence" in out


def test_geometry_nonspacelike_exit_two(tmp_path, capsys):
    cfg = _write(
        tmp_path / "bad.cfg",
        "[surface]\nkind = perturbed_slice\nrho0 = 0.3\nmodes = 3.0:2:0\n",
    )
    assert run(["geometry", "--config", cfg, "--quad", "24x48"]) == 2


def test_identities_command(tmp_path, capsys):
    cfg = _write(
        tmp_path / "pair.cfg",
        "[surface]\nkind = perturbed_slice\nrho0 = 0.6\nmodes = 0.05:2:0\n\n"
        "[isometry]\nkind = boost\nrapidity = 0.25\naxis = 1 0 0\n",
    )
    assert run(["verify-identities", "--config", cfg, "--quad", "32x64"]) == 0
    out = capsys.readouterr().out
    assert "tilde_symmetry" in out


def test_rigidity_command_verdicts(tmp_path, capsys):
    rigid = _write(
        tmp_path / "rigid.cfg",
        "[surface]\nkind = slice\nrho0 = 0.6\n\n"
        "[isometry]\nkind = boost\nrapidity = 0.25\naxis = 1 0 0\n",
    )
    assert run(["rigidity", "--config", rigid, "--quad", "32x64"]) == 0
    assert "verdict Rigid" in capsys.readouterr().out

    control = _write(
        tmp_path / "control.cfg",
        "[surface]\nkind = perturbed_slice\nrho0 = 0.6\nmodes = 0.05:2:0\n\n"
        "[surface2]\nkind = perturbed_slice\nrho0 = 0.6\nmodes = 0.08:2:0\n",
    )
    assert run(["rigidity", "--config", control, "--quad", "32x64"]) == 1
    assert "NotIsometric" in capsys.readouterr().out

    negative = _write(
        tmp_path / "neg.cfg",
        "[surface]\nkind = slice\nrho0 = -0.3\n\n"
        "[isometry]\nkind = boost\nrapidity = 0.1\naxis = 1 0 0\n",
    )
    assert run(["rigidity", "--config", negative, "--quad", "32x64"]) == 2


def test_config_validation(tmp_path, capsys):
    assert run(["geometry", "--config", str(tmp_path / "missing.cfg")]) == 2
    cfg = _write(tmp_path / "lowquad.cfg", "[surface]\nkind = slice\nrho0 = 0.5\n")
    assert run(["geometry", "--config", cfg, "--quad", "8x16"]) == 2
    fast = _write(
        tmp_path / "fast.cfg",
        "[surface]\nkind = slice\nrho0 = 0.6\n\n"
        "[isometry]\nkind = boost\nrapidity = 1.5\naxis = 1 0 0\n",
    )
    assert run(["rigidity", "--config", fast, "--quad", "24x48"]) == 2
    badtol = _write(tmp_path / "geo.cfg", "[surface]\nkind = slice\nrho0 = 0.5\n")
    assert run(["geometry", "--config", badtol, "--quad", "24x48", "--tol", "nope=1"]) == 2


def test_tolerance_override_can_force_failure(tmp_path, capsys):
    cfg = _write(tmp_path / "geo.cfg", "[surface]\nkind = slice\nrho0 = 0.5\n")
    code = run(
        ["geometry", "--config", cfg, "--quad", "24x48", "--tol", "deriv_v=1e-30"]
    )
    assert code == 1
    assert "[FAIL] conformal_field" in capsys.readouterr().out


def test_reports_are_byte_identical(tmp_path):
    cfg = _write(tmp_path / "geo.cfg", "[surface]\nkind = slice\nrho0 = 0.5\n")
    r1, r2 = tmp_path / "r1.txt", tmp_path / "r2.txt"
    run(["geometry", "--config", cfg, "--quad", "24x48", "--report", str(r1)])
    run(["geometry", "--config", cfg, "--quad", "24x48", "--report", str(r2)])
    assert r1.read_bytes() == r2.read_bytes()


def test_sampled_surface_config(tmp_path, capsys):
    cfg = _write(
        tmp_path / "sampled.cfg",
        "[surface]\nkind = sampled\nrho0 = 0.5\nmodes = 0.05:2:0\n"
        "resolution = 96x192\n",
    )
    code = run(["geometry", "--config", cfg, "--quad", "24x48"])
    out = capsys.readouterr().out
    assert code == 0
    assert "pre_integral.sampled" in out
    assert "newton_divergence.sampled" in out


def test_samples_file_roundtrip(tmp_path):
    from dsrigidity.surfaces import AnalyticSurface, SampledGridSurface

    grid = SampledGridSurface.from_height(AnalyticSurface(0.5), 24, 48)
    path = tmp_path / "heights.npy"
    np.save(path, grid.values)
    cfg = _write(
        tmp_path / "fromfile.cfg",
        f"[surface]\nkind = sampled\nresolution = 24x48\nsamples = {path}\n",
    )
    assert run(["geometry", "--config", cfg, "--quad", "24x48"]) == 0
