import json
import os

import pytest

from layerspec.cli import main


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def load(out_dir, command):
    with open(os.path.join(out_dir, f"{command}.json")) as fh:
        return json.load(fh)


def test_defaults_listing(capsys):
    assert main(["describe", "--defaults"]) == 0
    out = capsys.readouterr().out
    assert "surface.name" in out and "layer.a" in out


def test_describe_and_reproducibility(tmp_path):
    cfg = write_cfg(tmp_path, "surface.name = plane\nsurface.s_max = 50\n")
    out1, out2 = str(tmp_path / "o1"), str(tmp_path / "o2")
    assert main(["describe", "--config", cfg, "--out", out1]) == 0
    assert main(["describe", "--config", cfg, "--out", out2]) == 0
    with open(os.path.join(out1, "describe.json"), "rb") as fh:
        doc1 = fh.read()
    with open(os.path.join(out2, "describe.json"), "rb") as fh:
        doc2 = fh.read()
    assert doc1 == doc2  # timestamps live in the sidecar, not the report
    assert os.path.exists(os.path.join(out1, "describe.meta.json"))
    with open(os.path.join(out1, "describe.csv")) as fh:
        header = fh.readline().strip()
    assert header == "s,r,dr_ds,K,M,k1,k2"


def test_check_capped_cylinder_fails_sigma0_exit_zero(tmp_path):
    cfg = write_cfg(tmp_path, "surface.name = capped-cylinder\nlayer.a = 0.3\n")
    out = str(tmp_path / "out")
    assert main(["check", "--config", cfg, "--out", out]) == 0
    doc = load(out, "check")
    assert doc["results"]["hypotheses"]["sigma0"]["verdict"] == "fail"


def test_totals_hyperboloid(tmp_path):
    cfg = write_cfg(tmp_path, "surface.name = hyperboloid\nsurface.s_max = 150\n")
    out = str(tmp_path / "out")
    assert main(["totals", "--config", cfg, "--out", out]) == 0
    doc = load(out, "totals")
    val = doc["results"]["total_gauss"]["value"]
    target = 2 * 3.141592653589793 * (1 - 2**-0.5)
    assert abs(val / target - 1) <= 0.01
    assert "gauss_bonnet_residual" in doc["results"]
    assert doc["results"]["gauss_bonnet_residual"]["value"] <= 1e-3


def test_certify_plane_not_found(tmp_path):
    cfg = write_cfg(tmp_path, "surface.name = plane\nlayer.a = 0.1\ncertify.budget = 2\n")
    out = str(tmp_path / "out")
    assert main(["certify", "--config", cfg, "--out", out]) == 0
    doc = load(out, "certify")
    assert doc["results"]["certificate"]["verdict"] == "not-found"


def test_certify_capped_cylinder_exit_two(tmp_path):
    cfg = write_cfg(tmp_path, "surface.name = capped-cylinder\nlayer.a = 0.3\n")
    assert main(["certify", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_spectrum_csv_columns(tmp_path):
    cfg = write_cfg(tmp_path, "\n".join([
        "surface.name = hyperboloid",
        "surface.s_max = 50",
        "layer.a = 0.3",
        "spectrum.S = 20",
        "spectrum.n_s = 100",
        "spectrum.n_u = 16",
        "spectrum.m_list = 0",
        "spectrum.k = 2",
        "spectrum.levels = 1",
    ]) + "\n")
    out = str(tmp_path / "out")
    assert main(["spectrum", "--config", cfg, "--out", out]) == 0
    with open(os.path.join(out, "spectrum.csv")) as fh:
        header = fh.readline().strip()
    assert header == "m,index,eigenvalue,threshold,below_threshold,mesh_h_s,mesh_h_u,S"


def test_poleless_rejected_exit_three(tmp_path):
    cfg = write_cfg(tmp_path, "surface.name = poleless-plane\n")
    for command in ("describe", "check", "totals", "certify", "spectrum"):
        assert main([command, "--config", cfg, "--out", str(tmp_path / command)]) == 3


def test_unknown_key_exit_four(tmp_path):
    cfg = write_cfg(tmp_path, "surface.nam = plane\n")
    assert main(["describe", "--config", cfg, "--out", str(tmp_path / "o")]) == 4


def test_bad_value_and_duplicate_key(tmp_path):
    cfg = write_cfg(tmp_path, "layer.a = wide\n")
    assert main(["describe", "--config", cfg, "--out", str(tmp_path / "o")]) == 4
    cfg = write_cfg(tmp_path, "layer.a = 0.1\nlayer.a = 0.2\n", name="dup.cfg")
    assert main(["describe", "--config", cfg, "--out", str(tmp_path / "o2")]) == 4


def test_catalog_command(tmp_path):
    out = str(tmp_path / "out")
    assert main(["catalog", "--out", out]) == 0
    doc = load(out, "catalog")
    names = [e["name"] for e in doc["results"]["catalog"]]
    assert len(names) == 7 and "poleless-plane" in names
