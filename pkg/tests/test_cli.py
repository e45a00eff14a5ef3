from __future__ import annotations

import csv
import json
import subprocess

import pytest

from adapix.cli import main
from adapix.errors import ConstantUncertaintyWarning
from adapix.io import read_csv

_ARTIFACTS = (".pixelated.csv", ".map.png", ".alloc.png", ".summary.csv", ".manifest.json")


def _synth_small(tmp_path, name="field.csv", extra=()):
    path = tmp_path / name
    assert main(["synth", "--bundled", "demo_small", "--out", str(path), *extra]) == 0
    return path


def _read_bytes(prefix, suffixes):
    return {s: (prefix.parent / (prefix.name + s)).read_bytes() for s in suffixes}


# --- synth ----------------------------------------------------------------


def test_synth_bundled_is_reproducible(tmp_path):
    a = _synth_small(tmp_path, "a.csv")
    b = _synth_small(tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.csv.manifest.json").exists()


def test_synth_explicit_parameters(tmp_path):
    out = tmp_path / "f.csv"
    code = main(
        [
            "synth",
            "--seed", "3",
            "--nx", "16",
            "--ny", "12",
            "--sites", "2",
            "--missing-rect", "2,2,5,6",
            "--out", str(out),
        ]
    )
    assert code == 0
    grid = read_csv(out)
    assert (grid.spec.n_x, grid.spec.n_y) == (16, 12)
    assert grid.state_counts()["missing"] == 3 * 4


def test_synth_requires_out(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["synth", "--bundled", "demo_small"])
    assert exc.value.code == 2


def test_synth_requires_seed_or_bundled(tmp_path, capsys):
    assert main(["synth", "--nx", "8", "--ny", "8", "--out", str(tmp_path / "x.csv")]) == 2
    assert "error:" in capsys.readouterr().err


def test_synth_unknown_bundled_name(tmp_path):
    with pytest.raises(SystemExit):
        main(["synth", "--bundled", "nope", "--out", str(tmp_path / "x.csv")])


# --- pixelate -------------------------------------------------------------


def _pixelate(tmp_path, src, prefix, extra=()):
    args = [
        "pixelate",
        "--input", str(src),
        "--num-sizes", "3",
        "--out-prefix", str(tmp_path / prefix),
        *extra,
    ]
    return main(args)


def test_pixelate_writes_all_artifacts(tmp_path):
    src = _synth_small(tmp_path)
    assert _pixelate(tmp_path, src, "run") == 0
    for suffix in _ARTIFACTS:
        assert (tmp_path / ("run" + suffix)).exists(), suffix
    assert (tmp_path / "run.map.png").read_bytes().startswith(b"\x89PNG")


def test_pixelate_repeat_runs_are_byte_identical(tmp_path):
    src = _synth_small(tmp_path)
    assert _pixelate(tmp_path, src, "one") == 0
    assert _pixelate(tmp_path, src, "two") == 0
    a = _read_bytes(tmp_path / "one", _ARTIFACTS[:4])
    b = _read_bytes(tmp_path / "two", _ARTIFACTS[:4])
    assert a == b


def test_pixelate_single_size_displays_raw_values(tmp_path):
    src = _synth_small(tmp_path)
    code = main(
        [
            "pixelate",
            "--input", str(src),
            "--num-sizes", "1",
            "--min-big", "1,1",
            "--out-prefix", str(tmp_path / "flat"),
        ]
    )
    assert code == 0
    grid = read_csv(src)
    with open(tmp_path / "flat.pixelated.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        if row["state"] != "obs":
            continue
        i = round((float(row["x"]) - grid.spec.origin_x) / grid.spec.cell_w)
        j = round((float(row["y"]) - grid.spec.origin_y) / grid.spec.cell_h)
        assert float(row["z_display"]) == grid.value[j, i]
        assert row["size_class"] == "1"


def test_pixelate_grid_too_small_exit_2(tmp_path, capsys):
    out = tmp_path / "small.csv"
    assert main(["synth", "--seed", "5", "--nx", "100", "--ny", "100", "--out", str(out)]) == 0
    code = main(
        [
            "pixelate",
            "--input", str(out),
            "--min-big", "20,20",
            "--out-prefix", str(tmp_path / "r"),
        ]
    )
    assert code == 2
    err = capsys.readouterr().err
    assert "largest feasible side is 5" in err


def test_pixelate_missing_input_exit_1(tmp_path, capsys):
    code = _pixelate(tmp_path, tmp_path / "absent.csv", "r")
    assert code == 1
    assert "I/O error" in capsys.readouterr().err


def test_pixelate_conflicting_inputs_exit_2(tmp_path, capsys):
    src = _synth_small(tmp_path)
    code = main(
        [
            "pixelate",
            "--input", str(src),
            "--input-z", str(src),
            "--out-prefix", str(tmp_path / "r"),
        ]
    )
    assert code == 2
    assert "conflicts" in capsys.readouterr().err


def test_pixelate_requires_full_ascii_pair(tmp_path, capsys):
    code = main(
        ["pixelate", "--input-z", str(tmp_path / "z.asc"), "--out-prefix", str(tmp_path / "r")]
    )
    assert code == 2


def test_pixelate_ascii_pair_input(tmp_path):
    header = "ncols 4\nnrows 4\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n"
    rows = "\n".join(" ".join(str(i + 4 * j) for i in range(4)) for j in range(4))
    urows = "\n".join(" ".join("0.5" if i < 2 else "0.9" for i in range(4)) for j in range(4))
    zp, up = tmp_path / "z.asc", tmp_path / "u.asc"
    zp.write_text(header + rows + "\n")
    up.write_text(header + urows + "\n")
    code = main(
        [
            "pixelate",
            "--input-z", str(zp),
            "--input-u", str(up),
            "--num-sizes", "2",
            "--min-big", "2,2",
            "--out-prefix", str(tmp_path / "asc"),
        ]
    )
    assert code == 0
    assert (tmp_path / "asc.pixelated.csv").exists()


def test_pixelate_flat_uncertainty_warns(tmp_path):
    out = tmp_path / "flat.csv"
    assert main(["synth", "--seed", "2", "--nx", "64", "--ny", "64", "--sites", "0", "--out", str(out)]) == 0
    with pytest.warns(ConstantUncertaintyWarning):
        code = main(
            [
                "pixelate",
                "--input", str(out),
                "--num-sizes", "3",
                "--out-prefix", str(tmp_path / "w"),
            ]
        )
    assert code == 0


def test_bad_flag_value_exit_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["pixelate", "--input", "x.csv", "--min-big", "alpha", "--out-prefix", "p"])
    assert exc.value.code == 2


# --- allocate / summarize / report ----------------------------------------


def test_allocate_writes_only_allocation(tmp_path):
    src = _synth_small(tmp_path)
    code = main(
        [
            "allocate",
            "--input", str(src),
            "--num-sizes", "3",
            "--out-prefix", str(tmp_path / "al"),
        ]
    )
    assert code == 0
    assert (tmp_path / "al.alloc.png").exists()
    assert (tmp_path / "al.manifest.json").exists()
    assert not (tmp_path / "al.pixelated.csv").exists()
    assert not (tmp_path / "al.map.png").exists()


def test_summarize_writes_k_rows(tmp_path):
    src = _synth_small(tmp_path)
    code = main(
        [
            "summarize",
            "--input", str(src),
            "--num-sizes", "3",
            "--out-prefix", str(tmp_path / "su"),
        ]
    )
    assert code == 0
    lines = (tmp_path / "su.summary.csv").read_text().splitlines()
    assert len(lines) == 4  # header + one row per size class
    assert not (tmp_path / "su.map.png").exists()


def test_report_writes_figure(tmp_path):
    src = _synth_small(tmp_path)
    code = main(
        [
            "report",
            "--input", str(src),
            "--num-sizes", "3",
            "--out-prefix", str(tmp_path / "rep"),
        ]
    )
    assert code == 0
    for suffix in (".report.png", ".pixelated.csv", ".summary.csv", ".manifest.json"):
        assert (tmp_path / ("rep" + suffix)).exists(), suffix
    assert (tmp_path / "rep.report.png").read_bytes().startswith(b"\x89PNG")


# --- manifests and reruns -------------------------------------------------


def test_manifest_contents(tmp_path):
    src = _synth_small(tmp_path)
    assert _pixelate(tmp_path, src, "run") == 0
    manifest = json.loads((tmp_path / "run.manifest.json").read_text())
    assert manifest["format"] == "adapix-run/1"
    assert manifest["command"] == "pixelate"
    assert manifest["parameters"]["num_sizes"] == 3
    assert manifest["inputs"]["csv"]["path"] == str(src)
    assert len(manifest["inputs"]["csv"]["sha256"]) == 64
    assert len(manifest["outputs"]) == 4


def test_rerun_reproduces_outputs(tmp_path):
    src = _synth_small(tmp_path)
    assert _pixelate(tmp_path, src, "run") == 0
    before = _read_bytes(tmp_path / "run", _ARTIFACTS)
    assert main(["rerun", str(tmp_path / "run.manifest.json")]) == 0
    after = _read_bytes(tmp_path / "run", _ARTIFACTS)
    assert before == after


def test_rerun_with_new_prefix(tmp_path):
    src = _synth_small(tmp_path)
    assert _pixelate(tmp_path, src, "run") == 0
    code = main(
        [
            "rerun",
            str(tmp_path / "run.manifest.json"),
            "--out-prefix", str(tmp_path / "copy"),
        ]
    )
    assert code == 0
    a = _read_bytes(tmp_path / "run", _ARTIFACTS[:4])
    b = _read_bytes(tmp_path / "copy", _ARTIFACTS[:4])
    assert a == b


def test_rerun_rejects_tampered_input(tmp_path, capsys):
    src = _synth_small(tmp_path)
    assert _pixelate(tmp_path, src, "run") == 0
    src.write_text(src.read_text().replace("0.5", "0.25", 1))
    assert main(["rerun", str(tmp_path / "run.manifest.json")]) == 2
    assert "changed" in capsys.readouterr().err


def test_rerun_rejects_garbage_manifest(tmp_path, capsys):
    bad = tmp_path / "bad.manifest.json"
    bad.write_text("{not json")
    assert main(["rerun", str(bad)]) == 2


# --- entry points ---------------------------------------------------------


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "adapix" in capsys.readouterr().out


def test_console_script_runs():
    proc = subprocess.run(["adapix", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "adapix" in proc.stdout
