"""End-to-end tests of the packlim command-line tool and its exit codes."""

import json
import os
import subprocess
from fractions import Fraction
from pathlib import Path

import pytest

BIN = os.environ.get("PACKLIM_BIN")

pytestmark = pytest.mark.skipif(not BIN, reason="PACKLIM_BIN not set")


def run(*args, **kw):
    return subprocess.run([BIN, *args], capture_output=True, text=True, **kw)


def test_pack_verify_render(tmp_path):
    out = tmp_path / "r100.json"
    svg = tmp_path / "r100.svg"

    p = run("pack", "moser_rectangles", "-n", "100", "-p", "21/20", "-o", str(out))
    assert p.returncode == 0
    assert "coverage=40000/44541" in p.stdout

    v = run("verify", str(out))
    assert v.returncode == 0
    assert v.stdout.strip().splitlines()[-1].startswith("valid coverage=40000/44541")

    r = run("render", str(out), "-o", str(svg))
    assert r.returncode == 0
    text = svg.read_text()
    assert text.count("<polygon") == 100
    # deterministic output
    run("render", str(out), "-o", str(svg) + ".2")
    assert Path(str(svg) + ".2").read_text() == text


def test_pack_capacity_failure(tmp_path):
    p = run("pack", "moser_squares", "-n", "4", "-p", "1/2", "-o", str(tmp_path / "x.json"))
    assert p.returncode == 1
    assert "piece 4" in p.stderr


def test_pack_usage_error(tmp_path):
    p = run("pack", "moser_rectangles", "-n", "0", "-p", "1/1", "-o", str(tmp_path / "x.json"))
    assert p.returncode == 64


def test_verify_detects_overlap(tmp_path):
    out = tmp_path / "c.json"
    run("pack", "moser_rectangles", "-n", "3", "-p", "1/1", "-o", str(out))
    doc = json.loads(out.read_text())
    doc["placements"][1]["xi"] = ["0/1", "0/1"]  # collide with piece 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    v = run("verify", str(bad))
    assert v.returncode == 1
    assert "overlap 1 2" in v.stdout
    assert v.stdout.strip().splitlines()[-1].startswith("invalid")


def test_verify_mode_override(tmp_path):
    # reflection placement: valid generally, a mode violation when oriented
    doc = {
        "format_version": 1,
        "arithmetic": "exact",
        "dim": 2,
        "mode": "general",
        "collection": {"kind": "custom", "dims": [["1/2", "1/3"]]},
        "target": {"shape": "brick", "dims": ["2/1", "2/1"]},
        "placements": [
            {"piece_id": 1, "theta": ["0/1", "1/1", "1/1", "0/1"], "xi": ["1/2", "1/2"]}
        ],
    }
    f = tmp_path / "refl.json"
    f.write_text(json.dumps(doc))
    assert run("verify", str(f)).returncode == 0
    v = run("verify", str(f), "--mode-override", "oriented")
    assert v.returncode == 1
    assert "mode 1" in v.stdout


def test_verify_parse_error(tmp_path):
    f = tmp_path / "garbage.json"
    f.write_text("{ not json")
    v = run("verify", str(f))
    assert v.returncode == 65


def test_unknown_subcommand():
    assert run("frobnicate").returncode == 64


def _homothet_entry(j, constant_from):
    lam = Fraction(j + 1, j)
    off = Fraction(1, j) if j < constant_from else Fraction(0)

    def rat(q):
        q = Fraction(q)
        return f"{q.numerator}/{q.denominator}"

    def place(pid, x, y):
        return {"piece_id": pid, "theta": ["1/1", "0/1", "0/1", "1/1"], "xi": [rat(x), rat(y)]}

    return {
        "format_version": 1,
        "arithmetic": "exact",
        "dim": 2,
        "mode": "translated",
        "collection": {"kind": "custom", "dims": [["1/1", "1/1"]] * 4},
        "target": {
            "shape": "homothet",
            "lambda": rat(lam),
            "base": {"shape": "brick", "dims": ["2/1", "2/1"]},
        },
        "placements": [
            place(1, 0, 0),
            place(2, 1 + off, 0),
            place(3, 0, 1 + off),
            place(4, 1 + off, 1 + off),
        ],
    }


def test_limit_pipeline(tmp_path):
    paths = []
    for j in range(1, 41):
        f = tmp_path / f"e{j:02d}.json"
        f.write_text(json.dumps(_homothet_entry(j, 21)))
        paths.append(str(f))
    out = tmp_path / "limit.json"
    p = run("limit", *paths, "-o", str(out), "--tol", "1e-9", "--min-keep", "5")
    assert p.returncode == 0
    assert "verdict=valid" in p.stdout

    report = json.loads((tmp_path / "limit.json.report.json").read_text())
    assert report["verdict"] == "valid"
    assert report["coverage"] == "1/1"
    assert report["kept_indices"] == list(range(20, 40))
    assert report["cluster_diameter"] == "0"

    v = run("verify", str(out))
    assert v.returncode == 0


def test_limit_divergence(tmp_path):
    paths = []
    for j in range(1, 21):
        lam = Fraction(j + 1, j)
        x = lam * lam / (lam - 1)
        doc = {
            "format_version": 1,
            "arithmetic": "exact",
            "dim": 2,
            "mode": "translated",
            "collection": {"kind": "custom", "dims": [["1/1", "1/1"]]},
            "target": {
                "shape": "homothet",
                "lambda": f"{lam.numerator}/{lam.denominator}",
                "base": {"shape": "funnel"},
            },
            "placements": [
                {
                    "piece_id": 1,
                    "theta": ["1/1", "0/1", "0/1", "1/1"],
                    "xi": [f"{x.numerator}/{x.denominator}", "-1/2"],
                }
            ],
        }
        f = tmp_path / f"f{j:02d}.json"
        f.write_text(json.dumps(doc))
        paths.append(str(f))
    p = run("limit", *paths, "-o", str(tmp_path / "out.json"), "--tol", "1e-3")
    assert p.returncode == 2
    assert "divergence" in p.stderr


def test_limit_mixed_truncation_usage_error(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run("pack", "moser_rectangles", "-n", "3", "-p", "11/10", "-o", str(a))
    run("pack", "moser_rectangles", "-n", "4", "-p", "11/10", "-o", str(b))
    p = run("limit", str(a), str(b), "-o", str(tmp_path / "o.json"))
    assert p.returncode == 64


def test_brick_limit_csv(tmp_path):
    csv = tmp_path / "dims.csv"
    csv.write_text("".join(f"{j + 1}/{j}, 2/1\n" for j in range(1, 201)))
    p = run("brick-limit", str(csv), "-w", "50")
    assert p.returncode == 0
    assert "V=201/100" in p.stdout
    assert "152/151" in p.stdout

    bad = tmp_path / "bad.csv"
    bad.write_text("1/2, oops\n")
    assert run("brick-limit", str(bad)).returncode == 65


def test_render_rejects_non_2d(tmp_path):
    doc = {
        "format_version": 1,
        "arithmetic": "exact",
        "dim": 3,
        "mode": "translated",
        "collection": {"kind": "custom", "dims": [["1/1", "1/1", "1/1"]]},
        "target": {"shape": "brick", "dims": ["2/1", "2/1", "2/1"]},
        "placements": [],
    }
    f = tmp_path / "c3.json"
    f.write_text(json.dumps(doc))
    p = run("render", str(f), "-o", str(tmp_path / "c3.svg"))
    assert p.returncode == 64
