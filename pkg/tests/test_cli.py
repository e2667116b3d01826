"""Golden-file tests for the command-line front end.

Set ``UPDATE_GOLDEN=1`` to rewrite the files under tests/golden after an
intended output change.
"""

from __future__ import annotations

import contextlib
import io
import os
from pathlib import Path

import pytest

from prorank.cli import main

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# name -> (argv, expected exit code); ``{out}`` is replaced by a scratch file
CASES = {
    "invariant_rank_q8": (["invariant", "Q8.group", "rank"], 0),
    "invariant_d_trivial": (["invariant", "trivial.group", "d"], 0),
    "invariant_profile_c2c2c3": (["invariant", "C2xC2xC3.group", "profile", "--pi", "2,3"], 0),
    "invariant_series_c1024": (["invariant", "C1024.group", "frattini-series"], 0),
    "eval_commutative_s3": (["eval", "commutative.formula", "S3.group", "--mode", "naive", "--witness"], 0),
    "eval_fast_unsupported": (["eval", "commutative.formula", "C4xC2.group", "--mode", "fast"], 1),
    "eval_deep_capped": (["eval", "deep.formula", "C2xC2xC2.group", "--cap-steps", "1000000"], 2),
    "build_beta1": (["build-sentence", "beta1", "--pi", "2", "--r", "2", "-o", "{out}"], 0),
    "build_gamma_6": (["build-sentence", "gamma", "--q", "6", "-o", "{out}"], 0),
    "build_quotient_iso": (["build-sentence", "quotient-iso", "--b-file", "C2.group",
                            "--phi", "E y . x = y*y", "-o", "{out}"], 0),
    "verify_frattini_rank_corpus_64": (["verify", "thm-1-3", "corpus:64:2"], 0),
    "verify_omega1_corpus_81": (["verify", "hl", "corpus:81:2,3"], 0),
    "verify_rank_axiom_c2c2c2": (["verify", "rank-axiom", "C2xC2xC2.group", "--r", "2", "--pi", "2"], 1),
    "verify_rank_axiom_structured": (["verify", "rank-axiom", "C2xC2xC2.group", "--r", "2", "--pi", "2",
                                      "--format", "structured"], 1),
    "verify_dimension_families": (["verify", "thm-1-4", "uniform_2_2.family", "abelian_3_1_C3.family",
                                 "jordan_5_2.family"], 0),
    "usage_error": (["invariant", "missing.group", "rank"], 1),
}


def run_cli(argv, monkeypatch, tmp_path):
    out_file = tmp_path / "out.formula"
    argv = [a.replace("{out}", str(out_file)) for a in argv]
    monkeypatch.chdir(DATA)
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
    text = out.getvalue() + err.getvalue()
    if out_file.exists():
        text += "--- written file ---\n" + out_file.read_text()
    return code, text.replace(str(out_file), "<out>")


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, monkeypatch, tmp_path):
    argv, expected_code = CASES[name]
    code, text = run_cli(argv, monkeypatch, tmp_path)
    assert code == expected_code
    path = GOLDEN / f"{name}.txt"
    record = f"$ prorank {' '.join(argv)}\n{text}[exit {code}]\n"
    if os.environ.get("UPDATE_GOLDEN"):
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(record)
    assert path.exists(), f"missing golden file {path.name}; run with UPDATE_GOLDEN=1"
    assert record == path.read_text()


def test_structured_output_is_byte_stable(monkeypatch, tmp_path):
    argv = ["verify", "lucchini", "corpus:24:2,3", "--format", "structured"]
    first = run_cli(argv, monkeypatch, tmp_path)
    second = run_cli(argv, monkeypatch, tmp_path)
    assert first == second and first[0] == 0
    assert "millis" not in first[1]


def test_timing_adds_millis(monkeypatch, tmp_path):
    code, text = run_cli(["verify", "hl", "C4xC2.group", "--format", "structured", "--timing"],
                         monkeypatch, tmp_path)
    assert code == 0 and '"millis"' in text


def test_built_gamma_holds_on_abelian_group(monkeypatch, tmp_path):
    target = tmp_path / "gamma2.formula"
    code, _ = run_cli(["build-sentence", "gamma", "--q", "2", "-o", str(target)], monkeypatch, tmp_path)
    assert code == 0
    code, text = run_cli(["eval", str(target), "C4xC2.group"], monkeypatch, tmp_path)
    assert code == 0 and text.startswith("true")
