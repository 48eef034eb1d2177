import json
import math

import pytest

from obstruct.cli import (
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_PASS,
    EXIT_VIOLATION,
    RunConfig,
    build_system,
    cmd_decomp,
    cmd_entropy,
    cmd_expand,
    cmd_factor,
    cmd_mme,
    cmd_verify,
    main,
    read_expansion_file,
)
from obstruct.errors import InputError
from obstruct.factors import BlockCode
from obstruct.measures import parry_measure
from obstruct.reports import dumps_report, reports_equal


@pytest.fixture()
def golden_file(tmp_path):
    path = tmp_path / "golden.txt"
    path.write_text("period=2\n10\n")
    return str(path)


@pytest.fixture()
def xor_file(tmp_path):
    path = tmp_path / "xor.code"
    BlockCode.xor().to_file(path)
    return str(path)


class TestConfig:
    def test_roundtrip(self):
        cfg = RunConfig(beta="1.5", nmax=30, emit_csv=True)
        assert RunConfig.from_dict(cfg.to_dict()) == cfg

    def test_unknown_field_rejected(self):
        with pytest.raises(InputError):
            RunConfig.from_dict({"nonsense": 1})

    def test_validation(self):
        with pytest.raises(InputError):
            RunConfig(beta="2", nmax=0).validate()
        with pytest.raises(InputError):
            RunConfig(beta="2", report_format="xml").validate()

    def test_exactly_one_system_source(self, golden_file):
        with pytest.raises(InputError):
            build_system(RunConfig())
        with pytest.raises(InputError):
            build_system(RunConfig(beta="2", expansion_file=golden_file))


class TestExpansionFile:
    def test_read(self, golden_file):
        digits, period = read_expansion_file(golden_file)
        assert digits == (1, 0) and period == 2

    def test_truncated_without_period(self, tmp_path):
        path = tmp_path / "trunc.txt"
        path.write_text("10100000\n")
        digits, period = read_expansion_file(str(path))
        assert period is None
        system = build_system(RunConfig(expansion_file=str(path)))
        assert system.horizon == 8

    def test_missing_digits(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# comment only\n")
        with pytest.raises(InputError):
            read_expansion_file(str(path))


class TestCommands:
    def test_expand(self):
        code, report = cmd_expand(RunConfig(beta="1.5", horizon=20))
        assert code == EXIT_PASS
        assert report["payload"]["digits"].startswith("10100000")

    def test_entropy_full_shift(self):
        code, report = cmd_entropy(RunConfig(beta="2", nmax=30))
        assert code == EXIT_PASS
        assert float(report["payload"]["rate"]) == pytest.approx(
            math.log(2), abs=1e-9
        )

    def test_decomp_split(self, golden_file):
        code, report = cmd_decomp(
            RunConfig(expansion_file=golden_file), "split", word_text="00101"
        )
        assert code == EXIT_PASS
        payload = report["payload"]
        assert (payload["prefix_len"], payload["core_len"], payload["suffix_len"]) == (
            0, 2, 3,
        )

    def test_decomp_coverage(self):
        code, report = cmd_decomp(
            RunConfig(beta="2", level=3), "coverage", n=10
        )
        assert report["payload"]["coverage"] == "15/16"

    def test_decomp_spec(self, golden_file):
        code, report = cmd_decomp(RunConfig(expansion_file=golden_file), "spec")
        assert code == EXIT_PASS
        assert report["payload"]["gluing_time"] == 0

    def test_mme(self, golden_file):
        code, report = cmd_mme(RunConfig(expansion_file=golden_file), n=120)
        assert code == EXIT_PASS
        assert float(report["payload"]["max_gap_at_depth"]) < 0.05

    def test_verify_golden_passes(self, golden_file):
        code, report = cmd_verify(RunConfig(expansion_file=golden_file))
        assert code == EXIT_PASS
        assert report["payload"]["uniqueness_hypotheses_met"] is True
        assert all(c["passed"] for c in report["payload"]["checks"])

    def test_verify_degenerate_fails(self, golden_file):
        code, report = cmd_verify(
            RunConfig(expansion_file=golden_file, degenerate=True)
        )
        assert code == EXIT_VIOLATION
        assert report["payload"]["uniqueness_hypotheses_met"] is False

    def test_verify_inconclusive_when_gap_capped(self, golden_file):
        code, report = cmd_verify(RunConfig(expansion_file=golden_file, tau_max=0))
        assert code == EXIT_INCONCLUSIVE

    def test_factor_identity(self, golden_file, tmp_path):
        ident = tmp_path / "ident.code"
        BlockCode.identity(2).to_file(ident)
        code, report = cmd_factor(
            RunConfig(expansion_file=golden_file), str(ident)
        )
        assert code == EXIT_PASS
        payload = report["payload"]
        assert payload["expansivity"]["verdict"] == "positively-expansive"
        assert float(payload["suffix_rate"]) == 0.0
        assert payload["uniqueness_hypotheses_met"] is True

    def test_factor_merge(self, golden_file, tmp_path):
        merge = tmp_path / "merge.code"
        BlockCode.merge_all(2).to_file(merge)
        code, report = cmd_factor(RunConfig(expansion_file=golden_file), str(merge))
        assert report["payload"]["image_entropy"]["verdict"] == "single-point-at-scale"
        assert report["payload"]["uniqueness_hypotheses_met"] is False

    def test_factor_xor(self, xor_file):
        code, report = cmd_factor(RunConfig(beta="2"), xor_file)
        assert code == EXIT_PASS
        bound = float(report["payload"]["image_entropy"]["rate_bound"])
        assert bound >= math.log(2) / 2 - 1e-12


class TestDeterminism:
    def test_verify_reports_identical(self, golden_file):
        cfg = RunConfig(expansion_file=golden_file)
        _, a = cmd_verify(cfg)
        _, b = cmd_verify(cfg)
        assert reports_equal(a, b)
        strip = lambda r: dumps_report({k: v for k, v in r.items() if k != "meta"})
        assert strip(a) == strip(b)

    def test_timestamp_is_isolated(self, golden_file):
        cfg = RunConfig(expansion_file=golden_file)
        _, a = cmd_verify(cfg)
        assert "timestamp" in a["meta"]
        payload_text = dumps_report(a["payload"])
        assert a["meta"]["timestamp"] not in payload_text


class TestMainEntry:
    def test_exit_codes_via_argv(self, golden_file, capsys):
        assert main(["verify", "--expansion-file", golden_file]) == EXIT_PASS
        capsys.readouterr()

    def test_missing_system_is_input_error(self, capsys):
        assert main(["entropy"]) == EXIT_INPUT
        capsys.readouterr()

    def test_corrupt_measure_file(self, golden_file, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema": "nope"}')
        code = main(
            ["verify", "--expansion-file", golden_file, "--measure-file", str(bad)]
        )
        assert code == EXIT_INPUT
        capsys.readouterr()

    def test_out_directory_files(self, golden_file, tmp_path, capsys):
        out = tmp_path / "reports"
        assert (
            main(
                ["entropy", "--expansion-file", golden_file, "--nmax", "20",
                 "--out", str(out), "--emit-csv"]
            )
            == EXIT_PASS
        )
        report = json.loads((out / "entropy.json").read_text())
        assert report["schema"] == 1
        counts = (out / "counts.csv").read_text().strip().split("\n")
        assert counts[0] == "1,2"
        separated = (out / "separated.csv").read_text().strip().split("\n")
        assert separated[0] == "1,0,2"
        capsys.readouterr()

    def test_factor_pair_dump(self, golden_file, tmp_path, capsys):
        ident = tmp_path / "ident.code"
        BlockCode.identity(2).to_file(ident)
        out = tmp_path / "fac"
        assert (
            main(
                ["factor", "--expansion-file", golden_file,
                 "--code-file", str(ident), "--out", str(out)]
            )
            == EXIT_PASS
        )
        assert (out / "pair_automaton.csv").exists()
        capsys.readouterr()


def test_expand_dumps_automaton_csv(golden_file, tmp_path, capsys):
    out = tmp_path / "exp"
    assert (
        main(["expand", "--expansion-file", golden_file, "--out", str(out),
              "--emit-csv"])
        == EXIT_PASS
    )
    rows = (out / "automaton.csv").read_text().strip().split("\n")
    assert sorted(rows) == ["0,0,0", "0,1,1", "1,0,0"]
    capsys.readouterr()


def test_factor_window_beyond_cap(golden_file, tmp_path, capsys):
    big = tmp_path / "big.code"
    big.write_text(f"{'0' * 30} -> 0\n")
    code = main(
        ["factor", "--expansion-file", golden_file, "--code-file", str(big)]
    )
    assert code == EXIT_INPUT
    capsys.readouterr()


def test_thread_cap_does_not_change_results(golden_file, monkeypatch):
    system = build_system(RunConfig(expansion_file=golden_file))
    base = system.enumerate_language(8)
    monkeypatch.setenv("OBSTRUCT_THREADS", "4")
    sharded = system.enumerate_language(8)
    assert sharded == base
    monkeypatch.setenv("OBSTRUCT_THREADS", "not-a-number")
    assert system.enumerate_language(5) == system.enumerate_language(5)


def test_measure_file_accepted_when_valid(golden_file, tmp_path):
    system = build_system(RunConfig(expansion_file=golden_file))
    measure = parry_measure(system, 12)
    path = tmp_path / "measure.json"
    path.write_text(json.dumps(measure.to_json_dict()))
    cfg = RunConfig(expansion_file=golden_file, measure_file=str(path))
    code, report = cmd_verify(cfg)
    assert code == EXIT_PASS
