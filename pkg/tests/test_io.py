from __future__ import annotations

import json

import pytest

from chainedbell import (
    ExperimentConfig,
    IncompleteDataError,
    InvalidInputError,
    ParseError,
    RunManifest,
    build_plan,
    datasets,
    estimate_chained,
    parse_counts_csv,
    parse_tomo_csv,
    sha256_file,
    simulate_dataset,
    write_counts_csv,
    write_tomo_csv,
)
from chainedbell.io import counts_csv_text, render_csv, render_json

COUNTS_SHA256 = "6e6f2bc2653af02bb29c715ceef7f9d6d218d0dfa7a39a038d04e20756c4413f"
TOMO_SHA256 = "b8a1b61e698438f50955d6f71d6f772ef3728125d3003f57be9758f72d693806"

COUNTS_HEADER_LINE = (
    "group_a,group_b,m,n,singles_a_cps,coinc_cps,duration_coinc_s,duration_singles_s"
)


def _fixture_lines():
    return datasets.counts_fixture_path().read_text().splitlines()


class TestFixtureIntegrity:
    def test_counts_fixture_hash_pinned(self):
        assert sha256_file(datasets.counts_fixture_path()) == COUNTS_SHA256

    def test_tomo_fixture_hash_pinned(self):
        assert sha256_file(datasets.tomo_fixture_path()) == TOMO_SHA256


class TestParseCounts:
    def test_fixture_shape(self, reference_counts):
        plan, groups = reference_counts
        assert plan.n_bases == 6
        assert len(groups) == 12
        all_coinc = [v for g in groups for v in g.coincidences.values()]
        assert len(all_coinc) == 48
        first_group = groups[0]
        assert first_group.group.key == (0, 11)
        assert first_group.coincidences[(0, 11)] == 6.7

    def test_groups_arrive_in_plan_order(self, reference_counts):
        plan, groups = reference_counts
        assert [g.group.key for g in groups] == [g.key for g in plan.groups]

    def test_empty_file(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        with pytest.raises(ParseError):
            parse_counts_csv(empty)

    def test_header_only_file(self, tmp_path):
        path = tmp_path / "header.csv"
        path.write_text(COUNTS_HEADER_LINE + "\n")
        with pytest.raises(ParseError):
            parse_counts_csv(path)

    def test_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ParseError) as err:
            parse_counts_csv(path)
        assert err.value.line == 1

    def test_malformed_number_cites_line(self, tmp_path):
        lines = _fixture_lines()
        lines[3] = lines[3].replace("19017", "not-a-number")
        path = tmp_path / "garbled.csv"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseError) as err:
            parse_counts_csv(path)
        assert err.value.line == 4
        assert "line 4" in str(err.value)

    def test_missing_slot_cites_pair(self, tmp_path):
        lines = _fixture_lines()
        removed = [line for line in lines if not line.startswith("0,11,12,23")]
        assert len(removed) == len(lines) - 1
        path = tmp_path / "missing.csv"
        path.write_text("\n".join(removed) + "\n")
        with pytest.raises(IncompleteDataError) as err:
            parse_counts_csv(path)
        assert "(12, 23)" in str(err.value)

    def test_missing_group_detected(self, tmp_path):
        lines = [
            line for line in _fixture_lines() if not line.startswith("10,11,")
        ]
        path = tmp_path / "gone.csv"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises((IncompleteDataError, ParseError)):
            parse_counts_csv(path)

    def test_duplicate_slot_rejected(self, tmp_path):
        lines = _fixture_lines()
        lines.append(lines[1])
        path = tmp_path / "dup.csv"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseError):
            parse_counts_csv(path)

    def test_foreign_pair_rejected(self, tmp_path):
        lines = _fixture_lines()
        lines[1] = lines[1].replace("0,11,0,11", "0,11,2,11")
        path = tmp_path / "foreign.csv"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseError):
            parse_counts_csv(path)

    def test_inconsistent_durations_rejected(self, tmp_path):
        lines = _fixture_lines()
        lines[1] = lines[1].replace(",40,40", ",39,40")
        path = tmp_path / "durations.csv"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseError):
            parse_counts_csv(path)


class TestCountsRoundTrip:
    def test_serialize_parse_preserves_estimates(self, tmp_path):
        cfg = ExperimentConfig(n_bases=5, seed=31)
        groups = simulate_dataset(cfg)
        plan = build_plan(5)
        in_memory = estimate_chained(plan, groups, resamples=150, master_seed=2)

        path = tmp_path / "sim.csv"
        write_counts_csv(path, plan, groups)
        plan_back, groups_back = parse_counts_csv(path)
        from_disk = estimate_chained(plan_back, groups_back,
                                     resamples=150, master_seed=2)

        assert from_disk.i_n == pytest.approx(in_memory.i_n, abs=1e-12)
        assert from_disk.nu_n == pytest.approx(in_memory.nu_n, abs=1e-12)
        assert from_disk.delta_n == pytest.approx(in_memory.delta_n, abs=1e-12)
        assert from_disk.sigma_delta == pytest.approx(
            in_memory.sigma_delta, abs=1e-12)

    def test_fixture_round_trips_exactly(self, tmp_path, reference_counts):
        plan, groups = reference_counts
        path = tmp_path / "back.csv"
        write_counts_csv(path, plan, groups)
        _plan2, groups2 = parse_counts_csv(path)
        for a, b in zip(groups, groups2):
            assert a.coincidences == b.coincidences
            assert a.singles_a == b.singles_a

    def test_text_rendering_matches_file_writer(self, tmp_path, reference_counts):
        plan, groups = reference_counts
        path = tmp_path / "text.csv"
        write_counts_csv(path, plan, groups)
        assert path.read_text() == counts_csv_text(plan, groups)


class TestParseTomo:
    def test_fixture_shape(self, reference_tomo):
        assert len(reference_tomo.rows) == 36
        assert reference_tomo.complete
        first = reference_tomo.rows[0]
        assert (first.setting.basis_a, first.setting.basis_b) == ("H", "H")
        assert first.rate_cps == 240.0

    def test_unknown_basis_label_cites_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "basis_a,basis_b,rate_cps,sigma_cps,duration_s\nQ,H,1.0,0.1,30\n")
        with pytest.raises(ParseError) as err:
            parse_tomo_csv(path)
        assert err.value.line == 2

    def test_duplicate_setting_rejected(self, tmp_path):
        path = tmp_path / "dup.csv"
        path.write_text(
            "basis_a,basis_b,rate_cps,sigma_cps,duration_s\n"
            "H,H,1.0,0.1,30\nH,H,2.0,0.1,30\n")
        with pytest.raises(ParseError):
            parse_tomo_csv(path)

    def test_plus_minus_aliases_accepted(self, tmp_path):
        path = tmp_path / "alias.csv"
        path.write_text(
            "basis_a,basis_b,rate_cps,sigma_cps,duration_s\n+,-,1.0,0.1,30\n")
        data = parse_tomo_csv(path)
        row = data.rows[0]
        assert (row.setting.basis_a, row.setting.basis_b) == ("P", "M")
        assert not data.complete

    def test_round_trip(self, tmp_path, reference_tomo):
        path = tmp_path / "tomo.csv"
        write_tomo_csv(path, reference_tomo)
        back = parse_tomo_csv(path)
        assert back == reference_tomo


class TestReports:
    def test_json_rendering_is_deterministic_and_parseable(self):
        report = {"b": 2.5, "a": {"y": [1, 2], "x": 0.1942}}
        text = render_json(report)
        assert text == render_json(report)
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == report

    def test_csv_rendering(self):
        text = render_csv(("n", "value"), [[6, 0.1942], [7, 0.1984]])
        assert text.splitlines() == ["n,value", "6,0.1942", "7,0.1984"]

    def test_manifest_contract(self):
        manifest = RunManifest(n_bases=6, plane="plus-L", seed=1,
                               inputs={"a.csv": "00ff"})
        payload = manifest.as_dict()
        assert payload["schema_version"] == "1"
        assert payload["n_bases"] == 6
        assert payload["inputs"] == {"a.csv": "00ff"}
        assert "tool_version" in payload

    def test_manifest_rejects_unknown_schema(self):
        with pytest.raises(InvalidInputError):
            RunManifest(schema_version="999")
        with pytest.raises(InvalidInputError):
            RunManifest(n_bases=1)
