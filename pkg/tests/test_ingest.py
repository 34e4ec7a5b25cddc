import pytest

from citegrow import (
    IngestConfig,
    IngestError,
    build_seed_and_schedule,
    parse_citations,
    parse_papers,
)
from citegrow.ingest import PaperRecord


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


FIVE_PAPERS = "p1\t1970\np2\t1971\np3\t1980\np4\t1985\np5\t1985\n"


class TestParsePapers:
    def test_clean_file(self, tmp_path):
        parsed = parse_papers(write(tmp_path, "p.tsv", FIVE_PAPERS))
        assert len(parsed.records) == 5
        assert parsed.malformed == 0
        assert parsed.records[0] == PaperRecord(id="p1", year=1970)

    def test_blank_lines_ignored(self, tmp_path):
        parsed = parse_papers(write(tmp_path, "p.tsv", "p1\t1970\n\n\np2\t1971\n"))
        assert len(parsed.records) == 2
        assert parsed.total_lines == 2

    def test_malformed_within_budget(self, tmp_path):
        lines = [f"p{i}\t1980" for i in range(200)] + ["broken line"]
        parsed = parse_papers(write(tmp_path, "p.tsv", "\n".join(lines) + "\n"))
        assert parsed.malformed == 1
        assert len(parsed.records) == 200

    def test_malformed_over_one_percent_aborts(self, tmp_path):
        lines = ["p1\t1970", "bad", "p2\tnot-a-year"]
        with pytest.raises(IngestError, match="malformed"):
            parse_papers(write(tmp_path, "p.tsv", "\n".join(lines) + "\n"))

    def test_duplicate_id_is_malformed(self, tmp_path):
        lines = [f"p{i}\t1980" for i in range(200)] + ["p0\t1990"]
        parsed = parse_papers(write(tmp_path, "p.tsv", "\n".join(lines) + "\n"))
        assert parsed.malformed == 1

    def test_year_out_of_range_is_malformed(self, tmp_path):
        lines = [f"p{i}\t1980" for i in range(200)] + ["px\t1492"]
        parsed = parse_papers(write(tmp_path, "p.tsv", "\n".join(lines) + "\n"))
        assert parsed.malformed == 1

    def test_empty_file_rejected(self, tmp_path):
        with pytest.raises(IngestError, match="no usable"):
            parse_papers(write(tmp_path, "p.tsv", "\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestError, match="not found"):
            parse_papers(tmp_path / "absent.tsv")


class TestParseCitations:
    def test_drop_counters(self, tmp_path):
        text = (
            "p2\tp1\n"      # kept
            "p2\tp1\n"      # duplicate
            "p3\tp3\n"      # self
            "p9\tp1\n"      # unknown citing
            "p2\tp9\n"      # unknown cited
        )
        parsed = parse_citations(write(tmp_path, "c.tsv", text),
                                 {"p1", "p2", "p3"})
        assert parsed.edges == (("p2", "p1"),)
        assert parsed.duplicates == 1
        assert parsed.dropped_self == 1
        assert parsed.dropped_unknown == 2

    def test_malformed_rule(self, tmp_path):
        lines = [f"a{i}\tb{i}" for i in range(300)] + ["one-field"]
        known = {f"a{i}" for i in range(300)} | {f"b{i}" for i in range(300)}
        parsed = parse_citations(write(tmp_path, "c.tsv", "\n".join(lines) + "\n"), known)
        assert parsed.malformed == 1
        assert len(parsed.edges) == 300


class TestBuildSeedAndSchedule:
    CONFIG = IngestConfig(seed_start=1960, seed_end=1975, cutoff=2000, horizon=2010)

    def build(self, extra_papers=(), citations=()):
        papers = [PaperRecord("p1", 1970), PaperRecord("p2", 1971),
                  PaperRecord("p3", 1980), PaperRecord("p4", 1985),
                  PaperRecord("p5", 1985), *extra_papers]
        return build_seed_and_schedule(papers, citations, self.CONFIG)

    def test_five_paper_fixture(self):
        result = self.build(citations=[
            ("p2", "p1"),   # inside the seed
            ("p3", "p1"),   # p3 gets out-degree 1
            ("p4", "p3"),
            ("p4", "p1"),   # p4 gets out-degree 2
            ("p4", "p5"),   # same year, dropped
            ("p1", "p4"),   # forward in time, dropped
        ])
        assert result.seed.nodes == ((0, 1970), (1, 1971))
        assert result.seed.edges == ((1, 0),)
        assert result.schedule.entries == {1980: [1], 1985: [2, 0]}
        assert result.dropped_same_year == 1
        assert result.dropped_forward == 1
        assert result.id_map == {"p1": 0, "p2": 1, "p3": 2, "p4": 3, "p5": 4}

    def test_out_of_window_papers_ignored(self):
        result = self.build(
            extra_papers=[PaperRecord("old", 1940), PaperRecord("late", 2050)],
            citations=[("p3", "old"), ("late", "p1")],
        )
        assert "old" not in result.id_map
        assert "late" not in result.id_map
        assert result.dropped_out_of_window == 2

    def test_papers_after_cutoff_still_scheduled(self):
        # papers between cutoff and horizon cite but are never classified;
        # they must still enter the schedule
        result = self.build(extra_papers=[PaperRecord("p6", 2005)],
                            citations=[("p6", "p1")])
        assert result.schedule.entries[2005] == [1]

    def test_ids_dense_and_sorted_by_year_then_id(self):
        result = self.build()
        assert list(result.id_map.values()) == sorted(result.id_map.values())
        years = {pid: y for pid, y in
                 [("p1", 1970), ("p2", 1971), ("p3", 1980), ("p4", 1985), ("p5", 1985)]}
        ordered = sorted(result.id_map, key=lambda pid: result.id_map[pid])
        assert ordered == sorted(ordered, key=lambda pid: (years[pid], pid))

    def test_no_seed_papers_rejected(self):
        with pytest.raises(IngestError, match="seed"):
            build_seed_and_schedule([PaperRecord("p1", 1990)], [], self.CONFIG)

    def test_config_ordering_validated(self):
        with pytest.raises(Exception):
            IngestConfig(seed_start=1980, seed_end=1975, cutoff=2000, horizon=2010)
        with pytest.raises(Exception):
            IngestConfig(seed_start=1960, seed_end=1975, cutoff=2011, horizon=2010)
