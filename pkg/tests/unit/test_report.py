"""Unit tests for PIT histograms, KS scores, report files and charts."""

import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from meanfield.diagnostics import (
    ErrorBudget,
    ExperimentMode,
    HistogramReport,
    bin_edges_in_gumbel_scale,
    error_budget,
    histogram_counts,
    ks_critical_values,
    ks_p_value,
    ks_statistic,
    render_histogram_svg,
    summary_row,
    uniformity_report,
    write_chart_svg,
    write_histogram_csv,
    write_maxima_csv,
    write_report_json,
    write_summary_csv,
)
from meanfield.extremes import gumbel_cdf, standard_normalizers

pytestmark = pytest.mark.unit

SVG = "{http://www.w3.org/2000/svg}"
MIDPOINTS = [(k + 0.5) / 10 for k in range(10)]


class TestHistogramCounts:
    """Test histogram_counts."""

    def test_one_value_per_bin(self):
        """Test that bin midpoints fill every bin once."""
        assert histogram_counts(MIDPOINTS, 0.1) == [1] * 10

    def test_right_edge_goes_to_last_bin(self):
        """Test that U = 1 is counted in the closed last bin."""
        assert histogram_counts([1.0], 0.1) == [0] * 9 + [1]

    def test_left_edges(self):
        """Test half-open bins."""
        assert histogram_counts([0.0, 0.5], 0.25) == [1, 0, 1, 0]

    def test_counts_sum_to_sample_size(self, rng):
        """Test that no value is lost."""
        values = rng.uniform(size=997)
        assert sum(histogram_counts(values, 0.05)) == 997

    @pytest.mark.parametrize("width", [0.3, 0.0, 1.5])
    def test_invalid_width(self, width):
        """Test that the width must divide 1."""
        with pytest.raises(ValueError):
            histogram_counts([0.5], width)


class TestKolmogorovSmirnov:
    """Test the KS statistic and its reference values."""

    def test_midpoints(self):
        """Test D = 1 / (2 R) for perfectly spread values."""
        assert ks_statistic(MIDPOINTS) == pytest.approx(0.05)

    def test_point_mass(self):
        """Test D = 1 when every value is 0."""
        assert ks_statistic([0.0] * 5) == 1.0

    def test_order_independent(self, rng):
        """Test that the statistic does not depend on sample order."""
        values = rng.uniform(size=50)
        assert ks_statistic(values) == ks_statistic(values[::-1])

    def test_empty_sample(self):
        """Test rejection of an empty sample."""
        with pytest.raises(ValueError):
            ks_statistic([])

    def test_critical_values(self):
        """Test 1.358 / sqrt(R) and 1.628 / sqrt(R)."""
        assert ks_critical_values(100) == pytest.approx((0.1358, 0.1628))

    def test_p_value_range(self):
        """Test p-values at the extremes of D."""
        assert ks_p_value(1.0, 5) == pytest.approx(0.0, abs=1e-12)
        assert ks_p_value(0.01, 10) == pytest.approx(1.0)
        assert 0.0 < ks_p_value(0.1358, 100) < 0.1


class TestErrorBudget:
    """Test error_budget."""

    def test_reference_values(self):
        """Test dt = 1e-4, N = 200, R = 1000."""
        budget = error_budget(1e-4, 200, 1000)
        assert budget.discretization == pytest.approx(0.0326, abs=1e-4)
        assert budget.lln_per_bin == pytest.approx(0.0158, abs=1e-4)

    def test_exact_sampling(self):
        """Test that dt = 0 has no discretization term."""
        assert error_budget(0.0, 1000, 100) == ErrorBudget(0.0, 0.05)

    def test_invalid_arguments(self):
        """Test rejection of negative dt and empty populations."""
        with pytest.raises(ValueError):
            error_budget(-1e-4, 200, 1000)
        with pytest.raises(ValueError):
            error_budget(1e-4, 0, 1000)


class TestUniformityReport:
    """Test uniformity_report and HistogramReport."""

    def test_midpoint_report(self, uniform_sample):
        """Test a report over the ten bin midpoints."""
        report = uniformity_report(uniform_sample(MIDPOINTS), 0.1, dt=1e-4)
        assert report.counts == [1] * 10
        assert report.ks_statistic == pytest.approx(0.05)
        assert report.replications == 10
        assert report.expected_per_bin == pytest.approx(1.0)
        assert report.edges[0] == 0.0 and report.edges[-1] == 1.0
        assert report.mode == "interacting"
        assert not report.rejects_at_5()

    def test_point_mass_report(self, uniform_sample):
        """Test that all-zero PIT values fill the first bin and reject uniformity."""
        report = uniformity_report(uniform_sample([0.0] * 20), 0.1)
        assert report.counts[0] == 20
        assert report.ks_statistic == 1.0
        assert report.rejects_at_1()
        assert report.error_budget.discretization == 0.0

    def test_counts_must_match_replications(self):
        """Test the count invariant."""
        with pytest.raises(ValueError):
            HistogramReport(
                bin_width=0.5,
                counts=[1, 1],
                ks_statistic=0.1,
                ks_critical_5=0.5,
                ks_critical_1=0.6,
                ks_p_value=0.9,
                replications=3,
                error_budget=ErrorBudget(0.0, 0.3),
            )

    def test_gumbel_scale_edges(self, uniform_sample):
        """Test that interior edges are Gumbel quantiles of k w."""
        report = uniformity_report(uniform_sample(MIDPOINTS), 0.1)
        edges = np.array(report.gumbel_edges)
        assert edges.size == 9
        assert np.all(np.diff(edges) > 0)
        np.testing.assert_allclose(gumbel_cdf(edges), np.arange(1, 10) / 10, atol=1e-12)
        assert edges[4] == pytest.approx(-math.log(math.log(2.0)), abs=1e-12)
        assert report.maximum_edges is None

    def test_maximum_scale_edges(self, uniform_sample):
        """Test that deterministic constants map the edges to b + a x."""
        sample = uniform_sample(MIDPOINTS)
        sample.constants = standard_normalizers(200)
        report = uniformity_report(sample, 0.1)
        expected = [
            sample.constants.b + sample.constants.a * edge for edge in report.gumbel_edges
        ]
        np.testing.assert_allclose(report.maximum_edges, expected, rtol=1e-12)
        assert report.maximum_edges == bin_edges_in_gumbel_scale(0.1, sample.constants)

    def test_single_bin_has_no_interior_edges(self):
        """Test that w = 1 leaves only the infinite outer edges."""
        assert bin_edges_in_gumbel_scale(1.0) == []

    def test_summary_row(self, uniform_sample):
        """Test the summary.csv row layout."""
        report = uniformity_report(uniform_sample(MIDPOINTS, particle_count=100), 0.1)
        row = summary_row(report, replay=2)
        assert row[:3] == (2, 100, 10)
        assert row[3] == report.ks_statistic


class TestReportFiles:
    """Test report writers."""

    def test_histogram_csv(self, uniform_sample, temp_dir):
        """Test histogram.csv rows."""
        report = uniformity_report(uniform_sample(MIDPOINTS), 0.1)
        lines = write_histogram_csv(temp_dir / "histogram.csv", report).read_text().splitlines()
        assert lines[0] == "bin_lo,bin_hi,count"
        assert len(lines) == 11
        assert sum(int(line.split(",")[2]) for line in lines[1:]) == 10

    def test_maxima_csv_without_clock(self, uniform_sample, temp_dir):
        """Test the i.i.d. layout."""
        sample = uniform_sample([0.25, 0.75], mode=ExperimentMode.IID_LIMIT)
        lines = write_maxima_csv(temp_dir / "maxima.csv", sample).read_text().splitlines()
        assert lines[0] == "rep,seed,M,U"
        assert lines[2] == "1,1,0.0,0.75"

    def test_maxima_csv_with_clock(self, uniform_sample, temp_dir):
        """Test that the empirical clock gets its own column."""
        sample = uniform_sample([0.5])
        sample.tau_n = np.array([1.25])
        lines = write_maxima_csv(temp_dir / "maxima.csv", sample).read_text().splitlines()
        assert lines == ["rep,seed,M,U,tau_N", "0,0,0.0,0.5,1.25"]

    def test_report_json(self, uniform_sample, temp_dir):
        """Test schema version, context and normalizers."""
        sample = uniform_sample(MIDPOINTS)
        sample.constants = standard_normalizers(200)
        report = uniformity_report(sample, 0.1)
        path = write_report_json(temp_dir / "report.json", report, sample, {"experiment": "demo"})
        data = json.loads(path.read_text())
        assert data["schema_version"] == "1.0"
        assert data["experiment"] == "demo"
        assert data["particle_count"] == 200
        assert data["normalizers"]["source"] == "deterministic"
        assert data["normalizers"]["a"] * data["normalizers"]["b"] == pytest.approx(1.0)
        assert data["report"]["counts"] == [1] * 10
        assert data["report"]["error_budget"]["lln_per_bin"] == pytest.approx(0.5 / math.sqrt(10))
        assert len(data["report"]["gumbel_edges"]) == 9
        assert len(data["report"]["maximum_edges"]) == 9
        assert data["report"]["rejects_at_5"] is False
        assert data["report"]["rejects_at_1"] is False

    def test_report_json_without_constants(self, uniform_sample, temp_dir):
        """Test that per-replication constants are reported as null."""
        sample = uniform_sample(MIDPOINTS, mode=ExperimentMode.STOCHASTIC_NORM)
        report = uniformity_report(sample, 0.1)
        data = json.loads(write_report_json(temp_dir / "r.json", report, sample).read_text())
        assert data["normalizers"] is None
        assert data["mode"] == "stochastic_norm"

    def test_summary_csv(self, uniform_sample, temp_dir):
        """Test summary.csv header."""
        report = uniformity_report(uniform_sample(MIDPOINTS), 0.1)
        path = write_summary_csv(temp_dir / "summary.csv", [summary_row(report)])
        assert path.read_text().splitlines()[0] == "replay,N,R,ks,ks_crit_5,ks_crit_1,p_value"


class TestHistogramChart:
    """Test the SVG chart."""

    def test_one_bar_per_bin(self, uniform_sample):
        """Test that the chart is valid XML with one rect per bin."""
        report = uniformity_report(uniform_sample(MIDPOINTS), 0.1)
        root = ET.fromstring(render_histogram_svg(report, "N=200 & R=10").encode("utf-8"))
        rects = root.findall(f".//{SVG}rect")
        assert len(rects) == 10
        assert all(rect.find(f"{SVG}title") is not None for rect in rects)

    def test_reference_line(self, uniform_sample):
        """Test the dashed line at R * w."""
        report = uniformity_report(uniform_sample(MIDPOINTS), 0.1)
        root = ET.fromstring(render_histogram_svg(report).encode("utf-8"))
        dashed = [line for line in root.iter(f"{SVG}line") if line.get("stroke-dasharray")]
        assert len(dashed) == 1

    def test_bar_heights_follow_counts(self, uniform_sample):
        """Test that a full bin is the tallest bar."""
        report = uniformity_report(uniform_sample([0.05] * 8 + [0.95] * 2), 0.1)
        root = ET.fromstring(render_histogram_svg(report).encode("utf-8"))
        heights = [float(rect.get("height")) for rect in root.iter(f"{SVG}rect")]
        assert heights.index(max(heights)) == 0
        assert heights[1] == 0.0

    def test_write_chart(self, uniform_sample, temp_dir):
        """Test that the chart is written into nested directories."""
        report = uniformity_report(uniform_sample(MIDPOINTS), 0.1)
        path = write_chart_svg(temp_dir / "N200" / "chart.svg", report)
        assert path.exists()
        assert path.read_text().startswith("<?xml")
