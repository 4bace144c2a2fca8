"""SVG bar chart of PIT histogram counts."""

from pathlib import Path
from typing import Any, Dict, List

from jinja2 import Template

from ..utils.constants import HISTOGRAM_SVG_TEMPLATE
from ..utils.helpers import ensure_directory_exists
from .report import HistogramReport

CHART_WIDTH = 640
CHART_HEIGHT = 400
MARGIN_LEFT = 56
MARGIN_RIGHT = 48
MARGIN_TOP = 36
MARGIN_BOTTOM = 48


def _bars(report: HistogramReport, y_max: float) -> List[Dict[str, Any]]:
    plot_width = CHART_WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_height = CHART_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    bar_width = plot_width / report.bin_count
    bars = []
    for k, (lo, hi, count) in enumerate(report.histogram_rows()):
        height = plot_height * count / y_max
        bars.append(
            {
                "x": round(MARGIN_LEFT + k * bar_width, 3),
                "y": round(MARGIN_TOP + plot_height - height, 3),
                "width": round(bar_width, 3),
                "height": round(height, 3),
                "lo": round(lo, 6),
                "hi": round(hi, 6),
                "count": count,
            }
        )
    return bars


def render_histogram_svg(report: HistogramReport, title: str = "PIT histogram") -> str:
    """
    Render the bar chart: one bar per bin plus a reference line at R * w.

    Raises:
        FileNotFoundError: If the packaged template is missing
    """
    if not HISTOGRAM_SVG_TEMPLATE.exists():
        raise FileNotFoundError(f"Template not found: {HISTOGRAM_SVG_TEMPLATE}")

    with open(HISTOGRAM_SVG_TEMPLATE, encoding="utf-8") as f:
        template = Template(f.read())

    reference = report.expected_per_bin
    y_max = max(max(report.counts), reference) * 1.1 or 1.0
    plot_height = CHART_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    return template.render(
        title=title,
        width=CHART_WIDTH,
        height=CHART_HEIGHT,
        margin_left=MARGIN_LEFT,
        plot_width=CHART_WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        plot_top=MARGIN_TOP,
        plot_bottom=MARGIN_TOP + plot_height,
        y_max=round(y_max, 1),
        bars=_bars(report, y_max),
        reference=round(reference, 3),
        reference_y=round(MARGIN_TOP + plot_height * (1.0 - reference / y_max), 3),
    )


def write_chart_svg(path: Path, report: HistogramReport, title: str = "PIT histogram") -> Path:
    """Write chart.svg."""
    ensure_directory_exists(path.parent)
    path.write_text(render_histogram_svg(report, title), encoding="utf-8")
    return path
