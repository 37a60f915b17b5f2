"""Statistics rows, CSV output and the SVG error-probability chart"""

import csv
import math
from typing import IO, Dict, List, Sequence, Tuple

import logging
from scipy.stats import norm

from subchirp.config import settings

logger = logging.getLogger(__name__)

CSV_HEADER = [
    "m",
    "L",
    "codebook",
    "decoder",
    "noise_var",
    "trials",
    "per_user_err",
    "per_trial_err",
    "per_user_p",
    "per_trial_p",
    "ci_lo",
    "ci_hi",
    "mean_decode_us",
    "seed",
]

SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]


def wilson_interval(errors: int, total: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion"""
    if total <= 0:
        return 0.0, 1.0
    z = norm.ppf(0.5 + confidence / 2)
    p = errors / total
    denom = 1 + z ** 2 / total
    center = (p + z ** 2 / (2 * total)) / denom
    half = z * math.sqrt(p * (1 - p) / total + z ** 2 / (4 * total ** 2)) / denom
    lo = 0.0 if errors == 0 else max(0.0, center - half)
    hi = 1.0 if errors == total else min(1.0, center + half)
    return lo, hi


def stats_row(stats, timing: bool = False) -> list:
    cfg = stats.config
    return [
        cfg.m,
        cfg.L,
        cfg.codebook,
        cfg.decoder,
        repr(float(cfg.noise_var)),
        cfg.trials,
        stats.per_user_errors,
        stats.per_trial_errors,
        f"{stats.per_user_p:.6g}",
        f"{stats.per_trial_p:.6g}",
        f"{stats.per_user_ci[0]:.6g}",
        f"{stats.per_user_ci[1]:.6g}",
        f"{stats.mean_decode_us:.1f}" if timing else "",
        cfg.seed,
    ]


def write_stats_csv(rows: Sequence, handle: IO[str], timing: bool = settings.REPORT_TIMING) -> None:
    """One header line and one line per TrialStats, LF endings"""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for stats in rows:
        writer.writerow(stats_row(stats, timing))


def _series(rows: Sequence) -> Dict[str, List[Tuple[int, float]]]:
    series: Dict[str, List[Tuple[int, float]]] = {}
    for stats in rows:
        cfg = stats.config
        key = f"{cfg.codebook}/{cfg.decoder} m={cfg.m}"
        series.setdefault(key, []).append((cfg.L, stats.per_user_p))
    for points in series.values():
        points.sort()
    return series


def render_svg(rows: Sequence, width: int = settings.SVG_WIDTH, height: int = settings.SVG_HEIGHT) -> str:
    """Per-user error probability against L, log-scale y, one polyline per series

    Zero probabilities are drawn on the bottom edge of the plot.
    """
    series = _series(rows)
    left, right, top, bottom = 70, 180, 30, 50
    plot_w, plot_h = width - left - right, height - top - bottom

    xs = sorted({x for points in series.values() for x, _ in points}) or [1]
    positive = [p for points in series.values() for _, p in points if p > 0]
    low_decade = math.floor(math.log10(min(positive))) if positive else -4
    low_decade = min(low_decade, -1)

    def to_x(value: int) -> float:
        if len(xs) == 1:
            return left + plot_w / 2
        return left + plot_w * (value - xs[0]) / (xs[-1] - xs[0])

    def to_y(p: float) -> float:
        exponent = math.log10(p) if p > 0 else low_decade
        return top + plot_h * (exponent / low_decade)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>',
    ]
    for decade in range(low_decade, 1):
        y = to_y(10.0 ** decade)
        parts.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + plot_w}" y2="{y:.2f}" stroke="#dddddd"/>')
        parts.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">1e{decade}</text>')
    for value in xs:
        x = to_x(value)
        parts.append(f'<text x="{x:.2f}" y="{top + plot_h + 20}" text-anchor="middle">{value}</text>')
    parts.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{height - 10}" text-anchor="middle">active users L</text>'
    )
    parts.append(
        f'<text x="16" y="{top + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + plot_h / 2:.2f})">per-user error probability</text>'
    )

    for k, (name, points) in enumerate(sorted(series.items())):
        color = SERIES_COLORS[k % len(SERIES_COLORS)]
        coords = " ".join(f"{to_x(x):.2f},{to_y(p):.2f}" for x, p in points)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, p in points:
            parts.append(f'<circle cx="{to_x(x):.2f}" cy="{to_y(p):.2f}" r="3" fill="{color}"/>')
        legend_y = top + 16 * (k + 1)
        parts.append(
            f'<line x1="{left + plot_w + 12}" y1="{legend_y - 4}" x2="{left + plot_w + 32}" '
            f'y2="{legend_y - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{left + plot_w + 38}" y="{legend_y}">{name}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
