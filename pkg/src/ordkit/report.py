"""Census summary reports: delimited output plus rendered figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .search import Census, census_to_json

SUMMARY_FIELDS = (
    "n",
    "classes",
    "sec_pc",
    "strongly_sec_pc",
    "rel_pc",
    "lattices",
    "with_top",
    "dm_preserved",
    "dm_lost",
    "second_arg_nonmonotone",
)


def census_summary_row(census: Census) -> dict:
    entries = census.entries
    return {
        "n": census.n,
        "classes": len(entries),
        "sec_pc": sum(e.report.is_sec_pc for e in entries),
        "strongly_sec_pc": sum(e.report.is_strongly_sec_pc for e in entries),
        "rel_pc": sum(e.report.is_rel_pc for e in entries),
        "lattices": sum(e.report.is_lattice for e in entries),
        "with_top": sum(e.report.has_top for e in entries),
        "dm_preserved": sum(e.dm_preserves_secpc is True for e in entries),
        "dm_lost": sum(e.dm_preserves_secpc is False for e in entries),
        "second_arg_nonmonotone": sum(
            e.second_arg_monotone is False for e in entries
        ),
    }


def _render_figure(rows: list[dict], path: Path):
    from matplotlib.figure import Figure

    series = ("classes", "sec_pc", "strongly_sec_pc", "rel_pc", "lattices")
    fig = Figure(figsize=(7.5, 4.5))
    ax = fig.add_subplot(111)
    xs = [row["n"] for row in rows]
    width = 0.8 / len(series)
    for i, field in enumerate(series):
        offs = [x + (i - len(series) / 2) * width + width / 2 for x in xs]
        ax.bar(offs, [row[field] for row in rows], width=width, label=field)
    ax.set_xlabel("elements")
    ax.set_ylabel("isomorphism classes")
    ax.set_xticks(xs)
    ax.set_yscale("log" if any(row["classes"] > 50 for row in rows) else "linear")
    ax.legend(fontsize=8)
    ax.set_title("poset census by classification")
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def write_census_report(censuses: list[Census], out_dir) -> dict[str, Path]:
    """Write census.json, census.csv, and census.png into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [census_summary_row(c) for c in sorted(censuses, key=lambda c: c.n)]

    json_path = out / "census.json"
    json_path.write_text(
        json.dumps([census_to_json(c) for c in censuses], indent=2)
    )

    csv_path = out / "census.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        writer.writerows(rows)

    png_path = out / "census.png"
    _render_figure(rows, png_path)
    return {"json": json_path, "csv": csv_path, "png": png_path}
