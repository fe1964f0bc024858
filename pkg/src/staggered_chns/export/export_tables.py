"""
export_tables.py
----------------
Saves a convergence table as CSV and as Markdown.

  eoc.csv   M,e_M,EOC_M       machine-readable, full precision
  eoc.md    a small table     renders on GitHub or in any Markdown viewer

The finest level has no EOC; it is written as an empty cell / "–".
"""

from __future__ import annotations

import csv
from datetime import datetime
from pathlib import Path

from staggered_chns.config import OUT_DIR


def write_eoc_csv(rows: list[dict], path: Path) -> Path:
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["M", "e_M", "EOC_M"])
        for row in rows:
            order = "" if row["EOC_M"] is None else repr(row["EOC_M"])
            writer.writerow([row["M"], repr(row["e_M"]), order])
    return Path(path)


def eoc_markdown(rows: list[dict], title: str = "Convergence") -> str:
    lines = [
        f"# {title}",
        "",
        f"_Generated {datetime.now().strftime('%Y-%m-%d %H:%M')}_",
        "",
        "| M | e_M | EOC_M |",
        "|---:|---:|---:|",
    ]
    for row in rows:
        order = "–" if row["EOC_M"] is None else f"{row['EOC_M']:.2f}"
        lines.append(f"| {row['M']} | {row['e_M']:.4e} | {order} |")
    return "\n".join(lines) + "\n"


def export_eoc(rows: list[dict], out_dir: Path | None = None, title: str = "Convergence") -> tuple[Path, Path]:
    """
    Write eoc.csv and eoc.md into out_dir.

    Returns the two paths.
    """
    out_dir = Path(out_dir) if out_dir is not None else OUT_DIR
    out_dir.mkdir(parents=True, exist_ok=True)

    csv_path = write_eoc_csv(rows, out_dir / "eoc.csv")
    md_path = out_dir / "eoc.md"
    md_path.write_text(eoc_markdown(rows, title), encoding="utf-8")
    return csv_path, md_path


def read_eoc_csv(path: Path) -> list[dict]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        return [
            {
                "M": int(r["M"]),
                "e_M": float(r["e_M"]),
                "EOC_M": float(r["EOC_M"]) if r["EOC_M"] else None,
            }
            for r in csv.DictReader(f)
        ]
