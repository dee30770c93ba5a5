"""Deterministic generators for the bundled demo datasets.

``python -m sampflow.demo OUTDIR`` writes:

* ``papers.csv``: 1206 bibliographic records (doi, title, year, numPages)
  with exactly 460 published 2021-2025, 192 of them longer than 6 pages;
* ``ieee_keywords.csv``: one row per indexed doi with a ``;``-separated
  keyword list, covering most but not all papers;
* ``repos.csv``: 100,000 synthetic repositories (swh_id, url,
  commit_count, committer_count, latest_commit_date).

Every value comes from :class:`~sampflow.rng.SeededRng`, so the files are
byte-identical on every platform.
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import math
import os

from .rng import SeededRng

PAPERS_TOTAL = 1206
PAPERS_IN_YEARS = 460
PAPERS_LONG = 192
REPOS_TOTAL = 100_000

TOPICS = ["mining", "repositories", "sampling", "empirical", "github", "software",
          "heritage", "commits", "bugs", "testing", "study", "dataset", "evolution",
          "developers", "open", "source", "code", "review", "quality", "metrics"]
KEYWORDS = ["Software engineering", "Data mining", "Open source software",
            "Measurement", "Sampling methods", "Codes", "Statistical analysis",
            "Software maintenance", "Computer bugs", "Git", "Empirical study",
            "Machine learning", "Data collection", "Software quality", "Surveys"]


def _uniform(rng: SeededRng) -> float:
    return (rng.next_u64() >> 11) * (1.0 / (1 << 53))


def _shuffle(items: list, rng: SeededRng) -> None:
    for i in range(len(items) - 1, 0, -1):
        j = rng.below(i + 1)
        items[i], items[j] = items[j], items[i]


def _title(rng: SeededRng) -> str:
    words = [TOPICS[rng.below(len(TOPICS))] for _ in range(3 + rng.below(5))]
    return " ".join(words).capitalize()


def paper_rows(seed: int = 2025) -> list[dict]:
    """Bibliographic rows hitting the three construction targets exactly."""
    rng = SeededRng(seed)
    specs = []
    # in the year window and long
    specs += [(2021 + rng.below(5), 7 + rng.below(14)) for _ in range(PAPERS_LONG)]
    # in the year window, short papers (page count may be unknown)
    for _ in range(PAPERS_IN_YEARS - PAPERS_LONG):
        pages = None if rng.below(20) == 0 else 1 + rng.below(6)
        specs.append((2021 + rng.below(5), pages))
    # outside the window (before 2021)
    for _ in range(PAPERS_TOTAL - PAPERS_IN_YEARS):
        pages = None if rng.below(25) == 0 else 1 + rng.below(20)
        specs.append((2005 + rng.below(16), pages))
    _shuffle(specs, rng)
    rows = []
    for i, (year, pages) in enumerate(specs):
        rows.append({"doi": f"10.5555/msr.{year}.{i:05d}", "title": _title(rng),
                     "year": year, "numPages": pages})
    return rows


def keyword_rows(papers: list[dict], seed: int = 77) -> list[dict]:
    rng = SeededRng(seed)
    rows = []
    for p in papers:
        if rng.below(10) == 0:  # not indexed
            continue
        k = 1 + rng.below(4)
        picked = sorted({KEYWORDS[rng.below(len(KEYWORDS))] for _ in range(k)})
        rows.append({"doi": p["doi"], "ieee_keyword_list": ";".join(picked)})
    return rows


def repo_rows(n: int = REPOS_TOTAL, seed: int = 27) -> list[dict]:
    """Heavy-tailed commit counts, mostly small teams, recent activity skew."""
    rng = SeededRng(seed)
    start = dt.date(2010, 1, 1).toordinal()
    span = dt.date(2024, 5, 1).toordinal() - start
    rows = []
    for i in range(n):
        u = _uniform(rng)
        # Pareto-like commit counts, a few in the millions
        commits = int(1 + 5 / max(1e-7, 1 - u) ** 1.05)
        committers = 1 + int(-math.log(max(1e-12, 1 - _uniform(rng))) * 4.0)
        # bias towards recent activity
        days = int(span * _uniform(rng) ** (1 / 6))
        latest = dt.date.fromordinal(start + days)
        rows.append({
            "swh_id": f"swh:1:ori:{rng.next_u64():016x}{i:08x}",
            "url": f"https://forge.example.org/p{i:06d}",
            "commit_count": None if rng.below(200) == 0 else commits,
            "committer_count": committers,
            "latest_commit_date": None if rng.below(500) == 0 else latest.isoformat(),
        })
    return rows


def write_csv(path: str, rows: list[dict], columns: list[str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(columns)
        for r in rows:
            w.writerow(["" if r[c] is None else r[c] for c in columns])


def write_all(outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    papers = paper_rows()
    out = []
    targets = [
        ("papers.csv", papers, ["doi", "title", "year", "numPages"]),
        ("ieee_keywords.csv", keyword_rows(papers), ["doi", "ieee_keyword_list"]),
        ("repos.csv", repo_rows(), ["swh_id", "url", "commit_count",
                                    "committer_count", "latest_commit_date"]),
    ]
    for name, rows, cols in targets:
        path = os.path.join(outdir, name)
        write_csv(path, rows, cols)
        out.append(path)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m sampflow.demo",
                                 description="Regenerate the bundled demo datasets.")
    ap.add_argument("outdir")
    args = ap.parse_args(argv)
    for path in write_all(args.outdir):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
