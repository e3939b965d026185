#!/usr/bin/env python3
"""Regenerate the bundled offline fixtures under data/.

The fixtures are reconstructions, not a copy of the live source: cumulative
confirmed/deaths/recovered curves are interpolated (monotone, in log space)
through approximate reported totals for India and the USA, and daily
increments get seeded multiplicative noise. Output is deterministic.
"""

import argparse
import datetime as dt
import pathlib

import numpy as np
from scipy.interpolate import PchipInterpolator

START = dt.date(2020, 1, 30)
END = dt.date(2020, 7, 1)

# date: (confirmed, deaths, recovered)
ANCHORS = {
    "india": {
        "2020-01-30": (1, 0, 0),
        "2020-02-03": (3, 0, 0),
        "2020-02-20": (3, 0, 3),
        "2020-03-02": (5, 0, 3),
        "2020-03-12": (73, 1, 4),
        "2020-03-15": (113, 2, 13),
        "2020-03-22": (396, 7, 27),
        "2020-04-01": (1998, 58, 148),
        "2020-04-15": (12380, 414, 1489),
        "2020-05-01": (35043, 1154, 9068),
        "2020-05-15": (85940, 2752, 30153),
        "2020-06-01": (198706, 5608, 95754),
        "2020-06-15": (343091, 9915, 180013),
        "2020-07-01": (604641, 17834, 359860),
    },
    "usa": {
        "2020-01-30": (6, 0, 0),
        "2020-02-21": (15, 0, 5),
        "2020-03-01": (75, 1, 7),
        "2020-03-10": (1000, 31, 8),
        "2020-03-15": (3600, 68, 12),
        "2020-03-22": (33000, 460, 178),
        "2020-04-01": (213000, 5100, 8500),
        "2020-04-15": (636000, 28300, 52000),
        "2020-05-01": (1100000, 65000, 165000),
        "2020-05-15": (1460000, 87000, 250000),
        "2020-06-01": (1810000, 105000, 470000),
        "2020-06-15": (2120000, 117000, 580000),
        "2020-07-01": (2690000, 128000, 730000),
    },
}


def cumulative(days, anchor_days, anchor_values, rng, sigma):
    smooth = np.expm1(PchipInterpolator(anchor_days, np.log1p(anchor_values))(days))
    smooth = np.maximum.accumulate(np.maximum(smooth, 0.0))
    increments = np.diff(smooth, prepend=0.0)
    noisy = increments * np.exp(rng.normal(0.0, sigma, size=increments.shape))
    series = np.cumsum(noisy)
    series *= smooth[-1] / series[-1]
    # Round increments so the series stays non-decreasing.
    return np.cumsum(np.round(np.diff(series, prepend=0.0))).astype(np.int64)


def build(country, seed):
    rng = np.random.default_rng(seed)
    anchors = ANCHORS[country]
    days = np.arange((END - START).days + 1)
    anchor_days = np.array([(dt.date.fromisoformat(d) - START).days for d in anchors])
    values = np.array(list(anchors.values()), dtype=float)
    confirmed = cumulative(days, anchor_days, values[:, 0], rng, 0.15)
    deaths = cumulative(days, anchor_days, values[:, 1], rng, 0.2)
    recovered = cumulative(days, anchor_days, values[:, 2], rng, 0.25)
    recovered = np.minimum(recovered, confirmed - deaths)
    recovered = np.maximum(recovered, 0)
    lines = ["date,confirmed,deaths,recovered"]
    for d, c, de, r in zip(days, confirmed, deaths, recovered):
        lines.append(f"{START + dt.timedelta(days=int(d))},{c},{de},{r}")
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=pathlib.Path(__file__).resolve().parent.parent / "data")
    parser.add_argument("--seed", type=int, default=2020)
    args = parser.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, country in enumerate(sorted(ANCHORS)):
        (out / f"{country}.csv").write_text(build(country, args.seed + i))


if __name__ == "__main__":
    main()
