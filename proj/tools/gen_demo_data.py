#!/usr/bin/env python3
"""Regenerate the bundled demo dataset (data/demo_panel.csv, data/demo_meta.csv).

The panel is synthetic but shaped like the four digital-maturity tiers the
toolkit is meant to surface: 28 countries x 2011-2023 with tier-separated
levels, mild per-country jitter, upward trends, a volatile FDI series, and a
handful of gaps so the imputation paths actually run. Fully deterministic:
rerunning this script reproduces the files byte for byte.
"""

import random
from pathlib import Path

SEED = 20230901
ROOT = Path(__file__).resolve().parent.parent
YEARS = range(2011, 2024)

# tier -> (iso3, display name) rosters. Tier magnitudes order as 1 < 0 < 2 < 3.
TIERS = {
    0: [
        ("BRA", "Brazil"), ("CHL", "Chile"), ("COL", "Colombia"),
        ("IND", "India"), ("IDN", "Indonesia"), ("MYS", "Malaysia"),
        ("MEX", "Mexico"), ("MAR", "Morocco"), ("PER", "Peru"),
        ("PHL", "Philippines"), ("SEN", "Senegal"), ("THA", "Thailand"),
        ("VNM", "Vietnam"),
    ],
    1: [
        ("BGD", "Bangladesh"), ("ETH", "Ethiopia"), ("KEN", "Kenya"),
        ("MMR", "Myanmar"), ("NGA", "Nigeria"), ("PAK", "Pakistan"),
        ("RWA", "Rwanda"), ("TZA", "Tanzania"), ("UGA", "Uganda"),
        ("ZMB", "Zambia"),
    ],
    2: [
        ("ARG", "Argentina"), ("EGY", "Egypt"), ("ZAF", "South Africa"),
        ("TUR", "Turkiye"),
    ],
    3: [("CHN", "China")],
}

# indicator -> (2023 tier centers ordered [tier1, tier0, tier2, tier3],
#               annual growth, per-country level jitter, per-year wobble)
PROFILE = {
    "broadband_adoption": ((4.0, 15.0, 26.0, 38.0), 0.075, 0.06, 0.015),
    "ict_index": ((0.22, 0.45, 0.64, 0.80), 0.030, 0.05, 0.010),
    "gdp_per_capita": ((900.0, 4200.0, 9500.0, 13000.0), 0.040, 0.08, 0.015),
    "fdi_net_inflows": ((1.5e9, 8.0e9, 1.6e10, 1.8e11), 0.050, 0.15, 0.120),
    "exports_usd": ((8.0e9, 1.3e11, 2.4e11, 3.1e12), 0.060, 0.10, 0.030),
    "imports_usd": ((9.0e9, 1.2e11, 2.3e11, 2.8e12), 0.060, 0.10, 0.030),
}
TIER_COLUMN = {1: 0, 0: 1, 2: 2, 3: 3}

# rough position of each tier on a 0..1 maturity axis, used to tie the
# outcome indicators to the same latent level the index measures
TIER_MATURITY = {1: 0.10, 0: 0.45, 2: 0.70, 3: 0.95}

# cluster ids the toolkit's canonical labeling (ascending smallest member
# ISO3) assigns to these groups on the default run; the meta hint column
# carries these so tests can compare recovered clusters directly
CANONICAL_ID = {0: 2, 1: 1, 2: 0, 3: 3}

# (country, year, indicator) cells deliberately left out of the panel
GAPS = {
    ("SEN", 2014, "broadband_adoption"),   # interior pair -> interpolated
    ("SEN", 2015, "broadband_adoption"),
    ("PER", 2016, "ict_index"),            # single interior gap
    ("MMR", 2011, "fdi_net_inflows"),      # leading gap -> stays missing
    ("KEN", 2012, "imports_usd"),          # breaks total trade for that year
    ("UGA", 2019, "gdp_growth_pct"),       # target-series interior gap
}


def fmt(v):
    return format(v, ".10g")


def main():
    rng = random.Random(SEED)
    rows = []

    for tier in sorted(TIERS):
        for iso3, _name in TIERS[tier]:
            maturity = TIER_MATURITY[tier] + rng.uniform(-0.04, 0.04)
            level = {
                ind: rng.uniform(1.0 - jit, 1.0 + jit)
                for ind, (_c, _g, jit, _w) in PROFILE.items()
            }
            for year in YEARS:
                t_back = year - 2023
                for ind, (centers, growth, _jit, wobble) in PROFILE.items():
                    base = centers[TIER_COLUMN[tier]] * level[ind]
                    value = base * (1.0 + growth) ** t_back
                    value *= rng.uniform(1.0 - wobble, 1.0 + wobble)
                    rows.append((iso3, year, ind, value))
                # outcome series: tied to the latent maturity with noise, so
                # the index explains trade growth well and GDP growth weakly
                trade_growth = 1.5 + 10.0 * maturity + rng.gauss(0.0, 0.5)
                gdp_growth = 2.0 + 6.0 * maturity + rng.gauss(0.0, 1.8)
                rows.append((iso3, year, "trade_growth_pct", trade_growth))
                rows.append((iso3, year, "gdp_growth_pct", gdp_growth))

    rows = [r for r in rows if (r[0], r[1], r[2]) not in GAPS]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))

    data_dir = ROOT / "data"
    data_dir.mkdir(exist_ok=True)

    with open(data_dir / "demo_panel.csv", "w", newline="\n") as f:
        f.write("country,year,indicator,value\n")
        for iso3, year, ind, value in rows:
            f.write(f"{iso3},{year},{ind},{fmt(value)}\n")

    meta = []
    for tier, members in TIERS.items():
        for iso3, name in members:
            meta.append((iso3, name, CANONICAL_ID[tier]))
    meta.sort()
    with open(data_dir / "demo_meta.csv", "w", newline="\n") as f:
        f.write("country,name,cluster_hint\n")
        for iso3, name, tier in meta:
            f.write(f"{iso3},{name},{tier}\n")

    print(f"wrote {len(rows)} panel rows for {len(meta)} countries")


if __name__ == "__main__":
    main()
