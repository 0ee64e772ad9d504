"""Reading a price panel and looking at it by rank.

Run with ``python demos/01_panel_and_ranks.py [OUTDIR]``.
"""
# %% [markdown]
# A panel is a dates x commodities matrix of strictly positive prices. We
# start from a tiny CSV held in a string, with one gap, and clean it.
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from ranklab import panel, rank, report

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(parents=True, exist_ok=True)

text = """date,gold,oil,wheat
2010-01-04,1100,80,5.0
2010-01-05,1120,,5.1
2010-01-06,1130,82,4.9
2010-01-07,1090,84,5.3
"""
raw = panel.parse_csv(text)
print("missing cells:", int(raw.missing.sum()))

# %% Forward-filling a one-day gap keeps all four dates; the default drops the row.
filled = panel.clean(raw, panel.CleaningPolicy.forward_fill(1))
dropped = panel.clean(raw)
print("forward fill keeps", len(filled.dates), "dates; dropping keeps", len(dropped.dates))

# %% Normalizing by the first row makes every series start at 1.
norm = rank.normalize(filled)
field = rank.relative_prices(norm)
print("theta rows sum to N:", field.theta.sum(axis=1))

for t in range(len(field.dates)):
    snap = rank.rank_snapshot(field, t)
    leaders = [field.commodities[i] for i in snap.occupant]
    print(snap.date, "ranked:", leaders, np.round(snap.ranked_theta, 4))

# %% Occupancy: the share of dates each commodity spends in each rank.
print(rank.rank_occupancy(field))

# %% Plots of log relative prices by name and by rank.
(out / "relative_prices.svg").write_text(report.relative_price_svg(filled))
(out / "ranked_relative_prices.svg").write_text(report.relative_price_svg(filled, ranked=True))
print("wrote plots to", out)
