from datetime import date, timedelta

import numpy as np

from ranklab.panel import PricePanel


def make_panel(prices, frequency="daily", names=None, start=date(2010, 1, 4)):
    prices = np.asarray(prices, dtype=float)
    T, N = prices.shape
    names = names or [f"c{i}" for i in range(N)]
    dates = [start + timedelta(days=t) for t in range(T)]
    return PricePanel(dates, names, prices, frequency)
