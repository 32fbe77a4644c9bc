import numpy as np
import pytest

from market_rewire import AssetMeta, PricePanel


def dtw_bruteforce(p, q):
    """Exhaustive minimum over all monotone warping paths.

    Walks every path from (0, 0) to (l-1, m-1) built from right, down and
    diagonal steps, summing |p_i - q_j| at each visited cell. Exponential on
    purpose: this is the independent oracle, kept free of any dynamic
    programming so it cannot share a bug with the implementation under test.
    """
    p = [float(v) for v in p]
    q = [float(v) for v in q]
    l, m = len(p), len(q)
    best = [float("inf")]

    def walk(i, j, acc):
        acc += abs(p[i] - q[j])
        if i == l - 1 and j == m - 1:
            if acc < best[0]:
                best[0] = acc
            return
        if i + 1 < l:
            walk(i + 1, j, acc)
        if j + 1 < m:
            walk(i, j + 1, acc)
        if i + 1 < l and j + 1 < m:
            walk(i + 1, j + 1, acc)

    walk(0, 0, 0.0)
    return best[0]


@pytest.fixture
def dtw_oracle():
    return dtw_bruteforce


def build_panel(values, directions=None, classes=None, dates=None):
    """PricePanel from a raw (n_dates, n_assets) array with stub metadata."""
    values = np.asarray(values, dtype=float)
    n = values.shape[1]
    directions = directions or [1] * n
    classes = classes or ["stock"] * n
    assets = [
        AssetMeta(f"a{i:02d}", f"Asset {i}", classes[i], directions[i]) for i in range(n)
    ]
    if dates is None:
        from datetime import date, timedelta

        start = date(2020, 1, 1)
        dates = [start + timedelta(days=i) for i in range(values.shape[0])]
    return PricePanel(dates=dates, assets=assets, values=values)


@pytest.fixture
def panel_factory():
    return build_panel
