"""Regenerate the bundled synthetic weekend-earnings dataset.

Weekly revenues are integrated from a seeded return sequence with a heavy
upper tail (positive GPD shape) and a bounded lower tail (negative GPD
shape), mirroring the asymmetry the toolkit is built to analyze. Gain and
loss magnitudes are i.i.d. draws from their tail distributions; only the
sign choice is steered when the integrated log level leaves a band, which
keeps printed revenues in a readable range without touching either tail's
distribution. Zero returns are injected so the sign split's zero handling
is exercised.

Run from the repository root:

    python scripts/generate_synthetic_data.py
"""

import datetime
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from potrisk.gpd import GpdParams, gpd_quantile  # noqa: E402

SEED = 20110814
START = datetime.date(1982, 1, 8)
N_WEEKS = 1513

P_ZERO = 0.04
POS_PARAMS = GpdParams(shape=0.20, scale=0.16)
NEG_PARAMS = GpdParams(shape=-0.30, scale=0.22)
LEVEL_BAND = 1.2


def main() -> None:
    rng = np.random.default_rng(SEED)
    n = N_WEEKS - 1
    pos_draws = iter(np.asarray(gpd_quantile(POS_PARAMS, rng.random(n))))
    neg_draws = iter(np.asarray(gpd_quantile(NEG_PARAMS, rng.random(n))))
    kinds = rng.random(n)

    x = np.empty(n)
    level = 0.0
    for i in range(n):
        if level > LEVEL_BAND:
            gain = False
        elif level < -LEVEL_BAND:
            gain = True
        elif kinds[i] < P_ZERO:
            x[i] = 0.0
            continue
        else:
            gain = kinds[i] < P_ZERO + (1.0 - P_ZERO) / 2.0
        x[i] = next(pos_draws) if gain else -next(neg_draws)
        level += math.log1p(x[i])

    revenues = np.empty(N_WEEKS)
    revenues[0] = 100.0
    for i, xi in enumerate(x):
        revenues[i + 1] = round(revenues[i] * (1.0 + xi), 4)

    assert np.all(revenues > 0), "revenue integration went nonpositive"
    print(f"revenue range: {revenues.min():.4f} .. {revenues.max():.4f}")
    print(f"returns: {np.sum(x > 0)} positive, {np.sum(x < 0)} negative, {np.sum(x == 0)} zero")

    out = Path(__file__).resolve().parents[1] / "src" / "potrisk" / "data" / "synthetic_weekends.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("date,revenue\n")
        for i, rev in enumerate(revenues):
            fh.write(f"{(START + datetime.timedelta(weeks=i)).isoformat()},{rev:.4f}\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
