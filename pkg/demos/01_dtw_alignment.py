"""Warping-distance basics.

Two series that trace the same pattern with a timing lag look far apart to
a rigid element-by-element comparison, but close under dynamic time warping,
which may stretch the time axis of either series. That tolerance to timing
offsets is the reason warping distance suits markets trading in different
time zones: the same global move shows up in one market a few hours (or one
session) after the other.
"""

import numpy as np

from market_rewire import dtw_distance

# a bump pattern, and the same bump arriving two steps later
base = np.array([0, 0, 1, 3, 6, 3, 1, 0, 0, 0], dtype=float)
lagged = np.roll(base, 2)

rigid = float(np.abs(base - lagged).sum())
print(f"rigid alignment cost : {rigid:.2f}")
print(f"warping distance     : {dtw_distance(base, lagged):.2f}")
print(f"identical series     : {dtw_distance(base, base):.2f}")

# a genuinely different shape stays far away even with warping
inverted = -base
print(f"inverted shape       : {dtw_distance(base, inverted):.2f}")

# an optional band limits how far the alignment may stray from the diagonal;
# band=0 forbids warping entirely and reproduces the rigid cost
print()
for band in (None, 4, 2, 1, 0):
    d = dtw_distance(base, lagged, band=band)
    print(f"band={str(band):>4} -> distance {d:.2f}")
