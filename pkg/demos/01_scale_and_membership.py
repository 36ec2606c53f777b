"""Linguistic scale, reciprocals and the linear membership that can go negative."""
import numpy as np

from fuzzyprio import LinguisticScale, make_tfn, membership_degree, reciprocal

scale = LinguisticScale.default()
for label, tfn in scale.items():
    print(f"{label:>10}: {tuple(tfn)}")

# labels are case and whitespace insensitive
print(scale["  Very   HIGH "])

# the reverse judgment of "low" is its reciprocal band
low = scale["low"]
print("reciprocal of low:", reciprocal(low))

# membership of a candidate ratio w_i / w_j in the band (2, 3, 4)
band = make_tfn(2, 3, 4)
ratios = np.array([1.0, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0])
for r in ratios:
    print(f"ratio {r:.1f} -> membership {membership_degree(band, r):+.2f}")
# outside the band the value keeps decreasing linearly instead of clipping at 0
