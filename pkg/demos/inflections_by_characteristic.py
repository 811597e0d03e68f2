"""Inflection points of random smooth cubics and quartics, in and out of char 3.

Away from 3 every flex is reduced and there are 3d(d-2) of them.  Over
GF(27) there are only d(d-2), each of length 3, so the total stays 3d(d-2).
"""

import sys
import time

from charpenum.enumgeo import inflection_scheme, sample_inflection_curve
from charpenum.ff import parse_field

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 42

for lit in ("GF(7)", "GF(5^2)", "GF(3^3)"):
    K = parse_field(lit)
    for d in (3, 4):
        t0 = time.perf_counter()
        C, flags = sample_inflection_curve(d, K, seed)
        pts = inflection_scheme(C, seed=seed, flags=flags)
        mults = sorted(set(pts.multiplicities()))
        print(f"{lit:8} d={d}  {pts.radical_degree:>2} points x {mults}  total {pts.total_degree:>2}"
              f"  ({C.meta['attempts']} draws, {time.perf_counter() - t0:.1f} s)")
