"""Bitangents of a random smooth quartic over GF(7) and over GF(8).

Over GF(7) the 28 lines are reduced.  In characteristic 2 they collapse to 7
lines, each carrying multiplicity 4.  The GF(8) run takes a little while.
"""

import time

from charpenum.enumgeo import general_quartic, random_smooth_curve, theta_scheme_quartic
from charpenum.ff import parse_field

for lit in ("GF(7)", "GF(2^3)"):
    K = parse_field(lit)
    t0 = time.perf_counter()
    C = random_smooth_curve(4, K, 42, general_quartic)
    rep = theta_scheme_quartic(C, seed=42)
    print(f"{lit}: {C}")
    print(f"  {rep.radical_degree} lines, multiplicities {sorted(set(rep.multiplicities()))},"
          f" total {rep.total_degree}  ({time.perf_counter() - t0:.1f} s)")
    for P in rep.points[:8]:
        print(f"    line {P.extra['line']}  residue degree {P.residue_degree}  length {P.multiplicity}")
