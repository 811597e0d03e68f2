"""The singular cubic x0*x1*x2 + (x0 - x1)^3 over GF(3).

Prints the inflection flags with their lengths, then the images of the flag
scheme on the point factor and on the line factor.  The flag scheme has three
points of length 3; pushing it to the plane merges the two flags sitting over
the singular point [0,0,1].
"""

from charpenum.enumgeo import PlaneCurve, gauss_image_scheme, inflection_flag_scheme, inflection_scheme, is_smooth

E = PlaneCurve.parse("GF(3)", "x0*x1*x2 + (x0 - x1)^3")

flags = inflection_flag_scheme(E)
print(f"curve: {E}   smooth: {is_smooth(E)}")
print("\nflags (point, line)                length  tangent dim  contact")
for P in flags.points:
    x = P.extra
    print(f"  {x['point']!s:14} {x['line']!s:16} {P.multiplicity:>5} {x['tangent_dimension']:>11} {x['contact_order']:>8}")
print(f"  total degree {flags.total_degree}")

points = inflection_scheme(E, flags=flags)
print("\nimage on the point factor")
for P in points.points:
    print(f"  {P.formatted(P.projective[0])}  length {P.multiplicity}  tangent dim {P.extra['tangent_dimension']}")
print(f"  total degree {points.total_degree}")

lines = gauss_image_scheme(E)
print("\nimage on the line factor")
for P in lines.points:
    print(f"  {P.formatted(P.projective[0])}  length {P.multiplicity}")
