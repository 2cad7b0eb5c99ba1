"""Convex hypersurfaces in H^n x R.

Submodules
----------
hyperbolic  models of H^n, distances, geodesics, totally geodesic hyperplanes
product     the product H^n x R, its connection, vertical hyperplanes and foliations
forms       fundamental forms, principal curvatures, convexity, slices
parabolic   the parabolic-invariant example with a simple end
fixtures    test surfaces (geodesic sphere, convex graph, controls) and JSON loading
sweep       vertical sweeps and the sphere / graph / simple-end classifier
ends        accumulation at infinity and the simple-end check
cli         command-line front end
"""

__version__ = "0.1.0"
