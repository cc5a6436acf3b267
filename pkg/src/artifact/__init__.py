"""Exact-arithmetic engine for quadratic Poisson brackets built from plane
genus-one curve data, with certification utilities and helix K-theory
arithmetic.

Submodules:

- exact_core: rationals, sparse polynomials, quadratic extensions, Laurent
  series (no floating point anywhere).
- curve_ring: curve models, coordinate-ring elements in one and two points,
  the multiplication kernel, section spaces, residue certificates.
- bracket_forge: bracket tensors on the section spaces, the nine-member
  anticanonical families, serialization.
- poisson_verify: chart descent, Jacobi and compatibility checks,
  independence rank, pointwise rank scans, ratio brackets.
- helix_k0: Fibonacci helix classes, Euler pairing, mutation, the modular
  solvability test for bihamiltonian parameters.
- cli_reports: command line front end producing deterministic artifacts.
"""

__version__ = "0.1.0"
