"""
Homology Sphere Obstruction Engine

Exact computations that decide which finite simple groups can act on a
homology n-sphere:
- GF(p^k) arithmetic and brute-force matrix group enumeration
- Borel formula feasibility over subgroup lattices of (Z_p)^k
- Closed-form minimal dimension bounds and family filters
- Group catalogue with exceptional isomorphisms and witness data
"""

__version__ = "1.0.0"
