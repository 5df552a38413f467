"""Shared constructions for the test suite."""

from __future__ import annotations

import itertools

from prodembed.complex_core import SimplicialComplex
from prodembed.pl_geometry import GeometricComplex, random_embedding


def disjoint_union_embedding(parts, dim, seed):
    """Random general-position placement of several complexes at once."""
    tagged = []
    for k, c in enumerate(parts):
        tagged.extend([f"{k}.{v}" for v in f] for f in c.facets)
    g = random_embedding(SimplicialComplex.from_facets(tagged), dim, seed, require_embedding=False, coord_range=1000)
    out = []
    for k, c in enumerate(parts):
        coords = {v: g.coords[f"{k}.{v}"] for v in c.vertices}
        out.append(GeometricComplex(c, coords, dim))
    return out


def cycle_complex(k):
    return SimplicialComplex.from_facets([(str(j), str((j + 1) % k)) for j in range(k)])


def torus_complex():
    facets = []
    for i, j in itertools.product(range(3), repeat=2):
        a, b = f"{i}{j}", f"{(i + 1) % 3}{j}"
        c, d = f"{i}{(j + 1) % 3}", f"{(i + 1) % 3}{(j + 1) % 3}"
        facets += [(a, b, d), (a, c, d)]
    return SimplicialComplex.from_facets(facets)
