"""Named fixture matroids used by the test corpus and the acceptance suite."""

from __future__ import annotations

from .conjectures import DiscretePolymatroid
from .core import Matroid, direct_sum, dual, graphic, linear, minor, transversal, uniform

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def k4() -> Matroid:
    return graphic(4, K4_EDGES)


def uniform_family(max_n: int = 7) -> list[tuple[str, Matroid]]:
    return [(f"U({r},{n})", uniform(r, n)) for n in range(max_n + 1) for r in range(n + 1)]


TRANSVERSAL_SETS = {
    "T-product": ([[0, 1], [2, 3]], 4),
    "T-single": ([[0, 1, 2]], 3),
    "T-shared": ([[0], [0]], 1),
    "T-overlap": ([[0, 1, 2], [1, 2, 3]], 4),
    "T-path": ([[0, 1], [1, 2], [2, 3]], 4),
    "T-three": ([[0, 1, 2], [0, 3, 4], [1, 3, 5]], 6),
    "T-chain": ([[0, 1, 2, 3], [2, 3, 4], [4, 5]], 6),
    "T-wide": ([[0, 1, 2, 3, 4], [0, 1], [3, 4, 5, 6]], 7),
}


def transversal_fixtures() -> list[tuple[str, Matroid]]:
    return [(name, transversal(sets, n)) for name, (sets, n) in TRANSVERSAL_SETS.items()]


# Series-parallel (K4-minor-free) multigraphs with at most six edges.
GRAPHIC_K4_FREE = {
    "G-triangle": (3, [(0, 1), (1, 2), (0, 2)]),
    "G-path3": (4, [(0, 1), (1, 2), (2, 3)]),
    "G-C4": (4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    "G-C5": (5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
    "G-C6": (6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]),
    "G-K4minus": (4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
    "G-bowtie": (5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]),
    "G-pendant": (4, [(0, 1), (1, 2), (2, 0), (2, 3)]),
    "G-digon": (2, [(0, 1), (0, 1)]),
    "G-fat-triangle": (3, [(0, 1), (0, 1), (1, 2), (0, 2)]),
    "G-theta-fat": (4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (0, 2)]),
    "G-loop-triangle": (3, [(0, 1), (1, 2), (0, 2), (1, 1)]),
}


def graphic_k4_free_fixtures() -> list[tuple[str, Matroid]]:
    return [(name, graphic(nv, edges)) for name, (nv, edges) in GRAPHIC_K4_FREE.items()]


def graphic_two_tree_fixtures() -> list[tuple[str, Matroid]]:
    """Graphic catalog members whose edges split into two disjoint spanning trees."""
    names = ["G-digon", "G-fat-triangle", "G-theta-fat"]
    return [(n, graphic(*GRAPHIC_K4_FREE[n])) for n in names] + [("K4", k4())]


def sbo_catalog() -> list[tuple[str, Matroid]]:
    """Matroids known to be strongly base orderable (uniform, transversal, series-parallel graphic)."""
    return uniform_family(7) + transversal_fixtures() + graphic_k4_free_fixtures()


def desk_catalog() -> list[tuple[str, Matroid]]:
    """Small mixed catalog, including the non-SBO graphic K4, for the heavier sweeps."""
    out = [(f"U({r},{n})", uniform(r, n)) for n in range(1, 6) for r in range(1, n)]
    out += [(name, m) for name, m in transversal_fixtures() if m.size <= 6]
    out += graphic_k4_free_fixtures()
    out += [
        ("K4", k4()),
        ("K4*", dual(k4())),
        ("K4/e", minor(k4(), contracted=[0])),
        ("K4\\e", minor(k4(), deleted=[0])),
        ("GF3-U24", linear(3, [[1, 0, 1, 1], [0, 1, 1, 2]])),
        ("GF2-rank3", linear(2, [[1, 0, 0, 1, 1], [0, 1, 0, 1, 0], [0, 0, 1, 0, 1]])),
        ("U12+triangle", direct_sum(uniform(1, 2), graphic(*GRAPHIC_K4_FREE["G-triangle"]))),
    ]
    return out


FANO_MATRIX = [[1, 0, 0, 1, 1, 0, 1], [0, 1, 0, 1, 0, 1, 1], [0, 0, 1, 0, 1, 1, 1]]


def fano() -> Matroid:
    return linear(2, FANO_MATRIX)


def acceptance_catalog() -> list[tuple[str, Matroid]]:
    """The desk catalog plus the larger U(2,6), U(3,6) and the Fano plane."""
    return desk_catalog() + [("U(2,6)", uniform(2, 6)), ("U(3,6)", uniform(3, 6)), ("F7", fano())]


POLYMATROID_FIXTURES = [
    DiscretePolymatroid(2, ((2, 0), (1, 1), (0, 2))),
    DiscretePolymatroid(2, ((1, 1),)),
    DiscretePolymatroid(3, ((1, 1, 0), (1, 0, 1), (0, 1, 1))),
    DiscretePolymatroid(3, ((2, 1, 0), (2, 0, 1), (1, 1, 1), (1, 2, 0), (1, 0, 2))),
    DiscretePolymatroid(2, ((3, 0), (2, 1), (1, 2), (0, 3))),
    DiscretePolymatroid(3, ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1))),
    DiscretePolymatroid(3, ((1, 1, 1),)),
]
