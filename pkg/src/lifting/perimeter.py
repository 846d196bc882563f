"""
Discrete essential boundaries and the jump carrier of a set relative to the cuts
"""
from src.connection.base import Connection
from src.lifting.grid import EdgeSet, PixelSet
from src.lifting.rasterize import cut_band


def essential_boundary(A: PixelSet) -> EdgeSet:
    """In-domain edges with exactly one endpoint pixel in A"""
    grid = A.grid
    cells = A.cells
    horizontal = (cells[:, :-1] ^ cells[:, 1:]) & grid.horizontal_valid
    vertical = (cells[:-1, :] ^ cells[1:, :]) & grid.vertical_valid
    return EdgeSet(grid, horizontal, vertical)


def symdiff_boundary_check(A: PixelSet, B: PixelSet) -> bool:
    """∂(A △ B) == ∂A △ ∂B, compared edge for edge"""
    return essential_boundary(A ^ B) == (essential_boundary(A) ^ essential_boundary(B))


def la_edge_set(A: PixelSet, cuts: Connection) -> EdgeSet:
    """∂A △ (rasterized cut band)"""
    return essential_boundary(A) ^ cut_band(A.grid, cuts)
