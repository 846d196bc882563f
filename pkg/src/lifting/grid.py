"""
Lattice data types: masked node grids, fields, pixel sets and edge sets.

Nodes sit at origin + (i·h, j·h); arrays are indexed [j, i] (row = y).
A pixel is the h×h square centred at a node, so pixel sets are node masks.
Every lattice edge joins two 4-neighbouring nodes; its geometric carrier is the
pixel side it crosses (length h). Plaquettes, the squares spanned by four
nodes, are the vertices of the dual graph.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np
from scipy import ndimage, sparse

from src.core.exceptions import DomainError
from src.geom.constants import INSIDE_CODE
from src.geom.domain import Domain
from src.geom.predicates import classify

logger = logging.getLogger(__name__)

# Edge identifiers: (0, j, i) is the horizontal edge [j,i]–[j,i+1];
# (1, j, i) is the vertical edge [j,i]–[j+1,i].
HORIZONTAL = 0
VERTICAL = 1


class LatticeGrid:
    """Rectangular node lattice masked to a domain"""

    def __init__(self, origin: Tuple[float, float], h: float, shape: Tuple[int, int], mask: np.ndarray = None):
        self.origin = (float(origin[0]), float(origin[1]))
        self.h = float(h)
        self.shape = (int(shape[0]), int(shape[1]))
        self.mask = np.ones(self.shape, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
        if self.mask.shape != self.shape:
            raise DomainError(f"Mask shape {self.mask.shape} does not match grid shape {self.shape}")

    @classmethod
    def for_domain(cls, domain: Domain, n: int = None, h: float = None) -> "LatticeGrid":
        """Lattice over the domain's bounding box with n nodes across its wider side"""
        xmin, ymin, xmax, ymax = domain.bounding_box
        if h is None:
            if n is None:
                if domain.h is None:
                    raise DomainError("Either a node count or a spacing is needed", error_code="geom.NO_RESOLUTION")
                h = domain.h
            else:
                h = max(xmax - xmin, ymax - ymin) / (n - 1)
        nx = int(np.floor((xmax - xmin) / h + 1e-9)) + 1
        ny = int(np.floor((ymax - ymin) / h + 1e-9)) + 1
        grid = cls((xmin, ymin), h, (ny, nx))
        codes = classify(domain, grid.node_points())
        grid.mask = (codes == INSIDE_CODE).reshape(grid.shape)
        grid.check_connected()
        logger.debug(f"Lattice {ny}x{nx}, h={h:.5g}, {int(grid.mask.sum())} interior nodes")
        return grid

    def check_connected(self) -> None:
        _, count = ndimage.label(self.mask)
        if count != 1:
            raise DomainError(f"Lattice mask has {count} connected components", error_code="lifting.MASK")

    # coordinates

    @property
    def xs(self) -> np.ndarray:
        return self.origin[0] + self.h * np.arange(self.shape[1])

    @property
    def ys(self) -> np.ndarray:
        return self.origin[1] + self.h * np.arange(self.shape[0])

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xs, self.ys)

    def node_points(self) -> np.ndarray:
        X, Y = self.coordinates()
        return np.stack([X.ravel(), Y.ravel()], axis=1)

    def plaquette_center(self, j, i):
        return (self.origin[0] + (np.asarray(i) + 0.5) * self.h, self.origin[1] + (np.asarray(j) + 0.5) * self.h)

    def nearest_plaquette(self, point) -> Tuple[int, int]:
        i = int(np.floor((point[0] - self.origin[0]) / self.h))
        j = int(np.floor((point[1] - self.origin[1]) / self.h))
        return j, i

    # derived masks

    @property
    def horizontal_valid(self) -> np.ndarray:
        return self.mask[:, :-1] & self.mask[:, 1:]

    @property
    def vertical_valid(self) -> np.ndarray:
        return self.mask[:-1, :] & self.mask[1:, :]

    @property
    def plaquettes_inside(self) -> np.ndarray:
        m = self.mask
        return m[:-1, :-1] & m[:-1, 1:] & m[1:, :-1] & m[1:, 1:]

    @property
    def plaquette_shape(self) -> Tuple[int, int]:
        return (self.shape[0] - 1, self.shape[1] - 1)

    def boundary_nodes(self) -> np.ndarray:
        """Mask nodes with a 4-neighbour outside the mask"""
        padded = np.pad(self.mask, 1, constant_values=False)
        interior = padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
        return self.mask & ~interior

    def node_index(self) -> np.ndarray:
        """Row-major index of each mask node among mask nodes, −1 elsewhere"""
        index = np.full(self.shape, -1, dtype=int)
        index[self.mask] = np.arange(int(self.mask.sum()))
        return index

    def laplacian(self) -> sparse.csr_matrix:
        """Graph Laplacian (neighbour sum minus degree) over mask nodes, unscaled"""
        index = self.node_index()
        hv, vv = self.horizontal_valid, self.vertical_valid
        rows = np.concatenate([index[:, :-1][hv], index[:-1, :][vv]])
        cols = np.concatenate([index[:, 1:][hv], index[1:, :][vv]])
        n = int(self.mask.sum())
        ones = np.ones(len(rows))
        adjacency = sparse.coo_matrix((ones, (rows, cols)), shape=(n, n))
        adjacency = (adjacency + adjacency.T).tocsr()
        degree = np.asarray(adjacency.sum(axis=1)).ravel()
        return (adjacency - sparse.diags(degree)).tocsr()

    def apply_laplacian(self, values: np.ndarray) -> np.ndarray:
        """Sum over in-mask neighbours of (u_nb − u), node-wise; zero off the mask"""
        values = np.asarray(values, dtype=float)
        out = np.zeros_like(values)
        hv = self.horizontal_valid[(...,) + (None,) * (values.ndim - 2)]
        vv = self.vertical_valid[(...,) + (None,) * (values.ndim - 2)]
        dh = (values[:, 1:] - values[:, :-1]) * hv
        dv = (values[1:, :] - values[:-1, :]) * vv
        out[:, :-1] += dh
        out[:, 1:] -= dh
        out[:-1, :] += dv
        out[1:, :] -= dv
        return out

    def edge_midpoints(self, horizontal: np.ndarray, vertical: np.ndarray) -> np.ndarray:
        jh, ih = np.nonzero(horizontal)
        jv, iv = np.nonzero(vertical)
        hx = self.origin[0] + (ih + 0.5) * self.h
        hy = self.origin[1] + jh * self.h
        vx = self.origin[0] + iv * self.h
        vy = self.origin[1] + (jv + 0.5) * self.h
        return np.concatenate([np.stack([hx, hy], axis=1), np.stack([vx, vy], axis=1)])

    def __repr__(self) -> str:
        return f"LatticeGrid(shape={self.shape}, h={self.h:.5g}, nodes={int(self.mask.sum())})"


@dataclass
class GridField:
    """Two-component values on the nodes of a masked lattice"""
    grid: LatticeGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape + (2,):
            raise DomainError(f"Field shape {self.values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(self.values[self.grid.mask])):
            raise DomainError("Field has non-finite values inside the mask", error_code="lifting.NON_FINITE")

    @classmethod
    def from_function(cls, grid: LatticeGrid, fn) -> "GridField":
        X, Y = grid.coordinates()
        values = np.asarray(fn(X, Y), dtype=float)
        values = np.where(grid.mask[..., None], values, 0.0)
        return cls(grid, values)

    @classmethod
    def constant(cls, grid: LatticeGrid, value) -> "GridField":
        values = np.zeros(grid.shape + (2,))
        values[grid.mask] = np.asarray(value, dtype=float)
        return cls(grid, values)

    def norm(self) -> np.ndarray:
        return np.hypot(self.values[..., 0], self.values[..., 1])

    def copy(self) -> "GridField":
        return GridField(self.grid, self.values.copy())


@dataclass
class PixelSet:
    """Set of in-domain pixels (one per mask node)"""
    grid: LatticeGrid
    cells: np.ndarray

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=bool) & self.grid.mask

    @classmethod
    def empty(cls, grid: LatticeGrid) -> "PixelSet":
        return cls(grid, np.zeros(grid.shape, dtype=bool))

    @classmethod
    def full(cls, grid: LatticeGrid) -> "PixelSet":
        return cls(grid, grid.mask.copy())

    def __xor__(self, other: "PixelSet") -> "PixelSet":
        return PixelSet(self.grid, self.cells ^ other.cells)

    def __or__(self, other: "PixelSet") -> "PixelSet":
        return PixelSet(self.grid, self.cells | other.cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, PixelSet) and np.array_equal(self.cells, other.cells)

    def __len__(self) -> int:
        return int(self.cells.sum())


@dataclass
class EdgeSet:
    """Set of lattice edges; horizontal[j, i] and vertical[j, i] flags"""
    grid: LatticeGrid
    horizontal: np.ndarray
    vertical: np.ndarray

    def __post_init__(self):
        ny, nx = self.grid.shape
        self.horizontal = np.asarray(self.horizontal, dtype=bool)
        self.vertical = np.asarray(self.vertical, dtype=bool)
        if self.horizontal.shape != (ny, nx - 1) or self.vertical.shape != (ny - 1, nx):
            raise DomainError("Edge arrays do not match the grid")

    @classmethod
    def empty(cls, grid: LatticeGrid) -> "EdgeSet":
        ny, nx = grid.shape
        return cls(grid, np.zeros((ny, nx - 1), dtype=bool), np.zeros((ny - 1, nx), dtype=bool))

    def __xor__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.grid, self.horizontal ^ other.horizontal, self.vertical ^ other.vertical)

    def __or__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.grid, self.horizontal | other.horizontal, self.vertical | other.vertical)

    def __and__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.grid, self.horizontal & other.horizontal, self.vertical & other.vertical)

    def __sub__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.grid, self.horizontal & ~other.horizontal, self.vertical & ~other.vertical)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EdgeSet)
            and np.array_equal(self.horizontal, other.horizontal)
            and np.array_equal(self.vertical, other.vertical)
        )

    def __len__(self) -> int:
        return int(self.horizontal.sum() + self.vertical.sum())

    def __iter__(self) -> Iterator[Tuple[int, int, int]]:
        for j, i in zip(*np.nonzero(self.horizontal)):
            yield (HORIZONTAL, int(j), int(i))
        for j, i in zip(*np.nonzero(self.vertical)):
            yield (VERTICAL, int(j), int(i))

    def __contains__(self, edge) -> bool:
        kind, j, i = edge
        return bool(self.horizontal[j, i] if kind == HORIZONTAL else self.vertical[j, i])

    @property
    def count(self) -> int:
        return len(self)

    @property
    def length(self) -> float:
        return self.grid.h * len(self)

    def is_empty(self) -> bool:
        return len(self) == 0

    def restricted(self) -> "EdgeSet":
        """Only edges joining two mask nodes"""
        return EdgeSet(self.grid, self.horizontal & self.grid.horizontal_valid, self.vertical & self.grid.vertical_valid)

    def midpoints(self) -> np.ndarray:
        return self.grid.edge_midpoints(self.horizontal, self.vertical)


def edge_plaquettes(edge) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """The two plaquettes sharing an edge (indices may fall off the array)"""
    kind, j, i = edge
    if kind == HORIZONTAL:
        return (j - 1, i), (j, i)
    return (j, i - 1), (j, i)