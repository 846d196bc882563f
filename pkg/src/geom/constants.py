"""
Constants for built-in domains and geometric predicates
"""

# Vertex count used by the built-in smooth shapes
DEFAULT_VERTICES = 256

# Points are classified in chunks so distance tables stay small
CLASSIFY_CHUNK = 2048

# Integer codes returned by vectorised containment
INSIDE_CODE = 1
BOUNDARY_CODE = 0
OUTSIDE_CODE = -1

# Built-in shape parameters
KIDNEY_DIMPLE = 0.8          # r(θ) = 1 − KIDNEY_DIMPLE·cos θ
ROUNDED_SQUARE_HALF = 1.0
ROUNDED_SQUARE_RADIUS = 0.25

SHAPE_ALIASES = {
    "unit-disk": "disk",
    "rounded_square": "rounded-square",
}
