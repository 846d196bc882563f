"""
Enum definitions
"""
from enum import Enum


class Containment(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class EndpointKind(str, Enum):
    POINT = "point"
    BOUNDARY_FOOT = "boundary_foot"


class SegmentKind(str, Enum):
    PAIR = "pair"
    BOUNDARY = "boundary"
    CLIPPED = "clipped"


class ContactKind(str, Enum):
    DEFECT_CELL = "defect_cell"
    BOUNDARY_CONTACT = "boundary_contact"
    CUT_CONTACT = "cut_contact"


class ArcClass(str, Enum):
    ESSENTIAL_A = "essential(a)"
    ESSENTIAL_B = "essential(b)"
    CLOSED = "nonessential(i)"
    BOUNDARY_TO_BOUNDARY = "nonessential(ii)"
    SAME_SEGMENT = "nonessential(iii)"
    BOUNDARY_TOUCHING_SEGMENT = "nonessential(iv)"

    @property
    def essential(self) -> bool:
        return self in (ArcClass.ESSENTIAL_A, ArcClass.ESSENTIAL_B)


class CorrespondenceDirection(str, Enum):
    SET_TO_LIFTING = "set_to_lifting"
    LIFTING_TO_SET = "lifting_to_set"


class MagnetizationBoundary(str, Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


class FieldFormat(str, Enum):
    TEXT = "text"
    BINARY = "binary"


class RunMode(str, Enum):
    CONNECT = "connect"
    LIFT = "lift"
    AUDIT_LOWER_BOUND = "audit-lower-bound"
    SIMULATE = "simulate"
    RENORM = "renorm"
    PIPELINE = "pipeline"
