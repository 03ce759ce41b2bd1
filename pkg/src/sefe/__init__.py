"""Simultaneous embedding with fixed edges (SEFE) for instances whose common
graph is a set of disjoint cycles, plus the fixed-embedding generalization to
arbitrary common components."""

from .errors import (
    CapExceeded,
    CommonGraphNotCycles,
    ConstraintViolation,
    CycleFamilyMismatch,
    CycleNotEmbedded,
    CycleNotInBlock,
    DisconnectedGraph,
    EdgeNotExclusive,
    EmbeddingConflict,
    InputError,
    InternalInvariant,
    MalformedEdge,
    NonPlanarInput,
    NotACutvertex,
    NotBiconnected,
    NotVirtual,
    PreprocessingRequired,
    SameComponent,
    SefeError,
    UnionDisconnected,
)
from .graphs import (
    DirectedCycle,
    EdgeTag,
    Graph,
    RotationSystem,
    SefeInstance,
    SemiEmbedding,
    Side,
    build_instance,
    common_cycles,
    format_instance,
    is_planar,
    is_sphere_embedding,
    parse_instance,
    trace_faces,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
