"""Exception types shared across the package.

Every error that can be triggered by bad input derives from InputError so the
command line tool can map it to a single exit code.  InternalInvariant is
reserved for states that indicate a bug rather than bad input.
"""

from __future__ import annotations


class SefeError(Exception):
    """Base class for all package specific errors."""


class InputError(SefeError):
    """Malformed or out-of-contract input."""


class MalformedEdge(InputError):
    """Edge references an unknown vertex, is a self loop, or repeats a pair
    within one graph."""


class NonPlanarInput(InputError):
    """One of the two graphs is not planar."""


class CommonGraphNotCycles(InputError):
    """The common graph is not a disjoint union of simple cycles."""


class DisconnectedGraph(InputError):
    """An operation that requires a connected graph received a disconnected
    one."""


class NotACutvertex(InputError):
    """cut_components was asked about a vertex that is not a cutvertex."""


class NotBiconnected(InputError):
    """An operation that requires a biconnected graph received something
    else."""


class NotVirtual(InputError):
    """A skeleton edge id did not refer to a virtual edge."""


class CycleNotInBlock(InputError):
    """A cycle passed to a per-block operation does not live in that block."""


class CapExceeded(InputError):
    """An enumeration would exceed the configured cap."""


class EdgeNotExclusive(InputError):
    """augment_edge needs an edge exclusive to the opposite graph."""


class SameComponent(InputError):
    """augment_edge needs endpoints in different components of the graph
    being connected."""


class UnionDisconnected(InputError):
    """connect_instance requires the union graph to be connected."""


class PreprocessingRequired(InputError):
    """decide was called on a disconnected graph without running the
    connector first."""


class ConstraintViolation(InputError):
    """A fixed assignment contradicts the constraint set."""


class CycleFamilyMismatch(InputError):
    """Two structures that must share a cycle family do not."""


class EmbeddingConflict(InputError):
    """A component's fixed embedding contradicts the structure of its host
    graph."""


class EmbeddingNotFixed(InputError):
    """A common component has a vertex of degree three or more without a
    prescribed rotation, so its embedding is not determined."""


class CycleNotEmbedded(InputError):
    """A rotation system does not embed the requested cycle."""


class InternalInvariant(SefeError):
    """An internal invariant was violated; this is a bug, not bad input."""
