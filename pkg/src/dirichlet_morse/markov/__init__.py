"""Symbolic dynamics of the codes: admissibility, realizability, forbidden words."""

from .check import MarkovReport, markov_check
from .forbidden import ForbiddenWordReport, find_forbidden_word
from .realize import (
    Realizable,
    RealizabilityResult,
    SeparationCertificate,
    SubdivisionCertificate,
    Unknown,
    Unrealizable,
    realize_word,
    realize_word_ideal,
    separation_certificate,
)
from .vertices import VertexHit, angle_sum, find_vertex_in_sector, star_edges, vertex_star
from .words import (
    BlockSet,
    DomainChain,
    admissible,
    admissible_count,
    blocks_of,
    domain_chain,
    enumerate_admissible,
    random_admissible,
)
