"""p-subgroup posets of permutation groups, their order complexes and homology."""

from __future__ import annotations

from .errors import (
    CapacityError,
    ContainmentError,
    DegreeMismatchError,
    InvalidActionError,
    InvalidArgumentError,
    InvalidSpecError,
    ParseError,
    PSubgroupsError,
)
from .group import (
    Group,
    Subgroup,
    centralizer,
    generate_group,
    is_solvable,
    normal_subgroups,
    normalizer,
    omega1,
    p_core,
    sylow_subgroup,
)
from .groupspec import GroupSpec, SpecBook, build_product, load_specs, parse_specs
from .perm import Permutation
from .posets import (
    RankWitness,
    SubgroupPoset,
    build_poset,
    fixed_subposet,
    i_reduction,
    lemmaprank_eval,
    p_rank,
    poset_height,
    retract_reduce,
)
from .topology import (
    HomologyGroups,
    IntegerMatrix,
    SimplicialComplex,
    SmithNormalFormResult,
    euler_characteristic,
    is_acyclic,
    order_complex,
    reduced_homology,
    smith_normal_form,
)
from .verify import (
    Family,
    Report,
    Verdict,
    brown_check,
    corpus_run,
    invariance_check,
    is_separating_family,
    normal_stabilizer_search,
    os_index,
    quillen_check,
    solvable_family,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
