"""Words in a free group of finite rank and their elementary transformations."""

from elemtrans.freegroup.words import (
    CyclicWord,
    FreeWord,
    GeneratorTuple,
    cyclic_reduce,
    format_word,
    free_reduce,
    parse_tuple,
    parse_word,
)
from elemtrans.freegroup.nielsen import (
    MoveTrace,
    NielsenMove,
    apply_nielsen,
    is_free_automorphism,
    nielsen_reduce,
    random_nielsen_tuple,
    same_subgroup,
    subgroup_membership,
)
from elemtrans.freegroup.whitehead import (
    WhiteheadMove,
    apply_whitehead,
    automorphic_conjugacy,
    enumerate_whitehead_moves,
    is_primitive,
    whitehead_minimize,
)

__all__ = [
    "CyclicWord",
    "FreeWord",
    "GeneratorTuple",
    "MoveTrace",
    "NielsenMove",
    "WhiteheadMove",
    "apply_nielsen",
    "apply_whitehead",
    "automorphic_conjugacy",
    "cyclic_reduce",
    "enumerate_whitehead_moves",
    "format_word",
    "free_reduce",
    "is_free_automorphism",
    "is_primitive",
    "nielsen_reduce",
    "parse_tuple",
    "parse_word",
    "random_nielsen_tuple",
    "same_subgroup",
    "subgroup_membership",
    "whitehead_minimize",
]
