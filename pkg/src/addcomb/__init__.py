"""Additive combinatorics on finite abelian groups.

Fourier analysis with explicit normalizations, Bohr sets and their
regularity theory, large spectra and relative additive energies,
dissociativity and additive dimension, nested containment frameworks,
density-increment drivers, extremal constructions, and an audit
registry that re-checks the inequalities the other modules rely on.
"""

from .groups import (
    Group,
    GSet,
    build_group,
    char_eval,
    dilate_set,
    gset_from_json,
    gset_to_json,
    half_character,
    parse_group_spec,
)

__version__ = "0.1.0"

__all__ = [
    "Group",
    "GSet",
    "build_group",
    "char_eval",
    "dilate_set",
    "gset_from_json",
    "gset_to_json",
    "half_character",
    "parse_group_spec",
    "__version__",
]
