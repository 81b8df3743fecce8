"""Stabilizers, orbit intersections, and automorphism orders for central
extensions of elementary abelian groups.

The heavy lifting lives in the compiled ``_extorb`` module; this package
re-exports its operations.  All structured results are plain dicts/lists
mirroring the CLI's ``--json`` output, with large orders rendered as decimal
strings.
"""

from ._extorb import (  # noqa: F401
    CapExceededError,
    ExtorbError,
    analyze_class,
    aut_order,
    c_chi,
    catalog_entry,
    catalog_names,
    classify_form,
    equivalent_forms,
    reduce_form,
    reproduce,
    reproduce_targets,
    semisimple_report,
)

__all__ = [
    "CapExceededError",
    "ExtorbError",
    "analyze_class",
    "aut_order",
    "c_chi",
    "catalog_entry",
    "catalog_names",
    "classify_form",
    "equivalent_forms",
    "reduce_form",
    "reproduce",
    "reproduce_targets",
    "semisimple_report",
]
