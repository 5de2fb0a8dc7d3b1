"""Finite-window certificates for paradoxical decompositions.

Elements are passed as text in the group's own notation, for example
"ab^-1" in free:2, "(3,-1)" in zn:2 and "(1/2,3/4)" in bs12. Certificates
are JSON text in the paradox-cert/v1 format.
"""

import json

from ._paradox import (
    BudgetExceeded,
    Group,
    ParadoxError,
    __version__,
    check,
    cp_witness,
    greedy_small_set,
    induce,
    run_cli,
    semigroup_witness,
    sha256_hex,
    verify_certificate,
)

EXIT_FOUND = 0
EXIT_USAGE = 1
EXIT_DUAL = 2
EXIT_VERIFY_FAILED = 3


def load_certificate(text):
    """Parses certificate JSON into a dict without verifying it."""
    return json.loads(text)


__all__ = [
    "BudgetExceeded",
    "EXIT_DUAL",
    "EXIT_FOUND",
    "EXIT_USAGE",
    "EXIT_VERIFY_FAILED",
    "Group",
    "ParadoxError",
    "__version__",
    "check",
    "cp_witness",
    "greedy_small_set",
    "induce",
    "load_certificate",
    "run_cli",
    "semigroup_witness",
    "sha256_hex",
    "verify_certificate",
]
