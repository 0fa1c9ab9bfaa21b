"""Brute-force oracles, independent of the odd-tuple norm formula."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .linf import DomainVector
from .operators import OperatorTuple, apply, exact_max_norm, to_standard_images
from .sequence import norm

MAX_BRUTE_N = 20


@lru_cache(maxsize=8)
def _all_signs(n: int) -> np.ndarray:
    return np.array(list(product((1, -1), repeat=n)), dtype=np.int64)


def brute_norm(op: OperatorTuple):
    """max ||T(s)|| over all 2^n sign vectors s.

    T(s) is assembled from the standard-basis images T(e_j), so the only
    thing shared with ``operator_norm`` is exact integer bookkeeping.
    """
    n = op.n
    if n > MAX_BRUTE_N:
        raise ValueError(f"brute force is capped at n <= {MAX_BRUTE_N}, got {n}")
    if op.ambient.exact:
        return exact_max_norm(_all_signs(n), to_standard_images(op), op.ambient.kind)
    return max(norm(apply(op, DomainVector(s))) for s in product((1, -1), repeat=n))


def brute_norm_slow(op: OperatorTuple) -> Fraction:
    """Pure-Fraction version of ``brute_norm`` for small n."""
    return max(norm(apply(op, DomainVector(s))) for s in product((1, -1), repeat=op.n))
