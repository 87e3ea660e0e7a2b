"""Direct evaluation of a matching sequence.

This module is deliberately naive: it never runs a DP and is used to
cross-check the engines.
"""

from __future__ import annotations

import numpy as np

from .core import MatchingSequence
from .costs import CostModel, Family

__all__ = ["conversion_costs", "matching_cost"]


def _as_sequence(seq):
    return seq if isinstance(seq, MatchingSequence) else MatchingSequence(seq)


def _insert_cost(S, i, k, j, use_max):
    # data points k+1 .. j-1 (0-based, exclusive) sit between query i-1 at k
    # and query i at j; split them between the two query points
    best = np.inf
    for t in range(k, j):
        left = S[i - 1, k + 1 : t + 1]
        right = S[i, t + 1 : j + 1]
        if use_max:
            v = max(left.max(initial=0.0), right.max(initial=0.0))
        else:
            v = left.sum() + right.sum()
        best = min(best, v)
    return float(best)


def conversion_costs(query, data, seq, model: CostModel):
    """Per-point conversion costs of ``seq`` (no prefix/suffix terms).

    Returns a list with one cost per query point. For edit models the
    leading block of query points sharing ``a_1`` substitutes the cheapest
    member and deletes the rest; every later point is deleted, substituted,
    or substituted after inserting the skipped data points, depending on
    where its predecessor matched.
    """
    seq = _as_sequence(seq).check(len(query), len(data))
    model.check_pair(query, data)
    a = [v - 1 for v in seq]
    m = len(a)
    S = model.sub_matrix(query, data)
    costs = [0.0] * m

    if model.family is Family.EDIT:
        dq = model.del_vector(query)
        di = model.ins_vector(data)
        lead = 1
        while lead < m and a[lead] == a[0]:
            lead += 1
        j0 = a[0]
        pick = min(range(lead), key=lambda t: S[t, j0] - dq[t])
        for t in range(lead):
            costs[t] = float(S[t, j0]) if t == pick else float(dq[t])
        for i in range(lead, m):
            j, k = a[i], a[i - 1]
            if k == j:
                costs[i] = float(dq[i])
            else:
                costs[i] = float(di[k + 1 : j].sum() + S[i, j])
        return costs

    use_max = model.family is Family.FRECHET
    costs[0] = float(S[0, a[0]])
    for i in range(1, m):
        j, k = a[i], a[i - 1]
        if k == j:
            costs[i] = float(S[i, j])
        else:
            costs[i] = _insert_cost(S, i, k, j, use_max)
    return costs


def matching_cost(query, data, seq, model: CostModel, *, flanks=True) -> float:
    """Matching-conversion cost of one matching sequence.

    With ``flanks`` the unmatched data prefix ``[1, a_1 - 1]`` and suffix
    ``[a_m + 1, n]`` are charged too (inserted for edit models, absorbed by
    the first/last query point otherwise), so the minimum over all
    sequences is the whole-pair distance. Without them the value is the
    cost of converting the query into ``data[a_1 : a_m]``.
    """
    seq = _as_sequence(seq).check(len(query), len(data))
    costs = conversion_costs(query, data, seq, model)
    use_max = model.family is Family.FRECHET
    total = max(costs) if use_max else float(sum(costs))
    if not flanks:
        return total
    first, last = seq[0] - 1, seq[-1] - 1
    if model.family is Family.EDIT:
        di = model.ins_vector(data)
        return total + float(di[:first].sum() + di[last + 1 :].sum())
    head = model.sub_matrix(query, data, rows=slice(0, 1))[0, :first]
    tail = model.sub_matrix(query, data, rows=slice(len(query) - 1, None))[0, last + 1 :]
    if use_max:
        return max(total, head.max(initial=0.0), tail.max(initial=0.0))
    return total + float(head.sum() + tail.sum())
