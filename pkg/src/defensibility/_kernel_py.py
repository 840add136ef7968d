"""Pure-Python exhaustive defense search (fallback for the compiled kernel)."""

from itertools import combinations


def best_subset(values, candidates, b, deterministic, order, a, probs, pre_mask, tol):
    """Enumerate every ``b``-subset of ``candidates`` and keep the best one.

    ``candidates`` must be sorted so that lexicographic order of index tuples
    matches the desired tie-break; only a strictly better value (by more than
    ``tol``) replaces the incumbent, so the first maximizer wins.

    Deterministic mode: the attacker walks ``order`` and strikes the first
    ``a`` assets not defended.  Stochastic mode: asset ``i`` survives with
    probability 1 if defended (or in ``pre_mask``), else ``1 - probs[i]``.

    Returns ``(best_indices, best_value, subsets_evaluated)``.
    """
    n = len(values)
    total = 0.0
    for x in values:  # plain left-to-right sum, matches the compiled kernel
        total += x
    best = None
    best_value = float("-inf")
    count = 0
    defended = [False] * n
    for combo in combinations(candidates, b):
        for i in combo:
            defended[i] = True
        if deterministic:
            damage = 0.0
            hit = 0
            for i in order:
                if hit == a:
                    break
                if not defended[i]:
                    damage += values[i]
                    hit += 1
            value = total - damage
        else:
            value = 0.0
            for i in range(n):
                if defended[i] or pre_mask[i]:
                    value += values[i]
                else:
                    value += values[i] * (1.0 - probs[i])
        for i in combo:
            defended[i] = False
        count += 1
        if value > best_value + tol:
            best_value = value
            best = combo
    if best is None:
        return [], best_value, 0
    return list(best), best_value, count
