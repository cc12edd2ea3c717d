"""Pure-Python constraint search used when the compiled kernels are unavailable.

``search`` enumerates assignments ``f : positions -> domain`` such that

* ``le_dom[f[i] * n_dom + f[j]]`` holds for every order pair ``(i, j)``;
* for every constraint ``(hpos, gvals, set_id)`` the tuple
  ``(tables[f[hpos[k]]][gvals[k]] for k)`` belongs to ``plot_sets[set_id]``.

Plain maps use ``tables[e] == (e,)`` and ``gvals`` all zero.  Exponential
plots use the morphism tables of the exponential's carrier.  Each constraint
is tested as soon as its last position is assigned.
"""
from __future__ import annotations


def search(n_pos, n_dom, tables, le_pairs, le_dom, constraints, plot_sets, cap, count_only=False):
    """Return the list of solutions (tuples), or None when more than ``cap`` exist.

    With ``count_only`` the number of solutions is returned instead and
    ``cap`` is ignored.
    """
    by_pos_order = [[] for _ in range(n_pos)]
    for i, j in le_pairs:
        by_pos_order[max(i, j)].append((i, j))
    by_pos = [[] for _ in range(n_pos)]
    for hpos, gvals, sid in constraints:
        if not hpos:
            continue
        by_pos[max(hpos)].append((hpos, gvals, plot_sets[sid]))
    for hpos, gvals, sid in constraints:
        if not hpos and () not in plot_sets[sid]:
            return 0 if count_only else []
    if n_pos == 0:
        return 1 if count_only else [()]

    out = []
    found = 0
    f = [0] * n_pos
    pos = 0
    nxt = [0] * n_pos     # next candidate value to try at each position
    while pos >= 0:
        if nxt[pos] >= n_dom:
            nxt[pos] = 0
            pos -= 1
            continue
        v = nxt[pos]
        nxt[pos] += 1
        f[pos] = v
        ok = True
        for i, j in by_pos_order[pos]:
            if not le_dom[f[i] * n_dom + f[j]]:
                ok = False
                break
        if ok:
            for hpos, gvals, pset in by_pos[pos]:
                if tuple(tables[f[p]][g] for p, g in zip(hpos, gvals)) not in pset:
                    ok = False
                    break
        if not ok:
            continue
        if pos == n_pos - 1:
            if count_only:
                found += 1
                continue
            out.append(tuple(f))
            if len(out) > cap:
                return None
        else:
            pos += 1
    return found if count_only else out
