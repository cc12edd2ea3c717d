# distutils: language = c++
"""Compiled constraint search; same contract as ``_pykernels.search``.

Plot tuples are packed into 64-bit keys (base ``n_val``), so callers must
make sure ``n_val ** max_len`` fits; ``pcfv.kernels`` checks this.
"""
from libcpp.vector cimport vector
from libcpp.unordered_set cimport unordered_set

ctypedef long long i64


def search(int n_pos, int n_dom, tables, le_pairs, le_dom, constraints, plot_sets,
           long cap, int n_val, bint count_only=False):
    cdef int width = 1
    cdef int e, x, k, i, j, p, pos, v, idx, L, sid2, q
    cdef i64 key, mul
    cdef bint ok
    cdef long long found = 0
    for t in tables:
        if len(t) > width:
            width = len(t)
    cdef vector[int] tab = vector[int](max(n_dom, 1) * width, 0)
    for e in range(n_dom):
        t = tables[e]
        for x in range(len(t)):
            tab[e * width + x] = t[x]

    cdef vector[int] le = vector[int](max(n_dom * n_dom, 1), 0)
    for k in range(n_dom * n_dom if le_pairs else 0):
        # plain if: a conditional expression here miscompiles under Cython 3.2
        if le_dom[k]:
            le[k] = 1

    # packed plot sets
    cdef vector[unordered_set[i64]] sets = vector[unordered_set[i64]](len(plot_sets))
    for k in range(len(plot_sets)):
        for tup in plot_sets[k]:
            key = 0
            mul = 1
            for item in tup:
                key += <i64>item * mul
                mul *= n_val
            sets[k].insert(key)

    # order pairs grouped by trigger position
    cdef vector[vector[int]] opairs = vector[vector[int]](max(n_pos, 1))
    for i, j in le_pairs:
        opairs[max(i, j)].push_back(i)
        opairs[max(i, j)].push_back(j)

    # constraints grouped by trigger: [set_id, length, hpos..., gvals...]
    cdef vector[vector[int]] cons = vector[vector[int]](max(n_pos, 1))
    for hpos, gvals, sid in constraints:
        if len(hpos) == 0:
            if () not in plot_sets[sid]:
                return 0 if count_only else []
            continue
        p = max(hpos)
        cons[p].push_back(sid)
        cons[p].push_back(len(hpos))
        for x in hpos:
            cons[p].push_back(x)
        for x in gvals:
            cons[p].push_back(x)
    if n_pos == 0:
        return 1 if count_only else [()]

    out = []
    cdef vector[int] f = vector[int](n_pos, 0)
    cdef vector[int] nxt = vector[int](n_pos, 0)
    pos = 0
    while pos >= 0:
        if nxt[pos] >= n_dom:
            nxt[pos] = 0
            pos -= 1
            continue
        v = nxt[pos]
        nxt[pos] += 1
        f[pos] = v
        ok = True
        idx = 0
        while idx < <int>opairs[pos].size():
            if not le[f[opairs[pos][idx]] * n_dom + f[opairs[pos][idx + 1]]]:
                ok = False
                break
            idx += 2
        if ok:
            idx = 0
            while idx < <int>cons[pos].size():
                sid2 = cons[pos][idx]
                L = cons[pos][idx + 1]
                key = 0
                mul = 1
                for q in range(L):
                    key += <i64>tab[f[cons[pos][idx + 2 + q]] * width + cons[pos][idx + 2 + L + q]] * mul
                    mul *= n_val
                if sets[sid2].find(key) == sets[sid2].end():
                    ok = False
                    break
                idx += 2 + 2 * L
        if not ok:
            continue
        if pos == n_pos - 1:
            found += 1
            if count_only:
                continue
            out.append(tuple([f[q] for q in range(n_pos)]))
            if found > cap:
                return None
        else:
            pos += 1
    return found if count_only else out
