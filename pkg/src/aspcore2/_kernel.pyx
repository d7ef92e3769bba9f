# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled enumeration kernel over packed ground programs.

Same contract as the pure-Python kernel, restricted to programs whose
packed form fits machine integers: at most 62 candidate atoms and weights,
guards, and weight sums within 64-bit range. The caller checks suitability
and falls back to the pure kernel otherwise.
"""

from libc.stdlib cimport calloc, free

DEF KIND_COUNT = 0
DEF KIND_SUM = 1
DEF KIND_MAX = 2
DEF KIND_MIN = 3

ctypedef unsigned long long mask_t


cdef struct Rule:
    mask_t head
    mask_t pos
    mask_t neg
    int astart
    int acount


cdef struct Agg:
    int naf
    int kind
    int has_left
    int left_rel
    int left_is_int
    long long left_val
    int has_right
    int right_rel
    int right_is_int
    long long right_val
    int tstart
    int tcount


cdef struct Tup:
    long long weight
    int participates
    int cmp_left
    int cmp_right
    int cstart
    int ccount


cdef struct Cond:
    mask_t pos
    mask_t neg


cdef inline bint relation_truth(int cmp, int rel) nogil:
    if rel == 0:
        return cmp < 0
    if rel == 1:
        return cmp > 0
    if rel == 2:
        return cmp <= 0
    if rel == 3:
        return cmp >= 0
    if rel == 4:
        return cmp == 0
    return cmp != 0


cdef inline bint tuple_satisfied(mask_t mask, Cond* conds, int start, int count) nogil:
    cdef int c
    for c in range(start, start + count):
        if (mask & conds[c].pos) == conds[c].pos and (mask & conds[c].neg) == 0:
            return True
    return False


cdef inline bint aggregate_true(mask_t mask, Agg* agg, Tup* tuples, Cond* conds) nogil:
    cdef long long value
    cdef int t, cmp, best_left, best_right
    cdef bint truth = True
    if agg.kind == KIND_COUNT or agg.kind == KIND_SUM:
        value = 0
        for t in range(agg.tstart, agg.tstart + agg.tcount):
            if tuple_satisfied(mask, conds, tuples[t].cstart, tuples[t].ccount):
                value += 1 if agg.kind == KIND_COUNT else tuples[t].weight
        if agg.has_left:
            if agg.left_is_int:
                cmp = (value > agg.left_val) - (value < agg.left_val)
            else:
                cmp = -1
            truth = relation_truth(-cmp, agg.left_rel)
        if truth and agg.has_right:
            if agg.right_is_int:
                cmp = (value > agg.right_val) - (value < agg.right_val)
            else:
                cmp = -1
            truth = relation_truth(cmp, agg.right_rel)
    else:
        best_left = -1 if agg.kind == KIND_MAX else 1
        best_right = best_left
        for t in range(agg.tstart, agg.tstart + agg.tcount):
            if tuples[t].participates and tuple_satisfied(
                mask, conds, tuples[t].cstart, tuples[t].ccount
            ):
                if agg.kind == KIND_MAX:
                    if tuples[t].cmp_left > best_left:
                        best_left = tuples[t].cmp_left
                    if tuples[t].cmp_right > best_right:
                        best_right = tuples[t].cmp_right
                else:
                    if tuples[t].cmp_left < best_left:
                        best_left = tuples[t].cmp_left
                    if tuples[t].cmp_right < best_right:
                        best_right = tuples[t].cmp_right
        if agg.has_left:
            truth = relation_truth(-best_left, agg.left_rel)
        if truth and agg.has_right:
            truth = relation_truth(best_right, agg.right_rel)
    if agg.naf:
        return not truth
    return truth


cdef inline bint body_true(
    mask_t mask, Rule* rule, int* agg_index, Agg* aggs, Tup* tuples, Cond* conds
) nogil:
    cdef int a
    if (mask & rule.pos) != rule.pos or (mask & rule.neg) != 0:
        return False
    for a in range(rule.astart, rule.astart + rule.acount):
        if not aggregate_true(mask, &aggs[agg_index[a]], tuples, conds):
            return False
    return True


def solve_masks(flat):
    """All answer-set bitmasks of the packed program, ascending."""
    size_o, conflicts_o, rules_o, agg_index_o, aggs_o, tuples_o, conds_o = flat
    cdef int size = size_o
    if size > 62:
        raise ValueError("packed program too wide for the compiled kernel")
    cdef int n_conflicts = len(conflicts_o)
    cdef int n_rules = len(rules_o)
    cdef int n_index = len(agg_index_o)
    cdef int n_aggs = len(aggs_o)
    cdef int n_tuples = len(tuples_o)
    cdef int n_conds = len(conds_o)

    cdef mask_t* conflicts = <mask_t*>calloc(n_conflicts if n_conflicts else 1, sizeof(mask_t))
    cdef Rule* rules = <Rule*>calloc(n_rules if n_rules else 1, sizeof(Rule))
    cdef Rule** kept = <Rule**>calloc(n_rules if n_rules else 1, sizeof(Rule*))
    cdef int* agg_index = <int*>calloc(n_index if n_index else 1, sizeof(int))
    cdef Agg* aggs = <Agg*>calloc(n_aggs if n_aggs else 1, sizeof(Agg))
    cdef Tup* tuples = <Tup*>calloc(n_tuples if n_tuples else 1, sizeof(Tup))
    cdef Cond* conds = <Cond*>calloc(n_conds if n_conds else 1, sizeof(Cond))
    if not (conflicts and rules and kept and agg_index and aggs and tuples and conds):
        free(conflicts); free(rules); free(kept); free(agg_index)
        free(aggs); free(tuples); free(conds)
        raise MemoryError()

    cdef int i
    cdef mask_t total, mask, sub
    cdef int r, k, n_kept
    cdef bint consistent, model, minimal, refuted
    try:
        for i in range(n_conflicts):
            conflicts[i] = conflicts_o[i]
        for i in range(n_rules):
            rules[i].head = rules_o[i][0]
            rules[i].pos = rules_o[i][1]
            rules[i].neg = rules_o[i][2]
            rules[i].astart = rules_o[i][3]
            rules[i].acount = rules_o[i][4]
        for i in range(n_index):
            agg_index[i] = agg_index_o[i]
        for i in range(n_aggs):
            aggs[i].naf = aggs_o[i][0]
            aggs[i].kind = aggs_o[i][1]
            aggs[i].has_left = aggs_o[i][2]
            aggs[i].left_rel = aggs_o[i][3]
            aggs[i].left_is_int = aggs_o[i][4]
            aggs[i].left_val = aggs_o[i][5]
            aggs[i].has_right = aggs_o[i][6]
            aggs[i].right_rel = aggs_o[i][7]
            aggs[i].right_is_int = aggs_o[i][8]
            aggs[i].right_val = aggs_o[i][9]
            aggs[i].tstart = aggs_o[i][10]
            aggs[i].tcount = aggs_o[i][11]
        for i in range(n_tuples):
            tuples[i].weight = tuples_o[i][0]
            tuples[i].participates = tuples_o[i][1]
            tuples[i].cmp_left = tuples_o[i][2]
            tuples[i].cmp_right = tuples_o[i][3]
            tuples[i].cstart = tuples_o[i][4]
            tuples[i].ccount = tuples_o[i][5]
        for i in range(n_conds):
            conds[i].pos = conds_o[i][0]
            conds[i].neg = conds_o[i][1]

        results = []
        total = (<mask_t>1) << size
        mask = 0
        while mask < total:
            consistent = True
            for i in range(n_conflicts):
                if (mask & conflicts[i]) == conflicts[i]:
                    consistent = False
                    break
            if consistent:
                model = True
                n_kept = 0
                for r in range(n_rules):
                    if body_true(mask, &rules[r], agg_index, aggs, tuples, conds):
                        if (mask & rules[r].head) == 0:
                            model = False
                            break
                        kept[n_kept] = &rules[r]
                        n_kept += 1
                if model:
                    minimal = True
                    if mask != 0:
                        sub = (mask - 1) & mask
                        while True:
                            refuted = False
                            for k in range(n_kept):
                                if body_true(sub, kept[k], agg_index, aggs, tuples, conds) and (sub & kept[k].head) == 0:
                                    refuted = True
                                    break
                            if not refuted:
                                minimal = False
                                break
                            if sub == 0:
                                break
                            sub = (sub - 1) & mask
                    if minimal:
                        results.append(mask)
            mask += 1
        return results
    finally:
        free(conflicts)
        free(rules)
        free(kept)
        free(agg_index)
        free(aggs)
        free(tuples)
        free(conds)
