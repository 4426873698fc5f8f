"""Compiled run engines for the archive-based evolutionary loop.

Two interchangeable engines execute the same loop and consume the random
generator identically, so a fixed (seed, stream) pair produces identical
trajectories:

* ``run_scan``: the reference engine.  The archive is a dense list and
  every update performs the update rule verbatim: remove all members
  weakly dominated by the offspring, then insert the offspring unless some
  remaining member strictly dominates it.  O(|P|) per iteration.

* ``run_indexed``: the fast engine.  Members with first coordinate
  strictly inside (-a, a) live in slots keyed by that coordinate, plus one
  slot for the region x1 >= a and one for x1 <= -a (for a = 0 the two
  regions are split at 0, non-negative to the right).  Because the archive
  is always an antichain, s + x1 is strictly increasing and s - x1
  strictly decreasing across occupied inside slots (s = sum of the other
  coordinates' magnitudes), which makes dominance filtering local:
  only the nearest occupied neighbors can dominate an inside offspring,
  members it dominates form contiguous runs next to it, and an offspring
  in an outer region interacts with inside members only through the
  nearest extreme slot.  Amortized O(1) per iteration.

Both engines expose the population in identical dense order (insertions
append, removals swap in the last member, applied in descending position
order), so parent selection consumes the same draws.

Trajectory digests are FNV-1a over the per-iteration tuple
(evals, f1, f2, accepted, population size, covered count).
"""

import numpy as np
from numba import njit

from ._kernels import mutate_into

ERR_NONE = 0
ERR_OVERFLOW = 1
ERR_CAPACITY = 2

# invariant-violation codes, offset by 100 in the error field
IV_UPPER = 1
IV_LOWER = 2
IV_INTERIOR = 3
IV_SIZE = 4
IV_COMPARABLE = 5
IV_MIN_NORM = 6
IV_COVERAGE = 7

# misc[] layout
M_PHASE1 = 0
M_PHASE2 = 1
M_TOTAL = 2
M_COMPLETED = 3
M_ERR = 4
M_ERR_ITER = 5
M_COVERED = 6
M_COUNT = 7
MISC_LEN = 8

FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211


@njit(cache=True, nogil=True, inline="always")
def _mix(h, v):
    return (h ^ np.uint64(v)) * np.uint64(FNV_PRIME)


@njit(cache=True, nogil=True, inline="always")
def _eval_point(y, n, a):
    tail = np.int64(0)
    for i in range(1, n):
        tail += abs(y[i])
    return abs(y[0] - a) + tail, abs(y[0] + a) + tail


@njit(cache=True, nogil=True)
def _population_invariant_code(a, n, pts, rows, count):
    """Re-derive the structural invariants from raw coordinates.

    Returns 0 when all hold, else the violation code.  Quadratic in the
    population size; only called from checked runs.
    """
    upper = 0
    lower = 0
    for p in range(count):
        x1 = pts[rows[p], 0]
        if x1 >= a:
            upper += 1
        if x1 <= -a:
            lower += 1
    if upper > 1:
        return IV_UPPER
    if lower > 1:
        return IV_LOWER
    if count > 2 * a + 1:
        return IV_SIZE
    for i in range(count):
        ri = rows[i]
        fi1, fi2 = _eval_point(pts[ri], n, a)
        for j in range(count):
            if i == j:
                continue
            rj = rows[j]
            x1i = pts[ri, 0]
            x1j = pts[rj, 0]
            if x1i == x1j and -a <= x1i <= a:
                return IV_INTERIOR
            fj1, fj2 = _eval_point(pts[rj], n, a)
            if fi1 <= fj1 and fi2 <= fj2:
                return IV_COMPARABLE
    return 0


@njit(cache=True, nogil=True, inline="always")
def _min_l1(pts, rows, count, n):
    best = np.int64(2**62)
    for p in range(count):
        r = rows[p]
        s = np.int64(0)
        for i in range(n):
            s += abs(pts[r, i])
        if s < best:
            best = s
    return best


@njit(cache=True, nogil=True, inline="always")
def _sort_desc(buf, m):
    # insertion sort; removal batches are tiny in amortized terms
    for i in range(1, m):
        v = buf[i]
        j = i - 1
        while j >= 0 and buf[j] < v:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = v


@njit(cache=True, nogil=True, inline="always")
def _scan_update(a, n, y, fy1, fy2, pts, f1s, f2s, covered, st, rem_buf):
    """Verbatim archive update against a dense member list.

    st[0] = population size, st[1] = covered count.  Returns 1 if the
    offspring was inserted, else 0, or -1 when the dense storage would
    overflow (impossible unless dominance filtering is broken).
    """
    count = st[0]
    nrem = 0
    for p in range(count):
        if fy1 <= f1s[p] and fy2 <= f2s[p]:
            rem_buf[nrem] = p
            nrem += 1
    # strict dominators among the remaining members
    rejected = False
    ri = 0
    for p in range(count):
        if ri < nrem and rem_buf[ri] == p:
            ri += 1
            continue
        if f1s[p] <= fy1 and f2s[p] <= fy2 and (f1s[p] < fy1 or f2s[p] < fy2):
            rejected = True
            break
    for i in range(nrem - 1, -1, -1):
        p = rem_buf[i]
        last = count - 1
        if p != last:
            for c in range(n):
                pts[p, c] = pts[last, c]
            f1s[p] = f1s[last]
            f2s[p] = f2s[last]
        count -= 1
    if not rejected:
        if count >= pts.shape[0]:
            st[0] = count
            return -1
        for c in range(n):
            pts[count, c] = y[c]
        f1s[count] = fy1
        f2s[count] = fy2
        count += 1
        if fy1 + fy2 == 2 * a and covered[fy1] == 0:
            covered[fy1] = 1
            st[1] += 1
    st[0] = count
    return 0 if rejected else 1


# st[] layout for the indexed archive
S_COUNT = 0
S_COVERED = 1
S_FIRST = 2
S_LAST = 3


@njit(cache=True, nogil=True, inline="always")
def _indexed_update(
    a, n, y, fy1, fy2, pts, x1s, f1s, f2s, pos, rows, nxt, prv, covered, st, rem_buf
):
    """Structured archive update; same semantics as ``_scan_update``.

    Row layout: inside slots 0 .. n_mid-1 keyed by x1 + a - 1 (empty when
    a = 0), then the low-region row and the high-region row.  Returns 1 on
    insertion, 0 on rejection.
    """
    n_mid = 2 * a - 1 if a >= 1 else 0
    low_row = n_mid
    high_row = n_mid + 1
    x1y = y[0]
    nrem = 0
    left_final = np.int64(-1)
    right_final = np.int64(-1)

    # region split; for a = 0 non-negative first coordinates go high
    in_high = x1y >= a
    in_low = (not in_high) and x1y <= -a

    if in_high or in_low:
        # ---- offspring in an outer region ----
        own = high_row if in_high else low_row
        other = low_row if in_high else high_row
        own_rm = False
        other_rm = False
        if pos[own] >= 0:
            y_dom = fy1 <= f1s[own] and fy2 <= f2s[own]
            z_dom = f1s[own] <= fy1 and f2s[own] <= fy2
            if z_dom and not y_dom:
                return 0
            own_rm = y_dom  # same-region pairs are always comparable
        if pos[other] >= 0:
            y_dom = fy1 <= f1s[other] and fy2 <= f2s[other]
            z_dom = f1s[other] <= fy1 and f2s[other] <= fy2
            if z_dom and not y_dom:
                return 0
            other_rm = y_dom
        # only the extreme occupied inside slot can dominate an outer point
        edge = st[S_LAST] if in_high else st[S_FIRST]
        if edge >= 0 and f1s[edge] <= fy1 and f2s[edge] <= fy2:
            return 0

        # accepted: collect removals
        if own_rm:
            rem_buf[nrem] = pos[own]
            nrem += 1
        if other_rm:
            rem_buf[nrem] = pos[other]
            nrem += 1
        # inside members dominated by an outer offspring form a contiguous
        # run at the near end of the occupied-slot list
        cur = edge
        while cur >= 0 and fy1 <= f1s[cur] and fy2 <= f2s[cur]:
            rem_buf[nrem] = pos[cur]
            nrem += 1
            step = prv[cur] if in_high else nxt[cur]
            # splice out of the slot list
            if prv[cur] >= 0:
                nxt[prv[cur]] = nxt[cur]
            else:
                st[S_FIRST] = nxt[cur]
            if nxt[cur] >= 0:
                prv[nxt[cur]] = prv[cur]
            else:
                st[S_LAST] = prv[cur]
            cur = step
    else:
        # ---- offspring strictly inside ----
        k = x1y + a - 1
        same_occ = pos[k] >= 0
        if same_occ:
            # same slot differs only in the tail norm: always comparable
            if f1s[k] < fy1:
                return 0
            lnb = prv[k]
            rnb = nxt[k]
        else:
            lnb = -1
            kk = k - 1
            while kk >= 0:
                if pos[kk] >= 0:
                    lnb = kk
                    break
                kk -= 1
            rnb = -1
            kk = k + 1
            while kk < n_mid:
                if pos[kk] >= 0:
                    rnb = kk
                    break
                kk += 1
        # of the inside members, only the nearest occupied neighbors can
        # dominate the offspring
        if lnb >= 0 and f1s[lnb] <= fy1 and f2s[lnb] <= fy2:
            return 0
        if rnb >= 0 and f1s[rnb] <= fy1 and f2s[rnb] <= fy2:
            return 0
        high_rm = False
        low_rm = False
        if pos[high_row] >= 0:
            y_dom = fy1 <= f1s[high_row] and fy2 <= f2s[high_row]
            z_dom = f1s[high_row] <= fy1 and f2s[high_row] <= fy2
            if z_dom and not y_dom:
                return 0
            high_rm = y_dom
        if pos[low_row] >= 0:
            y_dom = fy1 <= f1s[low_row] and fy2 <= f2s[low_row]
            z_dom = f1s[low_row] <= fy1 and f2s[low_row] <= fy2
            if z_dom and not y_dom:
                return 0
            low_rm = y_dom

        # accepted: collect removals
        if same_occ:
            # not rejected above, hence the slot member is weakly dominated
            rem_buf[nrem] = pos[k]
            nrem += 1
            if prv[k] >= 0:
                nxt[prv[k]] = nxt[k]
            else:
                st[S_FIRST] = nxt[k]
            if nxt[k] >= 0:
                prv[nxt[k]] = prv[k]
            else:
                st[S_LAST] = prv[k]
        if high_rm:
            rem_buf[nrem] = pos[high_row]
            nrem += 1
        if low_rm:
            rem_buf[nrem] = pos[low_row]
            nrem += 1
        # dominated inside members form contiguous runs flanking the slot
        left_final = lnb
        cur = lnb
        while cur >= 0 and fy1 <= f1s[cur] and fy2 <= f2s[cur]:
            rem_buf[nrem] = pos[cur]
            nrem += 1
            step = prv[cur]
            if prv[cur] >= 0:
                nxt[prv[cur]] = nxt[cur]
            else:
                st[S_FIRST] = nxt[cur]
            if nxt[cur] >= 0:
                prv[nxt[cur]] = prv[cur]
            else:
                st[S_LAST] = prv[cur]
            cur = step
            left_final = cur
        right_final = rnb
        cur = rnb
        while cur >= 0 and fy1 <= f1s[cur] and fy2 <= f2s[cur]:
            rem_buf[nrem] = pos[cur]
            nrem += 1
            step = nxt[cur]
            if prv[cur] >= 0:
                nxt[prv[cur]] = nxt[cur]
            else:
                st[S_FIRST] = nxt[cur]
            if nxt[cur] >= 0:
                prv[nxt[cur]] = prv[cur]
            else:
                st[S_LAST] = prv[cur]
            cur = step
            right_final = cur

    # ---- apply dense removals in descending position order ----
    if nrem > 0:
        _sort_desc(rem_buf, nrem)
        count = st[S_COUNT]
        for i in range(nrem):
            p = rem_buf[i]
            r = rows[p]
            last = count - 1
            mr = rows[last]
            rows[p] = mr
            pos[mr] = p
            pos[r] = -1
            count -= 1
        st[S_COUNT] = count

    # ---- insert the offspring ----
    if in_high or in_low:
        row = high_row if in_high else low_row
    else:
        row = x1y + a - 1
    for c in range(n):
        pts[row, c] = y[c]
    x1s[row] = x1y
    f1s[row] = fy1
    f2s[row] = fy2
    rows[st[S_COUNT]] = row
    pos[row] = st[S_COUNT]
    st[S_COUNT] += 1
    if not (in_high or in_low):
        k = row
        prv[k] = left_final
        nxt[k] = right_final
        if left_final >= 0:
            nxt[left_final] = k
        else:
            st[S_FIRST] = k
        if right_final >= 0:
            prv[right_final] = k
        else:
            st[S_LAST] = k
    if fy1 + fy2 == 2 * a and covered[fy1] == 0:
        covered[fy1] = 1
        st[S_COVERED] += 1
    return 1


@njit(cache=True, nogil=True)
def run_scan(
    rng, gsemo, law_code, q, beta, a, n, x0, max_evals, check_every, out_pts, misc
):
    target = 2 * a + 1
    cap = target + 2
    pts = np.zeros((cap, n), dtype=np.int64)
    f1s = np.zeros(cap, dtype=np.int64)
    f2s = np.zeros(cap, dtype=np.int64)
    covered = np.zeros(target, dtype=np.uint8)
    st = np.zeros(2, dtype=np.int64)
    rem_buf = np.zeros(cap, dtype=np.int64)
    rows = np.arange(cap, dtype=np.int64)  # dense order == row order here
    y = np.empty(n, dtype=np.int64)
    ccap = (2**62) // n

    digest = np.uint64(FNV_OFFSET)
    evals = 1
    f01, f02 = _eval_point(x0, n, a)
    hit = f01 + f02 == 2 * a
    phase1 = evals if hit else 0
    _scan_update(a, n, x0, f01, f02, pts, f1s, f2s, covered, st, rem_buf)
    digest = _mix(digest, f01)
    digest = _mix(digest, f02)
    digest = _mix(digest, st[0])
    digest = _mix(digest, st[1])

    err = ERR_NONE
    err_iter = 0
    last_min = _min_l1(pts, rows, st[0], n)
    last_cov = st[1]

    while st[1] < target and evals < max_evals and err == ERR_NONE:
        idx = rng.integers(0, st[0])
        mutate_into(rng, pts[idx], y, n, gsemo, law_code, q, beta)
        evals += 1
        bad = False
        for i in range(n):
            if y[i] > ccap or y[i] < -ccap:
                bad = True
        if bad:
            err = ERR_OVERFLOW
            err_iter = evals
            break
        fy1, fy2 = _eval_point(y, n, a)
        if not hit and fy1 + fy2 == 2 * a:
            hit = True
            phase1 = evals
        acc = _scan_update(a, n, y, fy1, fy2, pts, f1s, f2s, covered, st, rem_buf)
        if acc < 0 or st[0] > target:
            err = ERR_CAPACITY
            err_iter = evals
            break
        digest = _mix(digest, evals)
        digest = _mix(digest, fy1)
        digest = _mix(digest, fy2)
        digest = _mix(digest, acc)
        digest = _mix(digest, st[0])
        digest = _mix(digest, st[1])
        if check_every > 0 and evals % check_every == 0:
            code = _population_invariant_code(a, n, pts, rows, st[0])
            if code == 0:
                cur_min = _min_l1(pts, rows, st[0], n)
                if cur_min > last_min:
                    code = IV_MIN_NORM
                elif st[1] < last_cov:
                    code = IV_COVERAGE
                else:
                    last_min = cur_min
                    last_cov = st[1]
            if code != 0:
                err = 100 + code
                err_iter = evals
                break

    total = evals
    if not hit:
        phase1 = total
    misc[M_PHASE1] = phase1
    misc[M_PHASE2] = total - phase1
    misc[M_TOTAL] = total
    misc[M_COMPLETED] = 1 if st[1] == target else 0
    misc[M_ERR] = err
    misc[M_ERR_ITER] = err_iter
    misc[M_COVERED] = st[1]
    misc[M_COUNT] = st[0]
    for p in range(st[0]):
        for c in range(n):
            out_pts[p, c] = pts[p, c]
    return digest


@njit(cache=True, nogil=True)
def run_indexed(
    rng, gsemo, law_code, q, beta, a, n, x0, max_evals, check_every, out_pts, misc
):
    target = 2 * a + 1
    n_mid = 2 * a - 1 if a >= 1 else 0
    nrows = n_mid + 2
    pts = np.zeros((nrows, n), dtype=np.int64)
    x1s = np.zeros(nrows, dtype=np.int64)
    f1s = np.zeros(nrows, dtype=np.int64)
    f2s = np.zeros(nrows, dtype=np.int64)
    pos = np.full(nrows, -1, dtype=np.int64)
    rows = np.zeros(nrows, dtype=np.int64)
    nxt = np.full(max(n_mid, 1), -1, dtype=np.int64)
    prv = np.full(max(n_mid, 1), -1, dtype=np.int64)
    covered = np.zeros(target, dtype=np.uint8)
    st = np.zeros(4, dtype=np.int64)
    st[S_FIRST] = -1
    st[S_LAST] = -1
    rem_buf = np.zeros(nrows, dtype=np.int64)
    y = np.empty(n, dtype=np.int64)
    ccap = (2**62) // n

    digest = np.uint64(FNV_OFFSET)
    evals = 1
    f01, f02 = _eval_point(x0, n, a)
    hit = f01 + f02 == 2 * a
    phase1 = evals if hit else 0
    _indexed_update(
        a, n, x0, f01, f02, pts, x1s, f1s, f2s, pos, rows, nxt, prv, covered, st, rem_buf
    )
    digest = _mix(digest, f01)
    digest = _mix(digest, f02)
    digest = _mix(digest, st[S_COUNT])
    digest = _mix(digest, st[S_COVERED])

    err = ERR_NONE
    err_iter = 0
    last_min = _min_l1(pts, rows, st[S_COUNT], n)
    last_cov = st[S_COVERED]

    while st[S_COVERED] < target and evals < max_evals and err == ERR_NONE:
        idx = rng.integers(0, st[S_COUNT])
        mutate_into(rng, pts[rows[idx]], y, n, gsemo, law_code, q, beta)
        evals += 1
        bad = False
        for i in range(n):
            if y[i] > ccap or y[i] < -ccap:
                bad = True
        if bad:
            err = ERR_OVERFLOW
            err_iter = evals
            break
        fy1, fy2 = _eval_point(y, n, a)
        if not hit and fy1 + fy2 == 2 * a:
            hit = True
            phase1 = evals
        acc = _indexed_update(
            a, n, y, fy1, fy2, pts, x1s, f1s, f2s, pos, rows, nxt, prv, covered,
            st, rem_buf,
        )
        if st[S_COUNT] > target:
            err = ERR_CAPACITY
            err_iter = evals
            break
        digest = _mix(digest, evals)
        digest = _mix(digest, fy1)
        digest = _mix(digest, fy2)
        digest = _mix(digest, acc)
        digest = _mix(digest, st[S_COUNT])
        digest = _mix(digest, st[S_COVERED])
        if check_every > 0 and evals % check_every == 0:
            code = _population_invariant_code(a, n, pts, rows, st[S_COUNT])
            if code == 0:
                cur_min = _min_l1(pts, rows, st[S_COUNT], n)
                if cur_min > last_min:
                    code = IV_MIN_NORM
                elif st[S_COVERED] < last_cov:
                    code = IV_COVERAGE
                else:
                    last_min = cur_min
                    last_cov = st[S_COVERED]
            if code != 0:
                err = 100 + code
                err_iter = evals
                break

    total = evals
    if not hit:
        phase1 = total
    misc[M_PHASE1] = phase1
    misc[M_PHASE2] = total - phase1
    misc[M_TOTAL] = total
    misc[M_COMPLETED] = 1 if st[S_COVERED] == target else 0
    misc[M_ERR] = err
    misc[M_ERR_ITER] = err_iter
    misc[M_COVERED] = st[S_COVERED]
    misc[M_COUNT] = st[S_COUNT]
    for p in range(st[S_COUNT]):
        r = rows[p]
        for c in range(n):
            out_pts[p, c] = pts[r, c]
    return digest
