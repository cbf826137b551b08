# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled replication kernel.

Mirrors wakedep.engine.reference bit for bit: same splitmix64 stream,
same draw order, same floating-point expression order (the build passes
-ffp-contract=off so the compiler cannot fuse a*a + b*b into fma).  The
k-nearest-neighbour search uses a uniform grid instead of the reference
brute force; the top-k set under the (distance^2, insertion-seq) order
is unique, so the result is identical while queries stay sublinear.
"""

from libc.math cimport cbrt, exp, sqrt
from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    """
    static inline unsigned long long wd_mulhi64(unsigned long long a,
                                                unsigned long long b) {
        return (unsigned long long)(((__uint128_t)a * b) >> 64);
    }
    """
    u64 wd_mulhi64(u64 a, u64 b) nogil


cdef double _INV_2_53 = 1.0 / 9007199254740992.0
cdef u64 _GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline u64 mix64(u64 z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 stream_next(u64* state) nogil:
    state[0] = state[0] + _GOLDEN
    return mix64(state[0])


cdef inline double stream_double(u64* state) nogil:
    return <double>(stream_next(state) >> 11) * _INV_2_53


cdef inline u64 stream_below(u64* state, u64 n) nogil:
    return wd_mulhi64(stream_next(state), n)


# ---------------------------------------------------------------------------
# KNN predictor state (window buffers + running statistics + query grid)
# ---------------------------------------------------------------------------

cdef struct Knn:
    int k
    int window
    int count
    i64 next_seq
    i64 stat_n
    double mean[3]
    double m2[3]
    double* f0
    double* f1
    double* f2
    char* label
    i64* seq
    int grid_ready
    int cx, cy, cz
    double minx, miny, minz
    double wx, wy, wz
    double wmin
    double gmean[3]
    double gstd[3]
    double* zx
    double* zy
    double* zz
    int* cell_start
    int* cell_items
    int* item_cell


cdef int knn_alloc(Knn* K, int k, int window) nogil:
    cdef int cpd = <int>cbrt(<double>window) + 2
    cdef int max_cells = cpd * cpd * cpd + 8
    K.k = k
    K.window = window
    K.count = 0
    K.next_seq = 0
    K.stat_n = 0
    K.mean[0] = K.mean[1] = K.mean[2] = 0.0
    K.m2[0] = K.m2[1] = K.m2[2] = 0.0
    K.grid_ready = 0
    K.f0 = <double*>malloc(window * sizeof(double))
    K.f1 = <double*>malloc(window * sizeof(double))
    K.f2 = <double*>malloc(window * sizeof(double))
    K.label = <char*>malloc(window)
    K.seq = <i64*>malloc(window * sizeof(i64))
    K.zx = <double*>malloc(window * sizeof(double))
    K.zy = <double*>malloc(window * sizeof(double))
    K.zz = <double*>malloc(window * sizeof(double))
    K.cell_start = <int*>malloc((max_cells + 1) * sizeof(int))
    K.cell_items = <int*>malloc(window * sizeof(int))
    K.item_cell = <int*>malloc(window * sizeof(int))
    if (K.f0 == NULL or K.f1 == NULL or K.f2 == NULL or K.label == NULL or
            K.seq == NULL or K.zx == NULL or K.zy == NULL or K.zz == NULL or
            K.cell_start == NULL or K.cell_items == NULL or K.item_cell == NULL):
        return 0
    return 1


cdef void knn_free(Knn* K) nogil:
    free(K.f0); free(K.f1); free(K.f2)
    free(K.label); free(K.seq)
    free(K.zx); free(K.zy); free(K.zz)
    free(K.cell_start); free(K.cell_items); free(K.item_cell)


cdef void knn_add(Knn* K, double a, double b, double c, int label) nogil:
    cdef double delta
    cdef int slot
    K.stat_n += 1
    delta = a - K.mean[0]
    K.mean[0] += delta / <double>K.stat_n
    K.m2[0] += delta * (a - K.mean[0])
    delta = b - K.mean[1]
    K.mean[1] += delta / <double>K.stat_n
    K.m2[1] += delta * (b - K.mean[1])
    delta = c - K.mean[2]
    K.mean[2] += delta / <double>K.stat_n
    K.m2[2] += delta * (c - K.mean[2])
    slot = <int>(K.next_seq % K.window)
    K.f0[slot] = a
    K.f1[slot] = b
    K.f2[slot] = c
    K.label[slot] = <char>label
    K.seq[slot] = K.next_seq
    K.next_seq += 1
    if K.count < K.window:
        K.count += 1
    K.grid_ready = 0


cdef inline int _cell_of(double z, double lo, double w, int c) nogil:
    cdef int idx = <int>((z - lo) / w)
    if idx < 0:
        idx = 0
    if idx >= c:
        idx = c - 1
    return idx


cdef void knn_build_grid(Knn* K) nogil:
    cdef int j, d, cpd, cell, ncells
    cdef double s
    cdef double minx = 0.0, maxx = 0.0, miny = 0.0, maxy = 0.0
    cdef double minz = 0.0, maxz = 0.0
    # z-scoring scale, identical formula to the pure-Python predictor
    for d in range(3):
        K.gmean[d] = K.mean[d]
        if K.stat_n >= 2 and K.m2[d] > 0.0:
            K.gstd[d] = sqrt(K.m2[d] / <double>K.stat_n)
        else:
            K.gstd[d] = 0.0
    for j in range(K.count):
        s = K.gstd[0]
        K.zx[j] = (K.f0[j] - K.gmean[0]) / s if s > 0.0 else 0.0
        s = K.gstd[1]
        K.zy[j] = (K.f1[j] - K.gmean[1]) / s if s > 0.0 else 0.0
        s = K.gstd[2]
        K.zz[j] = (K.f2[j] - K.gmean[2]) / s if s > 0.0 else 0.0
        if j == 0:
            minx = maxx = K.zx[0]
            miny = maxy = K.zy[0]
            minz = maxz = K.zz[0]
        else:
            if K.zx[j] < minx: minx = K.zx[j]
            if K.zx[j] > maxx: maxx = K.zx[j]
            if K.zy[j] < miny: miny = K.zy[j]
            if K.zy[j] > maxy: maxy = K.zy[j]
            if K.zz[j] < minz: minz = K.zz[j]
            if K.zz[j] > maxz: maxz = K.zz[j]
    cpd = <int>cbrt(<double>K.count)
    if cpd < 1:
        cpd = 1
    K.cx = cpd if maxx > minx else 1
    K.cy = cpd if maxy > miny else 1
    K.cz = cpd if maxz > minz else 1
    K.minx = minx
    K.miny = miny
    K.minz = minz
    K.wx = (maxx - minx) / K.cx if maxx > minx else 1.0
    K.wy = (maxy - miny) / K.cy if maxy > miny else 1.0
    K.wz = (maxz - minz) / K.cz if maxz > minz else 1.0
    K.wmin = 0.0
    if K.cx > 1:
        K.wmin = K.wx
    if K.cy > 1 and (K.wmin == 0.0 or K.wy < K.wmin):
        K.wmin = K.wy
    if K.cz > 1 and (K.wmin == 0.0 or K.wz < K.wmin):
        K.wmin = K.wz
    ncells = K.cx * K.cy * K.cz
    for j in range(ncells + 1):
        K.cell_start[j] = 0
    for j in range(K.count):
        cell = (
            (_cell_of(K.zx[j], K.minx, K.wx, K.cx) * K.cy
             + _cell_of(K.zy[j], K.miny, K.wy, K.cy)) * K.cz
            + _cell_of(K.zz[j], K.minz, K.wz, K.cz)
        )
        K.item_cell[j] = cell
        K.cell_start[cell + 1] += 1
    for j in range(ncells):
        K.cell_start[j + 1] += K.cell_start[j]
    # place items (ascending j); cell_start is consumed as a cursor,
    # then shifted back so cell_start[c] is the first item of cell c
    for j in range(K.count):
        cell = K.item_cell[j]
        K.cell_items[K.cell_start[cell]] = j
        K.cell_start[cell] += 1
    for j in range(ncells, 0, -1):
        K.cell_start[j] = K.cell_start[j - 1]
    K.cell_start[0] = 0
    K.grid_ready = 1


cdef double knn_query(Knn* K, double qa, double qb, double qc) nogil:
    """Fraction of the k nearest window samples labeled positive."""
    cdef double zq0, zq1, zq2, s, d2, dx, dy, dz, bound
    cdef int j, jj, idx, ix0, iy0, iz0, r, ix, iy, iz, cell, start, end
    cdef int ksize, size, pos, m, max_shell
    cdef double best_d2[256]
    cdef i64 best_seq[256]
    cdef char best_lab[256]
    if not K.grid_ready:
        knn_build_grid(K)
    s = K.gstd[0]
    zq0 = (qa - K.gmean[0]) / s if s > 0.0 else 0.0
    s = K.gstd[1]
    zq1 = (qb - K.gmean[1]) / s if s > 0.0 else 0.0
    s = K.gstd[2]
    zq2 = (qc - K.gmean[2]) / s if s > 0.0 else 0.0

    ksize = K.k if K.k < K.count else K.count
    size = 0

    ix0 = _cell_of(zq0, K.minx, K.wx, K.cx)
    iy0 = _cell_of(zq1, K.miny, K.wy, K.cy)
    iz0 = _cell_of(zq2, K.minz, K.wz, K.cz)

    max_shell = 0
    if ix0 > max_shell: max_shell = ix0
    if K.cx - 1 - ix0 > max_shell: max_shell = K.cx - 1 - ix0
    if iy0 > max_shell: max_shell = iy0
    if K.cy - 1 - iy0 > max_shell: max_shell = K.cy - 1 - iy0
    if iz0 > max_shell: max_shell = iz0
    if K.cz - 1 - iz0 > max_shell: max_shell = K.cz - 1 - iz0

    for r in range(max_shell + 1):
        for ix in range(ix0 - r, ix0 + r + 1):
            if ix < 0 or ix >= K.cx:
                continue
            for iy in range(iy0 - r, iy0 + r + 1):
                if iy < 0 or iy >= K.cy:
                    continue
                for iz in range(iz0 - r, iz0 + r + 1):
                    if iz < 0 or iz >= K.cz:
                        continue
                    m = ix - ix0 if ix >= ix0 else ix0 - ix
                    jj = iy - iy0 if iy >= iy0 else iy0 - iy
                    if jj > m: m = jj
                    jj = iz - iz0 if iz >= iz0 else iz0 - iz
                    if jj > m: m = jj
                    if m != r:
                        continue  # interior cells were scanned in earlier rings
                    cell = (ix * K.cy + iy) * K.cz + iz
                    start = K.cell_start[cell]
                    end = K.cell_start[cell + 1]
                    for jj in range(start, end):
                        idx = K.cell_items[jj]
                        dx = zq0 - K.zx[idx]
                        dy = zq1 - K.zy[idx]
                        dz = zq2 - K.zz[idx]
                        d2 = dx * dx + dy * dy + dz * dz
                        if size < ksize:
                            pos = size
                            while pos > 0 and (
                                d2 < best_d2[pos - 1]
                                or (d2 == best_d2[pos - 1] and K.seq[idx] < best_seq[pos - 1])
                            ):
                                best_d2[pos] = best_d2[pos - 1]
                                best_seq[pos] = best_seq[pos - 1]
                                best_lab[pos] = best_lab[pos - 1]
                                pos -= 1
                            best_d2[pos] = d2
                            best_seq[pos] = K.seq[idx]
                            best_lab[pos] = K.label[idx]
                            size += 1
                        elif (d2 < best_d2[ksize - 1]
                              or (d2 == best_d2[ksize - 1] and K.seq[idx] < best_seq[ksize - 1])):
                            pos = ksize - 1
                            while pos > 0 and (
                                d2 < best_d2[pos - 1]
                                or (d2 == best_d2[pos - 1] and K.seq[idx] < best_seq[pos - 1])
                            ):
                                best_d2[pos] = best_d2[pos - 1]
                                best_seq[pos] = best_seq[pos - 1]
                                best_lab[pos] = best_lab[pos - 1]
                                pos -= 1
                            best_d2[pos] = d2
                            best_seq[pos] = K.seq[idx]
                            best_lab[pos] = K.label[idx]
        # every cell in ring r+1 lies at least r * wmin away from the
        # query; the 1e-12 slack makes the break rounding-proof
        if size >= ksize and K.wmin > 0.0 and r >= 1:
            bound = (<double>r) * K.wmin
            if bound * bound > best_d2[ksize - 1] * (1.0 + 1e-12):
                break
        if K.wmin == 0.0 and size >= ksize:
            break  # single-cell grid: ring 0 scanned everything

    pos = 0
    for j in range(ksize):
        pos += best_lab[j]
    return <double>pos / <double>ksize


# ---------------------------------------------------------------------------
# Ranked wake-up target selection
# ---------------------------------------------------------------------------


cdef inline int _bench_less(double* est, int* ids, int a, int b) nogil:
    if est[a] < est[b]:
        return 1
    if est[a] > est[b]:
        return 0
    return 1 if ids[a] < ids[b] else 0


cdef int _select_benchmark(int* cand_id, double* cand_est, int n_cand,
                           int ksel, int* sel) nogil:
    """Top-ksel candidate indices by (est_distance, device_id) ascending."""
    cdef int size = 0, j, pos
    for j in range(n_cand):
        if size < ksel:
            pos = size
            while pos > 0 and _bench_less(cand_est, cand_id, j, sel[pos - 1]):
                sel[pos] = sel[pos - 1]
                pos -= 1
            sel[pos] = j
            size += 1
        elif _bench_less(cand_est, cand_id, j, sel[ksel - 1]):
            pos = ksel - 1
            while pos > 0 and _bench_less(cand_est, cand_id, j, sel[pos - 1]):
                sel[pos] = sel[pos - 1]
                pos -= 1
            sel[pos] = j
    return size


cdef inline int _intel_less(double* score, double* est, int* ids, int a, int b) nogil:
    if score[a] > score[b]:
        return 1
    if score[a] < score[b]:
        return 0
    if est[a] < est[b]:
        return 1
    if est[a] > est[b]:
        return 0
    return 1 if ids[a] < ids[b] else 0


cdef int _select_intelligent(int* cand_id, double* cand_est, double* cand_score,
                             int n_cand, int ksel, int* sel) nogil:
    """Top-ksel eligible candidates by (-score, est_distance, id) ascending.

    Candidates carrying the negative ineligibility marker are skipped.
    """
    cdef int size = 0, j, pos
    for j in range(n_cand):
        if cand_score[j] < 0.0:
            continue
        if size < ksel:
            pos = size
            while pos > 0 and _intel_less(cand_score, cand_est, cand_id, j, sel[pos - 1]):
                sel[pos] = sel[pos - 1]
                pos -= 1
            sel[pos] = j
            size += 1
        elif _intel_less(cand_score, cand_est, cand_id, j, sel[ksel - 1]):
            pos = ksel - 1
            while pos > 0 and _intel_less(cand_score, cand_est, cand_id, j, sel[pos - 1]):
                sel[pos] = sel[pos - 1]
                pos -= 1
            sel[pos] = j
    return size


cdef inline int _wake_slot(i64 ph, int initial, int round_slots, int n_rounds) nogil:
    cdef i64 base = ph - initial
    if base < round_slots:
        return 0
    if base % round_slots != 0:
        return 0
    return 1 if base // round_slots <= n_rounds else 0


# ---------------------------------------------------------------------------
# Replication loop
# ---------------------------------------------------------------------------


def run_replication(p, seed):
    """Run one replication of a PackedScenario; returns the tally tuple."""
    cdef int n = p.n
    cdef double width = p.width
    cdef double height = p.height
    cdef double r_max = p.r_max
    cdef int hotspot_law = 1 if p.hotspot_law else 0
    cdef int n_sites = p.n_sites
    cdef double jitter = p.jitter
    cdef int duty_active = p.duty_active
    cdef int duty_period = p.duty_period
    cdef int random_phase = 1 if p.random_phase else 0
    cdef int wur_count = p.wur_count
    cdef int capacity = p.capacity
    cdef double hp = p.harvest_prob
    cdef int cost_sense = p.cost_sense
    cdef int cost_tx = p.cost_tx
    cdef int cost_rx = p.cost_rx
    cdef int report_cost = p.report_cost
    cdef double idle_cost = p.idle_cost
    cdef int intelligent = 1 if p.intelligent else 0
    cdef int group_mode = 1 if p.group_mode else 0
    cdef int group_n = p.group_n
    cdef int k_req = p.k_req
    cdef int knn_k = p.knn_k
    cdef int knn_window = p.knn_window
    cdef double p_event = p.p_event
    cdef i64 horizon = p.horizon
    cdef i64 burn_in = p.burn_in
    cdef int deadline_slots = p.deadline_slots
    cdef int initial_report_slots = p.initial_report_slots
    cdef int round_slots = p.round_slots
    cdef int n_rounds = p.n_rounds
    cdef u64 state = <u64>seed

    if knn_k > 256:
        raise ValueError("compiled kernel supports knn_k <= 256")

    preset = p.preset_positions
    cdef int use_preset = 0 if preset is None else 1

    cdef double* xs = <double*>malloc(n * sizeof(double))
    cdef double* ys = <double*>malloc(n * sizeof(double))
    cdef int* off = <int*>malloc(n * sizeof(int))
    cdef int* battery = <int*>malloc(n * sizeof(int))
    cdef double* bs_last_known = <double*>malloc(n * sizeof(double))
    cdef i64* bs_last_known_slot = <i64*>malloc(n * sizeof(i64))
    cdef i64* bs_last_activity = <i64*>malloc(n * sizeof(i64))
    cdef i64* wake_sense_slot = <i64*>malloc(n * sizeof(i64))
    cdef i64* spont_tx_slot = <i64*>malloc(n * sizeof(i64))
    cdef char* sensed = <char*>malloc(n)
    cdef double* evt_dist = <double*>malloc(n * sizeof(double))
    cdef int* reporters = <int*>malloc(n * sizeof(int))
    cdef char* reporter_flag = <char*>malloc(n)
    cdef char* targeted_flag = <char*>malloc(n)
    cdef int* cand_id = <int*>malloc(n * sizeof(int))
    cdef double* cand_est = <double*>malloc(n * sizeof(double))
    cdef double* cand_pb = <double*>malloc(n * sizeof(double))
    cdef double* cand_ssa = <double*>malloc(n * sizeof(double))
    cdef double* cand_score = <double*>malloc(n * sizeof(double))
    cdef int* sel = <int*>malloc(n * sizeof(int))
    cdef int pend_cap = n * (n_rounds if n_rounds > 0 else 1) + 8
    cdef double* pend_f0 = <double*>malloc(pend_cap * sizeof(double))
    cdef double* pend_f1 = <double*>malloc(pend_cap * sizeof(double))
    cdef double* pend_f2 = <double*>malloc(pend_cap * sizeof(double))
    cdef int* pend_id = <int*>malloc(pend_cap * sizeof(int))
    cdef double* sites_x = <double*>malloc((n_sites + 1) * sizeof(double))
    cdef double* sites_y = <double*>malloc((n_sites + 1) * sizeof(double))

    cdef Knn K
    cdef int knn_ok = 0
    ok = (xs != NULL and ys != NULL and off != NULL and battery != NULL
          and bs_last_known != NULL and bs_last_known_slot != NULL
          and bs_last_activity != NULL and wake_sense_slot != NULL
          and spont_tx_slot != NULL and sensed != NULL and evt_dist != NULL
          and reporters != NULL and reporter_flag != NULL and targeted_flag != NULL
          and cand_id != NULL and cand_est != NULL and cand_pb != NULL
          and cand_ssa != NULL and cand_score != NULL and sel != NULL
          and pend_f0 != NULL and pend_f1 != NULL and pend_f2 != NULL
          and pend_id != NULL and sites_x != NULL and sites_y != NULL)
    if ok:
        knn_ok = knn_alloc(&K, knn_k, knn_window)

    cdef int i
    if ok and knn_ok and use_preset:
        for i in range(n):
            xs[i] = preset[i][0]
            ys[i] = preset[i][1]

    if not ok or not knn_ok:
        if knn_ok:
            knn_free(&K)
        free(xs); free(ys); free(off); free(battery)
        free(bs_last_known); free(bs_last_known_slot); free(bs_last_activity)
        free(wake_sense_slot); free(spont_tx_slot); free(sensed); free(evt_dist)
        free(reporters); free(reporter_flag); free(targeted_flag)
        free(cand_id); free(cand_est); free(cand_pb); free(cand_ssa)
        free(cand_score); free(sel)
        free(pend_f0); free(pend_f1); free(pend_f2); free(pend_id)
        free(sites_x); free(sites_y)
        raise MemoryError("kernel allocation failed")

    cdef i64 events = 0, successes = 0, reports_sum = 0
    cdef i64 depleted_device_slots = 0, device_slots = 0
    cdef i64 t, onset = 0
    cdef int j, r, site, n_rep = 0, n_cand, n_sel, n_pend = 0, rounds_done = 0
    cdef int depleted_now = 0, tid, ksel, pos, b, evt_active_flag = 0
    cdef double u, ex = 0.0, ey = 0.0, jx, jy, dxd, dyd, d, sum_x, sum_y
    cdef double est_x, est_y, pb, expected
    cdef double threshold_w = <double>(cost_rx + cost_sense + cost_tx)
    cdef double capf = <double>capacity

    with nogil:
        # --- replication setup draws (same order as the reference) ---
        if hotspot_law:
            for j in range(n_sites):
                sites_x[j] = stream_double(&state) * width
                sites_y[j] = stream_double(&state) * height
        if not use_preset:
            for i in range(n):
                xs[i] = stream_double(&state) * width
                ys[i] = stream_double(&state) * height
        for i in range(n):
            off[i] = 0
        if random_phase:
            for i in range(n):
                off[i] = <int>stream_below(&state, <u64>duty_period)

        for i in range(n):
            battery[i] = capacity
            bs_last_known[i] = capf
            bs_last_known_slot[i] = 0
            bs_last_activity[i] = 0
            wake_sense_slot[i] = -1
            spont_tx_slot[i] = -1
            reporter_flag[i] = 0
            targeted_flag[i] = 0
            if capacity < report_cost:
                depleted_now += 1

        for t in range(horizon):
            # a. harvest
            for i in range(n):
                if stream_double(&state) < hp:
                    if battery[i] < capacity:
                        b = battery[i]
                        battery[i] = b + 1
                        if b < report_cost and b + 1 >= report_cost:
                            depleted_now -= 1

            # b. scheduled duty-cycle sensing
            for i in range(n):
                sensed[i] = 0
                if (t + off[i]) % duty_period < duty_active and wake_sense_slot[i] != t:
                    if battery[i] >= cost_sense:
                        b = battery[i]
                        battery[i] = b - cost_sense
                        if b >= report_cost and b - cost_sense < report_cost:
                            depleted_now += 1
                        sensed[i] = 1

            # c. event machinery
            if not evt_active_flag:
                u = stream_double(&state)
                if u < p_event and t + deadline_slots < horizon:
                    evt_active_flag = 1
                    onset = t
                    if hotspot_law:
                        site = <int>stream_below(&state, <u64>n_sites)
                        jx = (stream_double(&state) * 2.0 - 1.0) * jitter
                        jy = (stream_double(&state) * 2.0 - 1.0) * jitter
                        ex = sites_x[site] + jx
                        if ex < 0.0: ex = 0.0
                        if ex > width: ex = width
                        ey = sites_y[site] + jy
                        if ey < 0.0: ey = 0.0
                        if ey > height: ey = height
                    else:
                        ex = stream_double(&state) * width
                        ey = stream_double(&state) * height
                    n_rep = 0
                    n_pend = 0
                    rounds_done = 0
                    for i in range(n):
                        reporter_flag[i] = 0
                        targeted_flag[i] = 0
                    for i in range(n):
                        dxd = xs[i] - ex
                        dyd = ys[i] - ey
                        d = sqrt(dxd * dxd + dyd * dyd)
                        evt_dist[i] = d
                        u = stream_double(&state)
                        if sensed[i] and d <= r_max and u < exp(-d):
                            spont_tx_slot[i] = t + initial_report_slots
            else:
                # spontaneous transmissions
                if t - onset == initial_report_slots:
                    for i in range(n):
                        if spont_tx_slot[i] == t:
                            spont_tx_slot[i] = -1
                            if battery[i] >= cost_tx:
                                b = battery[i]
                                battery[i] = b - cost_tx
                                if b >= report_cost and b - cost_tx < report_cost:
                                    depleted_now += 1
                                reporters[n_rep] = i
                                n_rep += 1
                                reporter_flag[i] = 1
                                bs_last_known[i] = <double>battery[i]
                                bs_last_known_slot[i] = t
                                bs_last_activity[i] = t

                # wake-up round decision + signal
                if rounds_done < n_rounds and n_rep > 0:
                    r = rounds_done + 1
                    if t - onset == initial_report_slots + (r - 1) * round_slots + 1:
                        if n_rep >= k_req:
                            rounds_done = n_rounds
                        else:
                            rounds_done = r
                            sum_x = 0.0
                            sum_y = 0.0
                            for j in range(n_rep):
                                sum_x += xs[reporters[j]]
                                sum_y += ys[reporters[j]]
                            est_x = sum_x / <double>n_rep
                            est_y = sum_y / <double>n_rep
                            n_cand = 0
                            for i in range(n):
                                if i >= wur_count or targeted_flag[i] or reporter_flag[i]:
                                    continue
                                if (t + off[i]) % duty_period < duty_active:
                                    continue  # not asleep
                                dxd = xs[i] - est_x
                                dyd = ys[i] - est_y
                                cand_id[n_cand] = i
                                cand_est[n_cand] = sqrt(dxd * dxd + dyd * dyd)
                                expected = (bs_last_known[i]
                                            + <double>(t - bs_last_known_slot[i]) * hp
                                            - <double>(t - bs_last_known_slot[i]) * idle_cost)
                                if expected < 0.0:
                                    pb = 0.0
                                elif expected > capf:
                                    pb = capf
                                else:
                                    pb = expected
                                cand_pb[n_cand] = pb
                                cand_ssa[n_cand] = <double>(t - bs_last_activity[i])
                                n_cand += 1
                            ksel = group_n if group_mode else 1
                            if intelligent and K.count >= knn_k:
                                for j in range(n_cand):
                                    if cand_pb[j] >= threshold_w:
                                        cand_score[j] = knn_query(
                                            &K, cand_est[j], cand_pb[j], cand_ssa[j])
                                    else:
                                        cand_score[j] = -1.0
                                n_sel = _select_intelligent(
                                    cand_id, cand_est, cand_score, n_cand, ksel, sel)
                            else:
                                n_sel = _select_benchmark(
                                    cand_id, cand_est, n_cand, ksel, sel)
                            for j in range(n_sel):
                                pos = sel[j]
                                tid = cand_id[pos]
                                pend_f0[n_pend] = cand_est[pos]
                                pend_f1[n_pend] = cand_pb[pos]
                                pend_f2[n_pend] = cand_ssa[pos]
                                pend_id[n_pend] = tid
                                n_pend += 1
                                targeted_flag[tid] = 1
                                bs_last_activity[tid] = t
                                if battery[tid] >= cost_rx:
                                    b = battery[tid]
                                    battery[tid] = b - cost_rx
                                    if b >= report_cost and b - cost_rx < report_cost:
                                        depleted_now += 1
                                    wake_sense_slot[tid] = t + 1

                # woken-device sensing and transmission
                if _wake_slot(t - onset, initial_report_slots, round_slots, n_rounds):
                    for i in range(n):
                        if wake_sense_slot[i] == t:
                            if battery[i] >= cost_sense:
                                b = battery[i]
                                battery[i] = b - cost_sense
                                if b >= report_cost and b - cost_sense < report_cost:
                                    depleted_now += 1
                                if evt_dist[i] <= r_max and battery[i] >= cost_tx:
                                    b = battery[i]
                                    battery[i] = b - cost_tx
                                    if b >= report_cost and b - cost_tx < report_cost:
                                        depleted_now += 1
                                    reporters[n_rep] = i
                                    n_rep += 1
                                    reporter_flag[i] = 1
                                    bs_last_known[i] = <double>battery[i]
                                    bs_last_known_slot[i] = t
                                    bs_last_activity[i] = t

                # event window closes
                if t - onset == deadline_slots:
                    if onset >= burn_in:
                        events += 1
                        if n_rep >= k_req:
                            successes += 1
                        reports_sum += n_rep
                    for j in range(n_pend):
                        knn_add(&K, pend_f0[j], pend_f1[j], pend_f2[j],
                                1 if reporter_flag[pend_id[j]] else 0)
                    evt_active_flag = 0

            # d. depletion accounting
            if t >= burn_in:
                device_slots += n
                depleted_device_slots += depleted_now

    knn_free(&K)
    free(xs); free(ys); free(off); free(battery)
    free(bs_last_known); free(bs_last_known_slot); free(bs_last_activity)
    free(wake_sense_slot); free(spont_tx_slot); free(sensed); free(evt_dist)
    free(reporters); free(reporter_flag); free(targeted_flag)
    free(cand_id); free(cand_est); free(cand_pb); free(cand_ssa)
    free(cand_score); free(sel)
    free(pend_f0); free(pend_f1); free(pend_f2); free(pend_id)
    free(sites_x); free(sites_y)

    return (events, successes, reports_sum, depleted_device_slots, device_slots)
