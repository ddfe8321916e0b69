"""Pure-Python packet-processing kernels.

These are the reference semantics for the hot loops; `_kernels_c` is a
line-for-line Cython port.  Both consume the splitmix64 stream in the same
order and therefore produce bit-identical tables, outcomes, and statistics.

State is passed as numpy arrays (shared with the compiled backend); the
loops themselves run on plain Python ints and write back once per call.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"

MASK64 = (1 << 64) - 1
EMPTY_KEY = MASK64
GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

MODE_EXACT = 0
MODE_POW2 = 1
MODE_NINE_EIGHTHS = 2
MODE_ALWAYS = 3


def _mix(x):
    x ^= x >> 30
    x = (x * _MIX_A) & MASK64
    x ^= x >> 27
    x = (x * _MIX_B) & MASK64
    return x ^ (x >> 31)


def run_recirc(keys, vals, seeds, rng_state, stats,
               ring_apply, ring_way, ring_slot, ring_key, ring_val, ring_meta,
               mode, delay, lookup_bits, flows, est, flags, carry):
    """Recirculating d-way table update (delayed writes), one call per chunk.

    Covers the exact / power-of-two / nine-eighths admission modes plus the
    always-recirculate variant used by the recirculate-every-miss baseline.
    """
    d, width = keys.shape
    K = [[int(x) for x in row] for row in keys]
    V = [[int(x) for x in row] for row in vals]
    S = [int(x) for x in seeds]
    state = int(rng_state[0])
    head = int(ring_meta[0])
    tail = int(ring_meta[1])
    cap = ring_apply.shape[0]
    ra = [int(x) for x in ring_apply]
    rw = [int(x) for x in ring_way]
    rs = [int(x) for x in ring_slot]
    rk = [int(x) for x in ring_key]
    rv = [int(x) for x in ring_val]
    t = int(stats[0])
    n_matched = 0
    n_recirc = 0
    nb = lookup_bits

    for i in range(len(flows)):
        while head < tail:
            j = head % cap
            if ra[j] > t:
                break
            K[rw[j]][rs[j]] = rk[j]
            V[rw[j]][rs[j]] = rv[j]
            head += 1
        f = int(flows[i])
        matched = False
        best = -1
        cmin = -1
        cw = 0
        cs = 0
        for w in range(d):
            x = f ^ S[w]
            x ^= x >> 30
            x = (x * _MIX_A) & MASK64
            x ^= x >> 27
            x = (x * _MIX_B) & MASK64
            x ^= x >> 31
            s = x % width
            if K[w][s] == f:
                v = V[w][s] + 1
                V[w][s] = v
                matched = True
                if v > best:
                    best = v
            else:
                v = V[w][s]
                if cmin < 0 or v < cmin:
                    cmin = v
                    cw = w
                    cs = s
        if matched:
            n_matched += 1
            est[i] = best
            flags[i] = 1
            carry[i] = -1
        else:
            est[i] = cmin
            carry[i] = cmin
            ok = False
            if mode == MODE_ALWAYS:
                ok = True
                new_val = cmin + 1
            elif mode == MODE_EXACT:
                m = cmin + 1
                if m == 1:
                    ok = True
                else:
                    thr = MASK64 // m
                    if MASK64 % m == m - 1:
                        thr += 1
                    state = (state + GOLDEN) & MASK64
                    ok = _mix(state) < thr
                new_val = m
            elif mode == MODE_POW2:
                xb = 0 if cmin <= 1 else (cmin - 1).bit_length()
                if xb == 0:
                    ok = True
                else:
                    state = (state + GOLDEN) & MASK64
                    ok = (_mix(state) >> (64 - xb)) == 0
                new_val = 1 << xb
            else:  # MODE_NINE_EIGHTHS
                m = cmin + 1
                if m == 1:
                    ok = True
                else:
                    shift = m.bit_length() - 4
                    if shift > 0:
                        thr = (1 << nb) // (m >> shift)
                        state = (state + GOLDEN) & MASK64
                        zeros = _mix(state) >> (64 - shift)
                        state = (state + GOLDEN) & MASK64
                        r = _mix(state) >> (64 - nb)
                        ok = zeros == 0 and r < thr
                    else:
                        thr = (1 << nb) // m
                        state = (state + GOLDEN) & MASK64
                        r = _mix(state) >> (64 - nb)
                        ok = r < thr
                new_val = m
            if ok:
                j = tail % cap
                ra[j] = t + delay
                rw[j] = cw
                rs[j] = cs
                rk[j] = f
                rv[j] = new_val
                tail += 1
                n_recirc += 1
                flags[i] = 2
            else:
                flags[i] = 0
        t += 1

    keys[:, :] = np.array(K, dtype=np.uint64)
    vals[:, :] = np.array(V, dtype=np.int64)
    rng_state[0] = state
    ring_apply[:] = np.array(ra, dtype=np.int64)
    ring_way[:] = np.array(rw, dtype=np.int64)
    ring_slot[:] = np.array(rs, dtype=np.int64)
    ring_key[:] = np.array(rk, dtype=np.uint64)
    ring_val[:] = np.array(rv, dtype=np.int64)
    ring_meta[0] = head
    ring_meta[1] = tail
    stats[0] = t
    stats[1] += n_matched
    stats[2] += n_recirc


def run_rap_dway(keys, vals, seeds, rng_state, stats, flows, est, flags, carry):
    """d-way randomized admission: replace the sampled minimum with
    probability 1/(min+1), writing immediately (no recirculation)."""
    d, width = keys.shape
    K = [[int(x) for x in row] for row in keys]
    V = [[int(x) for x in row] for row in vals]
    S = [int(x) for x in seeds]
    state = int(rng_state[0])
    t = int(stats[0])
    n_matched = 0

    for i in range(len(flows)):
        f = int(flows[i])
        matched = False
        best = -1
        cmin = -1
        cw = 0
        cs = 0
        for w in range(d):
            x = f ^ S[w]
            x ^= x >> 30
            x = (x * _MIX_A) & MASK64
            x ^= x >> 27
            x = (x * _MIX_B) & MASK64
            x ^= x >> 31
            s = x % width
            if K[w][s] == f:
                v = V[w][s] + 1
                V[w][s] = v
                matched = True
                if v > best:
                    best = v
            else:
                v = V[w][s]
                if cmin < 0 or v < cmin:
                    cmin = v
                    cw = w
                    cs = s
        if matched:
            n_matched += 1
            est[i] = best
            flags[i] = 1
            carry[i] = -1
        else:
            m = cmin + 1
            if m == 1:
                ok = True
            else:
                thr = MASK64 // m
                if MASK64 % m == m - 1:
                    thr += 1
                state = (state + GOLDEN) & MASK64
                ok = _mix(state) < thr
            if ok:
                K[cw][cs] = f
                V[cw][cs] = m
                est[i] = m
            else:
                est[i] = cmin
            flags[i] = 0
            carry[i] = cmin
        t += 1

    keys[:, :] = np.array(K, dtype=np.uint64)
    vals[:, :] = np.array(V, dtype=np.int64)
    rng_state[0] = state
    stats[0] = t
    stats[1] += n_matched


def run_hashpipe(keys, vals, seeds, stats, flows, est, flags, carry):
    """Always-insert pipeline table with a rolling-minimum carry and no
    recirculation; the loser at the last stage is discarded."""
    d, width = keys.shape
    K = [[int(x) for x in row] for row in keys]
    V = [[int(x) for x in row] for row in vals]
    S = [int(x) for x in seeds]
    t = int(stats[0])
    n_matched = 0

    for i in range(len(flows)):
        f = int(flows[i])
        x = f ^ S[0]
        x ^= x >> 30
        x = (x * _MIX_A) & MASK64
        x ^= x >> 27
        x = (x * _MIX_B) & MASK64
        x ^= x >> 31
        s = x % width
        matched = False
        if K[0][s] == f:
            V[0][s] += 1
            matched = True
            n_matched += 1
        elif K[0][s] == EMPTY_KEY:
            K[0][s] = f
            V[0][s] = 1
        else:
            ck = K[0][s]
            cv = V[0][s]
            K[0][s] = f
            V[0][s] = 1
            for w in range(1, d):
                x = ck ^ S[w]
                x ^= x >> 30
                x = (x * _MIX_A) & MASK64
                x ^= x >> 27
                x = (x * _MIX_B) & MASK64
                x ^= x >> 31
                s = x % width
                if K[w][s] == ck:
                    V[w][s] += cv
                    break
                if K[w][s] == EMPTY_KEY:
                    K[w][s] = ck
                    V[w][s] = cv
                    break
                if V[w][s] < cv:
                    K[w][s], ck = ck, K[w][s]
                    V[w][s], cv = cv, V[w][s]
        total = 0
        for w in range(d):
            x = f ^ S[w]
            x ^= x >> 30
            x = (x * _MIX_A) & MASK64
            x ^= x >> 27
            x = (x * _MIX_B) & MASK64
            x ^= x >> 31
            s = x % width
            if K[w][s] == f:
                total += V[w][s]
        est[i] = total
        flags[i] = 1 if matched else 0
        carry[i] = -1
        t += 1

    keys[:, :] = np.array(K, dtype=np.uint64)
    vals[:, :] = np.array(V, dtype=np.int64)
    stats[0] = t
    stats[1] += n_matched
