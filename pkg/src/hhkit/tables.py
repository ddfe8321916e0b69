"""Register-array tables, the delayed-write queue, and the kernel-backed
algorithm base class shared by the pipeline-table implementations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend as _backend
from .base import Algorithm, ArrivalOutcome
from .core import EMPTY_KEY, HashFamily, splitmix_at


class WayTable:
    """d parallel (key, counter) arrays of equal width.

    Keys initialize to the empty sentinel, counters to `initial_value`, so an
    unclaimed slot never matches a trace key yet still contributes its
    preloaded counter to minimum computations.
    """

    def __init__(self, d: int, entries_per_way: int, initial_value: int = 0):
        if d < 1 or entries_per_way < 1:
            raise ValueError("table needs d >= 1 and entries_per_way >= 1")
        if initial_value < 0:
            raise ValueError("initial_value must be >= 0")
        self.d = d
        self.entries_per_way = entries_per_way
        self.initial_value = initial_value
        self.keys = np.full((d, entries_per_way), EMPTY_KEY, dtype=np.uint64)
        self.vals = np.full((d, entries_per_way), initial_value, dtype=np.int64)

    @property
    def counters(self) -> int:
        return self.d * self.entries_per_way

    def occupied(self):
        """Yield (flow, count) for every slot holding a real key."""
        keys = self.keys
        vals = self.vals
        for w in range(self.d):
            krow = keys[w]
            vrow = vals[w]
            for s in np.nonzero(krow != EMPTY_KEY)[0]:
                yield int(krow[s]), int(vrow[s])

    def merged_counts(self, merge: str = "max") -> dict[int, int]:
        """Collapse duplicate keys across ways by max (stale copies) or sum
        (partial counts)."""
        out: dict[int, int] = {}
        if merge == "max":
            for f, v in self.occupied():
                if v > out.get(f, -1):
                    out[f] = v
        elif merge == "sum":
            for f, v in self.occupied():
                out[f] = out.get(f, 0) + v
        else:
            raise ValueError(f"unknown merge rule {merge!r}")
        return out

    def top(self, k: int, merge: str = "max") -> list[tuple[int, int]]:
        if k <= 0:
            raise ValueError("k must be >= 1")
        merged = self.merged_counts(merge)
        ranked = sorted(merged.items(), key=lambda fc: (-fc[1], fc[0]))
        return ranked[:k]


@dataclass(frozen=True)
class PendingWrite:
    """A decided table write travelling back through the pipeline; applied
    verbatim at (way, slot) once `apply_at_seq` packets have gone by."""

    apply_at_seq: int
    way: int
    slot: int
    key: int
    value: int


class PendingRing:
    """FIFO of in-flight writes; capacity bounds concurrent recirculations
    (at most delay + 1 can be outstanding)."""

    def __init__(self, delay: int):
        if delay < 0:
            raise ValueError("delay must be >= 0")
        cap = delay + 2
        self.apply_at = np.zeros(cap, dtype=np.int64)
        self.way = np.zeros(cap, dtype=np.int64)
        self.slot = np.zeros(cap, dtype=np.int64)
        self.key = np.zeros(cap, dtype=np.uint64)
        self.val = np.zeros(cap, dtype=np.int64)
        self.meta = np.zeros(2, dtype=np.int64)  # head, tail (absolute)

    def __len__(self) -> int:
        return int(self.meta[1] - self.meta[0])

    def entries(self) -> list[PendingWrite]:
        cap = len(self.apply_at)
        out = []
        for h in range(int(self.meta[0]), int(self.meta[1])):
            j = h % cap
            out.append(PendingWrite(int(self.apply_at[j]), int(self.way[j]),
                                    int(self.slot[j]), int(self.key[j]),
                                    int(self.val[j])))
        return out

    def apply_due(self, table: WayTable, up_to_seq: int) -> int:
        """Pop and apply every write with apply_at_seq <= up_to_seq."""
        cap = len(self.apply_at)
        head = int(self.meta[0])
        tail = int(self.meta[1])
        applied = 0
        while head < tail:
            j = head % cap
            if int(self.apply_at[j]) > up_to_seq:
                break
            table.keys[int(self.way[j]), int(self.slot[j])] = self.key[j]
            table.vals[int(self.way[j]), int(self.slot[j])] = self.val[j]
            head += 1
            applied += 1
        self.meta[0] = head
        return applied

    def drain(self, table: WayTable) -> int:
        """Apply everything still in flight, regardless of due time."""
        return self.apply_due(table, np.iinfo(np.int64).max)


class KernelTableAlgorithm(Algorithm):
    """Shared state and query conventions for the d-way table algorithms."""

    _merge = "max"

    def __init__(self, d: int, entries_per_way: int, seed: int = 0,
                 initial_value: int = 0, backend: str | None = None):
        self.table = WayTable(d, entries_per_way, initial_value)
        self.hashes = HashFamily.from_seed(splitmix_at(seed, 0), d, entries_per_way)
        self._seeds = np.array(self.hashes.seeds, dtype=np.uint64)
        self._rng_state = np.array([splitmix_at(seed, 1)], dtype=np.uint64)
        self._stats = np.zeros(3, dtype=np.int64)  # packets, matched, recirculations
        self._kern = _backend.get(backend)
        self.seed = seed

    @property
    def d(self) -> int:
        return self.table.d

    @property
    def entries_per_way(self) -> int:
        return self.table.entries_per_way

    @property
    def packets(self) -> int:
        return int(self._stats[0])

    @property
    def matched_count(self) -> int:
        return int(self._stats[1])

    @property
    def recirculations(self) -> int:
        return int(self._stats[2])

    def memory_counters(self) -> int:
        return self.table.counters

    def process(self, packet) -> ArrivalOutcome:
        flow = self._flow_of(packet)
        est = np.empty(1, dtype=np.int64)
        flags = np.empty(1, dtype=np.uint8)
        carry = np.empty(1, dtype=np.int64)
        self.run_into(np.array([flow], dtype=np.int64), est, flags, carry)
        cm = int(carry[0])
        return ArrivalOutcome(matched=bool(flags[0] & 1), estimate=int(est[0]),
                              recirculated=bool(flags[0] & 2),
                              carry_min=None if cm < 0 else cm)

    def _sampled(self, flow: int) -> list[tuple[int, int, int]]:
        """(way, key, val) at this flow's slot in each way."""
        out = []
        for w in range(self.d):
            s = self.hashes.way_index(w, flow)
            out.append((w, int(self.table.keys[w, s]), int(self.table.vals[w, s])))
        return out

    def estimate(self, flow: int) -> int:
        sampled = self._sampled(flow)
        matches = [v for _, k, v in sampled if k == flow]
        if matches:
            return max(matches)
        return min(v for _, _, v in sampled)

    def top(self, k: int) -> list[tuple[int, int]]:
        return self.table.top(k, merge=self._merge)


class RecirculatingTableAlgorithm(KernelTableAlgorithm):
    """Adds the delayed-write queue and the admission-mode plumbing used by
    every recirculating variant."""

    def __init__(self, d: int, entries_per_way: int, seed: int = 0,
                 initial_value: int = 0, delay: int = 0, mode: int = 0,
                 lookup_bits: int = 16, backend: str | None = None):
        super().__init__(d, entries_per_way, seed, initial_value, backend)
        if not 4 <= lookup_bits <= 48:
            raise ValueError("lookup_bits must be in [4, 48]")
        self.delay = delay
        self.mode = mode
        self.lookup_bits = lookup_bits
        self.pending = PendingRing(delay)

    def run_into(self, flows, est, flags, carry) -> None:
        p = self.pending
        self._kern.run_recirc(self.table.keys, self.table.vals, self._seeds,
                              self._rng_state, self._stats,
                              p.apply_at, p.way, p.slot, p.key, p.val, p.meta,
                              self.mode, self.delay, self.lookup_bits,
                              flows, est, flags, carry)

    def pending_writes(self) -> list[PendingWrite]:
        return self.pending.entries()

    def apply_pending(self, up_to_seq: int) -> int:
        """Deliver queued writes due by `up_to_seq`; returns count applied."""
        return self.pending.apply_due(self.table, up_to_seq)

    def sync(self, up_to_seq: int) -> int:
        return self.apply_pending(up_to_seq)

    def finalize(self) -> int:
        return self.pending.drain(self.table)
