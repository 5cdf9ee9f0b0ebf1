"""Find k items whose pairwise keys all coincide.

Both the sunflower search (key = intersection) and the LCM-tuple search
(key = lcm) reduce to the same problem: bucket all pairs by key, then look for
a k-clique inside one bucket. Pair keys are computed in bulk with numpy, a
k-core peel discards vertices of degree < k-1 per bucket, and only the
surviving buckets go to a Python clique search.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from .config import LIMITS
from .errors import ResourceLimitError

PairKeys = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _dense_ids(keys: np.ndarray) -> np.ndarray:
    if keys.dtype == object:
        table: dict = {}
        return np.fromiter((table.setdefault(k, len(table)) for k in keys), dtype=np.int64, count=len(keys))
    return np.unique(keys, return_inverse=True)[1].astype(np.int64).ravel()


def _peel(gid: np.ndarray, iu: np.ndarray, ju: np.ndarray, n: int, need: int) -> np.ndarray:
    """Mask of pairs surviving iterated removal of low-degree (bucket, vertex) nodes."""
    alive = np.ones(len(gid), dtype=bool)
    while True:
        g, a, b = gid[alive], iu[alive], ju[alive]
        nodes = np.concatenate([g * n + a, g * n + b])
        uniq, counts = np.unique(nodes, return_counts=True)
        weak = uniq[counts < need]
        if weak.size == 0:
            return alive
        drop = np.isin(g * n + a, weak) | np.isin(g * n + b, weak)
        if not drop.any():
            return alive
        idx = np.nonzero(alive)[0]
        alive[idx[drop]] = False
        if not alive.any():
            return alive


def lex_min_clique(adj: dict[int, set[int]], k: int) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest k-clique of a small graph, or None."""
    verts = sorted(v for v, nb in adj.items() if len(nb) >= k - 1)

    def extend(chosen: list[int], cands: list[int]) -> Optional[tuple[int, ...]]:
        if len(chosen) == k:
            return tuple(chosen)
        for pos, v in enumerate(cands):
            if len(chosen) + len(cands) - pos < k:
                return None
            nb = adj[v]
            found = extend(chosen + [v], [u for u in cands[pos + 1 :] if u in nb])
            if found is not None:
                return found
        return None

    return extend([], verts)


def keyed_clique(n: int, k: int, pair_keys: PairKeys) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest index k-tuple i_1 < ... < i_k with one common pair key.

    ``pair_keys(iu, ju)`` must return the key of each pair (iu[t], ju[t]) as a
    numpy array (object dtype allowed for unbounded integers).
    """
    if k < 2 or n < k:
        return None
    if n * (n - 1) // 2 > LIMITS.pair_cap:
        raise ResourceLimitError(f"{n} items need more than {LIMITS.pair_cap} pair keys")
    iu, ju = np.triu_indices(n, 1)
    iu = iu.astype(np.int64)
    ju = ju.astype(np.int64)
    gid = _dense_ids(np.asarray(pair_keys(iu, ju)))
    if k > 2:
        alive = _peel(gid, iu, ju, n, k - 1)
        gid, iu, ju = gid[alive], iu[alive], ju[alive]
    if gid.size == 0:
        return None
    order = np.lexsort((ju, iu, gid))
    gid, iu, ju = gid[order], iu[order], ju[order]
    cuts = np.nonzero(np.diff(gid))[0] + 1
    best: Optional[tuple[int, ...]] = None
    for start, stop in zip(np.concatenate([[0], cuts]), np.concatenate([cuts, [len(gid)]])):
        if best is not None and iu[start] > best[0]:
            continue
        adj: dict[int, set[int]] = {}
        for a, b in zip(iu[start:stop].tolist(), ju[start:stop].tolist()):
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        found = lex_min_clique(adj, k)
        if found is not None and (best is None or found < best):
            best = found
    return best


def mask_keys(masks: Sequence[int], op: str) -> PairKeys:
    """Pair-key function for bitmasks: op is "and" or "or"."""
    if masks and max(masks).bit_length() <= 64:
        arr = np.array(masks, dtype=np.uint64)
    else:
        arr = np.array(masks, dtype=object)
    ufunc = np.bitwise_and if op == "and" else np.bitwise_or

    def keys(iu: np.ndarray, ju: np.ndarray) -> np.ndarray:
        return ufunc(arr[iu], arr[ju])

    return keys
