"""Exact packing evaluation for a fixed tour.

For one tour the set of achievable (reward, weight) outcomes has a complete
non-dominated staircase which a knapsack-style dynamic program recovers
exactly: items are processed in tour order, each column is derived from its
predecessor by a keep-vs-take step, and dominated cells are pruned
immediately.  Columns are sparse (only surviving cells are stored) and all
columns are retained so packing plans reconstruct by back-walking the
stored (took, prev) links.

``brute_force_front`` enumerates all packings and is the independent oracle
for the DP.
"""

from dataclasses import dataclass, field
import json

import numpy as np

from . import _kernels
from .instance_io import Instance
from .tours import tour_length

REWARD_RTOL = 1e-9       # oracle-equivalence tolerance on rewards
REWARD_EQ_ATOL = 1e-6    # cross-front point-equality tolerance
BRUTE_FORCE_MAX_ITEMS = 24


@dataclass(frozen=True)
class DpFront:
    """Complete non-dominated (reward, weight) set of one tour.

    ``rewards`` and ``weights`` are parallel arrays sorted by weight with
    strictly increasing rewards.  ``plans_packed`` holds one packing per
    point as packbits rows; ``plans`` unpacks them to boolean flags.
    """
    tour: np.ndarray
    rewards: np.ndarray
    weights: np.ndarray
    plans_packed: np.ndarray
    m: int
    capacity: int

    @property
    def points(self):
        return list(zip(self.rewards.tolist(), self.weights.tolist()))

    @property
    def plans(self) -> np.ndarray:
        if self.m == 0:
            return np.zeros((len(self.rewards), 0), bool)
        return np.unpackbits(self.plans_packed, axis=1, count=self.m).astype(bool)

    def plan_items(self, i: int) -> list:
        """1-based item indices of the packing behind point ``i``."""
        return [int(k) + 1 for k in np.flatnonzero(self.plans[i])]

    def to_json(self) -> str:
        return json.dumps({
            "tour": self.tour.tolist(),
            "points": [[r, int(w)] for r, w in zip(self.rewards, self.weights)],
            "plans": [self.plan_items(i) for i in range(len(self.rewards))],
        })


def _pack_plans(plans: np.ndarray) -> np.ndarray:
    if plans.shape[1] == 0:
        return np.zeros((plans.shape[0], 0), np.uint8)
    return np.packbits(plans.astype(np.uint8), axis=1)


def evaluate(inst: Instance, t: np.ndarray, taken: np.ndarray):
    """Reward and total weight of one packing on one tour.

    The velocity on the leg leaving a node reflects every item collected up
    to and including that node.  Packings above capacity are evaluated all
    the same; feasibility is the caller's concern.
    """
    taken = np.asarray(taken, bool)
    node_weight = np.zeros(inst.n + 1, np.int64)
    node_profit = np.zeros(inst.n + 1, np.int64)
    for k in np.flatnonzero(taken):
        node_weight[inst.items[k].node] += inst.items[k].weight
        node_profit[inst.items[k].node] += inst.items[k].profit
    dist = inst.dist_matrix
    time = 0.0
    w = 0
    for idx in range(inst.n):
        city = int(t[idx])
        w += int(node_weight[city])
        nxt = int(t[(idx + 1) % inst.n])
        if dist is not None:
            d = int(dist[city - 1, nxt - 1])
        else:
            from .instance_io import distance
            d = distance(inst, city, nxt)
        time += d / (inst.vmax - inst.nu * w)
    reward = float(node_profit.sum() - inst.rent * time)
    weight = int(taken.astype(np.int64) @ inst.item_weight) if inst.m else 0
    return reward, weight


def _item_order(inst: Instance, t: np.ndarray) -> np.ndarray:
    """Items sorted by tour position of their node, then by item index."""
    pos_of_city = np.empty(inst.n + 1, np.int64)
    pos_of_city[t] = np.arange(inst.n)
    return np.lexsort((np.arange(inst.m), pos_of_city[inst.item_node]))


def _suffix_rdist(inst: Instance, t: np.ndarray) -> np.ndarray:
    """suffix[i] = rent-weighted distance of legs leaving positions i..n-1."""
    p = t - 1
    legs = (inst.dist_matrix[p, np.roll(p, -1)]
            if inst.dist_matrix is not None else
            np.array([  # fallback for on-demand distances
                _leg(inst, t, i) for i in range(inst.n)], np.int64))
    suffix = np.concatenate((np.cumsum(legs[::-1])[::-1], [0]))
    return inst.rent * suffix.astype(np.float64)


def _leg(inst, t, i):
    from .instance_io import distance
    return distance(inst, int(t[i]), int(t[(i + 1) % inst.n]))


def _dp_columns(inst: Instance, t: np.ndarray):
    """All pruned DP columns plus the processed-item order.

    The virtual base column holds the empty packing charged with the full
    tour cost at top speed; each item column then adds only cost
    differences caused by taking that item.
    """
    order = _item_order(inst, t)
    rdist = _suffix_rdist(inst, t)
    pos_of_city = np.empty(inst.n + 1, np.int64)
    pos_of_city[t] = np.arange(inst.n)

    base_reward = -inst.rent * tour_length(inst, t) / inst.vmax
    col_w = np.zeros(1, np.int64)
    col_b = np.array([base_reward], np.float64)
    columns = []
    for k in order:
        iw = int(inst.item_weight[k])
        ip = float(inst.item_profit[k])
        rd = float(rdist[pos_of_city[inst.item_node[k]]])
        col_w, col_b, took, prev = _kernels.dp_merge(
            col_w, col_b, iw, ip, rd, inst.vmax, inst.nu, inst.capacity)
        columns.append((col_w, col_b, took, prev))
    return columns, order


def dp_front(inst: Instance, t: np.ndarray) -> DpFront:
    """Exact DP front for tour ``t`` with recoverable packing plans."""
    columns, order = _dp_columns(inst, t)
    if not columns:
        base = -inst.rent * tour_length(inst, t) / inst.vmax
        return DpFront(tour=t.copy(), rewards=np.array([base]),
                       weights=np.zeros(1, np.int64),
                       plans_packed=np.zeros((1, 0), np.uint8),
                       m=inst.m, capacity=inst.capacity)
    final_w, final_b = columns[-1][0], columns[-1][1]
    k = final_w.size
    plans = np.zeros((k, inst.m), bool)
    cur = np.arange(k)
    for j in range(len(columns) - 1, -1, -1):
        _, _, took, prev = columns[j]
        plans[:, order[j]] = took[cur].astype(bool)
        cur = prev[cur]
    return DpFront(tour=t.copy(), rewards=final_b.copy(), weights=final_w.copy(),
                   plans_packed=_pack_plans(plans), m=inst.m, capacity=inst.capacity)


def brute_force_front(inst: Instance, t: np.ndarray) -> DpFront:
    """Enumerate all packings, Pareto-filter the feasible ones.

    Independent of the DP path on purpose; rewards come from a vectorised
    direct evaluation of every packing.
    """
    if inst.m > BRUTE_FORCE_MAX_ITEMS:
        raise ValueError(f"brute force refuses m > {BRUTE_FORCE_MAX_ITEMS}")
    m = inst.m
    n_pack = 1 << m
    packs = ((np.arange(n_pack)[:, None] >> np.arange(m)[None, :]) & 1).astype(bool)
    weights = packs @ inst.item_weight if m else np.zeros(1, np.int64)
    feasible = weights <= inst.capacity
    packs, weights = packs[feasible], weights[feasible]

    pos_of_city = np.empty(inst.n + 1, np.int64)
    pos_of_city[t] = np.arange(inst.n)
    item_pos = pos_of_city[inst.item_node] if m else np.zeros(0, np.int64)
    p = t - 1
    legs = (inst.dist_matrix[p, np.roll(p, -1)]
            if inst.dist_matrix is not None else
            np.array([_leg(inst, t, i) for i in range(inst.n)], np.int64))
    # collected[i, pos] = weight on board when leaving tour position pos
    onboard = (packs[:, None, :] * (item_pos[None, None, :] <= np.arange(inst.n)[None, :, None])) \
        @ inst.item_weight if m else np.zeros((packs.shape[0], inst.n), np.int64)
    times = (legs[None, :] / (inst.vmax - inst.nu * onboard)).sum(axis=1)
    rewards = (packs @ inst.item_profit if m else np.zeros(1)) - inst.rent * times

    # Pareto filter: weight ascending, reward strictly increasing; on ties
    # the earliest-enumerated packing wins
    order = np.lexsort((np.arange(rewards.size), -rewards, weights))
    keep = []
    best = -np.inf
    for idx in order:
        if rewards[idx] > best:
            keep.append(idx)
            best = rewards[idx]
    keep = np.array(keep)
    return DpFront(tour=t.copy(), rewards=rewards[keep], weights=weights[keep],
                   plans_packed=_pack_plans(packs[keep]), m=m, capacity=inst.capacity)


def best_reward(f: DpFront) -> float:
    """Single-objective value of the tour: the maximal front reward."""
    return float(f.rewards.max())


def merge_fronts(a: DpFront, b: DpFront) -> DpFront:
    """Pareto merge of two fronts of the same instance (keeps ``a``'s tour)."""
    rewards = np.concatenate((a.rewards, b.rewards))
    weights = np.concatenate((a.weights, b.weights))
    plans = np.concatenate((a.plans, b.plans)) if a.m else np.zeros((rewards.size, 0), bool)
    order = np.lexsort((np.arange(rewards.size), -rewards, weights))
    keep = []
    best = -np.inf
    for idx in order:
        if rewards[idx] > best:
            keep.append(idx)
            best = rewards[idx]
    keep = np.array(keep)
    return DpFront(tour=a.tour.copy(), rewards=rewards[keep], weights=weights[keep],
                   plans_packed=_pack_plans(plans[keep]), m=a.m, capacity=a.capacity)
