"""Front algebra: Pareto filtering, the surface of a front collection,
hypervolume, and the two front-level loss indicators.

The hypervolume is the standard dominated-region area w.r.t. the reference
point (0, C): only points with positive reward and weight below capacity
count, and each contributes a rectangle spanning to the next heavier
qualifying point (capacity closes the last strip).
"""

from dataclasses import dataclass

import numpy as np

from .pwt_dp import DpFront, REWARD_EQ_ATOL

LSC = "lsc"
LHV = "lhv"
INDICATOR_KINDS = (LSC, LHV)


def pareto_filter(pts):
    """Maximal mutually non-dominated subset, weight ascending.

    Accepts a sequence of (reward, weight) pairs; duplicates collapse.
    """
    pts = list(pts)
    if not pts:
        return []
    rewards = np.array([p[0] for p in pts], np.float64)
    weights = np.array([p[1] for p in pts])
    order = np.lexsort((np.arange(len(pts)), -rewards, weights))
    out = []
    best = -np.inf
    for idx in order:
        if rewards[idx] > best:
            out.append((float(rewards[idx]), weights[idx].item()))
            best = rewards[idx]
    return out


@dataclass(frozen=True)
class Surface:
    """Pareto front of the union of member fronts, with contributor sets.

    ``membership[f, p]`` says front ``f`` holds a point equal to surface
    point ``p`` (weight exact, reward within the cross-front tolerance).
    """
    rewards: np.ndarray
    weights: np.ndarray
    membership: np.ndarray  # (n_fronts, n_points) bool
    fronts: tuple
    capacity: int

    @property
    def points(self):
        return list(zip(self.rewards.tolist(), self.weights.tolist()))

    def contributors(self, p: int) -> set:
        return set(np.flatnonzero(self.membership[:, p]).tolist())

    def to_csv(self) -> str:
        lines = ["reward,weight,contributor_count"]
        counts = self.membership.sum(axis=0)
        for r, w, c in zip(self.rewards, self.weights, counts):
            lines.append(f"{r:.9g},{int(w)},{int(c)}")
        return "\n".join(lines) + "\n"


def surface(fronts) -> Surface:
    """Surface of the union of the given DP fronts."""
    fronts = tuple(fronts)
    if not fronts:
        raise ValueError("surface needs at least one front")
    capacity = fronts[0].capacity
    rewards = np.concatenate([f.rewards for f in fronts])
    weights = np.concatenate([f.weights for f in fronts]).astype(np.int64)
    order = np.lexsort((np.arange(rewards.size), -rewards, weights))
    keep_r, keep_w = [], []
    best = -np.inf
    for idx in order:
        if rewards[idx] > best:
            keep_r.append(rewards[idx])
            keep_w.append(weights[idx])
            best = rewards[idx]
    surf_r = np.array(keep_r)
    surf_w = np.array(keep_w, np.int64)

    membership = np.zeros((len(fronts), surf_r.size), bool)
    for fi, f in enumerate(fronts):
        at = np.searchsorted(f.weights, surf_w)
        ok = at < f.weights.size
        ok[ok] &= f.weights[at[ok]] == surf_w[ok]
        ok[ok] &= np.abs(f.rewards[at[ok]] - surf_r[ok]) <= REWARD_EQ_ATOL
        membership[fi] = ok
    return Surface(rewards=surf_r, weights=surf_w, membership=membership,
                   fronts=fronts, capacity=capacity)


def hypervolume(pts, capacity) -> float:
    """Dominated area of a non-dominated point set w.r.t. reference (0, C)."""
    if isinstance(pts, Surface):
        rewards, weights = pts.rewards, pts.weights
    else:
        pts = list(pts)
        rewards = np.array([p[0] for p in pts], np.float64)
        weights = np.array([p[1] for p in pts], np.float64)
    return _hv(rewards, weights, capacity)


def _hv(rewards, weights, capacity) -> float:
    qual = (rewards > 0) & (weights < capacity)
    if not qual.any():
        return 0.0
    r = rewards[qual]
    w = weights[qual].astype(np.float64)
    order = np.argsort(w)
    r, w = r[order], w[order]
    nxt = np.concatenate((w[1:], [float(capacity)]))
    return float((r * (nxt - w)).sum())


def _front_index(s: Surface, f) -> int:
    if isinstance(f, (int, np.integer)):
        return int(f)
    for i, g in enumerate(s.fronts):
        if g is f:
            return i
    for i, g in enumerate(s.fronts):
        if isinstance(g, DpFront) and np.array_equal(g.weights, f.weights) \
                and np.allclose(g.rewards, f.rewards, atol=REWARD_EQ_ATOL):
            return i
    raise ValueError("front is not a member of this surface")


def indicator(s: Surface, f, kind: str) -> float:
    """Loss indicator of member front ``f`` w.r.t. surface ``s``.

    LSC is the share of surface points the front contributes.  LHV is the
    hypervolume share lost when the points contributed exclusively by the
    front are removed; shared points survive the removal.  A zero-volume
    surface falls back to LSC so the result stays in [0, 1].
    """
    if kind not in INDICATOR_KINDS:
        raise ValueError(f"unknown indicator kind: {kind}")
    fi = _front_index(s, f)
    member = s.membership[fi]
    if kind == LSC:
        return float(member.sum() / s.rewards.size)
    total = _hv(s.rewards, s.weights, s.capacity)
    if total == 0.0:
        return float(member.sum() / s.rewards.size)
    exclusive = member & (s.membership.sum(axis=0) == 1)
    rest = ~exclusive
    return float(1.0 - _hv(s.rewards[rest], s.weights[rest], s.capacity) / total)


def all_indicators(s: Surface, kind: str) -> np.ndarray:
    """Indicator values for every member front in one pass."""
    if kind not in INDICATOR_KINDS:
        raise ValueError(f"unknown indicator kind: {kind}")
    counts = s.membership.sum(axis=0)
    if kind == LSC:
        return s.membership.sum(axis=1) / s.rewards.size
    total = _hv(s.rewards, s.weights, s.capacity)
    if total == 0.0:
        return s.membership.sum(axis=1) / s.rewards.size
    out = np.empty(len(s.fronts))
    sole = counts == 1
    for fi in range(len(s.fronts)):
        rest = ~(s.membership[fi] & sole)
        out[fi] = 1.0 - _hv(s.rewards[rest], s.weights[rest], s.capacity) / total
    return out
