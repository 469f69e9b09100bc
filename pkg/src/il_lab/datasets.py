"""Expert-demonstration datasets: seeded sampling, empirical occupancies,
deterministic splitting, missing-mass accounting, and JSONL serialization.
Datasets record state-action pairs only; rewards are never observed."""

import json
from dataclasses import dataclass

import numpy as np

from .mdp import OccupancyMeasures, Trajectory, exact_occupancy, rollout_batch
from .rng import mix64_array


@dataclass(frozen=True, eq=False)
class Dataset:
    """states/actions (n,H) integer arrays; provenance is an opaque
    (instance_id, policy_id, base_seed) triple carried through splits."""

    states: np.ndarray
    actions: np.ndarray
    provenance: tuple = ("", "", 0)

    def __post_init__(self):
        s = np.array(self.states, dtype=np.int64)
        a = np.array(self.actions, dtype=np.int64)
        if s.ndim != 2 or s.shape != a.shape:
            raise ValueError("states/actions must be matching (n,H) arrays")
        if s.size and (s.min() < 0 or a.min() < 0):
            raise ValueError("negative indices")
        for name, arr in (("states", s), ("actions", a)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @property
    def n(self):
        return self.states.shape[0]

    @property
    def horizon(self):
        return self.states.shape[1]

    def __len__(self):
        return self.n

    def trajectory(self, i):
        return Trajectory(self.states[i], self.actions[i])

    def subset(self, idx):
        return Dataset(self.states[idx], self.actions[idx], self.provenance)


@dataclass(frozen=True)
class SplitConfig:
    """frac1 in (0,1); |D1| = round-half-up(frac1 * n)."""

    frac1: float = 0.5
    split_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.frac1 < 1.0:
            raise ValueError("frac1 must lie strictly in (0,1)")


def sample_dataset(mdp, policy, n, seed, instance_id="", policy_id=""):
    """n rollouts with per-trajectory seeds hash(seed, i); deterministic."""
    if n < 1:
        raise ValueError("n must be positive")
    states, actions = rollout_batch(mdp, policy, n, seed)
    return Dataset(states, actions, (instance_id, policy_id, seed))


def empirical_occupancy(dataset, S, A):
    """d_t(s,a) = count(s,a at step t) / n; layers sum to 1 exactly."""
    if dataset.n == 0:
        raise ValueError("empty dataset")
    if dataset.states.max() >= S or dataset.actions.max() >= A:
        raise ValueError("dataset indices exceed (S,A)")
    H = dataset.horizon
    t_idx = np.broadcast_to(np.arange(H), dataset.states.shape)
    flat = (t_idx * S + dataset.states) * A + dataset.actions
    counts = np.bincount(flat.ravel(), minlength=H * S * A).astype(np.float64)
    return OccupancyMeasures(counts.reshape(H, S, A) / dataset.n, "empirical")


def split(dataset, cfg):
    """Disjoint (D1, D2) by a seeded permutation of trajectory indices."""
    n = dataset.n
    n1 = int(cfg.frac1 * n + 0.5)
    if n1 < 1 or n - n1 < 1:
        raise ValueError(f"split of n={n} at frac1={cfg.frac1} degenerates")
    keys = mix64_array(cfg.split_seed, np.arange(n, dtype=np.uint64))
    order = np.argsort(keys, kind="stable")
    return (dataset.subset(np.sort(order[:n1])),
            dataset.subset(np.sort(order[n1:])))


def visited_table(dataset, S):
    """(H,S) boolean: state s seen at step t in the dataset."""
    H = dataset.horizon
    vis = np.zeros((H, S), dtype=bool)
    for t in range(H):
        vis[t, np.unique(dataset.states[:, t])] = True
    return vis


def missing_mass(d1, mdp, expert):
    """Per-step expert-measure of states unvisited in d1: exact occupancies,
    not an estimate. Length-H array, entries in [0,1]."""
    mu = exact_occupancy(mdp, expert).d.sum(axis=2)
    vis = visited_table(d1, mdp.num_states)
    return np.where(vis, 0.0, mu).sum(axis=1)


# ---------------------------------------------------------------- JSONL io

def save_dataset(dataset, path):
    with open(path, "w") as fh:
        header = {"n": dataset.n, "H": dataset.horizon,
                  "provenance": list(dataset.provenance)}
        fh.write(json.dumps(header) + "\n")
        for i in range(dataset.n):
            pairs = np.stack([dataset.states[i], dataset.actions[i]], axis=1)
            fh.write(json.dumps(pairs.tolist()) + "\n")


def load_dataset(path):
    with open(path) as fh:
        header = json.loads(fh.readline())
        rows = [json.loads(line) for line in fh if line.strip()]
    if len(rows) != header["n"]:
        raise ValueError("trajectory count disagrees with header")
    if not rows:
        z = np.zeros((0, header["H"]), dtype=np.int64)
        return Dataset(z, z, tuple(header["provenance"]))
    arr = np.array(rows, dtype=np.int64)
    if arr.size and arr.shape[1] != header["H"]:
        raise ValueError("trajectory length disagrees with header")
    return Dataset(arr[:, :, 0], arr[:, :, 1], tuple(header["provenance"]))
