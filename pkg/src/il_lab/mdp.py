"""Finite-horizon tabular MDPs with exact occupancy/value computation and
seeded rollouts. Conventions: steps are 0-based t in [0, H); transitions[t]
maps step t to t+1 and exists only for t < H-1; probability rows live on the
last axis, must sum to 1 within 1e-9 (then get renormalized exactly), and
zero rows are rejected -- absorbing states need explicit self-loops."""

import json
from dataclasses import dataclass

import numpy as np

from .rng import (categorical, categorical_rows, last_positive, mix64,
                  mix64_array)

ROW_TOL = 1e-9
VALUE_XCHECK_TOL = 1e-10


def _prob_rows(x, name):
    """Validate rows along the last axis: finite, nonnegative, sum in
    1 +- ROW_TOL. Returns a renormalized, owned float64 copy."""
    x = np.array(x, dtype=np.float64)
    if x.size == 0:
        return x
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name}: non-finite entries")
    if (x < 0).any():
        raise ValueError(f"{name}: negative entries")
    s = x.sum(axis=-1)
    if np.abs(s - 1.0).max() > ROW_TOL:
        raise ValueError(f"{name}: row sums deviate from 1 by more than {ROW_TOL}")
    return x / s[..., None]


@dataclass(frozen=True, eq=False)
class TabularMdp:
    """rho (S,), transitions (H-1,S,A,S), rewards (H,S,A) with r in [0,1]."""

    horizon: int
    num_states: int
    num_actions: int
    rho: np.ndarray
    transitions: np.ndarray
    rewards: np.ndarray

    def __post_init__(self):
        H, S, A = self.horizon, self.num_states, self.num_actions
        if H < 1 or S < 1 or A < 1:
            raise ValueError("horizon, num_states, num_actions must be positive")
        rho = _prob_rows(self.rho, "rho")
        if rho.shape != (S,):
            raise ValueError("rho shape mismatch")
        P = _prob_rows(self.transitions, "transitions")
        if P.shape != (H - 1, S, A, S):
            raise ValueError("transitions shape mismatch")
        r = np.array(self.rewards, dtype=np.float64)
        if r.shape != (H, S, A):
            raise ValueError("rewards shape mismatch")
        if not np.all(np.isfinite(r)) or r.min() < 0.0 or r.max() > 1.0:
            raise ValueError("rewards must lie in [0,1]")
        for name, arr in (("rho", rho), ("transitions", P), ("rewards", r)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


@dataclass(frozen=True, eq=False)
class MarkovPolicy:
    """probs (H,S,A), each row a distribution over actions."""

    probs: np.ndarray

    def __post_init__(self):
        p = _prob_rows(self.probs, "policy")
        if p.ndim != 3:
            raise ValueError("policy table must be (H,S,A)")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def horizon(self):
        return self.probs.shape[0]


def deterministic_policy(actions, num_actions):
    """actions (H,S) integer table -> delta policy."""
    actions = np.asarray(actions)
    H, S = actions.shape
    p = np.zeros((H, S, num_actions))
    p[np.arange(H)[:, None], np.arange(S)[None, :], actions] = 1.0
    return MarkovPolicy(p)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One episode: states (H,), actions (H,). Rewards are never recorded."""

    states: np.ndarray
    actions: np.ndarray

    def __post_init__(self):
        s = np.array(self.states, dtype=np.int64)
        a = np.array(self.actions, dtype=np.int64)
        if s.shape != a.shape or s.ndim != 1 or s.size < 1:
            raise ValueError("states/actions must be equal-length 1-d arrays")
        if s.min() < 0 or a.min() < 0:
            raise ValueError("negative indices")
        for name, arr in (("states", s), ("actions", a)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def steps(self):
        return list(zip(self.states.tolist(), self.actions.tolist()))


_OCC_KINDS = ("exact", "empirical", "weighted")


@dataclass(frozen=True, eq=False)
class OccupancyMeasures:
    """Per-step state-action measures d (H,S,A). exact/empirical layers are
    probability measures; weighted layers may be subnormalized."""

    d: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in _OCC_KINDS:
            raise ValueError(f"kind must be one of {_OCC_KINDS}")
        d = np.array(self.d, dtype=np.float64)
        if d.ndim != 3:
            raise ValueError("occupancies must be (H,S,A)")
        if not np.all(np.isfinite(d)) or d.min() < 0:
            raise ValueError("occupancies must be finite and nonnegative")
        sums = d.sum(axis=(1, 2))
        if self.kind == "weighted":
            if sums.max() > 1 + ROW_TOL:
                raise ValueError("weighted layer sums exceed 1")
        elif np.abs(sums - 1.0).max() > ROW_TOL:
            raise ValueError(f"{self.kind} layers must sum to 1 within {ROW_TOL}")
        d.flags.writeable = False
        object.__setattr__(self, "d", d)

    @property
    def horizon(self):
        return self.d.shape[0]


def _check_dims(mdp, policy):
    if policy.probs.shape != (mdp.horizon, mdp.num_states, mdp.num_actions):
        raise ValueError("mdp/policy dimension mismatch")


def rollout(mdp, policy, seed):
    """One trajectory by ancestral sampling, a pure function of the seed.
    The state arriving at step t is drawn on stream hash(seed,t,0), the
    action at step t on hash(seed,t,1)."""
    _check_dims(mdp, policy)
    H = mdp.horizon
    states = np.empty(H, dtype=np.int64)
    actions = np.empty(H, dtype=np.int64)
    s = categorical(mdp.rho, mix64(seed, 0, 0))
    for t in range(H):
        a = categorical(policy.probs[t, s], mix64(seed, t, 1))
        states[t], actions[t] = s, a
        if t + 1 < H:
            s = categorical(mdp.transitions[t, s, a], mix64(seed, t + 1, 0))
    return Trajectory(states, actions)


def rollout_batch(mdp, policy, n, seed):
    """n trajectories as (states, actions) arrays of shape (n,H). Row i is
    bit-identical to rollout(mdp, policy, mix64(seed, i))."""
    _check_dims(mdp, policy)
    H, S = mdp.horizon, mdp.num_states
    tseeds = mix64_array(seed, np.arange(n, dtype=np.uint64))
    cdf_rho = np.cumsum(mdp.rho)
    lp_rho = last_positive(mdp.rho)
    cdf_pi = np.cumsum(policy.probs, axis=-1)
    lp_pi = last_positive(policy.probs)
    cdf_p = np.cumsum(mdp.transitions, axis=-1)
    lp_p = last_positive(mdp.transitions)
    states = np.empty((n, H), dtype=np.int64)
    actions = np.empty((n, H), dtype=np.int64)
    s = categorical_rows(cdf_rho[None, :], lp_rho, mix64_array(tseeds, 0, 0))
    for t in range(H):
        a = categorical_rows(cdf_pi[t][s], lp_pi[t][s],
                             mix64_array(tseeds, t, 1))
        states[:, t], actions[:, t] = s, a
        if t + 1 < H:
            s = categorical_rows(cdf_p[t][s, a], lp_p[t][s, a],
                                 mix64_array(tseeds, t + 1, 0))
    return states, actions


def exact_occupancy(mdp, policy):
    """Forward recursion d_{t+1}(s') = sum_{s,a} d_t(s,a) P_t(s'|s,a)."""
    _check_dims(mdp, policy)
    H, S, A = mdp.horizon, mdp.num_states, mdp.num_actions
    d = np.empty((H, S, A))
    mu = mdp.rho
    for t in range(H):
        d[t] = mu[:, None] * policy.probs[t]
        if t + 1 < H:
            mu = np.einsum("sa,saz->z", d[t], mdp.transitions[t])
    return OccupancyMeasures(d, "exact")


def policy_value(mdp, policy):
    """J(pi) = sum_t d_t . r_t, cross-checked against backward Q-recursion
    within 1e-10 on every call."""
    occ = exact_occupancy(mdp, policy)
    forward = float(np.sum(occ.d * mdp.rewards))
    v = np.zeros(mdp.num_states)
    for t in range(mdp.horizon - 1, -1, -1):
        q = mdp.rewards[t].copy()
        if t + 1 < mdp.horizon:
            q += np.einsum("saz,z->sa", mdp.transitions[t], v)
        v = np.einsum("sa,sa->s", policy.probs[t], q)
    backward = float(mdp.rho @ v)
    if abs(forward - backward) > VALUE_XCHECK_TOL:
        raise RuntimeError(
            f"value cross-check failed: forward {forward!r} vs backward {backward!r}")
    return forward


def l1_layer_distance(p, q, t):
    """sum_{s,a} |p_t - q_t| (= 2 TV when both layers are probabilities)."""
    if p.d.shape != q.d.shape:
        raise ValueError("occupancy shape mismatch")
    if not 0 <= t < p.d.shape[0]:
        raise ValueError("step index out of range")
    return float(np.abs(p.d[t] - q.d[t]).sum())


# ---------------------------------------------------------------- JSON io

def mdp_to_json(mdp):
    return {
        "horizon": mdp.horizon,
        "num_states": mdp.num_states,
        "num_actions": mdp.num_actions,
        "rho": mdp.rho.tolist(),
        "transitions": mdp.transitions.tolist(),
        "rewards": mdp.rewards.tolist(),
    }


def mdp_from_json(doc):
    return TabularMdp(
        horizon=int(doc["horizon"]),
        num_states=int(doc["num_states"]),
        num_actions=int(doc["num_actions"]),
        rho=np.array(doc["rho"], dtype=np.float64),
        transitions=np.array(doc["transitions"], dtype=np.float64).reshape(
            int(doc["horizon"]) - 1, int(doc["num_states"]),
            int(doc["num_actions"]), int(doc["num_states"])),
        rewards=np.array(doc["rewards"], dtype=np.float64),
    )


def policy_to_json(policy):
    H, S, A = policy.probs.shape
    return {"horizon": H, "num_states": S, "num_actions": A,
            "probs": policy.probs.tolist()}


def policy_from_json(doc):
    return MarkovPolicy(np.array(doc["probs"], dtype=np.float64))


def save_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh)


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
