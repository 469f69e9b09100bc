"""The three learners. BC: per-(s,t) majority action. MM: L1 occupancy match
against the empirical measures. RE: split the data, train BC on D1, replay it
through the simulator weighted by D1-membership prefix weights, patch the
out-of-support remainder with D2 moments, and match against the hybrid.

Prefix-weight convention: the weight of step t is the product of membership
over states strictly before t (empty product 1 at t=0). The alternative that
includes the current state is exposed via include_current for sensitivity
checks, not used by defaults."""

from dataclasses import dataclass, field

import numpy as np

from .datasets import SplitConfig, empirical_occupancy, split, visited_table
from .matching import MatchTarget, extract_policy, solve_occupancy_match
from .mdp import MarkovPolicy, OccupancyMeasures, exact_occupancy, rollout_batch


@dataclass(frozen=True, eq=False)
class MembershipOracle:
    """m (H,S) in [0,1]; the tabular hard oracle is the visited-in-D1
    indicator and takes values in {0,1}."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=np.float64)
        if m.ndim != 2 or not np.all(np.isfinite(m)) or m.min() < 0 or m.max() > 1:
            raise ValueError("membership table must be (H,S) with entries in [0,1]")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @classmethod
    def ones(cls, H, S):
        return cls(np.ones((H, S)))

    @classmethod
    def zeros(cls, H, S):
        return cls(np.zeros((H, S)))


@dataclass(frozen=True, eq=False)
class ReplayMeasures:
    """Prefix-weighted occupancies of the replayed policy; layer t sums to
    E[prefix weight at t] <= 1. mode is "exact" or "monte-carlo"."""

    measures: OccupancyMeasures
    mode: str
    n_replay: int = 0
    seed: int = 0


@dataclass(frozen=True)
class ReConfig:
    """Replay-estimation knobs. replay_mode "exact" is the infinite-replay
    default; "mc" uses n_replay seeded rollouts. use_full_data switches the
    empirical side from D2 to all of D. oracle_override in {None, "ones",
    "zeros"} substitutes a constant membership table (estimator identity
    tests). include_current flips the prefix-weight convention."""

    split: SplitConfig = field(default_factory=SplitConfig)
    replay_mode: str = "exact"
    n_replay: int = 1000
    replay_seed: int = 0
    use_full_data: bool = False
    tie_rule: str = "lowest"
    oracle_override: str = None
    include_current: bool = False

    def __post_init__(self):
        if self.replay_mode not in ("exact", "mc"):
            raise ValueError("replay_mode must be 'exact' or 'mc'")
        if self.replay_mode == "mc" and self.n_replay < 1:
            raise ValueError("n_replay must be positive in mc mode")
        if self.oracle_override not in (None, "ones", "zeros"):
            raise ValueError("oracle_override must be None, 'ones' or 'zeros'")


def bc_train(dataset, S, A, H, tie_rule="lowest"):
    """Majority action per (s,t); unobserved (s,t) get the uniform row.
    tie_rule "lowest" takes the smallest maximal action index, "uniform"
    spreads over the argmax set."""
    if dataset.n == 0:
        raise ValueError("empty dataset")
    if tie_rule not in ("lowest", "uniform"):
        raise ValueError("tie_rule must be 'lowest' or 'uniform'")
    t_idx = np.broadcast_to(np.arange(H), dataset.states.shape)
    flat = (t_idx * S + dataset.states) * A + dataset.actions
    counts = np.bincount(flat.ravel(), minlength=H * S * A).reshape(H, S, A)
    probs = np.empty((H, S, A))
    seen = counts.sum(axis=2) > 0
    if tie_rule == "lowest":
        amax = counts.argmax(axis=2)
        probs[:] = 0.0
        probs[np.arange(H)[:, None], np.arange(S)[None, :], amax] = 1.0
    else:
        top = counts == counts.max(axis=2, keepdims=True)
        probs = top / top.sum(axis=2, keepdims=True)
    probs[~seen] = 1.0 / A
    return MarkovPolicy(probs)


def mm_train(data, mdp):
    """Moment matching: L1-match the occupancy polytope to the empirical
    measures of a Dataset, or directly to OccupancyMeasures / MatchTarget
    (the infinite-data mode). Raises on solver numeric-failure."""
    if isinstance(data, MatchTarget):
        target = data
    elif isinstance(data, OccupancyMeasures):
        target = MatchTarget(data.d)
    else:
        target = MatchTarget(
            empirical_occupancy(data, mdp.num_states, mdp.num_actions).d)
    sol = solve_occupancy_match(mdp, target)
    if sol.status != "optimal":
        raise RuntimeError(f"occupancy match failed: {sol.status}")
    return extract_policy(sol.occupancies, mdp)


def membership_tabular(d1, S, H):
    """Hard oracle: m_t(s) = 1 iff s is visited at step t in d1."""
    if d1.n and d1.horizon != H:
        raise ValueError("dataset horizon mismatch")
    if d1.n == 0:
        return MembershipOracle.zeros(H, S)
    return MembershipOracle(visited_table(d1, S).astype(np.float64))


def prefix_weight(oracle, prefix_states):
    """Product of m_{t'}(s_{t'}) over the given prefix; 1 on the empty
    prefix; non-increasing as the prefix grows."""
    w = 1.0
    for t, s in enumerate(prefix_states):
        w *= oracle.m[t, s]
    return float(w)


def _prefix_weights_batch(oracle, states, include_current):
    """(n,H) prefix weights along sampled trajectories."""
    mvals = oracle.m[np.arange(states.shape[1])[None, :], states]
    cum = np.cumprod(mvals, axis=1)
    if include_current:
        return cum
    out = np.ones_like(cum)
    out[:, 1:] = cum[:, :-1]
    return out


def replay_exact(mdp, bc_policy, oracle, include_current=False):
    """Closed-form replay: w_{t+1}(s') = sum_{s,a} w_t(s) m_t(s) pi_t(a|s)
    P_t(s'|s,a) with w_0 = rho, and layer t measures w_t(s) pi_t(a|s)."""
    H, S, A = mdp.horizon, mdp.num_states, mdp.num_actions
    d = np.empty((H, S, A))
    w = mdp.rho.copy()
    for t in range(H):
        wt = w * oracle.m[t] if include_current else w
        d[t] = wt[:, None] * bc_policy.probs[t]
        if t + 1 < H:
            w = np.einsum("s,sa,saz->z", w * oracle.m[t], bc_policy.probs[t],
                          mdp.transitions[t])
    return ReplayMeasures(OccupancyMeasures(d, "weighted"), "exact")


def replay_mc(mdp, bc_policy, oracle, n_replay, seed, include_current=False):
    """Monte Carlo replay: n_replay seeded rollouts of the BC policy, each
    step counted with its prefix weight; contributions stop once the weight
    hits exactly 0. Deterministic given seed."""
    if n_replay < 1:
        raise ValueError("n_replay must be positive")
    H, S, A = mdp.horizon, mdp.num_states, mdp.num_actions
    states, actions = rollout_batch(mdp, bc_policy, n_replay, seed)
    weights = _prefix_weights_batch(oracle, states, include_current)
    d = np.zeros((H, S, A))
    t_idx = np.broadcast_to(np.arange(H), states.shape)
    np.add.at(d, (t_idx, states, actions), weights)
    occ = OccupancyMeasures(d / n_replay, "weighted")
    return ReplayMeasures(occ, "monte-carlo", n_replay=n_replay, seed=seed)


def hybrid_estimate(replay, d2, oracle, include_current=False):
    """Hybrid target g_t(s,a) = replay_t(s,a)
    + E_{D2}[ 1(s_t=s, a_t=a) (1 - prefix weight) ]."""
    if d2.n == 0:
        raise ValueError("empty empirical split")
    g = replay.measures.d.copy()
    weights = 1.0 - _prefix_weights_batch(oracle, d2.states, include_current)
    t_idx = np.broadcast_to(np.arange(d2.horizon), d2.states.shape)
    np.add.at(g, (t_idx, d2.states, d2.actions), weights / d2.n)
    return MatchTarget(g)


def complement_exact(mdp, policy, oracle, include_current=False):
    """Exact value of the hybrid's empirical term when D2 is replaced by the
    policy's own distribution: x_t(s) pi_t(a|s) with
    x_{t+1}(s') = sum_{s,a} [x_t(s) + w_t(s)(1 - m_t(s))] pi_t(a|s) P_t(s'|s,a),
    x_0 = 0. Computed by its own recursion so replay + complement is a real
    two-route identity, not algebra reshuffled."""
    H, S, A = mdp.horizon, mdp.num_states, mdp.num_actions
    d = np.empty((H, S, A))
    w = mdp.rho.copy()
    x = np.zeros(S)
    for t in range(H):
        if include_current:
            xt = x + w * (1.0 - oracle.m[t])
            d[t] = xt[:, None] * policy.probs[t]
        else:
            d[t] = x[:, None] * policy.probs[t]
        if t + 1 < H:
            carry = x + w * (1.0 - oracle.m[t])
            x = np.einsum("s,sa,saz->z", carry, policy.probs[t],
                          mdp.transitions[t])
            w = np.einsum("s,sa,saz->z", w * oracle.m[t], policy.probs[t],
                          mdp.transitions[t])
    return d


def re_pipeline(dataset, mdp, cfg):
    """Full replay-estimation pipeline with intermediates exposed:
    returns dict(d1, d2, oracle, bc, replay, target, solution, policy)."""
    H, S, A = mdp.horizon, mdp.num_states, mdp.num_actions
    d1, d2 = split(dataset, cfg.split)
    if cfg.oracle_override == "ones":
        oracle = MembershipOracle.ones(H, S)
    elif cfg.oracle_override == "zeros":
        oracle = MembershipOracle.zeros(H, S)
    else:
        oracle = membership_tabular(d1, S, H)
    bc = bc_train(d1, S, A, H, cfg.tie_rule)
    if cfg.replay_mode == "exact":
        replay = replay_exact(mdp, bc, oracle, cfg.include_current)
    else:
        replay = replay_mc(mdp, bc, oracle, cfg.n_replay, cfg.replay_seed,
                           cfg.include_current)
    emp = dataset if cfg.use_full_data else d2
    target = hybrid_estimate(replay, emp, oracle, cfg.include_current)
    sol = solve_occupancy_match(mdp, target)
    if sol.status != "optimal":
        raise RuntimeError(f"occupancy match failed: {sol.status}")
    policy = extract_policy(sol.occupancies, mdp)
    return {"d1": d1, "d2": d2, "oracle": oracle, "bc": bc, "replay": replay,
            "target": target, "solution": sol, "policy": policy}


def re_train(dataset, mdp, cfg=None):
    """Replay estimation end to end; pure function of (dataset, cfg)."""
    return re_pipeline(dataset, mdp, cfg or ReConfig())["policy"]
