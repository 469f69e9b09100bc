"""Command-line front end: instance/dataset generation, training, grid
experiments, event probes, slope fits, and the acceptance suite."""

import argparse
import json
import sys

from . import acceptance
from .datasets import SplitConfig, load_dataset, sample_dataset, save_dataset
from .harness import ExperimentConfig, event_probe, fit_slope, load_csv, \
    rows_to_csv, run_experiment, _make_instance
from .learners import ReConfig, bc_train, mm_train, re_train
from .mdp import load_json, mdp_from_json, mdp_to_json, policy_from_json, \
    policy_to_json, policy_value, save_json


def _cmd_gen_instance(args):
    cfg = {"family": args.family, "states": args.states,
           "actions": args.actions, "reset": args.reset, "ratio": args.ratio,
           "construction_seed": args.construction_seed,
           "mixture_seed": args.mixture_seed}
    cfg = {k: v for k, v in cfg.items() if v is not None}
    component, mdp, expert = _make_instance(cfg, args.H, args.n_exp,
                                            args.draw)
    save_json(mdp_to_json(mdp), f"{args.out}.mdp.json")
    save_json(policy_to_json(expert), f"{args.out}.policy.json")
    print(f"{component}: wrote {args.out}.mdp.json and {args.out}.policy.json"
          f" (S={mdp.num_states} A={mdp.num_actions} H={mdp.horizon})")
    return 0


def _cmd_gen_dataset(args):
    mdp = mdp_from_json(load_json(args.instance))
    policy = policy_from_json(load_json(args.policy))
    ds = sample_dataset(mdp, policy, args.n, args.seed,
                        instance_id=args.instance, policy_id=args.policy)
    save_dataset(ds, args.out)
    print(f"wrote {args.out} ({ds.n} trajectories, horizon {ds.horizon})")
    return 0


def _re_config(spec_text):
    if not spec_text:
        return ReConfig()
    if spec_text.strip().startswith("{"):
        doc = json.loads(spec_text)
    else:
        doc = load_json(spec_text)
    return ReConfig(
        split=SplitConfig(doc.get("frac1", 0.5), doc.get("split_seed", 0)),
        replay_mode=doc.get("replay_mode", "exact"),
        n_replay=doc.get("n_replay", 1000),
        replay_seed=doc.get("replay_seed", 0),
        use_full_data=doc.get("use_full_data", False),
        tie_rule=doc.get("tie_rule", "lowest"),
        oracle_override=doc.get("oracle_override"),
        include_current=doc.get("include_current", False))


def _cmd_train(args):
    mdp = mdp_from_json(load_json(args.instance))
    ds = load_dataset(args.dataset)
    if args.learner == "bc":
        pol = bc_train(ds, mdp.num_states, mdp.num_actions, mdp.horizon)
    elif args.learner == "mm":
        pol = mm_train(ds, mdp)
    else:
        pol = re_train(ds, mdp, _re_config(args.config))
    save_json(policy_to_json(pol), args.out)
    print(f"wrote {args.out}; J(policy) = {policy_value(mdp, pol):.6f}")
    return 0


def _cmd_experiment(args):
    cfg = ExperimentConfig.from_json(load_json(args.config))
    rows = run_experiment(cfg)
    out = args.out or cfg.output
    if not out:
        raise SystemExit("no output path: pass --out or set it in the config")
    rows_to_csv(rows, out)
    failed = sum(r.status != "ok" for r in rows)
    print(f"wrote {out} ({len(rows)} rows, {failed} failures)")
    return 1 if failed else 0


def _cmd_probe_events(args):
    rep = event_probe(args.n_exp, args.H, args.datasets, args.seed,
                      coeff=args.coeff)
    print(json.dumps(rep, indent=2))
    return 0


def _cmd_fit(args):
    rows = load_csv(args.input)
    where = {}
    if args.filter:
        for clause in args.filter.split(","):
            k, _, v = clause.partition("=")
            where[k.strip()] = v.strip()
    slope, stderr = fit_slope(rows, where or None, x=args.x)
    print(f"slope={slope:.6f} stderr={stderr:.6f}")
    return 0


def _cmd_verify(args):
    only = None
    if args.only:
        only = {int(tok) for tok in args.only.split(",")}
    results = acceptance.run(only)
    return 0 if all(ok for ok, _ in results.values()) else 1


def build_parser():
    p = argparse.ArgumentParser(prog="il-lab",
                                description="tabular imitation learning lab")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-instance", help="write an instance + expert pair")
    g.add_argument("--family", required=True,
                   choices=["mm-lb", "bc-lb", "two-state", "fan", "mixture"])
    g.add_argument("--H", type=int, required=True)
    g.add_argument("--n-exp", type=int, default=100,
                   help="dataset size the instance is tuned against")
    g.add_argument("--states", type=int, default=None)
    g.add_argument("--actions", type=int, default=2)
    g.add_argument("--reset", choices=["uniform", "geometric"], default=None)
    g.add_argument("--ratio", type=float, default=0.5)
    g.add_argument("--construction-seed", type=int, default=0)
    g.add_argument("--mixture-seed", type=int, default=0)
    g.add_argument("--draw", type=int, default=0,
                   help="draw index for the mixture family")
    g.add_argument("--out", required=True, help="output path prefix")
    g.set_defaults(func=_cmd_gen_instance)

    d = sub.add_parser("gen-dataset", help="roll expert trajectories to JSONL")
    d.add_argument("--instance", required=True)
    d.add_argument("--policy", required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out", required=True)
    d.set_defaults(func=_cmd_gen_dataset)

    t = sub.add_parser("train", help="fit a policy to a dataset")
    t.add_argument("--learner", required=True, choices=["bc", "mm", "re"])
    t.add_argument("--instance", required=True)
    t.add_argument("--dataset", required=True)
    t.add_argument("--config", default=None,
                   help="replay-estimation config: JSON literal or file path")
    t.add_argument("--out", required=True)
    t.set_defaults(func=_cmd_train)

    e = sub.add_parser("experiment", help="run a (H, N, seed) grid to CSV")
    e.add_argument("--config", required=True)
    e.add_argument("--out", default=None)
    e.set_defaults(func=_cmd_experiment)

    pe = sub.add_parser("probe-events", help="lower-bound event frequencies")
    pe.add_argument("--n-exp", type=int, required=True)
    pe.add_argument("--H", type=int, required=True)
    pe.add_argument("--datasets", type=int, required=True)
    pe.add_argument("--seed", type=int, default=0)
    pe.add_argument("--coeff", type=float, default=0.5,
                    help="deviation coefficient in the third event")
    pe.set_defaults(func=_cmd_probe_events)

    f = sub.add_parser("fit", help="log-log slope of mean gap from a CSV")
    f.add_argument("--in", dest="input", required=True)
    f.add_argument("--filter", default="",
                   help="comma-separated column=value filters")
    f.add_argument("--x", default="n_exp", choices=["n_exp", "H"])
    f.set_defaults(func=_cmd_fit)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--only", default="",
                   help="comma-separated criterion ids, e.g. 2,3,8")
    v.set_defaults(func=_cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
