"""Batch front-end: configuration parsing, subcommand dispatch, deterministic
experiment runs, CSV/JSON emission.

Exit codes: 0 success, 1 quantitative failure, 2 configuration error,
3 capacity error.  All randomness flows from one config-level seed: the
gate's generator is child 0 of numpy's SeedSequence(seed) unless the gate
carries its own seed.  The SOLVCIRC_CAP environment variable overrides the
amplitude capacity cap.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import evolve as ev
from . import oracle as orc
from . import renyi as ry
from . import serialize as ser
from .errors import CapacityError, DominanceError, NumericalDriftError
from .gates import TwoSiteGate, random_gate
from .linalg import PAULI, make_rng, trace_distance, von_neumann_entropy
from .mps import MpsTensor, ghz_cluster_family, product_state_mps
from .solvable import check_solvable_left, solvability_report, verify_im_fixed_point

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_CAPACITY = 3

SCHEMA_VERSIONS = ("1",)


def _capacity_cap(default: int) -> int:
    env = os.environ.get("SOLVCIRC_CAP")
    return int(env) if env else default


def load_config(path: str, seed_override: int | None = None) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    version = str(cfg.get("version", ""))
    if version not in SCHEMA_VERSIONS:
        raise ValueError(f"unrecognized config schema version {version!r}")
    if seed_override is not None:
        cfg["seed"] = seed_override
        if "gate" in cfg and "seed" in cfg["gate"]:
            cfg["gate"]["seed"] = seed_override
    return cfg


def _gate_rng(cfg: dict, gate_spec: dict) -> np.random.Generator:
    if gate_spec.get("seed") is not None:
        return make_rng(int(gate_spec["seed"]))
    base = int(cfg.get("seed", 0))
    child = np.random.SeedSequence(base).spawn(1)[0]
    return np.random.default_rng(child)


def build_gate(cfg: dict) -> TwoSiteGate:
    spec = cfg["gate"]
    if "file" in spec:
        with open(spec["file"]) as fh:
            return ser.gate_from_json(json.load(fh))
    family = spec["family"]
    if "params" in spec:
        p = {k: ser._param_from_json(v) for k, v in spec["params"].items()}
        from . import gates as g
        builders = {
            "cartan": lambda: g.cartan_gate(p["j1"], p["j2"], p["j3"]),
            "q2_qt1": lambda: g.gate_q2_qt1(p["phi"], p["eps"], p["eta"], p["j"],
                                            p["u"], p["v"]),
            "q2_qt2": lambda: g.gate_q2_qt2(p["phi"], p["u"]),
            "general": lambda: g.gate_general(int(spec["q"]), int(spec["qt"]),
                                              p["phi"], p["v"], p["g"], p["f2"]),
            "both_chirality_q2": lambda: g.gate_both_chirality_q2(
                p["phi"], p["eps"], p["epsp"], p["eta"], p["etap"], p["j3"]),
            "both_chirality_q4plus": lambda: g.gate_both_chirality_q4plus(
                int(spec["q"]), p["phi"], p["uplus"], p["uminus"],
                p["vplus"], p["vminus"], np.asarray(p["h"], dtype=float)),
        }
        if family not in builders:
            raise ValueError(f"family {family!r} does not accept explicit params")
        return builders[family]()
    rng = _gate_rng(cfg, spec)
    return random_gate(family, rng, q=int(spec.get("q", 2)),
                       qt=int(spec.get("qt", 2)), seed=spec.get("seed"))


def build_mps(cfg: dict):
    spec = cfg["mps"]
    if "file" in spec:
        with open(spec["file"]) as fh:
            return ser.left_state_from_json(json.load(fh))
    family = spec["family"]
    if family == "ghz_cluster":
        return ghz_cluster_family(float(spec["theta"]), int(spec["q"]))
    if family == "product":
        ket = np.array([complex(re, im) for re, im in spec["ket"]])
        return product_state_mps(ket)
    raise ValueError(f"unknown mps family {family!r}")


def build_right_kets(cfg: dict, mps, l_r: int) -> np.ndarray:
    spec = cfg["right_state"]
    q, chi = mps.q, mps.chi
    if "product" in spec:
        levels = [int(x) for x in spec["product"]]
        if len(levels) != l_r:
            raise ValueError(f"product right state must list {l_r} levels")
        ket = np.zeros(q ** l_r, dtype=complex)
        idx = 0
        for lv in levels:
            if not 0 <= lv < q:
                raise ValueError(f"level {lv} out of range for q={q}")
            idx = idx * q + lv
        ket[idx] = 1.0
        return np.tile(ket, (chi, 1))
    if "kets" in spec:
        kets = np.stack([np.array([complex(re, im) for re, im in k])
                         for k in spec["kets"]])
        if kets.shape != (chi, q ** l_r):
            raise ValueError(f"kets must have shape ({chi}, {q ** l_r})")
        return kets
    if spec.get("mps_continuation"):
        if not isinstance(mps, MpsTensor):
            raise ValueError("mps_continuation requires a one-site MPS left state")
        return ev.mps_continuation_kets(mps, l_r)
    raise ValueError("right_state needs 'product', 'kets' or 'mps_continuation'")


def parse_observable(tag: str, q: int) -> np.ndarray:
    kind, _, arg = tag.partition(":")
    if kind == "proj":
        k = int(arg)
        if not 0 <= k < q:
            raise ValueError(f"proj level {k} out of range for q={q}")
        m = np.zeros((q, q), dtype=complex)
        m[k, k] = 1.0
        return m
    if kind == "pauli":
        if q != 2:
            raise ValueError("pauli observables require q=2")
        i = int(arg)
        if i not in (1, 2, 3):
            raise ValueError("pauli index must be 1, 2 or 3")
        return PAULI[i]
    if kind == "diag":
        vals = [float(x) for x in arg.split(",")]
        if len(vals) != q:
            raise ValueError(f"diag needs {q} entries")
        return np.diag(vals).astype(complex)
    raise ValueError(f"unknown observable {tag!r}")


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def _write_csv(path: str | None, header: list[str], rows: list[list[str]]):
    lines = [",".join(header)] + [",".join(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    cfg = load_config(args.config, args.seed)
    gate = build_gate(cfg)
    mps = build_mps(cfg)
    report = solvability_report(gate, mps)
    print(json.dumps(report.to_dict(), indent=2))
    required = args.require.split(",")
    values = {
        "left": report.left_residual,
        "right": report.right_residual,
        "dual": report.dual_unitarity_residual,
        "soliton": report.soliton_residual,
    }
    for key in required:
        if key not in values:
            raise ValueError(f"unknown residual {key!r} in --require")
        val = values[key]
        if val is None:
            raise ValueError(f"residual {key!r} undefined for q={gate.q}")
        if val >= args.tol:
            return EXIT_FAIL
    return EXIT_OK


def cmd_gen_gate(args) -> int:
    rng = make_rng(args.seed)
    gate = random_gate(args.family, rng, q=args.q, qt=args.qt, seed=args.seed)
    payload = ser.gate_to_json(gate)
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_evolve(args) -> int:
    cfg = load_config(args.config, args.seed)
    gate = build_gate(cfg)
    mps = build_mps(cfg)
    l_r = int(cfg["l_r"])
    tmax = int(cfg["tmax"])
    kets = build_right_kets(cfg, mps, l_r)
    econf = ev.EvolutionConfig(gate, mps, kets, l_r, tmax)
    obs = [(int(o["site"]), o["op"], parse_observable(o["op"], gate.q))
           for o in cfg.get("observables", [])]
    header = ["t", "S_ent", "trace_residual", "min_eig"] + \
             [f"site{site}:{tag}" for site, tag, _ in obs]
    rows = []
    state = ev.initial_joint_state(econf)
    try:
        for t in range(tmax + 1):
            res = state.invariant_residuals()
            row = [str(t), _fmt(ev.entanglement_entropy(state)),
                   _fmt(res["trace"]), _fmt(res["min_eig"])]
            row += [_fmt(ev.local_expectation(state, site, op)) for site, _, op in obs]
            rows.append(row)
            if t < tmax:
                state = ev.step(state, econf)
    except NumericalDriftError as exc:
        print(f"numerical drift: {exc}", file=sys.stderr)
        _write_csv(args.out, header, rows)
        return EXIT_FAIL
    _write_csv(args.out, header, rows)
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = load_config(args.config, args.seed)
    gate = build_gate(cfg)
    mps = build_mps(cfg)
    if not isinstance(mps, MpsTensor):
        raise ValueError("the chain oracle supports one-site MPS left states")
    l_r = int(cfg["l_r"])
    tmax = int(cfg["tmax"])
    kets = build_right_kets(cfg, mps, l_r)
    layer_order = args.layer_order or cfg.get("layer_order", "even_first")
    spec = orc.ChainSpec(gate, mps, kets, int(cfg["l_left"]), l_r, tmax,
                         layer_order=layer_order,
                         purify=bool(cfg.get("purify", True)),
                         cap=_capacity_cap(orc.DEFAULT_AMPLITUDE_CAP))
    chain = orc.evolve_chain(spec)
    econf = ev.EvolutionConfig(gate, mps, kets, l_r, tmax)
    header = ["t", "trace_distance", "oracle_entropy", "engine_entropy"]
    rows = []
    worst = 0.0
    state = ev.initial_joint_state(econf)
    for t in range(tmax + 1):
        engine_rho = ev.subsystem_density(state)
        dist = trace_distance(chain[t], engine_rho)
        worst = max(worst, dist)
        rows.append([str(t), _fmt(dist), _fmt(von_neumann_entropy(chain[t])),
                     _fmt(von_neumann_entropy(engine_rho))])
        if t < tmax:
            state = ev.step(state, econf)
    _write_csv(args.out, header, rows)
    return EXIT_OK if worst < args.tol else EXIT_FAIL


def cmd_renyi(args) -> int:
    cfg = load_config(args.config, args.seed)
    mps = build_mps(cfg)
    if not isinstance(mps, MpsTensor):
        raise ValueError("renyi machinery requires a one-site MPS")
    n_list = [int(n) for n in cfg.get("n_list", [2])]
    t_list = [int(t) for t in cfg.get("t_list", [1, 2])]
    gate = build_gate(cfg) if (args.oracle or "gate" in cfg) else None
    header = ["n", "t", "trace_via_transfer", "trace_via_oracle", "lambda_n", "v_E"]
    rows = []
    failed = False
    cap = _capacity_cap(orc.DEFAULT_AMPLITUDE_CAP)
    for n in n_list:
        try:
            lam = ry.dominant_eigenvalue(ry.transfer_matrix(mps, n))
            v = ry.entanglement_velocity(mps, n)
            lam_s, v_s = _fmt(lam), _fmt(v)
        except DominanceError as exc:
            print(f"dominance error at n={n}: {exc}", file=sys.stderr)
            lam_s, v_s = "nan", "nan"
            failed = True
        for t in t_list:
            tv = ry.renyi_trace_via_transfer(mps, n, t)
            if args.oracle:
                if gate is None:
                    raise ValueError("--oracle requires a gate in the config")
                ov = _fmt(orc.renyi_trace_chain(gate, mps, n, t, cap=cap))
            else:
                ov = ""
            rows.append([str(n), str(t), _fmt(tv), ov, lam_s, v_s])
    _write_csv(args.out, header, rows)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_fixed_point(args) -> int:
    cfg = load_config(args.config, args.seed)
    gate = build_gate(cfg)
    mps = build_mps(cfg)
    if not isinstance(mps, MpsTensor):
        raise ValueError("fixed-point check requires a one-site MPS")
    tsteps = args.tsteps if args.tsteps is not None else int(cfg.get("tmax", 2))
    solv = check_solvable_left(gate, mps)
    resid = verify_im_fixed_point(gate, mps, tsteps)
    print(json.dumps({"tsteps": tsteps, "solvable_left_residual": solv,
                      "fixed_point_residual": resid}, indent=2))
    return EXIT_OK if resid < args.tol else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="solvcirc",
                                description="solvable brickwork circuit toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="solvability report for a gate/MPS pair")
    c.add_argument("--config", required=True)
    c.add_argument("--seed", type=int,
                   help="override the config-level seed")
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--require", default="left",
                   help="comma list among left,right,soliton,dual")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gen-gate", help="sample a gate family member to JSON")
    g.add_argument("--family", required=True)
    g.add_argument("--q", type=int, default=2)
    g.add_argument("--qt", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen_gate)

    e = sub.add_parser("evolve", help="hidden-Markov evolution to CSV")
    e.add_argument("--config", required=True)
    e.add_argument("--seed", type=int,
                   help="override the config-level seed")
    e.add_argument("--out")
    e.set_defaults(func=cmd_evolve)

    o = sub.add_parser("oracle", help="engine vs full-chain cross validation")
    o.add_argument("--config", required=True)
    o.add_argument("--seed", type=int,
                   help="override the config-level seed")
    o.add_argument("--tol", type=float, default=1e-9)
    o.add_argument("--layer-order", choices=["even_first", "odd_first"])
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("renyi", help="replica transfer-matrix quantities to CSV")
    r.add_argument("--config", required=True)
    r.add_argument("--seed", type=int,
                   help="override the config-level seed")
    r.add_argument("--oracle", action="store_true",
                   help="add brute-force chain cross-check column")
    r.add_argument("--out")
    r.set_defaults(func=cmd_renyi)

    f = sub.add_parser("fixed-point", help="influence-matrix fixed-point residual")
    f.add_argument("--config", required=True)
    f.add_argument("--seed", type=int,
                   help="override the config-level seed")
    f.add_argument("--tol", type=float, default=1e-8)
    f.add_argument("--tsteps", type=int)
    f.set_defaults(func=cmd_fixed_point)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
