"""Command-line front end.

Every command writes one JSON report to stdout and a short human summary to
stderr. Exit codes: 0 pass, 1 invariant or theorem failure, 2 usage or parse
error.
"""
import argparse
import json
import sys

import numpy as np

from .config import DEFAULT, Config
from .errors import DimensionError, InvariantError, MajorizationError, ProtocolError, QmajorError, SynthesisError
from .io import (
    ParseError,
    dump_povm,
    dump_state,
    encode_matrix,
    load_json,
    parse_protocol,
    parse_povm,
    parse_state,
    parse_vector_or_state,
)
from .locc import check_deterministic_transform, check_monotonicity, run
from .majorization import majorization_slack
from .measurement import apply_channel, entropy_pair, expected_spectrum, measure, posterior_state, validate_povm
from .multiparty import LocalPovm, TensorSpace, lift, multiparty_state, partial_trace
from .states import diagnose_state, entropy, spectrum, validate_state
from .uhlmann import entropy_drop_witness, synthesize
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_TOLS = ("tol_herm", "tol_psd", "tol_trace", "tol_povm", "tol_prob", "tol_major", "tol_ds", "tol_recon")


def _emit(report, summary):
    json.dump(report, sys.stdout, indent=2, default=_json_default)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")


def _config(args):
    kw = {name: getattr(args, name) for name in _TOLS + ("seed", "trials", "dim_cap") if hasattr(args, name)}
    return Config(**kw)


def _load_state(path):
    return parse_state(load_json(path))


def cmd_validate(args, cfg):
    doc = load_json(args.path)
    if args.kind == "state":
        m, factors = parse_state(doc)
        diags = diagnose_state(m, cfg)
        if factors is not None and not diags:
            multiparty_state(factors, m, cfg)
        report = {"kind": "state", "valid": not diags, "diagnostics": diags}
    elif args.kind == "povm":
        ops = parse_povm(doc)
        try:
            _, flag = validate_povm(ops, cfg)
            report = {"kind": "povm", "valid": True, "diagnostics": [], "bistochastic": flag.is_bistochastic,
                      "bistochastic_deviation": flag.deviation}
        except InvariantError as exc:
            report = {"kind": "povm", "valid": False, "diagnostics": exc.diagnostics}
    else:
        protocol = parse_protocol(doc)
        problems = []
        for i, step in enumerate(protocol.steps):
            d = protocol.space.agent_dim(step.agent)
            payloads = ([step.payload] if step.payload is not None else []) + list(step.adaptive.values())
            for p in payloads:
                try:
                    if step.kind == "measurement":
                        validate_povm(p, cfg)
                    elif np.abs(p @ p.conj().T - np.eye(d)).max() > cfg.tol_povm:
                        problems.append({"step": i, "invariant": "unitary"})
                except InvariantError as exc:
                    problems.append({"step": i, "invariant": "completeness", "diagnostics": exc.diagnostics})
        report = {"kind": "protocol", "valid": not problems, "diagnostics": problems,
                  "steps": len(protocol.steps), "factors": list(protocol.space.factor_dims)}
    _emit(report, f"{args.kind} {'valid' if report['valid'] else 'INVALID'}: {args.path}")
    return EXIT_OK if report["valid"] else EXIT_FAIL


def cmd_spectrum(args, cfg):
    m, _ = _load_state(args.state)
    sp = spectrum(validate_state(m, cfg), cfg)
    _emit({"spectrum": sp.values, "entropy_bits": entropy(sp)}, f"entropy {entropy(sp):.6f} bits")
    return EXIT_OK


def cmd_measure(args, cfg):
    m, _ = _load_state(args.state)
    s = validate_state(m, cfg)
    p, flag = validate_povm(parse_povm(load_json(args.povm)), cfg)
    if args.outcome is not None:
        outcomes = [posterior_state(p, s, args.outcome, cfg)]
    else:
        outcomes = measure(p, s, cfg)
    s1, s2 = entropy_pair(p, s, cfg)
    report = {
        "bistochastic": flag.is_bistochastic,
        "outcomes": [
            {
                "index": o.index,
                "probability": o.probability,
                "posterior": None if o.posterior is None else encode_matrix(o.posterior.matrix),
            }
            for o in outcomes
        ],
        "initial_spectrum": spectrum(s, cfg).values,
        "expected_spectrum": expected_spectrum(p, s, cfg).values,
        "channel_output": encode_matrix(apply_channel(p, s, cfg).matrix),
        "S1": s1,
        "S2": s2,
        "initial_entropy": entropy(spectrum(s, cfg)),
    }
    _emit(report, f"{len(p)} outcomes; S1={s1:.6f} S2={s2:.6f}")
    return EXIT_OK


def _vector(path, cfg):
    kind, v = parse_vector_or_state(load_json(path))
    if kind == "state":
        return spectrum(validate_state(v, cfg), cfg).values
    return v


def cmd_majorize(args, cfg):
    a, b = _vector(args.a, cfg), _vector(args.b, cfg)
    slack, bad = majorization_slack(a, b, cfg)
    ok = bad < 0
    report = {"majorizes": ok, "min_slack": slack, "violating_index": None if ok else bad}
    _emit(report, "a majorizes b" if ok else f"a does NOT majorize b (first violating prefix index {bad})")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_synthesize(args, cfg):
    src, _ = _load_state(args.source)
    tgt, _ = _load_state(args.target)
    res = synthesize(src, tgt, cfg)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(dump_povm(res.povm.operators), fh)
    report = res.report()
    if not args.out:
        report["povm"] = dump_povm(res.povm.operators)
    _emit(report, f"synthesized {res.terms} operators, residual {res.residual:.2e}")
    return EXIT_OK


def _multiparty(path, cfg, factors=None):
    m, f = _load_state(path)
    f = f or factors
    if f is None:
        raise ParseError(f"{path}: multiparty state needs a 'factors' field")
    return multiparty_state(f, m, cfg)


def cmd_ptrace(args, cfg):
    ms = _multiparty(args.state, cfg)
    local = partial_trace(ms, args.keep)
    sp = spectrum(local, cfg)
    _emit({**dump_state(local.matrix), "spectrum": sp.values, "entropy_bits": entropy(sp)},
          f"local state of agent {args.keep}, entropy {entropy(sp):.6f} bits")
    return EXIT_OK


def _factors(text):
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad factor list {text!r}")
    return dims


def cmd_lift(args, cfg):
    local, flag = validate_povm(parse_povm(load_json(args.povm)), cfg)
    g = lift(LocalPovm(args.agent, local), TensorSpace(args.factors).check(cfg), cfg)
    doc = dump_povm(g.operators)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh)
    report = {"local_bistochastic": flag.is_bistochastic, "lifted_bistochastic": g.bistochastic.is_bistochastic,
              "completeness_deviation": g.completeness_residual, "bistochastic_deviation": g.bistochastic.deviation}
    if not args.out:
        report["povm"] = doc
    _emit(report, f"lifted {len(g)} operators to dimension {g.dim}")
    return EXIT_OK


def cmd_locc(args, cfg):
    protocol = parse_protocol(load_json(args.protocol))
    initial = _multiparty(args.state, cfg, protocol.space.factor_dims)
    mono = check_monotonicity(protocol, initial, cfg)
    ens = run(protocol, initial, cfg)
    report = {
        "branches": [{"probability": b.probability, "history": list(b.history)} for b in ens],
        "steps": mono.steps,
        "monotonicity": {"ok": mono.ok, "worst_slack": mono.worst_slack, "violations": mono.violations},
    }
    code = EXIT_OK
    if args.check == "monotonicity":
        code = EXIT_OK if mono.ok else EXIT_FAIL
    elif args.check == "deterministic":
        if not args.target:
            raise ParseError("--check deterministic needs --target")
        target = _multiparty(args.target, cfg, protocol.space.factor_dims)
        det = check_deterministic_transform(protocol, initial, target, cfg)
        report["deterministic"] = det.to_dict()
        code = EXIT_OK if det.ok else EXIT_FAIL
    _emit(report, f"{len(ens)} leaf branches; monotone={mono.ok}" + (f"; check {args.check}" if args.check else ""))
    return code


def cmd_verify(args, cfg):
    rep = run_suite(args.theorem, cfg)
    _emit(rep.to_dict(), f"verify {args.theorem}: {rep.passed}/{rep.trials} passed, worst {rep.metric} {rep.worst:.3e}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_counterexample(args, cfg):
    w = entropy_drop_witness(cfg)
    ok = (not w["is_bistochastic"]) and w["output_entropy"] < w["input_entropy"] and not w["input_majorizes_output"]
    _emit(w, f"entropy {w['input_entropy']:.3f} -> {w['output_entropy']:.3f} bits under a non-bi-stochastic channel")
    return EXIT_OK if ok else EXIT_FAIL


def _global_flags(parser, suppress):
    g = parser.add_argument_group("global options")
    for name in _TOLS:
        g.add_argument("--" + name.replace("_", "-"), dest=name, type=float,
                       default=argparse.SUPPRESS if suppress else getattr(DEFAULT, name))
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else DEFAULT.seed)
    g.add_argument("--trials", type=int, default=argparse.SUPPRESS if suppress else DEFAULT.trials)
    g.add_argument("--dim-cap", dest="dim_cap", type=int, default=argparse.SUPPRESS if suppress else DEFAULT.dim_cap)


def build_parser():
    parser = argparse.ArgumentParser(prog="qmajor", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        _global_flags(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, help="check a state, POVM or protocol file")
    p.add_argument("path")
    p.add_argument("--kind", choices=["state", "povm", "protocol"], default="state")

    p = add("spectrum", cmd_spectrum, help="spectrum and entropy of a state")
    p.add_argument("--state", required=True)

    p = add("measure", cmd_measure, help="apply a POVM to a state")
    p.add_argument("--state", required=True)
    p.add_argument("--povm", required=True)
    p.add_argument("--outcome", type=int)

    p = add("majorize", cmd_majorize, help="compare two vectors or states")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = add("synthesize", cmd_synthesize, help="bi-stochastic measurement carrying source to target")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--out")

    p = add("ptrace", cmd_ptrace, help="local state of one agent")
    p.add_argument("--state", required=True)
    p.add_argument("--keep", type=int, required=True)

    p = add("lift", cmd_lift, help="lift a local POVM to the full tensor space")
    p.add_argument("--povm", required=True)
    p.add_argument("--factors", type=_factors, required=True)
    p.add_argument("--agent", type=int, default=1)
    p.add_argument("--out")

    p = add("locc", cmd_locc, help="expand an LOCC protocol")
    p.add_argument("action", choices=["run"])
    p.add_argument("--protocol", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--check", choices=["monotonicity", "deterministic"])
    p.add_argument("--target")

    p = add("verify", cmd_verify, help="run a randomized theorem suite")
    p.add_argument("theorem", choices=sorted(SUITES))

    p = add("counterexample", cmd_counterexample, help="print a stored counterexample")
    p.add_argument("name", choices=["trace-preserving-entropy-drop"])
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return args.func(args, cfg)
    except (ParseError, DimensionError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantError, MajorizationError, SynthesisError, ProtocolError) as exc:
        report = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("diagnostics", "index", "residual", "step", "history"):
            if getattr(exc, attr, None) is not None:
                report[attr] = getattr(exc, attr)
        _emit(report, f"failed: {exc}")
        return EXIT_FAIL
    except QmajorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
