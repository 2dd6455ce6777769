"""Command line: build, randomize, audit, witness, blowup, verify.

Every subcommand is a pure function of its flags and the optional JSON
config file; all randomness is drawn from labelled substreams of the
master seed.  Usage errors exit 2, verification mismatches exit 1.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .config import THREADS_ENV, RunConfig, canonical_json
from .field import field_for_q, prime_power
from .graphs import read_graph, write_graph
from .k4free import edge_density_audit, randomize, side_count_summary, verify_k4_free
from .pipeline import (Certificate, blowup_multicolor, certify_witness, expected_count_report,
                       multicolor_s, reverify, sample_vertices, verify_coloring)
from .plane import build_plane
from .rng import parse_seed
from .secant_graph import build_secant_graph, srg_check, verify_base_properties
from .unital import build_unital, verify_design

log = logging.getLogger("hermitian_ramsey")


def build_stack(q: int):
    spec = field_for_q(q)
    plane = build_plane(spec)
    unital = build_unital(spec, plane)
    return spec, plane, unital, build_secant_graph(unital, plane)


def _write_json(path: Path, obj) -> None:
    path.write_text(canonical_json(obj), encoding="utf-8", newline="\n")


def _envelope(cfg: RunConfig, command: str) -> dict:
    return {"command": command, "tool_version": __version__, "profile": cfg.profile,
            "config": cfg.to_dict(), "threads": os.environ.get(THREADS_ENV, "1")}


def _out(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_build(args, cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    spec, plane, u, g = build_stack(cfg.q)
    out = _out(cfg)
    with open(out / "unital.txt", "w", encoding="utf-8", newline="\n") as fh:
        u.dump(fh)
    with open(out / "cliques.txt", "w", encoding="utf-8", newline="\n") as fh:
        g.write_cliques(fh)
    if not args.skip_edges:
        with open(out / "graph.edges", "w", encoding="utf-8", newline="\n") as fh:
            g.write_edges(fh)
    q = cfg.q
    base = verify_base_properties(g, k4_cap=cfg.k4_cap)
    report = {
        **_envelope(cfg, "build"),
        "field_modulus": list(spec.modulus),
        "counts": {"points": int(u.n_points), "secants": int(u.n_secants), "tangents": len(u.tangents),
                   "plane_points": plane.size, "n": g.n, "d": (q + 1) * (q * q - 1),
                   "cliques": g.n_cliques, "edges": g.edge_count},
        "design": verify_design(u).to_dict(),
        "base": base.to_dict(),
        "seconds": round(time.perf_counter() - t0, 3),
    }
    if args.srg:
        report["srg"] = srg_check(g, pair_budget=cfg.pair_budget, samples=cfg.srg_samples,
                                  seed=cfg.master_seed).to_dict()
    _write_json(out / "report.json", report)
    print(f"q={q}: points={u.n_points} secants={u.n_secants} n={g.n} edges={g.edge_count} "
          f"base={'PASS' if base.passed else 'FAIL'}")
    return 0 if base.passed else 1


def cmd_randomize(args, cfg: RunConfig) -> int:
    spec, _, _, g = build_stack(cfg.q)
    h = randomize(g, cfg.master_seed)
    out = _out(cfg)
    if not args.skip_edges:
        with open(out / "hstar.edges", "w", encoding="utf-8", newline="\n") as fh:
            h.write_edges(fh)
    _write_json(out / "hstar.json", h.sidecar(spec.modulus))
    structural = verify_k4_free(h, mode="structural")
    report = {**_envelope(cfg, "randomize"), "structural": structural.to_dict(),
              "sides": side_count_summary(h)}
    ok = structural.passed
    if h.n <= cfg.k4_cap:
        exhaustive = verify_k4_free(h, mode="exhaustive", cap=cfg.k4_cap)
        report["exhaustive"] = exhaustive.to_dict()
        ok = ok and exhaustive.passed
    _write_json(out / "report.json", report)
    print(f"H_q* q={cfg.q} seed={cfg.master_seed}: edges={h.edge_count} K4-free={'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_audit(args, cfg: RunConfig) -> int:
    _, _, _, g = build_stack(cfg.q)
    h = randomize(g, cfg.master_seed)
    sizes = args.sizes or [max(2, g.n // d) for d in (8, 4, 2)]
    rep = edge_density_audit(h, sizes, args.trials, cfg.master_seed, m_prime=cfg.m_prime,
                             floor=cfg.density_floor, assert_scaled=cfg.assertions_enabled)
    _write_json(_out(cfg) / "audit.json", {**_envelope(cfg, "audit"), "audit": rep.to_dict()})
    print(rep.summary())
    return 0 if rep.passed else 1


def cmd_witness(args, cfg: RunConfig) -> int:
    spec, _, _, g = build_stack(cfg.q)
    h = randomize(g, cfg.master_seed)
    p = args.p if args.p is not None else math.log(cfg.q) ** 2 / cfg.q
    sample = sample_vertices(h, p, cfg.master_seed)
    t = args.t
    if t is None:
        probe = certify_witness(sample, sample.graph.n + 1, k4_cap=cfg.k4_cap, alpha_cap=cfg.alpha_cap,
                                modulus=spec.modulus, timeout=args.timeout)
        t = probe.data["alpha_bound"]["value"] + 1
    cert = certify_witness(sample, t, k4_cap=cfg.k4_cap, alpha_cap=cfg.alpha_cap,
                           modulus=spec.modulus, timeout=args.timeout)
    out = _out(cfg)
    write_graph(out / "witness.edges", sample.graph)
    (out / "certificate.json").write_text(cert.to_json(), encoding="utf-8", newline="\n")
    a = cert.data["alpha_bound"]
    print(f"witness q={cfg.q} seed={cfg.master_seed} p={sample.p:.4g}: n={sample.graph.n} "
          f"edges={sample.graph.edge_count} alpha({a['mode']})={a['value']} t={t} status={cert.status}")
    for flag in sample.flags:
        print(f"flag: {flag}")
    return 0 if cert.status == "PASS" else 1


def cmd_blowup(args, cfg: RunConfig) -> int:
    base = read_graph(args.base)
    colored = blowup_multicolor(base, args.r, args.k, cfg.master_seed)
    rep = verify_coloring(colored, args.t, k4_cap=cfg.k4_cap, alpha_cap=cfg.alpha_cap, timeout=args.timeout)
    s = args.s if args.s is not None else multicolor_s(max(args.t, 3))
    expected = expected_count_report(base.n, s, args.r, args.t, args.k)
    out = _out(cfg)
    with open(out / "coloring.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"c {colored.n} {colored.k}\n")
        for u in range(colored.n):
            for v in range(u + 1, colored.n):
                fh.write(f"{u} {v} {int(colored.colors[u, v])}\n")
    _write_json(out / "coloring.json", {**_envelope(cfg, "blowup"), "report": rep.to_dict(),
                                        "expected_count": expected,
                                        "permutations": [p.tolist() for p in colored.permutations]})
    print(rep.summary())
    print(f"expected count < 1: {expected['less_than_one']} (~{expected['approx']:.4g})")
    return 0 if rep.passed else 1


def cmd_verify(args, _cfg) -> int:
    try:
        cert = Certificate.from_json(Path(args.certificate).read_text(encoding="utf-8"))
        g = read_graph(args.graph)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    h = None
    if "masks" in cert.data["k4_free"] and cert.data.get("q"):
        _, _, _, base = build_stack(cert.data["q"])
        h = randomize(base, cert.data["seeds"]["randomize"])
    rep = reverify(cert, g, h, timeout=args.timeout)
    for c in rep.checks:
        if c.passed:
            print(f"ok   {c.name}")
        else:
            detail = ", ".join(f"{k}={v}" for k, v in c.detail.items())
            label = "edge digest mismatch" if c.name == "edge_digest" else "mismatch"
            print(f"FAIL {c.name}: {label} ({detail})")
    return 0 if rep.passed else 1


def _seed(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _prime_power(text: str) -> int:
    try:
        q = int(text)
        prime_power(q)
    except (ValueError, ArithmeticError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime power") from exc
    return q


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermitian-ramsey", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_q=True):
        if need_q:
            p.add_argument("--q", type=_prime_power, required=True)
        p.add_argument("--seed", type=_seed, default=None, help="64-bit seed, decimal or 0x hex")
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--profile", choices=("desk", "asymptotic"))
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--timeout", type=float, default=None, help="seconds for exact solvers")

    p = sub.add_parser("build", help="field, plane, unital and H_q with dumps and a base report")
    common(p)
    p.add_argument("--skip-edges", action="store_true", help="do not write graph.edges")
    p.add_argument("--srg", action="store_true", help="also check common-neighbour counts")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("randomize", help="H_q* export and K4 report")
    common(p)
    p.add_argument("--skip-edges", action="store_true")
    p.set_defaults(func=cmd_randomize)

    p = sub.add_parser("audit", help="edge density audit of random vertex subsets of H_q*")
    common(p)
    p.add_argument("--sizes", type=int, nargs="+")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("witness", help="sampled K4-free witness and certificate")
    common(p)
    p.add_argument("--p", type=float, default=None, help="sampling probability (default ln^2 q / q)")
    p.add_argument("--t", type=int, default=None, help="independent set size to exclude (default alpha+1)")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("blowup", help="multicolour blowup of a base graph with a colouring report")
    common(p, need_q=False)
    p.add_argument("--base", type=Path, required=True, help="edge file of the base graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, default=None, help="s in the expected-count expression")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("verify", help="re-verify an exported certificate against a graph file")
    p.add_argument("certificate")
    p.add_argument("graph")
    p.add_argument("--timeout", type=float, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = None
    if args.command != "verify":
        try:
            cfg = RunConfig.load(getattr(args, "config", None), q=getattr(args, "q", None),
                                 master_seed=args.seed, profile=args.profile, output_dir=args.out)
        except (OSError, ValueError, TypeError) as exc:
            parser.error(str(exc))
        if args.command == "blowup" and getattr(args, "k", 3) < 2:
            parser.error("--k must be at least 2")
    return args.func(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
