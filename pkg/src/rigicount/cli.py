"""Command-line front end: rigidity tests, counting, and certificates.

Reports are emitted as JSON on stdout; logs never mix into the primary
stream.  Identical commands with identical seeds produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .certificates import (
    Certificate,
    HypothesisNotEstablished,
    certify_sphere_bound,
    check_spanning_divisibility,
    check_subgraph_divisibility,
    greedy_augment,
    verify_certificate,
    verify_operation_effect,
)
from .config import RunConfig, threads_from_env
from .engine import CountDisagreement, ExcessiveFailures, count_complex, count_real_samples
from .graphs import GraphFormatError, parse_graph, parse_triangulation
from .rigidity import DEFAULT_SEED, NotRigid, rigidity_report

EXIT_OK = 0
EXIT_FLEXIBLE = 1
EXIT_ERROR = 2


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fail(reason: str, detail: str, out: str | None) -> int:
    _emit({"error": reason, "detail": detail}, out)
    return EXIT_ERROR


def _read_graph(path: str):
    try:
        return parse_graph(Path(path).read_text())
    except (OSError, GraphFormatError, json.JSONDecodeError) as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        seed=args.seed,
        threads=args.threads if args.threads else threads_from_env(1),
    )
    if getattr(args, "path_cap", None):
        cfg = cfg.with_(path_cap=args.path_cap)
    if getattr(args, "samples", None):
        cfg = cfg.with_(samples=args.samples)
    return cfg


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, required=True, help="ambient dimension")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed")
    p.add_argument("--threads", type=int, default=0,
                   help="worker threads (default: RIGIDITY_THREADS or 1)")
    p.add_argument("--path-cap", type=int, default=None, help="max equations k (2^k paths)")
    p.add_argument("--json", action="store_true", help="JSON output (always on; accepted for compatibility)")
    p.add_argument("--out", default=None, help="write the report to a file instead of stdout")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="rigicount",
                                     description="realisation counting and rigidity certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rigid = sub.add_parser("rigid", help="test d-rigidity of a graph")
    p_rigid.add_argument("graph", help="edge-list or JSON graph file")
    _add_common(p_rigid)

    p_count = sub.add_parser("count", help="complex/real realisation counting")
    p_count.add_argument("graph")
    p_count.add_argument("--real-samples", type=int, default=0,
                         help="count real solutions over this many samples")
    p_count.add_argument("--samples", type=int, default=None, help="alias for --real-samples")
    _add_common(p_count)

    p_cert = sub.add_parser("certify", help="emit or recheck certificates")
    cert_sub = p_cert.add_subparsers(dest="certify_command", required=True)

    p_sphere = cert_sub.add_parser("sphere", help="triangulated-sphere lower bound")
    p_sphere.add_argument("faces", help="JSON file with a 'faces' field")
    _add_common(p_sphere)

    p_div = cert_sub.add_parser("divides", help="divisibility certificates")
    p_div.add_argument("--g", required=True, help="host graph file")
    p_div.add_argument("--h", required=True, help="subgraph file (spanning or smaller)")
    p_div.add_argument("--subgraph-vertices", default=None,
                       help="comma-separated host vertices of the subgraph (non-spanning mode)")
    _add_common(p_div)

    p_aug = cert_sub.add_parser("augment", help="global-rigidity augmentation bound")
    p_aug.add_argument("graph")
    p_aug.add_argument("--budget", type=int, default=None)
    _add_common(p_aug)

    p_op = cert_sub.add_parser("operation", help="operation-effect certificate")
    p_op.add_argument("--kind", required=True,
                      choices=["zero-extension", "one-extension", "vertex-split",
                               "spider-split", "x-replacement", "v-replacement"])
    p_op.add_argument("--graph", required=True, help="input graph file")
    p_op.add_argument("--params", required=True,
                      help="JSON object with the step parameters")
    _add_common(p_op)

    p_ver = cert_sub.add_parser("verify", help="recheck a certificate file end-to-end")
    p_ver.add_argument("certificate")
    p_ver.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except NotRigid as exc:
        return _fail("not-rigid", str(exc), getattr(args, "out", None))
    except HypothesisNotEstablished as exc:
        return _fail("hypothesis-not-established", str(exc), getattr(args, "out", None))
    except CountDisagreement as exc:
        return _fail("count-disagreement", str(exc), getattr(args, "out", None))
    except ExcessiveFailures as exc:
        return _fail("excessive-failures", str(exc), getattr(args, "out", None))
    except (GraphFormatError, ValueError) as exc:
        return _fail("bad-input", str(exc), getattr(args, "out", None))


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "rigid":
        g = _read_graph(args.graph)
        report = rigidity_report(g, args.d, args.seed)
        _emit(report, args.out)
        return EXIT_OK if report["rigid"] else EXIT_FLEXIBLE

    if args.command == "count":
        g = _read_graph(args.graph)
        cfg = _config_from_args(args)
        real_samples = args.real_samples or (args.samples or 0)
        if real_samples:
            result = count_real_samples(g, args.d, real_samples, cfg)
        else:
            result = count_complex(g, args.d, cfg)
        _emit(result.to_json(), args.out)
        return EXIT_OK

    if args.command == "certify":
        return _dispatch_certify(args)
    raise ValueError(f"unknown command {args.command!r}")


def _dispatch_certify(args: argparse.Namespace) -> int:
    if args.certify_command == "verify":
        doc = json.loads(Path(args.certificate).read_text())
        fresh = verify_certificate(doc)
        match = fresh.verdict == doc.get("verdict")
        _emit({"recheck": fresh.to_json(), "matches_recorded_verdict": match}, args.out)
        return EXIT_OK if match and fresh.verdict == "verified" else EXIT_FLEXIBLE

    cfg = _config_from_args(args)
    if args.certify_command == "sphere":
        t = parse_triangulation(Path(args.faces).read_text())
        cert = certify_sphere_bound(t, cfg)
    elif args.certify_command == "divides":
        g = _read_graph(args.g)
        h = _read_graph(args.h)
        if args.subgraph_vertices:
            vertices = [int(v) for v in args.subgraph_vertices.split(",")]
            cert = check_subgraph_divisibility(g, vertices, h.edges, args.d, cfg)
        else:
            cert = check_spanning_divisibility(g, h, args.d, cfg)
    elif args.certify_command == "augment":
        g = _read_graph(args.graph)
        cert = greedy_augment(g, args.d, args.budget, cfg)
    elif args.certify_command == "operation":
        g = _read_graph(args.graph)
        params = json.loads(args.params)
        cert = _run_operation(g, args.kind, params, args.d, cfg)
    else:
        raise ValueError(f"unknown certify subcommand {args.certify_command!r}")
    _emit(cert.to_json(), args.out)
    return EXIT_OK if cert.verdict == "verified" else EXIT_FLEXIBLE


def _run_operation(g, kind: str, params: dict, d: int, cfg: RunConfig) -> Certificate:
    from . import operations as ops

    if kind == "zero-extension":
        out, step = ops.zero_extension(g, d, params["neighbors"])
    elif kind == "one-extension":
        out, step = ops.one_extension(g, d, params["removed_edge"], params.get("extra", []))
    elif kind == "vertex-split":
        out, step = ops.vertex_split(g, d, params["vertex"], params["n1"], params["n2"], params["w"])
    elif kind == "spider-split":
        out, step = ops.spider_split(g, d, params["vertex"], params["n1"], params["n2"], params["w"])
    elif kind in ("x-replacement", "v-replacement"):
        out, step = ops.xv_replacement(
            g, kind[0].upper(), params["e1"], params["e2"], params.get("extra", []), d
        )
    else:
        raise ValueError(f"unknown operation kind {kind!r}")
    return verify_operation_effect(step, g, out, d, cfg)


if __name__ == "__main__":
    sys.exit(main())
