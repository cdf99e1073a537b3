"""Command-line interface.

Every subcommand prints exactly one JSON record to stdout (sorted keys,
two-space indent) so repeated runs with the same inputs are byte-identical;
wall-clock timing goes to stderr. Exit codes: 0 for a passing run, 2 for a
determinate negative (hypothesis violated, certificate failed verification,
check failed, no witness), 1 for errors.

Inputs are distance-matrix CSVs (mesh width from --mesh-h or a sibling
<name>.meta.json), graph JSONs with an "edges" list, or generator specs
(JSON objects with a "kind" field). The output directory is --out-dir
unless the WIDTHLAB_OUT environment variable is set, which takes
precedence. A --config file with flat `key = value` lines fills in long
options that were left unset; explicit flags win.
"""

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from ._kernels import kernel_backend
from .coarea import coarea_check
from .complexes import WidthCertificate, verify_certificate
from .content import UNRESTRICTED, exact_content, greedy_content
from .decomposer import (
    check_boundary_condition,
    check_hypothesis,
    decompose,
    decompose_chunked,
)
from .errors import CertificateError, HypothesisError, WidthlabError
from .metric_core import (
    read_distance_csv,
    read_graph_json,
    write_distance_csv,
)
from .planar_audit import (
    audit_drawing,
    is_simple_arc,
    k5_trees_construction,
    load_drawing,
    make_pentagon_drawing,
    make_random_drawing,
    simplify_to_simple_arc,
)
from .separator import minimal_separator
from .spaces import GeneratorSpec, generate


def parse_flat_config(text):
    """Parse flat `key = value` lines: quoted strings, numbers, booleans."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise WidthlabError(f"config line {lineno}: expected key = value")
        key, _, val = (s.strip() for s in line.partition("="))
        if not key:
            raise WidthlabError(f"config line {lineno}: empty key")
        if len(val) >= 2 and val[0] == val[-1] == '"':
            out[key] = val[1:-1]
        elif val in ("true", "false"):
            out[key] = val == "true"
        else:
            try:
                out[key] = int(val)
            except ValueError:
                try:
                    out[key] = float(val)
                except ValueError:
                    raise WidthlabError(
                        f"config line {lineno}: cannot parse value {val!r}"
                    ) from None
    return out


def _sha256(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_space(path, mesh_h=None):
    """Load a metric space from csv / graph json / generator-spec json."""
    info = {"path": path, "sha256": _sha256(path)}
    if path.endswith(".csv"):
        if mesh_h is None:
            meta_path = path[:-4] + ".meta.json"
            if not os.path.exists(meta_path):
                raise WidthlabError(
                    f"no mesh width for {path}: pass --mesh-h or provide "
                    f"{meta_path}"
                )
            with open(meta_path) as fh:
                mesh_h = float(json.load(fh)["mesh_h"])
        space = read_distance_csv(path, mesh_h)
    else:
        with open(path) as fh:
            data = json.load(fh)
        if "kind" in data:
            space = generate(GeneratorSpec.from_json_dict(data))
            info["generator"] = data["kind"]
        elif "edges" in data:
            space, _ = read_graph_json(path)
        else:
            raise WidthlabError(
                f"{path}: JSON input needs a 'kind' or 'edges' field"
            )
    info["points"] = space.size
    info["mesh_h"] = space.mesh_h
    info["space_digest"] = space.digest()
    return space, info


def _out_dir(args):
    d = os.environ.get("WIDTHLAB_OUT") or getattr(args, "out_dir", None) or "."
    os.makedirs(d, exist_ok=True)
    return d


def _out_path(args, name):
    if os.path.isabs(name):
        return name
    return os.path.join(_out_dir(args), name)


def _emit(record):
    sys.stdout.write(json.dumps(record, sort_keys=True, indent=2) + "\n")


def _parse_zeta(text):
    if text in ("inf", "unrestricted"):
        return UNRESTRICTED
    return float(text)


def _parse_points(text, size):
    if text == "all":
        return np.arange(size, dtype=np.int64)
    return np.asarray([int(t) for t in text.split(",")], dtype=np.int64)


def _write_json(path, data):
    with open(path, "w") as fh:
        fh.write(json.dumps(data, sort_keys=True, indent=2) + "\n")


def _cmd_gen(args):
    with open(args.spec) as fh:
        data = json.load(fh)
    space = generate(GeneratorSpec.from_json_dict(data))
    out_csv = _out_path(args, args.out)
    write_distance_csv(out_csv, space)
    _write_json(out_csv[:-4] + ".meta.json" if out_csv.endswith(".csv")
                else out_csv + ".meta.json",
                {"mesh_h": space.mesh_h, "kind": data["kind"]})
    _emit({
        "command": "gen",
        "spec": data,
        "out": out_csv,
        "points": space.size,
        "mesh_h": space.mesh_h,
        "space_digest": space.digest(),
        "backend": kernel_backend(),
    })
    return 0


def _cmd_content(args):
    space, info = _load_space(args.input, args.mesh_h)
    target = _parse_points(args.target, space.size)
    zeta = _parse_zeta(args.zeta)
    if args.method == "exact":
        est = exact_content(space, target, args.n, zeta, budget=args.budget)
    else:
        est = greedy_content(space, target, args.n, zeta)
    _emit({
        "command": "content",
        "input": info,
        "params": {"n": args.n, "zeta": args.zeta, "method": args.method,
                   "target_size": int(target.size)},
        "estimate": est.to_json_dict(),
        "backend": kernel_backend(),
    })
    return 0


def _cmd_coarea_check(args):
    space, info = _load_space(args.input, args.mesh_h)
    report = coarea_check(
        space, _parse_points(args.target, space.size), args.center,
        args.r1, args.r2, args.n, _parse_zeta(args.zeta),
        shell_width=args.shell_width, method=args.method,
    )
    _emit({
        "command": "coarea-check",
        "input": info,
        "report": report.to_json_dict(),
        "backend": kernel_backend(),
    })
    return 0 if report.passed else 2


def _cmd_separate(args):
    space, info = _load_space(args.input, args.mesh_h)
    result = minimal_separator(
        space, args.D, args.n,
        zeta=None if args.zeta is None else _parse_zeta(args.zeta),
        delta=args.delta, move_budget=args.move_budget,
        exhaustive_limit=args.exhaustive_limit,
    )
    record = result.to_json_dict()
    if args.out is not None:
        _write_json(_out_path(args, args.out), record)
    _emit({
        "command": "separate",
        "input": info,
        "params": {"D": args.D, "n": args.n, "delta": args.delta},
        "result": record,
        "backend": kernel_backend(),
    })
    return 0


def _run_decompose(args, fn, command):
    space, info = _load_space(args.input, args.mesh_h)
    try:
        cert = fn(space, args.n, args.R, force=args.force,
                  eps_scale=args.eps_scale)
    except HypothesisError as exc:
        _emit({
            "command": command,
            "input": info,
            "params": {"n": args.n, "R": args.R, "force": args.force,
                       "eps_scale": args.eps_scale},
            "outcome": "hypothesis_violated",
            "message": str(exc),
            "hypothesis": exc.report.to_json_dict() if exc.report else None,
            "backend": kernel_backend(),
        })
        return 2
    report = verify_certificate(space, cert)
    if args.cert is not None:
        _write_json(_out_path(args, args.cert), cert.to_json_dict())
    hyp_failed = bool(cert.meta.get("any_hypothesis_failed"))
    _emit({
        "command": command,
        "input": info,
        "params": {"n": args.n, "R": args.R, "force": args.force,
                   "eps_scale": args.eps_scale},
        "outcome": (
            "certified" if report.ok and not hyp_failed
            else "forced_certificate_verified" if report.ok
            else "verification_failed"
        ),
        "claimed_R": cert.claimed_R,
        "complex": {
            "dimension": cert.complex.dimension,
            "simplices": len(cert.complex.simplices),
            "vertices": len(cert.complex.vertices),
        },
        "fibers": len(cert.fibers()),
        "verify": report.to_json_dict(),
        "meta": cert.meta,
        "backend": kernel_backend(),
    })
    return 0 if report.ok and not hyp_failed else 2


def _cmd_decompose(args):
    return _run_decompose(args, decompose, "decompose")


def _cmd_decompose_chunked(args):
    return _run_decompose(args, decompose_chunked, "decompose-chunked")


def _cmd_boundary_check(args):
    space, info = _load_space(args.input, args.mesh_h)
    report = check_boundary_condition(
        space, args.x, args.R, args.n, eps_scale=args.eps_scale
    )
    _emit({
        "command": "boundary-check",
        "input": info,
        "report": report.to_json_dict(),
        "backend": kernel_backend(),
    })
    return 0 if report.passed else 2


def _cmd_verify(args):
    space, info = _load_space(args.input, args.mesh_h)
    with open(args.cert) as fh:
        cert = WidthCertificate.from_json_dict(json.load(fh))
    report = verify_certificate(space, cert)
    _emit({
        "command": "verify",
        "input": info,
        "cert": {"path": args.cert, "sha256": _sha256(args.cert),
                 "claimed_R": cert.claimed_R, "n": cert.n},
        "report": report.to_json_dict(),
        "backend": kernel_backend(),
    })
    return 0 if report.ok else 2


def _get_drawing(source):
    if source == "pentagon":
        return make_pentagon_drawing()
    if source.startswith("random:"):
        return make_random_drawing(int(source.split(":", 1)[1]))
    return load_drawing(source)


def _cmd_k5_audit(args):
    drawing = _get_drawing(args.drawing)
    report = audit_drawing(drawing, args.R, tol=args.tol)
    record = {
        "command": "k5-audit",
        "drawing": args.drawing,
        "params": {"R": args.R, "tol": args.tol},
        "report": report.to_json_dict(),
        "backend": kernel_backend(),
    }
    if args.trees:
        record["trees"] = k5_trees_construction(drawing, args.R).to_json_dict()
    if args.simplify:
        simple = {}
        for (u, v), path in zip(drawing.edges, drawing.paths):
            arc = simplify_to_simple_arc(path)
            simple[f"{u}-{v}"] = {
                "points": [[float(x), float(y)] for x, y in arc],
                "was_simple": is_simple_arc(path),
                "is_simple": is_simple_arc(arc),
            }
        record["simplified"] = simple
    _emit(record)
    return 0 if report.passed else 2


def _cmd_sweep(args):
    space, info = _load_space(args.input, args.mesh_h)
    radii = [float(t) for t in args.radii.split(",")]
    scales = [float(t) for t in args.eps_scales.split(",")]
    rows = []
    for R in radii:
        for scale in scales:
            hyp = check_hypothesis(space, args.n, R, eps_scale=scale,
                                   enforce_floor=not args.no_floor)
            rows.append({
                "R": R,
                "eps_scale": scale,
                "threshold": hyp.threshold,
                "worst_value": hyp.worst_value,
                "worst_x": hyp.worst_x,
                "failures": int(hyp.failures.size),
                "passed": bool(hyp.passed),
            })
    csv_path = _out_path(args, args.csv)
    cols = ["R", "eps_scale", "threshold", "worst_value", "worst_x",
            "failures", "passed"]

    def cell(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return repr(v)
        return str(v)

    with open(csv_path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(cell(row[c]) for c in cols) + "\n")
    _emit({
        "command": "sweep",
        "input": info,
        "params": {"n": args.n, "radii": radii, "eps_scales": scales},
        "rows": rows,
        "csv": csv_path,
        "backend": kernel_backend(),
    })
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="widthlab",
        description="Content estimates, separating sets, and width "
                    "certificates on finite metric spaces.",
    )
    parser.add_argument("--config", help="flat key = value defaults file")
    parser.add_argument("--out-dir", default=None,
                        help="artifact directory (WIDTHLAB_OUT wins)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("gen", _cmd_gen, help="generate a benchmark space")
    p.add_argument("spec", help="generator-spec JSON file")
    p.add_argument("--out", required=True, help="output distance CSV name")

    def space_args(p):
        p.add_argument("input", help="distance CSV / graph or spec JSON")
        p.add_argument("--mesh-h", type=float, default=None)

    p = add("content", _cmd_content, help="estimate covering content")
    space_args(p)
    p.add_argument("--target", default="all")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zeta", default="inf")
    p.add_argument("--method", choices=["greedy", "exact"], default="greedy")
    p.add_argument("--budget", type=int, default=16)

    p = add("coarea-check", _cmd_coarea_check,
            help="compare sliced content against the bulk bound")
    space_args(p)
    p.add_argument("--target", default="all")
    p.add_argument("--center", type=int, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zeta", required=True)
    p.add_argument("--shell-width", type=float, default=None)
    p.add_argument("--method", choices=["greedy", "exact"], default="greedy")

    p = add("separate", _cmd_separate, help="build a delta-minimal separator")
    space_args(p)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zeta", default=None)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--move-budget", type=int, default=None)
    p.add_argument("--exhaustive-limit", type=int, default=10)
    p.add_argument("--out", default=None, help="write result JSON here")

    def decompose_args(p):
        space_args(p)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--R", type=float, required=True)
        p.add_argument("--force", action="store_true",
                       help="build even when the content hypothesis fails")
        p.add_argument("--eps-scale", type=float, default=1.0)
        p.add_argument("--cert", default=None, help="write certificate here")

    p = add("decompose", _cmd_decompose, help="build a width certificate")
    decompose_args(p)

    p = add("decompose-chunked", _cmd_decompose_chunked,
            help="width certificate via radial chunks")
    decompose_args(p)

    p = add("boundary-check", _cmd_boundary_check,
            help="content of a large ball's boundary shell")
    space_args(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps-scale", type=float, default=1.0)

    p = add("verify", _cmd_verify, help="re-check a width certificate")
    space_args(p)
    p.add_argument("--cert", required=True)

    p = add("k5-audit", _cmd_k5_audit,
            help="find far-apart points identified by a K5 drawing")
    p.add_argument("drawing",
                   help="drawing JSON, or 'pentagon', or 'random:<seed>'")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--tol", type=float, default=0.0)
    p.add_argument("--trees", action="store_true")
    p.add_argument("--simplify", action="store_true")

    p = add("sweep", _cmd_sweep, help="hypothesis threshold sweep")
    space_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radii", required=True, help="comma-separated R values")
    p.add_argument("--eps-scales", default="1,10,100,1000,1e4,1e5,1e6")
    p.add_argument("--csv", default="sweep.csv")
    p.add_argument("--no-floor", action="store_true",
                   help="skip the 100-mesh-width resolution floor")

    return parser


def _apply_config(parser, args):
    if not args.config:
        return args
    with open(args.config) as fh:
        cfg = parse_flat_config(fh.read())
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)
    return args


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config(parser, args)
    start = time.perf_counter()
    try:
        code = args.fn(args)
    except (HypothesisError, CertificateError) as exc:
        _emit({
            "command": args.command,
            "outcome": "failed_check",
            "error": type(exc).__name__,
            "message": str(exc),
        })
        code = 2
    except WidthlabError as exc:
        _emit({
            "command": args.command,
            "outcome": "error",
            "error": type(exc).__name__,
            "message": str(exc),
        })
        code = 1
    except (OSError, ValueError, KeyError) as exc:
        _emit({
            "command": args.command,
            "outcome": "error",
            "error": type(exc).__name__,
            "message": str(exc),
        })
        code = 1
    finally:
        sys.stderr.write(
            f"elapsed_s={time.perf_counter() - start:.3f}\n"
        )
    return code


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
