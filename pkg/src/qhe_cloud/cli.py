"""Command-line client.

    qhe-cloud add --scheme qotp --a 5 --b 3 [--endpoint URL|local]
    qhe-cloud serve --port 8080
    qhe-cloud bench --sweep key --scheme gsw --runs 5 --out gsw_key.csv

Exit codes: 0 ok, 1 service start-up failure, 2 bad arguments, 3 transport
failure, 4 validation or decryption failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import SCHEMES, HEError, ProtocolError, __version__
from . import bench, chen, cloudsvc, gsw, qotp
from .client import connect, default_endpoint

EXIT_STARTUP = 1
EXIT_USAGE = 2
EXIT_TRANSPORT = 3
EXIT_INVALID = 4


def _non_negative(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("summands must be non-negative")
    return value


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhe-cloud", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    add = sub.add_parser("add", help="add two integers through the encrypted cloud")
    add.add_argument("--scheme", choices=SCHEMES, required=True)
    add.add_argument("--a", type=_non_negative, required=True)
    add.add_argument("--b", type=_non_negative, required=True)
    add.add_argument("--endpoint", default=None,
                     help="service base URL, or 'local' for in-process (default: $QHE_CLOUD_ENDPOINT "
                          "or http://127.0.0.1:8080)")
    add.add_argument("--seed", type=int, default=None)
    add.add_argument("--gsw-k", type=int, default=gsw.DEFAULT_K)
    add.add_argument("--gsw-p", type=float, default=gsw.DEFAULT_NOISE)
    add.add_argument("--gsw-bound", type=int, default=None,
                     help=f"exclusive message bound (default: min({gsw.DEFAULT_BOUND}, q))")

    serve = sub.add_parser("serve", help="run the /process addition service")
    serve.add_argument("--port", type=int, default=None, help="default: $QHE_CLOUD_PORT or 8080")
    serve.add_argument("--host", default=None, help="default: $QHE_CLOUD_HOST or 127.0.0.1")
    serve.add_argument("--max-payload", type=int, default=4 * 1024 * 1024)

    b = sub.add_parser("bench", help="run input-size or key-size sweeps")
    b.add_argument("--sweep", choices=("input", "key"), required=True)
    b.add_argument("--scheme", choices=SCHEMES + ("all",), default="all")
    b.add_argument("--runs", type=int, default=5)
    b.add_argument("--out", required=True, help="CSV path; figures are written beside it")
    b.add_argument("--values", type=_int_list, default=None,
                   help="comma-separated widths (input) or k values (key)")
    b.add_argument("--endpoint", default="local")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--no-figures", action="store_true")
    b.add_argument("--no-memory", action="store_true", help="skip the traced allocation pass")
    return parser


def run_add(args) -> int:
    rng = np.random.default_rng(args.seed)
    cloud = connect(args.endpoint or default_endpoint())
    if args.scheme == "chen":
        if args.a >= 2**63 or args.b >= 2**63:
            raise ValueError("summands must be below 2**63")
        result = chen.he_add(args.a, args.b, chen.keygen(chen.SEGMENT_BITS, rng), cloud)
    elif args.scheme == "gsw":
        if args.gsw_bound is not None and args.a + args.b >= args.gsw_bound:
            raise gsw.MessageRangeError(f"{args.a} + {args.b} >= message bound {args.gsw_bound}")
        keys = gsw.keygen(args.gsw_k, rng, p=args.gsw_p, bound=args.gsw_bound)
        result = gsw.he_add(args.a, args.b, keys, cloud, rng)
    else:
        result = qotp.he_add(args.a, args.b, cloud, rng)
    print(result)
    return 0


def run_serve(args) -> int:
    overrides = {"max_payload_bytes": args.max_payload}
    if args.port is not None:
        overrides["port"] = args.port
    if args.host is not None:
        overrides["host"] = args.host
    config = cloudsvc.ServiceConfig(**overrides)
    cloudsvc.serve(config)
    return 0


def run_bench(args) -> int:
    schemes = SCHEMES if args.scheme == "all" else (args.scheme,)
    records = []
    for scheme in schemes:
        opts = dict(runs=args.runs, endpoint=args.endpoint, seed=args.seed, trace_memory=not args.no_memory)
        try:
            if args.sweep == "input":
                records += bench.sweep_input_sizes(scheme, args.values or bench.DEFAULT_WIDTHS, **opts)
            else:
                records += bench.sweep_key_sizes(scheme, args.values or bench.DEFAULT_KEY_SIZES, **opts)
        except ValueError as exc:
            # individual run failures become records; what escapes is bad arguments
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    count = bench.write_csv(records, args.out)
    print(f"wrote {count} rows to {args.out}")
    if not args.no_figures:
        from .report import render
        for path in render(records, args.out):
            print(f"wrote {path}")
    failed = sum(not r.ok for r in records)
    if failed:
        print(f"{failed} run(s) failed; see log", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"add": run_add, "serve": run_serve, "bench": run_bench}[args.command]
    try:
        return handler(args)
    except cloudsvc.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cloudsvc.StartupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STARTUP
    except ProtocolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except (HEError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
