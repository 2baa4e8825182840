"""Command line front end.

Subcommands: gen (write scenario set files), sync (in-memory reconciliation
of two set files), serve / connect (TCP reconciliation, reconciled set
written back to disk), bench (repeated runs with bound verdicts).  All
reports go to stdout as single-line JSON.

Exit codes: 0 success, 1 usage or input-file problems, 2 protocol or
transport failures.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys

from .errors import ConfigError, ProtocolError
from .harness import SCENARIO_KINDS, ScenarioSpec, bench, gen_scenario, simulate
from .items import DEFAULT_ITEM_WIDTH
from .protocol import Session, SessionConfig
from .schemes import SCHEME_NAMES
from .setfile import read_set_file, write_set_file
from .stores import make_store
from .wire import run_session

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PROTOCOL = 2

_SPLIT_FLAG_TO_STRATEGY = {"equal": "equal", "shift": "random_shift", "random": "random"}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for
    # protocol/transport failures, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_protocol_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scheme", choices=SCHEME_NAMES, default="xor256",
                        help="fingerprint scheme (default xor256)")
    parser.add_argument("--branching", type=int, default=2,
                        help="max subranges per split (default 2)")
    parser.add_argument("--threshold", type=int, default=1,
                        help="max items sent verbatim per range (default 1)")
    parser.add_argument("--split", choices=sorted(_SPLIT_FLAG_TO_STRATEGY), default="equal",
                        help="split strategy (default equal)")
    parser.add_argument("--max-shift", type=int, default=1,
                        help="rank shift amplitude for --split shift (default 1)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the randomized split strategies (default 0)")


def _config(args, item_width: int) -> SessionConfig:
    return SessionConfig(
        scheme=args.scheme,
        item_width=item_width,
        branching=args.branching,
        threshold=args.threshold,
        split_strategy=_SPLIT_FLAG_TO_STRATEGY[args.split],
        max_shift=args.max_shift,
        seed=args.seed,
    )


def _parse_addr(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not host:
        raise ConfigError(f"address must look like host:port, got {text!r}")
    try:
        return host, int(port)
    except ValueError:
        raise ConfigError(f"invalid port in {text!r}") from None


def _load_store(path: str, config: SessionConfig):
    width, items = read_set_file(path)
    if width != config.item_width:
        raise ConfigError(f"{path}: item width {width} does not match session width "
                          f"{config.item_width}")
    store = make_store(config.scheme, width)
    for item in items:
        store.insert(item)
    return store


def _emit(payload: dict) -> None:
    print(json.dumps(payload), flush=True)


def _cmd_gen(args) -> int:
    spec = ScenarioSpec(kind=args.kind, n=args.n, overlap=args.overlap,
                        seed=args.seed, item_width=args.item_width)
    side0, side1 = gen_scenario(spec)
    write_set_file(args.out0, side0, args.item_width)
    write_set_file(args.out1, side1, args.item_width)
    _emit({
        "kind": args.kind,
        "n": args.n,
        "out0": args.out0,
        "out1": args.out1,
        "size0": len(side0),
        "size1": len(side1),
        "n_delta": len(set(side0) ^ set(side1)),
    })
    return EXIT_OK


def _cmd_sync(args) -> int:
    width0, items0 = read_set_file(args.set0)
    width1, items1 = read_set_file(args.set1)
    if width0 != width1:
        raise ConfigError(f"set files disagree on item width: {width0} vs {width1}")
    config = _config(args, width0)
    store0, store1, stats = simulate(items0, items1, config)
    union = len(set(items0) | set(items1))
    _emit({**stats.to_dict(), "union_size": union,
           "size0": len(store0), "size1": len(store1)})
    return EXIT_OK if len(store0) == union == len(store1) else EXIT_PROTOCOL


def _cmd_serve(args) -> int:
    width, items = read_set_file(args.set)
    config = _config(args, width)
    host, port = _parse_addr(args.listen)
    server = socket.create_server((host, port))
    bound = server.getsockname()
    _emit({"listening": f"{bound[0]}:{bound[1]}"})
    try:
        while True:
            conn, _peer = server.accept()
            store = make_store(config.scheme, width)
            for item in items:
                store.insert(item)
            session = Session(store, config, "responder")
            with conn:
                with conn.makefile("rwb") as stream:
                    stats = run_session(stream, session)
            items = store.items()  # later sessions serve the reconciled set
            write_set_file(args.out or args.set, items, width)
            _emit({**stats.to_dict(), "set_size": len(items)})
            if args.once:
                return EXIT_OK
    finally:
        server.close()


def _cmd_connect(args) -> int:
    config = _config(args, read_set_file(args.set)[0])
    store = _load_store(args.set, config)
    session = Session(store, config, "initiator")
    host, port = _parse_addr(args.peer)
    with socket.create_connection((host, port)) as sock:
        with sock.makefile("rwb") as stream:
            stats = run_session(stream, session)
    items = store.items()
    write_set_file(args.out or args.set, items, config.item_width)
    _emit({**stats.to_dict(), "set_size": len(items)})
    return EXIT_OK


def _cmd_bench(args) -> int:
    spec = ScenarioSpec(kind=args.kind, n=args.n, overlap=args.overlap,
                        seed=args.seed, item_width=args.item_width)
    config = _config(args, args.item_width)
    report = bench(spec, config, repetitions=args.reps)
    _emit(report)
    ok = report["all_correct"] and report["round_bound_ok"] and report["volume_bound_ok"]
    return EXIT_OK if ok else EXIT_PROTOCOL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rangesync",
                     description="Range-fingerprint set reconciliation tool")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a scenario as two set files")
    gen.add_argument("--kind", choices=SCENARIO_KINDS, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--overlap", type=float, default=0.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--item-width", type=int, default=DEFAULT_ITEM_WIDTH)
    gen.add_argument("--out0", default="x0.set")
    gen.add_argument("--out1", default="x1.set")
    gen.set_defaults(func=_cmd_gen)

    sync = sub.add_parser("sync", help="reconcile two set files in memory")
    sync.add_argument("set0")
    sync.add_argument("set1")
    _add_protocol_flags(sync)
    sync.set_defaults(func=_cmd_sync)

    serve = sub.add_parser("serve", help="serve a set over TCP")
    serve.add_argument("--listen", default="127.0.0.1:0",
                       help="host:port to bind (port 0 picks a free port)")
    serve.add_argument("--set", required=True, help="set file to serve and update")
    serve.add_argument("--out", default=None, help="write result here instead of --set")
    serve.add_argument("--once", action="store_true", help="exit after one session")
    _add_protocol_flags(serve)
    serve.set_defaults(func=_cmd_serve)

    connect = sub.add_parser("connect", help="reconcile with a TCP peer")
    connect.add_argument("--peer", required=True, help="host:port of the server")
    connect.add_argument("--set", required=True, help="set file to reconcile and update")
    connect.add_argument("--out", default=None, help="write result here instead of --set")
    _add_protocol_flags(connect)
    connect.set_defaults(func=_cmd_connect)

    bench_p = sub.add_parser("bench", help="repeated simulation with bound checks")
    bench_p.add_argument("--kind", choices=SCENARIO_KINDS, required=True)
    bench_p.add_argument("--n", type=int, required=True)
    bench_p.add_argument("--overlap", type=float, default=0.0)
    bench_p.add_argument("--item-width", type=int, default=DEFAULT_ITEM_WIDTH)
    bench_p.add_argument("--reps", type=int, default=5)
    _add_protocol_flags(bench_p)
    bench_p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProtocolError, ConnectionError, TimeoutError, socket.gaierror) as exc:
        print(f"rangesync: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except (ConfigError, ValueError, OSError) as exc:
        print(f"rangesync: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_PROTOCOL


if __name__ == "__main__":
    sys.exit(main())
