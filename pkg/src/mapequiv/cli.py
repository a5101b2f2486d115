"""Command-line front end; a thin client of the HTTP API.

By default every invocation is served by an in-process instance of the API,
so no server needs to be running; --server http://host:port posts the same
requests to a remote instance instead.  Exit codes for equiv/witness:
0 = equivalent, 1 = not equivalent, 2 = usage or data error, 3 = the brute
force oracle disagreed with the decision (invariant breach).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx


class CliError(Exception):
    """Usage or data error; reported on stderr with exit code 2."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapequiv",
        description="Decide equivalence of sampled vector-valued maps under matrix groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", metavar="URL",
                        help="send requests to a running service instead of in-process")
    common.add_argument("--json", action="store_true", dest="as_json",
                        help="emit the machine-readable JSON report")
    common.add_argument("--seed", type=int, default=0, metavar="S",
                        help="seed for randomized checks (current subcommands are deterministic)")
    common.add_argument("--field", metavar="SPEC",
                        help="CSV only: rational | prime:P | approx:EPS")
    common.add_argument("--dim", type=int, metavar="N", help="CSV only: vector dimension")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", parents=[common], help="rank of a map")
    p.add_argument("map", metavar="MAP")

    p = sub.add_parser("signature", parents=[common], help="invariant signature of a map")
    p.add_argument("map", metavar="MAP")
    p.add_argument("--base", metavar="K1,K2,...", help="explicit base keys, order significant")

    p = sub.add_parser("canonical", parents=[common], help="canonical representative of a map")
    p.add_argument("map", metavar="MAP")
    p.add_argument("--group", choices=["gl", "sl"], default="gl")
    p.add_argument("--base", metavar="K1,K2,...")

    for name in ("equiv", "witness"):
        p = sub.add_parser(name, parents=[common],
                           help="decide equivalence of two maps" if name == "equiv"
                           else "print a witness transformation for two equivalent maps")
        p.add_argument("left", metavar="MAP1")
        p.add_argument("right", metavar="MAP2")
        p.add_argument("--group", choices=["gl", "sl", "aff-gl", "aff-sl"], default="gl")
        p.add_argument("--base", metavar="K1,K2,...")
        p.add_argument("--anchor", metavar="KEY",
                       help="anchor sample for affine differencing (default: least key)")
        if name == "equiv":
            p.add_argument("--oracle", action="store_true",
                           help="cross-check against brute force (prime fields only)")

    p = sub.add_parser("invariants", parents=[common],
                       help="evaluate the invariant-field generators at a map")
    p.add_argument("map", metavar="MAP")
    p.add_argument("--group", choices=["gl", "sl"], default="gl")
    p.add_argument("--base", metavar="K1,K2,...")

    return parser


def _dataset_payload(path_text: str, args) -> dict:
    path = Path(path_text)
    try:
        text = path.read_text()
    except OSError as e:
        raise CliError(f"cannot read {path_text}: {e}") from None
    suffix = path.suffix.lower()
    if suffix == ".json" or (suffix != ".csv" and text.lstrip()[:1] == "{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise CliError(f"{path_text}: invalid JSON: {e}") from None
        return {"dataset": obj}
    if args.field is None or args.dim is None:
        raise CliError(f"{path_text}: CSV input needs --field and --dim")
    return {"csv": text, "field": args.field, "dim": args.dim}


async def _post_async(server: str | None, endpoint: str, payload: dict):
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=60.0) as client:
            response = await client.post(endpoint, json=payload)
    else:
        from .service import app
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://mapequiv.internal") as client:
            response = await client.post(endpoint, json=payload)
    return response.status_code, response.json()


def _post(server: str | None, endpoint: str, payload: dict) -> dict:
    try:
        status, body = asyncio.run(_post_async(server, endpoint, payload))
    except httpx.HTTPError as e:
        raise CliError(f"request failed: {e}") from None
    if status != 200:
        detail = body.get("detail", body) if isinstance(body, dict) else body
        raise CliError(f"{detail}")
    return body


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _format_matrix_lines(g: list[list[str]]) -> list[str]:
    return ["[" + ", ".join(row) + "]" for row in g]


def _print_witness(witness: dict) -> None:
    print("g =")
    for line in _format_matrix_lines(witness["g"]):
        print("  " + line)
    if witness.get("translation") is not None:
        print("translation = [" + ", ".join(witness["translation"]) + "]")


def _cmd_rank(args) -> int:
    body = _post(args.server, "/rank", {"dataset": _dataset_payload(args.map, args)})
    if args.as_json:
        _emit_json(body)
    else:
        print(body["rank"])
    return 0


def _key_text(rec: dict) -> str:
    return rec["t"] if rec.get("s") is None else f"{rec['s']}:{rec['t']}"


def _cmd_signature(args) -> int:
    payload = {"dataset": _dataset_payload(args.map, args), "base": _split_base(args.base)}
    body = _post(args.server, "/signature", payload)
    if args.as_json:
        _emit_json(body)
        return 0
    print(f"k = {body['k']}")
    print("base = " + ", ".join(_key_text(rec) for rec in body["base"]))
    for rec in body["coords"]:
        print(f"alpha[{_key_text(rec)}] = [" + ", ".join(rec["alpha"]) + "]")
    return 0


def _cmd_canonical(args) -> int:
    payload = {"dataset": _dataset_payload(args.map, args), "group": args.group,
               "base": _split_base(args.base)}
    body = _post(args.server, "/canonical", payload)
    _emit_json(body)  # the canonical map is itself a dataset file
    return 0


def _split_base(text: str | None):
    return None if text is None else [part.strip() for part in text.split(",")]


def _cmd_equiv(args, want_witness_only: bool) -> int:
    payload = {
        "left": _dataset_payload(args.left, args),
        "right": _dataset_payload(args.right, args),
        "group": args.group,
        "base": _split_base(args.base),
        "anchor": args.anchor,
        "oracle": getattr(args, "oracle", False),
    }
    body = _post(args.server, "/equiv", payload)
    oracle = body.get("oracle")
    disagreement = oracle is not None and not oracle["agrees"]

    if want_witness_only:
        if not body["equivalent"]:
            print(f"not equivalent ({body['reason']})", file=sys.stderr)
            return 1
        if args.as_json:
            _emit_json(body["witness"])
        else:
            _print_witness(body["witness"])
        return 0

    if args.as_json:
        report = {"equivalent": body["equivalent"], "reason": body["reason"],
                  "witness": body["witness"]}
        if oracle is not None:
            report["oracle"] = oracle
        _emit_json(report)
    else:
        if body["equivalent"]:
            print("equivalent")
            _print_witness(body["witness"])
        else:
            print(f"not equivalent ({body['reason']})")
        if oracle is not None and not disagreement:
            verdict = "equivalent" if oracle["equivalent"] else "not equivalent"
            print(f"oracle agrees (brute force: {verdict})")
    if disagreement:
        print("ORACLE DISAGREEMENT: brute force says "
              f"{'equivalent' if oracle['equivalent'] else 'not equivalent'}, "
              f"decision says {'equivalent' if body['equivalent'] else 'not equivalent'}",
              file=sys.stderr)
        return 3
    return 0 if body["equivalent"] else 1


def _cmd_invariants(args) -> int:
    payload = {"dataset": _dataset_payload(args.map, args), "group": args.group,
               "base": _split_base(args.base)}
    body = _post(args.server, "/invariants", payload)
    if args.as_json:
        _emit_json(body)
    else:
        for gen in body["generators"]:
            print(f"{gen['label']} = {gen['value']}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "rank":
            return _cmd_rank(args)
        if args.command == "signature":
            return _cmd_signature(args)
        if args.command == "canonical":
            return _cmd_canonical(args)
        if args.command == "equiv":
            return _cmd_equiv(args, want_witness_only=False)
        if args.command == "witness":
            return _cmd_equiv(args, want_witness_only=True)
        if args.command == "invariants":
            return _cmd_invariants(args)
        raise AssertionError(f"unhandled command {args.command}")
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
