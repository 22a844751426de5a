"""Command-line interface.

The CLI is a thin client over the HTTP service: every command builds a
request, posts it to the app (in-process by default, or a remote server
via --url), and renders the JSON response as json, csv, or a plain
table.  Exit codes: 0 success, 2 parse error, 3 budget refusal,
4 precondition violation, 1 anything else.
"""

from __future__ import annotations

import argparse
import csv as csv_mod
import io
import json
import sys

_EXIT_BY_KIND = {"parse": 2, "budget": 3, "precondition": 4}


def _client(url: str | None):
    if url:
        import httpx

        return httpx.Client(base_url=url)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _emit_error(detail) -> int:
    if isinstance(detail, dict):
        kind = detail.get("kind", "error")
        msg = detail.get("message", str(detail))
        if "line" in detail and not str(msg).startswith("line "):
            msg = f"line {detail['line']}: {msg}"
        print(f"error ({kind}): {msg}", file=sys.stderr)
        return _EXIT_BY_KIND.get(kind, 1)
    print(f"error: {detail}", file=sys.stderr)
    return 1


def _post(args, path: str, payload: dict):
    with _client(args.url) as client:
        resp = client.post(path, json=payload)
    if resp.status_code == 200:
        return resp.json(), 0
    try:
        body = resp.json()
    except ValueError:
        return None, _emit_error(resp.text)
    detail = body.get("detail")
    if resp.status_code == 422:
        # request model validation: a malformed request is a parse error
        msg = "; ".join(
            f"{'.'.join(str(p) for p in e.get('loc', []))}: {e.get('msg')}"
            for e in detail
        ) if isinstance(detail, list) else str(detail)
        return None, _emit_error({"kind": "parse", "message": msg})
    return None, _emit_error(detail)


def _rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv_mod.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _render_table(data: dict, skip=("csv",)) -> str:
    lines = []
    for key in sorted(data):
        if key in skip:
            continue
        val = data[key]
        if isinstance(val, dict):
            lines.append(f"{key}:")
            for k2 in sorted(val, key=lambda x: (len(str(x)), str(x))):
                lines.append(f"  {k2}: {val[k2]}")
        elif isinstance(val, list):
            lines.append(f"{key}: {json.dumps(val)}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def _render(args, data: dict, csv_text: str | None = None) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif args.format == "csv":
        if csv_text is None:
            csv_field = data.get("csv")
            if isinstance(csv_field, list):
                csv_text = _rows_to_csv(csv_field)
            elif isinstance(csv_field, str):
                csv_text = csv_field
            else:
                csv_text = _rows_to_csv(
                    [[k, json.dumps(v)] for k, v in sorted(data.items())]
                )
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write(_render_table(data))


def _read_file(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


# -- commands ---------------------------------------------------------------


def cmd_distribution(args) -> int:
    payload = {
        "graph_text": _read_file(args.graph_file),
        "k": args.k,
        "threads": args.threads,
    }
    if args.ell is not None:
        payload["ell"] = args.ell
    if args.mc is not None:
        payload["mc_trials"] = args.mc
    if args.seed is not None:
        payload["seed"] = args.seed
    if args.budget is not None:
        payload["budget"] = args.budget
    data, code = _post(args, "/v1/distribution", payload)
    if code:
        return code
    _render(args, data, csv_text=data.get("csv"))
    return 0


def cmd_coeffs(args) -> int:
    payload = {"graph_text": _read_file(args.graph_file)}
    if args.sigma is not None:
        tokens = _read_file(args.sigma).split()
        try:
            payload["sigma"] = [int(t) for t in tokens]
        except ValueError:
            return _emit_error({"kind": "parse", "message": "sigma file must contain integers"})
    elif args.seed is not None:
        payload["seed"] = args.seed
    data, code = _post(args, "/v1/coeffs", payload)
    if code:
        return code
    rows = [["indices", "value", "display_value"]] + [
        ["-".join(map(str, c["indices"])), c["value"], c["display_value"]]
        for c in data["coefficients"]
    ]
    _render(args, data, csv_text=_rows_to_csv(rows))
    return 0


def cmd_classify(args) -> int:
    payload = {"graph_text": _read_file(args.graph_file), "seed": args.seed or 0}
    data, code = _post(args, "/v1/classify", payload)
    if code:
        return code
    rows = [["field", "value"]] + [[k, json.dumps(v)] for k, v in sorted(data.items())]
    _render(args, data, csv_text=_rows_to_csv(rows))
    return 0


def cmd_experiment(args) -> int:
    try:
        config = json.loads(_read_file(args.config))
    except json.JSONDecodeError as exc:
        return _emit_error({"kind": "parse", "message": f"config: {exc}"})
    if args.seed is not None:
        config["seed"] = args.seed
    data, code = _post(args, "/v1/experiment", {"name": args.name, "config": config})
    if code:
        return code
    _render(args, data)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("anticonc.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anticonc",
        description="Induced-edge-count distributions, coupling coefficients, "
        "structure recognition, and pattern experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_help="random seed (echoed in output)"):
        p.add_argument("--format", choices=["json", "csv", "table"], default="json")
        p.add_argument("--url", default=None, help="remote service URL (default: in-process)")
        p.add_argument("--seed", type=int, default=None, help=seed_help)

    p = sub.add_parser("distribution", help="law of the induced edge count")
    p.add_argument("graph_file")
    p.add_argument("k", type=int)
    p.add_argument("--ell", type=int, default=None, help="report one point probability")
    p.add_argument("--mc", type=int, default=None, help="Monte-Carlo trials instead of exact")
    p.add_argument("--threads", type=int, choices=[1, 4], default=1)
    p.add_argument("--budget", type=int, default=None, help="override enumeration caps")
    common(p)
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("coeffs", help="coupling coefficients and rank certificate")
    p.add_argument("graph_file")
    p.add_argument("--sigma", default=None, help="file with an explicit permutation")
    common(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("classify", help="two-sided structure recognition")
    p.add_argument("graph_file")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", help="run a named experiment from a config file")
    p.add_argument("name")
    p.add_argument("config", help="JSON config file")
    p.add_argument("--threads", type=int, choices=[1, 4], default=1,
                   help="worker cap (results are thread-count independent)")
    common(p, seed_help="override the config seed")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
