"""Thin client CLI: reads a JSON config, calls the service (in-process by
default, or a remote instance via --server), and writes the artifact files.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 horizon too
short. Every output file carries a header with schema version, config echo,
and seed; reruns with the same config and seed are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import exit_code_for
from .walk_model import BACKENDS

COMMANDS = ("evolve", "entropy", "spectrum", "limits", "audit")


def _format_float(x: float) -> str:
    # 12 significant digits, lowercase scientific
    return f"{x:.11e}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(_format_float(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _header(data: dict) -> str:
    echo = json.dumps(data["config"], sort_keys=True, separators=(",", ":"))
    return (
        f"# walklab schema={data['schema_version']} command={data['command']} "
        f"seed={data['seed']} config={echo}\n"
    )


def _write_distribution_csv(path: Path, data: dict) -> None:
    with path.open("w", encoding="utf-8") as f:
        f.write(_header(data))
        f.write("t,x,y,p\n")
        for r in data["rows"]:
            f.write(f"{r['t']},{r['x']},{r['y']},{_format_float(r['p'])}\n")


def _write_invariants_log(path: Path, data: dict) -> None:
    with path.open("w", encoding="utf-8") as f:
        f.write(_header(data))
        for r in data["invariants"]:
            f.write(
                f"t={r['t']} trace={_format_float(r['trace'])} "
                f"herm_dev={_format_float(r['herm_dev'])} "
                f"min_eig={_format_float(r['min_eig'])}\n"
            )


def _write_entropy_csv(path: Path, data: dict) -> None:
    with path.open("w", encoding="utf-8") as f:
        f.write(_header(data))
        f.write("t,s_total,s_coin,s_walker,mutual_info\n")
        for r in data["rows"]:
            f.write(
                f"{r['t']},{_format_float(r['s_total'])},{_format_float(r['s_coin'])},"
                f"{_format_float(r['s_walker'])},{_format_float(r['mutual_info'])}\n"
            )


def _write_spectrum_csv(path: Path, data: dict) -> None:
    with path.open("w", encoding="utf-8") as f:
        f.write(_header(data))
        f.write("kx,ky,kxp,kyp,re_lambda,im_lambda,modulus\n")
        for r in data["rows"]:
            f.write(
                f"{r['kx']},{r['ky']},{r['kxp']},{r['kyp']},"
                f"{_format_float(r['re_lambda'])},{_format_float(r['im_lambda'])},"
                f"{_format_float(r['modulus'])}\n"
            )


def _write_json(path: Path, data: dict, payload_key: str) -> None:
    doc = {
        "schema_version": data["schema_version"],
        "command": data["command"],
        "seed": data["seed"],
        "config": data["config"],
        payload_key: _round_floats(data[payload_key]),
    }
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _post(command: str, payload: dict, server: str | None):
    path = f"/run/{command}"
    if server:
        import httpx

        return httpx.post(server.rstrip("/") + path, json=payload, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from fastapi.testclient import TestClient

    from .service.app import app

    with TestClient(app, raise_server_exceptions=False) as client:
        return client.post(path, json=payload)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walklab",
        description="Decoherent 2D quantum walk lab: run experiments, write CSV/JSON artifacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", required=True, help="path to the JSON run config")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
        sp.add_argument("--backend", choices=BACKENDS, default=None, help="override the backend")
        sp.add_argument("--server", default=None, help="base URL of a running service")
        if name == "audit":
            sp.add_argument("--trials", type=int, default=1000, help="random blocks per contraction audit")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(cfg, dict):
            raise ValueError("config must be a JSON object")
    except (OSError, ValueError) as exc:
        print(f"walklab: cannot read config: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.backend is not None:
        cfg["backend"] = args.backend

    payload: dict = {"config": cfg}
    if args.command == "audit":
        payload["trials"] = args.trials
    if args.command == "limits" and cfg.get("t_max", 0):
        payload["t_long"] = int(cfg["t_max"])

    resp = _post(args.command, payload, args.server)
    if resp.status_code != 200:
        try:
            body = resp.json()
            category = body.get("category", "numerical")
            message = body.get("message", body.get("detail", resp.text))
        except ValueError:
            category, message = "numerical", resp.text
        if resp.status_code == 422:  # request model rejected the config shape
            category = "config"
        print(f"walklab: {category} error: {message}", file=sys.stderr)
        return exit_code_for(category)
    data = resp.json()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.command == "evolve":
        _write_distribution_csv(out / "distribution.csv", data)
        _write_invariants_log(out / "invariants.log", data)
    elif args.command == "entropy":
        _write_entropy_csv(out / "entropy.csv", data)
    elif args.command == "spectrum":
        _write_spectrum_csv(out / "spectrum.csv", data)
        _write_json(out / "audit_report.json", data, "audit")
    elif args.command == "audit":
        _write_json(out / "audit_report.json", data, "audit")
    elif args.command == "limits":
        _write_json(out / "limits.json", data, "report")
    return 0


if __name__ == "__main__":
    sys.exit(main())
