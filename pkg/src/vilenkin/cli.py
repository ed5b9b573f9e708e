"""vilenkin-exp: run experiments on finite Vilenkin groups.

Exit codes: 0 success, 1 invariant violation, 2 configuration error.
"""
from __future__ import annotations

import argparse
import sys

from .experiments import (EXIT_CONFIG, EXPERIMENTS, ConfigError, ExperimentConfig,
                          load_config_file, run)
from .tables import dump_json


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vilenkin-exp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file; flags override its values")
        p.add_argument("--radices", help="comma-separated radices, e.g. 2,3,2")
        p.add_argument("--level-repeat", type=int, help="repeat the radix list k times")
        p.add_argument("--p-grid", type=_floats)
        p.add_argument("--eps-grid", type=_floats)
        p.add_argument("--lambda-grid", type=_floats)
        p.add_argument("--j-grid", type=_ints)
        p.add_argument("--phi-m", type=float)
        p.add_argument("--phi", choices=["orlicz", "linear"])
        p.add_argument("--family", choices=["partial-sums", "identity"])
        p.add_argument("--epsilon", type=float)
        p.add_argument("--kernels", type=_ints, help="Dirichlet kernel indices")
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--out", help="output path (stdout if omitted)")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    lines: dict = {}
    if args.config:
        values = load_config_file(args.config)
        lines = values.pop("_lines")
    for key, value in vars(args).items():
        if key in ("config", "experiment") or value is None:
            continue
        values[key] = value
        lines.pop(key, None)
    values["experiment"] = args.experiment
    try:
        config = ExperimentConfig(**values)
        config.validate()
    except ConfigError as exc:
        if exc.line is None and exc.field in lines:
            raise ConfigError(exc.field, str(exc).split(": ", 1)[1], lines[exc.field]) from exc
        raise
    except TypeError as exc:
        raise ConfigError("<config>", str(exc)) from exc
    return config


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        result = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if result.table is not None:
        _write(config.out, result.table.to_text())
    if result.document is not None:
        _write(config.out, dump_json(result.document))
    if config.out is not None:
        for name, doc in result.sidecars.items():
            _write(f"{config.out}.{name}.json", dump_json(doc))
    if result.message:
        print(f"{config.experiment}: {result.message}", file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
