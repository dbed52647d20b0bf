"""Command-line front end.

    hardyrefl verify|spectral|subspaces|geodesic|scan [options]

Records are written as JSON lines (complex numbers as [re, im]); with
--format csv the command's table is written instead.  Exit codes: 0 when
every assertion passed, 1 on an assertion failure, 2 on bad input, 3 on a
numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .errors import IdentityCheckFailure, InputError, NumericalFailure
from .moebius import polar_point
from .runs import COMMANDS, DEFAULT_TOLERANCES, ResultRecord, RunConfig

log = logging.getLogger("hardyrefl")

CONFIG_KEYS = {f.name for f in fields(RunConfig)}
EXIT_PASS, EXIT_ASSERT, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def parse_complex(text) -> complex:
    """Accept 're,im', 'r@deg', a plain number, or a Python complex literal."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return complex(float(text[0]), float(text[1]))
    s = str(text).strip().replace(" ", "")
    try:
        if "@" in s:
            r, deg = s.split("@")
            return polar_point(float(r), float(deg))
        if "," in s:
            re_, im = s.split(",")
            return complex(float(re_), float(im))
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"cannot parse complex number {text!r}") from exc


def load_config_file(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith((".yaml", ".yml")):
        try:
            import yaml
        except ImportError as exc:
            raise InputError("YAML config needs pyyaml; use JSON instead") from exc
        data = yaml.safe_load(text)
    else:
        data = json.loads(text)
    if not isinstance(data, dict):
        raise InputError("config file must hold a single mapping")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    return data


def _normalize(data: dict) -> dict:
    out = dict(data)
    if "a" in out:
        a = out["a"]
        if isinstance(a, (list, tuple)) and not (len(a) == 2 and all(isinstance(x, (int, float)) for x in a)):
            out["a"] = [parse_complex(x) for x in a]
        else:
            out["a"] = [parse_complex(a)]
    if "b" in out:
        out["b"] = parse_complex(out["b"])
    if "tol" in out:
        out["tol"] = {k: float(v) for k, v in out["tol"].items()}
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hardyrefl", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON or YAML file with RunConfig fields")
    p.add_argument("--a", action="append", help="disk point 're,im' or 'r@deg' (repeatable)")
    p.add_argument("--b", help="second disk point")
    p.add_argument("--order", type=int)
    p.add_argument("--k", type=int, help="basis size for subspace commands")
    p.add_argument("--theta-points", dest="theta_points", type=int)
    p.add_argument("--lambda-points", dest="lambda_points", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--grid-radii", dest="grid_radii", type=float, nargs="+")
    p.add_argument("--grid-phases", dest="grid_phases", type=float, nargs="+", help="degrees")
    p.add_argument("--workers", type=int)
    p.add_argument("--dump-rows", dest="dump_rows", type=int)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _split_tol_flags(argv):
    """Pull --tol.<name> VALUE / --tol.<name>=VALUE out of argv."""
    rest, tol = [], {}
    it = iter(argv)
    for arg in it:
        if arg.startswith("--tol."):
            name, eq, val = arg[len("--tol."):].partition("=")
            if not eq:
                val = next(it, None)
                if val is None:
                    raise InputError(f"{arg} needs a value")
            if name not in DEFAULT_TOLERANCES:
                raise InputError(f"unknown tolerance {name!r}; known: {sorted(DEFAULT_TOLERANCES)}")
            try:
                tol[name] = float(val)
            except ValueError as exc:
                raise InputError(f"bad value for {arg}: {val!r}") from exc
        else:
            rest.append(arg)
    return rest, tol


def make_config(args, tol_flags: dict) -> RunConfig:
    data = _normalize(load_config_file(args.config)) if args.config else {}
    flags = {k: getattr(args, k) for k in CONFIG_KEYS if getattr(args, k, None) is not None}
    flags = _normalize(flags)
    if tol_flags:
        flags["tol"] = {**data.get("tol", {}), **tol_flags}
    data.update(flags)
    return RunConfig(**data)


def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [to_jsonable(float(x.real)), to_jsonable(float(x.imag))]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def record_line(rec: ResultRecord) -> str:
    return json.dumps(to_jsonable(rec.as_dict()), sort_keys=True)


def _cell(v):
    v = to_jsonable(v)
    return json.dumps(v) if isinstance(v, list) else v


def write_csv(records, stream: io.TextIOBase) -> None:
    """Density dumps expand to their rows; everything else becomes one flat row per record."""
    records = list(records)
    w = csv.writer(stream, lineterminator="\n")
    dumps = [r for r in records if "rows" in r.outputs]
    if dumps:
        w.writerow(["a"] + dumps[0].outputs["columns"])
        for r in dumps:
            for row in r.outputs["rows"]:
                w.writerow([_cell(r.inputs["a"])] + [repr(float(x)) for x in row])
        return
    in_keys = sorted({k for r in records for k in r.inputs})
    out_keys = sorted({k for r in records for k, v in r.outputs.items() if not isinstance(v, (list, dict))})
    w.writerow(["command", "check", "passed", "tolerance"] + in_keys + out_keys)
    for r in records:
        w.writerow([r.command, r.check, r.passed, r.tolerance]
                   + [_cell(r.inputs.get(k, "")) for k in in_keys]
                   + [_cell(r.outputs.get(k, "")) for k in out_keys])


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv, tol_flags = _split_tol_flags(argv)
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
        cfg = make_config(args, tol_flags)
    except (InputError, ValueError, TypeError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    records, failed = [], 0
    stream = open(args.out, "w", encoding="utf-8") if args.out else stdout
    try:
        for rec in COMMANDS[args.command](cfg):
            records.append(rec)
            if rec.passed is False:
                failed += 1
                log.info("failed: %s %s", rec.check, rec.inputs)
            if args.format == "json":
                stream.write(record_line(rec) + "\n")
        if args.format == "csv":
            write_csv(records, stream)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except IdentityCheckFailure as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    finally:
        if args.out:
            stream.close()
    if failed:
        print(f"{failed} of {len(records)} assertions failed", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_PASS


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); silence the interpreter's flush warning
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 1
    sys.exit(code)


if __name__ == "__main__":
    main()
