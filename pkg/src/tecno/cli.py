"""Command-line entry point.

Subcommands: solve (one run to artifacts), converge (mesh-refinement error
table), train (fit reconstruction network weights), recon-study (static
reconstruction diagnostics). Settings come from an optional flat key=value
config file with command-line flags taking precedence. Exit codes: 0 on
success, 2 for configuration errors, 3 when the solver aborts.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import network, training
from .evolve import RECONSTRUCTIONS, BlowupError
from .flux import DIFFUSION_KINDS
from .harness import (RunConfig, convergence_study, pseudo_jump_study,
                      reconstruction_accuracy, run, write_convergence_csv,
                      write_pseudo_jump_csv, write_recon_accuracy_csv,
                      write_table_csv)
from .physics import PositivityError

CONFIG_KEYS = ("case", "n", "recon", "diffusion", "cfl", "tfinal", "bc",
               "weights", "out", "seed", "meshes")

EXIT_CONFIG = 2
EXIT_SOLVER = 3


def read_config(path: Path) -> dict:
    """Flat key=value file; blank lines and # comments ignored."""
    values = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}; "
                             f"known keys: {', '.join(CONFIG_KEYS)}")
        values[key] = value
    return values


def _merge(args: argparse.Namespace) -> dict:
    """File settings overridden by any flag given on the command line."""
    settings = {}
    if args.config is not None:
        settings.update(read_config(Path(args.config)))
    for key in CONFIG_KEYS:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            settings[key] = flag
    return settings


def _parse_meshes(value) -> list[int]:
    if isinstance(value, list):
        return value
    meshes = [int(tok) for tok in str(value).replace(" ", "").split(",") if tok]
    if not meshes:
        raise ValueError("empty mesh list")
    return meshes


def _run_config(settings: dict) -> RunConfig:
    if "case" not in settings:
        raise ValueError("a test case is required (--case or config file)")
    return RunConfig(
        case=settings["case"],
        n=None if settings.get("n") is None else int(settings["n"]),
        reconstruction=settings.get("recon", "sp-weno"),
        diffusion=settings.get("diffusion", "roe"),
        cfl=None if settings.get("cfl") is None else float(settings["cfl"]),
        t_final=None if settings.get("tfinal") is None else float(settings["tfinal"]),
        bc=settings.get("bc"),
        seed=int(settings.get("seed", 0)),
        out_dir=Path(settings.get("out", "runs")),
        weights=None if settings.get("weights") is None else Path(settings["weights"]),
    )


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, help="key=value settings file")
    sub.add_argument("--case", help="test-case id")
    sub.add_argument("--n", type=int, help="cells per axis")
    sub.add_argument("--recon", choices=RECONSTRUCTIONS,
                     help="interface reconstruction")
    sub.add_argument("--diffusion", choices=DIFFUSION_KINDS,
                     help="interface diffusion operator")
    sub.add_argument("--cfl", type=float, help="CFL number")
    sub.add_argument("--tfinal", type=float, help="final time")
    sub.add_argument("--bc", choices=["periodic", "neumann"],
                     help="boundary kind override")
    sub.add_argument("--weights", type=Path,
                     help="network weights file (packaged weights if omitted)")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--seed", type=int, help="random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tecno",
        description="entropy-stable finite difference solver experiments")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="run one case to artifacts")
    _add_common(solve)

    conv = commands.add_parser("converge", help="mesh-refinement error table")
    _add_common(conv)
    conv.add_argument("--meshes", help="comma-separated mesh sizes")

    train = commands.add_parser("train", help="fit reconstruction weights")
    train.add_argument("--config", type=Path, help="key=value settings file")
    train.add_argument("--seed", type=int, help="random seed (default 0)")
    train.add_argument("--out", help="output directory")
    train.add_argument("--runs", type=int, default=training.RUNS,
                       help="independent restarts")
    train.add_argument("--epochs", type=int, default=training.EPOCHS)
    train.add_argument("--batch", type=int, default=training.BATCH_SIZE)
    train.add_argument("--size", type=int, default=100000,
                       help="training-set size")
    train.add_argument("--squared", action="store_true",
                       help="use the squared-distance loss variant")

    study = commands.add_parser("recon-study",
                                help="static reconstruction diagnostics")
    _add_common(study)
    study.add_argument("--study", choices=["accuracy", "pseudo-jump"],
                       default="accuracy")
    study.add_argument("--meshes", help="comma-separated mesh sizes")
    return parser


def _cmd_solve(args) -> int:
    config = _run_config(_merge(args))
    manifest = run(config)
    print(f"{manifest['case']}: {manifest['status']} in {manifest['steps']} "
          f"steps ({manifest['wall_seconds']:.2f}s) -> {config.out_dir}")
    return 0


def _cmd_converge(args) -> int:
    settings = _merge(args)
    config = _run_config(settings)
    meshes = _parse_meshes(settings.get("meshes") or "")
    study = convergence_study(config, meshes)
    out = Path(settings.get("out", "runs"))
    out.mkdir(parents=True, exist_ok=True)
    path = out / "convergence.csv"
    write_convergence_csv(path, study)
    var0 = study["variables"][0]
    for row in study["rows"]:
        r = row.get("l1_rate")
        tail = "" if r is None else f"  rate {r[0]:.2f}"
        print(f"n={row['n']:<6d} L1[{var0}] = {row['l1'][0]:.4e}{tail}")
    print(f"wrote {path}")
    return 0


def _cmd_train(args) -> int:
    settings = {}
    if args.config is not None:
        settings.update(read_config(Path(args.config)))
    seed = args.seed if args.seed is not None else int(settings.get("seed", 0))
    out = Path(args.out or settings.get("out", "runs"))
    out.mkdir(parents=True, exist_ok=True)

    dataset = training.generate_dataset(seed, size=args.size)
    params, report = training.train(seed, dataset=dataset, runs=args.runs,
                                    epochs=args.epochs, batch_size=args.batch,
                                    squared=args.squared)
    weights_path = out / "weights.json"
    network.save_params(params, weights_path)

    rows = [[r.run, r.epoch, r.train_loss, r.val_loss, r.test_loss]
            for r in report.records]
    write_table_csv(out / "training_report.csv",
                    ["run", "epoch", "train_loss", "val_loss", "test_loss"],
                    rows)
    summary = {
        "seed": seed,
        "runs": args.runs,
        "epochs": args.epochs,
        "batch_size": args.batch,
        "dataset_size": args.size,
        "loss": "squared" if args.squared else "unsquared",
        "chosen_run": report.chosen_run,
        "final_test_losses": report.final_test_losses,
        "zero_init_test_loss": report.zero_init_test_loss,
        "files": {"weights": "weights.json",
                  "report": "training_report.csv"},
    }
    (out / "manifest.json").write_text(json.dumps(summary, indent=1) + "\n",
                                       encoding="utf-8")
    best = min(report.final_test_losses)
    print(f"trained {args.runs} runs x {args.epochs} epochs (seed {seed}); "
          f"best test loss {best:.6g} (run {report.chosen_run}) -> {weights_path}")
    return 0


def _cmd_recon_study(args) -> int:
    settings = _merge(args)
    recon = settings.get("recon", "sp-weno")
    params = None
    if recon == "dsp-weno":
        weights = settings.get("weights")
        params = (network.default_params() if weights is None
                  else network.load_params(Path(weights)))
    out = Path(settings.get("out", "runs"))
    out.mkdir(parents=True, exist_ok=True)
    if args.study == "accuracy":
        meshes = _parse_meshes(settings.get("meshes")
                               or [40, 80, 160, 320, 640, 1280])
        rows = reconstruction_accuracy(recon, meshes, params)
        path = out / "recon_accuracy.csv"
        write_recon_accuracy_csv(path, rows)
        for row in rows:
            tail = "" if row["rate"] is None else f"  rate {row['rate']:.2f}"
            print(f"n={row['n']:<6d} E = {row['error']:.4e}{tail}")
    else:
        n = int(settings.get("n") or 1000)
        study = pseudo_jump_study(recon, n=n, params=params)
        path = out / "pseudo_jump.csv"
        write_pseudo_jump_csv(path, study)
        mid = n // 2
        print(f"jump at left interface  {study['recon_jump'][mid]:+.6e}")
        print(f"jump at right interface {study['recon_jump'][mid + 1]:+.6e}")
    print(f"wrote {path}")
    return 0


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"solve": _cmd_solve, "converge": _cmd_converge,
                "train": _cmd_train, "recon-study": _cmd_recon_study}
    try:
        return handlers[args.command](args)
    except (BlowupError, PositivityError) as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_SOLVER)
    except (ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        return _fail(type(exc).__name__, str(message), EXIT_CONFIG)


if __name__ == "__main__":
    sys.exit(main())
