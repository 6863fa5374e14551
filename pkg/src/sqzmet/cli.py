"""Command-line front end: synthesize, simulate, sweep, validate.

Exit codes: 0 success, 1 validation-suite failure, 2 bad input, 3 refusal
to run outside the small-phase regime.  Output tables are CSV with a
manifest header sufficient to regenerate them; numbers use shortest
round-trip notation, so identical configuration and seed give
byte-identical files regardless of parallelism.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__, metrology, network, validate
from .gaussian import SqueezeParameter

ENV_PREFIX = "SQZMET_"
CONFIG_KEYS = ("weights", "true_phases", "squeeze", "shots", "seed", "engine", "cutoff")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BAD_INPUT = 2
EXIT_REGIME = 3


class InputError(Exception):
    """Bad configuration or command-line input (exit code 2)."""


def _fmt(value: float) -> str:
    return repr(float(value))


def _fmt_list(values) -> str:
    return ",".join(_fmt(v) for v in values)


@dataclass(frozen=True)
class RunManifest:
    """Provenance header embedded in every output file.

    Wall-clock timing is reported on stderr only; keeping it out of the
    file preserves byte-level reproducibility.
    """

    command: str
    entries: tuple[tuple[str, str], ...]

    def header_lines(self) -> list[str]:
        lines = [f"# sqzmet = {__version__}", f"# command = {self.command}"]
        lines += [f"# {key} = {value}" for key, value in self.entries]
        return lines


def _read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _apply_env_overrides(values: dict[str, str]) -> dict[str, str]:
    for key in CONFIG_KEYS:
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            values[key] = env
    return values


def _parse_floats(text: str, key: str) -> list[float]:
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"bad value for {key}: {text!r}") from exc


def load_experiment_config(path: str, args) -> metrology.ExperimentConfig:
    """Assemble an ExperimentConfig from file, environment, and flags."""
    values = _apply_env_overrides(_read_config_file(path))
    for key in ("weights", "true_phases", "squeeze", "shots", "seed"):
        if key not in values:
            raise InputError(f"config {path} is missing required key {key!r}")
    squeeze_parts = _parse_floats(values["squeeze"], "squeeze")
    if len(squeeze_parts) not in (1, 2):
        raise InputError("squeeze takes one or two comma-separated numbers (r[,theta])")
    try:
        squeeze = SqueezeParameter(*squeeze_parts)
        config = metrology.ExperimentConfig(
            weights=np.array(_parse_floats(values["weights"], "weights")),
            true_phases=np.array(_parse_floats(values["true_phases"], "true_phases")),
            squeeze=squeeze,
            shots=int(values["shots"]),
            seed=args.seed if args.seed is not None else int(values["seed"]),
            engine=args.engine or values.get("engine", "gaussian"),
            cutoff=args.cutoff if args.cutoff is not None else (
                int(values["cutoff"]) if "cutoff" in values else None
            ),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return config


def _config_manifest_entries(config: metrology.ExperimentConfig) -> list[tuple[str, str]]:
    return [
        ("weights", _fmt_list(config.weights)),
        ("true_phases", _fmt_list(config.true_phases)),
        ("squeeze", _fmt_list([config.squeeze.r, config.squeeze.theta])),
        ("shots", str(config.shots)),
        ("seed", str(config.seed)),
        ("engine", config.engine),
        ("cutoff", "auto" if config.cutoff is None else str(config.cutoff)),
    ]


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def cmd_synthesize(args) -> int:
    try:
        with open(args.weights_file, "r", encoding="utf-8") as handle:
            tokens = handle.read().replace(",", " ").split()
        weights = network.validate_weights([float(tok) for tok in tokens])
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    unitary = network.embed_weights_unitary(weights)
    mesh = network.reck_decompose(unitary)
    column_defect = float(np.max(np.abs(unitary[:, 0] - np.sqrt(weights))))
    unitarity = network.unitarity_defect(unitary)
    roundtrip = float(np.linalg.norm(network.recompose(mesh) - unitary))

    manifest = RunManifest("synthesize", (("weights", _fmt_list(weights)),))
    netlist = "\n".join(manifest.header_lines()) + "\n" + network.mesh_to_netlist(mesh)
    rows = [" ".join(repr(complex(z)) for z in row) for row in unitary]
    dump = "\n".join(manifest.header_lines() + rows) + "\n"

    prefix = args.out or "network"
    _write_text(f"{prefix}.netlist", netlist)
    _write_text(f"{prefix}.unitary", dump)
    print(f"modes = {weights.size}")
    print(f"first-column residual = {_fmt(column_defect)}")
    print(f"unitarity residual = {_fmt(unitarity)}")
    print(f"mesh round-trip residual = {_fmt(roundtrip)}")
    print(f"wrote {prefix}.netlist and {prefix}.unitary")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = load_experiment_config(args.config, args)
    started = time.perf_counter()
    run = metrology.run_protocol(config)
    elapsed = time.perf_counter() - started
    if not run.regime_ok:
        print(
            f"warning: regime ratio {run.regime_ratio:.3f} outside the "
            f"small-phase expansion (threshold {metrology.REGIME_THRESHOLD})",
            file=sys.stderr,
        )
    entries = _config_manifest_entries(config)
    if config.engine == "fock":
        entries = [
            (k, v) if k != "cutoff" else (k, str(run.cutoff_used)) for k, v in entries
        ]
    manifest = RunManifest("simulate", tuple(entries))
    lines = manifest.header_lines()
    lines.append("phiBar_true,p_exact,p_hat,phi_hat,regime_ratio")
    lines.append(
        ",".join(
            _fmt(v)
            for v in (run.phi_bar_true, run.p_exact, run.p_hat, run.phi_hat, run.regime_ratio)
        )
    )
    _write_text(args.out, "\n".join(lines) + "\n")
    print(f"simulate finished in {elapsed:.3f} s", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    values = _apply_env_overrides(_read_config_file(args.config))
    for key in ("shots", "seed"):
        if key not in values:
            raise InputError(f"config {args.config} is missing required key {key!r}")
    shots = int(values["shots"])
    seed = args.seed if args.seed is not None else int(values["seed"])
    nbars = _parse_floats(args.nbars, "--nbars") if args.nbars is not None else [0.5, 1.0, 2.0, 4.0]
    if not nbars:
        raise InputError("--nbars must list at least one mean photon number")
    baseline = args.baseline or "squeezed"
    started = time.perf_counter()
    try:
        counts = None
        if args.jobs > 1:
            probabilities = [
                metrology.sweep_point_probability(n, args.bias_product / n, baseline)
                for n in nbars
            ]
            tasks = [(i, k) for i in range(len(nbars)) for k in range(args.repetitions)]
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                counts = dict(
                    pool.map(
                        lambda t: (
                            t,
                            metrology.sweep_shot_count(
                                probabilities[t[0]], shots, seed, t[0], t[1]
                            ),
                        ),
                        tasks,
                    )
                )
        result = metrology.scaling_sweep(
            nbars,
            shots,
            args.repetitions,
            seed,
            bias_product=args.bias_product,
            baseline=baseline,
            force=args.force,
            counts=counts,
        )
    except metrology.RegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    elapsed = time.perf_counter() - started
    manifest = RunManifest(
        "sweep",
        (
            ("nbars", _fmt_list(nbars)),
            ("shots", str(shots)),
            ("repetitions", str(args.repetitions)),
            ("bias_product", _fmt(args.bias_product)),
            ("baseline", baseline),
            ("seed", str(seed)),
        ),
    )
    lines = manifest.header_lines()
    lines.append("nbar,nu,delta_phi_sq_empirical,heisenberg_prediction,ratio")
    for nbar, point in zip(result.nbars, result.results):
        lines.append(
            ",".join(
                [
                    _fmt(nbar),
                    str(shots),
                    _fmt(point.delta_phi_sq),
                    _fmt(point.heisenberg_bound),
                    _fmt(point.delta_phi_sq / point.heisenberg_bound),
                ]
            )
        )
    lines.append(f"slope={_fmt(result.slope)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    print(f"sweep finished in {elapsed:.3f} s", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    suite = validate.full_suite if args.level == "full" else validate.quick_suite
    results = suite(args.seed if args.seed is not None else 0)
    failed = [r for r in results if not r.passed]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name} ({result.detail})")
    if failed:
        print(f"validation failed: {failed[0].name}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqzmet",
        description="Distributed phase estimation with one squeezed probe.",
    )
    parser.add_argument("--version", action="version", version=f"sqzmet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_syn = sub.add_parser("synthesize", help="build the weight-encoding mesh")
    p_syn.add_argument("weights_file", help="text file of non-negative weights summing to 1")
    p_syn.add_argument("--out", help="output prefix (default: network)")
    p_syn.set_defaults(func=cmd_synthesize)

    p_sim = sub.add_parser("simulate", help="one protocol run as a CSV row")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--engine", choices=metrology.ENGINES)
    p_sim.add_argument("--cutoff", type=int)
    p_sim.add_argument("--out", help="CSV path (default: stdout)")
    p_sim.set_defaults(func=cmd_simulate)

    p_swp = sub.add_parser("sweep", help="scaling sweep of the estimation variance")
    p_swp.add_argument("--config", required=True, help="supplies shots and seed")
    p_swp.add_argument("--seed", type=int)
    p_swp.add_argument("--nbars", help="comma-separated mean photon numbers")
    p_swp.add_argument("--repetitions", type=int, default=200)
    p_swp.add_argument("--bias-product", type=float, default=0.05, dest="bias_product")
    p_swp.add_argument("--baseline", choices=("squeezed", "coherent"))
    p_swp.add_argument("--force", action="store_true", help="ignore the regime refusal")
    p_swp.add_argument("--jobs", type=int, default=1, help="parallel sampling threads")
    p_swp.add_argument("--out", help="CSV path (default: stdout)")
    p_swp.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="run the self-validation suites")
    p_val.add_argument("level", choices=("quick", "full"))
    p_val.add_argument("--seed", type=int)
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as exc:
        # covers validation and truncation errors raised by the library
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
