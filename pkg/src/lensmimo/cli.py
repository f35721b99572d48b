"""Command line front end.

`simulate response` emits lens array response samples, `simulate channel`
prints one random channel realization, `simulate run` runs a Monte Carlo
sweep to stdout, and `simulate sweep` persists it as CSV. Scenario presets
or a flat key=value config file select the experiment; command line flags
override config file values.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .arrays import LensArrayConfig, lens_response_spatial
from .channel import sample_paths
from .errors import ConfigError, LensMimoError
from .experiments import ExperimentConfig, preset, preset_names, rows_to_csv, sweep

_CONFIG_KEYS = (
    "scenario",
    "trials",
    "seed",
    "snr_db",
    "schemes",
    "delta",
    "num_paths",
    "rx_rf",
    "tx_rf",
)


def parse_config_file(path: str) -> dict:
    """Flat key=value config with # comments; unknown keys are errors."""
    out: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _build_experiment(args) -> ExperimentConfig:
    settings = parse_config_file(args.config) if args.config else {}
    scenario = args.scenario or settings.get("scenario")
    if scenario is None:
        raise ConfigError("a scenario is required (--scenario or config file)")
    overrides: dict = {}
    try:
        if "trials" in settings:
            overrides["trials"] = int(settings["trials"])
        if "seed" in settings:
            overrides["seed"] = int(settings["seed"])
        if "delta" in settings:
            overrides["delta"] = int(settings["delta"])
        if "num_paths" in settings:
            overrides["num_paths"] = int(settings["num_paths"])
        if "rx_rf" in settings:
            overrides["rx_rf"] = int(settings["rx_rf"])
        if "tx_rf" in settings:
            overrides["tx_rf"] = int(settings["tx_rf"])
        if "snr_db" in settings:
            overrides["snr_db"] = tuple(
                float(v) for v in settings["snr_db"].replace(",", " ").split()
            )
        if "schemes" in settings:
            overrides["schemes"] = tuple(
                v.strip() for v in settings["schemes"].split(",") if v.strip()
            )
    except ValueError as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    return preset(scenario, **overrides)


def _cmd_response(args) -> str:
    cfg = _build_experiment(args)
    rx = LensArrayConfig(cfg.rx_aperture, cfg.rx_azimuth_dim)
    lines = ["spatial_freq,element,response"]
    for freq in np.linspace(-1.0, 1.0, 81):
        resp = lens_response_spatial(rx, float(freq)).real
        for m, value in zip(rx.element_indices, resp):
            lines.append(f"{freq:.6g},{m},{value:.12g}")
    return "\n".join(lines) + "\n"


def _cmd_channel(args) -> str:
    cfg = _build_experiment(args)
    rng = np.random.default_rng([cfg.seed, 0])
    paths = sample_paths(cfg.stats, cfg.num_paths, rng)
    lines = ["path,gain_real,gain_imag,delay_s,aoa_spatial_freq,aod_spatial_freq"]
    for l in range(paths.num_paths):
        g = paths.gains[l]
        lines.append(
            f"{l},{g.real:.12g},{g.imag:.12g},{paths.delays_s[l]:.12g},"
            f"{paths.aoa_spatial_freqs[l]:.12g},{paths.aod_spatial_freqs[l]:.12g}"
        )
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Lens-array MIMO link simulator (response tables, channel "
        "realizations, Monte Carlo spectral-efficiency sweeps).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("response", "emit lens array response samples as CSV"),
        ("channel", "print one random channel realization"),
        ("run", "run a Monte Carlo experiment and print CSV results"),
        ("sweep", "run a Monte Carlo experiment and write CSV to --out"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--seed", type=int, help="experiment seed")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--trials", type=int, help="Monte Carlo trial count")
        p.add_argument(
            "--scenario",
            help=f"scenario preset: {', '.join(preset_names())} (or fig5..fig10)",
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "response":
            _emit(_cmd_response(args), args.out)
        elif args.command == "channel":
            _emit(_cmd_channel(args), args.out)
        elif args.command == "run":
            cfg = _build_experiment(args)
            from .experiments import run_experiment

            _emit(rows_to_csv(run_experiment(cfg)), args.out)
        else:
            cfg = _build_experiment(args)
            if args.out is None:
                raise ConfigError("sweep requires --out")
            sweep(cfg, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LensMimoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
