"""Command-line pipeline: simulate, reconstruct, evaluate, phantom.

Outputs are plain files: FloatRaster grids (bit-exact), PGM previews,
RFC-4180-style CSV trajectories, and a manifest that re-parses as a config.
Every command is deterministic given its configuration; all randomness is
seeded from config keys. `AUTOCORR_THREADS` caps the parallel fan-out of
`reconstruct --runs N`.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, load_config, manifest_text
from .errors import AutocorrError, ShapeError
from .forward import (
    Measurement,
    simulate_bandlimited,
    simulate_blurred_autocorr,
    simulate_blurred_object_autocorr,
    make_window,
)
from .grids import as_grid, embed_pad, normalize_total, solver_shape
from .metrics import align_to_reference, snr_db
from .phantoms import make_phantom
from .raster_io import read_float_raster, write_float_raster, write_pgm_preview
from .solvers import ReconstructionReport, run_solver
from .spectral import autocorrelation, convolve, cross_correlate, gaussian_kernel

MANIFEST_NAME = "manifest.cfg"


def _load_object(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.image:
        return as_grid(read_float_raster(cfg.image), nonneg=True)
    return make_phantom(cfg.phantom, (cfg.height, cfg.width), cfg.object_seed)


def _simulate(cfg: ExperimentConfig, obj: np.ndarray) -> Measurement:
    pshape = solver_shape(obj.shape)
    scen = cfg.scenario()
    if cfg.scenario_kind == "blurred_autocorr":
        h = gaussian_kernel(cfg.sigma, pshape)
        H = normalize_total(np.maximum(cross_correlate(h, h), 0.0))
        return simulate_blurred_autocorr(obj, H, cfg.noise_lambda, cfg.noise_seed, scen)
    if cfg.scenario_kind == "blurred_object_autocorr":
        h = gaussian_kernel(cfg.sigma, pshape)
        return simulate_blurred_object_autocorr(
            obj, h, cfg.noise_lambda, cfg.noise_seed, scen
        )
    W = make_window(cfg.window, cfg.cutoff, pshape)
    return simulate_bandlimited(obj, W, cfg.noise_lambda, cfg.noise_seed, scen)


def _write_grid(out: Path, stem: str, g: np.ndarray, images: bool) -> None:
    write_float_raster(out / f"{stem}.fgr", g)
    if images:
        write_pgm_preview(out / f"{stem}.pgm", g)


def cmd_simulate(cfg: ExperimentConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    obj = _load_object(cfg)
    meas = _simulate(cfg, obj)
    chi_clean = normalize_total(convolve(autocorrelation(obj), meas.h_effective))

    _write_grid(out, "object", obj, cfg.emit_images)
    _write_grid(out, "object_padded", embed_pad(obj, meas.chi_mu.shape), cfg.emit_images)
    _write_grid(out, "chi_clean", chi_clean, cfg.emit_images)
    _write_grid(out, "chi_mu", meas.chi_mu, cfg.emit_images)
    _write_grid(out, "h_effective", meas.h_effective, cfg.emit_images)
    if meas.o_mu is not None:
        _write_grid(out, "o_mu", meas.o_mu, cfg.emit_images)

    result = {
        "raw_snr_db": format(meas.raw_snr_db, ".6f"),
        "solver_shape": f"{meas.chi_mu.shape[0]}x{meas.chi_mu.shape[1]}",
    }
    if meas.o_mu_snr_db is not None:
        result["o_mu_snr_db"] = format(meas.o_mu_snr_db, ".6f")
    if cfg.emit_report:
        (out / MANIFEST_NAME).write_text(manifest_text(cfg, result))
    print(f"simulate: wrote measurement to {out} (raw SNR {meas.raw_snr_db:.2f} dB)")
    return 0


def _load_measurement(cfg: ExperimentConfig, directory: Path) -> Measurement:
    chi_mu = read_float_raster(directory / "chi_mu.fgr")
    h_eff = read_float_raster(directory / "h_effective.fgr")
    return Measurement(
        chi_mu=chi_mu,
        h_effective=h_eff,
        scenario=cfg.scenario(),
        noise_lambda=cfg.noise_lambda,
        seed=cfg.noise_seed,
        raw_snr_db=float("nan"),
    )


def _write_trajectory_csv(path: Path, report: ReconstructionReport) -> None:
    lines = ["iter,snr_db,i_div,wall_s"]
    for s, wall in zip(report.history, report.sample_wall_s):
        lines.append(f"{s.iteration},{s.snr_db:.17g},{s.i_div:.17g},{wall:.6f}")
    path.write_text("\n".join(lines) + "\n")


def _reconstruct_single(
    cfg: ExperimentConfig, meas: Measurement, reference, run_dir: Path
) -> dict[str, str]:
    run_dir.mkdir(parents=True, exist_ok=True)
    report = run_solver(cfg.solver_config(), meas, reference=reference)
    _write_grid(run_dir, "recon", report.final_o, cfg.emit_images)
    result = {
        "stop_reason": report.stop_reason,
        "iterations": str(report.history[-1].iteration),
        "final_snr_db": format(report.history[-1].snr_db, ".6f"),
        "final_i_div": format(report.history[-1].i_div, ".9g"),
        "wall_time_s": format(report.wall_time, ".3f"),
    }
    if report.aligned_o is not None:
        _write_grid(run_dir, "recon_aligned", report.aligned_o, cfg.emit_images)
        ref_n = normalize_total(
            embed_pad(reference, report.aligned_o.shape)
            if reference.shape != report.aligned_o.shape
            else reference
        )
        result["aligned_snr_db"] = format(snr_db(ref_n, report.aligned_o), ".6f")
        result["shift"] = f"{report.shift[0]},{report.shift[1]}"
        result["mirrored"] = "true" if report.mirrored else "false"
    if cfg.emit_csv:
        _write_trajectory_csv(run_dir / "trajectory.csv", report)
    if cfg.emit_report:
        (run_dir / MANIFEST_NAME).write_text(manifest_text(cfg, result))
    return result


def _thread_cap() -> int:
    env = os.environ.get("AUTOCORR_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def cmd_reconstruct(cfg: ExperimentConfig, runs: int = 1) -> int:
    src = Path(cfg.out_dir)
    meas = _load_measurement(cfg, src)
    ref_path = src / "object_padded.fgr"
    reference = read_float_raster(ref_path) if ref_path.exists() else None

    if runs <= 1:
        result = _reconstruct_single(cfg, meas, reference, src)
        print(
            f"reconstruct: {result['stop_reason']} after {result['iterations']} iters, "
            f"final SNR {result['final_snr_db']} dB -> {src}"
        )
        return 0

    configs = [replace(cfg, solver_seed=cfg.solver_seed + i) for i in range(runs)]
    run_dirs = [src / f"run_{i:03d}" for i in range(runs)]
    workers = min(runs, _thread_cap())
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_reconstruct_single, c, meas, reference, d)
            for c, d in zip(configs, run_dirs)
        ]
        results = [f.result() for f in futures]
    for d, result in zip(run_dirs, results):
        print(
            f"reconstruct[{d.name}]: {result['stop_reason']} after "
            f"{result['iterations']} iters, final SNR {result['final_snr_db']} dB"
        )
    return 0


def cmd_evaluate(
    recon_path, reference_path, profile_row: int, out_dir, emit_report: bool = True
) -> int:
    rec = read_float_raster(recon_path)
    ref = read_float_raster(reference_path)
    if rec.shape != ref.shape:
        raise ShapeError(
            f"reconstruction {rec.shape} and reference {ref.shape} must share a shape"
        )
    rec_n = normalize_total(np.maximum(rec, 0.0))
    ref_n = normalize_total(np.maximum(ref, 0.0))
    aligned, shift, mirrored = align_to_reference(rec_n, ref_n)
    quality = snr_db(ref_n, aligned)

    row = profile_row if profile_row >= 0 else rec.shape[0] // 2
    if row >= rec.shape[0]:
        raise ShapeError(f"profile row {row} outside grid of height {rec.shape[0]}")
    out = Path(out_dir) if out_dir else Path(recon_path).resolve().parent
    out.mkdir(parents=True, exist_ok=True)
    lines = ["x,reference,reconstruction"]
    for x in range(rec.shape[1]):
        lines.append(f"{x},{ref_n[row, x]:.17g},{aligned[row, x]:.17g}")
    (out / "profile.csv").write_text("\n".join(lines) + "\n")
    if emit_report:
        report = "\n".join(
            [
                "[result]",
                f"snr_db = {quality:.6f}",
                f"shift = {shift[0]},{shift[1]}",
                f"mirrored = {'true' if mirrored else 'false'}",
                f"profile_row = {row}",
                "",
            ]
        )
        (out / "evaluate.cfg").write_text(report)
    print(
        f"evaluate: SNR {quality:.2f} dB, shift ({shift[0]}, {shift[1]}), "
        f"mirrored {'yes' if mirrored else 'no'}"
    )
    return 0


def cmd_phantom(cfg: ExperimentConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = make_phantom(cfg.phantom, (cfg.height, cfg.width), cfg.object_seed)
    _write_grid(out, cfg.phantom, g, cfg.emit_images)
    if cfg.emit_report:
        (out / MANIFEST_NAME).write_text(manifest_text(cfg, {"kind": cfg.phantom}))
    print(f"phantom: wrote {cfg.phantom} ({cfg.height}x{cfg.width}) to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autocorr-restore",
        description="Reconstruct objects from blurred or band-limited autocorrelations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", type=Path, help="INI config file")
        sp.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override a config key (repeatable)",
        )
        sp.add_argument("--out", help="output directory (overrides output.dir)")
        sp.add_argument("--seed", type=int, help="solver seed override")
        sp.add_argument("--runs", type=int, default=1, help="independent solver runs")

    common(sub.add_parser("simulate", help="synthesize a measurement"))
    common(sub.add_parser("reconstruct", help="invert a simulated measurement"))
    ev = sub.add_parser("evaluate", help="score a reconstruction against a reference")
    common(ev)
    ev.add_argument("recon", type=Path, help="reconstruction FloatRaster")
    ev.add_argument("reference", type=Path, help="reference FloatRaster")
    ev.add_argument("--row", type=int, default=None, help="profile row (default: center)")
    ph = sub.add_parser("phantom", help="write a procedural test object")
    common(ph)
    ph.add_argument("--kind", help="phantom kind (shortcut for object.phantom)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = tuple(args.overrides)
        if args.command == "phantom" and args.kind:
            overrides = overrides + (f"object.phantom={args.kind}",)
        cfg = load_config(args.config, overrides, out=args.out, seed=args.seed)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "reconstruct":
            return cmd_reconstruct(cfg, runs=max(1, args.runs))
        if args.command == "evaluate":
            row = args.row if args.row is not None else cfg.profile_row
            return cmd_evaluate(args.recon, args.reference, row, args.out, cfg.emit_report)
        return cmd_phantom(cfg)
    except (AutocorrError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
