"""Command-line interface.

Subcommands: phantom, acquire, reconstruct, evaluate, pipeline.  Exit codes:
0 ok, 2 usage/parameter error, 3 IO or file-format error, 4 numerical
failure (solver divergence, degenerate metric input).
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (DataError, DegenerateInputError, FormatError,
                     ParameterError, SolverDivergenceError)
from .fields import SpeckleParams
from .formats import (load_any_image, read_ensemble, read_pgm, write_ensemble,
                      write_manifest, write_pgm, write_raw_image)
from .gpsr import SparseSolverConfig
from .measurement import acquire
from .metrics import RegionMasks, auto_masks, mse, normalize_affine, snr
from .phantoms import (DoubleSlitSpec, aleph_phantom, double_slit,
                       glyph_phantom, load_grayscale, portrait_phantom)
from .pipeline import PRESET_NAMES, preset_config, run_pipeline
from .reconstruct import (CoefficientOperator, SensingOperator,
                          cs_reconstruct, default_tau, gi_reconstruct,
                          ls_reconstruct)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def _fmt(value: float) -> str:
    return f"{value:.12e}"


def _print_kv(**kv) -> None:
    for key, value in kv.items():
        if isinstance(value, float):
            print(f"{key}={_fmt(value)}")
        else:
            print(f"{key}={value}")


def _speckle_params(args, rows: int, cols: int) -> SpeckleParams:
    return SpeckleParams(
        rows=rows, cols=cols, seed=args.seed, mode=args.mode,
        aperture_diameter=args.aperture, macropixel=args.macropixel,
        wavelength_px=args.wavelength, distance_px=args.distance)


def _manifest_path(args, out_path) -> Path:
    if args.manifest is not None:
        return Path(args.manifest)
    return Path(str(out_path) + ".manifest.json")


def cmd_phantom(args) -> int:
    if args.kind == "double-slit":
        spec = DoubleSlitSpec(rows=args.rows, cols=args.cols,
                              slit_width=args.width, separation=args.sep,
                              slit_height=args.height,
                              orientation=args.orientation)
        img = double_slit(spec)
    elif args.kind == "glyph":
        if args.mask is not None:
            mask = np.rint(load_grayscale(args.mask))
            img = glyph_phantom(mask.shape[0], mask.shape[1], mask)
        else:
            img = aleph_phantom()
    else:
        img = (load_grayscale(args.infile) if args.infile is not None
               else portrait_phantom())
    write_pgm(args.out, img)
    _print_kv(rows=img.shape[0], cols=img.shape[1],
              sum=float(img.sum()), min=float(img.min()),
              max=float(img.max()))
    return EXIT_OK


def cmd_acquire(args) -> int:
    t0 = time.perf_counter()
    obj = load_grayscale(args.phantom)
    params = _speckle_params(args, obj.shape[0], obj.shape[1])
    ensemble = acquire(obj, params, args.m, noise_sigma=args.noise,
                       noise_seed=args.noise_seed,
                       object_name=str(args.phantom))
    write_ensemble(args.out, ensemble)
    manifest = {
        "command": ["acquire", "--phantom", str(args.phantom),
                    "--mode", args.mode,
                    "--aperture", str(params.aperture),
                    "--macropixel", str(params.macropixel),
                    "--wavelength", str(params.wavelength_px),
                    "--distance", str(params.distance_px),
                    "--m", str(args.m),
                    "--seed", str(args.seed), "--noise", str(args.noise),
                    "--noise-seed", str(args.noise_seed),
                    "--out", str(args.out)],
        "tool_version": __version__,
        "params": {
            "phantom": str(args.phantom), "mode": args.mode,
            "rows": params.rows, "cols": params.cols,
            "aperture_diameter": params.aperture, "macropixel": params.macropixel,
            "wavelength_px": params.wavelength_px,
            "distance_px": params.distance_px, "m": args.m,
            "seed": args.seed, "noise_sigma": args.noise,
            "noise_seed": args.noise_seed,
        },
        "results": {
            "bucket_mean": float(ensemble.buckets.mean()),
            "bucket_std": float(ensemble.buckets.std()),
        },
        "durations": {"total_s": time.perf_counter() - t0},
    }
    write_manifest(_manifest_path(args, args.out), manifest)
    _print_kv(m=ensemble.m, rows=params.rows, cols=params.cols,
              bucket_mean=float(ensemble.buckets.mean()))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    t0 = time.perf_counter()
    ensemble = read_ensemble(args.ensemble)
    report = None
    if args.method == "gi":
        img = gi_reconstruct(ensemble)
    elif args.method == "ls":
        img, ls_report = ls_reconstruct(ensemble, cg_iters=args.cg_iters,
                                        cg_tol=args.cg_tol)
        report = {"iterations": ls_report.iterations,
                  "residual": ls_report.residual_norm,
                  "converged": ls_report.converged}
    else:
        op = CoefficientOperator(SensingOperator(ensemble.patterns))
        tau = args.tau if args.tau is not None else default_tau(
            op, ensemble.buckets)
        solver = None
        if tau > 0:
            solver = SparseSolverConfig(tau=tau, max_iters=args.max_iters,
                                        tol=args.tol, debias=args.debias)
        img, cs_report = cs_reconstruct(ensemble, solver, center=args.center)
        report = {"tau": tau, "iterations": cs_report.iterations,
                  "final_objective": cs_report.final_objective,
                  "converged": cs_report.converged, "nnz": cs_report.nnz}

    out = Path(args.out)
    write_pgm(out, normalize_affine(img))
    sidecar = out.with_suffix(".gimg")
    write_raw_image(sidecar, img)
    command = ["reconstruct", "--ensemble", str(args.ensemble),
               "--method", args.method,
               "--max-iters", str(args.max_iters), "--tol", str(args.tol),
               "--cg-iters", str(args.cg_iters), "--cg-tol", str(args.cg_tol)]
    if args.tau is not None:
        command += ["--tau", str(args.tau)]
    if args.debias:
        command.append("--debias")
    if args.center:
        command.append("--center")
    command += ["--out", str(args.out)]
    manifest = {
        "command": command,
        "tool_version": __version__,
        "params": {
            "ensemble": str(args.ensemble), "method": args.method,
            "tau": getattr(args, "tau", None),
            "max_iters": args.max_iters, "tol": args.tol,
            "debias": args.debias, "center": args.center,
            "cg_iters": args.cg_iters, "cg_tol": args.cg_tol,
        },
        "results": {"solver": report},
        "durations": {"total_s": time.perf_counter() - t0},
    }
    write_manifest(_manifest_path(args, args.out), manifest)
    _print_kv(method=args.method, out=str(out), sidecar=str(sidecar))
    return EXIT_OK


def _masks_from_file(path, shape) -> RegionMasks:
    values, maxval = read_pgm(path)
    if values.shape != shape:
        raise ParameterError(
            f"mask file shape {values.shape} does not match image {shape}")
    return RegionMasks(bright=values == maxval, dark=values == 0)


def cmd_evaluate(args) -> int:
    t0 = time.perf_counter()
    recon = load_any_image(args.recon)
    reference = load_grayscale(args.reference)
    if recon.shape != reference.shape:
        raise ParameterError(
            f"reconstruction {recon.shape} does not match reference "
            f"{reference.shape}")
    mse_value = mse(recon, reference)

    snr_value = None
    masks = None
    if args.masks == "auto":
        if not np.all(np.isin(np.unique(reference), (0, 1))):
            raise ParameterError(
                "--masks auto needs a binary reference; pass an explicit "
                "mask PGM (bright=maxval, dark=0) via --masks PATH")
        masks = auto_masks(reference, erode_px=args.erode)
    elif args.masks != "none":
        masks = _masks_from_file(args.masks, reference.shape)
    if masks is not None:
        try:
            snr_value = snr(recon, masks)
        except DegenerateInputError as exc:
            # constant background: SNR undefined, MSE still meaningful
            print(f"warning: snr skipped: {exc}", file=sys.stderr)

    if snr_value is not None:
        _print_kv(snr=snr_value)
    _print_kv(mse=mse_value)
    if masks is not None:
        _print_kv(bright_px=int(masks.bright.sum()),
                  dark_px=int(masks.dark.sum()))

    if args.manifest is not None:
        results = {"mse": mse_value}
        if snr_value is not None:
            results["snr"] = snr_value
            results["bright_px"] = int(masks.bright.sum())
            results["dark_px"] = int(masks.dark.sum())
        write_manifest(args.manifest, {
            "command": ["evaluate", "--recon", str(args.recon),
                        "--reference", str(args.reference),
                        "--masks", str(args.masks),
                        "--erode", str(args.erode)],
            "tool_version": __version__,
            "params": {"recon": str(args.recon),
                       "reference": str(args.reference),
                       "masks": str(args.masks), "erode": args.erode},
            "results": results,
            "durations": {"total_s": time.perf_counter() - t0},
        })
    return EXIT_OK


def cmd_pipeline(args) -> int:
    config = preset_config(args.preset, seed=args.seed)
    overrides = {}
    if args.tau is not None:
        overrides["tau"] = args.tau
    if args.m is not None:
        overrides["m"] = args.m
    if overrides:
        from dataclasses import replace
        config = replace(config, **overrides)
    manifest = run_pipeline(config, out_dir=args.out_dir)
    results = manifest["results"]
    for key in ("snr_gi", "snr_cs", "snr_ratio_cs_over_gi",
                "mse_gi", "mse_cs", "mse_ratio_gi_over_cs",
                "fwhm_px", "resolution_cells"):
        if key in results:
            _print_kv(**{key: results[key]})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghostimaging",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="generate a test object as PGM")
    p.add_argument("kind", choices=("double-slit", "glyph", "grayscale"))
    p.add_argument("--rows", type=int, default=64)
    p.add_argument("--cols", type=int, default=64)
    p.add_argument("--width", type=int, default=6, help="slit width, px")
    p.add_argument("--sep", type=int, default=14,
                   help="slit center-to-center separation, px")
    p.add_argument("--height", type=int, default=40, help="slit height, px")
    p.add_argument("--orientation", choices=("vertical", "horizontal"),
                   default="vertical")
    p.add_argument("--mask", default=None,
                   help="binary mask PGM for the glyph kind")
    p.add_argument("--in", dest="infile", default=None,
                   help="grayscale PGM input (default: shipped portrait)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("acquire", help="simulate bucket measurements")
    p.add_argument("--phantom", required=True, help="object PGM")
    p.add_argument("--mode", choices=("spectral", "fresnel"),
                   default="spectral")
    p.add_argument("--aperture", type=float, default=None,
                   help="spectral disk diameter, frequency-grid px")
    p.add_argument("--macropixel", type=int, default=4)
    p.add_argument("--wavelength", type=float, default=0.5)
    p.add_argument("--distance", type=float, default=400.0)
    p.add_argument("--m", type=int, required=True,
                   help="number of measurements")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0,
                   help="relative bucket noise std")
    p.add_argument("--noise-seed", type=int, default=0)
    p.add_argument("--out", required=True, help="GIEN output path")
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_acquire)

    p = sub.add_parser("reconstruct", help="reconstruct from an ensemble")
    p.add_argument("--ensemble", required=True, help="GIEN input path")
    p.add_argument("--method", choices=("gi", "ls", "cs"), required=True)
    p.add_argument("--tau", type=float, default=None,
                   help="L1 weight (default: 0.1 * ||A^T b||_inf)")
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--debias", action="store_true")
    p.add_argument("--center", action="store_true",
                   help="subtract ensemble means from patterns and buckets")
    p.add_argument("--cg-iters", type=int, default=20000)
    p.add_argument("--cg-tol", type=float, default=1e-14)
    p.add_argument("--out", required=True,
                   help="PGM output (a .gimg raw sidecar is written too)")
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("evaluate", help="SNR/MSE of a reconstruction")
    p.add_argument("--recon", required=True, help="PGM or GIMG")
    p.add_argument("--reference", required=True, help="PGM in [0, 1]")
    p.add_argument("--masks", default="auto",
                   help="'auto', 'none', or a mask PGM "
                        "(bright=maxval, dark=0)")
    p.add_argument("--erode", type=int, default=1)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="full preset run")
    p.add_argument("--preset", choices=PRESET_NAMES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=None,
                   help="override the preset's measurement count")
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverDivergenceError, DegenerateInputError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, FileNotFoundError, IsADirectoryError,
            PermissionError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
