"""Command-line front end: ``cyclefuse {fuse,ablate,metrics,simulate}``.

Exit codes: 0 success, 2 bad arguments, 3 I/O failure, 4 pipeline
precondition violated.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from cyclefuse import __version__
from cyclefuse.fusion import AblationMode, FusionConfig, fold
from cyclefuse.image import ImageError, PreconditionError, SequenceManifest, read_pgm, remap_to_gray, write_pgm
from cyclefuse.metrics import MetricsReport, compare_methods, information_entropy, ms_ssim
from cyclefuse.saliency import saliency_map
from cyclefuse.simulator import Pattern, SceneSpec, generate_sequence
from cyclefuse.wavelet import Family, WaveletSpec, pad_even

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PRECONDITION = 0, 2, 3, 4


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {value}")
    return value


def _add_fuse_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", required=True, help="sequence manifest JSON")
    p.add_argument("--out", required=True, help="output PGM path")
    p.add_argument("--wavelet", choices=[f.value for f in Family], default=Family.DB2.value)
    p.add_argument("--no-align", action="store_true", help="skip template-matching alignment")
    p.add_argument("--template-frac", type=_fraction, default=0.5)
    p.add_argument("--max-shift", type=_non_negative_int, default=32)
    p.add_argument("--no-remap", action="store_true", help="clip to [0, 255] instead of min-max stretching")
    p.add_argument("--report", help="write a JSON run report here")
    p.add_argument("--reference", help="reference PGM; adds IE/MS-SSIM comparison to the report")
    p.add_argument("--debug-saliency", metavar="DIR", help="dump each frame's saliency map as PGM into DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclefuse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fuse = sub.add_parser("fuse", help="cyclic wavelet fusion of a frame sequence")
    _add_fuse_flags(fuse)

    abl = sub.add_parser("ablate", help="fusion with one mechanism removed")
    abl.add_argument("--mode", required=True, choices=["no-wavelet", "lf-pick-first", "hf-max"])
    _add_fuse_flags(abl)

    met = sub.add_parser("metrics", help="information entropy and MS-SSIM of an image")
    met.add_argument("--image", required=True)
    met.add_argument("--reference")
    met.add_argument("--out", help="write JSON here instead of standard output")

    sim = sub.add_parser("simulate", help="render a synthetic rolling-contact sequence")
    sim.add_argument("--pattern", choices=[p.value for p in Pattern], default="point")
    sim.add_argument("--mask", help="mask PGM for --pattern custom (pixels >= 128 are pattern)")
    sim.add_argument("--frames", type=_positive_int, default=4)
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--seed", type=_non_negative_int, default=42)
    sim.add_argument("--width", type=_positive_int, default=640)
    sim.add_argument("--height", type=_positive_int, default=480)
    sim.add_argument("--contact-halfwidth", type=float, default=SceneSpec.contact_halfwidth)
    sim.add_argument("--amplitude", type=float, default=SceneSpec.amplitude)
    sim.add_argument("--background", type=float, default=SceneSpec.background)
    sim.add_argument("--blur-sigma-max", type=float, default=SceneSpec.blur_sigma_max)
    sim.add_argument("--noise-sigma", type=float, default=SceneSpec.noise_sigma)
    sim.add_argument("--roll-step", type=int, default=SceneSpec.roll_step)
    return parser


def _config(args: argparse.Namespace) -> FusionConfig:
    return FusionConfig(
        wavelet=WaveletSpec(Family(args.wavelet)),
        align=not args.no_align,
        template_frac=args.template_frac,
        max_shift=args.max_shift,
        remap=not args.no_remap,
    )


def _write_json(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _run_fold(args: argparse.Namespace, mode: AblationMode | None) -> int:
    started = time.perf_counter()
    config = _config(args)
    manifest = SequenceManifest.load(args.manifest)
    frames = manifest.load_frames()
    reference = read_pgm(args.reference) if args.reference else None
    result = fold(frames, config, mode)
    write_pgm(result.image, args.out)
    outputs = [args.out]
    if args.debug_saliency:
        dump = Path(args.debug_saliency)
        dump.mkdir(parents=True, exist_ok=True)
        for i, frame in enumerate(frames):
            path = dump / f"saliency_{i:03d}.pgm"
            write_pgm(remap_to_gray(saliency_map(pad_even(frame))), path)
            outputs.append(str(path))
    if args.report:
        report = {
            "command": args.command,
            "argv": args.argv,
            "mode": mode.value if mode else None,
            "config": config.to_dict(),
            "manifest": str(args.manifest),
            "frames": [str(p) for p in manifest.frame_paths()],
            "shifts": [{"frame": i + 1, "dx": s.dx, "dy": s.dy, "score": s.score} for i, s in enumerate(result.shifts)],
            "outputs": outputs,
            "metrics": None,
            "duration_s": None,
        }
        if reference is not None:
            cmp = compare_methods(
                result.image,
                frames,
                reference,
                fused_path=args.out,
                single_paths=[str(p) for p in manifest.frame_paths()],
                reference_path=args.reference,
            )
            report["metrics"] = cmp.to_dict()
        report["duration_s"] = round(time.perf_counter() - started, 6)
        _write_json(report, args.report)
    return EXIT_OK


def cmd_fuse(args: argparse.Namespace) -> int:
    return _run_fold(args, None)


def cmd_ablate(args: argparse.Namespace) -> int:
    return _run_fold(args, AblationMode.parse(args.mode))


def cmd_metrics(args: argparse.Namespace) -> int:
    image = read_pgm(args.image)
    score = None
    if args.reference:
        reference = read_pgm(args.reference)
        if reference.shape != image.shape:
            raise PreconditionError(
                f"reference is {reference.width}x{reference.height}, image is {image.width}x{image.height}"
            )
        score = ms_ssim(image, reference)
    report = MetricsReport(
        ie=information_entropy(image), ms_ssim=score, image_path=args.image, reference_path=args.reference
    )
    _write_json(report.to_dict(), args.out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = SceneSpec(
        pattern=Pattern(args.pattern),
        width=args.width,
        height=args.height,
        frames=args.frames,
        contact_halfwidth=args.contact_halfwidth,
        amplitude=args.amplitude,
        background=args.background,
        blur_sigma_max=args.blur_sigma_max,
        noise_sigma=args.noise_sigma,
        roll_step=args.roll_step,
        seed=args.seed,
        mask_path=args.mask,
    )
    generate_sequence(spec, args.out)
    return EXIT_OK


COMMANDS = {"fuse": cmd_fuse, "ablate": cmd_ablate, "metrics": cmd_metrics, "simulate": cmd_simulate}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        return COMMANDS[args.command](args)
    except (ImageError, OSError) as exc:
        code, msg = EXIT_IO, str(exc)
    except PreconditionError as exc:
        code, msg = EXIT_PRECONDITION, str(exc)
    print(f"cyclefuse {args.command}: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
