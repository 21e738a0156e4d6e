"""Command-line entry point: generate, detect, evaluate, inspect.

Exit codes: 0 success, 2 usage error, 3 input parse error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import formats
from .errors import FormatError, MflError, SpecInvalid
from .evaluate import EvalReport, METHODS, format_report_table, match_detections, run_ablation
from .ingest import PreprocessConfig
from .pipeline import process_record
from .ssr import AdaptiveConfig, build_context
from .synth import GroundTruthFlaw, SynthSpec, generate, scenario_presets

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INTERNAL = 4

# flat key = value config keys and their target (section, field, type)
CONFIG_KEYS = {
    "half_span_la": ("preprocess", "half_span_la", int),
    "image_height": ("preprocess", "image_height", int),
    "segment_length": ("preprocess", "segment_length", int),
    "fs_extreme_hz": ("adaptive", "fs_extreme_hz", float),
    "v_extreme_mps": ("adaptive", "v_extreme_mps", float),
    "kernel_base": ("adaptive", "kernel_base", int),
    "alpha": ("adaptive", "alpha", float),
    "gamma": ("adaptive", "gamma", float),
    "fusion_mode": ("run", "fusion_mode", str),
    "method": ("run", "method", str),
    "min_area_px": ("run", "min_area_px", int),
    "threshold_step": ("run", "threshold_step", float),
}


class RunConfig:
    def __init__(self):
        self.preprocess = {}
        self.adaptive = {}
        self.run = {"fusion_mode": "recursive", "method": "adaptive",
                    "min_area_px": 4, "threshold_step": 0.05}

    def preprocess_cfg(self) -> PreprocessConfig:
        return PreprocessConfig(**self.preprocess)

    def adaptive_cfg(self) -> AdaptiveConfig:
        return AdaptiveConfig(**self.adaptive)


def load_config(path: Path | str) -> RunConfig:
    """Parse a flat `key = value` config file; unknown keys are rejected."""
    cfg = RunConfig()
    path = Path(path)
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{path}:{lineno}: expected `key = value`")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise FormatError(f"{path}:{lineno}: unknown key {key!r}")
        section, field, cast = CONFIG_KEYS[key]
        try:
            value = cast(raw.strip())
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from exc
        getattr(cfg, section)[field] = value
    return cfg


def _load_spec(spec_arg: str, seed: int | None) -> SynthSpec:
    presets = scenario_presets()
    if spec_arg in presets:
        spec = presets[spec_arg]
    else:
        path = Path(spec_arg)
        if not path.exists():
            raise FormatError(
                f"{spec_arg!r} is neither a preset ({', '.join(presets)}) nor a file"
            )
        try:
            payload = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
        try:
            flaws = tuple(
                GroundTruthFlaw(**flaw) for flaw in payload.pop("flaws", [])
            )
            spec = SynthSpec(flaws=flaws, **payload)
        except TypeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    if seed is not None:
        spec = dataclasses.replace(spec, rng_seed=seed)
    return spec


def cmd_generate(args) -> int:
    spec = _load_spec(args.spec, args.seed)
    record, flaws = generate(spec)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    record_path = out.with_suffix(".mfl")
    truth_path = out.parent / (out.stem + "_truth.json")
    formats.write_record_binary(record_path, record)
    formats.write_ground_truth(truth_path, flaws)
    print(f"wrote {record_path} ({record.sample_count} samples) and {truth_path}")
    return EXIT_OK


def cmd_detect(args) -> int:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.fusion_mode:
        cfg.run["fusion_mode"] = args.fusion_mode
    if args.method:
        cfg.run["method"] = {"single": "single_scale",
                             "unweighted": "unweighted_multiscale",
                             "adaptive": "adaptive"}[args.method]
    record = formats.read_record(args.record)
    dump_dir = None
    if args.dump_stages:
        dump_dir = Path(args.dump_stages)
        dump_dir.mkdir(parents=True, exist_ok=True)
    result = process_record(
        record,
        preprocess_cfg=cfg.preprocess_cfg(),
        adaptive_cfg=cfg.adaptive_cfg(),
        method=cfg.run["method"],
        fusion_mode=cfg.run["fusion_mode"],
        min_area_px=cfg.run["min_area_px"],
        threshold_step=cfg.run["threshold_step"],
        dump_dir=dump_dir,
    )
    out = Path(args.out) if args.out else Path(args.record).with_suffix(".detections.json")
    formats.write_detections(out, record.label, result.context.f_spatial, result.detections)
    print(f"wrote {out} ({len(result.detections)} detections)")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    reports: dict[str, EvalReport] = {}
    if args.ablation:
        if not args.record or len(args.record) != len(args.truth):
            print("--ablation needs --record and --truth lists of equal length",
                  file=sys.stderr)
            return EXIT_USAGE
        cfg = load_config(args.config) if args.config else RunConfig()
        dataset = [
            (formats.read_record(rec), formats.read_ground_truth(tru))
            for rec, tru in zip(args.record, args.truth)
        ]
        for method in METHODS:
            reports[method] = run_ablation(
                dataset, method, cfg.preprocess_cfg(), cfg.adaptive_cfg()
            )
    else:
        if not args.det or len(args.det) != len(args.truth):
            print("need --det and --truth lists of equal length", file=sys.stderr)
            return EXIT_USAGE
        report = EvalReport(method_tag="adaptive")
        for det_path, truth_path in zip(args.det, args.truth):
            f_spatial, detections = formats.read_detections(det_path)
            truths = formats.read_ground_truth(truth_path)
            report.add(*match_detections(detections, truths, f_spatial, args.kernel_size))
        reports["adaptive"] = report
    table = format_report_table(reports)
    print(table)
    if args.out:
        payload = {
            "schema_version": formats.SCHEMA_VERSION,
            "reports": {
                name: {
                    "method": rep.method_tag,
                    "tp": rep.tp, "fp": rep.fp, "fn": rep.fn,
                    "precision": rep.precision,
                    "recall": rep.recall,
                    "f1": rep.f1,
                }
                for name, rep in reports.items()
            },
        }
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_inspect(args) -> int:
    cfg = load_config(args.config) if args.config else RunConfig()
    record = formats.read_record(args.record)
    context = build_context(
        record.sampling_rate_hz, record.inspection_speed_mps, cfg.adaptive_cfg()
    )
    if args.dump_stages:
        dump_dir = Path(args.dump_stages)
        dump_dir.mkdir(parents=True, exist_ok=True)
        process_record(
            record,
            preprocess_cfg=cfg.preprocess_cfg(),
            adaptive_cfg=cfg.adaptive_cfg(),
            dump_dir=dump_dir,
        )
    print(json.dumps({
        "schema_version": formats.SCHEMA_VERSION,
        "f_spatial": context.f_spatial,
        "mu": context.mu,
        "K_a": context.kernel_size,
        "weights": list(context.weights),
    }, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mflscan",
        description="Detect local flaws in steel wire ropes from MFL records.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="synthesize a record with ground truth")
    p_gen.add_argument("spec", help="preset name or JSON spec file")
    p_gen.add_argument("--out", required=True, help="output basename")
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.set_defaults(func=cmd_generate)

    p_det = sub.add_parser("detect", help="run the detection pipeline on a record")
    p_det.add_argument("record")
    p_det.add_argument("--config")
    p_det.add_argument("--out")
    p_det.add_argument("--dump-stages", metavar="DIR")
    p_det.add_argument("--fusion-mode", choices=("recursive", "flat"))
    p_det.add_argument("--method", choices=("single", "unweighted", "adaptive"))
    p_det.set_defaults(func=cmd_detect)

    p_eval = sub.add_parser("evaluate", help="score detections against ground truth")
    p_eval.add_argument("--det", nargs="*", default=[])
    p_eval.add_argument("--truth", nargs="*", default=[])
    p_eval.add_argument("--record", nargs="*", default=[])
    p_eval.add_argument("--ablation", action="store_true",
                        help="re-run the pipeline with all three methods")
    p_eval.add_argument("--config")
    p_eval.add_argument("--kernel-size", type=int, default=5)
    p_eval.add_argument("--out")
    p_eval.set_defaults(func=cmd_evaluate)

    p_ins = sub.add_parser("inspect", help="report SSR-derived quantities for a record")
    p_ins.add_argument("record")
    p_ins.add_argument("--config")
    p_ins.add_argument("--dump-stages", metavar="DIR")
    p_ins.set_defaults(func=cmd_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, SpecInvalid, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MflError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
