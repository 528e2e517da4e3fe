"""Command-line entry point tying the whole flow together.

``pipeline`` runs the full workflow on one dataset: normalize, fit (or
load) a model, search the fractional bit-width, quantize, check accuracy,
lower to LUTs, report resources, and emit Verilog plus a self-checking
bench.  Every stage is also exposed as its own subcommand.

Datasets arrive as raw CSV and are normalized per feature with their own
min/max; when a model is fixed-point, inputs are quantized to the model's
format before simulation so results match the generated hardware.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import encoder, fixedpoint, netlist, simulator, trainer, verilog
from .model import (
    PRESET_BASELINES,
    PRESETS,
    Dataset,
    DatasetFormatError,
    DwnModel,
    ModelConfig,
    ModelFormatError,
    load_dataset,
    load_model,
    normalize_dataset,
    save_model,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_MISSING_FILE = 3
EXIT_INVALID = 4
EXIT_INFEASIBLE = 5

_EPILOG = """\
exit codes:
  0  success
  1  other runtime failure
  2  usage error
  3  missing input file
  4  invalid model/dataset/arguments
  5  quantization capacity exceeded or no feasible bit-width
"""


def _say(args, message: str) -> None:
    if not args.quiet and not args.json:
        print(message)


def _read_text(path: str) -> str:
    return Path(path).read_text()


def _load_model_file(path: str) -> DwnModel:
    return load_model(_read_text(path))


def _infer_columns(text: str) -> int:
    for line in text.splitlines():
        if line.strip():
            return len(line.split(","))
    return 0


def _load_dataset_file(path: str, num_features: int | None, skip_header: bool) -> Dataset:
    text = _read_text(path)
    if num_features is None:
        cols = _infer_columns(text)
        if cols < 2:
            raise DatasetFormatError(f"{path}: cannot infer feature count")
        num_features = cols - 1
    return load_dataset(text, num_features, skip_header=skip_header)


def _prepare_data(args, model: DwnModel | None = None) -> Dataset:
    """Load, normalize, and (for fixed models) quantize a CSV dataset."""
    features = model.num_features if model is not None else args.num_features
    data = _load_dataset_file(args.data, features, args.skip_header)
    data = normalize_dataset(data)
    if model is not None and model.frac_bits is not None:
        data = fixedpoint.quantize_dataset(data, model.frac_bits)
    return data


def _module_name(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9_]", "", name)
    if not cleaned or cleaned[0].isdigit():
        cleaned = "m_" + cleaned
    return cleaned


def _parse_shape(text: str) -> ModelConfig:
    parts = text.split(",")
    if len(parts) != 5:
        raise ValueError("--shape needs F,T,k,C,luts_per_class")
    f, t, k, c, lpc = (int(p) for p in parts)
    return ModelConfig(f, t, k, c, lpc)


def _config_from_args(args) -> ModelConfig:
    if args.preset:
        if args.preset not in PRESETS:
            raise ValueError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
        return PRESETS[args.preset]
    if args.shape:
        return _parse_shape(args.shape)
    raise ValueError("one of --preset or --shape is required")


# -- subcommands -----------------------------------------------------------

def cmd_thresholds(args) -> int:
    data = _load_dataset_file(args.data, args.num_features, args.skip_header)
    data = normalize_dataset(data)
    matrix = encoder.thresholds_for_dataset(data.features, args.bits, args.mode)
    lines = ["feature,index,threshold,mode"]
    for f, row in enumerate(matrix):
        for j, t in enumerate(row):
            lines.append(f"{f},{j},{t!r},{args.mode}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        _say(args, f"wrote {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_train_toy(args) -> int:
    config = _config_from_args(args)
    data = _load_dataset_file(args.data, config.num_features, args.skip_header)
    data = normalize_dataset(data)
    model = trainer.fit_toy(
        data,
        config,
        seed=args.seed,
        hill_climb_budget=args.hill_climb_budget,
        name=args.name,
    )
    Path(args.out).write_text(save_model(model))
    acc = simulator.accuracy(model, data)
    if args.json:
        print(json.dumps({"model": args.out, "train_accuracy": acc}))
    else:
        _say(args, f"wrote {args.out} (train accuracy {acc:.4f})")
    return EXIT_OK


def cmd_quantize(args) -> int:
    model = _load_model_file(args.model)
    quantized = fixedpoint.quantize_model(model, args.frac_bits)
    Path(args.out).write_text(save_model(quantized))
    _say(args, f"wrote {args.out} (fixed({args.frac_bits}), {args.frac_bits + 1}-bit words)")
    return EXIT_OK


def _trace_csv(result: fixedpoint.PtqResult) -> str:
    lines = ["frac_bits,accuracy,status"]
    for n, acc in result.trace:
        if acc is None:
            lines.append(f"{n},,capacity_error")
        else:
            status = "pass" if acc >= result.baseline else "fail"
            lines.append(f"{n},{acc!r},{status}")
    return "\n".join(lines) + "\n"


def cmd_ptq(args) -> int:
    model = _load_model_file(args.model)
    data = _prepare_data(args)
    result = fixedpoint.ptq_search(model, data, args.baseline, n_max=args.n_max)
    if args.emit_trace:
        Path(args.emit_trace).write_text(_trace_csv(result))
    if args.json:
        print(json.dumps({
            "baseline": result.baseline,
            "chosen_n": result.chosen_n,
            "accuracy": result.accuracy,
            "trace": [[n, acc] for n, acc in result.trace],
        }))
    elif result.feasible:
        _say(args, f"chosen frac_bits = {result.chosen_n} (accuracy {result.accuracy:.4f})")
    if not result.feasible:
        print(f"error: no bit-width in [1, {args.n_max}] meets baseline {args.baseline}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = _load_model_file(args.model)
    data = _prepare_data(args, model)
    predicted = simulator.predict(model, data.features)
    if args.emit_predictions:
        lines = ["sample,predicted,label"]
        for i, (p, y) in enumerate(zip(predicted, data.labels)):
            lines.append(f"{i},{p},{y}")
        Path(args.emit_predictions).write_text("\n".join(lines) + "\n")
    acc = float(np.mean(predicted == data.labels))
    if args.json:
        print(json.dumps({"samples": len(data), "accuracy": acc}))
    else:
        _say(args, f"{len(data)} samples, accuracy {acc:.4f}")
    return EXIT_OK


def cmd_accuracy(args) -> int:
    model = _load_model_file(args.model)
    data = _prepare_data(args, model)
    print(f"{simulator.accuracy(model, data):.6f}")
    return EXIT_OK


def _generate_files(args, model: DwnModel, out_dir: Path) -> dict:
    module = args.module_name or _module_name(model.name)
    lowered = netlist.lower_to_luts(netlist.build_macro_netlist(model))
    rng = np.random.default_rng(args.seed)
    vectors = verilog.golden_vectors(lowered, args.tb_vectors, rng)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{module}.v").write_text(
        verilog.emit_verilog(lowered, module, registered_io=args.registered_io)
    )
    (out_dir / f"{module}_tb.v").write_text(
        verilog.emit_testbench(lowered, vectors, module, registered_io=args.registered_io)
    )
    (out_dir / "vectors.csv").write_text(
        verilog.vectors_to_csv(vectors, model.num_features)
    )
    return {
        "module": module,
        "verilog": str(out_dir / f"{module}.v"),
        "testbench": str(out_dir / f"{module}_tb.v"),
        "vectors": str(out_dir / "vectors.csv"),
        "lut_nodes": len(lowered.nodes),
    }


def cmd_generate(args) -> int:
    model = _load_model_file(args.model)
    if model.frac_bits is None:
        raise ModelFormatError("model has real thresholds; run `dwngen quantize` first")
    info = _generate_files(args, model, Path(args.out_dir))
    if args.json:
        print(json.dumps(info))
    else:
        _say(args, f"wrote {info['verilog']}, {info['testbench']}, {info['vectors']}")
    return EXIT_OK


def _breakdown_rows(model: DwnModel, widths: list[int]) -> list[netlist.ComponentBreakdown]:
    rows = []
    for w in widths:
        if w < 2:
            raise ValueError(f"width {w} too small; signed (1,n) needs at least 2 bits")
        macro = netlist.build_macro_netlist_for_shape(model.config, w - 1, model.name)
        rows.append(netlist.resource_report(netlist.lower_to_luts(macro), model))
    return rows


def cmd_report(args) -> int:
    model = _load_model_file(args.model)
    if args.widths:
        widths = [int(w) for w in args.widths.split(",")]
    elif model.frac_bits is not None:
        widths = [model.frac_bits + 1]
    else:
        raise ValueError("--widths is required for real-valued models")
    rows = _breakdown_rows(model, widths)
    if args.json:
        print(json.dumps([r.to_dict() for r in rows]))
        return EXIT_OK
    lines = ["# mapped LUT-node estimate under dwngen's documented lowering,"]
    lines.append("# not a vendor synthesis result")
    lines.append(netlist.ComponentBreakdown.CSV_HEADER)
    lines += [r.to_csv_row() for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        _say(args, f"wrote {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    out_dir = Path(args.out_dir)
    config = _config_from_args(args)
    if args.baseline is None:
        if args.preset not in PRESET_BASELINES:
            raise ValueError("--baseline is required unless --preset has a reference accuracy")
        args.baseline = PRESET_BASELINES[args.preset]
        _say(args, f"using reference baseline {args.baseline} for {args.preset}")
    raw = _load_dataset_file(args.data, config.num_features, args.skip_header)
    data = normalize_dataset(raw)
    _say(args, f"loaded {len(data)} samples x {data.num_features} features")

    model = trainer.fit_toy(
        data, config, seed=args.seed, hill_climb_budget=args.hill_climb_budget,
        name=args.name or (args.preset or "custom"),
    )
    train_acc = simulator.accuracy(model, data)
    _say(args, f"toy fit: train accuracy {train_acc:.4f}")

    result = fixedpoint.ptq_search(model, data, args.baseline, n_max=args.n_max)
    if not result.feasible:
        print(
            f"error: no bit-width in [1, {args.n_max}] meets baseline {args.baseline}",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    _say(args, f"ptq: frac_bits {result.chosen_n}, accuracy {result.accuracy:.4f}")

    quantized = fixedpoint.quantize_model(model, result.chosen_n)
    qdata = fixedpoint.quantize_dataset(data, result.chosen_n)
    final_acc = simulator.accuracy(quantized, qdata)

    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "model.json").write_text(save_model(quantized))

    rows = _breakdown_rows(quantized, [result.chosen_n + 1])
    breakdown = rows[0]
    (out_dir / "breakdown.csv").write_text(
        netlist.ComponentBreakdown.CSV_HEADER + "\n" + breakdown.to_csv_row() + "\n"
    )

    info = _generate_files(args, quantized, out_dir)
    summary = {
        "train_accuracy": train_acc,
        "chosen_frac_bits": result.chosen_n,
        "quantized_accuracy": final_acc,
        "breakdown": breakdown.to_dict(),
        "model": str(out_dir / "model.json"),
        **info,
    }
    if args.json:
        print(json.dumps(summary))
    else:
        _say(args, f"quantized accuracy {final_acc:.4f}; artifacts in {out_dir}/")
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def _add_data_opts(p, with_features: bool = True) -> None:
    p.add_argument("--data", required=True, help="CSV: feature columns then an integer label")
    if with_features:
        p.add_argument("--num-features", type=int, default=None,
                       help="feature count (default: columns - 1)")
    p.add_argument("--skip-header", action="store_true", help="skip the first CSV line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwngen",
        description="Weightless-network accelerator toolkit: encode, quantize, simulate, generate.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--quiet", action="store_true", help="suppress progress chatter")
    # the same globals are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw))

    p = sub.add_parser("thresholds", help="emit threshold CSV (feature,index,threshold,mode)")
    _add_data_opts(p)
    p.add_argument("--bits", type=int, default=200, help="thresholds per feature")
    p.add_argument("--mode", choices=["uniform", "distributive"], default="distributive")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("train-toy", help="fit the desk-scale majority-vote model")
    _add_data_opts(p, with_features=False)
    p.add_argument("--preset", default=None, help=f"one of {', '.join(PRESETS)}")
    p.add_argument("--custom-shape", "--shape", dest="shape", default=None,
                   help="custom F,T,k,C,luts_per_class")
    p.add_argument("--hill-climb-budget", type=int, default=0)
    p.add_argument("--name", default="toy")
    p.add_argument("--out", required=True, help="output model JSON path")
    p.set_defaults(func=cmd_train_toy)

    p = sub.add_parser("quantize", help="quantize thresholds to signed (1,n) fixed point")
    p.add_argument("--model", required=True)
    p.add_argument("--frac-bits", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("ptq", help="search the smallest fractional bit-width meeting a baseline")
    p.add_argument("--model", required=True)
    _add_data_opts(p)
    p.add_argument("--baseline", type=float, required=True)
    p.add_argument("--n-max", type=int, default=15)
    p.add_argument("--emit-trace", default=None, help="CSV path for the sweep trace")
    p.set_defaults(func=cmd_ptq)

    p = sub.add_parser("simulate", help="run the golden model over a dataset")
    p.add_argument("--model", required=True)
    _add_data_opts(p)
    p.add_argument("--emit-predictions", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("accuracy", help="print the accuracy fraction and nothing else")
    p.add_argument("--model", required=True)
    _add_data_opts(p)
    p.set_defaults(func=cmd_accuracy)

    p = sub.add_parser("generate", help="emit Verilog, testbench and golden vectors")
    p.add_argument("--model", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--module-name", default=None)
    p.add_argument("--registered-io", action="store_true")
    p.add_argument("--tb-vectors", type=int, default=100)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("report", help="per-component LUT-node breakdown across widths")
    p.add_argument("--model", required=True)
    p.add_argument("--widths", default=None, help="comma-separated input bit-widths")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline", help="dataset -> toy fit -> ptq -> netlist -> Verilog")
    _add_data_opts(p, with_features=False)
    p.add_argument("--preset", default=None)
    p.add_argument("--custom-shape", "--shape", dest="shape", default=None)
    p.add_argument("--baseline", type=float, default=None,
                   help="accuracy the bit-width search must keep "
                        "(default: the preset's reference accuracy)")
    p.add_argument("--n-max", type=int, default=15)
    p.add_argument("--hill-climb-budget", type=int, default=0)
    p.add_argument("--name", default=None)
    p.add_argument("--module-name", default=None)
    p.add_argument("--registered-io", action="store_true")
    p.add_argument("--tb-vectors", type=int, default=100)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as e:
        print(f"error: missing file: {e.filename or e}", file=sys.stderr)
        return EXIT_MISSING_FILE
    except fixedpoint.CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ModelFormatError, DatasetFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
