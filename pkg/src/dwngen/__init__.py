"""Toolkit for weightless-network FPGA accelerators with explicit encoders.

Compiles a trained single-layer DWN description (thermometer thresholds,
encoder-to-LUT wiring, truth tables) down to a k-input-LUT netlist and
structural Verilog, with a bit-exact software golden model, fixed-point
post-training quantization search, and per-component resource estimates.
"""

from .encoder import (
    distributive_thresholds,
    encode_batch,
    encode_feature,
    encode_sample,
    uniform_thresholds,
)
from .fixedpoint import (
    CapacityError,
    FixedPointFormat,
    PtqResult,
    ptq_search,
    quantize_dataset,
    quantize_model,
    quantize_value,
)
from .model import (
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
from .netlist import (
    ComponentBreakdown,
    LutNetlist,
    MacroNetlist,
    build_macro_netlist,
    build_macro_netlist_for_shape,
    interpret_luts,
    interpret_luts_batch,
    interpret_macro,
    interpret_macro_batch,
    lower_to_luts,
    resource_report,
)
from .simulator import accuracy, argmax, class_scores, infer, lut_eval, predict
from .trainer import fit_toy, gaussian_blobs
from .verilog import emit_testbench, emit_verilog, golden_vectors

__version__ = "0.1.0"
