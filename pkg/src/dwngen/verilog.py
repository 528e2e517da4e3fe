"""Structural Verilog emission for lowered netlists, plus testbenches.

Every LUT node becomes one localparam truth-table constant and one
continuous assignment indexing it with the concatenated input bits
(fanin 0 is the least significant address bit).  Emission is purely
deterministic: the same netlist always produces byte-identical text.

Truth-table-indexing assignments keep the output simulator-agnostic;
synthesis tools re-map them onto device LUTs freely.
"""

from __future__ import annotations

import re

import numpy as np

from .netlist import CONST0, CONST1, LutNetlist, interpret_luts_batch

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_KEYWORDS = frozenset(
    "always assign begin case default else end endcase endmodule endtask for "
    "if initial inout input integer localparam module negedge output parameter "
    "posedge reg task wire".split()
)


def _check_name(name: str) -> None:
    if not _IDENT.match(name) or name in _KEYWORDS:
        raise ValueError(f"invalid HDL identifier: {name!r}")


def _table_literal(table: int, arity: int) -> str:
    bits = 1 << arity
    digits = max(1, (bits + 3) // 4)
    return f"{bits}'h{table:0{digits}x}"


def _bit_ref(net: LutNetlist, ref: int, input_prefix: str) -> str:
    if ref == CONST0:
        return "1'b0"
    if ref == CONST1:
        return "1'b1"
    if ref < net.num_input_bits:
        f, b = divmod(ref, net.word_width)
        return f"{input_prefix}{f}[{b}]"
    return f"n{ref}"


def _concat(refs: list[str]) -> str:
    if len(refs) == 1:
        return refs[0]
    return "{" + ", ".join(reversed(refs)) + "}"  # MSB first


def emit_verilog(net: LutNetlist, module_name: str, registered_io: bool = False) -> str:
    """One structural module for the whole design.

    Ports: per-feature signed inputs in_f0..in_f{F-1} of word_width bits,
    class_idx and max_val outputs, plus clk when registered_io inserts the
    input/output register stage (latency 2 cycles).
    """
    _check_name(module_name)
    if not net.nodes:
        raise ValueError("cannot emit an empty netlist")

    w = net.word_width
    qw = len(net.index_nets)
    pw = len(net.value_nets)
    feats = range(net.num_features)
    in_prefix = "in_q_f" if registered_io else "in_f"

    lines: list[str] = []
    lines.append(f"// {module_name}: weightless-network inference core (generated by dwngen)")
    lines.append(f"// Inputs: {net.num_features} features, each a signed two's-complement word")
    if net.frac_bits is not None:
        lines.append(f"//   in fixed-point (1,{net.frac_bits}) format: value = word * 2^-{net.frac_bits},")
        lines.append(f"//   range [-1, 1 - 2^-{net.frac_bits}]. Drive with features normalized into")
        lines.append("//   [-1, 1) using the training-split min/max mapping, then quantized.")
    lines.append("// Outputs: class_idx = argmax class (ties go to the lower index),")
    lines.append("//   max_val = popcount of the winning class group.")
    counts = net.counts_by_label()
    lines.append(
        "// Mapped LUT nodes: "
        + ", ".join(f"{k}={v}" for k, v in counts.items())
        + f", total={len(net.nodes)}"
    )
    if registered_io:
        lines.append("// Registered I/O: inputs and outputs each take one clock; latency 2.")
    lines.append("")

    ports = []
    if registered_io:
        ports.append("    input  wire clk")
    for f in feats:
        ports.append(f"    input  wire signed [{w - 1}:0] in_f{f}")
    ports.append(f"    output wire [{qw - 1}:0] class_idx")
    ports.append(f"    output wire [{pw - 1}:0] max_val")
    lines.append(f"module {module_name} (")
    lines.append(",\n".join(ports))
    lines.append(");")
    lines.append("")

    if registered_io:
        for f in feats:
            lines.append(f"    reg signed [{w - 1}:0] in_q_f{f};")
        lines.append(f"    reg [{qw - 1}:0] class_idx_q;")
        lines.append(f"    reg [{pw - 1}:0] max_val_q;")
        lines.append(f"    wire [{qw - 1}:0] class_idx_c;")
        lines.append(f"    wire [{pw - 1}:0] max_val_c;")
        lines.append("    always @(posedge clk) begin")
        for f in feats:
            lines.append(f"        in_q_f{f} <= in_f{f};")
        lines.append("        class_idx_q <= class_idx_c;")
        lines.append("        max_val_q <= max_val_c;")
        lines.append("    end")
        lines.append("    assign class_idx = class_idx_q;")
        lines.append("    assign max_val = max_val_q;")
        lines.append("")

    for node in net.nodes:
        refs = [_bit_ref(net, r, in_prefix) for r in node.fanin]
        lines.append(f"    localparam [{(1 << node.arity) - 1}:0] T_n{node.nid} = {_table_literal(node.table, node.arity)};")
        lines.append(f"    wire n{node.nid} = T_n{node.nid}[{_concat(refs)}];")

    lines.append("")
    idx_bits = _concat([_bit_ref(net, r, in_prefix) for r in net.index_nets])
    val_bits = _concat([_bit_ref(net, r, in_prefix) for r in net.value_nets])
    suffix = "_c" if registered_io else ""
    lines.append(f"    assign class_idx{suffix} = {idx_bits};")
    lines.append(f"    assign max_val{suffix} = {val_bits};")
    lines.append("")
    lines.append("endmodule")
    lines.append("")
    return "\n".join(lines)


def golden_vectors(
    net: LutNetlist, count: int, rng: np.random.Generator
) -> list[tuple[tuple[int, ...], int, int]]:
    """Random input words with expected outputs from the netlist interpreter."""
    w = net.word_width
    lo, hi = -(1 << (w - 1)), (1 << (w - 1)) - 1
    words = rng.integers(lo, hi + 1, size=(count, net.num_features), dtype=np.int64)
    idx, val = interpret_luts_batch(net, words)
    return [
        (tuple(int(x) for x in row), int(i), int(v))
        for row, i, v in zip(words, idx, val)
    ]


def vectors_to_csv(vectors, num_features: int) -> str:
    header = ",".join(f"f{f}" for f in range(num_features))
    lines = [header + ",expected_class,expected_value"]
    for words, idx, val in vectors:
        lines.append(",".join(str(x) for x in words) + f",{idx},{val}")
    return "\n".join(lines) + "\n"


def emit_testbench(
    net: LutNetlist,
    vectors,
    module_name: str,
    registered_io: bool = False,
) -> str:
    """Self-checking bench: drives each vector, compares both outputs.

    Prints one FAIL line per mismatch, a final RESULT: PASS/FAIL summary,
    and raises $fatal (nonzero simulator exit) when anything mismatched.
    """
    _check_name(module_name)
    vectors = list(vectors)
    if not vectors:
        raise ValueError("testbench needs at least one vector")

    w = net.word_width
    qw = len(net.index_nets)
    pw = len(net.value_nets)
    mask = (1 << w) - 1
    feats = range(net.num_features)
    tb_name = f"{module_name}_tb"

    lines: list[str] = []
    lines.append("`timescale 1ns/1ps")
    lines.append(f"// Self-checking bench for {module_name}: {len(vectors)} golden vectors.")
    lines.append(f"module {tb_name};")
    if registered_io:
        lines.append("    reg clk = 1'b0;")
        lines.append("    always #5 clk = ~clk;")
    for f in feats:
        lines.append(f"    reg signed [{w - 1}:0] in_f{f};")
    lines.append(f"    wire [{qw - 1}:0] class_idx;")
    lines.append(f"    wire [{pw - 1}:0] max_val;")
    lines.append("    integer errors;")
    lines.append("")
    conns = []
    if registered_io:
        conns.append(".clk(clk)")
    conns += [f".in_f{f}(in_f{f})" for f in feats]
    conns += [".class_idx(class_idx)", ".max_val(max_val)"]
    lines.append(f"    {module_name} dut ({', '.join(conns)});")
    lines.append("")
    lines.append(f"    task check(input [{qw - 1}:0] exp_idx, input [{pw - 1}:0] exp_val, input integer vec);")
    lines.append("        begin")
    lines.append("            if (class_idx !== exp_idx || max_val !== exp_val) begin")
    lines.append("                errors = errors + 1;")
    lines.append('                $display("FAIL vector %0d: got (%0d, %0d), expected (%0d, %0d)",')
    lines.append("                         vec, class_idx, max_val, exp_idx, exp_val);")
    lines.append("            end")
    lines.append("        end")
    lines.append("    endtask")
    lines.append("")
    lines.append("    initial begin")
    lines.append("        errors = 0;")
    wait = "@(posedge clk); @(posedge clk); #1;" if registered_io else "#1;"
    qd = max(1, (qw + 3) // 4)
    pd = max(1, (pw + 3) // 4)
    wd = max(1, (w + 3) // 4)
    for vec_no, (words, exp_idx, exp_val) in enumerate(vectors):
        for f, word in zip(feats, words):
            lines.append(f"        in_f{f} = {w}'h{word & mask:0{wd}x};")
        lines.append(f"        {wait}")
        lines.append(f"        check({qw}'h{exp_idx:0{qd}x}, {pw}'h{exp_val:0{pd}x}, {vec_no});")
    lines.append("")
    lines.append("        if (errors == 0) begin")
    lines.append(f'            $display("RESULT: PASS (%0d vectors)", {len(vectors)});')
    lines.append("        end else begin")
    lines.append(f'            $display("RESULT: FAIL (%0d of %0d vectors)", errors, {len(vectors)});')
    lines.append('            $fatal(1, "testbench failed");')
    lines.append("        end")
    lines.append("        $finish;")
    lines.append("    end")
    lines.append("endmodule")
    lines.append("")
    return "\n".join(lines)
