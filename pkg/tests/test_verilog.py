import re

import numpy as np
import pytest

from dwngen.model import ModelConfig, PRESETS
from dwngen.netlist import (
    build_macro_netlist,
    build_macro_netlist_for_shape,
    interpret_luts,
    lower_to_luts,
)
from dwngen.verilog import emit_testbench, emit_verilog, golden_vectors, vectors_to_csv

from conftest import random_model


@pytest.fixture
def small_net(rng):
    m = random_model(rng, ModelConfig(2, 4, 3, 3, 2), frac_bits=4)
    return lower_to_luts(build_macro_netlist(m))


def test_emission_deterministic(small_net):
    a = emit_verilog(small_net, "core")
    b = emit_verilog(small_net, "core")
    assert a == b
    assert emit_verilog(small_net, "core", registered_io=True) != a


def test_structural_audit(small_net):
    text = emit_verilog(small_net, "core")
    assigns = re.findall(r"^\s*wire n\d+ = T_n\d+\[", text, re.M)
    assert len(assigns) == len(small_net.nodes)


def test_line_count_linear(rng):
    small = random_model(rng, ModelConfig(2, 2, 3, 2, 1), frac_bits=3)
    big = random_model(rng, ModelConfig(2, 8, 3, 2, 1), frac_bits=3)
    nets = [lower_to_luts(build_macro_netlist(m)) for m in (small, big)]
    texts = [emit_verilog(n, "core") for n in nets]
    fixed_overhead = len(texts[0].splitlines()) - 2 * len(nets[0].nodes)
    assert len(texts[1].splitlines()) == fixed_overhead + 2 * len(nets[1].nodes)


def test_identifier_hygiene(small_net):
    text = emit_verilog(small_net, "core")
    ident = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
    declared = re.findall(r"(?:wire|reg|localparam)\s+(?:signed\s+)?(?:\[[^\]]+\]\s+)?(\w+)", text)
    assert all(ident.match(d) for d in declared)
    assert len(declared) == len(set(declared))


def test_sm10_shape_ports_at_6bit():
    # deployment width of the smallest preset: 6-bit words (n = 5)
    net = lower_to_luts(build_macro_netlist_for_shape(PRESETS["sm-10"], 5, "sm10"))
    text = emit_verilog(net, "sm10")
    ports = re.findall(r"input\s+wire signed \[5:0\] in_f(\d+)", text)
    assert sorted(int(p) for p in ports) == list(range(16))
    assert "output wire [2:0] class_idx" in text


def test_bad_module_name(small_net):
    for name in ("1abc", "agg regate", "module", ""):
        with pytest.raises(ValueError):
            emit_verilog(small_net, name)


def test_empty_netlist_rejected(small_net):
    from dwngen.netlist import LutNetlist

    empty = LutNetlist("e", 2, 5, 6, (), (0,), (1,))
    with pytest.raises(ValueError, match="empty"):
        emit_verilog(empty, "core")


def test_registered_io_ports(small_net):
    text = emit_verilog(small_net, "core", registered_io=True)
    assert "input  wire clk" in text
    assert "always @(posedge clk)" in text


def test_golden_vectors_match_interpreter(small_net, rng):
    vectors = golden_vectors(small_net, 50, rng)
    assert len(vectors) == 50
    for words, idx, val in vectors[:10]:
        assert interpret_luts(small_net, np.array(words)) == (idx, val)


def test_testbench_check_count(small_net, rng):
    vectors = golden_vectors(small_net, 1000, rng)
    tb = emit_testbench(small_net, vectors, "core")
    assert tb.count("check(") == 1000 + 1  # one per vector plus the task decl
    assert "RESULT: PASS" in tb and "RESULT: FAIL" in tb
    assert "$fatal" in tb


def test_testbench_rejects_empty(small_net):
    with pytest.raises(ValueError, match="vector"):
        emit_testbench(small_net, [], "core")


def test_corrupted_expectation_changes_one_check(small_net, rng):
    vectors = golden_vectors(small_net, 20, rng)
    words, idx, val = vectors[7]
    corrupted = list(vectors)
    corrupted[7] = (words, (idx + 1) % (1 << len(small_net.index_nets)), val)
    good = emit_testbench(small_net, vectors, "core").splitlines()
    bad = emit_testbench(small_net, corrupted, "core").splitlines()
    diff = [i for i, (a, b) in enumerate(zip(good, bad)) if a != b]
    assert len(diff) == 1
    assert "check(" in good[diff[0]]


def test_registered_testbench_waits_on_clk(small_net, rng):
    vectors = golden_vectors(small_net, 3, rng)
    tb = emit_testbench(small_net, vectors, "core", registered_io=True)
    assert "always #5 clk = ~clk;" in tb
    assert tb.count("@(posedge clk); @(posedge clk);") == 3


def test_vectors_csv_roundtrip(small_net, rng):
    vectors = golden_vectors(small_net, 5, rng)
    text = vectors_to_csv(vectors, small_net.num_features)
    lines = text.strip().splitlines()
    assert lines[0] == "f0,f1,expected_class,expected_value"
    for line, (words, idx, val) in zip(lines[1:], vectors):
        cells = [int(c) for c in line.split(",")]
        assert tuple(cells[:2]) == words
        assert cells[2:] == [idx, val]
