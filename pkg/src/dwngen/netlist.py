"""Hardware graph of the accelerator and its lowering to k-input LUTs.

Two levels:

* ``MacroNetlist`` -- one node per high-level component instance: a signed
  greater-or-equal comparator per threshold, one cell per model LUT, one
  popcount per class, and a tree of index comparators implementing argmax
  with the lower-index tie-break.
* ``LutNetlist`` -- the technology-mapped form: every node is a <=k-input,
  1-output LUT.  Node counts of this form are the toolkit's resource
  estimate; they are mapping-defined numbers, not predictions of what a
  vendor synthesis tool reports.

Both levels are interpreted bit-exactly, and both must agree with the
software simulator on every input; the test suite enforces this.

Lowering rules (k = model LUT arity, w = input word width):

* comparator vs constant: chain of ceil(w/(k-1)) LUTs, low chunks first,
  the top chunk folding in the sign flip for signed comparison;
* model LUT cell: one LUT node, unchanged;
* popcount(B): greedy per-column compression with full adders (2 LUTs
  each), then a final ripple stage of half/full adders; the top sum bit
  needs no carry, so it reduces to a parity node;
* index comparator: an unsigned two-operand >= chain plus one 2:1 mux per
  value and index bit.  For k = 2 the adders, muxes and comparators
  decompose further into 2-input nodes so the arity invariant holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import DwnModel

ENCODER = "encoder"
LUT_LAYER = "lut_layer"
POPCOUNT = "popcount"
ARGMAX = "argmax"

# Constant net references usable anywhere a net id is expected.
CONST0 = -1
CONST1 = -2


def value_width(luts_per_class: int) -> int:
    """Bits needed for a popcount result in [0, luts_per_class]."""
    return luts_per_class.bit_length()


def index_width(num_classes: int) -> int:
    """Bits needed for a class index; at least one even for C = 1."""
    return max(1, (num_classes - 1).bit_length())


# --------------------------------------------------------------------------
# Macro level
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GeConst:
    """1-bit output: signed two's-complement [input word >= constant]."""

    nid: int
    feature: int
    const_mantissa: int


@dataclass(frozen=True)
class LutCellNode:
    nid: int
    table: int
    fanin: tuple[int, ...]  # GeConst nids


@dataclass(frozen=True)
class PopcountNode:
    nid: int
    fanin: tuple[int, ...]  # LutCellNode nids


# An argmax operand: ("pop", pop_nid, class_index) at the leaves,
# ("cmp", cmp_nid) for the winning pair of an earlier comparator.
Operand = tuple


@dataclass(frozen=True)
class IdxCmpNode:
    """Propagates the operand with the larger value; ties keep the lower index.

    Operand ``a`` always covers the lower class indices.
    """

    nid: int
    a: Operand
    b: Operand


@dataclass(frozen=True)
class MacroNetlist:
    model_name: str
    num_features: int
    frac_bits: int
    lut_arity: int
    num_classes: int
    luts_per_class: int
    ge_nodes: tuple[GeConst, ...]
    lut_cells: tuple[LutCellNode, ...]
    pop_nodes: tuple[PopcountNode, ...]
    cmp_nodes: tuple[IdxCmpNode, ...]
    output: Operand

    @property
    def word_width(self) -> int:
        return self.frac_bits + 1

    @property
    def value_bits(self) -> int:
        return value_width(self.luts_per_class)

    @property
    def index_bits(self) -> int:
        return index_width(self.num_classes)


def _assemble_macro(
    name: str,
    frac_bits: int,
    config,
    thresholds_mantissa,
    connections,
    tables,
) -> MacroNetlist:
    nid = 0
    ge_nodes = []
    for f in range(config.num_features):
        for j in range(config.bits_per_feature):
            ge_nodes.append(GeConst(nid, f, int(thresholds_mantissa(f, j))))
            nid += 1

    lut_cells = []
    for i in range(config.num_luts):
        # GeConst nid for encoder bit e is e itself (construction order).
        lut_cells.append(LutCellNode(nid, tables(i), tuple(int(e) for e in connections(i))))
        nid += 1

    pop_nodes = []
    for c in range(config.num_classes):
        start = c * config.luts_per_class
        fanin = tuple(lut_cells[start + i].nid for i in range(config.luts_per_class))
        pop_nodes.append(PopcountNode(nid, fanin))
        nid += 1

    # Left-balanced pairing in ascending class order; an odd operand is
    # promoted unchanged, so ties always resolve toward lower indices.
    cmp_nodes: list[IdxCmpNode] = []
    operands: list[Operand] = [("pop", pop_nodes[c].nid, c) for c in range(config.num_classes)]
    while len(operands) > 1:
        nxt = []
        for i in range(0, len(operands) - 1, 2):
            node = IdxCmpNode(nid, operands[i], operands[i + 1])
            nid += 1
            cmp_nodes.append(node)
            nxt.append(("cmp", node.nid))
        if len(operands) % 2:
            nxt.append(operands[-1])
        operands = nxt

    return MacroNetlist(
        model_name=name,
        num_features=config.num_features,
        frac_bits=frac_bits,
        lut_arity=config.lut_arity,
        num_classes=config.num_classes,
        luts_per_class=config.luts_per_class,
        ge_nodes=tuple(ge_nodes),
        lut_cells=tuple(lut_cells),
        pop_nodes=tuple(pop_nodes),
        cmp_nodes=tuple(cmp_nodes),
        output=operands[0],
    )


def build_macro_netlist(model: DwnModel) -> MacroNetlist:
    """Instantiate comparators, LUT cells, popcounts and the argmax tree.

    Requires fixed-point thresholds: the hardware comparators need concrete
    constants.  Node ids are assigned in topological construction order.
    """
    if model.frac_bits is None:
        raise ValueError("hardware generation needs a fixed-point model; quantize first")
    scale = 1 << model.frac_bits
    return _assemble_macro(
        model.name,
        model.frac_bits,
        model.config,
        lambda f, j: round(model.thresholds[f, j] * scale),
        lambda i: model.connections[i],
        lambda i: model.truth_tables[i],
    )


def build_macro_netlist_for_shape(config, frac_bits: int, name: str = "shape") -> MacroNetlist:
    """Structural twin of build_macro_netlist for a bare model shape.

    Mapped node counts depend only on (F, T, k, C, luts_per_class) and the
    word width, so width sweeps can be estimated even where quantization
    capacity would forbid a real model (T > 2**(n+1)).  Constants and tables
    are placeholders; do not interpret the result as a trained design.
    """
    total_bits = config.num_features * config.bits_per_feature
    return _assemble_macro(
        name,
        frac_bits,
        config,
        lambda f, j: 0,
        lambda i: [(i + j) % total_bits for j in range(config.lut_arity)],
        lambda i: 0,
    )


def validate_macro(net: MacroNetlist) -> None:
    """Structural checks: reference integrity and forward-only (acyclic) refs."""
    ge_ids = {g.nid for g in net.ge_nodes}
    lut_ids = {c.nid for c in net.lut_cells}
    pop_ids = {p.nid for p in net.pop_nodes}
    all_ids = [g.nid for g in net.ge_nodes] + [c.nid for c in net.lut_cells]
    all_ids += [p.nid for p in net.pop_nodes] + [c.nid for c in net.cmp_nodes]
    if len(set(all_ids)) != len(all_ids):
        raise ValueError("duplicate node id: some net has more than one driver")
    for cell in net.lut_cells:
        for ref in cell.fanin:
            if ref not in ge_ids:
                raise ValueError(f"LUT cell {cell.nid} fans in non-encoder node {ref}")
    for pop in net.pop_nodes:
        for ref in pop.fanin:
            if ref not in lut_ids:
                raise ValueError(f"popcount {pop.nid} fans in non-LUT-cell node {ref}")
    seen_cmps: set[int] = set()
    for node in net.cmp_nodes:
        for op in (node.a, node.b):
            if op[0] == "pop":
                if op[1] not in pop_ids:
                    raise ValueError(f"comparator {node.nid} references unknown popcount {op[1]}")
            elif op[0] == "cmp":
                if op[1] not in seen_cmps:
                    raise ValueError(f"comparator {node.nid} references later/unknown comparator {op[1]}")
            else:
                raise ValueError(f"comparator {node.nid} has malformed operand {op!r}")
        seen_cmps.add(node.nid)


def _check_words(net, words: np.ndarray) -> np.ndarray:
    """Validate input words and canonicalize to signed values.

    Accepts signed values in [-2**(w-1), 2**(w-1)) or raw two's-complement
    bit patterns in [0, 2**w); both map to the same wires.
    """
    words = np.asarray(words, dtype=np.int64)
    w = net.word_width
    lo, hi = -(1 << (w - 1)), (1 << w) - 1
    if words.ndim == 1:
        words = words[None, :]
    if words.shape[1] != net.num_features:
        raise ValueError(f"expected {net.num_features} input words, got {words.shape[1]}")
    if words.size and (words.min() < lo or words.max() > hi):
        raise ValueError(f"input word outside {w}-bit range [{lo}, {hi}]")
    patterns = words & hi
    return patterns - ((patterns >> (w - 1)) << w)


def interpret_macro_batch(net: MacroNetlist, words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate (class index, max value) for each row of signed input words."""
    words = _check_words(net, words)
    ge_feat = np.array([g.feature for g in net.ge_nodes], dtype=np.int64)
    ge_const = np.array([g.const_mantissa for g in net.ge_nodes], dtype=np.int64)
    bits = (words[:, ge_feat] >= ge_const[None, :]).astype(np.uint8)

    ge_pos = {g.nid: i for i, g in enumerate(net.ge_nodes)}
    fanin = np.array([[ge_pos[r] for r in c.fanin] for c in net.lut_cells], dtype=np.int64)
    tables = np.array([c.table for c in net.lut_cells], dtype=np.uint64)
    weights = 1 << np.arange(net.lut_arity, dtype=np.int64)
    addr = bits[:, fanin].astype(np.int64) @ weights
    lut_out = ((tables[None, :] >> addr.astype(np.uint64)) & np.uint64(1)).astype(np.int64)

    lut_pos = {c.nid: i for i, c in enumerate(net.lut_cells)}
    counts = {}
    for pop in net.pop_nodes:
        cols = [lut_pos[r] for r in pop.fanin]
        counts[pop.nid] = lut_out[:, cols].sum(axis=1)

    def resolve(op: Operand):
        if op[0] == "pop":
            _, pid, cls = op
            return counts[pid], np.full(len(words), cls, dtype=np.int64)
        return cmp_vals[op[1]]

    cmp_vals: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for node in net.cmp_nodes:
        av, ai = resolve(node.a)
        bv, bi = resolve(node.b)
        keep_a = av >= bv
        cmp_vals[node.nid] = (np.where(keep_a, av, bv), np.where(keep_a, ai, bi))

    values, indices = resolve(net.output)
    return indices, values


def interpret_macro(net: MacroNetlist, words) -> tuple[int, int]:
    idx, val = interpret_macro_batch(net, np.asarray(words)[None, :])
    return int(idx[0]), int(val[0])


# --------------------------------------------------------------------------
# LUT level
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LutNode:
    nid: int  # doubles as the output net id
    table: int
    fanin: tuple[int, ...]
    label: str

    @property
    def arity(self) -> int:
        return len(self.fanin)


@dataclass(frozen=True)
class LutNetlist:
    """Technology-mapped netlist: nothing but <=k-input LUTs.

    Net ids: [0, num_features*word_width) are primary input bits (bit b of
    feature f is f*word_width + b, LSB first); node output nets follow.
    CONST0/CONST1 may appear in fanins and outputs.
    """

    model_name: str
    num_features: int
    word_width: int
    lut_arity: int
    nodes: tuple[LutNode, ...]
    index_nets: tuple[int, ...]  # LSB first
    value_nets: tuple[int, ...]  # LSB first
    frac_bits: int | None = None

    @property
    def num_input_bits(self) -> int:
        return self.num_features * self.word_width

    def counts_by_label(self) -> dict[str, int]:
        counts = {ENCODER: 0, LUT_LAYER: 0, POPCOUNT: 0, ARGMAX: 0}
        for node in self.nodes:
            counts[node.label] += 1
        return counts


def validate_luts(net: LutNetlist) -> None:
    first_node_net = net.num_input_bits
    for i, node in enumerate(net.nodes):
        if node.nid != first_node_net + i:
            raise ValueError(f"node {i} has out-of-sequence net id {node.nid}")
        if node.arity > net.lut_arity:
            raise ValueError(f"node {node.nid} arity {node.arity} exceeds {net.lut_arity}")
        if not 0 <= node.table < (1 << (1 << node.arity)):
            raise ValueError(f"node {node.nid} table does not fit {node.arity} inputs")
        for ref in node.fanin:
            if ref in (CONST0, CONST1):
                continue
            if not 0 <= ref < node.nid:
                raise ValueError(f"node {node.nid} fans in forward/unknown net {ref}")
    end = first_node_net + len(net.nodes)
    for ref in net.index_nets + net.value_nets:
        if ref not in (CONST0, CONST1) and not 0 <= ref < end:
            raise ValueError(f"primary output references unknown net {ref}")


class _Builder:
    def __init__(self, num_input_bits: int, max_arity: int):
        self.max_arity = max_arity
        self.next_net = num_input_bits
        self.nodes: list[LutNode] = []

    def table(self, table: int, fanin: Sequence[int], label: str) -> int:
        if len(fanin) > self.max_arity:
            raise ValueError(f"arity {len(fanin)} exceeds {self.max_arity}")
        node = LutNode(self.next_net, table, tuple(fanin), label)
        self.nodes.append(node)
        self.next_net += 1
        return node.nid

    def lut(self, fn: Callable[..., int], fanin: Sequence[int], label: str) -> int:
        """Emit a LUT computing fn over fanin bits; constant inputs fold into
        the table so arity counts only real nets.

        A node is emitted whenever at least one real input remains, even if
        the table is degenerate: node counts must depend on the model shape
        and word width only, never on particular constants.
        """
        fixed = {i: (1 if r == CONST1 else 0) for i, r in enumerate(fanin) if r in (CONST0, CONST1)}
        free = [i for i in range(len(fanin)) if i not in fixed]
        table = 0
        for a in range(1 << len(free)):
            bits = [0] * len(fanin)
            for i, v in fixed.items():
                bits[i] = v
            for pos, i in enumerate(free):
                bits[i] = (a >> pos) & 1
            if fn(*bits):
                table |= 1 << a
        if not free:
            return CONST1 if table & 1 else CONST0
        return self.table(table, [fanin[i] for i in free], label=label)


def _full_adder(b: _Builder, x: int, y: int, z: int, label: str) -> tuple[int, int]:
    if b.max_arity >= 3:
        s = b.lut(lambda a, c, d: a ^ c ^ d, [x, y, z], label)
        co = b.lut(lambda a, c, d: (a & c) | (d & (a ^ c)), [x, y, z], label)
        return s, co
    t = b.lut(lambda a, c: a ^ c, [x, y], label)
    s = b.lut(lambda a, c: a ^ c, [t, z], label)
    g = b.lut(lambda a, c: a & c, [x, y], label)
    h = b.lut(lambda a, c: a & c, [t, z], label)
    co = b.lut(lambda a, c: a | c, [g, h], label)
    return s, co


def _half_adder(b: _Builder, x: int, y: int, label: str) -> tuple[int, int]:
    s = b.lut(lambda a, c: a ^ c, [x, y], label)
    co = b.lut(lambda a, c: a & c, [x, y], label)
    return s, co


def _parity(b: _Builder, nets: Sequence[int], label: str) -> int:
    nets = list(nets)
    if len(nets) == 1:
        return nets[0]
    if b.max_arity >= len(nets):
        return b.lut(lambda *bits: int(sum(bits) % 2), nets, label)
    acc = nets[0]
    for n in nets[1:]:
        acc = b.lut(lambda a, c: a ^ c, [acc, n], label)
    return acc


def _mux(b: _Builder, sel: int, when1: int, when0: int, label: str) -> int:
    if b.max_arity >= 3:
        return b.lut(lambda d0, d1, s: d1 if s else d0, [when0, when1, sel], label)
    u = b.lut(lambda d, s: d & s, [when1, sel], label)
    v = b.lut(lambda d, s: d & (1 - s), [when0, sel], label)
    return b.lut(lambda a, c: a | c, [u, v], label)


def _chunk_sizes(total: int, limit: int) -> list[int]:
    """Split `total` bit positions into ceil(total/limit) near-even chunks."""
    m = -(-total // limit)
    base, extra = divmod(total, m)
    return [base + 1] * extra + [base] * (m - extra)


def _ge_const_chain(b: _Builder, data: Sequence[int], const_mantissa: int, label: str) -> int:
    """Signed two's-complement [word >= constant] as a LUT chain.

    `data` is LSB first.  Chunks are compared low-to-high so the last link,
    which owns the sign bit, produces the final answer; the sign flip that
    turns signed order into unsigned order is folded into its table.
    """
    w = len(data)
    uconst = const_mantissa & ((1 << w) - 1)
    sizes = _chunk_sizes(w, b.max_arity - 1)
    carry = None
    off = 0
    for li, size in enumerate(sizes):
        cchunk = (uconst >> off) & ((1 << size) - 1)
        top = li == len(sizes) - 1
        flip = (1 << (size - 1)) if top else 0
        cval = cchunk ^ flip

        def link(*bits, _size=size, _cval=cval, _flip=flip, _chained=carry is not None):
            x = 0
            for i in range(_size):
                x |= bits[i] << i
            x ^= _flip
            cin = bits[_size] if _chained else 1
            if x > _cval:
                return 1
            return cin if x == _cval else 0

        fanin = list(data[off:off + size]) + ([carry] if carry is not None else [])
        carry = b.lut(link, fanin, label)
        off += size
    return carry


def _ge_pair_chain(b: _Builder, a_bits: Sequence[int], b_bits: Sequence[int], label: str) -> int:
    """Unsigned [a >= b] for equal-width operands, LSB first."""
    assert len(a_bits) == len(b_bits)
    if b.max_arity >= 3:
        per_link = max(1, (b.max_arity - 1) // 2)
        sizes = _chunk_sizes(len(a_bits), per_link)
        carry = None
        off = 0
        for size in sizes:
            def link(*bits, _size=size, _chained=carry is not None):
                x = y = 0
                for i in range(_size):
                    x |= bits[i] << i
                    y |= bits[_size + i] << i
                cin = bits[2 * _size] if _chained else 1
                if x > y:
                    return 1
                return cin if x == y else 0

            fanin = list(a_bits[off:off + size]) + list(b_bits[off:off + size])
            if carry is not None:
                fanin.append(carry)
            carry = b.lut(link, fanin, label)
            off += size
        return carry
    # 2-input fabric: per-position greater/equal cells and an AND/OR chain.
    carry = None
    for x, y in zip(a_bits, b_bits):
        if carry is None:
            carry = b.lut(lambda a, c: a | (1 - c), [x, y], label)
            continue
        gt = b.lut(lambda a, c: a & (1 - c), [x, y], label)
        eq = b.lut(lambda a, c: 1 - (a ^ c), [x, y], label)
        keep = b.lut(lambda a, c: a & c, [eq, carry], label)
        carry = b.lut(lambda a, c: a | c, [gt, keep], label)
    return carry


def _popcount_tree(b: _Builder, inputs: Sequence[int], label: str) -> list[int]:
    """Reduce 1-bit inputs to their exact count, LSB-first output bits.

    Greedy per-column full-adder compression down to two rows, then a ripple
    stage; the top output bit cannot generate a carry, so it is a parity.
    """
    total = len(inputs)
    out_bits = total.bit_length()
    cols: dict[int, list[int]] = {0: list(inputs)}
    w = 0
    while w in cols:
        col = cols[w]
        while len(col) >= 3:
            x, y, z = col.pop(0), col.pop(0), col.pop(0)
            s, co = _full_adder(b, x, y, z, label)
            col.append(s)
            cols.setdefault(w + 1, []).append(co)
        w += 1

    out = []
    carry = None
    for w in range(out_bits):
        entries = cols.get(w, [])[:]
        if carry is not None:
            entries.append(carry)
        carry = None
        if not entries:
            out.append(CONST0)
        elif len(entries) == 1:
            out.append(entries[0])
        elif w == out_bits - 1:
            out.append(_parity(b, entries, label))
        elif len(entries) == 2:
            s, carry = _half_adder(b, entries[0], entries[1], label)
            out.append(s)
        else:
            s, carry = _full_adder(b, entries[0], entries[1], entries[2], label)
            out.append(s)
    assert carry is None
    assert all(not cols.get(v) for v in cols if v >= out_bits), "popcount overflow column"
    return out


def _const_bits(value: int, width: int) -> list[int]:
    return [CONST1 if (value >> i) & 1 else CONST0 for i in range(width)]


def lower_to_luts(net: MacroNetlist) -> LutNetlist:
    """Map every macro node onto <=k-input LUTs, inheriting component labels."""
    w = net.word_width
    b = _Builder(net.num_features * w, net.lut_arity)

    ge_out = {}
    for g in net.ge_nodes:
        data = [g.feature * w + i for i in range(w)]
        ge_out[g.nid] = _ge_const_chain(b, data, g.const_mantissa, ENCODER)

    cell_out = {}
    for cell in net.lut_cells:
        cell_out[cell.nid] = b.table(cell.table, [ge_out[r] for r in cell.fanin], LUT_LAYER)

    p = net.value_bits
    q = net.index_bits
    pop_out = {}
    for pop in net.pop_nodes:
        bits = _popcount_tree(b, [cell_out[r] for r in pop.fanin], POPCOUNT)
        assert len(bits) == p
        pop_out[pop.nid] = bits

    cmp_out: dict[int, tuple[list[int], list[int]]] = {}

    def resolve(op: Operand) -> tuple[list[int], list[int]]:
        if op[0] == "pop":
            return pop_out[op[1]], _const_bits(op[2], q)
        return cmp_out[op[1]]

    for node in net.cmp_nodes:
        av, ai = resolve(node.a)
        bv, bi = resolve(node.b)
        sel = _ge_pair_chain(b, av, bv, ARGMAX)
        value = [_mux(b, sel, av[i], bv[i], ARGMAX) for i in range(p)]
        index = [_mux(b, sel, ai[i], bi[i], ARGMAX) for i in range(q)]
        cmp_out[node.nid] = (value, index)

    out_value, out_index = resolve(net.output)
    lowered = LutNetlist(
        model_name=net.model_name,
        num_features=net.num_features,
        word_width=w,
        lut_arity=net.lut_arity,
        nodes=tuple(b.nodes),
        index_nets=tuple(out_index),
        value_nets=tuple(out_value),
        frac_bits=net.frac_bits,
    )
    validate_luts(lowered)
    return lowered


def popcount_netlist(num_bits: int, max_arity: int = 6) -> LutNetlist:
    """Standalone popcount: num_bits 1-bit inputs to an exact-count output.

    Used to verify the compressor-tree mapping exhaustively; the class-index
    output is tied to constant 0.
    """
    b = _Builder(num_bits, max_arity)
    bits = _popcount_tree(b, list(range(num_bits)), POPCOUNT)
    return LutNetlist(
        model_name=f"popcount{num_bits}",
        num_features=num_bits,
        word_width=1,
        lut_arity=max_arity,
        nodes=tuple(b.nodes),
        index_nets=(CONST0,),
        value_nets=tuple(bits),
    )


def interpret_luts_batch(net: LutNetlist, words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Topological evaluation over rows of signed input words."""
    words = _check_words(net, words)
    n = len(words)
    w = net.word_width
    vals = np.empty((net.num_input_bits + len(net.nodes), n), dtype=np.uint8)
    patterns = words & ((1 << w) - 1)
    for f in range(net.num_features):
        for bit in range(w):
            vals[f * w + bit] = (patterns[:, f] >> bit) & 1

    ones = np.ones(n, dtype=np.uint8)
    zeros = np.zeros(n, dtype=np.uint8)

    def fetch(ref: int) -> np.ndarray:
        if ref == CONST0:
            return zeros
        if ref == CONST1:
            return ones
        return vals[ref]

    for node in net.nodes:
        addr = np.zeros(n, dtype=np.uint64)
        for i, ref in enumerate(node.fanin):
            addr |= fetch(ref).astype(np.uint64) << np.uint64(i)
        vals[node.nid] = (np.uint64(node.table) >> addr) & np.uint64(1)

    def read(nets: tuple[int, ...]) -> np.ndarray:
        out = np.zeros(n, dtype=np.int64)
        for i, ref in enumerate(nets):
            out |= fetch(ref).astype(np.int64) << i
        return out

    return read(net.index_nets), read(net.value_nets)


def interpret_luts(net: LutNetlist, words) -> tuple[int, int]:
    idx, val = interpret_luts_batch(net, np.asarray(words)[None, :])
    return int(idx[0]), int(val[0])


# --------------------------------------------------------------------------
# Resource accounting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentBreakdown:
    """Per-component LUT-node counts of a lowered netlist.

    These are mapped-node counts under this toolkit's documented lowering,
    not vendor synthesis results.
    """

    model_name: str
    input_width: int
    encoder: int
    lut_layer: int
    popcount: int
    argmax: int

    CSV_HEADER = "model,width,encoder,lut_layer,popcount,argmax,total"

    @property
    def total(self) -> int:
        return self.encoder + self.lut_layer + self.popcount + self.argmax

    def to_csv_row(self) -> str:
        return (
            f"{self.model_name},{self.input_width},{self.encoder},"
            f"{self.lut_layer},{self.popcount},{self.argmax},{self.total}"
        )

    def to_dict(self) -> dict:
        return {
            "model": self.model_name,
            "width": self.input_width,
            "encoder": self.encoder,
            "lut_layer": self.lut_layer,
            "popcount": self.popcount,
            "argmax": self.argmax,
            "total": self.total,
        }


def resource_report(net: LutNetlist, model: DwnModel) -> ComponentBreakdown:
    counts = net.counts_by_label()
    return ComponentBreakdown(
        model_name=model.name,
        input_width=net.word_width,
        encoder=counts[ENCODER],
        lut_layer=counts[LUT_LAYER],
        popcount=counts[POPCOUNT],
        argmax=counts[ARGMAX],
    )
