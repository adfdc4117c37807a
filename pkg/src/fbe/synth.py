"""Six reversible circuits that run the digit recurrences in place.

Each synthesizer lays out a digit register, a chain of value registers
and the scratch each step needs, then emits one module per digit.  A
module is the gate-level image of one classical recurrence step: the
same truncations, the same wraparound, the same sentinel handling, so a
basis-state simulation reproduces the classical digit string or value
bit for bit.

The forward evaluators (log, arccos, arccot) read a number from RegI0
and write digits into RegO; the inverse evaluators (exp, cos, cot) read
digits from RegO and build the value in the last chain register.  Value
registers between the ends keep the intermediate chain values, which
both policies leave in place; the clean policy additionally uncomputes
every block-internal scratch register.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .blocks import (
    Builder,
    add_into,
    copy_bits,
    decrement,
    div_stages,
    increment,
    negate_bits,
    rotate_left1,
    rotate_right1,
    sqrt_stages,
    square_into,
    square_via_root,
)
from .circuit import Circuit, CircuitError
from .expansion import DigitString, FunctionSpec, get_spec, parse_digits
from .fixedpoint import FixedPoint, Layout, make

SYNTH_SPEC = {
    "log": "log2-wide",
    "arccos": "arccos",
    "arccot": "arccot",
    "exp": "exp2",
    "cos": "cos",
    "cot": "cot",
}

SQUARE_METHODS = ("shift_add", "reversed_sqrt")


@dataclass(frozen=True)
class SynthConfig:
    """Shape of one synthesized evaluator.

    n digits at register width m; policy picks whether block scratch is
    left as garbage or uncomputed; square_method switches the squaring
    blocks between shift-and-add and the reversed square root walk.
    """

    function: str
    n: int
    m: int
    policy: str = "garbage"
    square_method: str = "shift_add"

    def __post_init__(self):
        if self.function not in SYNTH_SPEC:
            raise CircuitError(f"unknown circuit family {self.function!r}")
        if self.policy not in ("garbage", "clean"):
            raise CircuitError(f"unknown ancilla policy {self.policy!r}")
        if self.square_method not in SQUARE_METHODS:
            raise CircuitError(f"unknown square method {self.square_method!r}")
        if self.n < 1:
            raise CircuitError("need at least one digit")


class SynthesizedCircuit:
    """Circuit plus the encode/decode conventions it was built with.

    Digit register convention: for the forward evaluators RegO qubit i
    holds the i-th displayed digit (most significant first).  For the
    inverse evaluators RegO qubit i holds the digit absorbed at step i,
    which is the string read from the right end (lsb first).
    """

    def __init__(self, config: SynthConfig, spec: FunctionSpec, layout: Layout,
                 circuit: Circuit, chain: list[str]):
        self.config = config
        self.spec = spec
        self.layout = layout
        self.circuit = circuit
        self.chain = chain

    @property
    def group(self) -> int:
        return self.spec.group

    @property
    def n_qubits(self) -> int:
        return self.circuit.n_qubits

    @property
    def digits_point(self) -> int:
        """Display position of the binary point inside the digit string."""
        return self.circuit.registers["RegO"].int_bits

    def encode_input(self, x) -> int:
        """Basis state with x loaded into RegI0 (forward evaluators)."""
        if self.group != 1:
            raise CircuitError(f"{self.config.function} takes digits, not a number")
        raw, _ = self.spec.encode(Fraction(x), self.layout)
        return self.circuit.registers["RegI0"].insert(0, raw)

    def encode_digits(self, digits) -> int:
        """Basis state with an argument digit string in RegO."""
        if self.group != 2:
            raise CircuitError(f"{self.config.function} takes a number, not digits")
        if isinstance(digits, str):
            digits = parse_digits(digits)
        if len(digits.digits) != self.config.n:
            raise CircuitError(f"expected {self.config.n} digits, got {len(digits.digits)}")
        rego = self.circuit.registers["RegO"]
        state = 0
        for i in range(self.config.n):
            if digits.digits[self.config.n - 1 - i]:
                state |= 1 << (rego.start + i)
        return state

    def run(self, arg) -> int:
        state = self.encode_input(arg) if self.group == 1 else self.encode_digits(arg)
        return self.circuit.simulate_basis(state)

    def decode_digits(self, state: int) -> DigitString:
        rego = self.circuit.registers["RegO"]
        raw = rego.extract(state)
        return DigitString(tuple((raw >> i) & 1 for i in range(self.config.n)))

    def decode_value(self, state: int) -> tuple[FixedPoint, bool]:
        """(value register, infinity flag) after a simulation."""
        reg = self.circuit.registers[self.chain[-1]]
        fp = make(reg.extract(state), self.layout)
        infinite = False
        if self.config.function == "cot":
            infinite = bool(self.circuit.registers["Anc1"].extract(state))
        return fp, infinite

    def chain_values(self, state: int) -> list[FixedPoint]:
        return [make(self.circuit.registers[nm].extract(state), self.layout)
                for nm in self.chain]

    def export(self) -> str:
        from .circuit import export_text

        return export_text(self.circuit)


def _zero_test(b: Builder, target: int, bits):
    """target ^= [bits all zero]."""
    b.flip(target, [(q, False) for q in bits])


def _emit_square(b: Builder, cfg: SynthConfig, src, wide, root_tmp, car: int):
    if cfg.square_method == "shift_add":
        square_into(b, src, wide, car)
    else:
        square_via_root(b, src, wide, root_tmp, car)


def _wide_width(cfg: SynthConfig, k: int) -> int:
    # the reversed walk needs a sign guard above the product
    return 2 * k + (1 if cfg.square_method == "reversed_sqrt" else 0)


def _scratch_role(cfg: SynthConfig) -> str:
    return "ancilla-clean" if cfg.policy == "clean" else "garbage"


# ----------------------------------------------------------------- forward

def _synth_log(cfg: SynthConfig, spec: FunctionSpec, lay: Layout):
    n, m, q = cfg.n, cfg.m, lay.frac_bits
    b = Builder()
    rego = b.reg("RegO", "output", n, int_bits=1)
    regs = [b.reg("RegI0", "input", m, frac_bits=q)]
    for i in range(1, n):
        regs.append(b.reg(f"RegI{i}", "garbage", m, frac_bits=q))
    wides = [b.reg(f"AncW{i}", _scratch_role(cfg), _wide_width(cfg, m - 1))
             for i in range(n - 1)]
    root_t = (b.reg("AncRoot", "ancilla-clean", m - 1)
              if cfg.square_method == "reversed_sqrt" else None)
    car = b.reg("AncC", "ancilla-clean", 1).bits[0]

    for i in range(n - 1):
        a, nxt, w = regs[i].bits, regs[i + 1].bits, wides[i].bits
        d = rego.bits[i]
        b.flip(d, [(a[m - 1], True)])
        # halve the register when the digit fired; the wrapped low bit
        # parks in the top position, outside the squared window
        with b.controls([(d, True)]):
            rotate_right1(b, a)
        with b.capture() as sq:
            _emit_square(b, cfg, a[:m - 1], w, root_t.bits if root_t else None, car)
        b.replay(sq)
        copy_bits(b, w[q:q + m], nxt)
        if cfg.policy == "clean":
            b.replay(sq, reverse=True)
        with b.controls([(d, True)]):
            rotate_left1(b, a)
    b.flip(rego.bits[n - 1], [(regs[n - 1].bits[m - 1], True)])
    return b.finish(), [r.name for r in regs]


def _synth_arccos(cfg: SynthConfig, spec: FunctionSpec, lay: Layout):
    n, m, q = cfg.n, cfg.m, lay.frac_bits
    b = Builder()
    rego = b.reg("RegO", "output", n, int_bits=0)
    regs = [b.reg("RegI0", "input", m, frac_bits=q, signed=True)]
    for i in range(1, n):
        regs.append(b.reg(f"RegI{i}", "garbage", m, frac_bits=q, signed=True))
    wides = [b.reg(f"AncW{i}", _scratch_role(cfg), _wide_width(cfg, m - 1))
             for i in range(n - 1)]
    root_t = (b.reg("AncRoot", "ancilla-clean", m - 1)
              if cfg.square_method == "reversed_sqrt" else None)
    z = b.reg("AncZ", "ancilla-clean", 1).bits[0]
    car = b.reg("AncC", "ancilla-clean", 1).bits[0]

    for i in range(n - 1):
        a, nxt, w = regs[i].bits, regs[i + 1].bits, wides[i].bits
        d = rego.bits[i]
        _zero_test(b, z, a)
        b.flip(d, [(a[m - 1], True)])
        with b.controls([(d, True)]):
            negate_bits(b, a)
        with b.capture() as sq:
            _emit_square(b, cfg, a[:m - 1], w, root_t.bits if root_t else None, car)
        b.replay(sq)
        # window starts one place lower: the product is doubled on copy
        copy_bits(b, w[q - 1:q - 1 + m], nxt)
        decrement(b, nxt[q:])
        with b.controls([(d, True)]):
            negate_bits(b, nxt)
        # a == 0 midpoint: flip the digit and lift -1 to +1, which is a
        # single sign-bit flip at this layout
        b.flip(d, [(z, True)])
        b.flip(nxt[m - 1], [(z, True)])
        if cfg.policy == "clean":
            b.replay(sq, reverse=True)
        with b.controls([(d, True)]):
            negate_bits(b, a)
        _zero_test(b, z, a)
    a, d = regs[n - 1].bits, rego.bits[n - 1]
    _zero_test(b, z, a)
    b.flip(d, [(a[m - 1], True)])
    b.flip(d, [(z, True)])
    _zero_test(b, z, a)
    return b.finish(), [r.name for r in regs]


def _synth_arccot(cfg: SynthConfig, spec: FunctionSpec, lay: Layout):
    n, m, q = cfg.n, cfg.m, lay.frac_bits
    b = Builder()
    rego = b.reg("RegO", "output", n, int_bits=0)
    regs = [b.reg("RegI0", "input", m, frac_bits=q, signed=True)]
    for i in range(1, n):
        regs.append(b.reg(f"RegI{i}", "garbage", m, frac_bits=q, signed=True))
    # square scratch doubles as the division frame, one guard bit on top
    sqs = [b.reg(f"AncSq{i}", _scratch_role(cfg), 2 * m - 1) for i in range(n - 1)]
    quot_t = (b.reg("AncQuot", "ancilla-clean", m - 1)
              if cfg.policy == "clean" else None)
    root_t = (b.reg("AncRoot", "ancilla-clean", m - 1)
              if cfg.square_method == "reversed_sqrt" else None)
    anc1 = b.reg("Anc1", "garbage", 1).bits[0]
    z = b.reg("AncZ", "ancilla-clean", 1).bits[0]
    s = b.reg("AncS", "ancilla-clean", 1).bits[0]
    car = b.reg("AncC", "ancilla-clean", 1).bits[0]

    for i in range(n - 1):
        a, nxt, w = regs[i].bits, regs[i + 1].bits, sqs[i].bits
        d = rego.bits[i]
        b.flip(d, [(a[m - 1], True)])
        _zero_test(b, z, a)
        b.flip(d, [(z, True)])
        b.flip(anc1, [(z, True)])  # freeze from here on
        with b.controls([(d, True)]):
            negate_bits(b, a)
        # |a| < 1 exactly when no integer bit of the magnitude is set
        _zero_test(b, s, a[q:])
        with b.controls([(anc1, False)]):
            with b.capture() as live:
                _emit_square(b, cfg, a[:m - 1], w, root_t.bits if root_t else None, car)
                decrement(b, w[2 * q:])
                with b.controls([(s, True)]):
                    negate_bits(b, w)
                target = quot_t.bits if quot_t else nxt[:m - 1]
                div_stages(b, w, a[:m - 1], target, car, shift=1)
            b.replay(live)
            if quot_t:
                copy_bits(b, quot_t.bits, nxt[:m - 1])
                b.replay(live, reverse=True)
            with b.controls([(s, True)]):
                negate_bits(b, nxt)
        _zero_test(b, s, a[q:])
        with b.controls([(anc1, False), (d, True)]):
            negate_bits(b, nxt)
        b.flip(nxt[q], [(anc1, True)])  # frozen chain carries the sentinel
        with b.controls([(d, True)]):
            negate_bits(b, a)
        _zero_test(b, z, a)
    a, d = regs[n - 1].bits, rego.bits[n - 1]
    b.flip(d, [(a[m - 1], True)])
    _zero_test(b, z, a)
    b.flip(d, [(z, True)])
    b.flip(anc1, [(z, True)])
    _zero_test(b, z, a)
    return b.finish(), [r.name for r in regs]


# ----------------------------------------------------------------- inverse

def _synth_exp(cfg: SynthConfig, spec: FunctionSpec, lay: Layout):
    n, m, q = cfg.n, cfg.m, lay.frac_bits
    b = Builder()
    rego = b.reg("RegO", "input", n, int_bits=0)
    regs = [b.reg("RegI0", "garbage", m, frac_bits=q)]
    for i in range(1, n):
        regs.append(b.reg(f"RegI{i}", "garbage", m, frac_bits=q))
    regs.append(b.reg(f"RegI{n}", "output", m, frac_bits=q))
    wides = [b.reg(f"AncW{i}", _scratch_role(cfg), 2 * m + 1) for i in range(n)]
    root_t = b.reg("AncRoot", "ancilla-clean", m) if cfg.policy == "clean" else None
    car = b.reg("AncC", "ancilla-clean", 1).bits[0]

    b.flip(regs[0].bits[q])  # a0 = 1
    for i in range(n):
        a, nxt, w = regs[i].bits, regs[i + 1].bits, wides[i].bits
        v = rego.bits[i]
        with b.capture() as mk:
            # radicand a << (q + v): the digit selects the placement
            for j in range(m):
                b.flip(w[q + j + 1], [(v, True), (a[j], True)])
                b.flip(w[q + j], [(v, False), (a[j], True)])
            sqrt_stages(b, w, root_t.bits if root_t else nxt, m, car)
        b.replay(mk)
        if root_t:
            copy_bits(b, root_t.bits, nxt)
            b.replay(mk, reverse=True)
    return b.finish(), [r.name for r in regs]


def _synth_cos(cfg: SynthConfig, spec: FunctionSpec, lay: Layout):
    n, m, q = cfg.n, cfg.m, lay.frac_bits
    b = Builder()
    rego = b.reg("RegO", "input", n, int_bits=0)
    regs = [b.reg("RegI0", "garbage", m, frac_bits=q, signed=True)]
    for i in range(1, n):
        regs.append(b.reg(f"RegI{i}", "garbage", m, frac_bits=q, signed=True))
    regs.append(b.reg(f"RegI{n}", "output", m, frac_bits=q, signed=True))
    wides = [b.reg(f"AncW{i}", _scratch_role(cfg), 2 * m - 1) for i in range(n)]
    root_t = b.reg("AncRoot", "ancilla-clean", m - 1) if cfg.policy == "clean" else None
    p = b.reg("AncP", "ancilla-clean", 1).bits[0]
    car = b.reg("AncC", "ancilla-clean", 1).bits[0]

    b.flip(regs[0].bits[q])  # a0 = 1
    for i in range(n):
        a, nxt, w = regs[i].bits, regs[i + 1].bits, wides[i].bits
        v = rego.bits[i]
        b.flip(p, [(v, True)])  # p = v xor previous digit
        t = w[q - 1:q + m]  # the 1 +- a scratch at one extra frac bit
        with b.capture() as mk:
            for j in range(m):
                b.flip(w[q + j], [(a[j], True)])  # t = a << 1
            with b.controls([(p, True)]):
                negate_bits(b, t)
            increment(b, t[q + 1:])  # + 1 at the unit column
            # halve exactly: the low bit is zero so rotation is a shift
            rotate_right1(b, t)
            sqrt_stages(b, w, root_t.bits if root_t else nxt[:m - 1], m - 1, car)
        b.replay(mk)
        if root_t:
            copy_bits(b, root_t.bits, nxt[:m - 1])
            b.replay(mk, reverse=True)
        if i:
            b.flip(p, [(rego.bits[i - 1], True)])  # back to p = v_i
    with b.controls([(p, True)]):
        negate_bits(b, regs[n].bits)  # the top digit decides the sign
    b.flip(p, [(rego.bits[n - 1], True)])
    return b.finish(), [r.name for r in regs]


def _synth_cot(cfg: SynthConfig, spec: FunctionSpec, lay: Layout):
    n, m, q = cfg.n, cfg.m, lay.frac_bits
    b = Builder()
    rego = b.reg("RegO", "input", n, int_bits=0)
    regs = [b.reg("RegI0", "output" if n == 1 else "garbage", m,
                  frac_bits=q, signed=True)]
    for i in range(1, n):
        role = "output" if i == n - 1 else "garbage"
        regs.append(b.reg(f"RegI{i}", role, m, frac_bits=q, signed=True))
    # the radicand a^2 + 1 can spill one bit past 2m when the stored
    # pattern is large and the layout has many fraction bits, so the walk
    # runs one extra stage and the root gets its own m+1 bit register
    sqs = [b.reg(f"AncSq{i}", _scratch_role(cfg), 2 * m + 3) for i in range(n - 1)]
    if cfg.policy == "clean":
        roots = [b.reg("AncRoot", "ancilla-clean", m + 1)] * (n - 1) if n > 1 else []
    else:
        roots = [b.reg(f"AncR{i}", "garbage", m + 1) for i in range(n - 1)]
    anc1 = b.reg("Anc1", "output", 1).bits[0]  # the infinity flag
    p = b.reg("AncP", "ancilla-clean", 1).bits[0]
    car = b.reg("AncC", "ancilla-clean", 1).bits[0]

    # the register opens on the sentinel pattern for infinity with the
    # latch raised; the first set digit knocks it down to cot(pi/2) = 0
    b.flip(regs[0].bits[q])
    b.flip(anc1)
    v0 = rego.bits[0]
    b.flip(regs[0].bits[q], [(anc1, True), (v0, True)])
    _zero_test(b, anc1, regs[0].bits)
    b.flip(p, [(v0, True)])

    for i in range(1, n):
        a, nxt, w = regs[i - 1].bits, regs[i].bits, sqs[i - 1].bits
        rt = roots[i - 1].bits
        v = rego.bits[i]
        b.flip(p, [(v, True)])  # p = v xor previous digit
        with b.controls([(anc1, False)]):
            with b.capture() as mk:
                if cfg.square_method == "reversed_sqrt":
                    square_via_root(b, a, w, rt[:m], car)
                else:
                    square_into(b, a, w, car)
                increment(b, w[2 * q:])  # a^2 + 1, exact at 2q frac
                sqrt_stages(b, w, rt, m + 1, car)
            b.replay(mk)
            copy_bits(b, rt[:m], nxt)  # the register keeps root mod 2^m
            if cfg.policy == "clean":
                b.replay(mk, reverse=True)
            # b = root +- a, the sign of a folded in by the sandwich
            with b.controls([(p, True)]):
                negate_bits(b, a)
            add_into(b, a, nxt, car)
            with b.controls([(p, True)]):
                negate_bits(b, a)
        b.flip(nxt[q], [(anc1, True), (v, False)])  # frozen chain update
        _zero_test(b, anc1, nxt)  # uniform latch toggle on a zero value
        b.flip(p, [(rego.bits[i - 1], True)])
    with b.controls([(p, True)]):
        negate_bits(b, regs[n - 1].bits)
    b.flip(p, [(rego.bits[n - 1], True)])
    return b.finish(), [r.name for r in regs]


_SYNTH = {
    "log": _synth_log,
    "arccos": _synth_arccos,
    "arccot": _synth_arccot,
    "exp": _synth_exp,
    "cos": _synth_cos,
    "cot": _synth_cot,
}


def synthesize(config: SynthConfig) -> SynthesizedCircuit:
    """Build the evaluator circuit for one configuration.

    Deterministic: the same configuration always yields the same gate
    list and register map, byte for byte in the text form.
    """
    spec = get_spec(SYNTH_SPEC[config.function])
    lay = spec.layout(config.m, config.n)
    circuit, chain = _SYNTH[config.function](config, spec, lay)
    return SynthesizedCircuit(config, spec, lay, circuit, chain)
