"""Reversible arithmetic built from the x/cx/ccx/mcx/swap/cswap set.

Everything here comes in two layers.  The lower layer is a Builder plus
emitter functions that append gates for one operation (ripple add,
increment cascade, shift-and-add squaring, non-restoring square root and
division) onto a circuit under construction; emitters compose freely and
honour an ambient control context, so a whole block can be predicated on
extra qubits without touching its internals.  The upper layer wraps each
emitter into a standalone circuit with named registers, which is what the
tests and the command line exercise directly.

All arithmetic is two's complement on fixed-width registers, truncation
toward zero, matching the classical fixed-point routines bit for bit.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Optional

from .circuit import Circuit, CircuitError, Gate, Register, xgate

POLICIES = ("garbage", "clean")


class Builder:
    """Accumulates gates and registers, then materialises a Circuit.

    Qubits are allocated in ascending order so registers stay contiguous.
    The control context stack (see controls()) is merged into every
    X-family gate and swap emitted while it is active.
    """

    def __init__(self):
        self.n = 0
        self.gates: list[Gate] = []
        self.regs: list[Register] = []
        self.ctx: list[tuple[int, bool]] = []

    def alloc(self, size: int) -> tuple[int, ...]:
        bits = tuple(range(self.n, self.n + size))
        self.n += size
        return bits

    def reg(self, name: str, role: str, size: int, int_bits: Optional[int] = None,
            frac_bits: Optional[int] = None, signed: bool = False) -> Register:
        if int_bits is None and frac_bits is None:
            int_bits, frac_bits = size, 0
        elif int_bits is None:
            int_bits = size - frac_bits
        elif frac_bits is None:
            frac_bits = size - int_bits
        r = Register(name, role, self.n, size, int_bits, frac_bits, signed)
        self.alloc(size)
        self.regs.append(r)
        return r

    @contextmanager
    def controls(self, ctl):
        """Predicate everything emitted inside on (qubit, positive?) pairs."""
        mark = len(self.ctx)
        self.ctx.extend(ctl)
        try:
            yield
        finally:
            del self.ctx[mark:]

    @contextmanager
    def capture(self):
        """Divert emitted gates into a list instead of the circuit."""
        saved = self.gates
        self.gates = []
        box: list[Gate] = []
        try:
            yield box
        finally:
            box.extend(self.gates)
            self.gates = saved

    def replay(self, gates, reverse: bool = False):
        # every gate in this set is self-inverse, so reversed order = inverse
        self.gates.extend(reversed(gates) if reverse else gates)

    def flip(self, target: int, extra=()):
        self.gates.append(xgate(target, tuple(self.ctx) + tuple(extra)))

    def swap2(self, a: int, b: int):
        ctl = tuple(self.ctx)
        if not ctl:
            self.gates.append(Gate("swap", (a, b)))
        elif len(ctl) == 1:
            q, pos = ctl[0]
            self.gates.append(Gate("cswap", (a, b), (q,), 0 if pos else 1))
        else:
            # fredkin sandwich: swap = cx . controlled-x . cx
            self.gates.append(Gate("cx", (a,), (b,)))
            self.gates.append(xgate(b, ctl + ((a, True),)))
            self.gates.append(Gate("cx", (a,), (b,)))

    def finish(self) -> Circuit:
        c = Circuit(max(self.n, 1))
        for r in self.regs:
            c.add_register(r)
        c.extend(self.gates)
        return c


# ---------------------------------------------------------------- emitters

def _maj(b: Builder, c: int, y: int, z: int):
    b.flip(y, [(z, True)])
    b.flip(c, [(z, True)])
    b.flip(z, [(c, True), (y, True)])


def _uma(b: Builder, c: int, y: int, z: int):
    b.flip(z, [(c, True), (y, True)])
    b.flip(c, [(z, True)])
    b.flip(y, [(c, True)])


def add_into(b: Builder, src, dst, anc: int):
    """dst += src mod 2^len(dst), src aligned at dst[0] and preserved.

    Ripple carry in the MAJ/UMA style with one clean borrowed ancilla.
    When dst is wider than src the carry keeps going as a controlled
    increment on the high bits (between the sweeps the top src qubit
    holds the carry out).
    """
    src, dst = tuple(src), tuple(dst)
    w = len(src)
    if w == 0:
        return
    if w > len(dst):
        raise CircuitError("add_into: src wider than dst")
    chain = (anc,) + src[:-1]
    for i in range(w):
        _maj(b, chain[i], dst[i], src[i])
    if len(dst) > w:
        with b.controls([(src[w - 1], True)]):
            increment(b, dst[w:])
    for i in range(w - 1, -1, -1):
        _uma(b, chain[i], dst[i], src[i])


def sub_from(b: Builder, src, dst, anc: int):
    """dst -= src mod 2^len(dst); exact inverse of add_into."""
    with b.capture() as gates:
        add_into(b, src, dst, anc)
    b.replay(gates, reverse=True)


def increment(b: Builder, bits):
    """bits += 1 mod 2^w via a cascade of widening controls."""
    bits = tuple(bits)
    for i in range(len(bits) - 1, 0, -1):
        b.flip(bits[i], [(bits[j], True) for j in range(i)])
    if bits:
        b.flip(bits[0])


def decrement(b: Builder, bits):
    bits = tuple(bits)
    if bits:
        b.flip(bits[0])
    for i in range(1, len(bits)):
        b.flip(bits[i], [(bits[j], True) for j in range(i)])


def negate_bits(b: Builder, bits):
    """Two's complement in place: bitwise not, then +1."""
    for q in bits:
        b.flip(q)
    increment(b, bits)


def copy_bits(b: Builder, src, dst):
    """XOR src onto dst; a copy when dst is clean."""
    for s, d in zip(src, dst):
        b.flip(d, [(s, True)])


def rotate_right1(b: Builder, bits):
    """Cyclic shift toward the lsb: new[i] = old[i+1], new[top] = old[0]."""
    bits = tuple(bits)
    for i in range(len(bits) - 1):
        b.swap2(bits[i], bits[i + 1])


def rotate_left1(b: Builder, bits):
    bits = tuple(bits)
    for i in range(len(bits) - 2, -1, -1):
        b.swap2(bits[i], bits[i + 1])


def square_into(b: Builder, src, dst, anc: int):
    """dst += src*src with the shift-and-add partial products.

    Exact when dst is 2*len(src) wide and clean.  Bit j of src gates
    three pieces: the low bits shifted by j, the high bits shifted by j
    (both land via the ripple adder so the controlled qubit itself never
    appears as an operand), and the diagonal 4^j as an increment.
    """
    src, dst = tuple(src), tuple(dst)
    k = len(src)
    if len(dst) < 2 * k:
        raise CircuitError("square_into: dst needs 2x the src width")
    for j in range(k):
        with b.controls([(src[j], True)]):
            if j:
                add_into(b, src[:j], dst[j:], anc)
            if j + 1 < k:
                add_into(b, src[j + 1:], dst[2 * j + 1:], anc)
            increment(b, dst[2 * j:])


def sqrt_stages(b: Builder, frame, root, stages: int, anc: int):
    """Non-restoring square root, radicand in frame, root bits extracted.

    frame holds the radicand (< 4^stages) in a two's-complement scratch
    register at least 2*stages+1 wide; root provides at least `stages`
    clean bits.  Ends with frame = remainder, root = floor sqrt.  Stage i
    subtracts or adds the partial root run shifted to 2i+2 plus the 4^i
    constant, decided by the previously extracted bit; the new bit is the
    complement of the frame sign.
    """
    frame, root = tuple(frame), tuple(root)
    if len(frame) < 2 * stages + 1:
        raise CircuitError("sqrt_stages: frame too narrow")
    sign = frame[-1]
    for i in range(stages - 1, -1, -1):
        # the run operand excludes root[i+1] (it is also the stage
        # control); its weight 2^(2i+2) is folded into the constants on
        # the branch where it is known to be set
        run = root[i + 2:stages]
        if i == stages - 1:
            decrement(b, frame[2 * i:])
        else:
            with b.controls([(root[i + 1], True)]):
                sub_from(b, run, frame[2 * i + 3:], anc)
                decrement(b, frame[2 * i + 2:])
                decrement(b, frame[2 * i:])
            with b.controls([(root[i + 1], False)]):
                add_into(b, run, frame[2 * i + 3:], anc)
                # 3*4^i in two increments
                increment(b, frame[2 * i:])
                increment(b, frame[2 * i + 1:])
        b.flip(root[i], [(sign, False)])
    # final correction: if the last bit came out 0 the remainder is
    # negative, add back 2*root+1 (bit 0 of root is 0 under the control)
    with b.controls([(root[0], False)]):
        add_into(b, root[1:stages], frame[2:], anc)
        increment(b, frame)


def div_stages(b: Builder, frame, d_bits, q_bits, anc: int, shift: int = 0):
    """Non-restoring division, numerator in frame, divisor read only.

    Produces floor(numerator / (divisor * 2^shift)) in q_bits (clean,
    quotient must fit) and leaves the remainder in frame.  frame needs
    max(num_width, len(d_bits)+shift+len(q_bits)-1) + 1 bits.  The shift
    places the divisor operand higher instead of materialising a doubled
    copy.
    """
    frame, d_bits, q_bits = tuple(frame), tuple(d_bits), tuple(q_bits)
    sign = frame[-1]
    t = len(q_bits)
    for j in range(t - 1, -1, -1):
        if j == t - 1:
            sub_from(b, d_bits, frame[j + shift:], anc)
        else:
            with b.controls([(q_bits[j + 1], True)]):
                sub_from(b, d_bits, frame[j + shift:], anc)
            with b.controls([(q_bits[j + 1], False)]):
                add_into(b, d_bits, frame[j + shift:], anc)
        b.flip(q_bits[j], [(sign, False)])
    with b.controls([(q_bits[0], False)]):
        add_into(b, d_bits, frame[shift:], anc)


def square_via_root(b: Builder, src, frame, root_tmp, anc: int):
    """frame = src*src by running the square root stages backwards.

    A clean frame and clean root_tmp come in; src is copied onto
    root_tmp and the inverted non-restoring walk maps (0, src) back to
    (src^2, 0), so root_tmp comes out clean again for free.
    """
    src = tuple(src)
    k = len(src)
    copy_bits(b, src, root_tmp[:k])
    with b.capture() as gates:
        sqrt_stages(b, frame, root_tmp, k, anc)
    b.replay(gates, reverse=True)


def sqrt_frame_width(magnitude_bits: int) -> tuple[int, int]:
    """(frame width, stage count) for a radicand of the given size."""
    stages = (magnitude_bits + 1) // 2
    return 2 * stages + 1, stages


def div_frame_width(num_bits: int, d_bits: int, q_bits: int) -> int:
    return max(num_bits, d_bits + q_bits - 1) + 1


# ---------------------------------------------------------- block circuits

def _check_policy(policy: str):
    if policy not in POLICIES:
        raise CircuitError(f"unknown ancilla policy {policy!r}")


def build_adder(width: int, variant: str = "full", frac_bits: int = 0) -> Circuit:
    """|a>|b> -> |a>|a+b mod 2^w>, or the in-place +1 variants.

    variant "increment_low" adds one unit in the last place,
    "increment_int_low" adds one at the unit column of an int.frac
    register (the step the chained evaluators use to fold constants in).
    """
    b = Builder()
    if variant == "full":
        a = b.reg("A", "input", width)
        s = b.reg("B", "output", width)
        anc = b.reg("Anc", "ancilla-clean", 1)
        add_into(b, a.bits, s.bits, anc.bits[0])
    elif variant == "increment_low":
        s = b.reg("B", "output", width)
        increment(b, s.bits)
    elif variant == "increment_int_low":
        s = b.reg("B", "output", width, frac_bits=frac_bits)
        increment(b, s.bits[frac_bits:])
    else:
        raise CircuitError(f"unknown adder variant {variant!r}")
    return b.finish()


def build_shift(width: int, k: int, direction: str = "left") -> Circuit:
    """Cyclic shift by k places built from swap ladders.

    This is a rotation: it equals the logical shift exactly when the k
    bits that wrap around are zero, which callers must arrange (see
    shift_wraps for the check the verifier applies).
    """
    if direction not in ("left", "right"):
        raise CircuitError(f"bad shift direction {direction!r}")
    if not 0 <= k < max(width, 1):
        raise CircuitError("shift amount out of range")
    b = Builder()
    a = b.reg("A", "output", width)
    for _ in range(k):
        if direction == "left":
            rotate_left1(b, a.bits)
        else:
            rotate_right1(b, a.bits)
    return b.finish()


def shift_wraps(raw: int, width: int, k: int, direction: str = "left") -> bool:
    """True when rotating raw by k would carry nonzero bits around."""
    raw &= (1 << width) - 1
    if direction == "left":
        return (raw >> (width - k)) != 0 if k else False
    return (raw & ((1 << k) - 1)) != 0 if k else False


def build_absolute(width: int) -> Circuit:
    """|a>|0> -> ||a| as two's complement>|sign bit>.

    The flag qubit records the sign first and then drives the negation,
    so the conditional never controls on a bit it rewrites.  The most
    negative pattern has no positive partner and passes through with the
    flag set.
    """
    b = Builder()
    a = b.reg("A", "input", width, signed=True)
    w = b.reg("W", "output", 1)
    b.flip(w.bits[0], [(a.bits[-1], True)])
    with b.controls([(w.bits[0], True)]):
        negate_bits(b, a.bits)
    return b.finish()


def build_square(width: int, out_width: Optional[int] = None, drop_low: int = 0,
                 method: str = "shift_add", policy: str = "garbage") -> Circuit:
    """|a>|0> -> |a>|window of a*a>.

    The full 2*width product is formed and out_width bits starting at
    drop_low are copied out (both defaulting to the exact product).  With
    method "reversed_sqrt" the product appears by running the square
    root block backwards instead of shift-and-add.  Under the clean
    policy the wide product is uncomputed after the copy.
    """
    _check_policy(policy)
    if out_width is None:
        out_width = 2 * width
    if drop_low < 0 or drop_low + out_width > 2 * width:
        raise CircuitError("square window out of range")
    b = Builder()
    a = b.reg("A", "input", width)
    direct = method == "shift_add" and out_width == 2 * width and drop_low == 0
    if direct:
        p = b.reg("P", "output", out_width)
        anc = b.reg("Anc", "ancilla-clean", 1)
        square_into(b, a.bits, p.bits, anc.bits[0])
        return b.finish()

    wide_w = 2 * width if method == "shift_add" else 2 * width + 1
    wide = b.reg("W", "garbage" if policy == "garbage" else "ancilla-clean", wide_w)
    p = b.reg("P", "output", out_width)
    root_t = None
    if method == "reversed_sqrt":
        root_t = b.reg("RootT", "ancilla-clean", width)
    elif method != "shift_add":
        raise CircuitError(f"unknown square method {method!r}")
    anc = b.reg("Anc", "ancilla-clean", 1)

    with b.capture() as make:
        if method == "shift_add":
            square_into(b, a.bits, wide.bits, anc.bits[0])
        else:
            square_via_root(b, a.bits, wide.bits, root_t.bits, anc.bits[0])
    b.replay(make)
    copy_bits(b, wide.bits[drop_low:drop_low + out_width], p.bits)
    if policy == "clean":
        b.replay(make, reverse=True)
    return b.finish()


def build_sqrt(width: int, frac_bits: int = 0, policy: str = "garbage") -> Circuit:
    """Integer square root of the register extended by frac_bits zeros.

    The radicand a*2^frac_bits sits in a frame of low zero padding, the
    input register, and high scratch.  Garbage policy: the frame keeps
    the remainder and B gets the root.  Clean policy: the root is copied
    off and the walk is reversed, restoring a and every scratch bit.
    """
    _check_policy(policy)
    frame_w, stages = sqrt_frame_width(width + frac_bits)
    b = Builder()
    low = None
    if frac_bits:
        low = b.reg("AncLow", "garbage" if policy == "garbage" else "ancilla-clean",
                    frac_bits)
    a = b.reg("A", "garbage" if policy == "garbage" else "input", width)
    high = b.reg("AncHigh", "ancilla-clean", frame_w - width - frac_bits)
    frame = (low.bits if low else ()) + a.bits + high.bits
    if policy == "garbage":
        root = b.reg("B", "output", stages)
        anc = b.reg("Anc", "ancilla-clean", 1)
        sqrt_stages(b, frame, root.bits, stages, anc.bits[0])
    else:
        root_t = b.reg("RootT", "ancilla-clean", stages)
        root = b.reg("B", "output", stages)
        anc = b.reg("Anc", "ancilla-clean", 1)
        with b.capture() as walk:
            sqrt_stages(b, frame, root_t.bits, stages, anc.bits[0])
        b.replay(walk)
        copy_bits(b, root_t.bits, root.bits)
        b.replay(walk, reverse=True)
    return b.finish()


def build_reciprocal(width: int, frac_bits: int, policy: str = "garbage") -> Circuit:
    """|a>|0> -> |a>|floor(2^2q / a) masked to width> for unsigned a.

    Divides the constant 2^2q by the register value with the
    non-restoring walk, which is trunc(1/a) at the same layout whenever
    the true reciprocal fits the width (1/a below 2^int_bits); callers
    own that precondition, and a zero divisor is out of scope.
    """
    _check_policy(policy)
    q = frac_bits
    num_w = 2 * q + 1
    frame_w = div_frame_width(num_w, width, width)
    b = Builder()
    a = b.reg("A", "input", width)
    frame = b.reg("R", "garbage" if policy == "garbage" else "ancilla-clean", frame_w)
    if policy == "garbage":
        quot = b.reg("B", "output", width)
        anc = b.reg("Anc", "ancilla-clean", 1)
        b.flip(frame.bits[2 * q])
        div_stages(b, frame.bits, a.bits, quot.bits, anc.bits[0])
    else:
        quot_t = b.reg("QuotT", "ancilla-clean", width)
        quot = b.reg("B", "output", width)
        anc = b.reg("Anc", "ancilla-clean", 1)
        with b.capture() as walk:
            b.flip(frame.bits[2 * q])
            div_stages(b, frame.bits, a.bits, quot_t.bits, anc.bits[0])
        b.replay(walk)
        copy_bits(b, quot_t.bits, quot.bits)
        b.replay(walk, reverse=True)
    return b.finish()
