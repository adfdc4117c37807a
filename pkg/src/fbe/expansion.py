"""Digit recurrences that expand function values one bit at a time.

Group 1 functions (the log2 variants, arccos, arccot) read a fixed-point
number and emit digits of the function value, one interval comparison per
step.  Group 2 functions (exp2, cos, cot) run recurrences in the other
direction: digits of the argument go in lsb first and the function value
comes out.  Every step is plain fixed-point arithmetic at the working
width with magnitude truncation, so this module is also the bit-exact
mirror of the synthesized circuits.  Running the same recurrence at four
times the width serves as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .fixedpoint import (
    DomainError,
    FixedPoint,
    Layout,
    WidthMismatch,
    from_value,
    make,
)

# chain state: (raw register value, auxiliary flag bits)
State = tuple[int, int]

NumberLike = Union[int, float, str, Fraction]


def _as_fraction(x: NumberLike) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class DigitString:
    """Digits in display order (most significant first).

    value() reads them as the fraction 0.d0 d1 d2 ... in the given radix.
    lsb_first records that the consuming recurrence absorbs them from the
    right end, which is how the Group 2 chains are wired.
    """

    digits: tuple[int, ...]
    radix: int = 2
    lsb_first: bool = False

    def __post_init__(self):
        for d in self.digits:
            if not 0 <= d < self.radix:
                raise DomainError(f"digit {d} outside radix {self.radix}")

    def __len__(self):
        return len(self.digits)

    def value(self) -> Fraction:
        acc = Fraction(0)
        for d in reversed(self.digits):
            acc = (acc + d) / self.radix
        return acc

    def text(self, point_after: int = 0) -> str:
        glyphs = "".join(str(d) for d in self.digits)
        if point_after <= 0:
            return "." + glyphs
        return glyphs[:point_after] + "." + glyphs[point_after:]


def parse_digits(text: str, radix: int = 2) -> DigitString:
    t = text.strip()
    if t.startswith("0."):
        t = t[1:]
    if t.startswith("."):
        t = t[1:]
    if not t or any(not c.isdigit() for c in t):
        raise DomainError(f"bad digit string {text!r}")
    return DigitString(tuple(int(c) for c in t), radix)


@dataclass(frozen=True)
class Interval:
    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_closed: bool = True
    hi_closed: bool = False

    def __contains__(self, x) -> bool:
        v = Fraction(x)
        if self.lo is not None and (v < self.lo or (v == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (v > self.hi or (v == self.hi and not self.hi_closed)):
            return False
        return True


@dataclass(frozen=True)
class FunctionSpec:
    """One digit recurrence.

    Group 1: encode + step, emitting one radix digit per step.
    Group 2: init + absorb(digit) + finish.
    value_scale maps the emitted digit-string fraction back to the plain
    function: scale * DigitString.value() approximates target(x).
    """

    name: str
    group: int
    radix: int
    value_scale: int
    domain: Optional[Interval]
    min_width: int
    make_layout: Callable[[int, int], Layout]
    closed_form: Optional[Callable[[float], float]] = None
    encode: Optional[Callable[[Fraction, Layout], State]] = None
    step: Optional[Callable[[State, Layout], tuple[int, State]]] = None
    init: Optional[Callable[[Layout], State]] = None
    absorb: Optional[Callable[[State, int, int, Layout], State]] = None
    finish: Optional[Callable[[State, Sequence[int], Layout], tuple[FixedPoint, bool]]] = None

    def layout(self, m: int, n: int = 1) -> Layout:
        if m < self.min_width:
            raise WidthMismatch(f"{self.name} needs m >= {self.min_width}, got {m}")
        return self.make_layout(m, n)


def _encode_interval(spec_name, domain):
    def enc(x: Fraction, lay: Layout) -> State:
        if x not in domain:
            raise DomainError(f"{x} outside the domain of {spec_name}")
        return from_value(x, lay).raw, 0

    return enc


# ----------------------------------------------------------------- group 1

def _spec_log2() -> FunctionSpec:
    # x in [1,2): compare the exact square against 2, then keep x^2 or x^2/2
    domain = Interval(Fraction(1), Fraction(2))

    def lay(m, n):
        return Layout(1, m - 1, False)

    def step(st: State, lay: Layout):
        raw, _ = st
        q = lay.frac_bits
        p = raw * raw  # 2q frac bits, exact
        w = 1 if p >= 2 << (2 * q) else 0
        return w, ((p >> (q + w)), 0)

    return FunctionSpec(
        name="log2", group=1, radix=2, value_scale=1, domain=domain,
        min_width=2, make_layout=lay, closed_form=math.log2,
        encode=_encode_interval("log2", domain), step=step,
    )


def _spec_log2_wide() -> FunctionSpec:
    # x in [1,4), digits of log2(x)/2.  The register is conditionally
    # shifted right before squaring, so both the shift and the square
    # truncate, exactly like the gate version.
    domain = Interval(Fraction(1), Fraction(4))

    def lay(m, n):
        return Layout(2, m - 2, False)

    def step(st: State, lay: Layout):
        raw, _ = st
        q = lay.frac_bits
        w = (raw >> (q + 1)) & 1
        u = raw >> 1 if w else raw  # value in [1,2) on the low m-1 bits
        return w, ((u * u) >> q, 0)

    return FunctionSpec(
        name="log2-wide", group=1, radix=2, value_scale=2, domain=domain,
        min_width=3, make_layout=lay, closed_form=math.log2,
        encode=_encode_interval("log2-wide", domain), step=step,
    )


def _spec_arccos() -> FunctionSpec:
    # digits of arccos(x)/pi for x in [-1,1]; update |a| -> 2|a|^2 - 1
    # with the sign of the next value restored afterwards, and the a = 0
    # midpoint patched to +1 / digit 1.
    domain = Interval(Fraction(-1), Fraction(1), True, True)

    def lay(m, n):
        return Layout(2, m - 2, True)

    def step(st: State, lay: Layout):
        raw, _ = st
        m = lay.width
        q = lay.frac_bits
        full = 1 << m
        sign = (raw >> (m - 1)) & 1
        w = sign
        mag = full - raw if sign else raw
        p = mag * mag  # 2q frac
        b = ((p >> (q - 1)) - (1 << q)) % full  # trunc(2|a|^2) - 1
        if sign:
            b = (full - b) % full
        if raw == 0:
            # midpoint: output digit 1 and continue from +1; with q = m-2
            # the -1 -> +1 patch is a single sign-bit flip
            b = (b + (full >> 1)) % full
            w ^= 1
        return w, (b, 0)

    return FunctionSpec(
        name="arccos", group=1, radix=2, value_scale=1, domain=domain,
        min_width=3, make_layout=lay,
        closed_form=lambda x: math.acos(x) / math.pi,
        encode=_encode_interval("arccos", domain), step=step,
    )


def _spec_arccot() -> FunctionSpec:
    # digits of arccot(x)/pi over all representable x; a = 0 maps to the
    # infinity sentinel (a frozen chain that keeps emitting digit 0), the
    # register meanwhile carries 1 as the representative pattern.

    def lay(m, n):
        ib = (m - 1) // 2
        return Layout(1 + ib, m - 1 - ib, True)

    def enc(x: Fraction, lay: Layout) -> State:
        fx = from_value(x, Layout(lay.int_bits, lay.frac_bits, True))
        if fx.raw == 1 << (lay.width - 1):
            # the most negative pattern has no magnitude inside the register
            raise DomainError(f"{x} is the excluded most-negative input")
        return fx.raw, 0

    def step(st: State, lay: Layout):
        raw, frozen = st
        m = lay.width
        q = lay.frac_bits
        full = 1 << m
        if frozen:
            return 0, (1 << q, 1)
        sign = (raw >> (m - 1)) & 1
        if raw == 0:
            return 1, (1 << q, 1)
        w = sign
        mag = full - raw if sign else raw
        s = mag * mag - (1 << (2 * q))  # a^2 - 1 at 2q frac, exact
        below_one = mag < (1 << q)
        smag = -s if below_one else s
        b = smag // (2 * mag)  # the quotient lands at q frac bits
        if below_one:
            b = (full - b) % full
        if w:
            b = (full - b) % full
        return w, (b, 0)

    return FunctionSpec(
        name="arccot", group=1, radix=2, value_scale=1, domain=None,
        min_width=3, make_layout=lay,
        closed_form=lambda x: math.atan2(1.0, x) / math.pi,
        encode=enc, step=step,
    )


def _spec_log2_ternary() -> FunctionSpec:
    # x in [1,8): one ternary digit of log2(x)/3 per cubing
    domain = Interval(Fraction(1), Fraction(8))

    def lay(m, n):
        return Layout(3, m - 3, False)

    def step(st: State, lay: Layout):
        raw, _ = st
        q = lay.frac_bits
        t = raw >> q
        w = 2 if t >= 4 else (1 if t >= 2 else 0)
        p = raw * raw * raw  # 3q frac
        return w, (p >> (2 * q + 3 * w), 0)

    return FunctionSpec(
        name="log2-ternary", group=1, radix=3, value_scale=3, domain=domain,
        min_width=4, make_layout=lay, closed_form=math.log2,
        encode=_encode_interval("log2-ternary", domain), step=step,
    )


def _spec_log2_quaternary() -> FunctionSpec:
    # x in [1,4): quaternary digits of log2(x)/2; the interval boundaries
    # sit at powers of sqrt(2), so membership is decided on the exact x^4
    domain = Interval(Fraction(1), Fraction(4))

    def lay(m, n):
        return Layout(2, m - 2, False)

    def step(st: State, lay: Layout):
        raw, _ = st
        q = lay.frac_bits
        p = raw ** 4  # 4q frac
        t = p >> (4 * q)
        w = (t.bit_length() - 1) // 2
        return w, (p >> (3 * q + 2 * w), 0)

    return FunctionSpec(
        name="log2-quaternary", group=1, radix=4, value_scale=2, domain=domain,
        min_width=3, make_layout=lay, closed_form=math.log2,
        encode=_encode_interval("log2-quaternary", domain), step=step,
    )


def _spec_log2_quaternary_wide() -> FunctionSpec:
    # x in [1,16): quaternary digits of log2(x)/4 with plain power-of-two
    # interval boundaries
    domain = Interval(Fraction(1), Fraction(16))

    def lay(m, n):
        return Layout(4, m - 4, False)

    def step(st: State, lay: Layout):
        raw, _ = st
        q = lay.frac_bits
        w = (raw >> q).bit_length() - 1
        p = raw ** 4
        return w, (p >> (3 * q + 4 * w), 0)

    return FunctionSpec(
        name="log2-quaternary-wide", group=1, radix=4, value_scale=4,
        domain=domain, min_width=5, make_layout=lay, closed_form=math.log2,
        encode=_encode_interval("log2-quaternary-wide", domain), step=step,
    )


# ----------------------------------------------------------------- group 2

def _spec_exp2() -> FunctionSpec:
    # x = 0.v(n-1)..v0 absorbed lsb first; a -> sqrt(a) or sqrt(2a)

    def lay(m, n):
        return Layout(1, m - 1, False)

    def init(lay: Layout) -> State:
        return 1 << lay.frac_bits, 0

    def absorb(st: State, v: int, i: int, lay: Layout) -> State:
        raw, _ = st
        # radicand extended to 2q frac bits, doubled when the digit is set
        return math.isqrt(raw << (lay.frac_bits + v)), 0

    def finish(st: State, digits, lay: Layout):
        return make(st[0], lay), False

    return FunctionSpec(
        name="exp2", group=2, radix=2, value_scale=1,
        domain=Interval(Fraction(0), Fraction(1)), min_width=2,
        make_layout=lay, closed_form=lambda x: 2.0 ** x,
        init=init, absorb=absorb, finish=finish,
    )


def _cos_halfstep(raw: int, parity: int, q: int) -> int:
    """(1 +- a)/2 built exactly on q+1 frac bits, then one truncated sqrt."""
    t = raw << 1  # a at q+1 frac
    tw = 1 << (q + 3)  # [2 int][q+1 frac] scratch width
    if parity:
        t = (-t) % tw
    t = (t + (1 << (q + 1))) % tw
    t >>= 1  # exact halve, the low bit is zero
    return math.isqrt(t << (q - 1))


def _spec_cos() -> FunctionSpec:
    # |cos(pi x)| chain: the parity of consecutive digits picks the sign
    # inside the half-angle update, the last digit restores the real sign.

    def lay(m, n):
        return Layout(2, m - 2, True)

    def init(lay: Layout) -> State:
        return 1 << lay.frac_bits, 0

    def absorb(st: State, v: int, i: int, lay: Layout) -> State:
        raw, prev = st
        return _cos_halfstep(raw, v ^ prev, lay.frac_bits), v

    def finish(st: State, digits, lay: Layout):
        raw = st[0]
        if digits and digits[0]:  # msb decides the sign of cos
            raw = (-raw) % (1 << lay.width)
        return make(raw, lay), False

    return FunctionSpec(
        name="cos", group=2, radix=2, value_scale=1,
        domain=Interval(Fraction(0), Fraction(1)), min_width=3,
        make_layout=lay, closed_form=lambda x: math.cos(math.pi * x),
        init=init, absorb=absorb, finish=finish,
    )


def _spec_cos_signed() -> FunctionSpec:
    # signed chain a -> (-1)^v sqrt((1 + (-1)^v a)/2); reference variant,
    # digit for digit equal to the unsigned chain plus sign restore

    def lay(m, n):
        return Layout(2, m - 2, True)

    def init(lay: Layout) -> State:
        return 1 << lay.frac_bits, 0

    def absorb(st: State, v: int, i: int, lay: Layout) -> State:
        raw, _ = st
        m = lay.width
        q = lay.frac_bits
        full = 1 << m
        val = raw - full if raw >> (m - 1) else raw
        t2 = (1 << q) + (-val if v else val)  # 1 +- a at q frac in [0,2]
        b = math.isqrt(t2 << (q - 1))
        if v:
            b = (-b) % full
        return b, 0

    def finish(st: State, digits, lay: Layout):
        return make(st[0], lay), False

    return FunctionSpec(
        name="cos-signed", group=2, radix=2, value_scale=1,
        domain=Interval(Fraction(0), Fraction(1)), min_width=3,
        make_layout=lay, closed_form=lambda x: math.cos(math.pi * x),
        init=init, absorb=absorb, finish=finish,
    )


def _cot_layout(m, n):
    ib = min(n, max(1, (m - 2) // 2))
    return Layout(1 + ib, m - 1 - ib, True)


def _cot_absorb(st: State, v: int, i: int, lay: Layout) -> State:
    raw, flag = st
    anc1 = flag & 1
    q = lay.frac_bits
    full = 1 << lay.width
    if i == 0:
        # trigger stage: the register starts at 1 standing in for infinity;
        # the first set digit turns it into the live value cot(pi/2) = 0
        b = 0 if (anc1 and v) else raw
    elif anc1:
        # frozen chain: only the representative carry fires
        b = (1 << q) if not v else 0
    else:
        prev = (flag >> 1) & 1
        p = v ^ prev
        s = raw * raw + (1 << (2 * q))  # a^2 + 1 at 2q frac, exact
        b = math.isqrt(s)
        b = (b + raw) if p == 0 else (b - raw)
        b %= full
    anc1 ^= 1 if b == 0 else 0
    return b, anc1 | (v << 1)


def _cot_finish(st: State, digits, lay: Layout):
    raw, flag = st
    if digits and digits[0]:
        raw = (-raw) % (1 << lay.width)
    return make(raw, lay), bool(flag & 1)


def _spec_cot() -> FunctionSpec:
    # |cot(pi x)| chain with a one-bit latch for the infinity sentinel;
    # x = 0 leaves the latch set and the finish reports it.

    return FunctionSpec(
        name="cot", group=2, radix=2, value_scale=1,
        domain=Interval(Fraction(0), Fraction(1)), min_width=4,
        make_layout=_cot_layout,
        closed_form=lambda x: math.cos(math.pi * x) / math.sin(math.pi * x),
        init=lambda lay: (1 << lay.frac_bits, 1),
        absorb=_cot_absorb, finish=_cot_finish,
    )


def _spec_cot_inf() -> FunctionSpec:
    # same recurrence viewed with a true infinity start instead of the
    # representative pattern; numerically identical, kept as the oracle
    # reading of the chain
    base = _spec_cot()
    return FunctionSpec(
        name="cot-inf", group=2, radix=2, value_scale=1,
        domain=base.domain, min_width=4, make_layout=_cot_layout,
        closed_form=base.closed_form, init=base.init,
        absorb=base.absorb, finish=base.finish,
    )


_BUILTINS = None


def builtin_specs() -> dict[str, FunctionSpec]:
    global _BUILTINS
    if _BUILTINS is None:
        specs = [
            _spec_log2(), _spec_log2_wide(), _spec_arccos(), _spec_arccot(),
            _spec_log2_ternary(), _spec_log2_quaternary(),
            _spec_log2_quaternary_wide(),
            _spec_exp2(), _spec_cos(), _spec_cos_signed(), _spec_cot(),
            _spec_cot_inf(),
        ]
        _BUILTINS = {s.name: s for s in specs}
    return _BUILTINS


def get_spec(name: str) -> FunctionSpec:
    try:
        return builtin_specs()[name]
    except KeyError:
        raise DomainError(f"unknown function {name!r}") from None


# ------------------------------------------------------------------ drivers

def fbe_expand(spec: FunctionSpec, x: NumberLike, n: int, m: int) -> DigitString:
    """Emit the first n digits of the scaled function value at width m."""
    ds, _ = fbe_expand_trace(spec, x, n, m)
    return ds


def fbe_expand_trace(spec: FunctionSpec, x: NumberLike, n: int, m: int):
    if spec.group != 1:
        raise DomainError(f"{spec.name} does not emit digits")
    lay = spec.layout(m, n)
    st = spec.encode(_as_fraction(x), lay)
    digits = []
    trace = [make(st[0], lay)]
    for _ in range(n):
        d, st = spec.step(st, lay)
        digits.append(d)
        trace.append(make(st[0], lay))
    return DigitString(tuple(digits), spec.radix), trace


def ifbe_evaluate(spec: FunctionSpec, digits: DigitString, m: int) -> tuple[FixedPoint, bool]:
    """Absorb digits lsb first and return (value, hit_infinity)."""
    out, _ = ifbe_evaluate_trace(spec, digits, m)
    return out


def ifbe_evaluate_trace(spec: FunctionSpec, digits: DigitString, m: int):
    if spec.group != 2:
        raise DomainError(f"{spec.name} does not absorb digits")
    if spec.radix != digits.radix:
        raise DomainError("radix mismatch")
    n = len(digits.digits)
    if n < 1:
        raise DomainError("need at least one digit")
    lay = spec.layout(m, n)
    st = spec.init(lay)
    trace = [make(st[0], lay)]
    for i in range(n):
        v = digits.digits[n - 1 - i]  # lsb first
        st = spec.absorb(st, v, i, lay)
        trace.append(make(st[0], lay))
    return spec.finish(st, digits.digits, lay), trace


def oracle_eval(spec: FunctionSpec, arg, n: int, m: int, factor: int = 4):
    """The same recurrence at factor*m bits, the reference everything is
    judged against."""
    if spec.group == 1:
        return fbe_expand(spec, arg, n, factor * m)
    return ifbe_evaluate(spec, arg, factor * m)


# ------------------------------------------------------- domain reduction

@dataclass(frozen=True)
class DomainReduction:
    """x = y * 2^(+shift or -shift) with y in [1,2)."""

    y: Fraction
    shift: int
    direction: str  # "right" when x was divided down, "left" when doubled

    @property
    def exponent(self) -> int:
        return self.shift if self.direction == "right" else -self.shift


def log2_domain_reduce(x: NumberLike) -> DomainReduction:
    v = _as_fraction(x)
    if v <= 0:
        raise DomainError(f"log2 needs a positive input, got {v}")
    shift = 0
    direction = "right"
    while v >= 2:
        v /= 2
        shift += 1
    while v < 1:
        v *= 2
        shift += 1
        direction = "left"
    return DomainReduction(v, shift, direction)


# ------------------------------------------------------------- derived set

def _auto_fixed(v: Fraction, frac_bits: int) -> FixedPoint:
    scaled = v * (1 << frac_bits)
    t = abs(scaled.numerator) // scaled.denominator
    if scaled < 0:
        t = -t
    int_bits = max(1, (abs(t) >> frac_bits).bit_length() + 1)
    return make(t, Layout(int_bits, frac_bits, True))


def _const(expr: str, prec: int = 60) -> Fraction:
    # stdlib decimal gives ln/log10 constants to plenty of digits
    from decimal import Decimal, getcontext

    getcontext().prec = prec
    d = {
        "ln2": Decimal(2).ln(),
        "log10_2": Decimal(2).log10(),
        "log2_e": 1 / Decimal(2).ln(),
    }[expr]
    return Fraction(d)


def _frac_bits_of(v: Fraction, n: int) -> DigitString:
    # exact binary digits of 0 <= v < 1, truncated at n
    digits = []
    for _ in range(n):
        v *= 2
        d = int(v)
        digits.append(d)
        v -= d
    return DigitString(tuple(digits), 2)


def _log2_digits_value(x: Fraction, n: int, m: int) -> Fraction:
    red = log2_domain_reduce(x)
    if red.y == 1:
        frac = Fraction(0)
    else:
        ds = fbe_expand(get_spec("log2"), red.y, n, m)
        frac = ds.value()
    return red.exponent + frac


def derived_eval(name: str, x: NumberLike, frac_bits: int) -> FixedPoint:
    """Functions reached through identities on the built-in recurrences.

    ln and log10 rescale log2; arcsin and arctan are complements of
    arccos and arccot divided by pi; exp_e routes through exp2; sin and
    tan read cos and cot at the shifted argument.  Angular functions work
    in turns: arcsin/arctan return f/pi, sin/tan take x as a fraction of
    pi.  Results are truncated toward zero at frac_bits.
    """
    v = _as_fraction(x)
    q = frac_bits
    guard = q + 12
    wide = 4 * guard + 8

    if name in ("ln", "log10"):
        scale = _const("ln2") if name == "ln" else _const("log10_2")
        return _auto_fixed(_log2_digits_value(v, guard, wide) * scale, q)
    if name == "arcsin":
        if not Fraction(-1) <= v <= 1:
            raise DomainError("arcsin domain is [-1,1]")
        ds = fbe_expand(get_spec("arccos"), v, guard, wide)
        return _auto_fixed(Fraction(1, 2) - ds.value(), q)
    if name == "arctan":
        ds = fbe_expand(get_spec("arccot"), v, guard, wide)
        return _auto_fixed(Fraction(1, 2) - ds.value(), q)
    if name == "exp_e":
        if not Fraction(0) <= v < 1:
            raise DomainError("exp_e wants x in [0,1)")
        y = v * _const("log2_e")
        yi = int(y)
        ds = _frac_bits_of(y - yi, guard)
        out, _ = ifbe_evaluate(get_spec("exp2"), ds, wide)
        return _auto_fixed(out.value * (1 << yi), q)
    if name == "sin":
        if not Fraction(0) <= v < 1:
            raise DomainError("sin works on x in [0,1) turns")
        d = abs(v - Fraction(1, 2))
        out, _ = ifbe_evaluate(get_spec("cos"), _frac_bits_of(d, guard), wide)
        return _auto_fixed(out.value, q)
    if name == "tan":
        if not Fraction(0) < v < Fraction(1, 2):
            raise DomainError("tan works on x in (0,1/2) turns")
        d = Fraction(1, 2) - v
        out, _ = ifbe_evaluate(get_spec("cot"), _frac_bits_of(d, guard), wide)
        return _auto_fixed(out.value, q)
    raise DomainError(f"unknown derived function {name!r}")


# ------------------------------------------------------------ arctan digits

def plouffe_arctan_bits(x: NumberLike, n: int, frac_bits: int,
                        int_bits: int = 4) -> DigitString:
    """Digits of arctan(x)/pi by the doubling recurrence a -> 2a/(1-a^2).

    a = +-1 maps to the minus-infinity sentinel (digit 1, then zero).  An
    update that leaves the representable range saturates to the same
    sentinel; that behavior is a documented convention, not asserted math.
    """
    v = _as_fraction(x)
    if v < 0:
        raise DomainError("doubling recurrence wants x >= 0")
    lay = Layout(int_bits, frac_bits, True)
    a = from_value(v, lay, exact=False).value
    hi = Fraction(1 << (int_bits - 1))
    digits = []
    sentinel = False
    for _ in range(n):
        if sentinel:
            digits.append(1)
            sentinel = False
            a = Fraction(0)
            continue
        digits.append(1 if a < 0 else 0)
        if abs(a) == 1:
            sentinel = True
            continue
        nxt = 2 * a / (1 - a * a)
        if abs(nxt) >= hi:
            sentinel = True
            continue
        a = from_value(nxt, lay, exact=False).value
    return DigitString(tuple(digits), 2)


# ------------------------------------------------------------- error budget

@dataclass(frozen=True)
class ErrorBudget:
    function: str
    n: int
    m: int
    q: int
    per_step: Fraction
    bound: Optional[Fraction]
    bound_text: str
    guaranteed_exact_bits: int


def error_budget(name: str, n: int, m: int) -> ErrorBudget:
    """Advertised accuracy per function at digit count n, width m.

    Group 1 entries are digit-exactness claims, Group 2 entries are value
    bounds on |chain - exact|.  These restate the analysis the
    constructions were designed around; the verification suite reports
    how each one fares.
    """
    spec = get_spec(name)
    lay = spec.layout(m, n)
    q = lay.frac_bits
    step = Fraction(1, 1 << q)
    if name in ("log2", "log2-wide", "arccot", "log2-ternary",
                "log2-quaternary", "log2-quaternary-wide"):
        return ErrorBudget(name, n, m, q, step, None,
                           "all m digits claimed exact at n = m (empirical)",
                           m if n >= m else n)
    if name == "arccos":
        bound = Fraction(1, 1 << (q // 2 + 1)) - step
        return ErrorBudget(name, n, m, q, step, bound,
                           "value error below 2^-(q/2+1) - 2^-q",
                           m // 2 + 1)
    if name == "exp2":
        return ErrorBudget(name, n, m, q, step, Fraction(4, 1 << q),
                           "value error below 2^-(q-2)", m - 2)
    if name in ("cos", "cos-signed"):
        bound = Fraction((1 << n) + 1, 1 << q)
        return ErrorBudget(name, n, m, q, step, bound,
                           "value error below (2^n + 1) 2^-q", max(0, m - n))
    if name in ("cot", "cot-inf"):
        return ErrorBudget(name, n, m, q, step, None,
                           "almost all m bits claimed exact (empirical, "
                           "unquantified)", m)
    raise DomainError(f"no budget entry for {name!r}")
