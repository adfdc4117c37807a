"""Command-line front end: evaluate, synthesize, simulate, verify, bench.

Output is deterministic for identical invocations; wall-clock figures
only appear behind --timing.  Exit codes: 0 success, 1 verification
failure, 2 usage or domain errors.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib.resources import files
from typing import Optional

from .circuit import CircuitError, import_text
from .expansion import (
    DigitString,
    error_budget,
    fbe_expand_trace,
    get_spec,
    ifbe_evaluate_trace,
    parse_digits,
)
from .fixedpoint import (
    DomainError,
    FixedPointError,
    Layout,
    make,
    parse,
    render,
)
from .synth import SYNTH_SPEC, SynthConfig, SynthesizedCircuit, synthesize

# spellings accepted for circuit families
FAMILY_ALIASES = {
    "log": "log", "log2": "log", "log2-wide": "log",
    "arccos": "arccos", "arccot": "arccot",
    "exp": "exp", "exp2": "exp", "cos": "cos", "cot": "cot",
}

RADIX_SPECS = {2: "log2", 3: "log2-ternary", 4: "log2-quaternary"}


def _family(name: str) -> str:
    try:
        return FAMILY_ALIASES[name]
    except KeyError:
        raise DomainError(f"no circuit family named {name!r}") from None


def _digit_point(spec) -> int:
    # how many emitted digits sit left of the point: only meaningful when
    # the value scale is a whole power of the digit radix
    point, s = 0, 1
    while s < spec.value_scale:
        s *= spec.radix
        point += 1
    return point if s == spec.value_scale else 0


def _fnum(x) -> str:
    return repr(float(x))


# -------------------------------------------------------------------- eval

def cmd_eval(args) -> int:
    name = args.function
    if args.radix != 2:
        if name not in ("log2", "log2-wide"):
            raise DomainError(f"--radix only applies to log2, not {name!r}")
        name = RADIX_SPECS[args.radix]
    spec = get_spec(name)
    if spec.group == 1:
        x = Fraction(args.arg)
        ds, trace = fbe_expand_trace(spec, x, args.n, args.m)
        print(f"digits {ds.text(_digit_point(spec))}")
        print(f"approx {_fnum(spec.value_scale * ds.value())}")
    else:
        ds = parse_digits(args.arg, spec.radix)
        (out, infinite), trace = ifbe_evaluate_trace(spec, ds, args.m)
        if infinite:
            print("value infinite")
        else:
            print(f"value {render(out)} = {_fnum(out.value)}")
    if args.trace:
        for i, fp in enumerate(trace):
            print(f"a{i} {render(fp)} = {_fnum(fp.value)}")
    return 0


# ------------------------------------------------------------------- synth

def _config(args, n=None, m=None) -> SynthConfig:
    return SynthConfig(
        _family(args.function), n or args.n, m or args.m,
        args.policy, args.square.replace("-", "_"),
    )


def _report_lines(sc: SynthesizedCircuit) -> list[str]:
    r = sc.circuit.resource_count()
    cfg = sc.config
    lines = [
        f"# family {cfg.function} n {cfg.n} m {cfg.m} "
        f"policy {cfg.policy} square {cfg.square_method}",
        f"# qubits {r['qubits']} gates {r['gates']} "
        f"toffoli-equivalent {r['toffoli_equivalent']} "
        f"cx-equivalent {r['cx_equivalent']}",
    ]
    kinds = " ".join(f"{k}={v}" for k, v in sorted(r["by_kind"].items()) if v)
    roles = " ".join(f"{k}={v}" for k, v in sorted(r["qubits_by_role"].items()))
    lines.append(f"# by-kind {kinds}")
    lines.append(f"# qubits-by-role {roles}")
    return lines


def cmd_synth(args) -> int:
    sc = synthesize(_config(args))
    text = sc.export()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        if args.report:
            print("\n".join(_report_lines(sc)))
    else:
        sys.stdout.write(text)
        if args.report:
            print("\n".join(_report_lines(sc)))
    return 0


# --------------------------------------------------------------------- sim

def _load_synthesized(path: str):
    with open(path) as fh:
        c = import_text(fh.read())
    if "RegO" not in c.registers or "RegI0" not in c.registers:
        raise CircuitError(f"{path}: missing RegO/RegI0 register headers")
    return c


def _chain_registers(c) -> list:
    regs = []
    for i in itertools.count():
        r = c.registers.get(f"RegI{i}")
        if r is None:
            break
        regs.append(r)
    return regs


def cmd_sim(args) -> int:
    c = _load_synthesized(args.circuit)
    rego = c.registers["RegO"]
    group = 1 if rego.role == "output" else 2
    if group == 1:
        reg = c.registers["RegI0"]
        fp = parse(args.input, signed=reg.signed)
        if (fp.layout.int_bits, fp.layout.frac_bits) != (reg.int_bits, reg.frac_bits):
            raise DomainError(
                f"input {args.input!r} is {fp.layout.int_bits}.{fp.layout.frac_bits}, "
                f"circuit wants {reg.int_bits}.{reg.frac_bits}")
        start = reg.insert(0, fp.raw)
    else:
        ds = parse_digits(args.input)
        if len(ds.digits) != rego.size:
            raise DomainError(f"expected {rego.size} digits, got {len(ds.digits)}")
        start = 0
        for i in range(rego.size):
            if ds.digits[rego.size - 1 - i]:
                start |= 1 << (rego.start + i)
    if args.mode == "sparse":
        amps = c.simulate_sparse(start)
        for s in sorted(amps):
            a = amps[s]
            print(f"state {s:0{c.n_qubits}b} amp {a.real:+.6f}{a.imag:+.6f}i")
        return 0
    state = c.simulate_basis(start)
    if group == 1:
        raw = rego.extract(state)
        ds = DigitString(tuple((raw >> i) & 1 for i in range(rego.size)))
        print(f"digits {ds.text(rego.int_bits)}")
    else:
        out = [r for r in _chain_registers(c) if r.role == "output"][-1]
        fp = make(out.extract(state), Layout(out.int_bits, out.frac_bits, out.signed))
        flag = c.registers.get("Anc1")
        if flag is not None and flag.role == "output" and flag.extract(state):
            print("value infinite")
        else:
            print(f"value {render(fp)} = {_fnum(fp.value)}")
    return 0


# ------------------------------------------------------------------ verify

@dataclass
class VerificationReport:
    suite: str
    subject: str
    config: str
    cases: int
    matches: int
    passed: bool
    max_error: Optional[float] = None
    bound: Optional[float] = None
    note: str = ""
    wall_time: float = 0.0


def _print_report(rep: VerificationReport, timing: bool):
    head = "[PASS]" if rep.passed else "[FAIL]"
    line = f"{head} {rep.suite} {rep.subject} {rep.config}: {rep.matches}/{rep.cases}"
    if rep.max_error is not None:
        line += f" max-err {rep.max_error:.3e}"
        if rep.bound is not None:
            line += f" bound {rep.bound:.3e}"
    if rep.note:
        line += f" ({rep.note})"
    if timing:
        line += f" [{rep.wall_time:.2f}s]"
    print(line)


def _table2_rows():
    text = files("fbe").joinpath("data/table2.txt").read_text()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            yield line.split()


def _run_table2_row(family, m, n, inp, cache):
    key = (family, n, m)
    if key not in cache:
        cache[key] = synthesize(SynthConfig(family, n, m))
    sc = cache[key]
    if sc.group == 1:
        fp = parse(inp, signed=sc.layout.signed)
        state = sc.circuit.simulate_basis(sc.encode_input(fp.value))
        return sc.decode_digits(state).text(sc.digits_point)
    state = sc.circuit.simulate_basis(sc.encode_digits(parse_digits(inp)))
    out, infinite = sc.decode_value(state)
    return "infinite" if infinite else render(out)


def verify_table2(args) -> list[VerificationReport]:
    t0 = time.perf_counter()
    cache: dict = {}
    cases = matches = 0
    for row in _table2_rows():
        family, m, n, inp, want = row[:5]
        info = len(row) > 5 and row[5] == "informational"
        got = _run_table2_row(family, int(m), int(n), inp, cache)
        if info:
            print(f"  info {family} {inp} -> {got} (recorded, not asserted)")
            continue
        cases += 1
        ok = got == want
        matches += ok
        if not ok:
            print(f"  row {family} {inp}: want {want} got {got}")
    return [VerificationReport("table2", "golden-rows", "bundled fixture",
                               cases, matches, matches == cases,
                               wall_time=time.perf_counter() - t0)]


def _valid_raws(sc: SynthesizedCircuit):
    for raw in range(1 << sc.config.m):
        try:
            sc.spec.encode(make(raw, sc.layout).value, sc.layout)
        except (DomainError, FixedPointError):
            continue
        yield raw


def verify_group1(args) -> list[VerificationReport]:
    m = args.m or 6
    reports = []
    for family in ("log", "arccot"):
        t0 = time.perf_counter()
        sc = synthesize(SynthConfig(family, m, m, args.policy))
        spec = sc.spec
        cases = circuit_bad = oracle_bad = 0
        for raw in _valid_raws(sc):
            x = make(raw, sc.layout).value
            cases += 1
            classical = fbe_expand_trace(spec, x, m, m)[0].digits
            oracle = fbe_expand_trace(spec, x, m, 4 * m)[0].digits
            state = sc.circuit.simulate_basis(sc.encode_input(x))
            if sc.decode_digits(state).digits != classical:
                circuit_bad += 1
            if classical != oracle:
                oracle_bad += 1
        good = cases - max(circuit_bad, oracle_bad)
        reports.append(VerificationReport(
            "group1-exact", spec.name, f"m=n={m}", cases, good,
            circuit_bad == 0 and oracle_bad == 0,
            note=(f"circuit mismatches {circuit_bad}, "
                  f"wide-oracle digit mismatches {oracle_bad}"),
            wall_time=time.perf_counter() - t0))
    return reports


def _exp_worst(n):
    yield (1,) * n
    yield (0,) * (n - 1) + (1,)
    yield tuple((i + 1) % 2 for i in range(n))


def _cos_worst(n):
    yield (0,) + (1,) * (n - 1)
    yield (1,) * n
    yield (1,) + (0,) * (n - 1)


def verify_group2(args) -> list[VerificationReport]:
    import math

    m = args.m or 12
    n = min(args.n or 8, m - 4)
    rng = random.Random(args.seed)
    reports = []
    for name, worst, true_fn in (
        ("exp2", _exp_worst, lambda x: 2.0 ** x),
        ("cos", _cos_worst, lambda x: math.cos(math.pi * x)),
    ):
        t0 = time.perf_counter()
        spec = get_spec(name)
        budget = error_budget(name, n, m)
        bound = float(budget.bound)
        strings = list(worst(n))
        strings += [tuple(rng.randrange(2) for _ in range(n))
                    for _ in range(args.cases)]
        worst_err = 0.0
        ok = 0
        for bits in strings:
            ds = DigitString(bits)
            (out, infinite), _ = ifbe_evaluate_trace(spec, ds, m)
            err = abs(float(out.value) - true_fn(float(ds.value())))
            worst_err = max(worst_err, err)
            ok += err < bound
        reports.append(VerificationReport(
            "group2-bounds", name, f"n={n} m={m}", len(strings), ok,
            ok == len(strings), max_error=worst_err, bound=bound,
            note=budget.bound_text, wall_time=time.perf_counter() - t0))
    return reports


def verify_blocks(args) -> list[VerificationReport]:
    import math

    from . import blocks, fixedpoint

    t0 = time.perf_counter()
    cases = matches = 0

    def tally(got, want):
        nonlocal cases, matches
        cases += 1
        matches += got == want

    w = 4
    add = blocks.build_adder(w)
    a_reg, b_reg = add.registers["A"], add.registers["B"]
    for a in range(1 << w):
        for bb in range(1 << w):
            out = add.simulate_basis(a_reg.insert(b_reg.insert(0, bb), a))
            tally((a_reg.extract(out), b_reg.extract(out)), (a, (a + bb) % (1 << w)))
    for w_, k in ((5, 2), (5, 4)):
        for direction in ("left", "right"):
            sh = blocks.build_shift(w_, k, direction)
            reg = sh.registers["A"]
            for a in range(1 << w_):
                out = sh.simulate_basis(reg.insert(0, a))
                if direction == "left":
                    want = ((a << k) | (a >> (w_ - k))) % (1 << w_)
                else:
                    want = (a >> k) | ((a % (1 << k)) << (w_ - k))
                tally(reg.extract(out), want)
    ab = blocks.build_absolute(5)
    reg = ab.registers["A"]
    lay5 = Layout(2, 3, True)
    for a in range(1 << 5):
        if a == 1 << 4:
            continue
        out = ab.simulate_basis(reg.insert(0, a))
        tally(reg.extract(out), fixedpoint.absolute(make(a, lay5)).raw)
    for method in ("shift_add", "reversed_sqrt"):
        sq = blocks.build_square(3, method=method)
        a_reg, p_reg = sq.registers["A"], sq.registers["P"]
        for a in range(8):
            out = sq.simulate_basis(a_reg.insert(0, a))
            tally((a_reg.extract(out), p_reg.extract(out)), (a, a * a))
    for policy in ("garbage", "clean"):
        rt = blocks.build_sqrt(5, policy=policy)
        a_reg, b_reg = rt.registers["A"], rt.registers["B"]
        for a in range(1 << 5):
            out = rt.simulate_basis(a_reg.insert(0, a))
            tally(b_reg.extract(out), math.isqrt(a))
        rec = blocks.build_reciprocal(5, 2, policy=policy)
        a_reg, b_reg = rec.registers["A"], rec.registers["B"]
        for a in range(1, 1 << 4):
            out = rec.simulate_basis(a_reg.insert(0, a))
            tally(b_reg.extract(out), (1 << 4) // a)
    return [VerificationReport("blocks", "arith-factories", "width<=5",
                               cases, matches, cases == matches,
                               wall_time=time.perf_counter() - t0)]


def verify_reversibility(args) -> list[VerificationReport]:
    rng = random.Random(args.seed)
    reports = []
    for family in sorted(SYNTH_SPEC):
        t0 = time.perf_counter()
        cases = matches = 0
        for policy in ("garbage", "clean"):
            sc = synthesize(SynthConfig(family, 3, 6, policy))
            inv = sc.circuit.inverse()
            for _ in range(25):
                start = rng.randrange(1 << sc.n_qubits)
                cases += 1
                matches += inv.simulate_basis(
                    sc.circuit.simulate_basis(start)) == start
            if policy == "clean":
                if sc.group == 1:
                    starts = [sc.encode_input(make(r, sc.layout).value)
                              for r in itertools.islice(_valid_raws(sc), 8)]
                else:
                    starts = [sc.encode_digits(DigitString(bits)) for bits in
                              itertools.product((0, 1), repeat=3)]
                for start in starts:
                    state = sc.circuit.simulate_basis(start)
                    cases += 1
                    matches += all(
                        reg.extract(state) == 0
                        for reg in sc.circuit.registers.values()
                        if reg.role == "ancilla-clean")
        reports.append(VerificationReport(
            "reversibility", family, "n=3 m=6", cases, matches,
            cases == matches, wall_time=time.perf_counter() - t0))
    return reports


SUITES = {
    "table2": verify_table2,
    "group1-exact": verify_group1,
    "group2-bounds": verify_group2,
    "blocks": verify_blocks,
    "reversibility": verify_reversibility,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        reports.extend(SUITES[name](args))
    for rep in reports:
        _print_report(rep, args.timing)
    failed = [r for r in reports if not r.passed]
    print(f"verdict: {'PASS' if not failed else 'FAIL'} "
          f"({len(reports) - len(failed)}/{len(reports)} suites green)")
    return 1 if failed else 0


# ------------------------------------------------------------------- bench

def cmd_bench(args) -> int:
    print(f"resource counts at n={args.n} m={args.m} "
          f"policy={args.policy} square={args.square}")
    for family in sorted(SYNTH_SPEC):
        sc = synthesize(SynthConfig(family, args.n, args.m, args.policy,
                                    args.square.replace("-", "_")))
        r = sc.circuit.resource_count()
        print(f"{family:7s} qubits {r['qubits']:5d} gates {r['gates']:6d} "
              f"toffoli-equiv {r['toffoli_equivalent']:6d} "
              f"cx-equiv {r['cx_equivalent']:6d}")
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fbe",
        description="digit-recurrence evaluators and their reversible circuits")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, n_default=4, m_default=16):
        p.add_argument("--n", type=int, default=n_default,
                       help="digit count")
        p.add_argument("--m", type=int, default=m_default,
                       help="working register width")
        p.add_argument("--policy", choices=("garbage", "clean"),
                       default="garbage")
        p.add_argument("--square", choices=("shift-add", "reversed-sqrt"),
                       default="shift-add")

    p = sub.add_parser("eval", help="run a recurrence classically")
    p.add_argument("function")
    p.add_argument("arg", help="number (group 1) or digit string (group 2)")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=16)
    p.add_argument("--radix", type=int, choices=(2, 3, 4), default=2)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="synthesize a circuit to text form")
    p.add_argument("function")
    common(p, n_default=3, m_default=6)
    p.add_argument("--format", choices=("text",), default="text")
    p.add_argument("-o", "--output")
    p.add_argument("--report", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sim", help="simulate a synthesized circuit file")
    p.add_argument("circuit")
    p.add_argument("input")
    p.add_argument("--mode", choices=("basis", "sparse"), default="basis")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--policy", choices=("garbage", "clean"), default="garbage")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=20240901)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="print resource counts per family")
    common(p, n_default=4, m_default=8)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FixedPointError, CircuitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
