"""Synthesized circuits against the classical recurrences."""

import itertools
from fractions import Fraction

import pytest

from fbe.circuit import CircuitError, Gate, import_text
from fbe.expansion import DigitString, fbe_expand_trace, ifbe_evaluate_trace
from fbe.fixedpoint import DomainError, make, render
from fbe.synth import SYNTH_SPEC, SynthConfig, SynthesizedCircuit, synthesize

FORWARD = ("log", "arccos", "arccot")
INVERSE = ("exp", "cos", "cot")


def valid_raws(sc: SynthesizedCircuit):
    """Raw patterns the classical encoder accepts at this layout."""
    out = []
    for raw in range(1 << sc.config.m):
        fp = make(raw, sc.layout)
        try:
            st = sc.spec.encode(fp.value, sc.layout)
        except DomainError:
            continue
        assert st[0] == raw
        out.append(raw)
    return out


def clean_ancillae_ok(sc: SynthesizedCircuit, state: int) -> bool:
    return all(reg.extract(state) == 0
               for reg in sc.circuit.registers.values()
               if reg.role == "ancilla-clean")


def run_forward(sc, raw):
    state = sc.circuit.simulate_basis(sc.encode_input(make(raw, sc.layout).value))
    return state, sc.decode_digits(state)


@pytest.mark.parametrize("fn", FORWARD)
@pytest.mark.parametrize("policy", ("garbage", "clean"))
def test_forward_exhaustive_bit_exact(fn, policy):
    sc = synthesize(SynthConfig(fn, 3, 6, policy))
    for raw in valid_raws(sc):
        x = make(raw, sc.layout).value
        want, trace = fbe_expand_trace(sc.spec, x, 3, 6)
        state, got = run_forward(sc, raw)
        assert got.digits == want.digits, (fn, raw)
        # chain registers hold a_0 .. a_{n-1} of the classical trace
        chain = sc.chain_values(state)
        assert [c.raw for c in chain] == [t.raw for t in trace[:3]], (fn, raw)
        if policy == "clean":
            assert clean_ancillae_ok(sc, state), (fn, raw)


@pytest.mark.parametrize("fn", INVERSE)
@pytest.mark.parametrize("policy", ("garbage", "clean"))
def test_inverse_exhaustive_bit_exact(fn, policy):
    n, m = 4, 6
    sc = synthesize(SynthConfig(fn, n, m, policy))
    for bits in itertools.product((0, 1), repeat=n):
        ds = DigitString(bits)
        (want, want_inf), trace = ifbe_evaluate_trace(sc.spec, ds, m)
        state = sc.circuit.simulate_basis(sc.encode_digits(ds))
        got, got_inf = sc.decode_value(state)
        assert (got.raw, got_inf) == (want.raw, want_inf), (fn, bits)
        chain = sc.chain_values(state)
        if fn == "cot":
            # the trigger module rewrites a_0 in place, so the chain is
            # one step ahead of the trace and ends on the finished value
            assert [c.raw for c in chain[:-1]] == \
                [t.raw for t in trace[1:n]], (fn, bits)
        else:
            assert [c.raw for c in chain[:-1]] == \
                [t.raw for t in trace[:n]], (fn, bits)
        if policy == "clean":
            assert clean_ancillae_ok(sc, state), (fn, bits)


@pytest.mark.parametrize("fn", FORWARD + INVERSE)
def test_square_methods_and_policies_agree(fn):
    n, m = 3, 6
    outs = []
    for policy in ("garbage", "clean"):
        for method in ("shift_add", "reversed_sqrt"):
            sc = synthesize(SynthConfig(fn, n, m, policy, method))
            if sc.group == 1:
                rows = [run_forward(sc, raw)[1].digits
                        for raw in valid_raws(sc)[::5]]
            else:
                rows = []
                for bits in itertools.product((0, 1), repeat=n):
                    st = sc.circuit.simulate_basis(sc.encode_digits(DigitString(bits)))
                    fp, inf = sc.decode_value(st)
                    rows.append((fp.raw, inf))
            outs.append(rows)
    assert outs[0] == outs[1] == outs[2] == outs[3]


# ------------------------------------------------------------- golden rows

def test_log_golden_rows():
    sc = synthesize(SynthConfig("log", 4, 4))
    for x, text in ((1, "0.000"), (2, "1.000")):
        _, ds = run_forward(sc, sc.spec.encode(Fraction(x), sc.layout)[0])
        assert ds.text(1) == text


def test_arccos_golden_rows():
    sc = synthesize(SynthConfig("arccos", 2, 4))
    rows = [(Fraction(0), ".10"), (Fraction(1, 2), ".01"),
            (Fraction(1), ".00"), (Fraction(-1, 2), ".10")]
    for x, text in rows:
        state = sc.circuit.simulate_basis(sc.encode_input(x))
        assert sc.decode_digits(state).text() == text, x


def test_arccot_golden_row():
    sc = synthesize(SynthConfig("arccot", 2, 4))
    state = sc.circuit.simulate_basis(sc.encode_input(1))
    assert sc.decode_digits(state).text() == ".01"


def test_cos_golden_rows():
    sc = synthesize(SynthConfig("cos", 2, 5))
    rows = [((0, 0), "01.000"), ((0, 1), "00.101"),
            ((1, 0), "00.000"), ((1, 1), "11.011")]
    for bits, text in rows:
        state = sc.circuit.simulate_basis(sc.encode_digits(DigitString(bits)))
        fp, inf = sc.decode_value(state)
        assert (render(fp), inf) == (text, False), bits


def test_cot_trivial_angles():
    # cot(pi/4) = 1 and cot(pi/2) = 0; x = 0 stays on the infinity flag
    sc = synthesize(SynthConfig("cot", 2, 6))
    for bits, value, inf in (((0, 1), 1, False), ((1, 0), 0, False),
                             ((0, 0), None, True)):
        state = sc.circuit.simulate_basis(sc.encode_digits(DigitString(bits)))
        fp, got_inf = sc.decode_value(state)
        assert got_inf == inf, bits
        if value is not None:
            assert fp.value == value, bits


def test_log_worked_trace_m16():
    # log2(1.5) = 0.1001...; on the [1,4) layout the same digits follow
    # the leading integer bit and the chain passes through 1.265625 and
    # 1.601806640625 exactly
    sc = synthesize(SynthConfig("log", 5, 16))
    state, ds = run_forward(sc, sc.spec.encode(Fraction(3, 2), sc.layout)[0])
    assert ds.digits == (0, 1, 0, 0, 1)
    chain = sc.chain_values(state)
    assert chain[2].raw == 20736 and float(chain[2].value) == 1.265625
    assert chain[3].raw == 26244 and float(chain[3].value) == 1.601806640625


def test_exp_worked_trace_m16():
    # 2^0.1011 = 2^11/16; intermediate registers hold the printed chain
    sc = synthesize(SynthConfig("exp", 4, 16))
    state = sc.circuit.simulate_basis(sc.encode_digits(DigitString((1, 0, 1, 1))))
    chain = [float(c.value) for c in sc.chain_values(state)]
    for got, want in zip(chain[1:], (1.4142, 1.6818, 1.2968, 1.6105)):
        assert abs(got - want) < 1e-4
    fp, inf = sc.decode_value(state)
    assert not inf and fp.raw == 52772


# ------------------------------------------------------- structural checks

@pytest.mark.parametrize("fn", FORWARD + INVERSE)
@pytest.mark.parametrize("policy", ("garbage", "clean"))
def test_inverse_circuit_round_trips(fn, policy):
    import random

    rng = random.Random(hash((fn, policy)) & 0xFFFF)
    sc = synthesize(SynthConfig(fn, 3, 6, policy))
    inv = sc.circuit.inverse()
    for _ in range(25):
        start = rng.randrange(1 << sc.n_qubits)
        assert inv.simulate_basis(sc.circuit.simulate_basis(start)) == start


def test_superposed_digits_split_into_two_branches():
    # an H on the low digit qubit must yield exactly the two basis
    # outcomes of the individual strings, both at amplitude 1/sqrt(2)
    from fbe.circuit import Circuit

    sc = synthesize(SynthConfig("cos", 2, 5))
    rego = sc.circuit.registers["RegO"]
    c = Circuit(sc.n_qubits)
    c.add(Gate("h", (rego.start,)))
    c.extend(sc.circuit.gates)
    amps = c.simulate_sparse(sc.encode_digits(DigitString((1, 0))))
    want = {sc.circuit.simulate_basis(sc.encode_digits(DigitString(bits)))
            for bits in ((1, 0), (1, 1))}
    assert set(amps) == want
    for a in amps.values():
        assert abs(abs(a) - 2 ** -0.5) < 1e-12


@pytest.mark.parametrize("fn", FORWARD + INVERSE)
def test_qubit_count_affine_in_m(fn):
    n = 4
    counts = [synthesize(SynthConfig(fn, n, m)).n_qubits for m in (8, 12, 16)]
    assert counts[1] - counts[0] == counts[2] - counts[1]


def test_synthesis_is_deterministic():
    a = synthesize(SynthConfig("arccot", 3, 7, "clean")).export()
    b = synthesize(SynthConfig("arccot", 3, 7, "clean")).export()
    assert a == b


def test_export_import_simulates_identically():
    sc = synthesize(SynthConfig("exp", 3, 6))
    c2 = import_text(sc.export())
    ds = DigitString((1, 1, 0))
    start = sc.encode_digits(ds)
    assert c2.simulate_basis(start) == sc.circuit.simulate_basis(start)


def test_config_validation():
    with pytest.raises(CircuitError):
        SynthConfig("tanh", 3, 6)
    with pytest.raises(CircuitError):
        SynthConfig("log", 3, 6, policy="lazy")
    with pytest.raises(CircuitError):
        SynthConfig("log", 3, 6, square_method="booth")
    with pytest.raises(CircuitError):
        SynthConfig("log", 0, 6)
    sc = synthesize(SynthConfig("log", 2, 6))
    with pytest.raises(CircuitError):
        sc.encode_digits(DigitString((0, 1)))
    sc2 = synthesize(SynthConfig("cos", 2, 6))
    with pytest.raises(CircuitError):
        sc2.encode_input(Fraction(1, 2))
    with pytest.raises(CircuitError):
        sc2.encode_digits(DigitString((0, 1, 1)))


def test_synth_spec_covers_all_six():
    assert sorted(SYNTH_SPEC) == sorted(FORWARD + INVERSE)
    for fn, spec_name in SYNTH_SPEC.items():
        sc = synthesize(SynthConfig(fn, 2, 6))
        assert sc.spec.name == spec_name
        assert ("RegO" in sc.circuit.registers
                and sc.chain[0] == "RegI0")
