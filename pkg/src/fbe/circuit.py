"""Reversible gate-list circuits over x, cx, ccx, mcx, swap, cswap, h.

Circuits here are flat gate lists plus named registers.  Basis-state
simulation compiles the list once into mask programs (one tuple per
gate) and then runs any number of inputs through it; the sparse mode
additionally follows h gates by splitting amplitudes.  The text form is
line oriented and round-trips exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

X_KINDS = ("x", "cx", "ccx", "mcx")
ROLES = ("input", "output", "ancilla-clean", "garbage")


class CircuitError(Exception):
    pass


class SimulationLimit(CircuitError):
    """Sparse simulation exceeded the configured term budget."""


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    neg_mask: int = 0  # bit i set = controls[i] fires on |0>

    def __post_init__(self):
        k = self.kind
        nt, nc = len(self.targets), len(self.controls)
        ok = (
            (k == "x" and nt == 1 and nc == 0)
            or (k == "cx" and nt == 1 and nc == 1)
            or (k == "ccx" and nt == 1 and nc == 2)
            or (k == "mcx" and nt == 1 and nc >= 3)
            or (k == "swap" and nt == 2 and nc == 0)
            or (k == "cswap" and nt == 2 and nc == 1)
            or (k == "h" and nt == 1 and nc == 0)
        )
        if not ok:
            raise CircuitError(f"bad gate shape {k} targets={nt} controls={nc}")
        seen = set(self.targets) | set(self.controls)
        if len(seen) != nt + nc:
            raise CircuitError(f"{k} reuses a qubit: {self.targets} {self.controls}")
        if self.neg_mask >> nc:
            raise CircuitError("neg_mask wider than the control list")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets


def xgate(target: int, controls: Iterable[tuple[int, bool]] = ()) -> Gate:
    """X on target under (qubit, positive?) controls."""
    ctl = tuple(controls)
    qs = tuple(q for q, _ in ctl)
    neg = 0
    for i, (_, pos) in enumerate(ctl):
        if not pos:
            neg |= 1 << i
    kind = {0: "x", 1: "cx", 2: "ccx"}.get(len(qs), "mcx")
    return Gate(kind, (target,), qs, neg)


@dataclass(frozen=True)
class Register:
    name: str
    role: str
    start: int
    size: int
    int_bits: int
    frac_bits: int
    signed: bool = False

    def __post_init__(self):
        if self.role not in ROLES:
            raise CircuitError(f"unknown role {self.role!r}")
        if self.size != self.int_bits + self.frac_bits:
            raise CircuitError(f"{self.name}: size {self.size} != field widths")
        if self.size < 1 or self.start < 0:
            raise CircuitError(f"{self.name}: bad span")

    @property
    def bits(self) -> tuple[int, ...]:
        """Qubit indices lsb first."""
        return tuple(range(self.start, self.start + self.size))

    def extract(self, state: int) -> int:
        return (state >> self.start) & ((1 << self.size) - 1)

    def insert(self, state: int, raw: int) -> int:
        mask = ((1 << self.size) - 1) << self.start
        return (state & ~mask) | ((raw & ((1 << self.size) - 1)) << self.start)


class Circuit:
    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise CircuitError("need at least one qubit")
        self.n_qubits = n_qubits
        self.gates: list[Gate] = []
        self.registers: dict[str, Register] = {}
        self._program = None

    def add_register(self, reg: Register):
        if reg.start + reg.size > self.n_qubits:
            raise CircuitError(f"{reg.name} spills past qubit {self.n_qubits - 1}")
        if reg.name in self.registers:
            raise CircuitError(f"duplicate register {reg.name}")
        self.registers[reg.name] = reg

    def add(self, gate: Gate):
        for q in gate.qubits:
            if not 0 <= q < self.n_qubits:
                raise CircuitError(f"qubit {q} outside 0..{self.n_qubits - 1}")
        self.gates.append(gate)
        self._program = None

    def extend(self, gates: Iterable[Gate]):
        for g in gates:
            self.add(g)

    def inverse(self) -> "Circuit":
        """Every gate in the set is an involution, so reverse the list."""
        inv = Circuit(self.n_qubits)
        inv.registers = dict(self.registers)
        inv.gates = list(reversed(self.gates))
        return inv

    def compose(self, other: "Circuit", qubit_map: Optional[dict[int, int]] = None) -> "Circuit":
        """Append other's gates, optionally rerouting its qubits."""
        out = Circuit(self.n_qubits)
        out.registers = dict(self.registers)
        out.gates = list(self.gates)
        for g in other.gates:
            if qubit_map is None:
                out.add(g)
            else:
                out.add(replace(
                    g,
                    targets=tuple(qubit_map.get(q, q) for q in g.targets),
                    controls=tuple(qubit_map.get(q, q) for q in g.controls),
                ))
        return out

    # ------------------------------------------------------------- running

    def _compile(self):
        if self._program is not None:
            return self._program
        prog = []
        for g in self.gates:
            cm = cv = 0
            for i, q in enumerate(g.controls):
                b = 1 << q
                cm |= b
                if not (g.neg_mask >> i) & 1:
                    cv |= b
            if g.kind in X_KINDS:
                prog.append((cm, cv, 1 << g.targets[0], 0, 0))
            elif g.kind in ("swap", "cswap"):
                mi, mj = 1 << g.targets[0], 1 << g.targets[1]
                prog.append((cm, cv, mi | mj, mi, mj))
            else:  # h
                prog.append((0, 0, 1 << g.targets[0], -1, -1))
        self._program = prog
        return prog

    def simulate_basis(self, state: int) -> int:
        """Run one computational-basis state through the gate list."""
        if not 0 <= state < (1 << self.n_qubits):
            raise CircuitError("state outside the register file")
        s = state
        for cm, cv, flip, mi, mj in self._compile():
            if mi == -1:
                raise CircuitError("h gate present, use simulate_sparse")
            if s & cm == cv:
                if mi:
                    if ((s & mi) == 0) != ((s & mj) == 0):
                        s ^= flip
                else:
                    s ^= flip
        return s

    def simulate_sparse(self, state, cap: int = 1 << 20) -> dict[int, complex]:
        """Exact sparse-state simulation; h splits amplitudes by 1/sqrt(2)."""
        if isinstance(state, int):
            amps = {state: 1.0 + 0j}
        else:
            amps = dict(state)
        inv_sqrt2 = 2 ** -0.5
        for cm, cv, flip, mi, mj in self._compile():
            if mi == -1:
                nxt: dict[int, complex] = {}
                for s, a in amps.items():
                    lo = s & ~flip
                    hi = s | flip
                    w = a * inv_sqrt2
                    nxt[lo] = nxt.get(lo, 0j) + w
                    nxt[hi] = nxt.get(hi, 0j) + (w if not s & flip else -w)
                amps = {s: a for s, a in nxt.items() if a != 0}
            else:
                nxt = {}
                for s, a in amps.items():
                    if s & cm == cv:
                        if mi:
                            if ((s & mi) == 0) != ((s & mj) == 0):
                                s ^= flip
                        else:
                            s ^= flip
                    nxt[s] = nxt.get(s, 0j) + a
                amps = nxt
            if len(amps) > cap:
                raise SimulationLimit(f"state grew past {cap} terms")
        return amps

    # ----------------------------------------------------------- reporting

    def resource_count(self) -> dict:
        """Raw tallies plus a decomposition into the two-control set.

        mcx with k controls is priced at 2(k-1)-1 toffolis and k-2 borrow
        ancillas; swap is 3 cx; cswap is 1 ccx and 2 cx.
        """
        kinds = {k: 0 for k in ("x", "cx", "ccx", "mcx", "swap", "cswap", "h")}
        ccx_equiv = 0
        cx_equiv = 0
        borrow = 0
        for g in self.gates:
            kinds[g.kind] += 1
            if g.kind == "mcx":
                k = len(g.controls)
                ccx_equiv += 2 * (k - 1) - 1
                borrow = max(borrow, k - 2)
            elif g.kind == "ccx":
                ccx_equiv += 1
            elif g.kind == "cswap":
                ccx_equiv += 1
                cx_equiv += 2
            elif g.kind == "swap":
                cx_equiv += 3
            elif g.kind == "cx":
                cx_equiv += 1
        roles: dict[str, int] = {}
        for r in self.registers.values():
            roles[r.role] = roles.get(r.role, 0) + r.size
        return {
            "qubits": self.n_qubits,
            "gates": len(self.gates),
            "by_kind": kinds,
            "toffoli_equivalent": ccx_equiv,
            "cx_equivalent": cx_equiv,
            "decomposition_ancillas": borrow,
            "qubits_by_role": roles,
        }


# ------------------------------------------------------------- text format

def _fmt_operand(q: int, neg: bool) -> str:
    return f"!q[{q}]" if neg else f"q[{q}]"


def export_text(c: Circuit, expand_negative_controls: bool = False) -> str:
    """Serialize; neg controls keep their ! prefix unless expansion into
    x-conjugated positive controls is requested."""
    lines = [f"qubits {c.n_qubits}"]
    for r in c.registers.values():
        hi = r.start + r.size - 1
        line = (f"reg {r.name} {r.role} {r.start}..{hi} "
                f"int_bits {r.int_bits} frac_bits {r.frac_bits}")
        if r.signed:
            line += " signed"
        lines.append(line)
    for g in c.gates:
        pre, post = [], []
        neg = g.neg_mask
        if expand_negative_controls and neg:
            for i, q in enumerate(g.controls):
                if (neg >> i) & 1:
                    pre.append(f"x q[{q}]")
                    post.append(f"x q[{q}]")
            neg = 0
        ops = [_fmt_operand(q, bool((neg >> i) & 1)) for i, q in enumerate(g.controls)]
        ops += [f"q[{t}]" for t in g.targets]
        lines.extend(pre)
        lines.append(f"{g.kind} {','.join(ops)}")
        lines.extend(post)
    return "\n".join(lines) + "\n"


def _parse_operand(tok: str, lineno: int) -> tuple[int, bool]:
    neg = tok.startswith("!")
    body = tok[1:] if neg else tok
    if not (body.startswith("q[") and body.endswith("]")):
        raise CircuitError(f"line {lineno}: bad operand {tok!r}")
    try:
        return int(body[2:-1]), neg
    except ValueError:
        raise CircuitError(f"line {lineno}: bad qubit index in {tok!r}") from None


def import_text(text: str) -> Circuit:
    c: Optional[Circuit] = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "qubits":
            if c is not None:
                raise CircuitError(f"line {lineno}: duplicate qubits header")
            if len(toks) != 2 or not toks[1].isdigit():
                raise CircuitError(f"line {lineno}: bad qubits header")
            c = Circuit(int(toks[1]))
            continue
        if c is None:
            raise CircuitError(f"line {lineno}: qubits header must come first")
        if head == "reg":
            signed = toks[-1] == "signed"
            body = toks[:-1] if signed else toks
            if len(body) != 8 or body[4] != "int_bits" or body[6] != "frac_bits":
                raise CircuitError(f"line {lineno}: bad register line")
            span = body[3].split("..")
            if len(span) != 2:
                raise CircuitError(f"line {lineno}: bad register span")
            try:
                lo, hi = int(span[0]), int(span[1])
                ib, fb = int(body[5]), int(body[7])
            except ValueError:
                raise CircuitError(f"line {lineno}: bad register numbers") from None
            try:
                c.add_register(Register(body[1], body[2], lo, hi - lo + 1, ib, fb, signed))
            except CircuitError as e:
                raise CircuitError(f"line {lineno}: {e}") from None
            continue
        if head not in ("x", "cx", "ccx", "mcx", "swap", "cswap", "h"):
            raise CircuitError(f"line {lineno}: unknown gate {head!r}")
        if len(toks) != 2:
            raise CircuitError(f"line {lineno}: gate wants one operand list")
        ops = [_parse_operand(t, lineno) for t in toks[1].split(",")]
        n_targets = 2 if head in ("swap", "cswap") else 1
        if len(ops) < n_targets:
            raise CircuitError(f"line {lineno}: not enough operands")
        ctl, tgt = ops[:-n_targets], ops[-n_targets:]
        for q, neg in tgt:
            if neg:
                raise CircuitError(f"line {lineno}: target cannot be negated")
        neg_mask = 0
        for i, (_, neg) in enumerate(ctl):
            if neg:
                neg_mask |= 1 << i
        try:
            c.add(Gate(head, tuple(q for q, _ in tgt), tuple(q for q, _ in ctl), neg_mask))
        except CircuitError as e:
            raise CircuitError(f"line {lineno}: {e}") from None
    if c is None:
        raise CircuitError("empty circuit text")
    return c
