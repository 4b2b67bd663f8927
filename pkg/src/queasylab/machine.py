"""Step-counted toy register machine.

Every program length reported anywhere in the package is measured on this
machine. Programs are plain bitstrings (not prefix-free). Each instruction is
a 4-bit opcode followed by fixed-width operands, most significant bit first:

    op  mnemonic  operands        bits
    0   HALT      -               4
    1   ACCEPT    -               4
    2   REJECT    -               4
    3   UNKNOWN   -               4
    4   EMIT0     -               4
    5   EMIT1     -               4
    6   READ      r               6
    7   INC       r               6
    8   DEC       r               6
    9   JZ        r, off          12
    10  JMP       off             10
    11  CPY       dst, src        8
    12  JEOF      off             10
    13-15 undefined (Malformed)

Registers r0..r3 hold unbounded naturals (DEC saturates at 0). Jump offsets
are signed 6-bit two's complement, relative to the jump's own index. Running
off either end of the program halts. READ copies the next input bit into a
register; a read past the end yields 0 and raises the EOF flag tested by JEOF.

A fragment too short to hold one more instruction is tolerated after at least
one decoded instruction and is never executed; on its own it is Malformed.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

OPCODE_BITS = 4
REG_BITS = 2
OFFSET_BITS = 6
N_REGISTERS = 1 << REG_BITS
OFFSET_MIN = -(1 << (OFFSET_BITS - 1))
OFFSET_MAX = (1 << (OFFSET_BITS - 1)) - 1

HALT, ACCEPT, REJECT, UNKNOWN, EMIT0, EMIT1, READ, INC, DEC, JZ, JMP, CPY, JEOF = range(13)

MNEMONICS = ("HALT", "ACCEPT", "REJECT", "UNKNOWN", "EMIT0", "EMIT1", "READ",
             "INC", "DEC", "JZ", "JMP", "CPY", "JEOF")
OPCODES = {name: op for op, name in enumerate(MNEMONICS)}

# operand layout per opcode: "r" register, "o" signed offset
OPERANDS = {
    HALT: "", ACCEPT: "", REJECT: "", UNKNOWN: "", EMIT0: "", EMIT1: "",
    READ: "r", INC: "r", DEC: "r", JZ: "ro", JMP: "o", CPY: "rr", JEOF: "o",
}
_FIELD_BITS = {"r": REG_BITS, "o": OFFSET_BITS}
WIDTHS = {op: OPCODE_BITS + sum(_FIELD_BITS[f] for f in fmt) for op, fmt in OPERANDS.items()}


@dataclass(frozen=True, order=True)
class Program:
    """A bitstring run by the machine; its length is the complexity unit."""

    bits: str = ""

    def __post_init__(self):
        if any(c not in "01" for c in self.bits):
            raise ValueError(f"program bits must be 0/1, got {self.bits!r}")

    @property
    def length(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def sort_key(self) -> tuple[int, str]:
        return (len(self.bits), self.bits)

    def hex(self) -> str:
        return bits_to_hex(self.bits)


@dataclass(frozen=True)
class Instruction:
    op: int
    a: int = 0
    b: int = 0

    def __str__(self) -> str:
        fmt = OPERANDS[self.op]
        name = MNEMONICS[self.op]
        if fmt == "":
            return name
        if fmt == "r":
            return f"{name} r{self.a}"
        if fmt == "o":
            return f"{name} {self.a:+d}"
        if fmt == "ro":
            return f"{name} r{self.a} {self.b:+d}"
        return f"{name} r{self.a} r{self.b}"

    def encode(self) -> str:
        out = format(self.op, f"0{OPCODE_BITS}b")
        for kind, value in zip(OPERANDS[self.op], (self.a, self.b)):
            if kind == "r":
                if not 0 <= value < N_REGISTERS:
                    raise ValueError(f"register out of range: {value}")
                out += format(value, f"0{REG_BITS}b")
            else:
                if not OFFSET_MIN <= value <= OFFSET_MAX:
                    raise ValueError(f"offset out of range: {value}")
                out += format(value & ((1 << OFFSET_BITS) - 1), f"0{OFFSET_BITS}b")
        return out


class _Malformed:
    """Sentinel returned by :func:`decode` for undecodable programs."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MALFORMED"

    def __bool__(self) -> bool:
        return False


MALFORMED = _Malformed()


@dataclass(frozen=True)
class Decoded:
    instructions: tuple[Instruction, ...]
    tail: str = ""

    def __len__(self) -> int:
        return len(self.instructions)


def _signed(value: int, width: int) -> int:
    return value - (1 << width) if value >= 1 << (width - 1) else value


def decode(program: Program | str):
    """Decode a program into instructions, or return ``MALFORMED``.

    Total and linear in the program length.
    """
    bits = program.bits if isinstance(program, Program) else program
    pos, n = 0, len(bits)
    instructions = []
    while pos < n:
        if n - pos < OPCODE_BITS:
            break
        op = int(bits[pos:pos + OPCODE_BITS], 2)
        if op not in OPERANDS:
            return MALFORMED
        width = WIDTHS[op]
        if n - pos < width:
            break
        cursor = pos + OPCODE_BITS
        vals = []
        for kind in OPERANDS[op]:
            w = _FIELD_BITS[kind]
            raw = int(bits[cursor:cursor + w], 2)
            vals.append(_signed(raw, w) if kind == "o" else raw)
            cursor += w
        vals += [0] * (2 - len(vals))
        instructions.append(Instruction(op, vals[0], vals[1]))
        pos += width
    tail = bits[pos:]
    if tail and not instructions:
        return MALFORMED
    return Decoded(tuple(instructions), tail)


def encode(instructions: Sequence[Instruction], tail: str = "") -> Program:
    return Program("".join(ins.encode() for ins in instructions) + tail)


class Kind(enum.Enum):
    OUTPUT = "halted_output"
    VERDICT = "halted_verdict"
    OUT_OF_TIME = "out_of_time"
    MALFORMED = "malformed"


@dataclass(frozen=True)
class RunOutcome:
    kind: Kind
    steps_used: int
    output: Optional[str] = None
    verdict: Optional[int] = None   # 0, 1, or None for the "don't know" answer

    @property
    def answer(self) -> Optional[int]:
        """Acceptor verdict with timeouts and malformed programs read as don't-know."""
        return self.verdict if self.kind is Kind.VERDICT else None


def _execute(decoded: Decoded, inp: str, max_steps: int, acceptor: bool) -> RunOutcome:
    prog = decoded.instructions
    n = len(prog)
    regs = [0] * N_REGISTERS
    head = 0
    eof = False
    out = []
    pc = 0
    steps = 0
    verdict = None
    while 0 <= pc < n:
        if steps >= max_steps:
            return RunOutcome(Kind.OUT_OF_TIME, steps)
        ins = prog[pc]
        op = ins.op
        steps += 1
        pc += 1
        if op == HALT:
            break
        elif op == ACCEPT:
            verdict = 1
            break
        elif op == REJECT:
            verdict = 0
            break
        elif op == UNKNOWN:
            break
        elif op == EMIT0:
            out.append("0")
        elif op == EMIT1:
            out.append("1")
        elif op == READ:
            if head < len(inp):
                regs[ins.a] = 1 if inp[head] == "1" else 0
                head += 1
            else:
                regs[ins.a] = 0
                eof = True
        elif op == INC:
            regs[ins.a] += 1
        elif op == DEC:
            if regs[ins.a] > 0:
                regs[ins.a] -= 1
        elif op == JZ:
            if regs[ins.a] == 0:
                pc = pc - 1 + ins.b
        elif op == JMP:
            pc = pc - 1 + ins.a
        elif op == CPY:
            regs[ins.a] = regs[ins.b]
        elif op == JEOF:
            if eof:
                pc = pc - 1 + ins.a
    if acceptor:
        return RunOutcome(Kind.VERDICT, steps, verdict=verdict)
    return RunOutcome(Kind.OUTPUT, steps, output="".join(out))


def run_generator(program: Program | str, max_steps: int) -> RunOutcome:
    """Run with empty input and return what was written to the output tape."""
    decoded = decode(program)
    if decoded is MALFORMED:
        return RunOutcome(Kind.MALFORMED, 0)
    return _execute(decoded, "", max_steps, acceptor=False)


def run_acceptor(program: Program | str, inp: str, max_steps: int) -> RunOutcome:
    """Run on ``inp``; HALT, UNKNOWN or falling off the end give verdict None."""
    decoded = decode(program)
    if decoded is MALFORMED:
        return RunOutcome(Kind.MALFORMED, 0)
    return _execute(decoded, inp, max_steps, acceptor=True)


def enumerate_programs(max_len: int) -> Iterator[Program]:
    """Every bitstring of length 0..max_len in length-then-lexicographic order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    for length in range(max_len + 1):
        for tup in itertools.product("01", repeat=length):
            yield Program("".join(tup))


def all_instructions() -> list[Instruction]:
    """Every encodable instruction, ordered by its bit encoding."""
    out = []
    for op, fmt in OPERANDS.items():
        ranges = []
        for kind in fmt:
            ranges.append(range(N_REGISTERS) if kind == "r" else range(OFFSET_MIN, OFFSET_MAX + 1))
        for vals in itertools.product(*ranges):
            vals = list(vals) + [0] * (2 - len(vals))
            out.append(Instruction(op, vals[0], vals[1]))
    out.sort(key=lambda ins: ins.encode())
    return out


def enumerate_decodable(max_len: int) -> Iterator[Program]:
    """Tail-free decodable programs up to ``max_len`` bits, length-then-lex.

    A program with a tail behaves exactly like its tail-free prefix, which is
    strictly shorter, so shortest-program searches may scan this stream instead
    of :func:`enumerate_programs` and obtain identical minima.
    """
    by_len: dict[int, list[str]] = {0: [""]}
    encoded = [ins.encode() for ins in all_instructions()]
    for length in range(1, max_len + 1):
        bucket = []
        for enc in encoded:
            rest = length - len(enc)
            if rest >= 0:
                bucket.extend(enc + tail for tail in by_len.get(rest, ()))
        bucket.sort()
        by_len[length] = bucket
    for length in range(max_len + 1):
        for bits in by_len[length]:
            yield Program(bits)


# ---------------------------------------------------------------- assembler

_LABEL = re.compile(r"^([A-Za-z_]\w*):\s*(.*)$")


def assemble(text: str) -> Program:
    """Assemble one-mnemonic-per-line text into a program.

    Operands: registers ``r0``..``r3``; offsets as signed integers or label
    names. ``#`` starts a comment. ``.tail 0101`` appends raw trailing bits.
    """
    lines = []
    labels = {}
    tail = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        while True:
            m = _LABEL.match(line)
            if not m:
                break
            labels[m.group(1)] = len(lines)
            line = m.group(2).strip()
        if not line:
            continue
        if line.startswith(".tail"):
            tail = line[5:].strip()
            continue
        lines.append((lineno, line))
    instructions = []
    for index, (lineno, line) in enumerate(lines):
        parts = line.replace(",", " ").split()
        name = parts[0].upper()
        if name not in OPCODES:
            raise ValueError(f"line {lineno}: unknown mnemonic {parts[0]!r}")
        op = OPCODES[name]
        fmt = OPERANDS[op]
        args = parts[1:]
        if len(args) != len(fmt):
            raise ValueError(f"line {lineno}: {name} takes {len(fmt)} operand(s)")
        vals = []
        for kind, arg in zip(fmt, args):
            if kind == "r":
                if not re.fullmatch(r"[rR][0-3]", arg):
                    raise ValueError(f"line {lineno}: bad register {arg!r}")
                vals.append(int(arg[1:]))
            elif arg in labels:
                vals.append(labels[arg] - index)
            else:
                try:
                    vals.append(int(arg))
                except ValueError:
                    raise ValueError(f"line {lineno}: bad offset {arg!r}") from None
        vals += [0] * (2 - len(vals))
        instructions.append(Instruction(op, vals[0], vals[1]))
    return encode(instructions, tail)


def disassemble(program: Program | str) -> str:
    decoded = decode(program)
    if decoded is MALFORMED:
        raise ValueError("program is malformed")
    lines = [str(ins) for ins in decoded.instructions]
    if decoded.tail:
        lines.append(f".tail {decoded.tail}")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------- bit helpers

def bits_to_hex(bits: str) -> str:
    """Length-preserving hex form: ``<nbits>:<hex>`` (``0:`` for empty)."""
    if not bits:
        return "0:"
    return f"{len(bits)}:{int(bits, 2):0{(len(bits) + 3) // 4}x}"


def hex_to_bits(text: str) -> str:
    """Inverse of :func:`bits_to_hex`; a bare hex string means 4 bits per digit."""
    if ":" in text:
        n, digits = text.split(":", 1)
        n = int(n)
        if n == 0:
            return ""
        value = int(digits, 16)
        if value >= 1 << n:
            raise ValueError(f"{text!r}: value does not fit in {n} bits")
        return format(value, f"0{n}b")
    if not text or any(c not in "0123456789abcdefABCDEF" for c in text):
        raise ValueError(f"not a hex string: {text!r}")
    return format(int(text, 16), f"0{4 * len(text)}b")
