"""Compiled enumeration kernels for the register machine.

Programs are addressed as ``(length, value)`` pairs: the program bits are
``value`` written MSB-first in ``length`` bits, so numeric order within one
length is lexicographic order. Each scan function walks a half-open value
range of one length and records the first (hence shortest, lexicographically
least) program satisfying each predicate. Callers merge partial results with
:func:`merge_best`, which makes results independent of how the value space
is partitioned.

Semantics mirror :func:`queasylab.machine._execute` exactly; the test suite
checks the two against each other.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# verdict codes
V_REJECT = 0
V_ACCEPT = 1
V_UNKNOWN = 2
V_TIMEOUT = 3
V_MALFORMED = 4

MAX_INSTR = 16          # enough for programs up to 64 bits
NONE = -1


@njit(cache=True)
def decode_into(value, length, ops, aa, bb):
    """Decode into the given arrays. Returns the instruction count, or -1
    if the program is malformed or carries an undecoded tail."""
    pos = 0
    n = 0
    while pos < length:
        rest = length - pos
        if rest < 4:
            return -1
        op = (value >> (rest - 4)) & 15
        if op > 12:
            return -1
        if op <= 5:
            width = 4
        elif op <= 8:
            width = 6
        elif op == 9:
            width = 12
        elif op == 11:
            width = 8
        else:
            width = 10
        if rest < width:
            return -1
        body = (value >> (rest - width)) & ((1 << (width - 4)) - 1)
        a = 0
        b = 0
        if op >= 6 and op <= 8:
            a = body
        elif op == 9:
            a = body >> 6
            b = body & 63
            if b >= 32:
                b -= 64
        elif op == 10 or op == 12:
            a = body
            if a >= 32:
                a -= 64
        elif op == 11:
            a = body >> 2
            b = body & 3
        if n >= ops.shape[0]:
            return -1
        ops[n] = op
        aa[n] = a
        bb[n] = b
        n += 1
        pos += width
    return n


@njit(cache=True)
def execute(ops, aa, bb, n, inp, inp_len, budget, out, out_cap):
    """Run a decoded program.

    Returns (code, steps, out_len). ``code`` is a verdict code; in generator
    use the verdict is ignored and ``out_len`` counts emitted bits (may exceed
    ``out_cap``, in which case only the first ``out_cap`` bits are stored).
    """
    regs = np.zeros(4, dtype=np.int64)
    head = 0
    eof = False
    pc = 0
    steps = 0
    out_len = 0
    code = V_UNKNOWN
    while pc >= 0 and pc < n:
        if steps >= budget:
            return V_TIMEOUT, steps, out_len
        op = ops[pc]
        a = aa[pc]
        steps += 1
        pc += 1
        if op == 0:
            break
        elif op == 1:
            code = V_ACCEPT
            break
        elif op == 2:
            code = V_REJECT
            break
        elif op == 3:
            break
        elif op == 4 or op == 5:
            if out_len < out_cap:
                out[out_len] = op - 4
            out_len += 1
        elif op == 6:
            if head < inp_len:
                regs[a] = inp[head]
                head += 1
            else:
                regs[a] = 0
                eof = True
        elif op == 7:
            regs[a] += 1
        elif op == 8:
            if regs[a] > 0:
                regs[a] -= 1
        elif op == 9:
            if regs[a] == 0:
                pc = pc - 1 + bb[pc - 1]
        elif op == 10:
            pc = pc - 1 + a
        elif op == 11:
            regs[a] = regs[bb[pc - 1]]
        elif op == 12:
            if eof:
                pc = pc - 1 + a
    return code, steps, out_len


@njit(cache=True)
def scan_generators(length, v_lo, v_hi, budget, out_cap, best_len, best_val):
    """Record, for every output string of at most ``out_cap`` bits, the first
    program in ``[v_lo, v_hi)`` producing it. Output ``o`` of length ``k`` is
    stored at index ``2**k - 1 + int(o, 2)``. Returns programs executed."""
    ops = np.empty(MAX_INSTR, dtype=np.int64)
    aa = np.empty(MAX_INSTR, dtype=np.int64)
    bb = np.empty(MAX_INSTR, dtype=np.int64)
    out = np.empty(out_cap + 1, dtype=np.int64)
    empty = np.empty(0, dtype=np.int64)
    runs = 0
    for v in range(v_lo, v_hi):
        n = decode_into(v, length, ops, aa, bb)
        if n < 0:
            continue
        runs += 1
        code, steps, out_len = execute(ops, aa, bb, n, empty, 0, budget, out, out_cap)
        if code == V_TIMEOUT or out_len > out_cap:
            continue
        idx = (1 << out_len) - 1
        for i in range(out_len):
            idx += out[i] << (out_len - 1 - i)
        if best_len[idx] == NONE:
            best_len[idx] = length
            best_val[idx] = v
    return runs


@njit(cache=True)
def _verdict(ops, aa, bb, n, inputs, lens, j, budget, out):
    code, steps, out_len = execute(ops, aa, bb, n, inputs[j], lens[j], budget, out, 0)
    return code


@njit(cache=True)
def scan_acceptors(length, v_lo, v_hi, budget, inputs, lens, chi,
                   cd_len, cd_val, ic_len, ic_val):
    """One pass over programs computing distinguishing and instance witnesses
    for every universe member at once.

    ``inputs[j, :lens[j]]`` is universe member ``j``; ``chi[k, j]`` is the
    characteristic function of language ``k`` on it. A program is a
    distinguishing witness for ``j`` when it accepts ``j`` and rejects every
    other member; it is an instance witness for ``(k, j)`` when every
    non-don't-know answer over the universe matches ``chi[k]`` and its answer
    on ``j`` is not don't-know. Timeouts count as don't-know.
    """
    n_u = inputs.shape[0]
    n_l = chi.shape[0]
    ops = np.empty(MAX_INSTR, dtype=np.int64)
    aa = np.empty(MAX_INSTR, dtype=np.int64)
    bb = np.empty(MAX_INSTR, dtype=np.int64)
    out = np.empty(1, dtype=np.int64)
    verdicts = np.empty(n_u, dtype=np.int64)
    ic_alive = np.empty(n_l, dtype=np.bool_)
    runs = 0
    for v in range(v_lo, v_hi):
        n = decode_into(v, length, ops, aa, bb)
        if n < 0:
            continue
        cd_alive = True
        accepted = -1
        for k in range(n_l):
            ic_alive[k] = True
        alive = True
        seen = 0
        for j in range(n_u):
            code = _verdict(ops, aa, bb, n, inputs, lens, j, budget, out)
            runs += 1
            verdicts[j] = code
            seen = j + 1
            if cd_alive:
                if code == V_ACCEPT:
                    if accepted >= 0:
                        cd_alive = False
                    else:
                        accepted = j
                elif code != V_REJECT:
                    cd_alive = False
            any_ic = False
            for k in range(n_l):
                if ic_alive[k]:
                    if (code == V_ACCEPT or code == V_REJECT) and code != chi[k, j]:
                        ic_alive[k] = False
                    else:
                        any_ic = True
            if not cd_alive and not any_ic:
                alive = False
                break
        if not alive:
            continue
        if cd_alive and accepted >= 0 and cd_len[accepted] == NONE:
            cd_len[accepted] = length
            cd_val[accepted] = v
        for k in range(n_l):
            if ic_alive[k]:
                for j in range(seen):
                    c = verdicts[j]
                    if (c == V_ACCEPT or c == V_REJECT) and ic_len[k, j] == NONE:
                        ic_len[k, j] = length
                        ic_val[k, j] = v
    return runs


def merge_best(into_len, into_val, part_len, part_val):
    """Merge a partial result into an accumulator, keeping the minimum under
    (length, lexicographic) order."""
    into_len = np.asarray(into_len)
    take = (part_len != NONE) & (
        (into_len == NONE)
        | (part_len < into_len)
        | ((part_len == into_len) & (part_val < into_val))
    )
    into_len[take] = part_len[take]
    into_val[take] = part_val[take]
    return take.any()


def warmup():
    """Trigger compilation on tiny inputs."""
    best_len = np.full(3, NONE, dtype=np.int64)
    best_val = np.zeros(3, dtype=np.int64)
    scan_generators(4, 0, 16, 4, 1, best_len, best_val)
    inputs = np.zeros((1, 1), dtype=np.int64)
    lens = np.ones(1, dtype=np.int64)
    chi = np.zeros((1, 1), dtype=np.int64)
    scan_acceptors(4, 0, 16, 4, inputs, lens, chi,
                   np.full(1, NONE, dtype=np.int64), np.zeros(1, dtype=np.int64),
                   np.full((1, 1), NONE, dtype=np.int64), np.zeros((1, 1), dtype=np.int64))
