"""Code 128 symbology codec.

Encoding plans the code-set sequence (A/B/C with latches and shifts) by
dynamic programming over (position, code set) states so the emitted
symbol count is minimal; ties prefer Start B, then C, then A, and latches
over shifts, keeping plans deterministic. The mod-103 checksum is always
appended. Decoding normalizes run widths to the base module, matches
patterns, applies shift/latch semantics, and verifies the checksum.

Every non-stop symbol is 11 modules in 6 bar/space runs; the stop symbol
is 13 modules in 7 runs (it carries a terminating bar).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    BadStop,
    ChecksumMismatch,
    EmptyPayload,
    PatternMismatch,
    UnencodableCharacter,
)

# Run-length patterns indexed by symbol value; digits alternate bar/space
# widths starting with a bar.
PATTERNS = (
    "212222", "222122", "222221", "121223", "121322", "131222", "122213", "122312",
    "132212", "221213", "221312", "231212", "112232", "122132", "122231", "113222",
    "123122", "123221", "223211", "221132", "221231", "213212", "223112", "312131",
    "311222", "321122", "321221", "312212", "322112", "322211", "212123", "212321",
    "232121", "111323", "131123", "131321", "112313", "132113", "132311", "211313",
    "231113", "231311", "112133", "112331", "132131", "113123", "113321", "133121",
    "313121", "211331", "231131", "213113", "213311", "213131", "311123", "311321",
    "331121", "312113", "312311", "332111", "314111", "221411", "431111", "111224",
    "111422", "121124", "121421", "141122", "141221", "112214", "112412", "122114",
    "122411", "142112", "142211", "241211", "221114", "413111", "241112", "134111",
    "111242", "121142", "121241", "114212", "124112", "124211", "411212", "421112",
    "421211", "212141", "214121", "412121", "111143", "111341", "131141", "114113",
    "114311", "411113", "411311", "113141", "114131", "311141", "411131", "211412",
    "211214", "211232", "2331112",
)

START_A, START_B, START_C, STOP = 103, 104, 105, 106
SHIFT = 98
CODE_C = 99
CODE_B = 100
CODE_A = 101
FNC1 = 102

_SETS = "ABC"
_START_BY_SET = {"A": START_A, "B": START_B, "C": START_C}
_LATCH_VALUE = {
    ("A", "B"): CODE_B, ("A", "C"): CODE_C,
    ("B", "A"): CODE_A, ("B", "C"): CODE_C,
    ("C", "A"): CODE_A, ("C", "B"): CODE_B,
}
# Tie-break preference: Start B, then C, then A; latch preferred to shift.
_SET_PREF = {"B": 0, "C": 1, "A": 2}


def _value_in_a(ch: str) -> int | None:
    o = ord(ch)
    if 32 <= o <= 95:
        return o - 32
    if 0 <= o <= 31:
        return o + 64
    return None


def _value_in_b(ch: str) -> int | None:
    o = ord(ch)
    if 32 <= o <= 127:
        return o - 32
    return None


def _char_from_a(value: int) -> str:
    return chr(value + 32) if value <= 63 else chr(value - 64)


def _char_from_b(value: int) -> str:
    return chr(value + 32)


@dataclass
class Code128Symbol:
    """Encoded symbol: value sequence plus its bar/space run lengths."""

    values: list[int]
    runs: list[int] = field(repr=False)

    @property
    def modules_total(self) -> int:
        return 11 * (len(self.values) - 1) + 13


def _checksum(values: list[int]) -> int:
    acc = values[0]
    for i, v in enumerate(values[1:], start=1):
        acc += i * v
    return acc % 103


def _plan(text: str) -> list[int]:
    """Minimal-symbol value sequence (start code + data, no checksum/stop)."""
    n = len(text)
    # best maps (pos, set) -> (cost, parent_key, emitted_values); first
    # writer wins ties, and edges are relaxed in preference order.
    best: dict[tuple[int, str], tuple[int, tuple | None, list[int]]] = {
        (0, s): (1, None, [_START_BY_SET[s]]) for s in "BCA"
    }

    def relax(key, cost, parent, emitted):
        cur = best.get(key)
        if cur is None or cost < cur[0]:
            best[key] = (cost, parent, emitted)
            return True
        return False

    # Process positions in order; latch edges stay at the same position so
    # run them to fixation before advancing (the latch graph is complete,
    # one round per target suffices).
    for pos in range(n + 1):
        for _ in range(2):
            for s in "BCA":
                key = (pos, s)
                if key not in best:
                    continue
                cost, _, _ = best[key]
                for t in "BCA":
                    if t == s:
                        continue
                    relax((pos, t), cost + 1, key, [_LATCH_VALUE[(s, t)]])
        if pos == n:
            break
        ch = text[pos]
        nxt = text[pos + 1] if pos + 1 < n else None
        for s in "BCA":
            key = (pos, s)
            if key not in best:
                continue
            cost, _, _ = best[key]
            if s == "A":
                v = _value_in_a(ch)
                if v is not None:
                    relax((pos + 1, "A"), cost + 1, key, [v])
                elif _value_in_b(ch) is not None:
                    relax((pos + 1, "A"), cost + 2, key, [SHIFT, _value_in_b(ch)])
            elif s == "B":
                v = _value_in_b(ch)
                if v is not None:
                    relax((pos + 1, "B"), cost + 1, key, [v])
                elif _value_in_a(ch) is not None:
                    relax((pos + 1, "B"), cost + 2, key, [SHIFT, _value_in_a(ch)])
            else:
                if ch.isdigit() and nxt is not None and nxt.isdigit():
                    relax((pos + 2, "C"), cost + 1, key, [int(ch + nxt)])

    finals = [(best[(n, s)][0], _SET_PREF[s], s) for s in "BCA" if (n, s) in best]
    if not finals:
        raise UnencodableCharacter(f"no code-set plan covers {text!r}")
    _, _, end_set = min(finals)

    values: list[int] = []
    key = (n, end_set)
    while key is not None:
        cost, parent, emitted = best[key]
        values = emitted + values
        key = parent
    return values


def _runs_for_values(values: list[int]) -> list[int]:
    runs: list[int] = []
    for v in values:
        runs.extend(int(d) for d in PATTERNS[v])
    return runs


def encode_c128(text: str) -> Code128Symbol:
    """Encode text as a Code 128 symbol with a minimal code-set plan."""
    if not text:
        raise EmptyPayload("cannot encode an empty payload")
    bad = next((ch for ch in text if ord(ch) > 127), None)
    if bad is not None:
        raise UnencodableCharacter(f"character outside the Code 128 repertoire: {bad!r}")
    values = _plan(text)
    values.append(_checksum(values))
    values.append(STOP)
    return Code128Symbol(values=values, runs=_runs_for_values(values))


def decode_c128(runs: list[int]) -> str:
    """Decode bar/space run lengths (bar first, any uniform scale) to text."""
    if len(runs) < 6 + 6 + 6 + 7:  # start + >=1 data + checksum + stop
        raise PatternMismatch("too few runs for a complete symbol")
    if (len(runs) - 7) % 6:
        raise PatternMismatch(f"{len(runs)} runs do not group into symbols")
    n_syms = (len(runs) - 7) // 6 + 1
    modules = 11 * (n_syms - 1) + 13
    total = sum(runs)
    unit = total / modules
    if unit <= 0:
        raise PatternMismatch("empty run-length sequence")
    norm = [round(r / unit) for r in runs]
    if sum(norm) != modules or any(not 1 <= r <= 4 for r in norm[:-1]):
        raise PatternMismatch("run widths are not integer module multiples")

    values = []
    for i in range(n_syms - 1):
        pat = "".join(str(d) for d in norm[i * 6:(i + 1) * 6])
        try:
            values.append(PATTERNS.index(pat))
        except ValueError:
            raise PatternMismatch(f"unknown symbol pattern {pat}") from None
    stop_pat = "".join(str(d) for d in norm[-7:])
    if stop_pat != PATTERNS[STOP]:
        raise BadStop(f"stop pattern is {stop_pat}")

    if values[0] not in (START_A, START_B, START_C):
        raise PatternMismatch(f"sequence starts with {values[0]}, not a start code")
    if _checksum(values[:-1]) != values[-1]:
        raise ChecksumMismatch(
            f"checksum symbol {values[-1]} != computed {_checksum(values[:-1])}")

    current = _SETS[values[0] - START_A]
    out: list[str] = []
    shifted: str | None = None
    for v in values[1:-1]:  # between start code and checksum
        cur = shifted or current
        shifted = None
        if cur == "C":
            if v <= 99:
                out.append(f"{v:02d}")
            elif v == CODE_B:
                current = "B"
            elif v == CODE_A:
                current = "A"
            # FNC1 (102) carries no text
        elif cur == "A":
            if v <= 95:
                out.append(_char_from_a(v))
            elif v == SHIFT:
                shifted = "B"
            elif v == CODE_C:
                current = "C"
            elif v == CODE_B:
                current = "B"
            # 96/97/101 are FNC codes: no text output
        else:
            if v <= 95:
                out.append(_char_from_b(v))
            elif v == SHIFT:
                shifted = "A"
            elif v == CODE_C:
                current = "C"
            elif v == CODE_A:
                current = "A"
            # 96/97/100 are FNC codes: no text output
    return "".join(out)
