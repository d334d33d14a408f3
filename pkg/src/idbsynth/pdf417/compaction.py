"""PDF417 high-level encoding: payload bytes <-> data codewords.

Three compaction modes. Text packs two sub-mode values per codeword
(sub-modes alpha/lower/mixed/punct with shift and latch codes), numeric
packs digit groups of up to 44 as base-900 big integers with a leading
"1" guard digit, and byte packs 6-byte groups into 5 codewords. Mode
latches: 900 = text, 901 = byte, 902 = numeric, 924 = byte when the
byte count is a multiple of 6. 913 is the single-byte shift (accepted
when decoding, never produced here).

Auto mode segments the payload per maximal run: digit runs of >= 13 go
numeric, runs of text-encodable characters go text, anything else goes
byte.
"""

from __future__ import annotations

import enum

from ..errors import CapacityExceeded, EmptyPayload

LATCH_TEXT = 900
LATCH_BYTE = 901
LATCH_NUMERIC = 902
SHIFT_BYTE = 913
LATCH_BYTE_MULT6 = 924

MAX_DATA_CODEWORDS = 925
NUMERIC_GROUP_DIGITS = 44
NUMERIC_RUN_THRESHOLD = 13
# Below this length a printable run costs more as text (two latches plus
# half-rate packing) than staying in byte mode, so it is absorbed.
TEXT_RUN_THRESHOLD = 5

_ALPHA, _LOWER, _MIXED, _PUNCT = range(4)

_MIXED_CHARS = "0123456789&\r\t,:#-.$/+%*=^"
_PUNCT_CHARS = ";<>@[\\]_`~!\r\t,:\n-.$/\"|*()?{}'"

_SUBMODE_SETS = (
    {chr(ord("A") + i): i for i in range(26)} | {" ": 26},
    {chr(ord("a") + i): i for i in range(26)} | {" ": 26},
    {ch: i for i, ch in enumerate(_MIXED_CHARS)} | {" ": 26},
    {ch: i for i, ch in enumerate(_PUNCT_CHARS)},
)

# Latch code sequences between sub-modes (values in the text stream).
_LATCH_SEQ = {
    (_ALPHA, _LOWER): (27,),
    (_ALPHA, _MIXED): (28,),
    (_ALPHA, _PUNCT): (28, 25),
    (_LOWER, _ALPHA): (28, 28),
    (_LOWER, _MIXED): (28,),
    (_LOWER, _PUNCT): (28, 25),
    (_MIXED, _ALPHA): (28,),
    (_MIXED, _LOWER): (27,),
    (_MIXED, _PUNCT): (25,),
    (_PUNCT, _ALPHA): (29,),
    (_PUNCT, _LOWER): (29, 27),
    (_PUNCT, _MIXED): (29, 28),
}

_PS_SHIFT = 29
_AS_SHIFT = 27
_PAD_VALUE = _PS_SHIFT

TEXT_CHARSET = frozenset().union(*(set(s) for s in _SUBMODE_SETS))


class ModePolicy(enum.Enum):
    AUTO = "auto"
    TEXT_ONLY = "text"
    BYTE_ONLY = "byte"
    NUMERIC_ONLY = "numeric"


def _encode_text_values(text: str) -> list[int]:
    """Sub-mode value stream for a text segment (starts in alpha)."""
    vals: list[int] = []
    sub = _ALPHA
    n = len(text)
    for i, ch in enumerate(text):
        table = _SUBMODE_SETS[sub]
        if ch in table:
            vals.append(table[ch])
            continue
        nxt = text[i + 1] if i + 1 < n else None
        if sub != _PUNCT and ch in _SUBMODE_SETS[_PUNCT]:
            if nxt is None or nxt in table:
                vals.extend((_PS_SHIFT, _SUBMODE_SETS[_PUNCT][ch]))
                continue
        if sub == _LOWER and ch in _SUBMODE_SETS[_ALPHA] and ch != " ":
            if nxt is None or nxt in table:
                vals.extend((_AS_SHIFT, _SUBMODE_SETS[_ALPHA][ch]))
                continue
        for target in (_ALPHA, _LOWER, _MIXED, _PUNCT):
            if target != sub and ch in _SUBMODE_SETS[target]:
                vals.extend(_LATCH_SEQ[(sub, target)])
                vals.append(_SUBMODE_SETS[target][ch])
                sub = target
                break
        else:
            raise ValueError(f"character not text-encodable: {ch!r}")
    return vals


def _pack_text(text: str) -> list[int]:
    vals = _encode_text_values(text)
    if len(vals) % 2:
        vals.append(_PAD_VALUE)
    return [vals[i] * 30 + vals[i + 1] for i in range(0, len(vals), 2)]


def _pack_numeric(digits: str) -> list[int]:
    out: list[int] = []
    for i in range(0, len(digits), NUMERIC_GROUP_DIGITS):
        group = digits[i:i + NUMERIC_GROUP_DIGITS]
        value = int("1" + group)
        cws: list[int] = []
        while value:
            cws.append(value % 900)
            value //= 900
        out.extend(reversed(cws))
    return out


def _pack_bytes(chunk: bytes) -> list[int]:
    out: list[int] = []
    full = len(chunk) // 6
    for g in range(full):
        value = int.from_bytes(chunk[g * 6:(g + 1) * 6], "big")
        cws = []
        for _ in range(5):
            cws.append(value % 900)
            value //= 900
        out.extend(reversed(cws))
    out.extend(chunk[full * 6:])
    return out


def _segment_auto(text: str) -> list[tuple[str, str]]:
    """Split into (mode, run) pairs; modes are 't', 'n', 'b'."""
    segs: list[tuple[str, str]] = []
    i = 0
    n = len(text)

    def digit_run(j: int) -> int:
        k = j
        while k < n and text[k].isdigit():
            k += 1
        return k - j

    while i < n:
        d = digit_run(i)
        if d >= NUMERIC_RUN_THRESHOLD:
            segs.append(("n", text[i:i + d]))
            i += d
        elif text[i] in TEXT_CHARSET:
            j = i
            while j < n and text[j] in TEXT_CHARSET:
                if text[j].isdigit() and digit_run(j) >= NUMERIC_RUN_THRESHOLD:
                    break
                j += 1
            segs.append(("t", text[i:j]))
            i = j
        else:
            j = i
            while j < n and text[j] not in TEXT_CHARSET:
                j += 1
            segs.append(("b", text[i:j]))
            i = j

    # Short text islands between byte runs cost more as text than as
    # bytes; absorb them and coalesce the result.
    merged: list[tuple[str, str]] = []
    for mode, run in segs:
        if (mode == "t" and len(run) < TEXT_RUN_THRESHOLD
                and any(m == "b" for m, _ in segs)):
            mode = "b"
        if merged and merged[-1][0] == mode == "b":
            merged[-1] = ("b", merged[-1][1] + run)
        else:
            merged.append((mode, run))
    return merged


def compact(payload: bytes, mode_policy: ModePolicy = ModePolicy.AUTO) -> list[int]:
    """Compact payload bytes into data codewords (no length descriptor)."""
    if not payload:
        raise EmptyPayload("cannot compact an empty payload")
    text = payload.decode("latin-1")

    if mode_policy is ModePolicy.NUMERIC_ONLY:
        if not text.isdigit():
            raise ValueError("NumericOnly requires an all-digit payload")
        segs = [("n", text)]
    elif mode_policy is ModePolicy.BYTE_ONLY:
        segs = [("b", text)]
    elif mode_policy is ModePolicy.TEXT_ONLY:
        bad = next((ch for ch in text if ch not in TEXT_CHARSET), None)
        if bad is not None:
            raise ValueError(f"TextOnly cannot encode {bad!r}")
        segs = [("t", text)]
    else:
        segs = _segment_auto(text)

    out: list[int] = []
    # Symbols start in text compaction mode, so the first text segment
    # needs no latch; every later segment announces itself.
    for idx, (seg_mode, run) in enumerate(segs):
        if seg_mode == "t":
            if idx > 0:
                out.append(LATCH_TEXT)
            out.extend(_pack_text(run))
        elif seg_mode == "n":
            out.append(LATCH_NUMERIC)
            out.extend(_pack_numeric(run))
        else:
            raw = run.encode("latin-1")
            out.append(LATCH_BYTE_MULT6 if len(raw) % 6 == 0 else LATCH_BYTE)
            out.extend(_pack_bytes(raw))

    if len(out) > MAX_DATA_CODEWORDS:
        raise CapacityExceeded(
            f"{len(out)} data codewords exceed the {MAX_DATA_CODEWORDS} limit")
    return out


def _decode_text_values(values: list[int]) -> str:
    chars: list[str] = []
    sub = _ALPHA
    shift: int | None = None
    for v in values:
        cur = shift if shift is not None else sub
        shift = None
        if cur == _ALPHA:
            if v <= 25:
                chars.append(chr(ord("A") + v))
            elif v == 26:
                chars.append(" ")
            elif v == 27:
                sub = _LOWER
            elif v == 28:
                sub = _MIXED
            else:
                shift = _PUNCT
        elif cur == _LOWER:
            if v <= 25:
                chars.append(chr(ord("a") + v))
            elif v == 26:
                chars.append(" ")
            elif v == 27:
                shift = _ALPHA
            elif v == 28:
                sub = _MIXED
            else:
                shift = _PUNCT
        elif cur == _MIXED:
            if v <= 24:
                chars.append(_MIXED_CHARS[v])
            elif v == 25:
                sub = _PUNCT
            elif v == 26:
                chars.append(" ")
            elif v == 27:
                sub = _LOWER
            elif v == 28:
                sub = _ALPHA
            else:
                shift = _PUNCT
        else:
            if v <= 28:
                chars.append(_PUNCT_CHARS[v])
            else:
                sub = _ALPHA
    return "".join(chars)


def decompact(codewords: list[int]) -> bytes:
    """Inverse of compact: data codewords (descriptor stripped) -> bytes."""
    out: list[str] = []
    i = 0
    n = len(codewords)
    mode = "t"
    text_vals: list[int] = []

    def flush_text():
        if text_vals:
            out.append(_decode_text_values(text_vals))
            text_vals.clear()

    while i < n:
        cw = codewords[i]
        if cw == LATCH_TEXT:
            flush_text()
            mode = "t"
            i += 1
        elif cw == LATCH_NUMERIC:
            flush_text()
            i += 1
            group: list[int] = []
            while i < n and codewords[i] < 900:
                group.append(codewords[i])
                i += 1
            pos = 0
            digits: list[str] = []
            while pos < len(group):
                take = min(15, len(group) - pos)
                value = 0
                for cwv in group[pos:pos + take]:
                    value = value * 900 + cwv
                digits.append(str(value)[1:])
                pos += take
            out.append("".join(digits))
            mode = "t"
        elif cw in (LATCH_BYTE, LATCH_BYTE_MULT6):
            flush_text()
            mult6 = cw == LATCH_BYTE_MULT6
            i += 1
            group = []
            while i < n and codewords[i] < 900:
                group.append(codewords[i])
                i += 1
            m = len(group)
            if mult6:
                q, r = m // 5, 0
            else:
                r = m % 5 or 5
                q = (m - r) // 5
            raw = bytearray()
            for g in range(q):
                value = 0
                for cwv in group[g * 5:(g + 1) * 5]:
                    value = value * 900 + cwv
                raw.extend(value.to_bytes(6, "big"))
            raw.extend(group[q * 5:])
            out.append(raw.decode("latin-1"))
            mode = "t"
        elif cw == SHIFT_BYTE:
            if i + 1 < n:
                flush_text()
                out.append(chr(codewords[i + 1] & 0xFF))
            i += 2
        elif mode == "t" and cw < 900:
            text_vals.extend((cw // 30, cw % 30))
            i += 1
        else:
            i += 1  # unknown function codeword: skip
    flush_text()
    return "".join(out).encode("latin-1")
