"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is selected once at import time from the environment:

    IDBSYNTH_USE_NUMBA=1   require numba (ImportError if missing)
    IDBSYNTH_USE_NUMBA=0   force the pure-numpy fallback
    unset                  use numba when importable, else fall back

Both backends are written with identical per-element operation order
(fastmath disabled, kernel taps accumulated in ascending order) so their
outputs are bit-identical; tests assert this. Kernels:

    rs_ec_lfsr       Reed-Solomon check codewords over GF(929)
    rs_syndromes     syndrome evaluations at powers of 3 over GF(929)
    correlate1d_sym  separable blur pass, symmetric boundary
    convolve2d_sym   small-kernel 2-D convolution, symmetric boundary
    warp_bilinear    inverse-homography bilinear resample, constant fill
"""

from __future__ import annotations

import os

import numpy as np

GF_PRIME = 929


def _select_backend() -> bool:
    flag = os.environ.get("IDBSYNTH_USE_NUMBA", "").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return False
    if flag in ("1", "true", "yes", "on"):
        import numba  # noqa: F401  (raise if unavailable)
        return True
    try:
        import numba  # noqa: F401
        return True
    except ImportError:
        return False


USING_NUMBA = _select_backend()


def using_numba() -> bool:
    """True when the numba backend is active for this process."""
    return USING_NUMBA


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _rs_ec_lfsr_np(data: np.ndarray, gcoef: np.ndarray) -> np.ndarray:
    # gcoef holds g_1..g_k of the monic generator polynomial. Classic
    # remainder LFSR: shift data through, subtract f*g each step.
    k = gcoef.shape[0]
    reg = np.zeros(k, dtype=np.int64)
    for m in range(data.shape[0]):
        f = (data[m] + reg[0]) % GF_PRIME
        reg[:-1] = reg[1:]
        reg[-1] = 0
        if f:
            reg = (reg - f * gcoef) % GF_PRIME
    return (-reg) % GF_PRIME


def _rs_syndromes_np(seq: np.ndarray, count: int) -> np.ndarray:
    # S_i = C(3^i) for i = 1..count, Horner from the first (highest-power)
    # codeword down.
    out = np.zeros(count, dtype=np.int64)
    alpha = 1
    for i in range(count):
        alpha = (alpha * 3) % GF_PRIME
        acc = 0
        for j in range(seq.shape[0]):
            acc = (acc * alpha + seq[j]) % GF_PRIME
        out[i] = acc
    return out


def _correlate1d_sym_np(img: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    # img float64 (H, W, C); symmetric padding (edge value included).
    k = kernel.shape[0]
    r = k // 2
    pad = [(0, 0)] * img.ndim
    pad[axis] = (r, k - 1 - r)
    xp = np.pad(img, pad, mode="symmetric")
    out = np.zeros_like(img)
    sl = [slice(None)] * img.ndim
    n = img.shape[axis]
    for t in range(k):
        sl[axis] = slice(t, t + n)
        out += kernel[t] * xp[tuple(sl)]
    return out


def _convolve2d_sym_np(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    kh, kw = kernel.shape
    ry, rx = kh // 2, kw // 2
    xp = np.pad(img, ((ry, kh - 1 - ry), (rx, kw - 1 - rx), (0, 0)), mode="symmetric")
    h, w = img.shape[:2]
    out = np.zeros_like(img)
    for ky in range(kh):
        for kx in range(kw):
            c = kernel[ky, kx]
            if c != 0.0:
                out += c * xp[ky:ky + h, kx:kx + w, :]
    return out


def _warp_bilinear_np(img: np.ndarray, hinv: np.ndarray, out_h: int, out_w: int,
                      fill: float) -> np.ndarray:
    h, w = img.shape[:2]
    yy, xx = np.mgrid[0:out_h, 0:out_w].astype(np.float64)
    denom = hinv[2, 0] * xx + hinv[2, 1] * yy + hinv[2, 2]
    sx = (hinv[0, 0] * xx + hinv[0, 1] * yy + hinv[0, 2]) / denom
    sy = (hinv[1, 0] * xx + hinv[1, 1] * yy + hinv[1, 2]) / denom
    inside = (sx >= 0.0) & (sx <= w - 1.0) & (sy >= 0.0) & (sy <= h - 1.0)
    x0 = np.clip(np.floor(sx), 0, w - 1).astype(np.int64)
    y0 = np.clip(np.floor(sy), 0, h - 1).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = sx - x0
    fy = sy - y0
    out = np.empty((out_h, out_w, img.shape[2]), dtype=np.float64)
    for c in range(img.shape[2]):
        p00 = img[y0, x0, c]
        p01 = img[y0, x1, c]
        p10 = img[y1, x0, c]
        p11 = img[y1, x1, c]
        v = (p00 * (1.0 - fx) + p01 * fx) * (1.0 - fy) + \
            (p10 * (1.0 - fx) + p11 * fx) * fy
        out[:, :, c] = np.where(inside, v, fill)
    return out


_NUMPY_IMPLS = {
    "rs_ec_lfsr": _rs_ec_lfsr_np,
    "rs_syndromes": _rs_syndromes_np,
    "correlate1d_sym": _correlate1d_sym_np,
    "convolve2d_sym": _convolve2d_sym_np,
    "warp_bilinear": _warp_bilinear_np,
}

# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

_NUMBA_IMPLS = None

if USING_NUMBA:
    from numba import njit

    _jit = njit(cache=True, nogil=True, fastmath=False)

    @_jit
    def _rs_ec_lfsr_nb(data, gcoef):
        k = gcoef.shape[0]
        reg = np.zeros(k, dtype=np.int64)
        for m in range(data.shape[0]):
            f = (data[m] + reg[0]) % GF_PRIME
            for j in range(k - 1):
                reg[j] = reg[j + 1]
            reg[k - 1] = 0
            if f != 0:
                for j in range(k):
                    reg[j] = (reg[j] - f * gcoef[j]) % GF_PRIME
        out = np.empty(k, dtype=np.int64)
        for j in range(k):
            out[j] = (-reg[j]) % GF_PRIME
        return out

    @_jit
    def _rs_syndromes_nb(seq, count):
        out = np.zeros(count, dtype=np.int64)
        alpha = 1
        for i in range(count):
            alpha = (alpha * 3) % GF_PRIME
            acc = 0
            for j in range(seq.shape[0]):
                acc = (acc * alpha + seq[j]) % GF_PRIME
            out[i] = acc
        return out

    @_jit
    def _sym_index(i, n):
        if i < 0:
            return -i - 1
        if i >= n:
            return 2 * n - 1 - i
        return i

    @_jit
    def _correlate1d_sym_nb(img, kernel, axis):
        h, w, ch = img.shape
        k = kernel.shape[0]
        r = k // 2
        out = np.zeros((h, w, ch), dtype=np.float64)
        if axis == 0:
            for t in range(k):
                kt = kernel[t]
                for y in range(h):
                    ys = _sym_index(y + t - r, h)
                    for x in range(w):
                        for c in range(ch):
                            out[y, x, c] += kt * img[ys, x, c]
        else:
            for t in range(k):
                kt = kernel[t]
                for y in range(h):
                    for x in range(w):
                        xs = _sym_index(x + t - r, w)
                        for c in range(ch):
                            out[y, x, c] += kt * img[y, xs, c]
        return out

    @_jit
    def _convolve2d_sym_nb(img, kernel):
        h, w, ch = img.shape
        kh, kw = kernel.shape
        ry = kh // 2
        rx = kw // 2
        out = np.zeros((h, w, ch), dtype=np.float64)
        for ky in range(kh):
            for kx in range(kw):
                coef = kernel[ky, kx]
                if coef != 0.0:
                    for y in range(h):
                        ys = _sym_index(y + ky - ry, h)
                        for x in range(w):
                            xs = _sym_index(x + kx - rx, w)
                            for c in range(ch):
                                out[y, x, c] += coef * img[ys, xs, c]
        return out

    @_jit
    def _warp_bilinear_nb(img, hinv, out_h, out_w, fill):
        h, w, ch = img.shape
        out = np.empty((out_h, out_w, ch), dtype=np.float64)
        for y in range(out_h):
            for x in range(out_w):
                xf = float(x)
                yf = float(y)
                denom = hinv[2, 0] * xf + hinv[2, 1] * yf + hinv[2, 2]
                sx = (hinv[0, 0] * xf + hinv[0, 1] * yf + hinv[0, 2]) / denom
                sy = (hinv[1, 0] * xf + hinv[1, 1] * yf + hinv[1, 2]) / denom
                if sx < 0.0 or sx > w - 1.0 or sy < 0.0 or sy > h - 1.0:
                    for c in range(ch):
                        out[y, x, c] = fill
                    continue
                x0 = int(np.floor(sx))
                y0 = int(np.floor(sy))
                if x0 > w - 1:
                    x0 = w - 1
                if y0 > h - 1:
                    y0 = h - 1
                x1 = x0 + 1 if x0 + 1 <= w - 1 else w - 1
                y1 = y0 + 1 if y0 + 1 <= h - 1 else h - 1
                fx = sx - x0
                fy = sy - y0
                for c in range(ch):
                    p00 = img[y0, x0, c]
                    p01 = img[y0, x1, c]
                    p10 = img[y1, x0, c]
                    p11 = img[y1, x1, c]
                    out[y, x, c] = (p00 * (1.0 - fx) + p01 * fx) * (1.0 - fy) + \
                                   (p10 * (1.0 - fx) + p11 * fx) * fy
        return out

    _NUMBA_IMPLS = {
        "rs_ec_lfsr": _rs_ec_lfsr_nb,
        "rs_syndromes": _rs_syndromes_nb,
        "correlate1d_sym": _correlate1d_sym_nb,
        "convolve2d_sym": _convolve2d_sym_nb,
        "warp_bilinear": _warp_bilinear_nb,
    }


def impls(backend: str):
    """Kernel table for an explicit backend ("numba" or "numpy").

    Used by the parity tests and the benchmark; normal code uses the
    module-level bindings below.
    """
    if backend == "numpy":
        return _NUMPY_IMPLS
    if backend == "numba":
        if _NUMBA_IMPLS is None:
            return None
        return _NUMBA_IMPLS
    raise ValueError(f"unknown backend: {backend}")


_active = _NUMBA_IMPLS if USING_NUMBA else _NUMPY_IMPLS

rs_ec_lfsr = _active["rs_ec_lfsr"]
rs_syndromes = _active["rs_syndromes"]
correlate1d_sym = _active["correlate1d_sym"]
convolve2d_sym = _active["convolve2d_sym"]
warp_bilinear = _active["warp_bilinear"]
