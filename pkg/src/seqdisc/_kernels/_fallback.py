"""Pure-Python twins of the compiled kernels in ``_core.pyx``.

Every routine performs the same floating-point operations in the same order
as its compiled counterpart, so both backends return bit-identical results.
"""

import numpy as np

TWO_PI = 6.283185307179586
_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0


def _mix(z):
    z = (z + _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _mix_array(z):
    with np.errstate(over="ignore"):
        z = z + np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def covering_arc(phases, merge_tol):
    n = len(phases)
    if n == 0:
        raise ValueError("empty phase array")
    cf = [phases[0]]
    cl = [phases[0]]
    for i in range(1, n):
        if phases[i] - phases[i - 1] > merge_tol:
            cf.append(phases[i])
            cl.append(phases[i])
        else:
            cl[-1] = phases[i]
    m = len(cf)
    if m > 1 and phases[0] + TWO_PI - phases[n - 1] <= merge_tol:
        cf[0] = cf[m - 1]
        m -= 1
    if m == 1:
        width = cl[0] - cf[0]
        if width < 0:
            width += TWO_PI
        return float(cf[0]), float(width)
    best = m - 1
    best_gap = cf[0] - cl[m - 1]
    if best_gap < 0:
        best_gap += TWO_PI
    for i in range(m - 1):
        gap = cf[i + 1] - cl[i]
        if gap < 0:
            gap += TWO_PI
        if gap > best_gap:
            best_gap = gap
            best = i
    return float(cf[(best + 1) % m]), float(TWO_PI - best_gap)


def phase_sumset(a, b, dedup_tol):
    sums = np.add.outer(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)).ravel()
    sums = np.where(sums >= TWO_PI, sums - TWO_PI, sums)
    sums.sort()
    if sums.size == 0:
        return sums
    keep = np.empty(sums.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(sums) > dedup_tol
    return sums[keep]


def counter_uniforms(seed, start, count):
    key = _mix(int(seed) & _MASK)
    idx = (np.arange(count, dtype=np.uint64) + np.uint64(int(start) & _MASK))
    with np.errstate(over="ignore"):
        words = _mix_array(np.uint64(key) + idx * np.uint64(_GAMMA))
    return (words >> np.uint64(11)).astype(np.float64) * _INV_2_53


def sample_categorical(cdf, seed, shots):
    cdf = np.asarray(cdf, dtype=np.float64)
    m = cdf.size
    u = counter_uniforms(seed, 0, shots)
    # first j with u < cdf[j]; the last bucket absorbs everything else
    idx = np.searchsorted(cdf[: m - 1], u, side="right")
    return np.bincount(idx, minlength=m).astype(np.int64)


def derive_seed(seed, index):
    """Independent 64-bit seed for sub-stream ``index`` of ``seed``."""
    return _mix((_mix(int(seed) & _MASK) + ((int(index) + 1) * _GAMMA)) & _MASK)
