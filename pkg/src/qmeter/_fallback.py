"""Pure numpy versions of the compiled sampling kernels.

Draw ``t`` of stream ``key`` is the SplitMix64 output at counter ``t + 1``;
its top 53 bits give a double in ``[0, 1)``.  All arithmetic is mod 2**64,
so results match the compiled module bit for bit.
"""
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_STREAM_SALT = np.uint64(0x632BE59BD9B4E019)
_TWO_M53 = 1.0 / 9007199254740992.0
_CHUNK = 1 << 20


def _mix(z):
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def stream_key(seed, stream):
    with np.errstate(over="ignore"):
        s = np.uint64(seed) + GOLDEN
        return int(_mix(_mix(s) ^ (np.uint64(stream) * GOLDEN + _STREAM_SALT)))


def uniforms(key, start, count):
    t = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix(np.uint64(key) + t * GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * _TWO_M53


def _pick(cdf, u):
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.size - 1)


def sample_indices(cdf, key, start, count):
    cdf = np.ascontiguousarray(cdf, dtype=np.float64)
    return _pick(cdf, uniforms(key, start, count)).astype(np.int64)


def sample_counts(cdf, key, start, count):
    cdf = np.ascontiguousarray(cdf, dtype=np.float64)
    out = np.zeros(cdf.size, dtype=np.int64)
    for lo in range(0, count, _CHUNK):
        n = min(_CHUNK, count - lo)
        out += np.bincount(_pick(cdf, uniforms(key, start + lo, n)), minlength=cdf.size)
    return out
