"""Seeded random streams.

Every random quantity in the package comes from a :class:`RandomStream`.
A stream is a Philox-4x64 counter-based generator keyed by
``numpy.random.SeedSequence(seed, spawn_key=key)``; Philox output and the
``SeedSequence`` hashing are specified bit-for-bit by NumPy, so a given seed
reproduces the same draws on every platform.

Named sub-streams (``stream.substream("d")``) append a CRC-32 of the name to
the spawn key. Distinct names give distinct keys, and deriving a sub-stream
never advances the parent, so the order in which components are built does
not change their random parameters.
"""

import zlib

import numpy as np

from ._validation import check_positive_int

#: Seed used when none is given (CLI: no ``--seed`` and no ``MINNORM_SEED``).
DEFAULT_SEED = 20080101

_TWO_PI = 2.0 * np.pi
_U64 = 2**64


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def _name_key(name):
    return zlib.crc32(name.encode("utf-8"))


def derive_seed(seed, *names):
    """Return a 64-bit integer seed derived from ``seed`` and a name path."""
    key = tuple(_name_key(str(nm)) for nm in names)
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])


class RandomStream:
    """Deterministic source of the random draws used by the transforms.

    Parameters
    ----------
    seed : int, default=DEFAULT_SEED
        Unsigned 64-bit seed.

    Notes
    -----
    A stream is not thread-safe. Give each thread its own sub-stream.
    """

    def __init__(self, seed=DEFAULT_SEED, _key=()):
        self.seed = _check_seed(seed)
        self.key = tuple(_key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.Philox(ss))

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, key={self.key})"

    def substream(self, name):
        """Independent stream for the purpose ``name``."""
        return RandomStream(self.seed, self.key + (_name_key(name),))

    def unit_circle(self, size=None):
        """Complex numbers ``exp(i*phi)`` with ``phi`` uniform on ``[0, 2*pi)``."""
        phi = self.uniform_angle(size)
        return np.cos(phi) + 1j * np.sin(phi)

    def uniform_angle(self, size=None):
        theta = _TWO_PI * self._gen.random(size)
        # guard against 2*pi*u rounding up to 2*pi
        theta = np.where(theta >= _TWO_PI, 0.0, theta)
        return float(theta) if size is None else theta

    def random_permutation(self, n):
        """Uniformly random permutation of ``0..n-1`` (Fisher-Yates shuffle)."""
        n = check_positive_int(n, "n")
        return self._gen.permutation(n)

    def sample_indices(self, l, n, replace=False):
        """Draw ``l`` indices from ``0..n-1``.

        Without replacement the indices are pairwise distinct and every
        ``l``-subset is equally likely; with replacement they are i.i.d.
        uniform.
        """
        l = check_positive_int(l, "l")
        n = check_positive_int(n, "n")
        if replace:
            return self._gen.integers(0, n, size=l)
        if l > n:
            raise ValueError(f"cannot draw l={l} distinct indices from n={n}")
        return self._gen.choice(n, size=l, replace=False)

    def complex_normal(self, size):
        """Centered complex Gaussians, real and imaginary parts of variance 1/2."""
        z = self._gen.standard_normal(size) + 1j * self._gen.standard_normal(size)
        return z * np.sqrt(0.5)

    def signs(self, size):
        """Fair-coin draws from ``{-1.0, +1.0}``."""
        return np.where(self._gen.random(size) < 0.5, -1.0, 1.0)
