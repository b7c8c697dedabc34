"""Group structure and Fourier analysis on the binary cube {0,1}^n.

Elements of the cube are encoded as integers with bit i holding coordinate
x_i.  Real functions on the cube are numpy arrays of length 2**n indexed by
that encoding.  The module provides the Hamming metric, the fast
Walsh-Hadamard transform (unnormalized: applying it twice multiplies by
2**n), smoothing by a biased product measure, and the coset machinery for
the Hadamard subgroup that the game construction is built on.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BitString",
    "NoiseParams",
    "CosetTable",
    "hamming_distance",
    "fwht",
    "walsh_function",
    "popcounts",
    "noise_convolve",
    "convolution_matrix",
    "hadamard_subgroup",
    "build_cosets",
]


def _check_power_of_two(n, what="n"):
    if not isinstance(n, (int, np.integer)) or n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"{what} must be a positive power of two, got {n!r}")


@dataclass(frozen=True, order=True)
class BitString:
    """An element of {0,1}^n: bit i of ``value`` is coordinate x_i."""

    n: int
    value: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("bit-count must be positive")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value {self.value} out of range for n={self.n}")

    def __xor__(self, other):
        if self.n != other.n:
            raise ValueError("mismatched bit-counts")
        return BitString(self.n, self.value ^ other.value)

    def bits(self):
        """Coordinates (x_0, ..., x_{n-1}) as a numpy int array."""
        return (self.value >> np.arange(self.n)) & 1

    def __str__(self):
        return "".join(str(b) for b in self.bits())


def hamming_distance(x: BitString, y: BitString) -> int:
    """Number of coordinates where x and y differ."""
    if x.n != y.n:
        raise ValueError(f"mismatched bit-counts: {x.n} != {y.n}")
    return (x.value ^ y.value).bit_count()


@dataclass(frozen=True)
class NoiseParams:
    """Noise level for the smoothing operator on {0,1}^n.

    eps is the squared per-coordinate correlation: the operator has the
    Walsh functions as eigenvectors with eigenvalues eps**(|A|/2), so the
    per-coordinate bias of the underlying product measure is
    rho = sqrt(eps).  p_hc is the exponent at which the operator is a
    contraction from L2.
    """

    n: int
    eps: float

    def __post_init__(self):
        _check_power_of_two(self.n)
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0,1), got {self.eps}")

    @property
    def rho(self) -> float:
        return float(np.sqrt(self.eps))

    @property
    def p_hc(self) -> float:
        return (1.0 + self.eps) / self.eps


def fwht(f):
    """Unnormalized fast Walsh-Hadamard transform.

    Returns g with g[A] = sum_x f[x] * (-1)^{|A & x|}.  Applying the
    transform twice multiplies by len(f).  O(2^n * n) butterfly with a
    fixed summation order in every stage.
    """
    v = np.array(f, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("expected a one-dimensional value table")
    size = v.shape[0]
    if size < 1 or (size & (size - 1)) != 0:
        raise ValueError(f"length must be a power of two, got {size}")
    h = 1
    while h < size:
        v = v.reshape(-1, 2 * h)
        left = v[:, :h].copy()
        right = v[:, h:].copy()
        v[:, :h] = left + right
        v[:, h:] = left - right
        v = v.reshape(-1)
        h *= 2
    return v


def popcounts(n):
    """Hamming weights of 0 .. 2**n - 1 as an int array."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


def walsh_function(n, subset):
    """Value table of the character x -> (-1)^{|subset & x|}."""
    _check_power_of_two(n)
    if not 0 <= subset < (1 << n):
        raise ValueError("subset index out of range")
    x = np.arange(1 << n, dtype=np.uint64)
    par = np.bitwise_count(x & np.uint64(subset)) & 1
    return 1.0 - 2.0 * par.astype(np.float64)


def _distance_table(n):
    x = np.arange(1 << n, dtype=np.uint64)
    return np.bitwise_count(x[:, None] ^ x[None, :]).astype(np.int64)


def _kernel_by_distance(n, rho):
    d = np.arange(n + 1, dtype=np.float64)
    return ((1.0 + rho) / 2.0) ** (n - d) * ((1.0 - rho) / 2.0) ** d


def noise_convolve(f, params: NoiseParams, mode="spectral"):
    """Smooth f by the biased product measure with correlation sqrt(eps).

    direct mode evaluates the O(4^n) double sum
        g[x] = sum_y ((1+rho)/2)^(n-|x^y|) * ((1-rho)/2)^(|x^y|) * f[y],
    spectral mode multiplies Walsh coefficient A by eps**(|A|/2) in
    O(2^n * n).  The two agree to 1e-10 and both preserve sum(f).
    """
    v = np.asarray(f, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != (1 << params.n):
        raise ValueError(
            f"length {v.shape} does not match n={params.n} (need {1 << params.n})"
        )
    if mode == "direct":
        kernel = _kernel_by_distance(params.n, params.rho)
        return kernel[_distance_table(params.n)] @ v
    if mode == "spectral":
        coeffs = fwht(v)
        coeffs *= params.rho ** popcounts(params.n)
        return fwht(coeffs) / (1 << params.n)
    raise ValueError(f"unknown mode {mode!r}")


def convolution_matrix(params: NoiseParams):
    """Dense matrix of the smoothing operator; column x is the image of
    the point mass at x."""
    kernel = _kernel_by_distance(params.n, params.rho)
    return kernel[_distance_table(params.n)]


def hadamard_subgroup(n):
    """The n Sylvester-Hadamard codewords in {0,1}^n.

    Row i of the n x n Sylvester sign matrix H[i][j] = (-1)^{|bits(i) & bits(j)|}
    maps to coordinates x_j = (1 - H[i][j]) / 2.  The result is closed under
    XOR, contains 0, and distinct members differ in exactly n/2 coordinates.
    """
    _check_power_of_two(n)
    words = []
    for i in range(n):
        value = 0
        for j in range(n):
            if (i & j).bit_count() & 1:
                value |= 1 << j
        words.append(BitString(n, value))
    return words


@dataclass(frozen=True)
class CosetTable:
    """Partition of {0,1}^n into the 2**n / n cosets of the Hadamard subgroup.

    coset_index[x] is the coset of element x, position[x] its rank within
    that coset in numeric order (the fixed enumeration used to split a group
    element into a question/answer pair), and representative[c] the smallest
    member of coset c.
    """

    n: int
    subgroup: tuple = field(repr=False)
    coset_index: np.ndarray = field(repr=False)
    position: np.ndarray = field(repr=False)
    representative: tuple = field(repr=False)

    @property
    def n_cosets(self) -> int:
        return len(self.representative)

    def coset_of(self, x) -> int:
        return int(self.coset_index[x.value if isinstance(x, BitString) else x])

    def position_of(self, x) -> int:
        return int(self.position[x.value if isinstance(x, BitString) else x])

    def members(self, coset: int):
        """Members of a coset in enumeration order."""
        values = np.nonzero(self.coset_index == coset)[0]
        return [BitString(self.n, int(v)) for v in np.sort(values)]


def build_cosets(n) -> CosetTable:
    """Partition {0,1}^n into cosets of the Hadamard subgroup.

    The representative is the numerically smallest member; cosets are
    indexed by sorted representative; positions follow numeric order inside
    each coset, which makes the whole table reproducible.
    """
    _check_power_of_two(n)
    if n < 2:
        raise ValueError("need n >= 2 for a nontrivial coset structure")
    g0 = np.array([w.value for w in hadamard_subgroup(n)], dtype=np.int64)
    size = 1 << n
    x = np.arange(size, dtype=np.int64)
    members = x[:, None] ^ g0[None, :]
    reps = members.min(axis=1)
    rep_values = np.unique(reps)
    coset_index = np.searchsorted(rep_values, reps)
    position = np.empty(size, dtype=np.int64)
    order = np.lexsort((x, coset_index))
    position[order] = np.tile(np.arange(n, dtype=np.int64), size // n)
    return CosetTable(
        n=n,
        subgroup=tuple(hadamard_subgroup(n)),
        coset_index=coset_index,
        position=position,
        representative=tuple(BitString(n, int(v)) for v in rep_values),
    )
