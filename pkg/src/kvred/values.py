"""Value estimators for Bell tensors.

Classical values are computed exactly by enumeration (with a budget
refusal) or bounded from below by alternating coordinate ascent.  Quantum
values are lower-bounded through explicit measurement families paired
against the maximally entangled state.  The module also computes the
extreme-point norm of maps from a Hilbert space into l1^N(linf^K), which
is the computational bridge between those tensors and their norms, plus
the closed-form bounds available for the Khot-Vishnoi tensor.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .cube import CosetTable, NoiseParams, build_cosets, convolution_matrix
from .errors import BudgetExceededError
from .games import BellTensor

__all__ = [
    "DeterministicStrategy",
    "ProjectiveStrategyME",
    "OhMap",
    "strategy_value",
    "classical_value_bruteforce",
    "classical_value_heuristic",
    "oh_map_norm",
    "HcBound",
    "hypercontractive_upper_bound",
    "kv_me_strategy",
    "chsh_me_strategy",
    "me_state_value",
    "KvQuantum",
    "kv_quantum_closed_form",
    "kv_oh_map",
]


@dataclass(frozen=True)
class DeterministicStrategy:
    """Answer choices f_a[x], f_b[y] for the two players."""

    f_a: np.ndarray
    f_b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f_a", np.asarray(self.f_a, dtype=np.int64))
        object.__setattr__(self, "f_b", np.asarray(self.f_b, dtype=np.int64))

    def to_json_dict(self):
        return {"f_a": self.f_a.tolist(), "f_b": self.f_b.tolist()}


@dataclass(frozen=True)
class ProjectiveStrategyME:
    """Measurement operators for both players, paired against the
    maximally entangled state of local dimension d.

    alice and bob have shape (questions, answers, d, d); each answer slice
    is a real symmetric PSD matrix and the answers of one question sum to
    the identity.
    """

    alice: np.ndarray = field(repr=False)
    bob: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.alice, dtype=np.float64)
        b = np.asarray(self.bob, dtype=np.float64)
        for ops in (a, b):
            if ops.ndim != 4 or ops.shape[2] != ops.shape[3]:
                raise ValueError("operators must have shape (questions, answers, d, d)")
        if a.shape[2] != b.shape[2]:
            raise ValueError("players must share the local dimension")
        object.__setattr__(self, "alice", a)
        object.__setattr__(self, "bob", b)

    @property
    def d(self) -> int:
        return self.alice.shape[2]

    def validate(self, tol=1e-10):
        for name, ops in (("alice", self.alice), ("bob", self.bob)):
            sym_dev = np.abs(ops - ops.transpose(0, 1, 3, 2)).max()
            if sym_dev > tol:
                raise ValueError(f"{name}: operators not symmetric (dev {sym_dev:.2e})")
            eigs = np.linalg.eigvalsh(ops.reshape(-1, self.d, self.d))
            if eigs.min() < -tol:
                raise ValueError(f"{name}: operator not PSD (min eig {eigs.min():.2e})")
            totals = ops.sum(axis=1)
            dev = np.abs(totals - np.eye(self.d)).max()
            if dev > tol:
                raise ValueError(f"{name}: answers do not sum to identity (dev {dev:.2e})")

    def to_json_dict(self):
        return {"d": self.d, "alice": self.alice.tolist(), "bob": self.bob.tolist()}


@dataclass(frozen=True)
class OhMap:
    """A linear map from an s-dimensional Hilbert space into l1^N(linf^K),
    given by the images of an orthonormal basis: columns[i] is an (N, K)
    array."""

    columns: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.columns, dtype=np.float64)
        if c.ndim != 3:
            raise ValueError("columns must have shape (s, N, K)")
        if not np.all(np.isfinite(c)):
            raise ValueError("columns must be finite")
        object.__setattr__(self, "columns", c)

    @property
    def s(self) -> int:
        return self.columns.shape[0]

    @property
    def n_questions(self) -> int:
        return self.columns.shape[1]

    @property
    def k(self) -> int:
        return self.columns.shape[2]


def strategy_value(m: BellTensor, strat: DeterministicStrategy) -> float:
    """<M, P> for the deterministic strategy P."""
    fa, fb = strat.f_a, strat.f_b
    if fa.shape != (m.n_a,) or fb.shape != (m.n_b,):
        raise ValueError("strategy length does not match question counts")
    if fa.min() < 0 or fa.max() >= m.k_a or fb.min() < 0 or fb.max() >= m.k_b:
        raise ValueError("strategy answers out of range")
    sub = m.coeffs[np.arange(m.n_a), fa]
    return float(sub[:, np.arange(m.n_b), fb].sum())


def classical_value_bruteforce(m: BellTensor, budget=10**8):
    """Exact max over deterministic strategies of |<M, P>|.

    Enumerates Bob's strategies and maximizes Alice's answer per question,
    for both signs of M.  Refuses when k_a**n_a * k_b**n_b exceeds the
    budget; callers must then use the heuristic.  Returns (value, strategy)
    with a deterministic lexicographic tie-break.
    """
    pairings = (m.k_a ** m.n_a) * (m.k_b ** m.n_b)
    if pairings > budget:
        raise BudgetExceededError(
            f"{pairings} strategy pairings exceed the budget {budget}"
        )
    coeffs = m.coeffs
    y_idx = np.arange(m.n_b)
    best = -np.inf
    best_fa = best_fb = None
    for fb_tuple in itertools.product(range(m.k_b), repeat=m.n_b):
        fb = np.asarray(fb_tuple, dtype=np.int64)
        alice_rows = coeffs[:, :, y_idx, fb].sum(axis=2)
        for sign in (1.0, -1.0):
            signed = sign * alice_rows
            value = signed.max(axis=1).sum()
            if value > best:
                best = value
                best_fa = signed.argmax(axis=1)
                best_fb = fb
    return float(best), DeterministicStrategy(best_fa, best_fb)


def classical_value_heuristic(m: BellTensor, restarts=32, seed=0):
    """Lower bound on the classical value by alternating coordinate ascent.

    Starting from seeded random Bob strategies, alternately picks each
    player's optimal answers with the other fixed, for both signs of M.
    The returned value is |<M, P>| of an explicit strategy, hence never
    exceeds the exact classical value.  Deterministic given the seed.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    coeffs = m.coeffs
    x_idx = np.arange(m.n_a)
    y_idx = np.arange(m.n_b)
    rng = np.random.default_rng(seed)
    best = -np.inf
    best_fa = best_fb = None
    for _ in range(restarts):
        fb_init = rng.integers(0, m.k_b, size=m.n_b)
        for sign in (1.0, -1.0):
            signed = sign * coeffs
            fb = fb_init.copy()
            value = -np.inf
            while True:
                alice_rows = signed[:, :, y_idx, fb].sum(axis=2)
                fa = alice_rows.argmax(axis=1)
                bob_rows = signed[x_idx, fa].sum(axis=0)
                fb = bob_rows.argmax(axis=1)
                new_value = bob_rows[y_idx, fb].sum()
                if new_value <= value + 1e-15:
                    value = max(value, new_value)
                    break
                value = new_value
            if value > best:
                best = value
                best_fa, best_fb = fa, fb
    return float(best), DeterministicStrategy(best_fa, best_fb)


def _extreme_point_values(cols, digits):
    """Pairings <f, v theta_i> for extreme points encoded as mixed-radix
    digits: digit d in [0, 2K) at question b selects coordinate d % K with
    sign +1 when d < K, else -1."""
    s, _, k = cols.shape
    out = np.zeros((digits.shape[0], s), dtype=np.float64)
    for b in range(digits.shape[1]):
        d = digits[:, b]
        j = d % k
        sign = np.where(d < k, 1.0, -1.0)
        out += sign[:, None] * cols[:, b, :][:, j].T
    return out


def oh_map_norm(v: OhMap, mode="exact", seed=0, budget=10**7, restarts=32):
    """Norm of the map v, via the real extreme points of the dual ball.

    The squared norm is the supremum over functionals f picking one signed
    coordinate per question of sum_i <f, v theta_i>^2.  mode="exact"
    enumerates all (2K)^N extreme points (refusing above the budget);
    mode="heuristic" runs seeded block-coordinate ascent over questions and
    returns a lower bound.
    """
    cols = v.columns
    s, n, k = cols.shape
    if mode == "exact":
        count = (2 * k) ** n
        if count > budget:
            raise BudgetExceededError(
                f"{count} extreme points exceed the budget {budget}"
            )
        best_sq = 0.0
        chunk = 1 << 14
        radix = 2 * k
        for start in range(0, count, chunk):
            idx = np.arange(start, min(start + chunk, count), dtype=np.int64)
            digits = np.empty((idx.size, n), dtype=np.int64)
            rem = idx
            for b in range(n):
                digits[:, b] = rem % radix
                rem = rem // radix
            g = _extreme_point_values(cols, digits)
            best_sq = max(best_sq, float((g * g).sum(axis=1).max()))
        return math.sqrt(best_sq)
    if mode == "heuristic":
        if restarts < 1:
            raise ValueError("restarts must be >= 1")
        rng = np.random.default_rng(seed)
        best_sq = 0.0
        for _ in range(restarts):
            j = rng.integers(0, k, size=n)
            sign = 1.0 - 2.0 * rng.integers(0, 2, size=n).astype(np.float64)
            g = np.zeros(s, dtype=np.float64)
            for b in range(n):
                g += sign[b] * cols[:, b, j[b]]
            current = float(g @ g)
            improved = True
            while improved:
                improved = False
                for b in range(n):
                    g_rest = g - sign[b] * cols[:, b, j[b]]
                    plus = g_rest[:, None] + cols[:, b, :]
                    minus = g_rest[:, None] - cols[:, b, :]
                    plus_sq = np.einsum("sk,sk->k", plus, plus)
                    minus_sq = np.einsum("sk,sk->k", minus, minus)
                    cand_best = max(plus_sq.max(), minus_sq.max())
                    if cand_best > current * (1.0 + 1e-14) + 1e-300:
                        if plus_sq.max() >= minus_sq.max():
                            sign[b] = 1.0
                            j[b] = int(plus_sq.argmax())
                        else:
                            sign[b] = -1.0
                            j[b] = int(minus_sq.argmax())
                        g = g_rest + sign[b] * cols[:, b, j[b]]
                        current = float(g @ g)
                        improved = True
            best_sq = max(best_sq, current)
        return math.sqrt(best_sq)
    raise ValueError(f"unknown mode {mode!r}")


class HcBound(NamedTuple):
    bound: float
    ip_norm: float
    j2_norm: float
    exponent: float


def hypercontractive_upper_bound(n, eps) -> HcBound:
    """Upper bound sqrt(N) * n^(eps/(1+eps) - 1/2) on the norm of the
    smoothing map into l1^N(linf^n), together with its two factors: the
    formal-identity norm N * n^(1/p) and the embedding norm (N*n)^(-1/2),
    where p = (1+eps)/eps."""
    params = NoiseParams(n, eps)
    nq = (1 << n) // n
    p = params.p_hc
    bound = math.sqrt(nq) * n ** (eps / (1.0 + eps) - 0.5)
    return HcBound(
        bound=bound,
        ip_norm=nq * n ** (1.0 / p),
        j2_norm=(nq * n) ** -0.5,
        exponent=p,
    )


def _sign_vectors(n):
    bits = (np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1
    return 1.0 - 2.0 * bits.astype(np.float64)


def kv_me_strategy(cosets: CosetTable) -> ProjectiveStrategyME:
    """Rank-one projections onto the sign vectors of each coset member.

    Question = coset, answer = position within the coset; within one coset
    the sign vectors are orthonormal, so the projections form a complete
    projective measurement.  Both players use the same family.
    """
    n = cosets.n
    h = _sign_vectors(n) / math.sqrt(n)
    ops = np.zeros((cosets.n_cosets, n, n, n), dtype=np.float64)
    ops[cosets.coset_index, cosets.position] = np.einsum("xi,xj->xij", h, h)
    return ProjectiveStrategyME(alice=ops, bob=ops)


def chsh_me_strategy() -> ProjectiveStrategyME:
    """The optimal-angle CHSH measurements: Alice at 0 and pi/4, Bob at
    +pi/8 and -pi/8."""

    def basis(theta):
        v = np.array([math.cos(theta), math.sin(theta)])
        p0 = np.outer(v, v)
        return np.stack([p0, np.eye(2) - p0])

    alice = np.stack([basis(0.0), basis(math.pi / 4)])
    bob = np.stack([basis(math.pi / 8), basis(-math.pi / 8)])
    return ProjectiveStrategyME(alice=alice, bob=bob)


def me_state_value(m: BellTensor, strat: ProjectiveStrategyME, tol=1e-10) -> float:
    """<M, P> for the measurement pair against the maximally entangled
    state: sum M[x,a,y,b] * tr(E_x^a (F_y^b)^T) / d.

    Tensor answers beyond the supplied operators count as zero operators;
    a measurement family violating positivity or completeness beyond tol
    is rejected.  This is the value of a valid quantum strategy, hence a
    lower bound on the quantum value.
    """
    strat.validate(tol=tol)
    alice, bob = strat.alice, strat.bob
    if alice.shape[0] != m.n_a or bob.shape[0] != m.n_b:
        raise ValueError("question counts do not match the tensor")
    if alice.shape[1] > m.k_a or bob.shape[1] > m.k_b:
        raise ValueError("more operators than tensor answers")
    d = strat.d
    ka, kb = min(m.k_a, alice.shape[1]), min(m.k_b, bob.shape[1])
    pair = np.einsum("xaij,ybij->xayb", alice[:, :ka], bob[:, :kb]) / d
    return float((m.coeffs[:, :ka, :, :kb] * pair).sum())


class KvQuantum(NamedTuple):
    value: float
    lower_bound: float


def kv_quantum_closed_form(n, eps) -> KvQuantum:
    """Exact maximally-entangled-state value of the Khot-Vishnoi tensor,
    N * (eps^2 + (1 - eps^2)/n), together with the cruder bound N * eps^2
    it always exceeds."""
    NoiseParams(n, eps)
    nq = (1 << n) // n
    return KvQuantum(
        value=nq * (eps * eps + (1.0 - eps * eps) / n),
        lower_bound=nq * eps * eps,
    )


def kv_oh_map(n, eps) -> OhMap:
    """The smoothing operator viewed as a map into l1^N(linf^n): column x
    is the image of the point mass at x, with group elements split into
    (coset, position) pairs."""
    params = NoiseParams(n, eps)
    cosets = build_cosets(n)
    v = convolution_matrix(params)
    size = 1 << n
    cols = np.zeros((size, cosets.n_cosets, n), dtype=np.float64)
    cols[np.arange(size)[:, None], cosets.coset_index[None, :], cosets.position[None, :]] = v.T
    return OhMap(columns=cols)
