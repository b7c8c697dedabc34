"""Bell functional and game tensors, the explicit Khot-Vishnoi
construction, and the affine conversion from a Bell functional to a game.

Coefficients are stored dense in a 4-axis array indexed (x, a, y, b):
Alice's question and answer, then Bob's.  All builders are pure and the
tensors are treated as immutable once constructed.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .cube import CosetTable, NoiseParams, build_cosets, noise_convolve

__all__ = [
    "BellTensor",
    "GameTensor",
    "KvGame",
    "kv_kernel",
    "build_kv_tensor",
    "pad_answers",
    "bell_to_game",
    "chsh_tensor",
    "tensor_to_json_dict",
    "tensor_from_json_dict",
    "save_tensor",
    "load_tensor",
]


@dataclass(frozen=True)
class BellTensor:
    """Real coefficient family M[x, a, y, b] acting on strategies."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.ndim != 4:
            raise ValueError("coefficients must have axes (x, a, y, b)")
        if min(c.shape) < 1:
            raise ValueError("all dimensions must be positive")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def n_a(self) -> int:
        return self.coeffs.shape[0]

    @property
    def k_a(self) -> int:
        return self.coeffs.shape[1]

    @property
    def n_b(self) -> int:
        return self.coeffs.shape[2]

    @property
    def k_b(self) -> int:
        return self.coeffs.shape[3]

    def shape_tuple(self):
        return self.coeffs.shape


@dataclass(frozen=True)
class GameTensor(BellTensor):
    """A Bell tensor whose entries all lie in [0, 1]."""

    def __post_init__(self):
        super().__post_init__()
        if self.coeffs.min() < -1e-15 or self.coeffs.max() > 1.0 + 1e-15:
            raise ValueError("game coefficients must lie in [0, 1]")


def kv_kernel(n, eps):
    """Closed-form coefficient by Hamming distance d:
    ((1+eps)/2)^(n-d) * ((1-eps)/2)^d, for d = 0..n."""
    d = np.arange(n + 1, dtype=np.float64)
    return ((1.0 + eps) / 2.0) ** (n - d) * ((1.0 - eps) / 2.0) ** d


@dataclass(frozen=True)
class KvGame:
    """The Khot-Vishnoi tensor on cosets of the Hadamard subgroup.

    N = 2**n / n questions and n answers per player; the stored tensor is
    the unnormalized form whose rows each sum to one (total mass 2**n),
    i.e. N times the game tensor.
    """

    n: int
    eps: float
    cosets: CosetTable = field(repr=False)
    tensor: BellTensor = field(repr=False)

    @property
    def n_questions(self) -> int:
        return self.cosets.n_cosets

    def as_game_tensor(self) -> GameTensor:
        """Display normalization: divide by the number of questions."""
        return GameTensor(self.tensor.coeffs / self.n_questions)


def _group_matrix_to_tensor(m_group, cosets: CosetTable) -> np.ndarray:
    size = m_group.shape[0]
    n = cosets.n
    nq = cosets.n_cosets
    idx = np.arange(size)
    ci = cosets.coset_index[idx]
    pos = cosets.position[idx]
    coeffs = np.zeros((nq, n, nq, n), dtype=np.float64)
    coeffs[ci[:, None], pos[:, None], ci[None, :], pos[None, :]] = m_group
    return coeffs


def build_kv_tensor(n, eps, route="kernel") -> KvGame:
    """Build the Khot-Vishnoi tensor for cube dimension n and noise eps.

    route="kernel" fills entries from the closed-form distance kernel;
    route="spectral" accumulates sum_x (V delta_x) ⊗ (V delta_x) from
    smoothing-operator columns computed in the Walsh domain.  The two
    agree entrywise to 1e-10.
    """
    params = NoiseParams(n, eps)  # validates n power of two, eps in (0,1)
    cosets = build_cosets(n)
    size = 1 << n
    if route == "kernel":
        kernel = kv_kernel(n, eps)
        x = np.arange(size, dtype=np.uint64)
        dist = np.bitwise_count(x[:, None] ^ x[None, :]).astype(np.int64)
        m_group = kernel[dist]
    elif route == "spectral":
        columns = np.empty((size, size), dtype=np.float64)
        delta = np.zeros(size, dtype=np.float64)
        for x in range(size):
            delta[x] = 1.0
            columns[:, x] = noise_convolve(delta, params, mode="spectral")
            delta[x] = 0.0
        m_group = columns @ columns.T
    else:
        raise ValueError(f"unknown route {route!r}")
    tensor = BellTensor(_group_matrix_to_tensor(m_group, cosets))
    return KvGame(n=n, eps=float(eps), cosets=cosets, tensor=tensor)


def pad_answers(m: BellTensor) -> BellTensor:
    """Append one all-zero answer on each side."""
    padded = np.pad(m.coeffs, ((0, 0), (0, 1), (0, 0), (0, 1)))
    return BellTensor(padded)


def bell_to_game(m: BellTensor):
    """Affine map from a Bell functional to a game tensor.

    Pads the answers with zeros, then sends M~ to
    1/(2 N^2) + M~ / (2 N^2 L) with L the largest absolute coefficient.
    Returns (game, L).  For every strategy P the game bias satisfies
    <G, P> - 1/2 = <M~, P> / (2 N^2 L).
    """
    if m.n_a != m.n_b:
        raise ValueError("both players must have the same number of questions")
    scale = float(np.abs(m.coeffs).max())
    if scale == 0.0:
        raise ValueError("degenerate input: tensor is identically zero (L = 0)")
    nq = m.n_a
    padded = pad_answers(m)
    base = 1.0 / (2.0 * nq * nq)
    game = GameTensor(base + padded.coeffs * (base / scale))
    return game, scale


def chsh_tensor() -> GameTensor:
    """The CHSH game: uniform questions, win iff XOR of answers equals
    AND of questions."""
    coeffs = np.zeros((2, 2, 2, 2), dtype=np.float64)
    for x in range(2):
        for a in range(2):
            for y in range(2):
                for b in range(2):
                    if (a ^ b) == (x & y):
                        coeffs[x, a, y, b] = 0.25
    return GameTensor(coeffs)


def tensor_to_json_dict(m: BellTensor, meta=None):
    """Serializable form: dimensions plus row-major coefficients in
    (x, a, y, b) order.  Floats survive a round-trip bit-exactly."""
    doc = {
        "N_A": m.n_a,
        "K_A": m.k_a,
        "N_B": m.n_b,
        "K_B": m.k_b,
        "coeffs": [float(v) for v in m.coeffs.reshape(-1)],
    }
    if meta is not None:
        doc["meta"] = meta
    return doc


def tensor_from_json_dict(doc) -> BellTensor:
    for key in ("N_A", "K_A", "N_B", "K_B", "coeffs"):
        if key not in doc:
            raise ValueError(f"tensor document missing field {key!r}")
    shape = (doc["N_A"], doc["K_A"], doc["N_B"], doc["K_B"])
    flat = np.asarray(doc["coeffs"], dtype=np.float64)
    expected = int(np.prod(shape))
    if flat.size != expected:
        raise ValueError(f"coeffs length {flat.size} does not match shape {shape}")
    return BellTensor(flat.reshape(shape))


def save_tensor(path, m: BellTensor, meta=None):
    from ._io import atomic_write_text

    atomic_write_text(path, json.dumps(tensor_to_json_dict(m, meta)))


def load_tensor(path):
    """Read a tensor file; returns (tensor, meta-or-None)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return tensor_from_json_dict(doc), doc.get("meta")
