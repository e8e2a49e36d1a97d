"""Plain helpers shared by several test modules."""

import networkx as nx
import numpy as np

# The network A_ij B_jk C_ikl D_km E_ln F_mn with variables i..n numbered 0..5
V = dict(zip("ijklmn", range(6)))
EXAMPLE_SCOPES = {
    name: tuple(V[c] for c in letters)
    for name, letters in [("A", "ij"), ("B", "jk"), ("C", "ikl"), ("D", "km"), ("E", "ln"), ("F", "mn")]
}


def random_graph(n: int, p: float, seed: int) -> nx.Graph:
    return nx.gnp_random_graph(n, p, seed=seed)


def random_bits(n: int, rng: np.random.Generator) -> str:
    return "".join(str(b) for b in rng.integers(0, 2, size=n))
