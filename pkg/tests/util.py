"""Random channel builders shared across the test modules."""

import numpy as np

from wiretap_mimo import ChannelPair


def random_unitary(rng, m, complex_valued=True):
    a = rng.standard_normal((m, m))
    if complex_valued:
        a = a + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(a)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_psd(rng, m, scale=1.0, complex_valued=True):
    a = rng.standard_normal((m, m))
    if complex_valued:
        a = a + 1j * rng.standard_normal((m, m))
    w = a @ a.conj().T
    return scale * w / m


def random_commuting_pair(rng, m, lam2_scale=1.0, complex_valued=True):
    """Channel pair sharing a random eigenbasis, returned with its spectra."""
    v = random_unitary(rng, m, complex_valued)
    lam1 = rng.uniform(0.1, 3.0, m)
    lam2 = rng.uniform(0.0, lam2_scale, m) * lam1
    w1 = (v * lam1) @ v.conj().T
    w2 = (v * lam2) @ v.conj().T
    return ChannelPair.from_gram(w1, w2), v, lam1, lam2


def fig1_pair():
    return ChannelPair.from_gram(np.diag([2.0, 1.0]),
                                 0.1 * np.array([[2.0, 1.0], [1.0, 1.0]]))
