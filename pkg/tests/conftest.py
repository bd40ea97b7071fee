"""Shared builders and independent scalar reference evaluators.

The naive evaluators below recompute effective channels user-by-user with
scalar math/cmath calls.  They share only the RadioConfig-derived constants
with the library, giving the vectorized implementations a second,
structurally different evaluation path to agree with.
"""

import cmath
import math

import numpy as np

import swan_aircomp as sa

CARRIER_HZ = 28e9
WAVELENGTH = sa.SPEED_OF_LIGHT / CARRIER_HZ


def make_config(kappa=0.0, f_c=CARRIER_HZ, n_eff=1.4, p_dbm=10.0,
                noise_dbm=-90.0, delta_min=None):
    if delta_min is None:
        delta_min = (sa.SPEED_OF_LIGHT / f_c) / 2.0
    return sa.RadioConfig(
        f_c=f_c,
        n_eff=n_eff,
        kappa=kappa,
        delta_min=delta_min,
        p_tx=sa.dbm_to_watts(p_dbm),
        noise_var=sa.dbm_to_watts(noise_dbm),
    )


def make_scene(m_segments=3, seg_length=2.0, d_x=20.0, d_y=8.0, height=3.0,
               k=4, seed=11):
    region = sa.ServiceRegion(d_x, d_y)
    layout = sa.build_layout(m_segments, seg_length, region, height)
    users = sa.sample_users(region, k, seed)
    return sa.Scene(region, layout, users)


def scene_with_users(positions, m_segments=2, seg_length=1.0, d_x=12.0,
                     d_y=6.0, height=3.0):
    """Scene with hand-picked user positions instead of sampled ones."""
    region = sa.ServiceRegion(d_x, d_y)
    layout = sa.build_layout(m_segments, seg_length, region, height)
    return sa.Scene(region, layout, sa.UserDrop(np.asarray(positions, dtype=float)))


def naive_user_gain(cfg, scene, segment, pa_x, user_ix):
    """Scalar feed-to-user gain, recomputed one factor at a time."""
    feed = float(scene.layout.feed_x[segment])
    ell = pa_x - feed
    guide = 10.0 ** (-cfg.kappa * ell / 20.0) * cmath.exp(-1j * cfg.guided_phase_rate * ell)
    ux = float(scene.users.positions[user_ix, 0])
    uy = float(scene.users.positions[user_ix, 1])
    r = math.sqrt((ux - pa_x) ** 2 + (scene.layout.height ** 2 + uy ** 2))
    free = math.sqrt(cfg.eta) / r * cmath.exp(-1j * cfg.wavenumber * r)
    return guide * free


def naive_combined_channel(cfg, scene, pa_x, phases=None):
    """Per-user combined-feed channel built from scalar per-segment terms."""
    m_seg = scene.layout.m_segments
    out = np.zeros(scene.k, dtype=complex)
    for k in range(scene.k):
        total = 0j
        for m in range(m_seg):
            term = naive_user_gain(cfg, scene, m, float(pa_x[m]), k)
            if phases is not None:
                term *= cmath.exp(1j * float(phases[m]))
            total += term
        out[k] = total / math.sqrt(m_seg)
    return out


def naive_mse(h, p_tx, noise_var):
    """Minimum MSE from the scalar definition, bypassing metrics internals."""
    h = np.asarray(h)
    total = complex(np.sum(h))
    num = p_tx * abs(total) ** 2
    den = p_tx * float(np.sum(np.abs(h) ** 2)) + noise_var
    return len(h) - num / den


def rel_err(a, b):
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale
