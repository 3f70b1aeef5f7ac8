from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

finite = st.floats(-3.0, 3.0, allow_nan=False)
positive = st.floats(0.3, 3.0)


@st.composite
def velocities(draw, vmax=0.8):
    v = np.array([draw(st.floats(-1, 1)) for _ in range(3)])
    n = np.linalg.norm(v)
    if n == 0:
        v = np.zeros(3)
    else:
        v = v / n * draw(st.floats(0.0, vmax))
    g = 1.0 / np.sqrt(1.0 - v @ v)
    return np.concatenate([[g], g * v])


@st.composite
def four_vectors(draw, scale=3.0):
    return np.array([draw(st.floats(-scale, scale)) for _ in range(4)])
