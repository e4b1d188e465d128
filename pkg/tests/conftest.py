import numpy as np
import pytest

from isoasym.config import builtin, config_from_dict

SQ2, SQ3, SQ6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)


def frame_ex1(s):
    """Closed-form frame of the first example curve, as printed with the example."""
    S, C = np.sin(s), np.cos(s)
    z, one = np.zeros_like(s), np.ones_like(s)
    return {
        "T": np.stack([-S / 2, C / 2, one / 2, one * SQ2 / 2], axis=-1),
        "N": np.stack([-C, -S, z, z], axis=-1),
        "B2": np.stack([z, z, one * SQ6 / 3, -one * SQ3 / 3], axis=-1),
        "B1": np.stack([-SQ3 / 2 * S, SQ3 / 2 * C, -one * SQ3 / 6, -one * SQ6 / 6], axis=-1),
    }


def frame_ex2(s):
    S, C = np.sin(s), np.cos(s)
    z, one = np.zeros_like(s), np.ones_like(s)
    return {
        "T": np.stack([C / 2, -S / 2, z, one * SQ3 / 2], axis=-1),
        "N": np.stack([-S, -C, z, z], axis=-1),
        "B2": np.stack([z, z, -one, z], axis=-1),
        "B1": np.stack([SQ3 / 2 * C, -SQ3 / 2 * S, z, -one / 2], axis=-1),
    }


def fig1(s, t):
    """First-example slice q = 0 with the fourth coordinate dropped."""
    return np.stack([np.cos(s) - t * np.cos(s), np.sin(s) - t * np.sin(s), s / 2], axis=-1)


def fig2(s, t):
    S, C = np.sin(s), np.cos(s)
    return np.stack([S / 2 + (t - 0.5) * C / 2, C / 2 - (t - 0.5) * S / 2, -(s + 1) * (t - 0.5)], axis=-1)


def fig3(s, q):
    """Third family at t = 1 with the third coordinate dropped."""
    S, C, V = np.sin(s), np.cos(s), np.sin(s * (q - 0.5))
    return np.stack([S / 2 - S * V, C / 2 - C * V, SQ3 / 2 * s], axis=-1)


# builtin name -> (fixed parameter, projection, closed form of the projected slice)
FIGURES = {"ex1": ("q=0", "drop:4", fig1), "ex2a": ("q=0", "drop:4", fig2), "ex2b": ("t=1", "drop:3", fig3)}


def central_diff(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2 * h)


@pytest.fixture(scope="session")
def configs():
    return {name: config_from_dict(builtin(name)) for name in ("ex1", "ex2a", "ex2b")}


@pytest.fixture(scope="session")
def families(configs):
    return {name: c.family for name, c in configs.items()}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
