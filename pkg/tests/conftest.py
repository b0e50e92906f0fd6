import numpy as np
import pytest

from liecurve import frenet, synthesis
from liecurve.lie_algebra import PRESETS

PRESET_NAMES = ("abelian", "su2", "so3")


class Built:
    """A synthesized curve plus its numerically recomputed Frenet data."""

    def __init__(self, spec):
        self.spec = spec
        syn = synthesis.integrate_frame(spec)
        self.curve = syn.curve
        self.exact = syn.frenet
        self.fd = frenet.frenet_apparatus(syn.curve)


_cache = {}


def build(kind, preset, h=1e-3):
    key = (kind, preset, h)
    if key not in _cache:
        tg = PRESETS[preset].lie_torsion
        if kind == "helix":
            spec = synthesis.circular_helix(0.12, 0.16 + tg, preset, (0.0, 10.0), h)
        elif kind == "cosh":
            spec = synthesis.generate_slant_mannheim(1.0, 1.0, 0.5, preset, (0.5, 2.5), h)
        elif kind == "random":
            spec = synthesis.random_mannheim(0.5, 11, preset, (0.5, 2.5), h)
        elif kind == "tau=s":
            spec = synthesis.torsion_power(1.0, 1.0, preset, (0.5, 2.5), h)
        else:
            raise KeyError(kind)
        _cache[key] = Built(spec)
    return _cache[key]


@pytest.fixture(params=PRESET_NAMES)
def preset(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
