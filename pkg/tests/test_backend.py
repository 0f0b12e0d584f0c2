import numpy as np
import pytest

from conormal import _backend, _flowkernel_py
from conormal import hamiltonian as hm
from conormal.errors import BlowUpError

COS = hm.TrigPoly.cosine()


def specs():
    B = hm.Bump(0.3, 0.2, 0.35, 0.8, 0.15)
    L = hm.lifted(COS, 3)
    return [L, B, hm.compose(B, L), hm.inverse(hm.compose(L, B)), hm.hsum(L, hm.Bump(0.5, 40.0, 0.2, 1.0, 1.0))]


def test_backend_is_known():
    assert _backend.BACKEND in ("compiled", "python")


@pytest.mark.skipif(_backend.BACKEND != "compiled", reason="compiled kernel not built")
@pytest.mark.parametrize("k", range(5))
def test_compiled_matches_python(monkeypatch, k):
    H = specs()[k]
    q0 = np.arange(64) / 64.0
    fast = hm.flow_batch(H, q0, 0.05, [0.5, 1.0, 2.0], step=1e-2)
    monkeypatch.setattr(_backend, "integrate", _flowkernel_py.integrate)
    slow = hm.flow_batch(H, q0, 0.05, [0.5, 1.0, 2.0], step=1e-2)
    for name in ("q", "p", "action"):
        assert np.max(np.abs(getattr(fast, name) - getattr(slow, name))) <= 1e-12
    assert np.max(np.abs(fast.error - slow.error)) <= 1e-12


def test_python_kernel_blowup_index(monkeypatch):
    monkeypatch.setattr(_backend, "integrate", _flowkernel_py.integrate)
    H = hm.scale(1e6, hm.Bump(0.3, 0.0, 0.2, 1.0, 0.5))
    with pytest.raises(BlowUpError) as exc:
        hm.flow_batch(H, np.arange(100) / 100.0, 0.1, [1.0], step=0.5)
    assert exc.value.seed_index is not None
