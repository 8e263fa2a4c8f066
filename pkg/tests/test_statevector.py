import numpy as np
import pytest

from kscontext.exceptions import DimensionError, NonCommutingError, NotHermitianError
from kscontext.nchv_bound import BellOperator
from kscontext.pauli import PauliWord, parse_word
from kscontext.statevector import (
    StateVector,
    apply_pauli,
    basis_state,
    bell_value,
    expectation,
    make_ghz,
    operator_matrix,
    preset_state,
    spectral_max,
    word_matrix,
)

from conftest import dense, dense_operator, random_state

MERMIN = BellOperator.from_terms(
    [(1, ["XII", "IXI", "IIX"]), (-1, ["XII", "IYI", "IIY"]), (-1, ["YII", "IXI", "IIY"]), (-1, ["YII", "IYI", "IIX"])]
)


def test_ghz_amplitudes():
    g = make_ghz(3)
    assert g.n == 3 and g.dim == 8
    assert np.isclose(g.amps[0], 2**-0.5) and np.isclose(g.amps[7], 2**-0.5)
    assert np.isclose(make_ghz(3, -1).amps[7], -(2**-0.5))


@pytest.mark.parametrize("word, value", [("XYY", -1), ("YXY", -1), ("YYX", -1), ("XXX", 1), ("ZZZ", 0), ("ZZI", 1)])
def test_ghz_expectations(word, value):
    assert abs(expectation(word, make_ghz(3)) - value) < 1e-12


def test_amplitudes_are_read_only():
    g = make_ghz(2)
    with pytest.raises(ValueError):
        g.amps[0] = 0


def test_validation():
    with pytest.raises(DimensionError):
        StateVector(np.ones(3) / np.sqrt(3))
    with pytest.raises(ValueError):
        StateVector(np.ones(4))
    with pytest.raises(DimensionError):
        StateVector.from_amplitudes(np.ones(1 << 13))
    with pytest.raises(ValueError):
        StateVector.from_amplitudes(np.zeros(4))
    with pytest.raises(DimensionError):
        apply_pauli(parse_word("XX"), make_ghz(3))


def test_presets():
    assert np.allclose(preset_state("basis:011", 3).amps, basis_state("011").amps)
    assert preset_state("basis:011", 3).amps[3] == 1
    with pytest.raises(DimensionError):
        preset_state("basis:01", 3)
    with pytest.raises(ValueError):
        preset_state("w", 3)


def test_noncommuting_and_non_hermitian_products():
    g = make_ghz(2)
    with pytest.raises(NonCommutingError) as info:
        expectation(["XI", "YI"], g)
    assert info.value.pair == (0, 1)
    with pytest.raises(NotHermitianError):
        expectation("iXX", g)


def test_apply_matches_dense(rng):
    for n in (1, 2, 3, 4):
        psi = random_state(rng, n)
        for _ in range(10):
            w = PauliWord("".join(rng.choice(list("IXYZ"), size=n)), int(rng.integers(4)))
            assert np.allclose(apply_pauli(w, psi).amps, dense(w) @ psi.amps, atol=1e-13)
            assert np.allclose(word_matrix(w), dense(w), atol=1e-14)


def test_expectation_matches_dense(rng):
    for _ in range(50):
        psi = random_state(rng, 3)
        w = PauliWord("".join(rng.choice(list("IXYZ"), size=3)), 2 * int(rng.integers(2)))
        ref = np.vdot(psi.amps, dense(w) @ psi.amps).real
        assert abs(expectation(w, psi) - ref) < 1e-12


def test_partition_invariance_on_random_states(rng):
    """Y1.(X2Y3).(Y2X3).X4 and (Y1X2Y3).(Y2X3X4) are the same operator."""
    left = ["YIII", "IXYI", "IYXI", "IIIX"]
    right = ["YXYI", "IYXX"]
    for _ in range(200):
        psi = random_state(rng, 4)
        assert abs(expectation(left, psi) - expectation(right, psi)) < 1e-10


def test_bell_value_and_spectrum():
    assert abs(bell_value(MERMIN, make_ghz(3)) - 4) < 1e-12
    assert abs(spectral_max(MERMIN) - 4) < 1e-9
    assert np.allclose(operator_matrix(MERMIN), dense_operator(MERMIN))


def test_spectral_max_against_eigvalsh(rng):
    letters = list("IXYZ")
    for _ in range(20):
        pairs = []
        for _ in range(int(rng.integers(1, 6))):
            w = "".join(rng.choice(letters, size=3))
            pairs.append((float(rng.normal()), [w]))
        op = BellOperator.from_terms(pairs)
        ref = np.linalg.eigvalsh(dense_operator(op)).max()
        assert abs(spectral_max(op) - ref) < 1e-8


def test_spectral_max_empty_operator():
    assert spectral_max(BellOperator((), 2)) == 0.0
