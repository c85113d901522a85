import numpy as np
import pytest

from graphrenorm.bump import (BumpSpec, ShellSpec, beta_cutoff, radial_bump,
                              smooth_step)


def test_smooth_step_endpoints():
    assert smooth_step(np.array([-1.0, 0.0]))[0] == 1.0
    assert smooth_step(np.array([0.0]))[0] == 1.0
    assert smooth_step(np.array([1.0, 2.0]))[1] == 0.0
    mid = smooth_step(np.array([0.5]))[0]
    assert 0.0 < mid < 1.0


def test_beta_cutoff_flat_then_zero():
    t = np.array([0.0, 0.25, 0.5, 0.75, 1.0, 2.0])
    vals = beta_cutoff(t)
    assert vals[0] == vals[1] == vals[2] == 1.0
    assert 0.0 < vals[3] < 1.0
    assert vals[4] == vals[5] == 0.0


def test_radial_bump_support():
    vals = radial_bump(np.array([0.0, 0.5, 0.999, 1.0, 3.0]))
    assert vals[0] == pytest.approx(np.exp(-1.0))
    assert vals[1] > 0 and vals[2] > 0
    assert vals[3] == vals[4] == 0.0


def test_bumpspec_slice_value_is_one():
    spec = BumpSpec(0.7, kind="subtraction_nu")
    marked = np.zeros(5)
    own = np.array([[0.0] * 3, [10.0, 0, 0], [100.0, 5, 2],
                    [0.5, 0.5, 0.5], [1e6, 0, 0]])
    assert np.all(spec.nu_values(marked, own) == 1.0)


def test_bumpspec_compact_in_other_directions():
    spec = BumpSpec(1.0, kind="subtraction_nu")
    marked = np.full(4, 0.5)        # fixed nonzero marked value
    own = np.array([[0.0, 0, 0], [1.0, 0, 0], [2.0, 0, 0], [50.0, 0, 0]])
    vals = spec.nu_values(marked, own)
    assert vals[0] > 0
    assert vals[-1] == 0.0          # support bounded once marked != 0


def test_bumpspec_validation():
    with pytest.raises(ValueError):
        BumpSpec(0.0)
    with pytest.raises(ValueError):
        BumpSpec(1.0, kind="bogus")


def test_shell_vanishes_near_origin():
    shell = ShellSpec(3.0, 2.0)
    y = np.zeros((1, 12))
    assert shell.test_values(y)[0] == 0.0
    assert shell.value_at_origin(12) == 0.0
    on_shell = np.zeros((1, 12))
    on_shell[0, 0] = 3.0
    assert shell.test_values(on_shell)[0] == pytest.approx(np.exp(-1.0))
    with pytest.raises(ValueError):
        ShellSpec(1.0, 2.0)
