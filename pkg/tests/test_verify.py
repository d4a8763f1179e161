"""Verification campaigns: mesh generation, domain ids, resolution guard."""

from fractions import Fraction

import numpy as np
import pytest

from radbound.dptable import GridSpec, build_table
from radbound.verify import (DomainId, MeshCampaign, TableResolutionError,
                             mesh_A1, mesh_A2, mesh_A3, verify_A1,
                             verify_qsums)


def test_mesh_a1_count_and_endpoints():
    a1, a2 = mesh_A1(0.005)
    step = 0.0005
    inv = round(1 / step)
    expected = sum(min(i, inv - i) + 1
                   for i in range(round(0.3 / step), round(0.7 / step) + 1))
    assert a1.size == a2.size == expected
    assert a1.min() == pytest.approx(0.3) and a1.max() == pytest.approx(0.7)
    assert a2.min() == 0.0
    assert np.all(a2 <= a1 + 1e-12)
    assert np.all(a1 + a2 <= 1.0 + 1e-12)
    # lattice alignment
    assert np.allclose(np.round(a1 / step) * step, a1, atol=1e-12)


def test_mesh_a3_count():
    a1, a2 = mesh_A3(0.01)
    step = 0.001
    inv = round(1 / step)
    expected = sum(min(i, inv - i) + 1
                   for i in range(round(0.4 / step), round(0.6 / step) + 1))
    assert a1.size == expected
    assert a1.min() == pytest.approx(0.4) and a1.max() == pytest.approx(0.6)


def test_mesh_a2_constraints():
    a1, a2, a3 = mesh_A2(0.03)
    assert a1.size == a2.size == a3.size > 0
    assert np.all(a3 <= a2 + 1e-12) and np.all(a2 <= a1 + 1e-12)
    assert np.all(a1 <= 0.7 + 1e-12)
    assert np.all(a1 + a2 + a3 >= 1.0 - 1e-9)
    assert np.all(a1 + a2 <= 1.0 + 1e-9)
    # brute-force count over the integer lattice
    step = 0.002
    inv, hi = round(1 / step), round(0.7 / step)
    expected = sum(1
                   for i in range(1, hi + 1)
                   for j in range(1, min(i, inv - i) + 1)
                   for k in range(max(inv - i - j, 0), j + 1))
    # mesh generator starts a2 at ceil((1-a1)/2) which never drops points
    # (any a2 below it has no admissible a3); counts must agree
    assert a1.size == expected
    # the symmetric override point sits on the mesh
    on = ((np.abs(a1 - 0.5) < 1e-12) & (np.abs(a2 - 0.5) < 1e-12)
          & (np.abs(a3 - 0.5) < 1e-12))
    assert np.count_nonzero(on) == 1


def test_campaign_type_invariants():
    with pytest.raises(ValueError):
        MeshCampaign(DomainId.A1_0325, 0.005, 0.0007)   # step must divide
    with pytest.raises(ValueError):
        MeshCampaign(DomainId.A1_0325, 0.005, 0.0005,
                     overrides=((0.5, 0.5, 0.5),))      # overrides A2-only
    MeshCampaign(DomainId.A2_025, 0.03, 0.002,
                 overrides=((0.5, 0.5, 0.5),))


def test_coarse_table_refused():
    t = build_table(GridSpec(delta=Fraction(1, 40)), progress=False)
    with pytest.raises(TableResolutionError):
        verify_A1(t)
    with pytest.raises(TableResolutionError):
        verify_qsums(t)
