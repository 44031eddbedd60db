"""Shared model fixtures: the anisotropic example chain in several states."""

import pytest

from entroscale.rlmover import (
    ChainModel,
    FermiDirac,
    GroundStep,
    HalfConstant,
    HamiltonianCoeffs,
    Temperatures,
)


@pytest.fixture(scope="session")
def xy_coeffs():
    """u2 = -(1/25) sin k, u3 = 1/2 + cos k: gapped, case 2."""
    return HamiltonianCoeffs(1, {(2, 1): 1 / 50, (3, 0): 0.5, (3, 1): 0.5})


@pytest.fixture(scope="session")
def xy_ness_model(xy_coeffs):
    return ChainModel(xy_coeffs, Temperatures(2.0, 5.0), FermiDirac())


@pytest.fixture(scope="session")
def xy_eq_model(xy_coeffs):
    return ChainModel(xy_coeffs, Temperatures(2.0, 2.0), FermiDirac())


@pytest.fixture(scope="session")
def xy_ground_model(xy_coeffs):
    return ChainModel(xy_coeffs, Temperatures(2.0, 5.0), GroundStep())


@pytest.fixture(scope="session")
def half_model(xy_coeffs):
    return ChainModel(xy_coeffs, Temperatures(1.0, 1.0), HalfConstant())


@pytest.fixture(scope="session")
def case3_model():
    """Pure hopping chain u0 = -2 sin k, u = 0."""
    return ChainModel(HamiltonianCoeffs(1, {(0, 1): 1.0}), Temperatures(2.0, 5.0), FermiDirac())
