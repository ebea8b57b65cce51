"""Shared fixtures: canonical parameter points and cached meshes.

The heavy objects (48x48 mesh + plaquette field) are session-scoped because
they are pure functions of the parameters and several test modules reuse them.
"""
import math

import pytest

from stratachern import ModelParams, build_mesh, plaquette_curvature

SQRT3 = math.sqrt(3.0)


@pytest.fixture(scope="session")
def p_default():
    """Topological point used throughout: t1=1, t2=1/3, phi=pi/2, M=0."""
    return ModelParams(t1=1.0, t2=1.0 / 3.0, phi=math.pi / 2.0, M=0.0)


@pytest.fixture(scope="session")
def p_half(p_default):
    """Same phase, staggered mass M=0.5 (the worked-example point)."""
    return ModelParams(t1=1.0, t2=1.0 / 3.0, phi=math.pi / 2.0, M=0.5)


@pytest.fixture(scope="session")
def mesh24(p_default):
    return build_mesh(p_default, 24, 24)


@pytest.fixture(scope="session")
def curv24(mesh24):
    return plaquette_curvature(mesh24)


@pytest.fixture(scope="session")
def mesh48(p_default):
    return build_mesh(p_default, 48, 48)


@pytest.fixture(scope="session")
def mesh48_half(p_half):
    return build_mesh(p_half, 48, 48)


@pytest.fixture(scope="session")
def curv48_half(mesh48_half):
    return plaquette_curvature(mesh48_half)
