import pytest

from affine_billiards import CurveSpec, build_affine


@pytest.fixture(scope="session")
def circle_af():
    return build_affine(CurveSpec.circle(1.0))


@pytest.fixture(scope="session")
def ellipse_af():
    return build_affine(CurveSpec.ellipse(2.0, 1.0))


@pytest.fixture(scope="session")
def perturbed_af():
    """The standard non-ellipse test table: support h = 1 + 0.05 cos(3 theta)."""
    return build_affine(CurveSpec.support_fourier(1.0, cos=[0.0, 0.0, 0.05]))
