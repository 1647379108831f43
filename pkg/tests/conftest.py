import pytest

from formclass import BaseField, RATIONALS, build_cm_field


@pytest.fixture(scope="session")
def QQ():
    return RATIONALS


@pytest.fixture(scope="session")
def F2():
    return BaseField("real_quadratic", 2)


@pytest.fixture(scope="session")
def F5():
    return BaseField("real_quadratic", 5)


@pytest.fixture(scope="session")
def F13():
    return BaseField("real_quadratic", 13)


@pytest.fixture(scope="session")
def K23(QQ):
    # K = Q(sqrt(-23)), omega = (-1+sqrt(-23))/2
    return build_cm_field(QQ, QQ.elem(1), QQ.elem(6))


@pytest.fixture(scope="session")
def Ki(QQ):
    # K = Q(i)
    return build_cm_field(QQ, QQ.elem(0), QQ.elem(1))


@pytest.fixture(scope="session")
def K5(F5):
    # K = Q(zeta5) over Q(sqrt5); omega = zeta5
    return build_cm_field(F5, F5.one - F5.theta, F5.one)


@pytest.fixture(scope="session")
def K8(F2):
    # K = Q(zeta8) over Q(sqrt2); omega = zeta8 with zeta8 + zeta8^-1 = sqrt2
    return build_cm_field(F2, -F2.theta, F2.one)
