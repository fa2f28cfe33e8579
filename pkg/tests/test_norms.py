"""Sobolev, Bessel-potential, and mixed space-time norms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hnls_utm.fields import Field
from hnls_utm.norms import (NormKind, NormSpec, bessel_norm,
                            check_admissible_pair, ct_l2_norm, mixed_norm,
                            sobolev_norm)
from hnls_utm.transforms import SpatialProfile


def profile_of(func, ell=1.0, n=257):
    return SpatialProfile.from_callable(func, ell, n=n)


CONST = profile_of(lambda x: np.full_like(x, 3.0, dtype=complex))
SIN = profile_of(lambda x: np.sin(2 * np.pi * x).astype(complex))


class TestSobolev:
    def test_constant_s0(self):
        assert sobolev_norm(CONST, 0.0) == pytest.approx(3.0, rel=1e-10)

    def test_constant_s1(self):
        # derivative contributes zero to the sum of L2 norms
        assert sobolev_norm(CONST, 1.0) == pytest.approx(3.0, rel=1e-9)

    def test_sin_h1_closed_form(self):
        want = 1.0 / np.sqrt(2.0) + 2.0 * np.pi / np.sqrt(2.0)
        assert sobolev_norm(SIN, 1.0) == pytest.approx(want, abs=1e-8)

    def test_monotone_in_integer_s(self):
        prof = profile_of(lambda x: np.exp(1j * 3 * x) * np.sin(np.pi * x))
        vals = [sobolev_norm(prof, s) for s in (0.0, 1.0, 2.0)]
        assert vals[0] <= vals[1] <= vals[2]


class TestBessel:
    def test_zero(self):
        zero = SpatialProfile(1.0, np.zeros(8))
        assert bessel_norm(zero, 1.0, 2.0) == 0.0

    def test_s0_is_lp(self):
        for p in (2.0, 4.0):
            direct = (np.trapezoid(np.abs(SIN(np.linspace(0, 1, 4001))) ** p,
                                   np.linspace(0, 1, 4001))) ** (1.0 / p)
            assert bessel_norm(SIN, 0.0, p) == pytest.approx(direct, rel=1e-6)

    def test_dual_path_gaussian(self):
        prof = profile_of(lambda x: np.exp(-((x - 0.5) / 0.15) ** 2) + 0j)
        b = bessel_norm(prof, 1.0, 2.0)
        s = sobolev_norm(prof, 1.0)
        assert 0.5 * s <= b <= 2.0 * s


class TestMixed:
    def test_zero_field(self):
        f = Field.zeros(np.linspace(0, 1, 9), np.linspace(0, 1, 9))
        spec = NormSpec(0.0, 2.0, 2.0, NormKind.SOBOLEV_INTERVAL)
        assert mixed_norm(f, 2.0, spec) == 0.0

    def test_sup_in_time_is_ct_l2(self):
        x = np.linspace(0, 1, 33)
        t = np.linspace(0, 0.5, 17)
        f = Field.from_callable(lambda xx, tt: np.exp(1j * xx) * (1 + tt), x, t)
        spec = NormSpec(0.0, 2.0, np.inf, NormKind.SOBOLEV_INTERVAL)
        assert mixed_norm(f, np.inf, spec) == pytest.approx(ct_l2_norm(f), rel=1e-9)

    def test_time_constant_factorization(self):
        x = np.linspace(0, 1, 65)
        t = np.linspace(0, 2.0, 33)
        f = Field.from_callable(
            lambda xx, tt: np.sin(np.pi * xx) + 0 * tt + 0j, x, t)
        spec = NormSpec(0.0, 2.0, 4.0, NormKind.SOBOLEV_INTERVAL)
        prof = profile_of(lambda xx: np.sin(np.pi * xx).astype(complex))
        want = 2.0 ** (1.0 / 4.0) * sobolev_norm(prof, 0.0)
        assert mixed_norm(f, 4.0, spec) == pytest.approx(want, rel=1e-4)


class TestAdmissiblePairs:
    def test_endpoint(self):
        assert check_admissible_pair(np.inf, 2.0)

    def test_cubic_low_regularity_pair(self):
        assert check_admissible_pair(9.0, 6.0)

    def test_rejects_4_4(self):
        assert not check_admissible_pair(4.0, 4.0)

    def test_rejects_below_two(self):
        assert not check_admissible_pair(1.5, 12.0 / 11.0)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=30, deadline=None)
def test_triangle_and_homogeneity(a_re, a_im, b_re, b_im):
    f = profile_of(lambda x: (a_re + 1j * a_im) * np.sin(np.pi * x)
                   + 0j * x)
    g = profile_of(lambda x: (b_re + 1j * b_im) * np.cos(2 * np.pi * x) + 0j * x)
    fg = profile_of(lambda x: (a_re + 1j * a_im) * np.sin(np.pi * x)
                    + (b_re + 1j * b_im) * np.cos(2 * np.pi * x))
    for s in (0.0, 1.0):
        assert sobolev_norm(fg, s) <= sobolev_norm(f, s) + sobolev_norm(g, s) + 1e-9
    two_f = profile_of(lambda x: 2.0 * (a_re + 1j * a_im) * np.sin(np.pi * x) + 0j * x)
    assert sobolev_norm(two_f, 1.0) == pytest.approx(2 * sobolev_norm(f, 1.0),
                                                     abs=1e-9)
