"""Zeta continuations: values, residues, two independent routes, base torsion."""

from fractions import Fraction

import mpmath as mp
import pytest

from conetorsion import zeta
from conetorsion.precision import context
from conetorsion.spectrum import sphere, torus, write_spectrum_file, read_spectrum_file
from conetorsion.zeta import (
    ApproximateOnlyError,
    CoclosedZetaB,
    PoleError,
    base_torsion,
    base_torsion_from_form_spectra,
    direct_sum_with_tail,
    shifted_residue_via_route_b,
    shifted_zeta_representation,
    zeta_ccl_at_zero,
    zeta_shifted,
    zeta_shifted_residue,
)

F = Fraction
S1, S3, S5 = sphere(1), sphere(3), sphere(5)


def test_circle_values():
    ctx = context(40)
    assert abs(zeta_shifted(S1, 0, 2, 40) - 2 * ctx.pi ** 2 / 6) < ctx.mpf("1e-45")
    assert zeta_shifted(S1, 0, 0, 40) == -1
    with pytest.raises(PoleError) as exc:
        zeta_shifted(S1, 0, 1, 40)
    assert exc.value.residue == 2


def test_direct_sum_agreement():
    # continuation vs brute-force summation with its tail bound, Re(s) = n + 5
    for M in (S1, S3, S5):
        s = M.n + 5
        partial, tail = direct_sum_with_tail(M, 0, s, P=40, cutoff=200)
        cont = zeta_shifted(M, 0, s, 40)
        assert abs(cont - partial) <= tail


def test_sphere3_residues():
    p0 = zeta_shifted_residue(S3, 0, 1, 40)
    p1 = zeta_shifted_residue(S3, 1, 1, 40)
    assert p0.residue == 1 and p1.residue == 2 and p0.exact and p1.exact
    assert p0.location == 3


def test_residue_numerical_limit_oracle():
    # (s - 3) zeta(s) along s = 3 + 10^-j must converge to the residue, and
    # zeta(s) - R/(s-3) to the finite part
    P = 50
    ctx = context(P)
    point = zeta_shifted_residue(S3, 0, 1, P)
    for j in (8, 12):
        s = 3 + ctx.mpf(10) ** -j
        val = zeta_shifted(S3, 0, s, P)
        assert abs((s - 3) * val - point.residue) < ctx.mpf(10) ** (-j + 1)
        assert abs((val - point.residue / (s - 3)) - point.finite_part) < ctx.mpf(10) ** (-j + 2)


def test_out_of_range_residue():
    with pytest.raises(ValueError):
        zeta_shifted_residue(S3, 0, 2, 30)  # s = 5 > n = 3


def test_pole_parity():
    # regular at 0 and at even integers below n
    for M, k in ((S3, 0), (S5, 1)):
        for s in (0, 2):
            zeta_shifted(M, k, s, 30)
        rep = shifted_zeta_representation(M, k)
        assert all(loc % 2 == 1 for loc in rep.pole_locations())


@pytest.mark.parametrize("M,k", [(S3, 0), (S3, 1), (S5, 0), (S5, 1), (S5, 2)])
def test_residues_route_b_exact(M, k):
    for r in range(1, (M.n - 1) // 2 + 1):
        exact_a = shifted_zeta_representation(M, k).residue_at(F(2 * r + 1))
        exact_b = shifted_residue_via_route_b(M, k, r)
        assert exact_a == exact_b


def test_binomial_continuation_equivalence():
    """Route A and the composite route-B expansion agree at s in {0, +-1/2}.

    The composite series has geometric ratio A^2 / eta_min (4/5 on the
    5-sphere in degree 0), so several hundred terms at the stated tolerance.
    """
    P = 30
    ctx = context(P)
    for M, k in ((S3, 0), (S5, 0), (S5, 1)):
        A2 = (F(M.n - 1, 2) - k) ** 2
        zb = CoclosedZetaB(M, k)
        rep = shifted_zeta_representation(M, k)
        for two_s in (0, F(1, 2), F(-1, 2)):
            s = F(two_s, 2)
            route_a = rep.value(two_s, P)
            acc = ctx.mpf(0)
            j = 0
            while True:
                binom = zeta._binom_frac(-s, j)
                rho = zb.value(s + j, P)
                term = (ctx.mpf(binom.numerator) / binom.denominator
                        * ctx.mpf((A2 ** j).numerator) / (A2 ** j).denominator * rho)
                acc += term
                j += 1
                if A2 == 0 or (j > 4 and abs(term) < ctx.mpf(10) ** -25):
                    break
                if j > 1500:
                    raise AssertionError("composite expansion failed to converge")
            assert abs(route_a - acc) < ctx.mpf(10) ** -20


def test_zeta_zero_identity_between_routes():
    # zeta_{k,N}(0) equals the coclosed zeta at 0 computed through route B
    P = 40
    ctx = context(P)
    for M, k in ((S3, 0), (S5, 1)):
        rep_zero = shifted_zeta_representation(M, k).value(0, P)
        zb = CoclosedZetaB(M, k)
        assert abs(zb.value(0, P) - rep_zero) < ctx.mpf(10) ** -25


def test_circle_ccl_at_zero():
    ctx = context(40)
    z0, z0p = zeta_ccl_at_zero(S1, 0, 40)
    assert z0 == -1
    assert abs(z0p + 2 * ctx.log(2 * ctx.pi)) < ctx.mpf("1e-45")


def test_ccl_precision_doubling():
    for M, k in ((S3, 1), (S3, 0)):
        z0a, z0pa = zeta_ccl_at_zero(M, k, 40)
        z0b, z0pb = zeta_ccl_at_zero(M, k, 80)
        assert abs(mp.mpmathify(z0a) - mp.mpmathify(z0b)) < mp.mpf(10) ** -35
        assert abs(mp.mpmathify(z0pa) - mp.mpmathify(z0pb)) < mp.mpf(10) ** -35


def test_base_torsion_circle():
    ctx = context(40)
    assert abs(base_torsion(S1, 40) - ctx.log(2 * ctx.pi)) < ctx.mpf("1e-44")


@pytest.mark.parametrize("M", [S1, S3, S5])
def test_base_torsion_duality_oracle(M):
    a = base_torsion(M, 40)
    b = base_torsion_from_form_spectra(M, 40)
    assert abs(a - b) < mp.mpf(10) ** -25


def test_base_torsion_guards():
    with pytest.raises(ApproximateOnlyError):
        base_torsion(torus(3), 40)


def test_torus_residues_exact():
    ctx = context(40)
    T3 = torus(3)
    assert abs(zeta_shifted_residue(T3, 0, 1, 40).residue - 4 * ctx.pi) < ctx.mpf("1e-44")
    assert abs(zeta_shifted_residue(T3, 1, 1, 40).residue - 8 * ctx.pi) < ctx.mpf("1e-44")
    T5 = torus(5)
    assert abs(zeta_shifted_residue(T5, 0, 2, 40).residue
               - ctx.mpf(8) / 3 * ctx.pi ** 2) < ctx.mpf("1e-43")
    assert abs(zeta_shifted_residue(T5, 0, 1, 40).residue + 16 * ctx.pi ** 2) < ctx.mpf("1e-43")
    # middle degree has A = 0: no lower pole
    assert zeta_shifted_residue(T5, 2, 1, 40).residue == 0


def test_torus_values_need_large_re():
    T3 = torus(3)
    v = zeta_shifted(T3, 0, 10, 40, cutoff=60)
    assert v > 0
    with pytest.raises(ApproximateOnlyError):
        zeta_shifted(T3, 0, 2, 40)


def test_file_leading_residue_estimate(tmp_path):
    path = tmp_path / "s3.spec"
    write_spectrum_file(sphere(3), path, 80)
    M = read_spectrum_file(path)
    pt = zeta_shifted_residue(M, 0, 1, 30)
    assert not pt.exact
    assert abs(float(pt.residue) - 1.0) < 0.15


def test_file_subleading_residue_unavailable(tmp_path):
    path = tmp_path / "s5.spec"
    write_spectrum_file(sphere(5), path, 30)
    M = read_spectrum_file(path)
    with pytest.raises(ApproximateOnlyError):
        zeta_shifted_residue(M, 0, 1, 30)  # s = 3 < n = 5: only the leading pole is estimable


def test_degree_report_structure():
    import json
    rep = zeta.degree_report(S3, 30)
    payload = json.loads(json.dumps(rep, sort_keys=True))
    assert payload["base"] == "sphere:3" and len(payload["degrees"]) == 2
    d0 = payload["degrees"][0]
    assert d0["A"] == "1" and "zeta0" in d0 and d0["residues"]["3"]["exact"] is True
