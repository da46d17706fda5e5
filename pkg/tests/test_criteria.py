from fractions import Fraction

import pytest

from frobsing.criteria import (STRONG, WEAK, PairSpec, VerdictKind, default_witness, divisorial_freg_test,
                               fedder_product, fpure_test_ci, fpure_test_general, quotient_pair, r_level,
                               run_pair_implications, strong_freg_test_ci, validate_pair_implications)
from frobsing.errors import InvalidInput
from frobsing.ideal import Ideal
from frobsing.polynomial import BracketPowers, Ring

from .oracles import cusp_nu, fermat_survives

FERMAT = "x^4+y^4+z^4+w^4"
TWELFTHS = [Fraction(k, 12) for k in range(0, 19)]


def cusp(p, t, mode=WEAK):
    return PairSpec.build(p, "x,y", [], "x^2-y^3", t, mode)


def cone(p, t, g="z"):
    return PairSpec.build(p, "x,y,z", ["x*y-z^2"], g, t)


def catalog_pairs():
    out = [cusp(p, "5/6") for p in (5, 7, 13)]
    out += [cone(p, "1/2") for p in (3, 5, 7)]
    out += [PairSpec.build(p, "x,y,z", [], "x*y", "1/2") for p in (3, 5)]
    return out


class TestPairSpec:
    def test_validation(self):
        with pytest.raises(InvalidInput):
            PairSpec.build(5, "x,y", [], "x", "-1/2")
        with pytest.raises(InvalidInput):
            PairSpec.build(5, "x", ["x", "x^2"], None, "0")
        with pytest.raises(InvalidInput):
            PairSpec.build(5, "x,y", ["x+1"], None, "0")
        with pytest.raises(InvalidInput):
            PairSpec.build(5, "x,y", ["0"], None, "0")

    def test_levels(self):
        assert r_level("5/6", 1, WEAK, 7).r == 5
        assert r_level("5/6", 1, STRONG, 5).r == 4
        assert r_level("5/6", 2, WEAK, 7) == r_level(Fraction(5, 6), 2, WEAK, 7)
        assert r_level("5/6", 2, WEAK, 7).q == 49


class TestFedderCI:
    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_fermat_against_multinomial_oracle(self, p):
        v = fpure_test_ci(PairSpec.build(p, "x,y,z,w", [FERMAT]), 2)
        expected = [fermat_survives(p, 4, 4, e) for e in (1, 2)]
        got = v.passed_levels()
        for e, ok in got.items():
            assert ok == expected[e - 1]
        if all(expected):
            assert v.kind is VerdictKind.HOLDS_UP_TO_LEVEL and v.level == 2
        else:
            assert v.refuted and v.level == expected.index(False) + 1

    @pytest.mark.parametrize("p", [5, 7, 13])
    @pytest.mark.parametrize("t", ["5/6", "11/12", "3/4", "1/2"])
    def test_cusp_against_lucas_oracle(self, p, t):
        v = fpure_test_ci(cusp(p, t), 2)
        for rec in v.transcript:
            assert rec.passed == (rec.r <= cusp_nu(p, rec.e))

    def test_cusp_strong_p5_refuted_at_one(self):
        v = fpure_test_ci(cusp(5, "5/6", STRONG), 2)
        assert v.refuted and v.level == 1 and v.transcript[0].r == 4

    def test_cusp_weak_p5_refuted_at_two(self):
        v = fpure_test_ci(cusp(5, "5/6"), 2)
        assert v.refuted and v.level == 2 and v.transcript[-1].r == 20

    def test_no_boundary_regular_ring(self):
        v = fpure_test_ci(PairSpec.build(2, "x,y", [], None, "0"), 3)
        assert v.kind is VerdictKind.HOLDS_UP_TO_LEVEL and v.level == 3


class TestLevelMonotonicity:
    @pytest.mark.parametrize("pair", catalog_pairs(), ids=lambda pr: pr.describe())
    def test_exponent_monotone(self, pair):
        powers = BracketPowers(list(pair.ci) + [pair.g])
        for e in (1, 2):
            lvl = r_level(pair.t, e, WEAK, pair.p)
            passes = [not fedder_product(pair, lvl.q, r, powers=powers).is_zero()
                      for r in range(lvl.r + 1)]
            # once a smaller exponent fails, every larger one fails too
            assert passes == sorted(passes, reverse=True)

    @pytest.mark.parametrize("pair", catalog_pairs(), ids=lambda pr: pr.describe())
    def test_t_grid_monotone_and_strong_implies_weak(self, pair):
        weak = {t: fpure_test_ci(pair.with_t(t), 2).passed_levels() for t in TWELFTHS}
        strong = {t: fpure_test_ci(pair.with_t(t).with_mode(STRONG), 2).passed_levels() for t in TWELFTHS}
        for small, big in zip(TWELFTHS, TWELFTHS[1:]):
            for e, ok in weak[big].items():
                if ok:
                    assert weak[small].get(e, True)
        for t in TWELFTHS:
            for e, ok in strong[t].items():
                if ok:
                    assert weak[t].get(e, False), (t, e)

    @pytest.mark.parametrize("pair", catalog_pairs(), ids=lambda pr: pr.describe())
    def test_implication_validator(self, pair):
        assert run_pair_implications(pair.with_t("3/2"), 2, lower_ts=["1/2", "5/6"]).ok
        assert run_pair_implications(pair, 2).ok

    def test_validator_catches_inconsistency(self):
        pair = cusp(7, "5/6")
        weak = fpure_test_ci(cusp(5, "5/6"), 2)     # refuted at level 2
        strong = fpure_test_ci(cusp(7, "5/6", STRONG), 2)  # passes level 2
        assert not validate_pair_implications(pair, weak, strong).ok


def _principal_cases():
    out = []
    for p in (3, 5, 7):
        for t in ("1/2", "1", "3/2"):
            out.append((PairSpec.build(p, "x,y,z", ["x*y-z^2"], "z", t), 2))
    for p in (3, 5, 7, 11, 13):
        out.append((PairSpec.build(p, "x,y,z,w", [FERMAT]), 2 if p ** 2 <= 25 else 1))
    for p in (5, 7, 13):
        out.append((PairSpec.build(p, "x,y", ["x^2-y^3"]), 2))
    return out


@pytest.mark.parametrize("pair, e_max", _principal_cases(), ids=lambda v: getattr(v, "describe", lambda: str(v))())
def test_engines_agree_on_hypersurfaces(pair, e_max):
    general = fpure_test_general(Ideal(pair.ring, list(pair.ci)), pair.g, pair.t, e_max)
    ci = fpure_test_ci(pair, e_max)
    assert general.kind is ci.kind and general.level == ci.level
    assert general.passed_levels() == ci.passed_levels()


def test_general_engine_on_non_principal_ideal():
    # the three coordinate axes are F-pure; the monomial curve (t^3, t^4, t^5) is not
    ring = Ring(5, ("x", "y", "z"))
    v = fpure_test_general(Ideal(ring, [ring.parse("x*y"), ring.parse("x*z"), ring.parse("y*z")]), None, 0, 2)
    assert v.kind is VerdictKind.HOLDS_UP_TO_LEVEL and v.level == 2
    curve = Ideal(ring, [ring.parse("y^2-x*z"), ring.parse("x^3-y*z"), ring.parse("z^2-x^2*y")])
    assert fpure_test_general(curve, None, 0, 1).refuted


class TestStrongRegularity:
    def test_cone_witness_x_certified(self):
        pair = PairSpec.build(5, "x,y,z", ["x*y-z^2"], None, "0")
        v = strong_freg_test_ci(pair, 2, pair.ring.parse("x"))
        assert v.kind is VerdictKind.CERTIFIED_POSITIVE and v.level == 1
        exps, c = v.transcript[0].surviving_term
        assert exps == (4, 3, 2) and c == (-4) % 5

    def test_structural_refutation(self):
        v = strong_freg_test_ci(cone(5, "1"), 2)
        assert v.refuted and v.level is None

    def test_not_fpure_propagates(self):
        v = strong_freg_test_ci(PairSpec.build(3, "x,y,z,w", [FERMAT]), 2)
        assert v.refuted and v.level == 1

    def test_cusp_inconclusive_with_colon_transcript(self):
        v = strong_freg_test_ci(cusp(7, "5/6"), 2)
        assert v.kind is VerdictKind.INCONCLUSIVE
        assert all(rec.colon is not None for rec in v.transcript)
        m = Ideal.maximal(v.transcript[0].colon.ring)
        assert v.transcript[0].colon.equals(m)

    def test_default_witness(self):
        pair = PairSpec.build(5, "x,y,z", ["x*y-z^2"], None, "0")
        w = default_witness(pair)
        assert not w.is_zero() and not Ideal(pair.ring, list(pair.ci)).contains(w)

    def test_bad_witness(self):
        pair = PairSpec.build(5, "x,y,z", ["x*y-z^2"], None, "0")
        with pytest.raises(InvalidInput):
            strong_freg_test_ci(pair, 1, pair.ring.parse("x*y-z^2"))


class TestDivisorial:
    def test_plane_along_axis(self):
        v = divisorial_freg_test(PairSpec.build(5, "x,y", [], "x", "1"), 2)
        assert v.kind is VerdictKind.CERTIFIED_POSITIVE and v.criterion == "divisorial-freg"

    def test_requires_coefficient_one(self):
        with pytest.raises(InvalidInput):
            divisorial_freg_test(cone(5, "1/2"), 1)

    @pytest.mark.parametrize("pair", [
        PairSpec.build(5, "x,y,z", ["x*y-z^2"], "z", "1"),
        PairSpec.build(5, "x,y,z", ["x*y-z^2"], "x", "1"),
        PairSpec.build(3, "x,y,z", [], "x*y", "1"),
        PairSpec.build(7, "x,y", [], "x^2-y^3", "1"),
        PairSpec.build(5, "x,y", [], "x", "1"),
    ], ids=lambda pr: pr.describe())
    def test_inversion_plumbing(self, pair):
        a = divisorial_freg_test(pair, 2)
        b = strong_freg_test_ci(quotient_pair(pair), 2)
        assert a.kind is b.kind and a.level == b.level
