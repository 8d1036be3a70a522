"""Smoke tests for the python bindings."""
import os

import _core as blochlat


def test_dilog_known_value():
    v = blochlat.dilog("0.5+0.86602540378443864676372317075293618i", digits=40)
    assert v.startswith("1.014941606409653625021202554274")


def test_dilog_matches_quadrature():
    a = blochlat.dilog("0.3+1.1i", digits=40)
    b = blochlat.dilog_quadrature("0.3+1.1i", digits=40)
    assert a[:30] == b[:30]


def test_roots_and_places():
    rts = blochlat.roots([4, 0, -3, 0, 1], digits=40)
    assert len(rts) == 4
    assert blochlat.count_complex_places([4, 0, -3, 0, 1], digits=40) == 2
    assert blochlat.count_complex_places([13, 0, 1], digits=40) == 1


def test_lindep():
    rel = blochlat.lindep(["2.7182818284590", "5.4365636569180"], digits=19)
    assert rel == [2, -1]
    assert blochlat.lindep(
        ["1.73205080756887729352744634150587236694280525381038",
         "1.41421356237309504880168872420969807856967187537694"], digits=50) is None


def test_fit_worked_example():
    samples = [("V", "2.7182818284590", "geometric"),
               ("W", "5.4365636569180", "geometric"),
               ("X", "6.3496623769612", "geometric"),
               ("Y", "11.7197489640976", "geometric"),
               ("Z", "21.1445269248670", "geometric")]
    fit = blochlat.fit_field(samples, 2, digits=19)
    assert fit["basis"] == ["V", "Y"]
    assert fit["fit_ratio"] == "2"
    assert fit["det_gcd"] == "1/15"


def test_solve_fixture():
    path = os.path.join(os.environ["BLOCHLAT_DATA"], "m004.json")
    out = blochlat.solve_triangulation(path, ["0.5+0.8i", "0.5+0.8i"], digits=60)
    assert out["geometric"] is True
    assert out["volume"].startswith("2.0298832128193072500")


def test_fractional_gcd():
    assert blochlat.fractional_gcd("2/15", "1/3") == "1/15"
