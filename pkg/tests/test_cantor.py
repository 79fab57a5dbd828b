import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chiralwalk.cantor import (Cylinder, Dyadic, ProductMeasure, cantor_function,
                               check_prefix_partition, cylinder_measure,
                               is_prefix_partition, refine_partition, ternary_point)

dyadics = st.builds(Dyadic.make,
                    st.integers(min_value=-10**6, max_value=10**6),
                    st.integers(min_value=0, max_value=40))
prefixes = st.text(alphabet="01", max_size=10)


# --- Dyadic -----------------------------------------------------------------

def test_make_canonicalizes():
    assert Dyadic.make(4, 2) == Dyadic(1, 0)
    assert Dyadic.make(6, 1) == Dyadic(3, 0)
    assert Dyadic.make(0, 7) == Dyadic(0, 0)
    assert Dyadic.make(-8, 3) == Dyadic(-1, 0)
    assert Dyadic.make(3, 2) == Dyadic(3, 2)


def test_arithmetic_examples():
    half = Dyadic.make(1, 1)
    quarter = Dyadic.make(1, 2)
    assert half + quarter == Dyadic(3, 2)
    assert half - quarter == quarter
    assert half * quarter == Dyadic(1, 3)
    assert 3 * quarter == Dyadic(3, 2)
    assert quarter.halve() == Dyadic(1, 3)
    assert float(Dyadic.make(3, 2)) == 0.75


def test_exact_addition_many_random_pairs():
    # (x + y) - y == x exactly, 10^4 seeded pairs
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        x = Dyadic.make(int(rng.integers(-10**9, 10**9)), int(rng.integers(0, 50)))
        y = Dyadic.make(int(rng.integers(-10**9, 10**9)), int(rng.integers(0, 50)))
        assert (x + y) - y == x


@given(dyadics, dyadics)
def test_addition_commutes_and_cancels(x, y):
    assert x + y == y + x
    assert (x + y) - y == x


@given(dyadics)
def test_halving_closure(x):
    assert x.halve() + x.halve() == x


def test_ordering():
    assert Dyadic.make(1, 2) < Dyadic.make(1, 1)
    assert Dyadic.make(-1, 0) < Dyadic.make(0, 0)
    assert Dyadic.make(3, 2) <= Dyadic.make(3, 2)


def test_json_form():
    assert Dyadic.make(1, 2).to_json() == {"num": 1, "exp": 2}


# --- cylinders and measures ---------------------------------------------------

def test_uniform_measure_examples():
    uniform = ProductMeasure.uniform()
    assert cylinder_measure(uniform, Cylinder("")) == Dyadic(1, 0)
    assert cylinder_measure(uniform, Cylinder("01")) == Dyadic(1, 2)


def test_bernoulli_measure_weights():
    third = ProductMeasure.bernoulli(1 / 3)
    assert cylinder_measure(third, Cylinder("1")) == pytest.approx(2 / 3)
    assert cylinder_measure(third, Cylinder("0")) == pytest.approx(1 / 3)


def test_bernoulli_rejects_bad_theta():
    with pytest.raises(ValueError):
        ProductMeasure.bernoulli(0.0)
    with pytest.raises(ValueError):
        ProductMeasure.bernoulli(1.0)


@given(prefixes)
def test_uniform_additivity_exact(prefix):
    uniform = ProductMeasure.uniform()
    whole = cylinder_measure(uniform, Cylinder(prefix))
    left = cylinder_measure(uniform, Cylinder(prefix + "0"))
    right = cylinder_measure(uniform, Cylinder(prefix + "1"))
    assert left + right == whole


@given(prefixes, st.floats(min_value=0.05, max_value=0.95))
def test_bernoulli_additivity(prefix, theta):
    m = ProductMeasure.bernoulli(theta)
    whole = float(cylinder_measure(m, Cylinder(prefix)))
    split = (float(cylinder_measure(m, Cylinder(prefix + "0")))
             + float(cylinder_measure(m, Cylinder(prefix + "1"))))
    assert abs(whole - split) <= 1e-15


def test_per_level_measure():
    m = ProductMeasure.per_level(0.25, 0.75)
    assert float(cylinder_measure(m, Cylinder("0"))) == pytest.approx(0.25)
    assert float(cylinder_measure(m, Cylinder("00"))) == pytest.approx(0.25 * 0.75)
    # uniform past the listed levels
    assert float(cylinder_measure(m, Cylinder("001"))) == pytest.approx(0.25 * 0.75 * 0.5)


def test_ternary_points():
    assert ternary_point("1") == pytest.approx(2 / 3)
    assert ternary_point("01") == pytest.approx(2 / 9)
    assert ternary_point("") == 0.0


def test_cantor_function_values():
    assert cantor_function("1") == Dyadic(1, 1)
    assert cantor_function("01") == Dyadic(1, 2)
    assert cantor_function("11") == Dyadic(3, 2)
    assert cantor_function("") == Dyadic(0, 0)


def test_cantor_function_monotone():
    level = 6
    values = [cantor_function(format(i, f"0{level}b")) for i in range(1 << level)]
    assert all(x < y for x, y in zip(values, values[1:]))


def test_cantor_function_matches_measure_below():
    # value at x = point(prefix) is the measure of everything to its left
    uniform = ProductMeasure.uniform()
    for prefix in ["0", "1", "01", "110", "0011"]:
        total = Dyadic(0, 0)
        level = len(prefix)
        for i in range(int(prefix, 2)):
            total = total + cylinder_measure(uniform, Cylinder(format(i, f"0{level}b")))
        assert cantor_function(prefix) == total


# --- partitions ---------------------------------------------------------------

def test_partition_recognition():
    assert is_prefix_partition([""])
    assert is_prefix_partition(["0", "10", "11"])
    assert not is_prefix_partition(["0"])
    assert not is_prefix_partition(["0", "1", "11"])
    assert not is_prefix_partition(["0", "0", "1"])


def test_refine_whole_space():
    cells = refine_partition([Cylinder("")], 1)
    assert [c.prefix for c, _ in cells] == ["0", "1"]
    assert all(anc.prefix == "" for _, anc in cells)


def test_refine_level_two():
    cells = refine_partition([Cylinder("0"), Cylinder("1")], 2)
    assert [c.prefix for c, _ in cells] == ["00", "01", "10", "11"]
    assert [anc.prefix for _, anc in cells] == ["0", "0", "1", "1"]


def test_refine_cannot_coarsen():
    with pytest.raises(ValueError, match="finer"):
        refine_partition([Cylinder("0"), Cylinder("10"), Cylinder("11")], 1)


def test_refine_rejects_non_partition():
    with pytest.raises(ValueError, match="prefix code"):
        refine_partition([Cylinder("0")], 2)


def test_check_partition_raises():
    with pytest.raises(ValueError):
        check_prefix_partition(["0", "00"])


def test_cylinder_nesting():
    assert Cylinder("0").contains(Cylinder("01"))
    assert not Cylinder("01").contains(Cylinder("0"))
    assert Cylinder("00").disjoint(Cylinder("01"))
