import math

import pytest

from rusforge.bench import BenchRecord, bench_angles, fit_means, reference_cost, run_bench, summary, to_csv


def test_fourier_angles():
    a = bench_angles("fourier", 4, 0)
    assert [str(x) for x in a] == ["pi/2^2", "pi/2^3", "pi/2^4", "pi/2^5"]
    with pytest.raises(ValueError):
        bench_angles("nope", 1, 0)


def test_random_angles_seeded():
    assert [float(x) for x in bench_angles("random", 5, 3)] == [float(x) for x in bench_angles("random", 5, 3)]
    assert [float(x) for x in bench_angles("random", 5, 3)] != [float(x) for x in bench_angles("random", 5, 4)]


def test_fourier_rows_and_quarter_turn():
    rows = run_bench("fourier", 3, [1e-3, 1e-5], seed=1, workers=1)
    assert len(rows) == 6 and all(r.ok for r in rows)
    quarter = [r for r in rows if r.theta == "pi/2^2"]
    assert all(r.expectedTcount <= 1 for r in quarter)
    assert all(r.achievedDistance <= r.epsilon for r in rows)


def test_csv_is_reproducible():
    a = run_bench("random", 2, [1e-4, 1e-6], seed=9, workers=1)
    b = run_bench("random", 2, [1e-4, 1e-6], seed=9, workers=2)
    assert to_csv(a, wall_time=False) == to_csv(b, wall_time=False)
    assert to_csv(a).splitlines()[0].startswith("theta,epsilon,achievedDistance")


def test_fit_and_reference():
    rows = [BenchRecord("x", e, 0, 0, 1, 4 * math.log10(1 / e) + 10, int(3 * math.log10(1 / e)), 1, 0) for e in (1e-3, 1e-6, 1e-9)]
    fit = fit_means(rows)
    assert fit.slope == pytest.approx(4) and fit.intercept == pytest.approx(10)
    assert summary(rows)["pslq_iterations_fit"]["slope"] == pytest.approx(3)
    assert reference_cost(1e-3) == pytest.approx(3 * math.log2(1000))


def test_failed_rows_are_kept():
    rows = run_bench("fourier", 1, [1e-3], seed=1, workers=1)
    bad = BenchRecord("x", 1e-3, float("nan"), -1, float("nan"), float("nan"), -1, -1, 0, False, "boom")
    s = summary(rows + [bad])
    assert s["failed"] == 1
