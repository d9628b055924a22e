import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmnk import seeding
from rmnk.enumeration import enumerate_plo
from rmnk.errors import NonPositiveData, ZeroVariance
from rmnk.experiments import (
    CSV_HEADER,
    GridConfig,
    GridRow,
    cell_means,
    empirical_objective_correlation,
    fit_linear,
    fit_linlog,
    fit_loglog,
    is_admissible,
    mean_off_diagonal,
    pearson,
    read_rows,
    rows_to_csv,
    run_grid,
    run_instance,
    spearman,
)
from rmnk.landscape import generate_instance
from rmnk.walker import walk_campaign


def oracle_pearson(xs, ys):
    """Two-pass textbook formula with compensated (fsum) sums."""
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    syy = math.fsum((y - my) ** 2 for y in ys)
    return sxy / math.sqrt(sxx * syy)


class TestGridConfig:
    def test_defaults_mirror_parameter_table(self):
        cfg = GridConfig()
        assert cfg.n_values == (18,)
        assert cfg.k_values == (2, 4, 6, 8, 10)
        assert cfg.m_values == (2, 3, 5)
        assert cfg.rho_values == (-0.9, -0.7, -0.4, -0.2, 0.0, 0.2, 0.4, 0.7, 0.9)
        assert cfg.instances_per_cell == 30
        assert cfg.walks_per_instance == 1000

    def test_110_combinations_at_n18(self):
        # M=2: 9 rho values, M=3: 7 (rho >= -0.5), M=5: 6 (rho >= -0.25); times 5 K values
        cells = GridConfig().cells()
        assert len(cells) == 110
        assert len(set(cells)) == 110
        assert all(is_admissible(m, rho) for _, _, m, rho in cells)

    def test_admissible(self):
        assert is_admissible(2, -0.9)
        assert is_admissible(3, -0.5)
        assert not is_admissible(3, -0.7)
        assert not is_admissible(5, -0.4)
        assert is_admissible(5, -0.2)

    def test_k_above_n_minus_one_skipped(self):
        cfg = GridConfig(n_values=(4,), k_values=(2, 3, 4), m_values=(2,), rho_values=(0.0,))
        assert cfg.cells() == [(4, 2, 2, 0.0), (4, 3, 2, 0.0)]

    def test_from_text(self):
        cfg = GridConfig.from_text(
            "# comment\n"
            "n_values = 18, 32\n"
            "k_values = 4\n"
            "m_values = 2,3\n"
            "rho_values = -0.2, 0.9   # trailing comment\n"
            "instances_per_cell = 5\n"
            "enumerate_flag = false\n"
            "master_seed = 99\n"
        )
        assert cfg.n_values == (18, 32)
        assert cfg.k_values == (4,)
        assert cfg.rho_values == (-0.2, 0.9)
        assert cfg.instances_per_cell == 5
        assert cfg.enumerate_flag is False
        assert cfg.master_seed == 99
        assert cfg.walks_per_instance == 1000

    def test_unknown_key(self):
        with pytest.raises(ValueError, match="unknown config key"):
            GridConfig.from_text("n_value = 18\n")

    def test_shipped_configs_parse(self):
        import pathlib

        root = pathlib.Path(__file__).parent.parent / "configs"
        small = GridConfig.from_file(root / "table1.cfg")
        assert len(small.cells()) == 110
        assert small.instances_per_cell == 30 and small.enumerate_flag
        large = GridConfig.from_file(root / "table1_large.cfg")
        assert large.n_values == (18, 32, 64, 128)
        assert large.k_values == (4,)
        assert not large.enumerate_flag


class TestPearson:
    def test_perfect(self):
        assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0, abs=1e-15)
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0, abs=1e-15)

    def test_noisy_anticorrelated_vs_oracle(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=500)
        y = -0.8 * x + rng.normal(scale=0.5, size=500)
        r = pearson(x, y)
        assert r < -0.7
        assert abs(r - oracle_pearson(list(x), list(y))) < 1e-12

    @settings(max_examples=50, deadline=None)
    # values on a 1e-3 grid: keeps sums of squares clear of underflow
    @given(st.lists(st.tuples(*[st.integers(-10**6, 10**6).map(lambda v: v / 1000)] * 2), min_size=3, max_size=40))
    def test_matches_oracle(self, pairs):
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        if len(set(xs)) < 2 or len(set(ys)) < 2:
            return
        expected = oracle_pearson(xs, ys)
        assert abs(pearson(xs, ys) - expected) < 1e-9
        assert -1.0 <= pearson(xs, ys) <= 1.0

    def test_zero_variance(self):
        with pytest.raises(ZeroVariance):
            pearson([1, 1, 1], [1, 2, 3])
        with pytest.raises(ZeroVariance):
            pearson([1, 2, 3], [4, 4, 4])

    def test_length_checks(self):
        with pytest.raises(ValueError):
            pearson([1], [1])
        with pytest.raises(ValueError):
            pearson([1, 2], [1, 2, 3])

    def test_spearman_rank_based(self):
        x = [1, 2, 3, 4, 5]
        assert spearman(x, [v**3 for v in x]) == pytest.approx(1.0)
        assert spearman(x, [5, 4, 3, 2, 1]) == pytest.approx(-1.0)


class TestFits:
    def test_loglog_identity(self):
        xs = [1.0, 2.0, 5.0, 10.0]
        fit = fit_loglog(xs, xs)
        assert fit.a == pytest.approx(1.0, abs=1e-12)
        assert fit.b == pytest.approx(0.0, abs=1e-12)
        assert fit.r == pytest.approx(1.0, abs=1e-12)
        assert fit.model == "log-log"

    def test_loglog_power_law(self):
        xs = np.array([0.5, 1.0, 3.0, 7.0, 20.0, 100.0])
        fit = fit_loglog(xs, 5.0 * xs**2)
        assert abs(fit.a - 2.0) < 1e-9
        assert abs(fit.b - math.log(5.0)) < 1e-9

    def test_linlog_exponential(self):
        xs = np.arange(0.0, 6.0)
        fit = fit_linlog(xs, np.exp(-xs))
        assert fit.a == pytest.approx(-1.0, abs=1e-12)
        assert fit.b == pytest.approx(0.0, abs=1e-12)
        assert fit.r == pytest.approx(-1.0, abs=1e-12)
        assert fit.model == "lin-log"

    def test_linlog_noisy_recovery(self):
        rng = np.random.default_rng(3)
        xs = np.linspace(1.0, 9.0, 60)
        ys = np.exp(12.0 - 1.1 * xs) * (1.0 + 0.01 * rng.standard_normal(xs.size))
        fit = fit_linlog(xs, ys)
        assert abs(fit.a + 1.1) <= 0.05
        assert abs(fit.b - 12.0) <= 0.1

    def test_fit_minimises_residuals(self):
        rng = np.random.default_rng(11)
        x = rng.uniform(0, 10, 30)
        y = 2 * x + 1 + rng.normal(size=30)
        fit = fit_linear(x, y)
        sse = np.sum((y - fit.a * x - fit.b) ** 2)
        for da, db in [(1e-3, 0), (-1e-3, 0), (0, 1e-3), (0, -1e-3)]:
            assert sse < np.sum((y - (fit.a + da) * x - (fit.b + db)) ** 2)
        assert fit.r_squared == pytest.approx(fit.r**2)

    @pytest.mark.parametrize("bad", [[1.0, 0.0, 2.0], [1.0, -3.0, 2.0]])
    def test_non_positive(self, bad):
        with pytest.raises(NonPositiveData):
            fit_loglog(bad, [1.0, 2.0, 3.0])
        with pytest.raises(NonPositiveData):
            fit_loglog([1.0, 2.0, 3.0], bad)
        with pytest.raises(NonPositiveData):
            fit_linlog([1.0, 2.0, 3.0], bad)

    def test_linlog_allows_non_positive_x(self):
        fit = fit_linlog([-1.0, 0.0, 1.0], [1.0, math.e, math.e**2])
        assert fit.a == pytest.approx(1.0)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            fit_loglog([1.0, 2.0], [1.0, 2.0])


class TestEmpiricalCorrelation:
    def test_shape_and_symmetry(self):
        inst = generate_instance(10, 2, 3, 0.3, 5)
        c = empirical_objective_correlation(inst, 500, np.random.default_rng(0))
        assert c.shape == (3, 3)
        np.testing.assert_array_equal(c, c.T)
        np.testing.assert_array_equal(np.diag(c), 1.0)
        assert np.all(np.abs(c) <= 1.0)

    def test_matches_direct_computation(self):
        from helpers import oracle_objectives

        inst = generate_instance(8, 2, 2, -0.5, 1)
        rng = np.random.default_rng(4)
        c = empirical_objective_correlation(inst, 300, rng)
        xs = np.random.default_rng(4).integers(0, 2, size=(300, 8), dtype=np.uint8)
        table = oracle_objectives(inst)
        codes = [sum(int(b) << i for i, b in enumerate(x)) for x in xs]
        vals = np.array([table[c] for c in codes])
        assert c[0, 1] == pytest.approx(oracle_pearson(list(vals[:, 0]), list(vals[:, 1])), abs=1e-12)

    def test_high_correlation_single_instance(self):
        inst = generate_instance(18, 4, 2, 0.9, 2024)
        c = empirical_objective_correlation(inst, 10_000, np.random.default_rng(1))
        assert abs(c[0, 1] - 0.9) <= 0.05

    @pytest.mark.parametrize("m, rho", [(2, 0.0), (5, -0.2), (3, 0.4)])
    def test_unbiased_over_instances(self, m, rho):
        # one instance's objective correlation scatters around rho with SD ~0.06
        # at K=4 (its tables hold only 18 * 32 rows); the mean over instances is rho
        means = []
        for s in range(40):
            inst = generate_instance(18, 4, m, rho, seeding.derive_seed(77, s))
            c = empirical_objective_correlation(inst, 10_000, np.random.default_rng(s))
            means.append(mean_off_diagonal(c))
        assert abs(np.mean(means) - rho) <= 0.02

    def test_mean_off_diagonal(self):
        c = np.array([[1.0, 0.2, 0.4], [0.2, 1.0, 0.6], [0.4, 0.6, 1.0]])
        assert mean_off_diagonal(c) == pytest.approx(0.4)

    def test_too_few_samples(self):
        inst = generate_instance(6, 1, 2, 0.0, 0)
        with pytest.raises(ValueError):
            empirical_objective_correlation(inst, 1, np.random.default_rng(0))


SMALL = GridConfig(
    n_values=(10,), k_values=(2, 4), m_values=(2, 3), rho_values=(-0.7, 0.5),
    instances_per_cell=2, walks_per_instance=50, master_seed=123, correlation_samples=500,
)


class TestRunGrid:
    def test_single_cell_two_instances(self):
        cfg = GridConfig(n_values=(12,), k_values=(2,), m_values=(2,), rho_values=(0.4,),
                         instances_per_cell=2, walks_per_instance=20, correlation_samples=200)
        rows = run_grid(cfg)
        assert len(rows) == 2
        assert all(r.cell == (12, 2, 2, 0.4) for r in rows)
        assert [r.instance_id for r in rows] == [0, 1]
        assert all(r.n_plo is not None and r.n_pareto is not None for r in rows)
        assert all(-1.0 <= r.empirical_rho <= 1.0 for r in rows)

    def test_inadmissible_pairs_skipped(self):
        rows = run_grid(SMALL)
        # (M=3, rho=-0.7) is outside the admissible range
        assert {r.cell for r in rows} == {c for c in SMALL.cells()}
        assert all(not (r.m == 3 and r.rho == -0.7) for r in rows)
        assert len(rows) == 6 * 2

    def test_row_matches_library_calls(self):
        row = run_instance(SMALL, 10, 4, 2, 0.5, 1)
        seed = seeding.cell_seed(SMALL.master_seed, 10, 4, 2, 0.5, 1)
        inst = generate_instance(10, 4, 2, 0.5, seed)
        s = enumerate_plo(inst)
        assert (row.n_plo, row.n_pareto) == (s.n_plo, s.n_pareto)
        ws = walk_campaign(inst, SMALL.walks_per_instance, seeding.derive_seed(seed, seeding.WALKS))
        assert row.mean_walk_length == ws.mean_length
        assert row.sd_walk_length == ws.sd_length

    def test_instances_differ(self):
        rows = run_grid(SMALL)
        pairs = {}
        for r in rows:
            pairs.setdefault(r.cell, []).append((r.n_plo, r.mean_walk_length))
        assert any(v[0] != v[1] for v in pairs.values())

    def test_deterministic_across_threads(self):
        a = rows_to_csv(run_grid(SMALL, threads=1))
        b = rows_to_csv(run_grid(SMALL, threads=4))
        c = rows_to_csv(run_grid(SMALL, threads=3))
        assert a == b == c

    def test_seed_changes_output(self):
        from dataclasses import replace

        assert rows_to_csv(run_grid(SMALL)) != rows_to_csv(run_grid(replace(SMALL, master_seed=124)))

    def test_space_too_large_leaves_fields_empty(self):
        cfg = GridConfig(n_values=(30,), k_values=(2,), m_values=(2,), rho_values=(0.0,),
                         instances_per_cell=1, walks_per_instance=5, correlation_samples=100,
                         enumeration_limit=24)
        (row,) = run_grid(cfg)
        assert row.n_plo is None and row.n_pareto is None
        assert row.error == "SpaceTooLarge"
        assert row.mean_walk_length is not None

    def test_enumeration_disabled(self):
        cfg = GridConfig(n_values=(10,), k_values=(2,), m_values=(2,), rho_values=(0.0,),
                         instances_per_cell=1, walks_per_instance=5, enumerate_flag=False)
        (row,) = run_grid(cfg)
        assert row.n_plo is None and row.error == ""

    def test_progress_callback(self):
        seen = []
        run_grid(SMALL, threads=2, progress=seen.append)
        assert len(seen) == 12


class TestCsv:
    def test_header_and_line_endings(self):
        text = rows_to_csv(run_grid(SMALL))
        assert text.splitlines()[0] == ",".join(CSV_HEADER)
        assert "\r" not in text
        assert text.endswith("\n")

    def test_empty_optional_fields(self):
        text = rows_to_csv([GridRow(20, 2, 2, 0.0, 0, mean_walk_length=3.5, sd_walk_length=1.0,
                                    empirical_rho=0.01, error="SpaceTooLarge")])
        assert text.splitlines()[1] == "20,2,2,0.0,0,,,,3.5,1.0,0.01,SpaceTooLarge"

    def test_plo_fraction_column(self):
        text = rows_to_csv([GridRow(10, 2, 2, 0.0, 0, n_plo=256, n_pareto=3)])
        assert text.splitlines()[1].split(",")[6] == "0.25"

    def test_round_trip(self):
        rows = run_grid(SMALL)
        back = read_rows(io.StringIO(rows_to_csv(rows)))
        assert back == rows

    def test_bad_header(self):
        with pytest.raises(ValueError):
            read_rows(io.StringIO("a,b\n1,2\n"))


class TestCellMeans:
    def test_averages_per_instance_values(self):
        rows = [
            GridRow(10, 2, 2, 0.0, 0, n_plo=10, n_pareto=2, mean_walk_length=3.0, empirical_rho=0.1),
            GridRow(10, 2, 2, 0.0, 1, n_plo=20, n_pareto=4, mean_walk_length=5.0, empirical_rho=-0.1),
            GridRow(10, 4, 2, 0.0, 0, n_plo=7, n_pareto=1, mean_walk_length=2.0, empirical_rho=0.0),
        ]
        cells = cell_means(rows)
        c = cells[(10, 2, 2, 0.0)]
        assert c.count == 2
        assert (c.n_plo, c.n_pareto, c.mean_walk) == (15.0, 3.0, 4.0)
        assert c.empirical_rho == pytest.approx(0.0)
        assert c.plo_fraction == 15.0 / 1024
        assert cells[(10, 4, 2, 0.0)].n_plo == 7.0

    def test_partial_measurements_not_averaged(self):
        rows = [
            GridRow(10, 2, 2, 0.0, 0, n_plo=10, n_pareto=2),
            GridRow(10, 2, 2, 0.0, 1),
        ]
        c = cell_means(rows)[(10, 2, 2, 0.0)]
        assert c.n_plo is None and c.mean_walk is None
