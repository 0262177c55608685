"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line
(run with ``pytest tests/test_acceptance.py -v -s`` to see the lines live).
"""

import json
import math
import os
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from trajmine.labeling import (
    CourtGeometry,
    PlayerShotStats,
    Position,
    ShotEvent,
    adjusted_three_point_prob,
    classify_zone,
    label_attack,
    three_point_prob,
    ShotZone,
)
from trajmine.distance import hausdorff
from trajmine.mining import MinerConfig, enumerate_seeds, mine, seed_neighborhood
from trajmine.model import Point2D
from trajmine.stats import (
    ContingencyMargins,
    envelope_bound,
    fet_pvalue,
    fet_pvalue_exact,
    min_attainable_p,
    pvalue_tables,
)
from trajmine.synth import SynthConfig, gen_null, gen_planted

from test_stats import oracle_two_sided

SRC = str(Path(__file__).resolve().parents[1] / "src")


@contextmanager
def report(criterion):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {criterion}: FAIL", flush=True)
        raise
    print(f"ACCEPTANCE {criterion}: PASS", flush=True)


# ---------------------------------------------------------------------------
# 1. pruning soundness: mine == mine --no-prune on 25 seeded datasets

ACC1_SYNTH = dict(
    n_matrices=10, n_pos=5, min_length=8, max_length=14, n_agents=3,
    step_scale=1.0, motif_length=4, plant_rate=0.0, bounds=(0.0, 10.0, 0.0, 10.0),
)
ACC1_EPS = 9.0  # calibrated: mean seed-neighborhood support ~ N/2 on this arena


def test_acceptance_01_bruteforce_equivalence():
    with report("1 (brute-force equivalence)"):
        support_means = []
        pruned_nodes_total = 0
        for seed in range(25):
            ds = gen_null(SynthConfig(seed=seed, **ACC1_SYNTH))
            t0 = time.perf_counter()
            base = dict(
                min_length=4, epsilon=ACC1_EPS, permutations=100, alpha=0.05,
                prng_seed=seed,
            )
            pruned = mine(ds, MinerConfig(**base))
            full = mine(ds, MinerConfig(**base, prune=False))
            elapsed = time.perf_counter() - t0
            assert elapsed < 60.0, f"seed {seed}: pair took {elapsed:.1f}s"
            got = [(d.matrix_id, d.start, d.end) for d in pruned.discoveries]
            want = [(d.matrix_id, d.start, d.end) for d in full.discoveries]
            assert got == want, f"seed {seed}: discovery sets differ"
            for dp, df in zip(pruned.discoveries, full.discoveries):
                assert abs(dp.p_value - df.p_value) <= 1e-12
            assert pruned.delta_star == full.delta_star, f"seed {seed}: delta* differs"
            pruned_nodes_total += pruned.counters.nodes_pruned
            supports = [
                len({r.matrix_id for r in seed_neighborhood(ds, s, ACC1_EPS)})
                for s in enumerate_seeds(ds, 4)
            ]
            support_means.append(np.mean(supports))
        mean_support = float(np.mean(support_means))
        assert 0.3 * 10 <= mean_support <= 0.7 * 10, mean_support
        assert pruned_nodes_total > 0  # the equivalence actually exercised pruning


# ---------------------------------------------------------------------------
# 2. FET oracle: exhaustive over all margins with N <= 15


def test_acceptance_02_fet_oracle():
    with report("2 (FET exact-rational oracle, N <= 15)"):
        for n in range(1, 16):
            for n1 in range(n + 1):
                margins = ContingencyMargins(n, n1)
                for x in range(n + 1):
                    lo = max(0, x - (n - n1))
                    hi = min(x, n1)
                    for a in range(lo, hi + 1):
                        expected = oracle_two_sided(a, x, n, n1)
                        assert fet_pvalue_exact(a, x, margins) == expected
                        assert abs(fet_pvalue(a, x, margins) - float(expected)) <= 1e-12


# ---------------------------------------------------------------------------
# 3. paper-anchored margins (N=12, n1=5)


def test_acceptance_03_anchored_margins():
    with report("3 (margins (12, 5) anchors)"):
        margins = ContingencyMargins(12, 5)
        assert min_attainable_p(5, margins) == pytest.approx(1 / 792, abs=1e-15)
        assert min_attainable_p(5, margins) == pytest.approx(1.2626e-3, rel=1e-4)
        assert envelope_bound(12, margins) == pytest.approx(1 / 792, abs=1e-15)
        assert min_attainable_p(12, margins) == 1.0


# ---------------------------------------------------------------------------
# 4. FWER control on 200 null datasets


def test_acceptance_04_fwer_control():
    with report("4 (FWER <= 0.081 over 200 null runs)"):
        t0 = time.perf_counter()
        hits = 0
        for i in range(200):
            ds = gen_null(
                SynthConfig(
                    n_matrices=12, n_pos=5, min_length=8, max_length=14,
                    n_agents=3, step_scale=1.0, motif_length=4, plant_rate=0.0,
                    seed=1000 + i, bounds=(0.0, 10.0, 0.0, 10.0),
                )
            )
            res = mine(
                ds,
                MinerConfig(min_length=4, epsilon=10.0, permutations=200,
                            alpha=0.05, prng_seed=i),
            )
            if res.discoveries:
                hits += 1
        elapsed = time.perf_counter() - t0
        fraction = hits / 200.0
        assert fraction <= 0.081, f"empirical FWER {fraction}"
        assert elapsed < 1800.0, f"took {elapsed:.0f}s"


# ---------------------------------------------------------------------------
# 5. planted recovery


def _overlaps(d, t):
    return d.matrix_id == t.matrix_id and not (d.end < t.start or t.end < d.start)


def test_acceptance_05_planted_recovery():
    with report("5 (planted recovery >= 90% of 20 runs)"):
        eps = 1.5
        ok = 0
        for seed in range(20):
            ds, truth = gen_planted(
                SynthConfig(
                    n_matrices=12, n_pos=5, min_length=8, max_length=14,
                    n_agents=5, step_scale=2.0, motif_length=6,
                    motif_jitter=eps / 10.0, plant_rate=1.0, seed=seed,
                )
            )
            res = mine(
                ds,
                MinerConfig(min_length=4, epsilon=eps, permutations=1000,
                            alpha=0.05, prng_seed=seed),
            )
            pos_ids = {m.attack_id for m in ds if m.label == 1}
            if any(
                _overlaps(d, t)
                for d in res.discoveries if d.matrix_id in pos_ids
                for t in truth
            ):
                ok += 1
        assert ok >= 18, f"only {ok}/20 runs recovered the plant"


# ---------------------------------------------------------------------------
# 6. Hausdorff metric axioms


def test_acceptance_06_hausdorff_axioms():
    with report("6 (Hausdorff metric axioms, 1000 random sets)"):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            a = rng.normal(0, 3, size=(int(rng.integers(1, 9)), 2))
            b = rng.normal(0, 3, size=(int(rng.integers(1, 9)), 2))
            c = rng.normal(0, 3, size=(int(rng.integers(1, 9)), 2))
            dab = hausdorff(a, b)
            assert dab >= 0.0
            assert dab == hausdorff(b, a)  # symmetry, exact
            assert hausdorff(a, a[rng.permutation(len(a))]) == 0.0
            assert dab <= hausdorff(a, c) + hausdorff(c, b) + 1e-9


# ---------------------------------------------------------------------------
# 7. envelope monotonicity, exhaustively for N <= 30


def test_acceptance_07_envelope_monotone():
    with report("7 (envelope non-increasing, N <= 30)"):
        for n in range(1, 31):
            for n1 in range(n + 1):
                _, envelope = pvalue_tables(ContingencyMargins(n, n1))
                diffs = np.diff(envelope[1:])
                assert (diffs <= 0).all(), (n, n1)


# ---------------------------------------------------------------------------
# 8. labeling rules, exact


def test_acceptance_08_labeling_rules():
    with report("8 (labeling rule suite, exact)"):
        geom = CourtGeometry()
        stats = {
            "own": PlayerShotStats("own", Position.GUARD, 200, 0.41),
            "few": PlayerShotStats("few", Position.GUARD, 4, 0.99),
        }
        defaults = {Position.GUARD: 0.36}

        def point_at(meters):
            return Point2D(geom.hoop_center.x + meters / geom.unit_scale, geom.hoop_center.y)

        def event(point, dist, shooter="own", attempted=True):
            return ShotEvent("a", shooter, point, dist, attempted)

        # restricted effective at 0.5 ft
        assert label_attack(event(point_at(1.0), 0.5), stats, defaults, geom) == 1
        # restricted label independent of defender distance
        assert label_attack(event(point_at(1.0), 0.0), stats, defaults, geom) == \
            label_attack(event(point_at(1.0), 100.0), stats, defaults, geom)
        # mid-range effective iff defender >= 6 ft
        mid = point_at(6.5)
        assert classify_zone(mid, geom) is ShotZone.MID_RANGE
        assert label_attack(event(mid, 6.0), stats, defaults, geom) == 1
        assert label_attack(event(mid, 5.999), stats, defaults, geom) == -1
        # three-point requires wide open AND adjusted prob >= 0.35
        three = point_at(7.5)
        assert classify_zone(three, geom) is ShotZone.THREE_POINT
        assert label_attack(event(three, 6.0), stats, defaults, geom) == 1
        assert label_attack(event(three, 5.9), stats, defaults, geom) == -1
        far = point_at(12.0)  # adjusted 0.41 - 0.2*(12-7.239)/5.491 < 0.35
        assert label_attack(event(far, 8.0), stats, defaults, geom) == -1
        # adjustment: exactly 0.2 at half-court distance, 0 at the line
        arc = geom.three_point_arc_radius
        assert adjusted_three_point_prob(0.40, geom.half_court_distance, geom) == \
            pytest.approx(0.20, abs=1e-15)
        assert adjusted_three_point_prob(0.40, arc, geom) == 0.40
        # <10 attempts falls back to the position average
        assert three_point_prob("few", stats, defaults) == 0.36


# ---------------------------------------------------------------------------
# 9. determinism of CLI outputs, including --threads > 1


def _run_cli(*args):
    env = dict(os.environ)
    env["PYTHONPATH"] = SRC + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "trajmine", *args],
        capture_output=True, text=True, env=env,
    )


def test_acceptance_09_determinism(tmp_path):
    with report("9 (byte-identical synth/mine/render reruns)"):
        paths = {}
        for tag in ("x", "y"):
            d = tmp_path / tag
            d.mkdir()
            t, l, truth = d / "t.csv", d / "l.csv", d / "truth.csv"
            res = _run_cli(
                "synth", "--out-trajectories", str(t), "--out-labels", str(l),
                "--out-truth", str(truth), "--kind", "planted",
                "--jitter", "0.15", "--seed", "7",
            )
            assert res.returncode == 0, res.stderr
            out = d / "res.json"
            res = _run_cli(
                "mine", "--trajectories", str(t), "--labels", str(l),
                "--out", str(out), "--min-length", "4", "--epsilon", "1.5",
                "--permutations", "300", "--seed", "5", "--threads", "2",
            )
            assert res.returncode == 0, res.stderr
            svgs = d / "svgs"
            res = _run_cli(
                "render", "--trajectories", str(t), "--labels", str(l),
                "--results", str(out), "--out", str(svgs),
            )
            assert res.returncode == 0, res.stderr
            paths[tag] = (t, l, truth, out, svgs)
        tx, lx, trx, ox, sx = paths["x"]
        ty, ly, try_, oy, sy = paths["y"]
        assert tx.read_bytes() == ty.read_bytes()
        assert lx.read_bytes() == ly.read_bytes()
        assert trx.read_bytes() == try_.read_bytes()
        assert ox.read_bytes() == oy.read_bytes()
        names = sorted(p.name for p in sx.iterdir())
        assert names == sorted(p.name for p in sy.iterdir())
        for name in names:
            assert (sx / name).read_bytes() == (sy / name).read_bytes()


# ---------------------------------------------------------------------------
# 10. scale sanity: eps=4 strictly costlier than eps=1.5 on a fixed benchmark


def test_acceptance_10_scale_sanity():
    with report("10 (eps=4 costs strictly more than eps=1.5)"):
        ds = gen_null(
            SynthConfig(
                n_matrices=20, n_pos=10, min_length=25, max_length=35,
                n_agents=2, step_scale=0.5, motif_length=5, plant_rate=0.0,
                seed=123, bounds=(0.0, 5.5, 0.0, 5.5),
            )
        )
        measured = {}
        for eps in (1.5, 4.0):
            best = math.inf
            for _ in range(3):
                t0 = time.perf_counter()
                res = mine(
                    ds,
                    MinerConfig(min_length=5, epsilon=eps, permutations=200,
                                alpha=0.05, prng_seed=3),
                )
                best = min(best, time.perf_counter() - t0)
            measured[eps] = (res.counters.nodes_visited, best)
        nodes_small, time_small = measured[1.5]
        nodes_large, time_large = measured[4.0]
        assert nodes_large > nodes_small, measured
        assert time_large > time_small, measured
