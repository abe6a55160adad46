"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import itertools
import math
import random
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from ciqp.cli import main
from ciqp.gen import SplitMix64, gen_general_delta, gen_interval, gen_network
from ciqp.ilp import solve_ilp
from ciqp.lp import LpProblem, check_optimality
from ciqp.matprops import is_totally_unimodular
from ciqp.model import Instance, SolveConfig
from ciqp.oracle import box_volume, enumerate_box, verify_eps
from ciqp.solver import Box, build_underestimator, solve

pytestmark = pytest.mark.acceptance

DATA = Path(__file__).parent / "data"
EPSILONS = (Fraction(1), Fraction(1, 2), Fraction(1, 10))
VOLUME_CAP = 10**5


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")


def ceil_sqrt(x):
    x = Fraction(x)
    c = -(-x.numerator // x.denominator)
    r = math.isqrt(c)
    return r if r * r == c else r + 1


def general_bound(k, n, delta, eps):
    return (3 + ceil_sqrt(k * ((2 * n * delta) ** 2 + 1 / eps))) ** k


def tu_bound(k, eps):
    return (3 + ceil_sqrt(k * (1 + 1 / eps))) ** k


def _draw(rng, lo, hi):
    return lo + rng.randint(0, hi - lo)


def _one_instance(i, rng):
    """Instance number i of the suite; families rotate, every fifth one has a wide box."""
    family = ("network", "interval", "general")[i % 3]
    wide = i % 5 == 4
    seed = rng.next_u64()
    if family == "network":
        arcs = _draw(rng, 1, 3) if wide else _draw(rng, 2, 8)
        nodes = _draw(rng, 2, arcs + 1)
        cap = _draw(rng, 12, 40) if wide else _draw(rng, 1, 3)
        k = min(arcs, 1 + i % 4 % 3)
        return gen_network(nodes, arcs, k, 6, seed, capacity=cap)
    if family == "interval":
        cols = _draw(rng, 1, 2) if wide else _draw(rng, 1, 8)
        bound = _draw(rng, 15, 60) if wide else _draw(rng, 1, 3)
        k = min(cols, 1 + i % 4 % 3)
        return gen_interval(_draw(rng, 1, 4), cols, k, 6, seed, bound=bound)
    n = _draw(rng, 1, 2) if wide else _draw(rng, 2, 6)
    bound = _draw(rng, 15, 40) if wide else _draw(rng, 1, 4)
    k = min(n, 1 + i % 4 % 3)
    return gen_general_delta(n, _draw(rng, 1, 4), k, _draw(rng, 1, 3), 6, seed, bound=bound)


def suite_instances(count=200, seed=20240601):
    rng = SplitMix64(seed)
    out = []
    while len(out) < count:
        inst = _one_instance(len(out), rng)
        if box_volume(inst.oracle_box) <= VOLUME_CAP:
            out.append(inst)
    return out


@pytest.fixture(scope="module")
def eps_runs():
    """Solve every suite instance at every epsilon in each applicable mode."""
    runs = []
    t0 = time.perf_counter()
    for inst in suite_instances():
        oracle = enumerate_box(inst, cap=VOLUME_CAP)
        modes = ["general"]
        if is_totally_unimodular(inst.W):
            modes.append("tu")
        for eps in EPSILONS:
            for mode in modes:
                rep = solve(inst, SolveConfig(epsilon=eps, mode=mode, delta_policy="compute"))
                verdict = None
                if rep.status == "eps_approx":
                    verdict = verify_eps(inst, rep.solution, eps, result=oracle)
                runs.append((inst, eps, mode, rep, verdict))
    return runs, time.perf_counter() - t0


def test_criterion_1_eps_guarantee(eps_runs, capsys):
    runs, seconds = eps_runs
    instances = {id(r[0]) for r in runs}
    bad = [(r[0].name, r[1], r[2]) for r in runs if r[4] is None or not r[4].passed]
    meshed = {id(r[0]) for r in runs if r[2] == "general" and r[3].stats.boxes_solved}
    families = {}
    for inst in suite_instances():
        families[inst.name.split("-")[0]] = families.get(inst.name.split("-")[0], 0) + 1
    ok = len(instances) == 200 and not bad
    report(capsys, 1, ok, f"{len(runs) - len(bad)}/{len(runs)} runs verified over "
           f"{len(instances)} instances {families}; mesh used on {len(meshed)}; {seconds:.1f}s")
    assert not bad, bad[:5]
    assert len(instances) == 200
    assert max(inst.num_vars for inst in suite_instances()) <= 8


def test_criterion_2_solve_count_bound(eps_runs, capsys):
    runs, _ = eps_runs
    violations = []
    for inst, eps, mode, rep, _ in runs:
        if mode == "general":
            used, cap = rep.stats.ilp_solves, general_bound(inst.k, inst.num_vars, rep.delta, eps)
        else:
            used, cap = rep.stats.lp_solves, tu_bound(inst.k, eps)
        if used > cap:
            violations.append((inst.name, eps, mode, used, cap))
    worst = max(runs, key=lambda r: r[3].stats.ilp_solves + r[3].stats.lp_solves)[3].stats
    report(capsys, 2, not violations, f"{len(violations)} violations in {len(runs)} runs; "
           f"largest run used {worst.ilp_solves} ILP / {worst.lp_solves} LP solves")
    assert not violations, violations[:5]


def test_criterion_3_underestimator_sandwich(capsys):
    rng = random.Random(7)
    violations = 0
    for _ in range(1000):
        k = rng.randint(1, 3)
        r = [Fraction(rng.randint(-60, 60), rng.randint(1, 6)) for _ in range(k)]
        s = [ri + Fraction(rng.randint(0, 60), rng.randint(1, 6)) for ri in r]
        q = [rng.randint(1, 9) for _ in range(k)]
        mu = build_underestimator(Box(tuple(range(k)), tuple(r), tuple(s), (0,) * k), q)
        x = [ri + (si - ri) * Fraction(rng.randint(0, 97), 97) for ri, si in zip(r, s)]
        qx = sum(-qi * xi * xi for qi, xi in zip(q, x))
        gap = Fraction(1, 4) * sum(qi * (si - ri) ** 2 for qi, ri, si in zip(q, r, s))
        if not mu(x) <= qx <= mu(x) + gap:
            violations += 1
        for corner in itertools.product(*zip(r, s)):
            if mu(corner) != sum(-qi * c * c for qi, c in zip(q, corner)):
                violations += 1
    report(capsys, 3, violations == 0, f"{violations} violations in 1000 exact triples")
    assert violations == 0


def test_criterion_4_tu_integrality(capsys):
    rng = SplitMix64(99)
    vertices = violations = 0

    def hook(kind, problem, out):
        nonlocal vertices, violations
        if kind == "lp" and out.status == "optimal":
            vertices += 1
            if any(Fraction(v).denominator != 1 for v in out.x) or not check_optimality(problem, out):
                violations += 1

    for i in range(100):
        seed = rng.next_u64()
        if i % 2:
            arcs = _draw(rng, 2, 8)
            inst = gen_network(_draw(rng, 2, arcs + 1), arcs, min(arcs, _draw(rng, 1, 3)), 6, seed,
                               capacity=_draw(rng, 1, 9))
        else:
            inst = gen_interval(_draw(rng, 1, 5), _draw(rng, 3, 8), _draw(rng, 1, 3), 6, seed,
                                bound=_draw(rng, 1, 9))
        eps = EPSILONS[i % 3]
        rep = solve(inst, SolveConfig(epsilon=eps, mode="tu"), on_subsolve=hook)
        assert rep.status == "eps_approx"
    report(capsys, 4, violations == 0, f"{vertices} LP vertices over 100 instances, "
           f"{violations} fractional or uncertified")
    assert violations == 0 and vertices > 0


def _enumerate_ilp(p):
    lo, hi = p.bounds()
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    pts = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    A = np.array(p.A, dtype=np.int64).reshape(len(p.A), len(lo))
    ok = np.all(pts @ A.T <= np.array(p.b, dtype=np.int64), axis=1) if len(p.A) else None
    feas = pts if ok is None else pts[ok]
    if not len(feas):
        return None
    vals = [sum(Fraction(c) * int(v) for c, v in zip(p.c, row)) for row in feas]
    return min(vals) if p.sense == "min" else max(vals)


def test_criterion_5_subsolver_oracles(capsys):
    rng = random.Random(11)
    mismatches = certified = uncertified = 0
    volumes = []

    def on_lp(problem, out):
        nonlocal certified, uncertified
        if out.status == "optimal":
            if check_optimality(problem, out):
                certified += 1
            else:
                uncertified += 1

    for _ in range(100):
        n = rng.randint(1, 5)
        while True:
            lo = [rng.randint(-6, 3) for _ in range(n)]
            hi = [a + rng.randint(0, 12) for a in lo]
            if math.prod(b - a + 1 for a, b in zip(lo, hi)) <= VOLUME_CAP:
                break
        volumes.append(math.prod(b - a + 1 for a, b in zip(lo, hi)))
        A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(rng.randint(0, 4))]
        b = [rng.randint(-6, 12) for _ in A]
        c = [Fraction(rng.randint(-9, 9), rng.choice([1, 1, 2, 3])) for _ in range(n)]
        p = LpProblem(A, b, c, rng.choice(["min", "max"]), lo, hi)
        out = solve_ilp(p, on_lp=on_lp)
        expected = _enumerate_ilp(p)
        got = out.value if out.status == "optimal" else None
        if got != expected or (out.status == "infeasible") != (expected is None):
            mismatches += 1
        elif got is not None and not (all(sum(a * v for a, v in zip(r, out.x)) <= bi
                                          for r, bi in zip(A, b))):
            mismatches += 1
    ok = mismatches == 0 and uncertified == 0
    report(capsys, 5, ok, f"{mismatches} ILP mismatches in 100 problems (max volume "
           f"{max(volumes)}); {certified} LP optima certified, {uncertified} failed")
    assert ok


def test_criterion_6_status_exit_codes(capsys):
    codes = {}
    for name in ("infeasible", "unbounded_concave", "unbounded_linear", "micro"):
        codes[name] = main(["solve", str(DATA / f"{name}.json"), "--epsilon", "1/2"])
    capsys.readouterr()
    want = {"infeasible": 10, "unbounded_concave": 11, "unbounded_linear": 11, "micro": 0}
    report(capsys, 6, codes == want, f"exit codes {codes}")
    assert codes == want


def test_criterion_7_micro_instance(capsys):
    inst = Instance.build([[-1], [1]], [0, 3], [1], [0])
    f = {x: inst.objective((x,)) for x in range(4)}
    f_star, f_max = min(f.values()), max(f.values())
    admissible = [x for x in f if f[x] <= f_star + Fraction(1, 2) * (f_max - f_star)]
    rep = solve(inst, SolveConfig(epsilon=Fraction(1, 2), mode="general"))
    auto = solve(inst, SolveConfig(epsilon=Fraction(1, 2)))
    ok = (admissible == [3] and rep.solution == (3,) and rep.objective == -9
          and rep.stats.ilp_solves <= 6 and auto.solution == (3,))
    report(capsys, 7, ok, f"x={rep.solution}, objective {rep.objective}, "
           f"{rep.stats.ilp_solves} ILP solves (auto mode: {auto.mode}, x={auto.solution})")
    assert ok


def test_criterion_8_determinism(tmp_path, capsys):
    inst_file = tmp_path / "gen.json"
    main(["generate", "general", "--seed", "123", "--n", "3", "--k", "2", "--out", str(inst_file)])
    commands = [
        ["generate", "network", "--seed", "18446744073709551615", "--k", "2"],
        ["generate", "interval", "--seed", "42", "--k", "3", "--cols", "5"],
        ["generate", "general", "--seed", "7", "--k", "2", "--target-delta", "3"],
        ["solve", str(inst_file), "--epsilon", "1/10", "--mode", "general", "--stats"],
        ["solve", str(DATA / "micro.json"), "--epsilon", "0.5", "--stats"],
        ["verify", str(inst_file), "--candidate", "[0,0,0]", "--epsilon", "1/2"],
        ["analyze", str(inst_file)],
    ]
    differing = []
    for j, argv in enumerate(commands):
        outputs = []
        for rep in range(3):
            out = tmp_path / f"c{j}_{rep}.out"
            main(argv + ["--out", str(out)])
            outputs.append(out.read_bytes())
        if len(set(outputs)) != 1 or not outputs[0]:
            differing.append(argv[:2])
    capsys.readouterr()
    report(capsys, 8, not differing, f"{len(commands) - len(differing)}/{len(commands)} "
           f"commands byte-identical across 3 runs")
    assert not differing
