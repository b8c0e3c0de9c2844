"""Acceptance criteria, one test each, compared exactly.

Each test records a one-line detail; the terminal summary prints
``ACCEPTANCE <k> PASS|FAIL <title> | <detail>`` for every criterion.
"""

import collections
import io
import itertools
import os
import random
import time
from fractions import Fraction as F

import pytest

from fpgraev.catalog import bench_metric, metric_battery, three_valued_metrics
from fpgraev.cli import random_reduced, run
from fpgraev.graev import (
    GraevExtension,
    check_prenorm_axioms,
    group_element,
    prenorm_bruteforce_many,
    search_space,
)
from fpgraev.joiner import equiv_conds_battery, joiner_sweep, x_power_check
from fpgraev.metrics import (
    MetricError,
    check_usc,
    extend_dstar,
    max_combine,
    rho_from_open_set,
    validate,
)
from fpgraev.schemes import (
    Crossing,
    Representation,
    enumerate_schemes,
    gamma,
    is_nested,
    nested_normalize,
    validate_scheme,
)
from fpgraev.topology import (
    all_topologies,
    check_reznichenko,
    check_rez_duality,
    discrete,
    graev_family_topology_on_inverse,
    indiscrete,
    inverse_topology,
    sierpinski,
    topology_from_distance,
    validate_topology,
)
from fpgraev.words import CapExceeded, E, Letter, Word, enumerate_FPn, reduce, support


def detail(request, text):
    request.node.user_properties.append(("detail", text))
    print(text)


def small_topologies(max_points=4):
    for k in range(1, max_points + 1):
        yield from all_topologies("abcd"[:k])


# -- 1 ------------------------------------------------------------------------


@pytest.mark.acceptance(1, "DP equals brute force on all words of length <= 6 over 3 points")
def test_oracle_equivalence(request):
    t0 = time.perf_counter()
    battery = metric_battery(("a", "b", "c"))
    assert len(battery) >= 20
    exts = [GraevExtension(d, name) for name, d in battery]
    words = enumerate_FPn(["a", "b", "c"], 6)
    assert len(words) == 1 + 6 * sum(5**j for j in range(6))
    brute = prenorm_bruteforce_many(exts, words, cap=6)
    mismatches = [
        (ext.name, str(g))
        for ext, row in zip(exts, brute)
        for g, v in zip(words, row)
        if ext.prenorm_dp(g) != v
    ]
    # the batched brute force against the literal representation/scheme search
    rng = random.Random(0)
    sample = rng.sample([k for k, g in enumerate(words) if len(g) >= 5], 24)
    literal_bad = []
    for m in (0, 7, len(exts) - 1):
        for k in sample:
            g = words[k]
            lit = min(gamma(exts[m].dstar, rep, s) for rep, s in search_space(g))
            if lit != brute[m][k]:
                literal_bad.append((exts[m].name, str(g)))
    elapsed = time.perf_counter() - t0
    detail(
        request,
        f"{len(exts)} metrics x {len(words)} words, {len(mismatches)} mismatches; "
        f"literal search on {3 * len(sample)} cases, {len(literal_bad)} mismatches; {elapsed:.1f}s",
    )
    assert not mismatches, mismatches[:5]
    assert not literal_bad, literal_bad[:5]
    assert elapsed < 300


# -- 2 ------------------------------------------------------------------------


def _test_metrics():
    out = [d for _, d in metric_battery(("a", "b"), samples=0)]
    out += [d for _, d in metric_battery(("a", "b", "c"))]
    out += three_valued_metrics(("a", "b", "c"))
    seen, uniq = set(), []
    for d in out:
        if (d.points, d.matrix) not in seen:
            seen.add((d.points, d.matrix))
            uniq.append(d)
    return uniq


@pytest.mark.acceptance(2, "extension property d^(s,t) = d*(s,t) on the extended alphabet")
def test_extension_property(request):
    metrics = _test_metrics()
    bad = []
    pairs = 0
    for d in metrics:
        ext = GraevExtension(d)
        for s, t in itertools.product(ext.dstar.letters, repeat=2):
            pairs += 1
            if ext.distance(group_element(s), group_element(t)) != ext.dstar(s, t):
                bad.append((d, s, t))
    detail(request, f"{len(metrics)} metrics, {pairs} letter pairs, {len(bad)} mismatches")
    assert not bad


# -- 3 ------------------------------------------------------------------------


@pytest.mark.acceptance(3, "invariant quasi-prenorm axioms on FP_2 and two-sided invariance on tuples")
def test_prenorm_axioms(request):
    battery = metric_battery(("a", "b"), samples=0)
    sample = enumerate_FPn(["a", "b"], 2)
    failures = []
    checks = 0
    for name, d in battery:
        rep = check_prenorm_axioms(GraevExtension(d, name), sample, tuple_len=3)
        checks += len(rep.checks)
        failures += [c.line() for c in rep.failures()]
    detail(request, f"{len(battery)} metrics, {len(sample)} words, {checks} checks, {len(failures)} failed")
    assert not failures, failures[:5]


# -- 4 ------------------------------------------------------------------------


def _involutions(size):
    def rec(free):
        if not free:
            yield {}
            return
        i = free[0]
        for j in free[1:]:
            for m in rec([k for k in free if k not in (i, j)]):
                yield {i: j, j: i, **m}

    for m in rec(list(range(1, size + 1))):
        yield [m[i] for i in range(1, size + 1)]


@pytest.mark.acceptance(4, "Catalan scheme counts; stack validator equals pairwise oracle")
def test_scheme_counts(request):
    counts = [len(enumerate_schemes(n)) for n in range(1, 7)]
    disagreements = 0
    total = 0
    for n in range(1, 5):
        for images in _involutions(2 * n):
            total += 1
            pairs = [(i, j) for i, j in enumerate(images, 1) if i < j]
            crossing = any(i < k < j < l for i, j in pairs for k, l in pairs)
            try:
                validate_scheme(n, images)
                accepted = True
            except Crossing:
                accepted = False
            disagreements += accepted == crossing
    detail(request, f"counts {counts}; {total} involutions, {disagreements} disagreements")
    assert counts == [1, 2, 5, 14, 42, 132]
    assert disagreements == 0


# -- 5 ------------------------------------------------------------------------


def _cost_terms(xs, mate):
    """Multiset of the non-zero terms d*(x_i^-1, x_phi(i)) as letter pairs."""
    c = collections.Counter()
    for i, j in enumerate(mate):
        a, b = xs[i].inverse(), xs[j]
        if a != b:
            c[a, b] += 1
    return c


@pytest.mark.acceptance(5, "nested normalization keeps target, support and cost for 2n <= 8")
def test_nested_normalization(request):
    # symbolic: positions as free generators, so one check per scheme covers every word
    symbolic = 0
    for n in range(1, 5):
        xs = tuple(Letter(f"p{i}", 1) for i in range(2 * n))
        for s in enumerate_schemes(n):
            out, phi = nested_normalize(Representation(Word(xs)), s)
            assert is_nested(phi)
            assert reduce(out.word) == reduce(Word(xs))
            assert support(out.word) == support(Word(xs))
            assert _cost_terms(out.word.letters, phi.mate) == _cost_terms(xs, s.mate)
            symbolic += 1

    # concrete: exhaustive over X~ for 2 points up to 2n = 6 and 1 point at 2n = 8,
    # a seeded sample over 2 points at 2n = 8
    def alphabet(points):
        return [Letter(p, s) for p in points for s in (1, -1)] + [E]

    def int_tables(points):
        # 4 * d* as integers: every battery value is a multiple of 1/2
        out = []
        for _, d in metric_battery(points, samples=0):
            ds = extend_dstar(d)
            table = {(x, y): int(4 * ds(x, y)) for x in ds.letters for y in ds.letters}
            assert all(4 * ds(x, y) == v for (x, y), v in table.items())
            out.append((ds, table))
        return out

    def cost(table, xs, mate):
        return sum(table[xs[i].inverse(), xs[j]] for i, j in enumerate(mate))

    metrics2, metrics1 = int_tables(("a", "b")), int_tables(("a",))
    cases = []
    for n in (1, 2, 3):
        cases.append((itertools.product(alphabet("ab"), repeat=2 * n), n, metrics2))
    cases.append((itertools.product(alphabet("a"), repeat=8), 4, metrics1))
    rng = random.Random(5)
    letters2 = alphabet("ab")
    sample8 = (tuple(rng.choice(letters2) for _ in range(8)) for _ in range(4000))
    cases.append((sample8, 4, metrics2))
    concrete = 0
    bad = []
    for words, n, metrics in cases:
        schemes = enumerate_schemes(n)
        for word in words:
            rep = Representation(Word(word))
            for s in schemes:
                concrete += 1
                out, phi = nested_normalize(rep, s)
                xs, ys = rep.word.letters, out.word.letters
                ok = (
                    is_nested(phi)
                    and out.target == rep.target
                    and support(out.word) == support(rep.word)
                    and all(cost(tb, ys, phi.mate) == cost(tb, xs, s.mate) for _, tb in metrics)
                )
                if not ok:
                    bad.append((word, str(s)))
                if concrete % 997 == 0:
                    # the integer cost is 8 * gamma
                    ds, tb = metrics[concrete % len(metrics)]
                    assert cost(tb, ys, phi.mate) == 8 * gamma(ds, out, phi)
    detail(request, f"{symbolic} schemes symbolically, {concrete} concrete pairs, {len(bad)} failures")
    assert not bad, bad[:3]


# -- 6 ------------------------------------------------------------------------


def _sampled_metrics(points, count, seed):
    rng = random.Random(seed)
    pairs = [(x, y) for x in points for y in points if x != y]
    out = []
    while len(out) < count:
        table = {p: rng.choice((0, F(1, 2), 1)) for p in pairs}
        try:
            out.append(validate(points, table))
        except MetricError:
            pass
    return out


@pytest.mark.acceptance(6, "d^-balls restricted to X generate the topology generated by d")
def test_topology_restriction(request):
    pools = {k: _sampled_metrics("abcd"[:k], 60, seed=k) for k in range(1, 5)}
    spaces = checked = 0
    bad = []
    for t in small_topologies():
        spaces += 1
        rhos = [rho_from_open_set(U, t) for U in t.open_sets()]
        candidates = rhos + [max_combine([r1, r2]) for r1, r2 in itertools.combinations(rhos, 2)]
        candidates += pools[len(t.points)]
        for d in candidates:
            if not check_usc(d, t)[0]:
                continue
            checked += 1
            ext = GraevExtension(d)
            gen = {p: Letter(p, 1) for p in t.points}
            dhat = lambda x, y: ext.distance(group_element(gen[x]), group_element(gen[y]))  # noqa: E731
            if topology_from_distance(t.points, dhat).opens != topology_from_distance(t.points, d).opens:
                bad.append((t.label(), str(d)))
    detail(request, f"{spaces} spaces, {checked} usc metrics, {len(bad)} mismatches")
    assert not bad, bad[:3]


# -- 7 ------------------------------------------------------------------------


@pytest.mark.acceptance(7, "T_A suite on all topologies on at most 4 points")
def test_inverse_topology_suite(request):
    t0 = time.perf_counter()
    spaces = 0
    bad = []
    for t in small_topologies():
        spaces += 1
        inv = inverse_topology(t).topology
        try:
            validate_topology(inv.points, inv.open_sets())
        except ValueError as err:
            bad.append((t.label(), f"invalid: {err}"))
        for rep in (check_rez_duality(t), check_reznichenko(t)):
            bad += [(t.label(), c.line()) for c in rep.failures()]
        if not (t.is_T1() == inv.is_discrete() == t.is_discrete()):
            bad.append((t.label(), "T1 / discreteness mismatch"))
    elapsed = time.perf_counter() - t0
    detail(request, f"{spaces} spaces, {len(bad)} failures, {elapsed:.2f}s")
    assert spaces == 1 + 4 + 29 + 355
    assert not bad, bad[:3]
    assert elapsed < 60


# -- 8 ------------------------------------------------------------------------


@pytest.mark.acceptance(8, "Graev-family topology on X^-1 is inside T_A (equality reported)")
def test_family_vs_inverse_topology(request):
    tested = included = equal = skipped = 0
    not_equal = []
    for t in small_topologies():
        try:
            cmp = graev_family_topology_on_inverse(t, n_family_cap=1 << 10)
        except CapExceeded:
            skipped += 1
            continue
        tested += 1
        included += cmp.included
        equal += cmp.equal
        if not cmp.equal:
            not_equal.append(t.label())
    named = [sierpinski(), indiscrete("ab"), indiscrete("abc")] + [discrete("abc"[:k]) for k in (1, 2, 3)]
    soft = {t.label(): graev_family_topology_on_inverse(t).equal for t in named}
    detail(
        request,
        f"{tested} spaces ({skipped} over the family cap): inclusion {included}/{tested}, "
        f"equality {equal}/{tested}; named spaces equal: "
        + ",".join(f"{k}={'yes' if v else 'no'}" for k, v in soft.items()),
    )
    assert included == tested  # hard gate; equality is only reported


# -- 9 ------------------------------------------------------------------------


@pytest.mark.acceptance(9, "joiner verification on discrete spaces, words up to length 3")
def test_joiner_verification(request):
    t0 = time.perf_counter()
    jobs = min(8, os.cpu_count() or 1)
    total = 0
    failures = []
    for k in (1, 2, 3):
        rep = joiner_sweep(discrete("abc"[:k]), max_len=3, jobs=jobs)
        total += len(rep.checks)
        failures += [c.line() for c in rep.failures()]
    elapsed = time.perf_counter() - t0
    detail(request, f"{total} checks (verdicts and singleton traces), {len(failures)} failed, {elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed < 600


# -- 10 -----------------------------------------------------------------------


@pytest.mark.acceptance(10, "equivalent-conditions battery and the X^n check")
def test_equiv_conditions(request):
    rows = []
    for t in [discrete("abc"[:k]) for k in (1, 2, 3)]:
        res = equiv_conds_battery(t)
        rows.append((t.label(), all(res.values.values())))
    for t in (sierpinski(), indiscrete("ab"), indiscrete("abc")):
        res = equiv_conds_battery(t)
        rows.append((t.label(), not any(res.values.values())))
    xp = []
    for k in (1, 2, 3):
        for n in (1, 2):
            xp.append((f"discrete{k}:n={n}", x_power_check(discrete("abc"[:k]), n).ok))
    bad = [name for name, ok in rows + xp if not ok]
    detail(request, f"{len(rows)} spaces, {len(xp)} X^n checks, failing: {','.join(bad) or 'none'}")
    assert not bad


# -- 11 -----------------------------------------------------------------------


@pytest.mark.acceptance(11, "interval recurrence on a length-40 word over 5 points under 1 s")
def test_performance(request, tmp_path):
    d = bench_metric(5)
    g = random_reduced(d.points, 40, random.Random(0))
    assert len(g) == 40
    ext = GraevExtension(d)
    t0 = time.perf_counter()
    value = ext.prenorm_dp(g)
    elapsed = time.perf_counter() - t0
    out = io.StringIO()
    assert run(["bench", "--lengths", "40", "--repeat", "1"], out) == 0
    row = out.getvalue().split()
    detail(request, f"N = {value} in {elapsed * 1000:.2f} ms; bench row {' '.join(row)}")
    assert row[0] == "40" and F(row[2]) == value
    assert elapsed < 1.0
