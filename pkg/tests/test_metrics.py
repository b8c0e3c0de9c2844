import itertools
from fractions import Fraction as F

import pytest

from fpgraev.catalog import rho_metrics, three_valued_metrics
from fpgraev.metrics import (
    NegativeEntry,
    NotBoundedByOne,
    NotOpen,
    PointSetMismatch,
    PreconditionViolation,
    EmptyFamily,
    QuasiPseudometric,
    TriangleViolation,
    ZeroDiagonalViolation,
    cap,
    check_axioms,
    check_usc,
    discrete_metric,
    extend_dstar,
    from_function,
    joiner_dij,
    max_combine,
    rho_from_open_set,
    validate,
    zero_metric,
)
from fpgraev.topology import all_topologies, discrete, indiscrete, sierpinski
from fpgraev.words import E, Letter

HALF = F(1, 2)


def L(name, sign=1):
    return E if name == "e" else Letter(name, sign)


def test_validate_two_point_discrete():
    d = validate(["a", "b"], [[0, 1], [1, 0]])
    assert d("a", "b") == d("b", "a") == 1
    assert d.bounded


def test_validate_triangle_violation():
    with pytest.raises(TriangleViolation) as info:
        validate(["a", "b", "c"], {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 3})
    assert info.value.triple == ("a", "b", "c")


def test_validate_reports_every_violation():
    errs = check_axioms(["a", "b"], [[1, -1], [0, 0]])
    kinds = {type(e) for e in errs}
    assert ZeroDiagonalViolation in kinds and NegativeEntry in kinds


def test_validate_rejects_floats():
    with pytest.raises((TypeError, ValueError)):
        validate(["a", "b"], [[0, 0.5], [0, 0]])


def test_sierpinski_rho_is_valid(sierp):
    d = rho_from_open_set({"a"}, sierp)
    assert (d("a", "b"), d("b", "a"), d("a", "a"), d("b", "b")) == (1, 0, 0, 0)


@pytest.mark.parametrize("U", [set(), {"a", "b"}])
def test_rho_trivial_sets_give_zero(sierp, U):
    assert rho_from_open_set(U, sierp) == zero_metric(["a", "b"])


def test_rho_requires_open(sierp):
    with pytest.raises(NotOpen):
        rho_from_open_set({"b"}, sierp)


def test_dstar_examples():
    d = validate(["a", "b"], {("a", "b"): HALF, ("b", "a"): 1})
    ds = extend_dstar(d)
    a, b, ai, bi = L("a"), L("b"), L("a", -1), L("b", -1)
    assert ds(a, b) == HALF
    assert ds(a, bi) == 2
    assert ds(bi, ai) == HALF
    assert ds(a, E) == 1 and ds(E, ai) == 1
    assert ds(ai, ai) == 0


def test_dstar_requires_bound():
    d = validate(["a", "b"], [[0, 2], [0, 0]])
    with pytest.raises(NotBoundedByOne):
        extend_dstar(d)
    assert extend_dstar(cap(d))(L("a"), L("b")) == 1


def _dstar_oracle(d, x, y):
    """Case table written out independently of the library."""
    if x == y:
        return F(0)

    def de(p, q):
        if p == q:
            return F(0)
        if p.sign == 1 and q.sign == 1:
            return d(p.base, q.base)
        return F(1)

    pos = lambda z: z.sign >= 0  # noqa: E731
    neg = lambda z: z.sign <= 0  # noqa: E731
    if pos(x) and pos(y):
        return de(x, y)
    if neg(x) and neg(y):
        return de(y.inverse(), x.inverse())
    return F(2)


@pytest.mark.parametrize("d", three_valued_metrics(["a", "b"]) + three_valued_metrics(["a", "b", "c"])[::7])
def test_dstar_table_and_validity(d):
    ds = extend_dstar(d)
    for x, y in itertools.product(ds.letters, repeat=2):
        assert ds(x, y) == _dstar_oracle(d, x, y)
    assert not check_axioms([str(x) for x in ds.letters], ds.as_metric().matrix)
    pos = [L(p) for p in d.points] + [E]
    for x, y in itertools.product(pos, repeat=2):
        assert ds(x.inverse(), y.inverse()) == ds.d_e(y, x)
    for x, y in itertools.product(d.points, repeat=2):
        assert ds(L(x), L(y)) == d(x, y)


SMALL_TOPOLOGIES = [t for k in range(1, 5) for t in all_topologies("abcd"[:k])]


def test_small_topology_count():
    assert len(SMALL_TOPOLOGIES) == 1 + 4 + 29 + 355


@pytest.mark.slow
def test_rho_family_valid_usc_and_closed_under_max():
    for t in SMALL_TOPOLOGIES:
        rhos = [rho_from_open_set(U, t) for U in t.open_sets()]
        for r in rhos:
            assert not check_axioms(r.points, r.matrix)
            assert check_usc(r, t)[0]
        for r1, r2 in itertools.combinations_with_replacement(rhos, 2):
            m = max_combine([r1, r2])
            assert not check_axioms(m.points, m.matrix)
            assert check_usc(m, t)[0]


def test_rho_family_small_spaces_quick():
    for t in SMALL_TOPOLOGIES[:34]:
        for U in t.open_sets():
            r = rho_from_open_set(U, t)
            assert not check_axioms(r.points, r.matrix) and check_usc(r, t)[0]


def _t1_cases():
    for k in (2, 3, 4):
        t = discrete("abcd"[:k])
        for xi, xj in itertools.permutations(t.points, 2):
            for U in t.open_sets():
                if xi in U and xj not in U:
                    yield t, xi, xj, U


def test_joiner_dij_characterizations():
    count = 0
    for t, xi, xj, U in _t1_cases():
        d = joiner_dij(t, xi, xj, U)
        count += 1
        assert not check_axioms(d.points, d.matrix)
        assert check_usc(d, t)[0]
        for x in t.points:
            assert (d(xi, x) == 0) == (x in U)
            assert (d(x, xj) == 0) == (x == xj)
        assert d(xi, xj) == 1
    assert count > 50


@pytest.mark.parametrize(
    "args, msg",
    [
        (("a", "a", {"a"}), "coincide"),
        (("a", "b", {"b"}), "not in U_i"),
        (("a", "b", {"a", "b"}), "lies in U_i"),
    ],
)
def test_joiner_dij_preconditions(args, msg):
    with pytest.raises(PreconditionViolation, match=msg):
        joiner_dij(discrete("ab"), *args)


def test_joiner_dij_needs_t1(sierp):
    with pytest.raises(PreconditionViolation, match="T1"):
        joiner_dij(sierp, "a", "b", {"a"})


def test_max_combine_examples(sierp, rho_a):
    assert max_combine([rho_a]) == rho_a
    assert max_combine([rho_a, zero_metric(["a", "b"])]) == rho_a
    t = discrete("ab")
    m = max_combine([joiner_dij(t, "a", "b", {"a"}), joiner_dij(t, "b", "a", {"b"})])
    assert m("a", "b") == m("b", "a") == 1
    with pytest.raises(EmptyFamily):
        max_combine([])
    with pytest.raises(PointSetMismatch):
        max_combine([rho_a, zero_metric(["a", "c"])])


def test_usc_examples(sierp, rho_a):
    assert check_usc(rho_a, sierp) == (True, None)
    sigma = validate(["a", "b"], {("b", "a"): 1, ("a", "b"): 0})
    ok, wit = check_usc(sigma, sierp)
    assert not ok and wit.center == "b" and wit.ball == frozenset({"b"})
    # the ball at any radius in (0, 1] is the same set
    assert sigma.ball("b", HALF) == wit.ball
    for d in three_valued_metrics(["a", "b", "c"])[:40]:
        assert check_usc(d, discrete("abc"))[0]


def test_usc_oracle_agrees_on_small_spaces():
    """Ball enumeration at every rational k/4 in (0, 3] against the threshold method."""
    radii = [F(k, 4) for k in range(1, 13)]
    for t in list(all_topologies("ab")) + list(all_topologies("abc"))[::3]:
        for d in three_valued_metrics(t.points)[::5]:
            oracle = all(t.is_open(d.ball(x, r)) for x in t.points for r in radii)
            assert check_usc(d, t)[0] == oracle


def test_rho_metrics_catalog_distinct():
    ms = rho_metrics(("a", "b", "c"))
    assert len(ms) == 7  # all proper nonempty subsets plus the zero metric
    assert len({d.matrix for _, d in ms}) == len(ms)


def test_metric_is_hashable_and_printable():
    d = discrete_metric(["a", "b"], HALF)
    assert {d: 1}[discrete_metric(["a", "b"], HALF)] == 1
    assert "a b = 1/2" in str(d)
    assert from_function(["a"], lambda x, y: 0) == zero_metric(["a"])
    assert isinstance(d, QuasiPseudometric)


def test_indiscrete_only_zero_metrics_usc():
    t = indiscrete("ab")
    assert check_usc(zero_metric("ab"), t)[0]
    assert not check_usc(discrete_metric("ab"), t)[0]
