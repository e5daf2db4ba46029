import random

import pytest

from conftest import random_relation
from relknot.boolterm import (
    Const,
    Join,
    Meet,
    Not,
    Var,
    bool_equiv,
    eval_rel,
    eval_sets,
    lattice_leq,
    parse_term,
    truth_table,
)
from relknot.errors import (
    ArgumentError,
    CapacityError,
    ParseError,
    UnknownElementError,
)
from relknot.relation import BinaryRelation

EX25 = BinaryRelation("abc", [[0, 1, 0], [1, 0, 1], [0, 0, 1]])


def test_parse_shapes():
    assert parse_term("(a|b)&c") == Meet(Join(Var("a"), Var("b")), Var("c"))
    assert parse_term("a") == Var("a")
    assert parse_term("!a|b&c") == Join(Not(Var("a")), Meet(Var("b"), Var("c")))
    assert parse_term("0") == Const(0)
    assert parse_term("a&b&c") == Meet(Meet(Var("a"), Var("b")), Var("c"))


def test_parse_errors_with_position():
    with pytest.raises(ParseError):
        parse_term("a&&b")
    with pytest.raises(ParseError):
        parse_term("(a|b")
    with pytest.raises(ParseError):
        parse_term("a b")
    with pytest.raises(ParseError):
        parse_term("")
    with pytest.raises(ParseError):
        parse_term("a | ?")


def test_print_round_trip():
    rng = random.Random(5)
    names = ["a", "b", "c", "d"]

    def random_term(depth):
        k = rng.randrange(6 if depth < 5 else 2)
        if k == 0:
            return Var(rng.choice(names))
        if k == 1:
            return Const(rng.randint(0, 1))
        if k == 2:
            return Not(random_term(depth + 1))
        if k in (3, 4):
            return Meet(random_term(depth + 1), random_term(depth + 1))
        return Join(random_term(depth + 1), random_term(depth + 1))

    for _ in range(300):
        t = random_term(0)
        assert parse_term(str(t)) == t


def test_eval_rel_example_2_5():
    assert eval_rel(EX25, "(a|b)&c", "(a|b)&c") == 0


def test_eval_rel_generators_pass_through():
    assert eval_rel(EX25, "b", "c") == 1
    for x in "abc":
        for y in "abc":
            assert eval_rel(EX25, x, y) == EX25.relate(x, y)


def test_eval_rel_constants():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randint(1, 5)
        r = random_relation(rng, [f"e{i}" for i in range(n)])
        assert eval_rel(r, "1", "0") == 1
        assert eval_rel(r, "0", "1") == 0


def test_eval_rel_unknown_variable():
    with pytest.raises(UnknownElementError):
        eval_rel(EX25, "z", "a")


def _random_lattice_term(rng, names, depth=0):
    k = rng.randrange(4 if depth < 4 else 1)
    if k == 0:
        return Var(rng.choice(names))
    if k == 1:
        return Meet(_random_lattice_term(rng, names, depth + 1),
                    _random_lattice_term(rng, names, depth + 1))
    if k == 2:
        return Join(_random_lattice_term(rng, names, depth + 1),
                    _random_lattice_term(rng, names, depth + 1))
    return Var(rng.choice(names))


def _random_term(rng, names, depth=0):
    k = rng.randrange(6 if depth < 4 else 2)
    if k == 0:
        return Var(rng.choice(names))
    if k == 1:
        return Const(rng.randint(0, 1))
    if k == 2:
        return Not(_random_term(rng, names, depth + 1))
    if k in (3, 4):
        return Meet(_random_term(rng, names, depth + 1),
                    _random_term(rng, names, depth + 1))
    return Join(_random_term(rng, names, depth + 1),
                _random_term(rng, names, depth + 1))


def _equivalent_variant(rng, t):
    """A randomly rewritten term with the same truth table."""
    choice = rng.randrange(5)
    if choice == 0:
        return Not(Not(t))
    if choice == 1:
        return Meet(t, t)
    if choice == 2:
        return Join(t, t)
    if choice == 3 and isinstance(t, Meet):
        return Meet(t.right, t.left)
    if choice == 4 and isinstance(t, Join):
        return Join(t.right, t.left)
    return Join(t, Meet(t, t))


def test_rewrite_invariance_lemma_2_4():
    # replacing either side by a Boolean-equivalent term never changes the bit
    rng = random.Random(42)
    cases = 0
    while cases < 250:
        n = rng.randint(1, 5)
        names = [f"e{i}" for i in range(n)]
        r = random_relation(rng, names)
        p = _random_term(rng, names)
        q = _random_term(rng, names)
        p2 = _equivalent_variant(rng, p)
        q2 = _equivalent_variant(rng, q)
        assert bool_equiv(p, p2) and bool_equiv(q, q2)
        assert eval_rel(r, q, p) == eval_rel(r, q2, p2)
        assert eval_rel(r, p, q) == eval_rel(r, p2, q2)
        cases += 1


def test_eval_sets_structural_identity():
    rng = random.Random(43)
    for _ in range(250):
        n = rng.randint(1, 5)
        names = [f"e{i}" for i in range(n)]
        r = random_relation(rng, names)
        t = _random_term(rng, names)
        f_sub = [x for x in names if rng.randint(0, 1)]
        lower = eval_sets(r, t, f_sub, "lower")
        assert set(lower) == {y for y in f_sub if eval_rel(r, t, y)}
        upper = eval_sets(r, t, names, "upper")
        assert set(upper) == {y for y in names if eval_rel(r, y, t)}


def test_eval_sets_spec_examples():
    # ((a|b))_(R,A) over the published table: union of row supports
    got = eval_sets(EX25, "a|b", ["a", "b", "c"], "lower")
    assert set(got) == {"a", "b", "c"}
    assert eval_sets(EX25, "0", ["a", "b"], "lower") == ()
    # structural identity on a named compound term
    rng = random.Random(44)
    for _ in range(50):
        names = ["a1", "a3", "a6"]
        r = random_relation(rng, names)
        f_sub = [x for x in names if rng.randint(0, 1)]
        whole = eval_sets(r, "(a1|a3)&a6", f_sub, "lower")
        parts = (
            set(eval_sets(r, "a1", f_sub, "lower"))
            | set(eval_sets(r, "a3", f_sub, "lower"))
        ) & set(eval_sets(r, "a6", f_sub, "lower"))
        assert set(whole) == parts


def test_eval_sets_upper_requires_all():
    with pytest.raises(ArgumentError):
        eval_sets(EX25, "a", ["a", "b"], "upper")


def test_lattice_leq_basic():
    assert lattice_leq("a&b", "a") == 1
    assert lattice_leq("a", "a|b") == 1
    assert lattice_leq("a", "b") == 0
    assert lattice_leq("a&(b|c)", "(a&b)|(a&c)") == 1
    assert lattice_leq("(a&b)|(a&c)", "a&(b|c)") == 1


def test_lattice_leq_rejects_negation():
    with pytest.raises(ArgumentError):
        lattice_leq("!a", "a")


def test_truth_table_capacity():
    big = None
    for i in range(25):
        v = Var(f"v{i}")
        big = v if big is None else Join(big, v)
    with pytest.raises(CapacityError):
        truth_table(big)


def test_lemma_2_8_lattice_order_gives_dominance():
    # p <= q implies p dominates q in the extended relation, sampled over terms
    rng = random.Random(45)
    checked = 0
    while checked < 200:
        n = rng.randint(1, 4)
        names = [f"e{i}" for i in range(n)]
        r = random_relation(rng, names)
        p = _random_lattice_term(rng, names)
        q = _random_lattice_term(rng, names)
        if not lattice_leq(p, q):
            continue
        for _ in range(6):
            c = _random_lattice_term(rng, names)
            if eval_rel(r, p, c):
                assert eval_rel(r, q, c)
            if eval_rel(r, c, p):
                assert eval_rel(r, c, q)
        checked += 1


def test_lemma_2_17_preserved_properties():
    rng = random.Random(46)
    reflexive_cases = transitive_cases = symmetric_cases = 0
    while min(reflexive_cases, transitive_cases, symmetric_cases) < 200:
        n = rng.randint(1, 4)
        names = [f"e{i}" for i in range(n)]
        r = random_relation(rng, names)
        if r.is_reflexive():
            # (i) joins of generators and negated generators stay reflexive
            ts = [Join(Var(rng.choice(names)), Var(rng.choice(names))) for _ in range(3)]
            ts.append(Not(Var(rng.choice(names))))
            for t in ts:
                assert eval_rel(r, t, t) == 1
            reflexive_cases += 1
        if r.is_transitive():
            # (ii) meets-only terms keep transitivity
            p = meet_of(rng, names)
            q = meet_of(rng, names)
            s = meet_of(rng, names)
            if eval_rel(r, p, q) and eval_rel(r, q, s):
                assert eval_rel(r, p, s) == 1
            transitive_cases += 1
        if r.is_symmetric():
            # (iii) symmetric on generators plus any single term
            t = _random_term(rng, names)
            for b in names:
                assert eval_rel(r, t, b) == eval_rel(r, b, t)
            # (iv) meets-only and joins-only sets stay symmetric
            p = meet_of(rng, names)
            q = meet_of(rng, names)
            assert eval_rel(r, p, q) == eval_rel(r, q, p)
            p = join_of(rng, names)
            q = join_of(rng, names)
            assert eval_rel(r, p, q) == eval_rel(r, q, p)
            symmetric_cases += 1


def meet_of(rng, names):
    k = rng.randint(1, 3)
    t = Var(rng.choice(names))
    for _ in range(k - 1):
        t = Meet(t, Var(rng.choice(names)))
    return t


def join_of(rng, names):
    k = rng.randint(1, 3)
    t = Var(rng.choice(names))
    for _ in range(k - 1):
        t = Join(t, Var(rng.choice(names)))
    return t


def test_lemma_2_13_kernel_isotonicity():
    # R1 subset of R2: extended bit can only grow, for lattice terms
    rng = random.Random(47)
    for _ in range(250):
        n = rng.randint(1, 4)
        names = [f"e{i}" for i in range(n)]
        r1 = random_relation(rng, names)
        m2 = [
            [b | (rng.randint(0, 1) & rng.randint(0, 1)) for b in row]
            for row in r1.matrix
        ]
        r2 = BinaryRelation(names, m2)
        assert r1.is_subset_of(r2)
        p = _random_lattice_term(rng, names)
        q = _random_lattice_term(rng, names)
        if eval_rel(r1, p, q):
            assert eval_rel(r2, p, q) == 1
