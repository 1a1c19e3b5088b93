import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfg import expr, ops
from lfg.errors import DomainViolation, ExprSyntaxError, UnknownColumn, UnknownOperation
from lfg.expr import Base, Binary, Unary
from helpers import make_dataset


@pytest.fixture()
def two_col():
    return make_dataset(
        ["f1", "f2"],
        np.array([[1.0, 3.0], [2.0, 4.0]]),
        [0, 1],
    )


class TestCanonicalNames:
    def test_base(self):
        assert Base("f3").canonical_name == "f3"

    def test_commutative_children_sorted(self):
        e = Binary("plus", Base("f2"), Base("f1"))
        assert e.canonical_name == "plus(f1,f2)"
        assert Binary("plus", Base("f1"), Base("f2")).canonical_name == "plus(f1,f2)"

    def test_noncommutative_order_kept(self):
        assert Binary("subtract", Base("f2"), Base("f1")).canonical_name == "subtract(f2,f1)"
        assert Binary("divide", Base("f2"), Base("f1")).canonical_name == "divide(f2,f1)"

    def test_nested(self):
        e = Unary("log", Binary("divide", Base("f1"), Base("f2")))
        assert e.canonical_name == "log(divide(f1,f2))"
        e = Binary("plus", Base("f1"), Unary("square", Base("f2")))
        assert e.canonical_name == "plus(f1,square(f2))"

    def test_depth(self):
        assert Base("f1").depth == 0
        assert Unary("square", Base("f1")).depth == 1
        e = Binary("plus", Unary("square", Base("f1")), Base("f2"))
        assert e.depth == 2

    def test_unknown_op_rejected(self):
        with pytest.raises(UnknownOperation):
            Unary("modulo", Base("f1"))
        with pytest.raises(ValueError):
            Unary("plus", Base("f1"))


class TestEvaluate:
    def test_base_identity(self, two_col):
        out = expr.evaluate(Base("f1"), two_col)
        assert np.array_equal(out, [1.0, 2.0])

    def test_plus(self, two_col):
        out = expr.evaluate(Binary("plus", Base("f1"), Base("f2")), two_col)
        assert np.array_equal(out, [4.0, 6.0])

    def test_sigmoid_of_product(self):
        d = make_dataset(
            ["f1", "f2"],
            np.array([[0.0, 5.0]] * 10),
            [0, 1] * 5,
        )
        e = Unary("sigmoid", Binary("multiply", Base("f1"), Base("f2")))
        out = expr.evaluate(e, d)
        assert out == pytest.approx([0.5] * 10)

    def test_unknown_column(self, two_col):
        with pytest.raises(UnknownColumn):
            expr.evaluate(Base("zzz"), two_col)

    def test_domain_violation_bubbles(self, two_col):
        d = make_dataset(["f1"], np.array([[-1.0]] * 4), [0, 1, 0, 1])
        with pytest.raises(DomainViolation):
            expr.evaluate(Unary("sqrt", Base("f1")), d)

    def test_cache_is_not_observable(self, two_col):
        e = Binary("multiply", Unary("square", Base("f1")), Base("f2"))
        cache = {}
        a = expr.evaluate(e, two_col, cache)
        b = expr.evaluate(e, two_col, cache)
        c = expr.evaluate(e, two_col)
        assert a is b
        assert np.array_equal(a, c)

    def test_manual_composition_oracle(self, rng):
        """Recompose sub-expressions by hand and compare bit for bit."""
        d = make_dataset(
            ["a", "b"], rng.uniform(0.5, 5.0, size=(50, 2)), rng.integers(0, 2, 50)
        )
        e = Binary(
            "divide",
            Unary("log", Base("a")),
            Binary("plus", Unary("sqrt", Base("b")), Base("a")),
        )
        got = expr.evaluate(e, d)
        want = np.log(d.column("a")) / (np.sqrt(d.column("b")) + d.column("a"))
        assert np.array_equal(got, want)


class TestParse:
    def test_round_trip_examples(self):
        for text in ("f1", "plus(f1,f2)", "log(divide(f1,f2))", "plus(f1,square(f2))"):
            assert expr.parse_name(text).canonical_name == text

    def test_parse_normalizes_commutative(self):
        assert expr.parse_name("plus(f2,f1)").canonical_name == "plus(f1,f2)"

    def test_errors(self):
        for bad in ("", "plus(f1", "plus(f1,f2,f3)", "log(f1,f2)", "f1)", "plus(,f1)"):
            with pytest.raises(ExprSyntaxError):
                expr.parse_name(bad)
        with pytest.raises(UnknownOperation):
            expr.parse_name("modulo(f1,f2)")


_columns = st.sampled_from(["f1", "f2", "x", "longish_name"])


def _exprs(depth):
    if depth == 0:
        return _columns.map(Base)
    sub = _exprs(depth - 1)
    unary = st.tuples(st.sampled_from(ops.UNARY_NAMES), sub).map(lambda t: Unary(*t))
    binary = st.tuples(st.sampled_from(ops.BINARY_NAMES), sub, sub).map(
        lambda t: Binary(t[0], t[1], t[2])
    )
    return st.one_of(_columns.map(Base), unary, binary)


@settings(max_examples=200, deadline=None)
@given(_exprs(3))
def test_parse_canonical_round_trip(e):
    parsed = expr.parse_name(e.canonical_name)
    assert parsed == e
    assert parsed.canonical_name == e.canonical_name


class TestDedupe:
    def test_keeps_first_occurrence(self):
        f1 = Base("f1")
        a = Binary("plus", Base("f1"), Base("f2"))
        b = Binary("plus", Base("f2"), Base("f1"))  # same canonical name
        assert expr.dedupe([f1, a, b]) == [f1, a]

    def test_empty(self):
        assert expr.dedupe([]) == []

    def test_triplicate(self):
        f1 = Base("f1")
        assert expr.dedupe([f1, f1, f1]) == [f1]


class TestLineage:
    def test_plus(self):
        lines = expr.lineage(Binary("plus", Base("f1"), Base("f2")))
        assert lines == ["f1 (base)", "f2 (base)", "plus(f1,f2) = f1 + f2"]

    def test_base_only(self):
        assert expr.lineage(Base("f1")) == ["f1 (base)"]

    def test_square_of_sum(self):
        lines = expr.lineage(Unary("square", Binary("plus", Base("f1"), Base("f2"))))
        assert lines[-1] == "square(plus(f1,f2)) = (f1+f2)^2"
        assert lines[0] == "f1 (base)"
        # one line per base column plus one per internal node
        assert len(lines) == 4

    def test_repeated_subtree_listed_once(self):
        half = Binary("plus", Base("f1"), Base("f2"))
        lines = expr.lineage(Binary("multiply", half, half))
        assert lines.count("plus(f1,f2) = f1 + f2") == 1


class TestFeatureSubset:
    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            expr.FeatureSubset((Base("f1"), Base("f1")))

    def test_with_changes(self):
        sub = expr.FeatureSubset((Base("f1"), Base("f2")))
        grown = sub.with_changes(add=[Binary("plus", Base("f1"), Base("f2"))])
        assert grown.names == ("f1", "f2", "plus(f1,f2)")
        shrunk = grown.with_changes(drop=["plus(f1,f2)"])
        assert shrunk.names == ("f1", "f2")

    def test_get_and_contains(self):
        sub = expr.FeatureSubset((Base("f1"),))
        assert "f1" in sub
        assert sub.get("f1") == Base("f1")
        with pytest.raises(KeyError):
            sub.get("f9")
