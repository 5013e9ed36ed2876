"""Unit tests for the expression language: parsing, printing, evaluation,
exact derivatives."""
import math
import random

import pytest

from acmslab.exprs import (
    Bin,
    Call,
    EvalError,
    Neg,
    Num,
    ParseError,
    Pow,
    Var,
    add,
    call,
    differentiate,
    div,
    evaluate,
    free_variables,
    mul,
    neg,
    num,
    parse,
    pow_,
    sub,
    to_text,
    var,
)


class TestParsing:
    def test_precedence(self):
        e = parse("1 + 2 * x1")
        assert e == Bin("+", Num(1.0), Bin("*", Num(2.0), Var(1)))

    def test_left_associative(self):
        e = parse("x1 - x2 - x3")
        assert e == Bin("-", Bin("-", Var(1), Var(2)), Var(3))

    def test_parens_override(self):
        e = parse("(1 + x1) * 2")
        assert e == Bin("*", Bin("+", Num(1.0), Var(1)), Num(2.0))

    def test_power_binds_tighter_than_unary_minus(self):
        e = parse("-x1^2")
        assert e == Neg(Pow(Var(1), 2))

    def test_negative_exponent(self):
        assert parse("x1^-2") == Pow(Var(1), -2)

    def test_unary_minus_folds_into_literal(self):
        assert parse("-2") == Num(-2.0)
        assert parse("-2 * x1") == Bin("*", Num(-2.0), Var(1))

    def test_function_call(self):
        assert parse("sin(x2)") == Call("sin", Var(2))

    def test_scientific_notation(self):
        assert parse("2.5e-3") == Num(0.0025)
        assert parse(".5") == Num(0.5)

    def test_variable_indices(self):
        assert parse("x12") == Var(12)


class TestParseErrors:
    def test_dangling_operator(self):
        with pytest.raises(ParseError) as exc:
            parse("x1 +")
        assert exc.value.message == "unexpected end of input"
        assert (exc.value.line, exc.value.column) == (1, 5)

    def test_unclosed_paren_reports_opener(self):
        with pytest.raises(ParseError) as exc:
            parse("(x1 + x2")
        assert exc.value.message == "unclosed parenthesis"
        assert (exc.value.line, exc.value.column) == (1, 1)

    def test_bare_open_paren(self):
        with pytest.raises(ParseError) as exc:
            parse("(")
        assert exc.value.message == "unclosed parenthesis"

    def test_unknown_name(self):
        with pytest.raises(ParseError) as exc:
            parse("2 + y")
        assert "unknown variable name" in exc.value.message
        assert exc.value.column == 5

    def test_zero_index_rejected(self):
        with pytest.raises(ParseError) as exc:
            parse("x0")
        assert "start at x1" in exc.value.message

    def test_symbolic_exponent_rejected(self):
        with pytest.raises(ParseError) as exc:
            parse("x1 ^ x2")
        assert exc.value.message == "exponent must be an integer literal"

    def test_fractional_exponent_rejected(self):
        with pytest.raises(ParseError):
            parse("x1^2.5")

    def test_chained_power_rejected(self):
        # powers do not associate; the second ^ is left dangling
        with pytest.raises(ParseError) as exc:
            parse("x1^2^3")
        assert "trailing input" in exc.value.message

    def test_trailing_input(self):
        with pytest.raises(ParseError) as exc:
            parse("x1 x2")
        assert "trailing input" in exc.value.message
        assert exc.value.column == 4

    def test_malformed_number(self):
        with pytest.raises(ParseError) as exc:
            parse("1..2")
        assert "malformed number" in exc.value.message

    def test_unexpected_character(self):
        with pytest.raises(ParseError) as exc:
            parse("x1 $ x2")
        assert "unexpected character" in exc.value.message

    def test_line_tracking(self):
        with pytest.raises(ParseError) as exc:
            parse("1 +\n  bogus")
        assert exc.value.line == 2
        assert exc.value.column == 3


class TestPrinting:
    def test_integers_print_bare(self):
        assert to_text(parse("2.0 * x1")) == "2 * x1"

    def test_fraction_prints_exactly(self):
        assert to_text(Num(0.0025)) == "0.0025"

    def test_right_operand_parenthesized(self):
        assert to_text(parse("x1 - (x2 - x3)")) == "x1 - (x2 - x3)"
        assert to_text(parse("x1 / (x2 / x3)")) == "x1 / (x2 / x3)"

    def test_redundant_parens_dropped(self):
        assert to_text(parse("(x1 * x2) + x3")) == "x1 * x2 + x3"

    def test_negative_literal_as_power_base(self):
        assert to_text(Pow(Num(-2.0), 3)) == "(-2)^3"

    @pytest.mark.parametrize("text", [
        "x1 + x2 * x3",
        "-2 * x1",
        "x1 - -2",
        "-x1 * x2",
        "sin(x1) * cos(x2)",
        "x1^-3 / (1 + x2^2)",
        "sqrt(1 + x1^2)",
        "exp(-x1) - 0.5",
        "(x1 + x2)^4",
    ])
    def test_round_trip_is_identity(self, text):
        e = parse(text)
        assert parse(to_text(e)) == e


class TestSmartConstructors:
    def test_constant_folding(self):
        assert add(num(1), num(2)) == Num(3.0)
        assert mul(num(3), num(4)) == Num(12.0)
        assert sub(num(1), num(1)) == Num(0.0)
        assert div(num(1), num(4)) == Num(0.25)

    def test_identities(self):
        x = var(1)
        assert add(x, num(0)) == x
        assert mul(x, num(1)) == x
        assert mul(num(0), x) == Num(0.0)
        assert div(x, num(1)) == x
        assert sub(num(0), x) == Neg(x)

    def test_double_negation(self):
        x = var(2)
        assert neg(neg(x)) == x

    def test_pow_special_exponents(self):
        x = var(1)
        assert pow_(x, 0) == Num(1.0)
        assert pow_(x, 1) == x
        assert pow_(num(2), 10) == Num(1024.0)

    def test_var_index_validated(self):
        with pytest.raises(ValueError):
            var(0)

    def test_unknown_function_rejected(self):
        with pytest.raises(ValueError):
            call("tan", var(1))


class TestEvaluation:
    def test_basic(self):
        assert evaluate(parse("x1^2 + 2 * x2"), [3.0, 4.0]) == pytest.approx(17.0)

    def test_functions(self):
        got = evaluate(parse("sin(x1)^2 + cos(x1)^2"), [0.7])
        assert got == pytest.approx(1.0)
        assert evaluate(parse("sqrt(x1)"), [9.0]) == pytest.approx(3.0)
        assert evaluate(parse("exp(0)"), []) == pytest.approx(1.0)

    def test_unbound_variable(self):
        with pytest.raises(EvalError) as exc:
            evaluate(parse("x3"), [1.0, 2.0])
        assert "unbound variable x3" in exc.value.message

    def test_division_by_zero_names_subexpression(self):
        with pytest.raises(EvalError) as exc:
            evaluate(parse("1 + x1 / x2"), [1.0, 0.0])
        assert exc.value.message == "division by zero"
        assert exc.value.where == "x1 / x2"

    def test_sqrt_of_negative(self):
        with pytest.raises(EvalError) as exc:
            evaluate(parse("sqrt(x1)"), [-4.0])
        assert "square root of negative" in exc.value.message

    def test_zero_to_negative_power(self):
        with pytest.raises(EvalError):
            evaluate(parse("x1^-3"), [0.0])

    def test_overflow_is_eval_error(self):
        with pytest.raises(EvalError):
            evaluate(parse("exp(x1)"), [1e6])


class TestDifferentiate:
    def test_power_rule_frozen(self):
        assert to_text(differentiate(parse("x1^2"), 1)) == "2 * x1"

    def test_sin_rule_frozen(self):
        assert to_text(differentiate(parse("sin(x1)"), 1)) == "cos(x1)"

    def test_sqrt_rule_frozen(self):
        assert to_text(differentiate(parse("sqrt(x1)"), 1)) == "1 / (2 * sqrt(x1))"

    def test_other_variable_is_constant(self):
        assert differentiate(parse("sin(x2)"), 1) == Num(0.0)

    def test_derivative_round_trips(self):
        d = differentiate(parse("x1 * exp(x1^2)"), 1)
        assert parse(to_text(d)) == d

    def test_product_rule_value(self):
        e = parse("x1 * sin(x1)")
        d = differentiate(e, 1)
        t = 0.8
        want = math.sin(t) + t * math.cos(t)
        assert evaluate(d, [t]) == pytest.approx(want)


def _random_expr(rng, depth):
    """Small expression sampler for derivative cross-checks. Arguments are
    kept positive-safe for sqrt by squaring."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return var(rng.randint(1, 2))
        return num(round(rng.uniform(0.5, 2.5), 3))
    pick = rng.randint(0, 5)
    if pick == 0:
        return add(_random_expr(rng, depth - 1), _random_expr(rng, depth - 1))
    if pick == 1:
        return sub(_random_expr(rng, depth - 1), _random_expr(rng, depth - 1))
    if pick == 2:
        return mul(_random_expr(rng, depth - 1), _random_expr(rng, depth - 1))
    if pick == 3:
        return pow_(_random_expr(rng, depth - 1), rng.randint(2, 3))
    if pick == 4:
        return call(rng.choice(["sin", "cos", "exp"]), _random_expr(rng, depth - 1))
    return call("sqrt", add(num(1), pow_(_random_expr(rng, depth - 1), 2)))


class TestDerivativeAgainstFiniteDifference:
    def test_random_expressions(self):
        rng = random.Random(7)
        h = 1e-6
        checked = 0
        for _ in range(60):
            e = _random_expr(rng, 3)
            if not free_variables(e):
                continue
            x = [rng.uniform(0.4, 1.2), rng.uniform(0.4, 1.2)]
            for idx in sorted(free_variables(e)):
                d = evaluate(differentiate(e, idx), x)
                up = list(x)
                dn = list(x)
                up[idx - 1] += h
                dn[idx - 1] -= h
                fd = (evaluate(e, up) - evaluate(e, dn)) / (2 * h)
                assert d == pytest.approx(fd, abs=1e-4 * (1.0 + abs(d)))
                checked += 1
        assert checked > 40

    def test_canonical_form_stable_under_reparse(self):
        rng = random.Random(8)
        for _ in range(40):
            e = _random_expr(rng, 3)
            text = to_text(e)
            again = parse(text)
            assert to_text(again) == text


def test_free_variables():
    assert free_variables(parse("x1 * sin(x3) + 2")) == {1, 3}
    assert free_variables(parse("4.5")) == set()
