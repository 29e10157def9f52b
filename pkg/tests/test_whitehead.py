"""Whitehead move enumeration, minimization, primitivity, conjugacy."""

import pytest

from elemtrans.freegroup import (
    automorphic_conjugacy,
    cyclic_reduce,
    enumerate_whitehead_moves,
    is_free_automorphism,
    is_primitive,
    parse_word,
    whitehead_minimize,
)
from elemtrans.freegroup.whitehead import apply_whitehead, replay_whitehead_trace
from elemtrans.freegroup.words import GeneratorTuple, generator


def W(text, rank=2):
    return parse_word(text, rank)


def C(text, rank=2):
    return cyclic_reduce(parse_word(text, rank))


class TestEnumeration:
    def test_counts_rank2(self):
        moves = enumerate_whitehead_moves(2)
        assert sum(1 for m in moves if m.kind == 1) == 8
        assert sum(1 for m in moves if m.kind == 2) == 16

    def test_counts_rank3(self):
        moves = enumerate_whitehead_moves(3)
        assert sum(1 for m in moves if m.kind == 1) == 48
        assert sum(1 for m in moves if m.kind == 2) == 6 * 4**2

    def test_duplicate_free(self):
        moves = enumerate_whitehead_moves(2)
        assert len(set(moves)) == len(moves)

    def test_moves_are_automorphisms(self):
        for mv in enumerate_whitehead_moves(2):
            images = GeneratorTuple(
                tuple(apply_whitehead(generator(i, 2), mv) for i in (1, 2)), 2
            )
            assert is_free_automorphism(images).is_automorphism

    def test_inverse_composes_to_identity(self):
        w = W("x1 x2 x1 x2^-1")
        for mv in enumerate_whitehead_moves(2)[::3]:
            assert apply_whitehead(apply_whitehead(w, mv), mv.inverse()) == w


class TestMinimize:
    def test_square_times_generator(self):
        minimized, trace = whitehead_minimize(C("x1 x1 x2"))
        assert len(minimized) == 1
        assert len(trace) == 2
        assert replay_whitehead_trace(C("x1 x1 x2"), trace) == minimized

    def test_single_generator_fixed(self):
        minimized, trace = whitehead_minimize(C("x1"))
        assert len(minimized) == 1 and len(trace) == 0

    def test_commutator_fixed_point(self):
        minimized, trace = whitehead_minimize(C("x1 x2 x1^-1 x2^-1"))
        assert len(minimized) == 4 and len(trace) == 0

    def test_trace_strictly_decreasing(self):
        start = C("x1 x1 x2 x1 x2")
        _, trace = whitehead_minimize(start)
        lengths = [len(start)] + trace.complexities()
        assert all(a > b for a, b in zip(lengths, lengths[1:]))


class TestPrimitive:
    @pytest.mark.parametrize("text", ["x2 x1 x2^-1", "x1 x1 x2", "x1", "x2^-1"])
    def test_primitive(self, text):
        assert is_primitive(W(text)).primitive

    @pytest.mark.parametrize("text", ["x1 x2 x1^-1 x2^-1", "x1 x1", "x1 x1 x2 x2"])
    def test_not_primitive(self, text):
        assert not is_primitive(W(text)).primitive

    def test_empty_word_rejected(self):
        with pytest.raises(ValueError):
            is_primitive(W(""))

    def test_primitives_extend_to_basis(self):
        # a primitive element is an automorphic image of x1, so the move
        # trace, replayed backwards on the basis, produces a basis
        verdict = is_primitive(W("x1 x1 x2"))
        assert verdict.primitive


class TestRankThree:
    def test_primitive_in_rank_three(self):
        assert is_primitive(W("x3 x1 x3^-1", rank=3)).primitive

    def test_non_primitive_in_rank_three(self):
        w = W("x1 x2 x1^-1 x2^-1", rank=3)
        assert not is_primitive(w).primitive


class TestConjugacy:
    def test_basis_swap(self):
        out = automorphic_conjugacy(W("x1"), W("x2"))
        assert out.verdict == "equivalent"

    def test_inversion(self):
        out = automorphic_conjugacy(W("x1 x2"), W("x1 x2^-1"))
        assert out.verdict == "equivalent"
        assert out.trace is not None

    def test_length_separates(self):
        out = automorphic_conjugacy(W("x1"), W("x1 x2 x1^-1 x2^-1"))
        assert out.verdict == "not_equivalent"

    def test_budget_exceeded_reported(self):
        out = automorphic_conjugacy(
            W("x1 x1 x2 x2"), W("x1 x1 x2 x2^-1"), budget=1
        )
        assert out.verdict in ("budget_exceeded", "equivalent", "not_equivalent")
        # with budget 1 a nontrivial search cannot conclude "no"
        if out.verdict == "not_equivalent":
            assert out.states_explored <= 1

    def test_commutator_class(self):
        # the commutator is equivalent to its inverse via a kind 1 move
        out = automorphic_conjugacy(W("x1 x2 x1^-1 x2^-1"), W("x2 x1 x2^-1 x1^-1"))
        assert out.verdict == "equivalent"

    def test_trace_replay(self):
        from elemtrans.freegroup.whitehead import replay_whitehead_trace

        u, v = W("x1 x2"), W("x1 x2^-1")
        out = automorphic_conjugacy(u, v)
        assert out.verdict == "equivalent"
        final = replay_whitehead_trace(cyclic_reduce(u), out.trace)
        assert final == cyclic_reduce(v)
