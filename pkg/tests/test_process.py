import pytest
from hypothesis import given, settings, strategies as st

from congruence_oracle import (
    alpha_key, congruence_key, count_actions, enumerate_universe,
)
from fusioncalc.process import (
    NIL, Act, Nu, Par, ProcessError, canonical, free_names, parse_process,
    process_str, struct_eq, substitute,
)
from fusioncalc.subst import finite_subst, remap_subst


def test_parse_basic_forms():
    assert parse_process("1") == NIL
    assert parse_process("0!()") == Act(0, "up", (), NIL)
    assert parse_process("0?(1).1!()") == \
        Act(0, "down", (1,), Act(1, "up", (), NIL))
    assert parse_process("new 2. 2!() | 2?()") == \
        Nu(2, Par(Act(2, "up", (), NIL), Act(2, "down", (), NIL)))
    assert parse_process("(new 2. 2!()) | 0?()") == \
        Par(Nu(2, Act(2, "up", (), NIL)), Act(0, "down", (), NIL))


def test_parse_rejects_garbage():
    for text in ["", "0!(", "new . 1", "0!() |", "2!!()", "0?(1,1)"]:
        with pytest.raises((ProcessError, ValueError)):
            parse_process(text)


def test_free_names():
    assert free_names(parse_process("0!(1).1!().2?()")) == {0, 2}
    assert free_names(parse_process("new 3. 3!(0)")) == set()
    assert free_names(parse_process("new 3. 0!(3)")) == {0}


def test_substitute_renames_free_only():
    p = parse_process("0!().new 0. 0?()")
    q = substitute(p, finite_subst({0: 7}))
    assert struct_eq(q, parse_process("7!().new 0. 0?()"))


def test_substitute_avoids_capture():
    p = parse_process("new 1. 1!().0!()")
    q = substitute(p, finite_subst({0: 1}))
    assert struct_eq(q, parse_process("new 9. 9!().1!()"))


def test_substitute_word_remap():
    p = parse_process("0!() | 1?().2!()")
    q = substitute(p, remap_subst([((), (1,))]))
    assert q == parse_process("1!() | 3?().5!()")


def test_struct_eq_laws():
    pairs = [
        ("(1!() | 2?()) | 3!()", "3!() | (2?() | 1!())"),
        ("0!() | 1", "0!()"),
        ("new 5. 1!()", "1!()"),
        ("new 4. 4!().4?(9)", "new 7. 7!().7?(0)"),
        ("new 0.(0!() | 1?())", "1?() | new 0. 0!()"),
        ("new 3. new 4. (3!() | 4?())", "new 4. new 3. (4!() | 3?())"),
        ("new 0 1. (0!().1!() | 1!().0!())",
         "new 5 6. (6!().5!() | 5!().6!())"),
    ]
    for left, right in pairs:
        assert struct_eq(parse_process(left), parse_process(right)), \
            f"{left} vs {right}"


def test_struct_eq_distinguishes():
    pairs = [
        ("0!()", "0?()"),
        ("0!().1!()", "1!().0!()"),
        ("new 0. 0!()", "1!()"),
        ("0!(1).1!()", "0!(1).2!()"),
        ("0!() | 0!()", "0!()"),
    ]
    for left, right in pairs:
        assert not struct_eq(parse_process(left), parse_process(right))


def test_printer_parser_roundtrip_examples():
    for text in ["1", "0!()", "0?(1,2).(1!() | 2!())",
                 "new 1. 1!() | (new 0. 0?().1?() | 0!())",
                 "2?(0).(new 1. 1!() | 0!(3).1?())"]:
        p = parse_process(text)
        assert parse_process(process_str(p)) == p


def _processes(max_depth=3):
    names = st.integers(0, 4)
    return st.recursive(
        st.just(NIL) | st.builds(
            Act, names, st.sampled_from(["up", "down"]),
            st.sampled_from([(), (3,), (3, 4)]), st.just(NIL)),
        lambda inner: st.builds(Par, inner, inner)
        | st.builds(Nu, names, inner)
        | st.builds(Act, names, st.sampled_from(["up", "down"]),
                    st.sampled_from([(), (3,)]), inner),
        max_leaves=max_depth,
    )


@given(_processes())
@settings(max_examples=60, deadline=None)
def test_canonical_idempotent(p):
    c = canonical(p)
    assert canonical(c) == c


@given(_processes())
@settings(max_examples=60, deadline=None)
def test_canonical_preserves_free_names(p):
    assert free_names(canonical(p)) == free_names(p)


@given(_processes())
@settings(max_examples=60, deadline=None)
def test_canonical_roundtrips_through_text(p):
    c = canonical(p)
    assert parse_process(process_str(c)) == c


@given(_processes(), _processes())
@settings(max_examples=40, deadline=None)
def test_par_commutes_and_associates(p, q):
    assert struct_eq(Par(p, q), Par(q, p))
    assert struct_eq(Par(Par(p, q), NIL), Par(p, q))


def test_oracle_agreement_small_universe():
    universe = enumerate_universe(max_actions=2, names=range(3))
    partition_canon = {}
    partition_oracle = {}
    for p in universe:
        partition_canon.setdefault(alpha_key(canonical(p)), set()).add(
            alpha_key(p))
        partition_oracle.setdefault(congruence_key(p), set()).add(
            alpha_key(p))
    assert set(map(frozenset, partition_canon.values())) == \
        set(map(frozenset, partition_oracle.values()))
