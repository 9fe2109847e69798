import itertools
import json

import numpy as np
import pytest

import oracles
from hemikit.algebra import (
    FiniteAlgebra, Homomorphism, find_center, identity, load, relabel, subalgebra,
    validate, validate_homomorphism, with_center,
)
from hemikit.axioms import ClassId
from hemikit.catalog import EnumerationSpec, enumerate_algebras, enumerate_kleene
from hemikit.classes import check_class, is_member
from hemikit.errors import (
    IndexOutOfRange, InvalidAlgebra, MissingNegation, MultipleCenters, NotALattice,
    NotClosed, SizeMismatch, WrongBounds,
)


def chain3_dict(**overrides):
    d = {"size": 3,
         "meet": [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
         "join": [[0, 1, 2], [1, 1, 2], [2, 2, 2]],
         "imp": [[2, 1, 2], [0, 2, 0], [0, 1, 2]],
         "bot": 0, "top": 2, "names": ["0", "a", "1"]}
    d.update(overrides)
    return d


def hlattices(max_size):
    for n in range(1, max_size + 1):
        yield from enumerate_algebras(EnumerationSpec(ClassId.HIL, n, up_to_iso=True))


def khil(max_size):
    for n in range(1, max_size + 1):
        yield from enumerate_algebras(EnumerationSpec(ClassId.KHIL_QUASI, n, up_to_iso=True))


def test_validate_accepts_fixture(entries):
    alg = validate(chain3_dict())
    assert alg == entries["example-2.4"].algebra
    assert alg.le(0, 1) and alg.le(1, 2) and not alg.le(2, 1)
    assert alg.index("a") == 1 and alg.index(1) == 1


def test_round_trip_through_json(entries, tmp_path):
    for e in entries.values():
        path = tmp_path / f"{e.key}.json"
        path.write_text(e.algebra.to_json())
        again = load(path)
        assert again == e.algebra
        assert again.names == e.algebra.names


def test_out_of_range_entry():
    d = chain3_dict()
    d["imp"] = [[2, 1, 3], [0, 2, 0], [0, 1, 2]]
    with pytest.raises(IndexOutOfRange):
        validate(d)


def test_wrong_shape():
    with pytest.raises(IndexOutOfRange):
        validate(chain3_dict(imp=[[2, 1], [0, 2]]))


def test_not_commutative():
    d = chain3_dict()
    d["meet"] = [[0, 0, 0], [1, 1, 1], [0, 1, 2]]
    with pytest.raises(NotALattice) as info:
        validate(d)
    assert info.value.details["law"] == "meet commutative"


def test_absorption_failure():
    # meet of a chain paired with a join that is not its dual
    d = chain3_dict(join=[[0, 2, 2], [2, 1, 2], [2, 2, 2]])
    with pytest.raises(NotALattice):
        validate(d)


def test_wrong_bounds():
    with pytest.raises(WrongBounds):
        validate(chain3_dict(bot=1))
    with pytest.raises(WrongBounds):
        validate(chain3_dict(top=1))


def test_unknown_and_missing_fields():
    with pytest.raises(InvalidAlgebra):
        validate(chain3_dict(colour="red"))
    d = chain3_dict()
    del d["imp"]
    with pytest.raises(InvalidAlgebra):
        validate(d)
    with pytest.raises(InvalidAlgebra):
        validate([1, 2, 3])


def test_center_must_be_fixed():
    with pytest.raises(InvalidAlgebra):
        validate(chain3_dict(neg=[2, 1, 0], center=0))
    assert validate(chain3_dict(neg=[2, 1, 0], center=1)).center == 1


def test_tables_are_read_only(entries):
    alg = entries["example-2.4"].algebra
    with pytest.raises(ValueError):
        alg.imp[0, 0] = 1


def test_find_center(entries):
    assert find_center(entries["example-3.4"].algebra) == \
        entries["example-3.4"].algebra.index("(0,0)")
    assert find_center(entries["centerless-u"].algebra) is None
    assert find_center(entries["boolean2"].algebra) is None
    with pytest.raises(MissingNegation):
        find_center(entries["example-2.4"].algebra)
    ident = entries["boolean2"].algebra.replace(neg=[0, 1])
    with pytest.raises(MultipleCenters):
        find_center(ident)
    assert with_center(entries["example-3.4"].algebra).center == 0


def test_identity_and_relabel(entries):
    for e in entries.values():
        alg = e.algebra
        assert validate_homomorphism(identity(alg)).passed
        perm = list(reversed(range(alg.size)))
        moved = relabel(alg, perm)
        validate(moved)
        h = Homomorphism(alg, moved, perm)
        assert validate_homomorphism(h).passed
        assert h.injective and h.surjective
        assert h.then(h.inverse()).map == tuple(range(alg.size))


def test_homomorphism_failure_names_operation(entries):
    ex = entries["example-2.4"].algebra
    # swapping 0 and 1 breaks the bounds first
    rep = validate_homomorphism(Homomorphism(ex, ex, [2, 1, 0]))
    assert not rep.passed
    assert {f.axiom for f in rep.failures} >= {"bot", "top", "meet"}
    with pytest.raises(SizeMismatch):
        validate_homomorphism(Homomorphism(ex, ex, [0, 1]))


def test_homomorphisms_agree_with_oracle(entries):
    small = list(hlattices(3))
    for A in small[:20]:
        for B in small[:20]:
            found = set(oracles.homomorphisms(A, B))
            for f in itertools.product(range(B.size), repeat=A.size):
                assert validate_homomorphism(Homomorphism(A, B, f)).passed == (f in found)


def test_subalgebra(entries):
    k = entries["example-3.4"].algebra
    keep = [k.index("(0,1)"), k.index("(0,0)"), k.index("(1,0)")]
    sub, inc = subalgebra(k, keep)
    assert sub.size == 3 and sub.center == 1
    assert validate_homomorphism(inc).passed
    with pytest.raises(NotClosed):
        subalgebra(k, [k.index("(0,1)"), k.index("(a,0)"), k.index("(1,0)")])


def test_order_is_dual_under_kleene_negation():
    for n in range(1, 6):
        for alg in enumerate_kleene(n):
            ng = alg.neg
            leq = alg.leq
            assert (leq == leq[np.ix_(ng, ng)].T).all()
            assert (ng[ng] == np.arange(n)).all()


# ----------------------------------------------------------------------
# elementary facts about h-lattices and hemi-Nelson algebras

def test_hil_oracle_agrees_with_checker():
    for n in range(1, 4):
        for lat in {a.replace(imp=a.meet) for a in hlattices(n) if a.size == n}:
            for imp in oracles.all_tables(n):
                alg = lat.replace(imp=imp)
                assert is_member(alg, ClassId.HIL) == oracles.is_hil(alg)


def test_hlattice_implication_facts():
    for A in hlattices(4):
        i, m, top = A.imp, A.meet, A.top
        leq = A.leq
        for a, b in itertools.product(range(A.size), repeat=2):
            if i[a, b] == top:
                assert leq[a, b]
            assert (i[a, b] == top and i[b, a] == top) == (a == b)
            iff = m[i[a, b], i[b, a]]
            assert m[a, iff] == m[b, iff]


def test_khil_elementary_facts(entries):
    algs = list(khil(5)) + [entries["ck-fail-7"].algebra, entries["example-3.4"].algebra]
    for T in algs:
        i, m, j, ng, top = T.imp, T.meet, T.join, T.neg, T.top
        leq = T.leq
        for x in range(T.size):
            assert leq[i[top, x], x]
        for x, y in itertools.product(range(T.size), repeat=2):
            if i[x, y] == top:
                assert x == m[x, j[ng[x], y]]
                if i[ng[y], ng[x]] == top:
                    assert leq[x, y]


def test_kleene_top_condition():
    for n in range(1, 6):
        for T in enumerate_kleene(n):
            for x, z in itertools.product(range(n), repeat=2):
                neg_z = T.meet[z, T.neg[z]]
                assert (T.join[x, neg_z] == T.top) == (x == T.top)


def test_class_report_lists_every_failing_axiom(entries):
    rep = check_class(entries["example-2.4"].algebra, ClassId.SRL)
    assert rep.failed_axioms == ["R1", "R2", "R6"]
    assert check_class(entries["example-2.4"].algebra, ClassId.SRL,
                       first_only=True).failed_axioms == ["R1"]
