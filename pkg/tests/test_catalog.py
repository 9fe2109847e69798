import itertools
import logging

import numpy as np
import pytest

import oracles
from hemikit.axioms import ClassId, axiom_set
from hemikit.catalog import (
    ALIASES, HIL_CAP, NEG_CAP, PROPERTIES, EnumerationSpec, catalog,
    enumerate_algebras, enumerate_kleene, enumerate_lattices, search_counterexample,
    size_cap,
)
from hemikit.classes import check_class, is_member
from hemikit.errors import CapExceeded, UnknownClass, UnknownKey, UnknownProperty
from hemikit.terms import check_sentence_naive


def test_every_entry_verifies(entries):
    assert set(entries) >= {"example-2.4", "example-3.4", "remark-kleene-3chain",
                            "boolean4-hil", "ck-fail-7", "centerless-u",
                            "open-not-h-filter"}
    for e in entries.values():
        assert e.verify() == []
        d = e.to_dict()
        assert d["key"] == e.key and d["algebra"]["size"] == e.algebra.size


def test_lookup_and_aliases():
    assert catalog("example-2.4.json").key == "example-2.4"
    for alias, key in ALIASES.items():
        assert catalog(alias).key == key
    with pytest.raises(UnknownKey):
        catalog("example-9.9")


def test_fixture_shapes(entries):
    assert entries["ck-fail-7"].algebra.size == 7
    assert entries["centerless-u"].algebra.size == 2
    assert list(entries["example-3.4"].algebra.names) == \
        ["(0,0)", "(0,a)", "(0,1)", "(a,0)", "(1,0)"]


@pytest.mark.parametrize("n, distributive, count", [
    (1, True, 1), (2, True, 1), (3, True, 1), (4, True, 2), (5, True, 3), (6, True, 5),
    (4, False, 2), (5, False, 5), (6, False, 15),
])
def test_lattice_counts(n, distributive, count):
    assert len(enumerate_lattices(n, distributive)) == count


def test_kleene_lattices_are_kleene():
    for n in range(1, 6):
        for K in enumerate_kleene(n):
            for s in axiom_set(ClassId.KLEENE).all_sentences():
                assert check_sentence_naive(s, K).passed


def _labeled(cls, n):
    out = {}
    for alg in enumerate_algebras(EnumerationSpec(cls, n)):
        base = alg.replace(imp=np.zeros((n, n), dtype=np.int64))
        out.setdefault(base, set()).add(tuple(alg.imp.ravel().tolist()))
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hil_enumeration_is_complete(n):
    got = _labeled(ClassId.HIL, n)
    lattices = enumerate_lattices(n)
    assert set(got) <= set(lattices)
    for lat in lattices:
        assert got.get(lat, set()) == set(oracles.all_hil_tables(lat))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_khil_pre_enumeration_is_complete(n):
    got = _labeled(ClassId.KHIL_PRE, n)
    sentences = axiom_set(ClassId.KHIL_PRE).all_sentences()
    for K in enumerate_kleene(n):
        want = set()
        for imp in oracles.all_tables(n):
            alg = K.replace(imp=imp)
            if all(check_sentence_naive(s, alg).passed for s in sentences):
                want.add(tuple(imp.ravel().tolist()))
        assert got.get(K, set()) == want


def _orbit_count(n, labeled, ops):
    """Orbits of the tables under the automorphisms of each base, by
    trying every permutation."""
    total = 0
    for base, tables in labeled.items():
        group = []
        for p in itertools.permutations(range(n)):
            p = np.array(p)
            if all((p[getattr(base, op)] == getattr(base, op)[np.ix_(p, p)]).all()
                   for op in ("meet", "join")) and \
                    ("neg" not in ops or (p[base.neg] == base.neg[p]).all()):
                group.append(p)
        seen = set()
        for flat in tables:
            if flat in seen:
                continue
            total += 1
            t = np.array(flat).reshape(n, n)
            for p in group:
                img = np.empty_like(t)
                img[np.ix_(p, p)] = p[t]
                seen.add(tuple(img.ravel().tolist()))
    return total


@pytest.mark.parametrize("n", [2, 3, 4])
def test_hil_up_to_iso_counts_orbits(n):
    iso = sum(1 for _ in enumerate_algebras(EnumerationSpec(ClassId.HIL, n, up_to_iso=True)))
    assert iso == _orbit_count(n, _labeled(ClassId.HIL, n), ("meet", "join"))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_khil_pre_up_to_iso_counts_orbits(n):
    iso = sum(1 for _ in enumerate_algebras(
        EnumerationSpec(ClassId.KHIL_PRE, n, up_to_iso=True)))
    assert iso == _orbit_count(n, _labeled(ClassId.KHIL_PRE, n), ("meet", "join", "neg"))


def test_sweep_sizes():
    counts = [sum(1 for _ in enumerate_algebras(EnumerationSpec(ClassId.HIL, n, up_to_iso=True)))
              for n in range(1, 4)]
    assert counts == [1, 2, 54]


def test_enumeration_is_deterministic_and_limited():
    spec = EnumerationSpec(ClassId.KHIL_QUASI, 4)
    a = [x.imp.tobytes() for x in enumerate_algebras(spec)]
    b = [x.imp.tobytes() for x in enumerate_algebras(spec)]
    assert a == b and len(a) > 3
    limited = list(enumerate_algebras(EnumerationSpec(ClassId.KHIL_QUASI, 4, limit=3)))
    assert [x.imp.tobytes() for x in limited] == a[:3]


@pytest.mark.parametrize("cls", [ClassId.SH, ClassId.SRL, ClassId.KHIL_EQ, ClassId.SN,
                                 ClassId.NELSON])
def test_filtered_classes_are_members(cls):
    for n in range(1, 4):
        for alg in enumerate_algebras(EnumerationSpec(cls, n)):
            assert check_class(alg, cls).passed


def test_caps(monkeypatch):
    monkeypatch.delenv("HEMIKIT_MAX_SIZE", raising=False)
    assert size_cap(False) == (HIL_CAP, None)
    assert size_cap(True) == (NEG_CAP, None)
    with pytest.raises(CapExceeded):
        next(enumerate_algebras(EnumerationSpec(ClassId.HIL, HIL_CAP + 1)))
    with pytest.raises(CapExceeded):
        next(enumerate_algebras(EnumerationSpec(ClassId.KHIL_QUASI, NEG_CAP + 1)))
    with pytest.raises(UnknownClass):
        next(enumerate_algebras(EnumerationSpec(ClassId.LATTICE, 2)))


def test_cap_override_warns(monkeypatch, caplog):
    monkeypatch.setenv("HEMIKIT_MAX_SIZE", "2")
    with caplog.at_level(logging.WARNING):
        with pytest.raises(CapExceeded):
            next(enumerate_algebras(EnumerationSpec(ClassId.HIL, 3)))
    assert "HEMIKIT_MAX_SIZE" in caplog.text
    monkeypatch.setenv("HEMIKIT_MAX_SIZE", "lots")
    cap, warning = size_cap(False)
    assert cap == HIL_CAP and "ignored" in warning


def test_search_finds_independence_counterexample(entries):
    found = search_counterexample("eqn5-independent-of-hN1-6", 4)
    assert found is not None and found.size == 3
    assert is_member(found, ClassId.KHIL_PRE)
    assert not is_member(found, ClassId.KHIL_EQ)
    assert found.imp.tolist() == [[2, 2, 1], [2, 2, 2], [0, 1, 2]]
    # the other size-3 counterexample is the catalog chain
    pre3 = list(enumerate_algebras(EnumerationSpec(ClassId.KHIL_PRE, 3)))
    bad = [a for a in pre3 if not is_member(a, ClassId.KHIL_EQ)]
    remark = entries["remark-kleene-3chain"].algebra
    assert [a.imp.tolist() for a in bad] == \
        [[[2, 2, 1], [2, 2, 2], [0, 1, 2]], remark.imp.tolist()]


@pytest.mark.parametrize("name", sorted(set(PROPERTIES) - {"eqn5-independent-of-hN1-6"}))
def test_theorems_have_no_small_counterexample(name):
    assert search_counterexample(name, 3) is None


def test_unknown_property():
    with pytest.raises(UnknownProperty):
        search_counterexample("nonsense", 2)
