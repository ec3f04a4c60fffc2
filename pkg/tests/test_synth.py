import random

import pytest
from hypothesis import given, settings, strategies as st

from jsgen.augment import valid_entry
from jsgen.cli import roundtrip_code
from jsgen.experiments import preprocess_all, split_validation
from jsgen.jsfront import canonicalize
from jsgen.metrics import identifiers
from jsgen.prep.corpus import CATEGORIES
from jsgen.synth import SyntheticSpec, build_table, generate


@pytest.fixture(scope="module")
def corpus():
    return generate(SyntheticSpec(seed=4))


def test_sizes_and_tags(corpus):
    assert len(corpus.train) == 300 and len(corpus.test) == 50 and len(corpus.table) == 500
    assert all(ex.category is None for ex in corpus.train)
    assert {ex.category for ex in corpus.test} == set(CATEGORIES)
    assert all(valid_entry(e) for e in corpus.table)
    assert len({e.name for e in corpus.table}) == 500


def test_heldout_names_never_in_training(corpus):
    seen = set()
    for ex in corpus.train:
        seen |= set(identifiers(ex.code))
    assert not seen & set(corpus.heldout)
    table_names = {e.name for e in corpus.table}
    assert set(corpus.heldout) <= table_names


def test_each_test_example_uses_one_heldout_name(corpus):
    held = set(corpus.heldout)
    for ex in corpus.test:
        assert len(set(identifiers(ex.code)) & held) == 1


def test_everything_round_trips(g, corpus):
    examples, warnings = preprocess_all(corpus.train + corpus.test)
    assert not warnings
    for ex in examples:
        assert roundtrip_code(ex.code, g) == canonicalize(ex.code)


def test_ole_shape():
    spec = SyntheticSpec(counts={"OLE": 30}, heldout=0, member_prefix_rate=0.0, seed=1)
    examples, _ = preprocess_all(generate(spec).train)
    shapes = {ex.code.split(" || ")[-1] for ex in examples}
    assert "'<STR1>';}" in shapes


def test_fifty_ste_records(g):
    spec = SyntheticSpec(counts={"STE": 50}, heldout=0, seed=2)
    examples, _ = preprocess_all(generate(spec).train)
    assert len(examples) == 50
    assert all(roundtrip_code(ex.code, g) == ex.code for ex in examples)


def test_small_pool_is_rejected():
    with pytest.raises(ValueError):
        generate(SyntheticSpec(table_size=10, train_names=8, heldout=5))


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_generation_is_seeded(seed):
    spec = SyntheticSpec(counts={"CE": 5, "DPE": 5}, table_size=60, heldout=5, train_names=20, seed=seed)
    a, b = generate(spec), generate(spec)
    assert [e.to_json() for e in a.train + a.test] == [e.to_json() for e in b.train + b.test]
    assert a.table == b.table


def test_table_split_is_disjoint():
    table, train, held = build_table(SyntheticSpec(), random.Random(0))
    assert not {e.name for e in train} & {e.name for e in held}


def test_validation_split():
    items = list(range(100))
    train, val = split_validation(items, 0.1, seed=3)
    assert len(val) == 10 and sorted(train + val) == items
    assert split_validation(items, 0.1, seed=3) == (train, val)
    assert split_validation(items, 0.0, seed=3)[1] == []
