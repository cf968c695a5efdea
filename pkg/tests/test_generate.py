from __future__ import annotations

import pytest

from l2a.generate import (GEN_KINDS, MAX_DEGREE, MAX_DIM, MAX_RANK, SPLIT_TABLES,
                          TWO_REP_TABLES, GenerationError, gen_instance)
from l2a.lie2core import check_split_lie2, qfield_square_check, shift_splitting
from l2a.matched import check_two_rep
from l2a.serialize import dumps_instance


@pytest.mark.parametrize("kind", GEN_KINDS)
def test_deterministic(kind):
    assert dumps_instance(gen_instance(kind, 11)) == dumps_instance(gen_instance(kind, 11))


def test_seeds_differ():
    a = {dumps_instance(gen_instance("semidirect", s)) for s in range(6)}
    assert len(a) > 1


@pytest.mark.parametrize("kwargs", [dict(dim=MAX_DIM + 1), dict(rank=MAX_RANK + 1),
                                    dict(degree=MAX_DEGREE + 1), dict(rank=-1)])
def test_bounds(kwargs):
    with pytest.raises(GenerationError):
        gen_instance("semidirect", 0, **kwargs)


def test_unsupported_kind_and_target():
    with pytest.raises(GenerationError, match="unsupported"):
        gen_instance("lie3", 0)
    with pytest.raises(GenerationError, match="mutation"):
        gen_instance("semidirect", 0, mutate="partial")
    with pytest.raises(GenerationError):
        gen_instance("courant", 0, mutate="omega")


@pytest.mark.parametrize("seed", range(6))
def test_semidirect_is_valid(seed):
    d = gen_instance("semidirect", seed).payload
    assert check_split_lie2(d).passed and qfield_square_check(d).passed


@pytest.mark.parametrize("seed", range(4))
def test_shifted_instances_stay_valid(seed):
    inst = gen_instance("shift", seed)
    assert inst.kind == "shift"
    d, phi = inst.payload
    shifted = shift_splitting(d, phi)
    assert check_split_lie2(d).passed and check_split_lie2(shifted).passed


@pytest.mark.parametrize("table", SPLIT_TABLES)
def test_split_mutations_fail(table):
    for seed in range(3):
        inst = gen_instance("semidirect", seed, mutate=table)
        r1, r2 = check_split_lie2(inst.payload), qfield_square_check(inst.payload)
        assert r1.passed == r2.passed
        assert inst.metadata["mutation"]["table"] == table
    assert not check_split_lie2(gen_instance("semidirect", 1, mutate=table).payload).passed


@pytest.mark.parametrize("table", TWO_REP_TABLES)
def test_two_rep_mutations(table):
    inst = gen_instance("two_rep", 1, dim=2, mutate=table)
    assert not check_two_rep(inst.payload).passed


def test_empty_mutation_table_is_an_error():
    with pytest.raises(GenerationError, match="no entries"):
        gen_instance("two_rep", 1, dim=1, mutate="R")
