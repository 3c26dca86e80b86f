import pytest

from mzv_forge.double_shuffle import (DoubleShuffleSolver, ResourceGuard, compositions_of_weight, dimension_table,
                                      expected_dimensions, export_jsonl, generate_relations, import_jsonl, reduce)


def test_expected_dimensions_recurrence():
    d = expected_dimensions(12)
    assert d[:5] == [1, 0, 1, 1, 1]
    for k in range(3, 13):
        assert d[k] == d[k - 2] + d[k - 3]


def test_dimensions_up_to_7():
    assert dimension_table(7) == expected_dimensions(7)[1:]


def test_composition_counts():
    for w in range(1, 7):
        assert len(compositions_of_weight(w)) == 2 ** (w - 1)
    # (2; x) and (1,1; x, y) with x, y in {1, -1}
    assert len(compositions_of_weight(2, level=2)) == 2 + 4


def test_reduce_report_consistent():
    rep = reduce(generate_relations(4))
    assert rep.rank + rep.nullity == len(rep.columns)
    assert set(rep.pivots) | set(rep.free) == set(rep.columns)


def test_jsonl_roundtrip():
    sys = generate_relations(3)
    rows = import_jsonl(export_jsonl(sys))
    assert len(rows) == len(sys.rows)


def test_solver_lines_weight3():
    s = DoubleShuffleSolver()
    s.solve_up_to(3)
    lines = s.solution_lines(3)
    assert "zeta(1,2) = zeta(3)" in lines
    assert "zeta(2,1) = -2*zeta(3)" in lines


def test_threads_do_not_change_output():
    a = DoubleShuffleSolver(threads=1)
    b = DoubleShuffleSolver(threads=4)
    a.solve_up_to(5)
    b.solve_up_to(5)
    assert a.solution_lines(5) == b.solution_lines(5)


def test_resource_guard():
    with pytest.raises(ResourceGuard):
        generate_relations(12)


def test_unknown_kind():
    with pytest.raises(ValueError):
        DoubleShuffleSolver(kinds=("nonsense",))


def test_level2_weight2_dimension():
    # Euler sums: weight 2 at level 2 spanned by zeta(2), log(2)^2
    assert dimension_table(2, level=2)[-1] == 2
