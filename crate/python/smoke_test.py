"""Smoke test for the fqmatroid extension module.

Build first, e.g. `pip install -e crates/python --no-build-isolation`.
"""

import json
import math

import fqmatroid as fq


def test_field():
    f = fq.Field(4)
    assert (f.q, f.p) == (4, 2)
    assert f.mul(2, f.inv(2)) == 1
    assert f.inv(0) is None


def test_matrix_and_matroid():
    a = fq.Matrix(2, [[1, 0, 1], [0, 1, 1]])
    assert (a.n, a.m, a.rank()) == (2, 3, 2)
    assert len(a.kernel_basis()) == 1
    assert fq.Matrix.parse(a.to_text()).rows() == a.rows()
    m = fq.Matroid(a)
    assert m.is_circuit([0, 1, 2])
    assert m.girth() == 3
    assert m.vertical_connectivity() is None  # PG(1,2) has no vertical separation
    assert m.tutte_connectivity() is None
    assert fq.Matroid(fq.Matrix(2, [[1, 0], [0, 1]])).tutte_connectivity() == 1
    assert m.critical_number() == 2
    assert m.has_minor(fq.Matroid.uniform(2, 1, 2)) is not None
    assert m.contains_pg(2)
    assert fq.Matroid.projective_geometry(2, 3).size == 7


def test_process():
    p = fq.Process(2, 6, seed=3)
    first = p.step()
    assert first["m"] == 1
    m = p.run_until_corank(1)
    assert p.corank == 1 and p.m == m
    again = fq.Process(2, 6, seed=3)
    again.step()
    assert again.run_until_corank(1) == m


def test_theory():
    assert fq.gaussian_binomial(4, 2, 2) == "35"
    assert abs(fq.rank_full_prob(2, 2, 2) - 0.375) < 1e-12
    assert abs(sum(fq.corank_pmf(5, 7, 3)) - 1) < 1e-12
    assert abs(fq.limit_cck(2, 1, 1) - fq.gamma_qc(2, 1)) < 1e-12
    assert abs(fq.b_of_a(2, 0.5) - 1) < 1e-9
    assert abs(fq.conn_limit_prob(2, 2, 0.0) - math.exp(-1)) < 1e-12


def test_errors():
    for bad in (lambda: fq.Field(6), lambda: fq.b_of_a(2, 0.0), lambda: fq.run_experiment("E99")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")


def test_experiment_and_selfcheck():
    out = json.loads(fq.run_experiment("E1", seed=5, trials=500, n=6, m=6))
    assert out["schema_version"] == 1
    assert out["config"]["seed"] == 5
    assert out["aggregate"]["trials"] == 500
    assert all(failed == 0 for _, _, failed in fq.selfcheck(max_n=4))


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name} ok")
