"""Smoke test for the Python bindings: python python/smoke_test.py"""

from fractions import Fraction

import unideal


def main():
    c = unideal.Circuit.parse("vars 2\nin 0\nin 1\nadd 0 1\nmul 2 0\n")
    assert c.nvars == 2
    assert c.eval([2, 3]) == Fraction(10)
    assert c.eval([Fraction(1, 2), 1]) == Fraction(3, 4)
    assert c.expand() == {(2, 0): 1, (1, 1): 1}

    sq = unideal.Circuit.from_terms(2, [((2, 0), 1), ((0, 2), -3)])
    assert unideal.is_member_brute(sq, unideal.Ideal.powers([2, 2]))

    f = unideal.LowRank.parse("vars 1\nin 0\nmul 0 0\nform 1 1\n")
    assert f.rank == 1 and f.nvars == 2
    assert unideal.rem_eval(f, unideal.Ideal.powers([2, 2]), [1, 1]) == 2

    ones = [[1] * 4 for _ in range(4)]
    assert unideal.permanent(ones, rank=1) == 24
    assert unideal.ryser_permanent([[1, 2], [3, 4]]) == 10
    assert unideal.permanent([[1, 2], [3, 4]], field="p:7") == 3

    c4 = unideal.Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert unideal.vertex_cover(c4, 2, seed=1)["has_vc"]
    assert not unideal.vertex_cover(c4, 1, seed=1)["has_vc"]

    xy = unideal.Circuit.from_terms(2, [((1, 1), 1)])
    assert not unideal.membership_powers(xy, [2, 2], 2, seed=3)["member"]
    assert unideal.membership_powers(unideal.Circuit.from_terms(2, [((2, 0), 1)]), [2, 2], 2)["member"]

    ideal = unideal.Ideal.from_coeffs([(0, [-1, 0, 1]), (1, [-1, 0, 1])])
    out = unideal.certify(xy, ideal)
    assert out["decision"] == "nonmember" and len(out["certificate"]) == 2

    tri = unideal.Graph(3, [(0, 1), (1, 2), (0, 2)])
    circ, ideal3 = unideal.graph_coloring(tri, 3)
    assert not unideal.is_member_brute(circ, ideal3)
    a, b, n = unideal.reduce_one_in_three(3, [[0, 1, 2]])
    circ, ideal = unideal.reduce_klineq(a, b, n)
    assert not unideal.is_member_brute(circ, ideal)

    try:
        unideal.Circuit.from_terms(3, [((1, 1, 1), 1)]).expand(cap=0)
    except unideal.CapExceeded:
        pass
    else:
        raise AssertionError("expected CapExceeded")
    try:
        unideal.Circuit.parse("nonsense")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    checks = unideal.run_selftest(0)
    assert all(ok for _, ok, _ in checks), checks
    print("smoke test passed")


if __name__ == "__main__":
    main()
