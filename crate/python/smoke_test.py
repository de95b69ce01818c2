"""Smoke test for the compiled extension: python python/smoke_test.py"""

from fractions import Fraction

import pyparacanonical as pp


def check(name, ok):
    print(f"{name}: {'ok' if ok else 'FAILED'}")
    return ok


def main():
    results = []

    m = pp.Matrix([[1, 2, 3], [2, 4, 6], ["1/2", 0, "-1"]])
    results.append(check("rank", m.rank() == 2 and len(m.kernel()) == 1))
    x = m.solve([1, 2, "1/2"])
    residual = [sum(Fraction(a) * Fraction(b) for a, b in zip(row, x)) for row in m.rows()]
    results.append(check("solve", residual == [1, 2, Fraction(1, 2)]))
    a = pp.Matrix([[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]])
    pf = Fraction(a.pfaffian())
    results.append(check("pfaffian", pf == 1 * 6 - 2 * 5 + 3 * 4 and pf * pf == Fraction(a.det())))

    cup = pp.CupModel.ample_divisor(3, 2)
    results.append(check("graded dims", cup.graded_dims == [4, 3, 1]))
    results.append(check("cohomology", cup.cohomology([1, 1, 0]) == [2, 0, 0]))
    results.append(check("incidence", pp.CupModel.ample_divisor(5, 3).incidence(16, 7)["dim_i_main"] == 6))
    results.append(check("koszul isolated", pp.CupModel.koszul(4).isolated(16, 7)))

    results.append(check("chi and gap", pp.chi_and_gap([1, 3, 3, 1]) == (0, -1)))
    results.append(check("s_n", int(pp.s_n([1, 4, 9])) == 2))
    verdict = pp.ledger_verdict([1, 4, 3, 2], no_agt_fibration=True, isolated_zero=True)
    results.append(check("ledger", verdict["exorbitant_verdict"] == "exorbitant"))

    lift = pp.LiftModel.builtin("elliptic", 6).lift()
    tails = [Fraction(t[0]) for t in lift["tails"]]
    results.append(check("elliptic tails", tails == [Fraction((-1) ** (k + 1), k) for k in range(1, 7)]))
    try:
        pp.LiftModel.builtin("obstructed-order-2").lift()
        results.append(check("obstruction raised", False))
    except pp.ParacanonicalError as e:
        results.append(check("obstruction raised", "order 2" in str(e)))
    model = pp.LiftModel.builtin("two-generator", 5)
    results.append(check("json round trip", pp.LiftModel.from_json(model.to_json()).lift()["order_achieved"] == 5))

    if not all(results):
        raise SystemExit(1)
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
