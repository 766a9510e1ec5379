"""Smoke test for the cedensity_py extension module.

Build and install first:

    CARGO_NET_OFFLINE=true pip install --no-build-isolation -e crates/python
"""

import json
import math

import cedensity_py as cd


def main():
    fam = cd.Family.logistic()
    assert fam.domain == (0.0, 4.0)
    assert fam.critical_points(3.5) == [(0.5, 2.0)]
    f, dfx, _, dft = fam.jet(4.0, 0.25)
    assert abs(f - 0.75) < 1e-15 and abs(dfx - 2.0) < 1e-15 and abs(dft - 0.1875) < 1e-15

    orb = cd.critical_orbit(fam, 4.0, 100)
    assert len(orb) == 101
    assert all(abs(l - n * math.log(4.0)) < 1e-12 * max(n, 1) for n, l in enumerate(orb.log_deriv))
    assert abs(orb.summability(30) - 4.0 / 3.0) < 1e-10
    assert abs(orb.ce_rate(1) - math.log(4.0)) < 1e-12

    nv = cd.nv_check(fam, 4.0, 30)
    assert abs(nv["a_c"] - 0.25) < 1e-14 and nv["tail_bound"] < 1e-12

    recs = cd.return_records(fam, 3.9, 0.01, n=300)
    assert recs and all(r["j"] == i + 1 for i, r in enumerate(recs))
    assert all(r["free"] for r in recs if r["essential"])

    row = cd.evaluate_row(fam, 3.95, 0.01)
    assert row["passes"] is True and row["x_pass_n"] == math.inf

    sweep = cd.density_sweep(fam, 4.0, [1e-2, 1e-3], grid=100, seed=1, lambda_samples=0)
    fractions = [w["fraction_pass"] for w in sweep["windows"]]
    assert all(0.0 <= x <= 1.0 for x in fractions)
    assert all(w["one_sided"] for w in sweep["windows"])

    roots = cd.find_precritical(fam, 3.0, 4.0, 1)
    assert len(roots) == 1 and abs(roots[0] - (1.0 + math.sqrt(5.0))) < 1e-12

    boxes = cd.box_family(fam, 3.0, 4.0, m_max=1)
    assert len(boxes["boxes"]) == 1 and boxes["special"]["special"]

    balls = cd.BallFamily.random(7, 20, 3)
    assert balls.is_special() and balls.height() <= 3
    check = balls.lemma_bound_check(10, 0.5)
    assert check["pass"] and abs(check["k"] - cd.lemma_constant_half) < 1e-12
    intervals, measure = balls.deep_set(5)
    assert abs(sum(b - a for a, b in intervals) - measure) < 1e-12
    again = cd.BallFamily.from_json(balls.to_json())
    assert again.balls() == balls.balls()
    assert json.loads(balls.to_json())[0].keys() == {"center", "radius"}

    try:
        cd.Family.poly([5.0])
    except ValueError:
        pass
    else:
        raise AssertionError("non-invariant polynomial accepted")

    cubic = cd.Family.poly([4.0, -9.0])
    assert [round(c, 12) for c, _ in cubic.critical_points(0.0)] == [round(1 / 3, 12), round(2 / 3, 12)]

    print("smoke test ok:", fam, "fractions", fractions)


if __name__ == "__main__":
    main()
