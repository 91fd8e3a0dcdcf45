from fractions import Fraction

import pytest

import pcsf


def test_gadget_vertex_certificate():
    cert = pcsf.verify_gadget_vertex(6)
    assert cert["feasible"] and cert["all_tight"] and cert["unique"]
    assert cert["rank"] == cert["dimension"]
    assert Fraction(cert["max_coord"]) == Fraction(1, 3)


def test_layered_point_and_explicit_distribution():
    inst, point = pcsf.layered("k4", 4, 1)
    assert (inst.node_count, inst.edge_count, inst.pair_count) == (676, 750, 726)
    feasible, violated = pcsf.check_feasible(inst, point)
    assert feasible and violated is None
    dist = pcsf.explicit_gap_distribution(4, 1, Fraction(9, 4))
    assert len(dist.support) == 17
    assert sum(Fraction(w) for w, _ in dist.support) == 1
    report = pcsf.verify_distribution(inst, point, dist, Fraction(9, 4))
    assert report["passes"]
    assert report["max_marginal"] <= Fraction(3, 4)
    assert not pcsf.verify_distribution(inst, point, dist, Fraction(3, 2))["passes"]


def test_distribution_text_round_trip():
    dist = pcsf.explicit_gap_distribution(2, 0, Fraction(5, 2))
    again = pcsf.Distribution.from_text(dist.to_text())
    assert again.support == dist.support


def test_min_alpha_on_canonical_point():
    inst, point = pcsf.layered("k4", 4, 0)
    alpha, dist = pcsf.min_alpha(inst, point)
    assert alpha == Fraction(3, 2)
    assert pcsf.verify_distribution(inst, point, dist, alpha)["passes"]


def test_gap_on_c4_with_two_required_pairs():
    text = "pcsf 1\nedge a b 1\nedge b c 1\nedge c d 1\nedge d a 1\npair a c inf\npair b d inf\n"
    inst = pcsf.Instance.from_text(text)
    assert pcsf.gap(inst) == (2, 3, Fraction(3, 2))
    assert pcsf.Instance.from_text(inst.to_text()).to_text() == inst.to_text()


def test_rounding_bounds_on_random_instances():
    for seed in range(1, 16):
        inst = pcsf.random_instance(seed, nodes=6, edges=9, pairs=3)
        value, point = pcsf.solve_lp(inst)
        assert pcsf.lp_objective(inst, point) == value
        ip = pcsf.solve_ip(inst)["objective"]
        assert value <= ip
        r = pcsf.threshold_round(inst, point, Fraction(1, 3))
        assert r["factor"] == 3
        assert ip <= r["objective"] <= 3 * value


def test_mu_bound_and_closed_forms():
    assert pcsf.mu_bound(Fraction(1, 3)) == (Fraction(9, 4), Fraction(3, 4))
    assert pcsf.mu_bound("1/4")[0] == Fraction(16, 7)
    assert pcsf.bound_alpha(4, 1) == Fraction(5, 8)
    assert all(pcsf.bound_beta_asymptote(l) == 4 - Fraction(4, l) for l in range(3, 13))
    row = [pcsf.bound_alpha(100, k) for k in range(21)]
    assert row == sorted(row)


def test_errors_map_to_python_exceptions():
    with pytest.raises(pcsf.ValidationError):
        pcsf.Instance.from_text("not an instance")
    with pytest.raises(pcsf.ValidationError):
        pcsf.mu_bound(Fraction(1, 2))
    disconnected = pcsf.Instance.from_text("pcsf 1\nedge a b 1\nedge c d 1\npair a c inf\n")
    with pytest.raises(pcsf.InfeasibleError):
        pcsf.solve_ip(disconnected)
    assert issubclass(pcsf.ScaleCapError, pcsf.Error)
    with pytest.raises(pcsf.ValidationError):
        pcsf.Point(["1/0"], [])
