"""Exact prize-collecting Steiner forest LP tools.

The extension works with "a/b" strings; this package converts them to
fractions.Fraction on the way out and accepts Fraction, int or str on the way in.
"""

from fractions import Fraction

from . import _core
from ._core import (
    Distribution,
    Error,
    InfeasibleError,
    Instance,
    Point,
    ScaleCapError,
    ValidationError,
    check_feasible,
    gadget,
    layered,
    random_instance,
    verify_gadget_vertex,
)

__all__ = [
    "Distribution",
    "Error",
    "InfeasibleError",
    "Instance",
    "Point",
    "ScaleCapError",
    "ValidationError",
    "bound_alpha",
    "bound_beta",
    "bound_beta_asymptote",
    "check_feasible",
    "explicit_gap_distribution",
    "gadget",
    "gap",
    "layered",
    "lp_objective",
    "make_point",
    "min_alpha",
    "min_beta",
    "mu_bound",
    "random_instance",
    "solve_ip",
    "solve_lp",
    "threshold_round",
    "two_value_round",
    "verify_distribution",
    "verify_gadget_vertex",
]

_RATIONAL_KEYS = {"objective", "cost", "penalty", "lp_value", "factor", "max_marginal", "min_pair_prob", "max_coord"}


def _q(text):
    return Fraction(text)


def _s(value):
    return str(Fraction(value))


def _convert(d):
    return {k: _q(v) if k in _RATIONAL_KEYS else v for k, v in d.items()}


def make_point(x, z):
    """Point from sequences of Fraction, int or str."""
    return Point([_s(v) for v in x], [_s(v) for v in z])


def solve_lp(instance):
    value, point = _core.solve_lp(instance)
    return _q(value), point


def lp_objective(instance, point):
    return _q(_core.lp_objective(instance, point))


def solve_ip(instance):
    return _convert(_core.solve_ip(instance))


def gap(instance):
    return tuple(_q(v) for v in _core.gap(instance))


def threshold_round(instance, point, theta=Fraction(1, 3)):
    return _convert(_core.threshold_round(instance, point, _s(theta)))


def two_value_round(instance, point, p=Fraction(3, 4)):
    return _convert(_core.two_value_round(instance, point, _s(p)))


def mu_bound(gamma):
    return tuple(_q(v) for v in _core.mu_bound(_s(gamma)))


def min_alpha(instance, point):
    value, dist = _core.min_alpha(instance, point)
    return _q(value), dist


def min_beta(instance, point):
    value, dist = _core.min_beta(instance, point)
    return _q(value), dist


def explicit_gap_distribution(m=4, k=1, alpha=Fraction(9, 4)):
    return _core.explicit_gap_distribution(m, k, _s(alpha))


def verify_distribution(instance, point, distribution, scale, mode="gap"):
    return _convert(_core.verify_distribution(instance, point, distribution, _s(scale), mode))


def bound_alpha(n, k):
    return _q(_core.bound_alpha(n, k))


def bound_beta(l, n, k):
    return _q(_core.bound_beta(l, n, k))


def bound_beta_asymptote(l):
    return _q(_core.bound_beta_asymptote(l))
