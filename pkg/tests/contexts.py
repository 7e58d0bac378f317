"""
Builders for random test contexts (factor systems, memberships, double contexts).

Valid double contexts are built from a grade valuation nu: G -> (0, 1] whose
superlevel sets are subgroups.  Generators get mu = nu(grade), every word gets
mu(w) = nu(grade of w), and eps_pm(g, h) = eps0(g, h) nu(h) / nu(g) for a
bicharacter eps0.  Such a pair satisfies the deformed cocycle conditions
by construction, independently of the engine.
"""

from __future__ import annotations

from fractions import Fraction
import itertools
import random

from obscura.deformed_algebra import Generator
from obscura.factor_systems import CommutationFactor, FactorSystem
from obscura.grading import GradingGroup
from obscura.membership import EXPLICIT, MembershipTable

import oracles

SMALL_GROUPS = [(2,), (3,), (4,), (2, 2)]
NICE_VALUES = [Fraction(k) for k in (1, -1, 2, -2, 3)] + [Fraction(1, 2), Fraction(-1, 3), Fraction(2, 3)]


def random_fraction(rng: random.Random, lo=1, hi=9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi)) * rng.choice((1, -1))


def random_membership(rng: random.Random, denominators=12) -> Fraction:
    q = rng.randint(1, denominators)
    return Fraction(rng.randint(1, q), q)


def random_lambda(rng, orders):
    return {g: random_fraction(rng) for g in oracles.elements(orders)}


def random_coboundary(rng, orders, arity=2):
    lam = random_lambda(rng, orders)
    table = oracles.coboundary_table(orders, lam, arity)
    return FactorSystem(GradingGroup(orders), arity, table), table


def random_factor_system(rng, orders, arity=2):
    table = {k: rng.choice(NICE_VALUES) for k in itertools.product(oracles.elements(orders), repeat=arity)}
    return FactorSystem(GradingGroup(orders), arity, table), table


# -- valid double contexts -----------------------------------------------------------------

def _bicharacters(orders):
    G = GradingGroup(orders)
    out = {"trivial": lambda g, h: 1}
    if G.is_elementary_2():
        out["sign"] = lambda g, h: (-1) ** sum(a * b for a, b in zip(g, h))
    if orders == (2, 2):
        out["skew"] = lambda g, h: (-1) ** (g[0] * h[1] + g[1] * h[0])
    return out


def _valuation(rng, orders):
    """nu with nu(0) = 1 and subgroup superlevel sets (a chain of subgroups)."""
    els = oracles.elements(orders)
    zero = tuple(0 for _ in orders)
    if orders == (2, 2):
        h = rng.choice([(1, 0), (0, 1), (1, 1)])
        v1 = random_membership(rng)
        v2 = min(v1, random_membership(rng))
        return {g: Fraction(1) if g == zero else (v1 if g == h else v2) for g in els}
    if orders == (4,):
        v1 = random_membership(rng)
        v2 = min(v1, random_membership(rng))
        return {g: Fraction(1) if g == zero else (v1 if g == (2,) else v2) for g in els}
    v = random_membership(rng)
    return {g: Fraction(1) if g == zero else v for g in els}


def valid_double_context(rng, orders=None, n_generators=3, equal_mu=False, max_word=5):
    orders = orders or rng.choice([(2,), (2, 2), (3,), (4,)])
    G = GradingGroup(orders)
    els = oracles.elements(orders)
    nu = {g: Fraction(1) for g in els} if equal_mu else _valuation(rng, orders)
    name, eps0 = rng.choice(sorted(_bicharacters(orders).items()))
    syms = ["a", "b", "c", "d", "f"][:n_generators]
    grades = {s: rng.choice(els) for s in syms}
    gens = [Generator(s, grades[s], nu[grades[s]]) for s in syms]
    table = {}
    for n in range(2, max_word + 1):
        for w in itertools.product(syms, repeat=n):
            table[w] = nu[oracles.add(orders, *(grades[s] for s in w))]
    mu = MembershipTable({s: nu[grades[s]] for s in syms}, EXPLICIT, table)
    eps_pm = CommutationFactor.from_function(
        G, lambda g, h: Fraction(eps0(g, h)) * nu[h] / nu[g], validate=False
    )
    return {
        "orders": orders,
        "group": G,
        "generators": gens,
        "grades": grades,
        "mu": mu,
        "nu": nu,
        "eps0": eps0,
        "eps0_name": name,
        "eps_pm": eps_pm,
    }


def perturbed(ctx):
    """Scale eps_pm at (grade a, grade b) by 2, which breaks em1 for the pair (a, b)."""
    ga, gb = ctx["grades"]["a"], ctx["grades"]["b"]
    eps = ctx["eps_pm"]
    table = dict(eps.table)
    table[(ga, gb)] = table[(ga, gb)] * 2
    return CommutationFactor(eps.group, table, validate=False)


def block_factor(ctx):
    """E(u, v) = eps_pm(u', v') mu(u) / mu(v) for words u, v, computed from the raw data."""
    orders, grades, nu, eps0 = ctx["orders"], ctx["grades"], ctx["nu"], ctx["eps0"]

    def grade(w):
        return oracles.add(orders, *(grades[s] for s in w))

    def E(u, v):
        gu, gv = grade(u), grade(v)
        return Fraction(eps0(gu, gv)) * nu[gv] / nu[gu] * nu[gu] / nu[gv]

    return E
