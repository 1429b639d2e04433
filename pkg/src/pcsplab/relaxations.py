"""The basic integer program of an instance/template pair and its relaxations.

For similar finite structures A (template) and I (instance), the system has
a variable x[v,a] for every instance vertex v and template element a, and a
variable y[R,rI,rA] for every instance tuple rI of a symbol R and every
template tuple rA of the same symbol.  Rows:

    sum_a x[v,a]           = 1      for each v
    sum_rA y[R,rI,rA]      = 1      for each R, rI
    sum_{rA: rA[i]=a} y[R,rI,rA] = x[rI[i],a]   for each R, rI, i, a

The system has a 0/1 solution iff I maps homomorphically to A.  The three
deciders relax the domain: `aip_decide` over the integers, `blp_decide`
over the nonnegative rationals (the upper bound 1 is implied by the simplex
rows), and `blp_aip_decide` runs the two-stage refinement: integers
restricted to the relative-interior support of the rational polytope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactsolve import (
    LinearSystem,
    linear_system,
    lp_feasible_point,
    lp_positive_support,
    solve_linear_diophantine,
)
from .structures import SignatureMismatch, Structure


@dataclass(frozen=True)
class IpSystem:
    template: Structure
    instance: Structure
    vertex_vars: tuple  # ((v, a), name)
    tuple_vars: tuple  # ((R, rI, rA), name)
    system: LinearSystem


def build_ip_system(A: Structure, I: Structure) -> IpSystem:
    if A.signature != I.signature:
        raise SignatureMismatch("template and instance have different signatures")
    vertex_vars = []
    for vi, v in enumerate(I.universe):
        for ai, a in enumerate(A.universe):
            vertex_vars.append(((v, a), f"x|{vi}|{ai}"))
    tuple_vars = []
    for R in I.signature.names:
        for ti, rI in enumerate(I.rel(R)):
            for si, rA in enumerate(A.rel(R)):
                tuple_vars.append(((R, rI, rA), f"y|{R}|{ti}|{si}"))
    names = [n for _, n in vertex_vars] + [n for _, n in tuple_vars]
    index = {n: i for i, n in enumerate(names)}
    vname = {key: n for key, n in vertex_vars}
    tname = {key: n for key, n in tuple_vars}

    rows = []

    def row(pairs, const):
        coeffs = [0] * len(names)
        for n, c in pairs:
            coeffs[index[n]] += c
        rows.append((tuple(coeffs), const))

    for v in I.universe:
        row([(vname[(v, a)], 1) for a in A.universe], 1)
    for R in I.signature.names:
        ar = I.signature.arity(R)
        for rI in I.rel(R):
            row([(tname[(R, rI, rA)], 1) for rA in A.rel(R)], 1)
            for i in range(ar):
                for a in A.universe:
                    pairs = [(tname[(R, rI, rA)], 1) for rA in A.rel(R) if rA[i] == a]
                    pairs.append((vname[(rI[i], a)], -1))
                    row(pairs, 0)
    sys = linear_system(names, rows)
    return IpSystem(A, I, tuple(vertex_vars), tuple(tuple_vars), sys)


def _with_nonneg(ip: IpSystem) -> LinearSystem:
    return LinearSystem(ip.system.variables, ip.system.equalities, frozenset(ip.system.variables))


def aip_decide(A: Structure, I: Structure):
    """Integer feasibility of the basic system.  Returns (accepted, witness)."""
    ip = build_ip_system(A, I)
    sol = solve_linear_diophantine(ip.system)
    return (sol is not None), sol


def blp_decide(A: Structure, I: Structure):
    """Rational [0,1] feasibility of the basic system."""
    ip = build_ip_system(A, I)
    sol = lp_feasible_point(_with_nonneg(ip))
    return (sol is not None), sol


def blp_aip_decide(A: Structure, I: Structure):
    """Accept iff the integer system restricted to the BLP support is feasible.

    Variables that are zero in every rational solution are pinned to zero;
    the compatibility reading is: a BLP zero forces an AIP zero.
    """
    ip = build_ip_system(A, I)
    blp_sys = _with_nonneg(ip)
    if lp_feasible_point(blp_sys) is None:
        return False, None
    support = lp_positive_support(blp_sys)
    extra = []
    nvars = len(ip.system.variables)
    for i, name in enumerate(ip.system.variables):
        if name not in support:
            coeffs = [0] * nvars
            coeffs[i] = 1
            extra.append((tuple(coeffs), 0))
    restricted = linear_system(ip.system.variables, list(ip.system.equalities) + extra)
    sol = solve_linear_diophantine(restricted)
    return (sol is not None), sol


def hom_to_witness(ip: IpSystem, h) -> dict:
    """The 0/1 point of the basic system induced by a homomorphism."""
    m = h.as_dict()
    out = {}
    for (v, a), name in ip.vertex_vars:
        out[name] = 1 if m[v] == a else 0
    for (R, rI, rA), name in ip.tuple_vars:
        out[name] = 1 if tuple(m[x] for x in rI) == rA else 0
    return out
