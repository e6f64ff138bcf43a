"""Report assembly: JSON documents and plain-text summaries.

Every number in a report is an exact integer or a field element written
as text.  Wall-clock timing is kept out of the JSON document so that two
runs produce byte-identical output; it appears in the text summary only.
"""

from __future__ import annotations

import json

from .spectral import delta_formula, rosenlicht_pairing
from .springer import Lattice, is_free, z_points, z_points_sandwich
from .strata import (
    PartitionSpec,
    fiber_dimension,
    index_profile,
    sample_fiber_pairs,
    stratify,
    verify_fundamental_lemma,
)
from .unitary import classify_z_points, dual_lattice, make_hermitian, orbital_integrals

__all__ = [
    "SCHEMA_VERSION",
    "SECTIONS",
    "build_report",
    "check_expected",
    "failures",
    "render_json",
    "render_text",
]

SCHEMA_VERSION = "springer-lab/1"

MAX_LISTED_POINTS = 64


def _mat(F, M):
    return [[F.fmt(int(x)) for x in row] for row in M]


def invariants_section(cfg, datum):
    F = datum.field
    m = datum.size
    r = datum.r_matrix()
    r_res = [[0 if i == j else datum.r_resultant(i, j) for j in range(m)] for i in range(m)]
    pairing = rosenlicht_pairing(datum)
    formula = delta_formula(datum)
    out = {
        "field": F.label,
        "n": list(datum.ns),
        "n_I": datum.n_I,
        "minimal_polynomials": [repr(P) for P in datum.minimal_polynomials],
        "r": r,
        "r_resultant": r_res,
        "delta_i": [datum.delta_i(i) for i in range(m)],
        "delta_direct": datum.delta,
        "delta_formula": formula,
        "delta_levels": [list(x) for x in datum.delta_evidence["history"]],
        "conductor": list(datum.conductor),
        "dim_A_mod_conductor": datum.a_window().dim,
        "rosenlicht": {
            "size": list(pairing.matrix.shape),
            "perfect": pairing.perfect,
            "matrix": _mat(F, pairing.matrix),
        },
    }
    checks = {
        "delta_two_ways": datum.delta == formula,
        "r_symmetric": all(r[i][j] == r[j][i] for i in range(m) for j in range(m)),
        "r_matches_resultant": r == r_res,
        "rosenlicht_perfect": pairing.perfect and pairing.matrix.shape == (datum.delta, datum.delta),
        "dim_A_mod_conductor_is_delta": datum.a_window().dim == datum.delta,
    }
    if cfg.hermitian:
        H = make_hermitian(datum)
        A = Lattice.order(datum)
        out["hermitian"] = {
            "alpha": [a.to_json() for a in H.alphas],
            "alpha_valuations": list(H.alpha_valuations),
            "conductor_plus_ramification": [c + n - 1 for c, n in zip(datum.conductor, datum.ns)],
        }
        checks["self_dual"] = dual_lattice(A, H) == A
        checks["alpha_valuation"] = list(H.alpha_valuations) == out["hermitian"]["conductor_plus_ramification"]
    out["checks"] = checks
    return out


def _z(cfg, datum, d):
    if cfg.route == "window":
        return z_points(datum, d, N=cfg.window or None, absorb=cfg.absorb, budget=cfg.budget)
    return z_points_sandwich(datum, d, absorb=cfg.absorb, budget=cfg.budget)


def _point_json(M):
    doc = M.to_json()
    doc["free"] = is_free(M)
    return doc


def enumerate_section(cfg, datum, cache):
    out = {}
    for d in cfg.d:
        z = _z(cfg, datum, d)
        cache[d] = z
        doc = z.to_json()
        doc["free"] = sum(1 for M in z.points if is_free(M))
        if len(z) <= MAX_LISTED_POINTS:
            doc["points"] = [_point_json(M) for M in z.points]
        else:
            doc["points_listed"] = False
        out[str(d)] = doc
    return out


def _z0(cfg, datum, cache):
    if 0 not in cache:
        cache[0] = _z(cfg, datum, 0)
    return cache[0]


def orbital_section(cfg, datum, cache):
    H = make_hermitian(datum)
    z = _z0(cfg, datum, cache)
    cl = classify_z_points(z.points, H, cfg.absorb)
    cache["classification"] = cl
    out = cl.to_json()
    out["SO"] = cl.total
    out["partitions"] = []
    for I1, I2 in cfg.partitions:
        o_kappa, so = orbital_integrals(cl.counts, I1)
        out["partitions"].append(
            {"I1": [i + 1 for i in I1], "I2": [i + 1 for i in I2], "O_kappa": o_kappa, "SO": so}
        )
    return out


def strata_section(cfg, datum, cache, seed=0):
    z = _z0(cfg, datum, cache)
    out = []
    for I1, I2 in cfg.partitions:
        part = PartitionSpec(datum, I1, I2)
        strata = stratify(z.points, part)
        profiles = [index_profile(M, part) for M in z.points]
        pairs, distinct = sample_fiber_pairs(part, cfg.fiber_samples, seed, cfg.route)
        dims = [fiber_dimension(a, b, part) for a, b in pairs]
        doc = {
            "partition": part.to_json(),
            "strata": {str(k): len(v) for k, v in strata.items()},
            "ind1_prime_range": [min(p.ind1p for p in profiles), max(p.ind1p for p in profiles)],
            "rho_range": [min(p.rho for p in profiles), max(p.rho for p in profiles)],
            "lemma_violations": 0,
            "fiber_dimension": {
                "samples": len(pairs),
                "distinct_pairs": distinct,
                "values": sorted(set(dims)),
                "equals_r": all(x == part.r for x in dims),
            },
        }
        out.append(doc)
    return out


def fl_section(cfg, datum):
    reports = []
    for I1, I2 in cfg.partitions:
        part = PartitionSpec(datum, I1, I2)
        rep = verify_fundamental_lemma(datum, part, cfg.route, cfg.budget, cfg.absorb)
        reports.append(rep.to_json())
    return reports


SECTIONS = ("invariants", "enumerate", "orbital", "strata", "verify-fl")


def build_report(cfg, sections, seed=0):
    """Run the requested sections for one configuration."""
    datum = cfg.datum()
    cache = {}
    doc = {
        "schema": SCHEMA_VERSION,
        "name": cfg.name,
        "description": cfg.description,
        "config": {
            "p": cfg.p,
            "e": cfg.e,
            "hermitian": cfg.hermitian,
            "branches": [
                {"n": n, "gamma": [[exp, plain, eps] for exp, plain, eps in terms]} for n, terms in cfg.branches
            ],
            "partitions": [[[i + 1 for i in a], [i + 1 for i in b]] for a, b in cfg.partitions],
            "route": cfg.route,
            "absorb": cfg.absorb + 1,
        },
    }
    if "invariants" in sections:
        doc["invariants"] = invariants_section(cfg, datum)
    if "enumerate" in sections:
        doc["enumerate"] = enumerate_section(cfg, datum, cache)
    if "orbital" in sections and cfg.hermitian:
        doc["orbital"] = orbital_section(cfg, datum, cache)
    if "strata" in sections and cfg.partitions:
        doc["strata"] = strata_section(cfg, datum, cache, seed)
    if "verify-fl" in sections and cfg.hermitian and cfg.partitions:
        doc["verify_fl"] = fl_section(cfg, datum)
    return doc


def check_expected(cfg, doc):
    """Compare a report with the ``[expected]`` table; returns failure strings."""
    exp = cfg.expected
    fails = []

    def cmp(label, want, got):
        if got is not None and want != got:
            fails.append(f"{label}: expected {want}, got {got}")

    inv = doc.get("invariants", {})
    if "delta" in exp:
        cmp("delta", exp["delta"], inv.get("delta_direct"))
    if "conductor" in exp:
        cmp("conductor", exp["conductor"], inv.get("conductor"))
    if "z0" in exp and "enumerate" in doc and "0" in doc["enumerate"]:
        cmp("z0", exp["z0"], doc["enumerate"]["0"]["count"])
    if "SO" in exp and "orbital" in doc:
        cmp("SO", exp["SO"], doc["orbital"]["SO"])
    if "O_kappa" in exp and "orbital" in doc:
        cmp("O_kappa", exp["O_kappa"], [p["O_kappa"] for p in doc["orbital"]["partitions"]])
    return fails


def failures(doc):
    """Identity violations recorded in a report."""
    out = []
    for key, ok in doc.get("invariants", {}).get("checks", {}).items():
        if not ok:
            out.append(f"invariants.{key}")
    for s in doc.get("strata", []):
        if not s["fiber_dimension"]["equals_r"]:
            out.append(f"strata {s['partition']}: fiber dimension differs from r")
    for rep in doc.get("verify_fl", []):
        if rep["fundamental_lemma"]["verdict"] != "PASS":
            out.append(f"fundamental lemma {rep['partition']}: {rep['fundamental_lemma']}")
        if rep["strata"]["verdict"] != "PASS":
            out.append(f"signed strata sum {rep['partition']}")
    return out


def render_json(doc):
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def render_text(doc, timing=None):
    lines = [f"== {doc.get('name', '?')} =="]
    if doc.get("description"):
        lines.append(doc["description"])
    inv = doc.get("invariants")
    if inv:
        lines.append(
            f"field {inv['field']}  n = {inv['n']}  delta = {inv['delta_direct']} "
            f"(formula {inv['delta_formula']})  conductor = {inv['conductor']}"
        )
        lines.append(f"r = {inv['r']}  Rosenlicht {inv['rosenlicht']['size']} perfect={inv['rosenlicht']['perfect']}")
        if "hermitian" in inv:
            lines.append(f"v(alpha) = {inv['hermitian']['alpha_valuations']}  A self-dual: {inv['checks']['self_dual']}")
    for d, z in sorted(doc.get("enumerate", {}).items(), key=lambda kv: int(kv[0])):
        lines.append(f"Z^{d}: {z['count']} points ({z['free']} free), route {z['route']}, history {z['history']}")
    orb = doc.get("orbital")
    if orb:
        lines.append(f"F_q-points by class: {orb['counts']}  SO = {orb['SO']}  (discarded {orb['discarded']})")
        for p in orb["partitions"]:
            lines.append(f"  O^kappa {p['I1']}|{p['I2']} = {p['O_kappa']}")
    for s in doc.get("strata", []):
        fd = s["fiber_dimension"]
        lines.append(
            f"strata {s['partition']['I1']}|{s['partition']['I2']} r={s['partition']['r']}: {s['strata']}  "
            f"rho in {s['rho_range']}  fiber dim {fd['values']} over {fd['samples']} samples "
            f"({fd['distinct_pairs']} distinct)"
        )
    for rep in doc.get("verify_fl", []):
        fl = rep["fundamental_lemma"]
        st = rep["strata"]
        lines.append(
            f"FL {rep['partition']['I1']}|{rep['partition']['I2']}: O^kappa = {fl['lhs']}, "
            f"{fl['rhs_formula']} = {fl['rhs']}  {fl['verdict']};  signed strata sum {st['signed_sum']} {st['verdict']}"
        )
    if timing is not None:
        lines.append(f"elapsed {timing:.2f} s")
    return "\n".join(lines) + "\n"
