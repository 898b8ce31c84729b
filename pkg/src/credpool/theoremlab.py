"""Numeric certification of the fixing/pooling identities.

Every claim is checked on seeded random profiles (``numpy.random.default_rng``,
PCG64) or on pinned witness profiles. Positive claims pass when the largest
gap stays within tolerance; negative claims ("these two procedures differ")
pass when a pinned witness shows a gap above tolerance.

Random profiles: for seed ``s``, ``rng = default_rng(s)`` first draws the
n x m credence matrix (uniform on [0, 1], or row-normalized standard
exponentials when coherent), then n uniforms that are normalized into weights.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .agenda import Agenda, Profile, is_coherent, omniscient, validate_agenda, world_distribution
from .divergence import GKL, SED, BregmanGenerator, affine_shifted, bregman, generator, power
from .errors import GeneralNormalizationError, PreconditionError
from .fixing import fix_d1, fix_d2, fix_gkl, fix_sed
from .pooling import (
    agg_d1,
    agg_d2,
    dictator_select,
    geometric_objective,
    geometric_pool,
    geometric_pool_unnormalized,
    linear_pool,
)
from .wcap import wcap_d1, wcap_d2, wcap_general

POWER3 = power(3)
AFFINE_SED = affine_shifted(SED, k=-0.7, c=0.3, scale=2.5)
AFFINE_GKL = affine_shifted(GKL, k=1.3, c=-2.0, scale=0.5)
BUILTIN = (SED, GKL, POWER3)

# Pinned witnesses for the "procedures differ" claims: (generator, seed, m, n).
# Found once by scanning seeds upward from 0; replayed, never re-searched.
WITNESSES = {
    "thm9": ("power:3", 0, 2, 2),
    "thm9ii": ("power:3", 0, 2, 2),
    "thm11iii": ("power:3", 0, 2, 2),
    "thm10u": ("power:3", 0, 2, 2),
}


# -- canned profiles -----------------------------------------------------------

def amira_benito(weights=(0.4, 0.6)) -> Profile:
    agenda = Agenda.partition(2, ["X", "not-X"])
    return Profile.build(agenda, [[0.5, 0.1], [0.2, 0.6]], weights, ["Amira", "Benito"])


def flu_agenda() -> Agenda:
    return validate_agenda([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]],
                           ["X1", "X2", "X3", "X1 v X2"])


def carmen_donal(weights=(0.5, 0.5)) -> Profile:
    return Profile.build(flu_agenda(), [[0.2, 0.3, 0.5, 0.5], [0.6, 0.3, 0.1, 0.9]],
                         weights, ["Carmen", "Donal"])


# -- random profiles -------------------------------------------------------------

def random_profile(seed: int, m: int, n: int, coherent: bool = False) -> Profile:
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    rng = np.random.default_rng(seed)
    if coherent:
        e = rng.exponential(size=(n, m))
        C = e / e.sum(axis=1, keepdims=True)
    else:
        C = rng.random((n, m))
    w = rng.random(n)
    return Profile.build(Agenda.partition(m), C, w / w.sum())


def random_general_profile(seed: int, agenda: Agenda, n: int) -> Profile:
    """Coherent agents on an arbitrary agenda: random world distributions pushed through the truth table."""
    rng = np.random.default_rng(seed)
    e = rng.exponential(size=(n, agenda.n_worlds))
    q = e / e.sum(axis=1, keepdims=True)
    w = rng.random(n)
    C = np.clip(q @ agenda.truth_table.T, 0.0, 1.0)
    return Profile.build(agenda, C, w / w.sum())


# -- composable procedures ---------------------------------------------------------

POOLS = {
    "lp": linear_pool,
    "gp": geometric_pool,
    "gp-minus": geometric_pool_unnormalized,
}

FIXES = {
    "sed": fix_sed,
    "gkl": fix_gkl,
}


def _fixer(gen: BregmanGenerator, direction: int) -> Callable:
    solve = fix_d1 if direction == 1 else fix_d2
    return lambda agenda, c: solve(gen, agenda, c).argmin


def _aggregator(gen: BregmanGenerator, direction: int) -> Callable:
    agg = agg_d1 if direction == 1 else agg_d2
    return lambda profile: agg(gen, profile)


def fix_each(profile: Profile, fix: Callable) -> Profile:
    return profile.with_credences([fix(profile.agenda, c) for c in profile.credences])


@dataclass
class CommutationReport:
    left: np.ndarray
    right: np.ndarray
    max_gap: float
    passed: bool


def check_commutation(pool, fix, profile: Profile, tol: float = 1e-9) -> CommutationReport:
    """Compare pool-after-fix with fix-after-pool on one profile."""
    pool = POOLS[pool] if isinstance(pool, str) else pool
    fix = FIXES[fix] if isinstance(fix, str) else fix
    left = pool(fix_each(profile, fix))
    right = fix(profile.agenda, pool(profile))
    gap = float(np.max(np.abs(left - right)))
    return CommutationReport(left, right, gap, gap <= tol)


@dataclass
class DominanceReport:
    fixed: np.ndarray
    before: np.ndarray
    after: np.ndarray
    margin: float
    passed: bool


def check_dominance(gen: BregmanGenerator, c, agenda: Optional[Agenda] = None) -> DominanceReport:
    """Is the D1-fix of an incoherent ``c`` strictly closer to every omniscient credence?"""
    c = np.asarray(c, dtype=float)
    agenda = agenda or Agenda.partition(c.size)
    if is_coherent(agenda, c):
        raise PreconditionError("dominance is only claimed for incoherent credences")
    fixed = fix_d1(gen, agenda, c).argmin
    worlds = np.array([omniscient(agenda, t) for t in range(agenda.n_worlds)])
    before = bregman(gen, worlds, c)
    after = bregman(gen, worlds, fixed)
    margin = float(np.min(before - after)) if np.all(np.isfinite(before)) else float("inf")
    return DominanceReport(fixed, before, after, margin, bool(np.all(after < before)))


# -- beyond partitions ---------------------------------------------------------------

def pool_worlds(profile: Profile, pool: Callable) -> np.ndarray:
    """Pool on the finest partition (the worlds) and push the result through the truth table."""
    agenda = profile.agenda
    Q = np.array([world_distribution(agenda, c) for c in profile.credences])
    worlds = Profile.build(Agenda.partition(agenda.n_worlds), Q, profile.weights, profile.names)
    return agenda.truth_table @ pool(worlds)


def run_section9(weights=(0.5, 0.5)) -> dict:
    """Linear and geometric aggregation of the two coherent forecasters on the non-partition agenda."""
    profile = carmen_donal(weights)
    try:
        geometric_pool(profile)
        gp2 = None
    except GeneralNormalizationError as exc:
        gp2 = str(exc)
    return {
        "propositions": list(profile.agenda.propositions),
        "LP1": pool_worlds(profile, linear_pool),
        "LP2": linear_pool(profile),
        "LP3": wcap_general(SED, profile, 1).argmin,
        "GP1": pool_worlds(profile, geometric_pool),
        "GP3": wcap_general(GKL, profile, 1).argmin,
        "GP2_error": gp2,
    }


FORECAST_EXPECTED = {
    "LP1": (0.4, 0.3, 0.3, 0.7),
    "LP2": (0.4, 0.3, 0.3, 0.7),
    "LP3": (0.4, 0.3, 0.3, 0.7),
    "GP1": (0.398, 0.345, 0.257, 0.743),
    "GP3": (0.390, 0.338, 0.272, 0.728),
}


# -- claim registry ----------------------------------------------------------------------

@dataclass
class ClaimResult:
    claim: str
    statement: str
    kind: str
    tolerance: float
    gap: float
    passed: bool
    cases: int = 0
    skipped: int = 0
    detail: dict = field(default_factory=dict)


@dataclass
class Claim:
    id: str
    statement: str
    kind: str  # "holds" or "fails"
    tolerance: float
    run: Callable


def _gap(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _interior_profiles(seed: int, count: int, ms, ns, accept, coherent=False, limit=50_000):
    """Yield ``count`` seeded profiles per m for which ``accept`` holds, plus the number rejected."""
    out, rejected = [], 0
    for m in ms:
        got, s = 0, seed
        while got < count:
            if s - seed > limit:
                raise RuntimeError(f"could not find {count} admissible profiles for m={m}")
            n = ns[s % len(ns)]
            p = random_profile(s, m, n, coherent)
            s += 1
            if accept(p):
                out.append(p)
                got += 1
            else:
                rejected += 1
    return out, rejected


def _shift_ok(profile: Profile) -> bool:
    """Every SED fix involved (agents and pool) is an interior additive shift."""
    rows = np.vstack([profile.credences, linear_pool(profile)])
    return bool(np.all(rows + (1.0 - rows.sum(axis=1, keepdims=True)) / rows.shape[1] >= 0))


def _d1_interior(gen):
    def ok(profile):
        reps = [fix_d1(gen, profile.agenda, c) for c in profile.credences]
        reps.append(wcap_d1(gen, profile))
        return all(r.interior for r in reps)
    return ok


def _d2_interior(gen):
    def ok(profile):
        reps = [fix_d2(gen, profile.agenda, c) for c in profile.credences]
        reps.append(fix_d2(gen, profile.agenda, linear_pool(profile)))
        return all(r.interior for r in reps)
    return ok


def _claim_prop1(seed):
    gap, cases = 0.0, 0
    for m in (2, 3, 4):
        for i in range(100):
            c = np.random.default_rng(seed + 1000 * m + i).random(m)
            A = Agenda.partition(m)
            s, g = fix_sed(A, c), fix_gkl(A, c)
            gap = max(gap, _gap(s, fix_d1(SED, A, c).argmin), _gap(s, fix_d2(SED, A, c).argmin),
                      _gap(g, fix_d1(GKL, A, c).argmin), _gap(g, fix_d2(GKL, A, c).argmin))
            if np.all(s > 0):
                d = s - c
                gap = max(gap, float(d.max() - d.min()))
            r = g / c
            gap = max(gap, float(r.max() - r.min()))
            cases += 1
    ab = amira_benito()
    A = ab.agenda
    table = {
        "Amira SED": _gap(fix_sed(A, ab.credences[0]), [0.7, 0.3]),
        "Benito SED": _gap(fix_sed(A, ab.credences[1]), [0.3, 0.7]),
        "Amira GKL": _gap(fix_gkl(A, ab.credences[0]), [5 / 6, 1 / 6]),
        "Benito GKL": _gap(fix_gkl(A, ab.credences[1]), [0.25, 0.75]),
    }
    return max(gap, *table.values()), cases, 0, table


def _commutes(pool, fix, accept=None, tol=1e-9):
    def run(seed):
        profiles, skipped = _interior_profiles(seed, 100, (2, 3, 4), (2, 3), accept or (lambda p: True))
        gap = max(check_commutation(pool, fix, p, tol).max_gap for p in profiles)
        return gap, len(profiles), skipped, {}
    return run


def _witness_ab(pool, fix):
    def run(seed):
        r = check_commutation(pool, fix, amira_benito())
        return r.max_gap, 1, 0, {"left": r.left.tolist(), "right": r.right.tolist()}
    return run


def _scalar_argmin(f):
    r = minimize_scalar(f, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-13, "maxiter": 500})
    cands = [(float(f(0.0)), 0.0), (float(f(1.0)), 1.0), (float(r.fun), float(r.x))]
    return min(cands)[1]


def _numeric_agg(gen, profile, direction):
    """Cell-by-cell bounded scalar minimization of the weighted divergence."""
    C, w = profile.credences, profile.weights
    out = []
    for j in range(profile.agenda.m):
        cj = C[:, j]
        if direction == 1:
            f = lambda x: float(np.sum(w * bregman(gen, np.array([[x]] * len(cj)), cj[:, None])))
        else:
            f = lambda x: float(np.sum(w * bregman(gen, cj[:, None], np.array([[x]] * len(cj)))))
        out.append(_scalar_argmin(f))
    return np.array(out)


def _claim_prop3(seed):
    gap, cases = 0.0, 0
    for i in range(60):
        p = random_profile(seed + i, 2 + i % 3, 2 + i % 2)
        lp, gm = linear_pool(p), geometric_pool_unnormalized(p)
        gap = max(gap, _gap(agg_d1(SED, p), lp), _gap(agg_d1(GKL, p), gm), _gap(agg_d2(GKL, p), lp),
                  _gap(_numeric_agg(SED, p, 1), lp), _gap(_numeric_agg(GKL, p, 1), gm),
                  _gap(_numeric_agg(GKL, p, 2), lp))
        cases += 1
    return gap, cases, 0, {}


def _claim_prop4(seed):
    gap = 0.0
    for i in range(300):
        p = random_profile(seed + i, 2 + i % 3, 2 + i % 2)
        gap = max(gap, _gap(geometric_pool(p), fix_gkl(p.agenda, geometric_pool_unnormalized(p))))
    return gap, 300, 0, {}


def _claim_prop5i(seed):
    profiles, skipped = _interior_profiles(seed, 100, (2, 3, 4), (2, 3), _shift_ok)
    gap = 0.0
    for p in profiles:
        w = wcap_d1(SED, p).argmin
        fixed = fix_each(p, fix_sed)
        gap = max(gap, _gap(w, linear_pool(fixed)), _gap(w, fix_sed(p.agenda, linear_pool(p))),
                  _gap(w, agg_d1(SED, fixed)), _gap(w, fix_sed(p.agenda, agg_d1(SED, p))),
                  _gap(w, wcap_d2(SED, p).argmin))
    return gap, len(profiles), skipped, {}


def _claim_prop5ii(seed):
    gap, cases = 0.0, 0
    for m in (2, 3, 4):
        for i in range(100):
            p = random_profile(seed + 1000 * m + i, m, 2 + i % 2)
            w = wcap_d1(GKL, p).argmin
            gp = geometric_pool(p)
            gap = max(gap, _gap(w, gp), _gap(w, geometric_pool(fix_each(p, fix_gkl))),
                      _gap(w, fix_gkl(p.agenda, gp)), _gap(w, fix_gkl(p.agenda, agg_d1(GKL, p))))
            cases += 1
    return gap, cases, 0, {}


def _claim_prop5iii(seed):
    p = amira_benito()
    w = wcap_d2(GKL, p).argmin
    gp = geometric_pool(p)
    lp = linear_pool(p)
    formula_gap = _gap(w, lp / lp.sum())
    return _gap(w, gp), 1, 0, {"wcap_gkl2": w.tolist(), "gp": gp.tolist(), "normalized_lp_gap": formula_gap}


def _claim_prop5iv(seed):
    # positive half: WCAP_GKL2 = Fix_GKL o Agg_GKL2 on random profiles
    pos = 0.0
    for i in range(300):
        p = random_profile(seed + i, 2 + i % 3, 2 + i % 2)
        pos = max(pos, _gap(wcap_d2(GKL, p).argmin, fix_gkl(p.agenda, agg_d2(GKL, p))))
    p = amira_benito()
    neg = _gap(wcap_d2(GKL, p).argmin, agg_d2(GKL, fix_each(p, fix_gkl)))
    return neg, 301, 0, {"identity_gap": pos, "identity_holds": pos <= 1e-9}


def _dictator_claim(constrained):
    def run(seed):
        worst_zero, worst_pos, cases = 0.0, np.inf, 0
        for i in range(200):
            m, n = 2 + i % 3, 2 + i % 2
            p = random_profile(seed + i, m, n, coherent=constrained)
            rng = np.random.default_rng(seed + 10_000 + i)
            pts = rng.exponential(size=(20, m))
            pts = pts / pts.sum(axis=1, keepdims=True) if constrained else rng.random((20, m))
            for gen in BUILTIN:
                for direction in (1, 2):
                    r = dictator_select(gen, p, constrained, direction)
                    worst_zero = max(worst_zero, abs(r.objective))
                    vals = geometric_objective(gen, p, pts, direction)
                    worst_pos = min(worst_pos, float(np.min(vals)))
                    cases += 1
        ok = worst_zero == 0.0 and worst_pos > 0
        return (0.0 if ok else max(worst_zero, 1.0)), cases, 0, {
            "max_objective_at_selected": worst_zero, "min_objective_elsewhere": worst_pos}
    return run


def _claim_thm8(seed):
    violations, cases, margin = 0, 0, np.inf
    for gen in BUILTIN:
        for i in range(1000):
            m = 2 + i % 3
            c = np.random.default_rng(seed + i).random(m)
            if is_coherent(Agenda.partition(m), c):
                continue
            r = check_dominance(gen, c)
            cases += 1
            margin = min(margin, r.margin)
            violations += not r.passed
    return float(violations), cases, 0, {"violations": violations, "min_margin": margin}


def _witness_profile(key):
    name, s, m, n = WITNESSES[key]
    return generator(name), random_profile(s, m, n)


def _claim_thm9(seed):
    gen, p = _witness_profile("thm9")
    gap = _gap(wcap_d1(gen, p).argmin, fix_d1(gen, p.agenda, linear_pool(p)).argmin)
    aff = 0.0
    for i in range(100):
        q = random_profile(seed + i, 2 + i % 3, 2 + i % 2)
        aff = max(aff, _gap(wcap_d1(AFFINE_SED, q).argmin, fix_d1(AFFINE_SED, q.agenda, linear_pool(q)).argmin))
    return gap, 101, 0, {"affine_sed_gap": aff, "affine_sed_holds": aff <= 1e-9}


def _claim_thm9ii(seed):
    gen, p = _witness_profile("thm9ii")
    gap = _gap(wcap_d1(gen, p).argmin, fix_d1(gen, p.agenda, geometric_pool(p)).argmin)
    aff = 0.0
    for i in range(100):
        q = random_profile(seed + i, 2 + i % 3, 2 + i % 2)
        w = wcap_d1(AFFINE_GKL, q).argmin
        aff = max(aff, _gap(w, fix_d1(AFFINE_GKL, q.agenda, geometric_pool(q)).argmin),
                  _gap(w, geometric_pool(fix_each(q, _fixer(AFFINE_GKL, 1)))))
    return gap, 101, 0, {"affine_gkl_gap": aff, "affine_gkl_holds": aff <= 1e-9}


def decomposition_gaps(gen, profile):
    """Gaps of WCAP_D1 against Fix_D1 o Agg_D1 and against Agg_D1 o Fix_D1."""
    w = wcap_d1(gen, profile).argmin
    fix_agg = fix_d1(gen, profile.agenda, agg_d1(gen, profile)).argmin
    agg_fix = agg_d1(gen, fix_each(profile, _fixer(gen, 1)))
    return _gap(w, fix_agg), _gap(w, agg_fix)


def _claim_thm10(seed, count=500):
    detail, gap, cases, skipped = {}, 0.0, 0, 0
    for gen in BUILTIN:
        profiles, rej = _interior_profiles(seed, count // 3 + 1, (2, 3, 4), (2, 3), _d1_interior(gen))
        fa = af = 0.0
        for p in profiles[:count]:
            a, b = decomposition_gaps(gen, p)
            fa, af = max(fa, a), max(af, b)
        detail[gen.name] = {"fix_after_agg": fa, "agg_after_fix": af}
        gap = max(gap, fa, af)
        cases += min(len(profiles), count)
        skipped += rej
    return gap, cases, skipped, detail


def _claim_thm10u(seed):
    gen, p = _witness_profile("thm10u")
    a = agg_d1(gen, p)
    gap = min(_gap(a, linear_pool(p)), _gap(a, geometric_pool_unnormalized(p)))
    pos = 0.0
    for i in range(100):
        q = random_profile(seed + i, 2 + i % 3, 2 + i % 2)
        pos = max(pos, _gap(agg_d1(AFFINE_SED, q), linear_pool(q)),
                  _gap(agg_d1(AFFINE_GKL, q), geometric_pool_unnormalized(q)))
    return gap, 101, 0, {"affine_gap": pos, "affine_holds": pos <= 1e-9}


def _claim_thm11i(seed):
    gap, cases = 0.0, 0
    for gen in BUILTIN + (AFFINE_SED,):
        for i in range(30):
            p = random_profile(seed + i, 2 + i % 2, 2)
            w = wcap_d2(gen, p).argmin
            direct = wcap_general(gen, p, 2).argmin
            gap = max(gap, _gap(w, fix_d2(gen, p.agenda, linear_pool(p)).argmin), _gap(w, direct))
            cases += 1
    return gap, cases, 0, {}


def _claim_thm11ii(seed):
    gap, cases = 0.0, 0
    for gen in BUILTIN:
        for i in range(50):
            p = random_profile(seed + i, 2 + i % 3, 2 + i % 2, coherent=True)
            w = wcap_d2(gen, p).argmin
            gap = max(gap, _gap(w, fix_d2(gen, p.agenda, linear_pool(p)).argmin),
                      _gap(w, linear_pool(fix_each(p, _fixer(gen, 2)))))
            cases += 1
    return gap, cases, 0, {}


def _claim_thm11iii(seed):
    gen, p = _witness_profile("thm11iii")
    gap = _gap(fix_d2(gen, p.agenda, linear_pool(p)).argmin, linear_pool(fix_each(p, _fixer(gen, 2))))
    profiles, skipped = _interior_profiles(seed, 30, (2, 3), (2, 3), _d2_interior(AFFINE_SED))
    aff = 0.0
    for q in profiles:
        w = wcap_d2(AFFINE_SED, q).argmin
        aff = max(aff, _gap(w, linear_pool(fix_each(q, _fixer(AFFINE_SED, 2)))))
    return gap, 1 + len(profiles), skipped, {"affine_sed_gap": aff, "affine_sed_holds": aff <= 1e-9}


def _claim_thm12(seed):
    gap, cases = 0.0, 0
    for gen in BUILTIN + (AFFINE_SED,):
        for i in range(40):
            p = random_profile(seed + i, 2 + i % 3, 2 + i % 2)
            gap = max(gap, _gap(_numeric_agg(gen, p, 2), linear_pool(p)), _gap(agg_d2(gen, p), linear_pool(p)))
            cases += 1
    return gap, cases, 0, {}


def _claim_sec9(seed):
    table = run_section9()
    gaps = {k: _gap(table[k], v) for k, v in FORECAST_EXPECTED.items()}
    lp_gap = max(gaps["LP1"], gaps["LP2"], gaps["LP3"])
    agree = 0.0
    agenda = flu_agenda()
    for i in range(500):
        p = random_general_profile(seed + i, agenda, 2 + i % 2)
        l1, l2, l3 = pool_worlds(p, linear_pool), linear_pool(p), wcap_general(SED, p, 1).argmin
        agree = max(agree, _gap(l1, l2), _gap(l1, l3))
    split = _gap(table["GP1"], table["GP3"])
    ok = (lp_gap <= 1e-6 and gaps["GP1"] <= 1e-3 and gaps["GP3"] <= 1e-3 and agree <= 1e-6
          and table["GP2_error"] is not None and abs(split - 0.015) <= 5e-3)
    detail = {k: np.asarray(table[k]).tolist() for k in FORECAST_EXPECTED}
    detail.update({"gaps": gaps, "lp_agreement_random": agree, "gp1_gp3_split": split,
                   "GP2_error": table["GP2_error"]})
    worst = max(lp_gap, gaps["GP1"], gaps["GP3"], agree)
    # the LP rows carry a tighter tolerance than the claim's, so a miss there is forced above it
    return (worst if ok else max(worst, 1.0)), 501, 0, detail


CLAIMS = [
    Claim("prop1", "SED fixing adds a constant, GKL fixing rescales; both directions agree", "holds", 1e-9, _claim_prop1),
    Claim("prop2i", "linear pooling commutes with SED fixing", "holds", 1e-9, _commutes("lp", "sed", _shift_ok)),
    Claim("prop2ii", "linear pooling does not commute with GKL fixing", "fails", 1e-4, _witness_ab("lp", "gkl")),
    Claim("prop2iii", "geometric pooling commutes with GKL fixing", "holds", 1e-9, _commutes("gp", "gkl")),
    Claim("prop2iv", "geometric pooling does not commute with SED fixing", "fails", 1e-4, _witness_ab("gp", "sed")),
    Claim("prop3", "SED and GKL-to aggregation are linear pooling; GKL-from aggregation is unnormalized geometric pooling", "holds", 1e-6, _claim_prop3),
    Claim("prop4", "geometric pooling is GKL fixing of unnormalized geometric pooling", "holds", 1e-10, _claim_prop4),
    Claim("prop5i", "SED coherent approximation equals linear pooling with SED fixing in either order", "holds", 1e-9, _claim_prop5i),
    Claim("prop5ii", "GKL-from coherent approximation equals geometric pooling", "holds", 1e-9, _claim_prop5ii),
    Claim("prop5iii", "GKL-to coherent approximation differs from geometric pooling", "fails", 1e-4, _claim_prop5iii),
    Claim("prop5iv", "GKL-to coherent approximation differs from aggregating GKL-fixed agents", "fails", 1e-4, _claim_prop5iv),
    Claim("prop6", "weighted geometric coherent approximation picks an agent (coherent agents)", "holds", 0.0, _dictator_claim(True)),
    Claim("prop7", "geometric divergence aggregation picks an agent (any agents)", "holds", 0.0, _dictator_claim(False)),
    Claim("thm8", "D1-fixing moves strictly closer to every omniscient credence", "holds", 0.0, _claim_thm8),
    Claim("thm9", "D1 coherent approximation equals D1-fixed linear pool only for SED-type divergences", "fails", 1e-4, _claim_thm9),
    Claim("thm9ii", "D1 coherent approximation equals D1-fixed geometric pool only for GKL-type divergences", "fails", 1e-4, _claim_thm9ii),
    Claim("thm10", "D1 coherent approximation equals D1-fixing after D1-aggregation and D1-aggregation after D1-fixing", "holds", 1e-6, _claim_thm10),
    Claim("thm10u", "D1 aggregation is linear (geometric) pooling only for SED-type (GKL-type) divergences", "fails", 1e-4, _claim_thm10u),
    Claim("thm11i", "D2 coherent approximation equals D2-fixing of the linear pool", "holds", 1e-6, _claim_thm11i),
    Claim("thm11ii", "on coherent agents D2 coherent approximation commutes with linear pooling", "holds", 1e-6, _claim_thm11ii),
    Claim("thm11iii", "D2 fixing commutes with linear pooling only for SED-type divergences", "fails", 1e-4, _claim_thm11iii),
    Claim("thm12", "D2 aggregation is linear pooling for every generator", "holds", 1e-6, _claim_thm12),
    Claim("sec9", "beyond partitions: linear methods agree, geometric methods split, normalized GP is undefined", "holds", 1e-3, _claim_sec9),
]
CLAIM_IDS = [c.id for c in CLAIMS]


def evaluate(claim: Claim, seed: int = 0) -> ClaimResult:
    gap, cases, skipped, detail = claim.run(seed)
    if claim.kind == "holds":
        passed = gap <= claim.tolerance
    else:
        passed = gap > claim.tolerance
        for key, val in list(detail.items()):
            if key.endswith("_holds") and not val:
                passed = False
    return ClaimResult(claim.id, claim.statement, claim.kind, claim.tolerance, float(gap), bool(passed),
                       int(cases), int(skipped), _jsonable(detail))


@dataclass
class CertificationReport:
    seed: int
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "passed": self.passed, "claims": [asdict(r) for r in self.results]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def certify(claims=None, seed: int = 0) -> CertificationReport:
    selected = CLAIMS if not claims else [c for c in CLAIMS if c.id in set(claims)]
    unknown = set(claims or ()) - set(CLAIM_IDS)
    if unknown:
        raise KeyError(f"unknown claim ids: {sorted(unknown)}")
    return CertificationReport(seed, [evaluate(c, seed) for c in selected])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        obj = obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj
