"""Runnable checks for the approximation bounds and their proof lemmas.

Each check measures the relevant quantities exactly, evaluates the
claimed bound, and returns a BoundReport.  Bounds that evaluate to 1 or
more are reported "vacuous" (distances never exceed 1); inputs violating
a claim's hypotheses yield "not-applicable" rather than a guess.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .agenda import Agenda, conjunction_agenda, xor_agenda
from .bitfn import (
    BoolFn,
    classify,
    coalition_members,
    constant,
    depends_only_on,
    distance_uniform,
    ignorability,
    influence,
    junta_projection,
    popcount,
)
from .fourier import character, spectral_sum
from .indices import (
    dependency_index_max,
    ic_conjunction,
    ic_xor,
    inconsistency_index,
    independent_approximation,
    min_ic_over_conclusion,
)
from .mechanism import (
    IndependentMechanism,
    Mechanism,
    closed_families,
    mech_distance_exact,
    output_vector,
)
from .oracle import CIFamily, nearest_ci


@dataclass(frozen=True)
class BoundReport:
    claim: str
    agenda_id: str
    voters: int
    issues: int
    status: str                     # satisfied | violated | vacuous | not-applicable
    ic: Fraction | None = None
    di: Fraction | None = None
    distance: Fraction | None = None
    bound: float | None = None
    witness: str = ""
    detail: dict = field(default_factory=dict)

    def recompute_status(self) -> str:
        """Re-derive the verdict from the stored quantities."""
        if self.status == "not-applicable":
            return "not-applicable"
        if self.bound is not None and self.bound >= 1:
            return "vacuous"
        if self.distance is None or self.bound is None:
            return self.status
        # a zero distance meets even a strict zero bound (F is in the family)
        ok = (self.distance == 0
              or (float(self.distance) <= self.bound if self.detail.get("closed", False)
                  else float(self.distance) < self.bound))
        return "satisfied" if ok else "violated"

    def csv_row(self) -> list[str]:
        def rat(x):
            if x is None:
                return ["", ""]
            frac = Fraction(x)
            den = frac.denominator
            if den & (den - 1):
                return [f"{float(frac)!r}", ""]
            return [str(frac.numerator), str(den.bit_length() - 1)]

        return ([self.claim, self.agenda_id, str(self.voters), str(self.issues)]
                + rat(self.ic) + rat(self.di) + rat(self.distance)
                + ["" if self.bound is None else repr(float(self.bound)),
                   self.status, self.witness])


CSV_HEADER = ["claim", "agenda", "n", "m", "ic_num", "ic_logden", "di_num",
              "di_logden", "distance_num", "distance_logden", "bound_float",
              "status", "witness"]


def _one_line(mech: Mechanism) -> str:
    return mech.serialize().replace("\n", ";")


# ---------------------------------------------------------------------------
# conjunction-agenda main bound


def and_bound(m_premises: int, n: int, epsilon: Fraction) -> float:
    """5m (n^2 eps)^(1/(m^2+m-1)) with m counting premises."""
    m = m_premises
    if epsilon == 0:
        return 0.0
    return 5 * m * float(n * n * epsilon) ** (1 / (m * m + m - 1))


def check_mand(F: IndependentMechanism, m_premises: int, n: int,
               family: CIFamily | None = None) -> BoundReport:
    """Distance from an independent conjunction-agenda mechanism to the
    consistent-independent family, against the polynomial-in-IC bound."""
    agenda = conjunction_agenda(m_premises).expand()
    if F.issues != m_premises + 1 or F.voters != n:
        raise ValueError("mechanism shape does not match the agenda")
    eps = ic_conjunction(list(F.fns[:-1]), F.fns[-1])
    bound = and_bound(m_premises, n, eps)
    if family is None:
        family = CIFamily(f"conjunction:{m_premises}", n,
                          tuple(closed_families(f"conjunction:{m_premises}", n)))
    nearest, distance = nearest_ci(F, agenda, n, family)
    if bound >= 1:
        status = "vacuous"
    elif distance == 0 or float(distance) < bound:
        status = "satisfied"
    else:
        status = "violated"
    return BoundReport("mand", f"conjunction:{m_premises}", n, m_premises + 1,
                       status, ic=eps, distance=distance, bound=bound,
                       witness=_one_line(nearest))


def sweep_mand(m_premises: int, n: int, workers: int = 1):
    """Check every independent mechanism on the conjunction agenda.

    Returns (total, violations) where violations lists the serializations
    of mechanisms whose distance misses a non-vacuous bound.
    """
    n_tables = 1 << (1 << n)
    total = n_tables ** (m_premises + 1)
    chunks = _chunk_ranges(n_tables, workers)
    args = [(m_premises, n, lo, hi) for lo, hi in chunks]
    if workers > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            parts = pool.map(_sweep_mand_chunk, args)
    else:
        parts = [_sweep_mand_chunk(a) for a in args]
    violations = [v for part in parts for v in part]
    return total, violations


def _sweep_mand_chunk(args):
    m_premises, n, lo, hi = args
    agenda = conjunction_agenda(m_premises).expand()
    family = closed_families(f"conjunction:{m_premises}", n)
    family_outputs = [output_vector(g, agenda, n) for g in family]
    n_tables = 1 << (1 << n)
    violations = []
    fns = [BoolFn(n, t) for t in range(n_tables)]
    for t0 in range(lo, hi):
        for rest in itertools.product(fns, repeat=m_premises):
            tup = (fns[t0],) + rest
            eps = ic_conjunction(list(tup[:-1]), tup[-1])
            bound = and_bound(m_premises, n, eps)
            if bound >= 1:
                continue
            F = IndependentMechanism(tup)
            target = output_vector(F, agenda, n)
            best = min(sum(1 for a, b in zip(target, out) if a != b)
                       for out in family_outputs)
            if best and not best / len(target) < bound:
                violations.append(_one_line(F))
    return violations


# ---------------------------------------------------------------------------
# xor-agenda main bound


def check_mxor(F: IndependentMechanism, m_issues: int, n: int,
               family: CIFamily | None = None) -> BoundReport:
    """Linear-in-IC closeness to the sign-consistent linear tuples on the
    xor agenda; applicable when IC < 1/6."""
    agenda = xor_agenda(m_issues - 1).expand()
    if F.issues != m_issues or F.voters != n:
        raise ValueError("mechanism shape does not match the agenda")
    eps = ic_xor(list(F.fns))
    bound_frac = m_issues * eps
    if family is None:
        family = CIFamily(f"xor:{m_issues - 1}", n,
                          tuple(closed_families(f"xor:{m_issues - 1}", n)))
    nearest, distance = nearest_ci(F, agenda, n, family)
    if eps >= Fraction(1, 6):
        status = "not-applicable"
    elif bound_frac >= 1:
        status = "vacuous"
    else:
        status = "satisfied" if distance <= bound_frac else "violated"
    return BoundReport("mxor", f"xor:{m_issues - 1}", n, m_issues, status,
                       ic=eps, distance=distance, bound=float(bound_frac),
                       witness=_one_line(nearest), detail={"closed": True})


def sweep_mxor(m_issues: int, n: int, workers: int = 1):
    """Check every independent mechanism on the xor agenda and cross-check
    the spectral inconsistency formula against plain enumeration.

    Returns (total, violations, formula_mismatches).
    """
    n_tables = 1 << (1 << n)
    total = n_tables**m_issues
    chunks = _chunk_ranges(n_tables, workers)
    args = [(m_issues, n, lo, hi) for lo, hi in chunks]
    if workers > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            parts = pool.map(_sweep_mxor_chunk, args)
    else:
        parts = [_sweep_mxor_chunk(a) for a in args]
    violations = [v for part in parts for v in part[0]]
    mismatches = [v for part in parts for v in part[1]]
    return total, violations, mismatches


def _sweep_mxor_chunk(args):
    m_issues, n, lo, hi = args
    agenda = xor_agenda(m_issues - 1).expand()
    family = closed_families(f"xor:{m_issues - 1}", n)
    family_outputs = [output_vector(g, agenda, n) for g in family]
    consistent = set(agenda.consistent)
    n_tables = 1 << (1 << n)
    fns = [BoolFn(n, t) for t in range(n_tables)]
    violations = []
    mismatches = []
    sixth = Fraction(1, 6)
    for t0 in range(lo, hi):
        for rest in itertools.product(fns, repeat=m_issues - 1):
            tup = (fns[t0],) + rest
            F = IndependentMechanism(tup)
            eps = ic_xor(list(tup))
            target = output_vector(F, agenda, n)
            enumerated = Fraction(sum(1 for out in target if out not in consistent),
                                  len(target))
            if enumerated != eps:
                mismatches.append(_one_line(F))
            if eps >= sixth:
                continue
            best = min(sum(1 for a, b in zip(target, out) if a != b)
                       for out in family_outputs)
            if not Fraction(best, len(target)) <= m_issues * eps:
                violations.append(_one_line(F))
    return violations, mismatches


def _chunk_ranges(size: int, workers: int):
    workers = max(1, min(workers, size))
    step = (size + workers - 1) // workers
    return [(lo, min(lo + step, size)) for lo in range(0, size, step)]


# ---------------------------------------------------------------------------
# relaxing both constraints


def single_constraint_delta(kind: str, n: int, epsilon: float) -> float:
    """Admissible inconsistency level delta(eps) for the independent-only
    theorem of the named agenda kind."""
    name, _, arg = kind.partition(":")
    if name == "conjunction":
        m = int(arg)
        return n**-2 * (epsilon / (5 * m)) ** (m * m + m - 1)
    if name == "xor":
        m_issues = int(arg) + 1
        return epsilon / m_issues
    raise ValueError(f"unsupported agenda kind {kind!r}")


def default_beta(kind: str, n: int, epsilon: float) -> float:
    """Midpoint of the admissible beta interval: the largest beta with
    delta((1-beta) eps) >= beta eps, halved."""
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2
        if single_constraint_delta(kind, n, (1 - mid) * epsilon) >= mid * epsilon:
            lo = mid
        else:
            hi = mid
    return lo / 2


def check_relax(F: Mechanism, kind: str, agenda: Agenda, n: int,
                epsilon: float, beta: float | None = None,
                family: CIFamily | None = None) -> BoundReport:
    """Both-constraints relaxation: small IC and DI imply closeness to a
    consistent independent mechanism, via the independent-approximation
    construction chained with the single-constraint bound."""
    m = agenda.issues
    if beta is None:
        beta = default_beta(kind, n, epsilon)
    delta_ic = single_constraint_delta(kind, n, (1 - beta) * epsilon) - beta * epsilon
    delta_di = beta * epsilon / (2 * m)
    ic = inconsistency_index(F, agenda, n).value
    di = dependency_index_max(F, agenda, n).value
    detail = {"beta": beta, "delta_ic": delta_ic, "delta_di": delta_di}
    # beta = 0 keeps delta_di = 0, which independent inputs (DI = 0) still meet
    if delta_ic <= 0 or float(ic) > delta_ic or float(di) > delta_di:
        return BoundReport("relax", kind, n, m, "not-applicable", ic=ic, di=di,
                           bound=epsilon, detail=detail)
    H = independent_approximation(F, agenda, n)
    d_fh = mech_distance_exact(F, H, agenda, n)
    assert d_fh <= 2 * m * di, "independent approximation exceeded its bound"
    if family is None:
        family = CIFamily(kind, n, tuple(closed_families(kind, n)))
    G, d_hg = nearest_ci(H, agenda, n, family)
    d_fg = mech_distance_exact(F, G, agenda, n)
    assert d_fg <= d_fh + d_hg, "triangle inequality violated"
    detail.update({"d_fh": d_fh, "d_hg": d_hg, "ic_h": inconsistency_index(H, agenda, n).value})
    status = "satisfied" if float(d_fg) < epsilon else "violated"
    return BoundReport("relax", kind, n, m, status, ic=ic, di=di,
                       distance=d_fg, bound=epsilon, witness=_one_line(G),
                       detail=detail)


# ---------------------------------------------------------------------------
# conjunction proof lemmas


def check_boundpi(fs: list[BoolFn], i: int, k: int, l: int) -> BoundReport:
    """Ignorability-influence product bounded by the optimal inconsistency:
    OSI_i(f^k) Inf_i(f^l) <= 4 (prod_{j != k,l} d(f^j, 0))^-1 ICtilde."""
    if k == l:
        raise ValueError("the two issues must differ")
    n = fs[0].arity
    m = len(fs)
    lhs = ignorability(i, fs[k - 1]) * influence(i, fs[l - 1])
    ictilde, _ = min_ic_over_conclusion(fs)
    prod = Fraction(1)
    for j, f in enumerate(fs, start=1):
        if j not in (k, l):
            prod *= distance_uniform(f, constant(0, n))
    if prod == 0:
        return BoundReport("boundpi", f"conjunction:{m}", n, m + 1, "satisfied",
                           ic=ictilde, distance=lhs, bound=math.inf)
    rhs = 4 * ictilde / prod
    status = "satisfied" if lhs <= rhs else "violated"
    return BoundReport("boundpi", f"conjunction:{m}", n, m + 1, status,
                       ic=ictilde, distance=lhs, bound=float(rhs),
                       detail={"rhs": rhs})


def check_granularity(fs: list[BoolFn], junta: int) -> BoundReport:
    """The optimal inconsistency of junta-restricted functions is an integer
    multiple of 2^(-m |J|)."""
    n = fs[0].arity
    m = len(fs)
    for f in fs:
        if not depends_only_on(f, junta):
            raise ValueError("function depends on a voter outside the junta")
    ictilde, _ = min_ic_over_conclusion(fs)
    cell = 1 << (m * popcount(junta))
    ok = cell % ictilde.denominator == 0
    return BoundReport("granularity", f"conjunction:{m}", n, m + 1,
                       "satisfied" if ok else "violated", ic=ictilde,
                       detail={"junta": junta, "cell_log2": m * popcount(junta)})


def check_junta_lemma(fs: list[BoolFn], delta: Fraction, epsilon: Fraction) -> BoundReport:
    """The small-ignorability junta construction: under the hypotheses, all
    projections collapse to one oligarchy, stay close to the originals, and
    the junta stays logarithmically small."""
    n = fs[0].arity
    m = len(fs)
    delta, epsilon = Fraction(delta), Fraction(epsilon)
    ictilde, _ = min_ic_over_conclusion(fs)
    zero = constant(0, n)
    hyp_ic = ictilde <= epsilon
    hyp_far = all(distance_uniform(f, zero) >= delta for f in fs)
    hyp_eps = epsilon < Fraction(1, 2 ** (m * m + 3)) / m / n**2 * delta ** (m * m + m - 1)
    if not (hyp_ic and hyp_far and hyp_eps):
        return BoundReport("junta", f"conjunction:{m}", n, m + 1, "not-applicable",
                           ic=ictilde,
                           detail={"hyp_ic": hyp_ic, "hyp_far": hyp_far,
                                   "hyp_eps": hyp_eps})
    junta = 0
    threshold = delta / n
    for f in fs:
        for i in range(1, n + 1):
            if ignorability(i, f) <= threshold:
                junta |= 1 << (i - 1)
    projections = [junta_projection(f, junta) for f in fs]
    tags = classify(projections[0])
    same_oligarchy = (all(p == projections[0] for p in projections)
                      and tags["oligarchy"] is not None)
    dist_bound = 4 * n**2 * epsilon * delta ** (1 - m)
    close = all(distance_uniform(f, p) <= dist_bound
                for f, p in zip(fs, projections))
    # |J| <= m (1 + log2(1/delta))  <=>  delta^m 2^(|J| - m) <= 1
    size = popcount(junta)
    small = delta**m * Fraction(2**max(0, size - m), 2**max(0, m - size)) <= 1
    failed = [name for name, ok in
              (("oligarchy", same_oligarchy), ("closeness", close), ("size", small))
              if not ok]
    return BoundReport("junta", f"conjunction:{m}", n, m + 1,
                       "satisfied" if not failed else "violated", ic=ictilde,
                       bound=float(dist_bound),
                       detail={"junta": junta,
                               "junta_members": coalition_members(junta),
                               "failed": failed,
                               "oligarchy": tags["oligarchy"]})


# ---------------------------------------------------------------------------
# three-function linearity corollary


def blr_three_function(f: BoolFn, g: BoolFn, h: BoolFn, mode: str = "exact",
                       samples: int = 100_000, seed: int | None = None) -> BoundReport:
    """Three-function linearity: high acceptance of f(x) xor g(y) = h(x xor y)
    yields a common character (up to sign-consistent negations) close to all
    three functions."""
    if not f.arity == g.arity == h.arity:
        raise ValueError("arity mismatch")
    n = f.arity
    if mode == "exact":
        if 2 * n > 26:
            raise ValueError("exact mode needs 2n <= 26")
        agree = 0
        for x in range(f.size):
            fx = f.evaluate(x)
            for y in range(f.size):
                if fx ^ g.evaluate(y) == h.evaluate(x ^ y):
                    agree += 1
        acceptance = Fraction(agree, f.size**2)
    elif mode == "mc":
        if seed is None:
            raise ValueError("mc mode requires a seed")
        import random

        rng = random.Random(seed)
        agree = 0
        for _ in range(samples):
            x, y = rng.randrange(f.size), rng.randrange(f.size)
            agree += f.evaluate(x) ^ g.evaluate(y) == h.evaluate(x ^ y)
        acceptance = Fraction(agree, samples)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    eps = 1 - acceptance
    detail = {"acceptance": acceptance,
              "spectral": (1 + spectral_sum([f, g, h])) / 2}
    if eps >= Fraction(1, 6):
        return BoundReport("blr", "xor:2", n, 3, "not-applicable", ic=eps,
                           detail=detail)
    best = None
    for mask in range(1 << n):
        chi = character(mask, n)
        neg = chi.negate()
        for sa, sb in itertools.product((0, 1), repeat=2):
            sc = sa ^ sb  # product of signs must be +1
            da = distance_uniform(f, neg if sa else chi)
            db = distance_uniform(g, neg if sb else chi)
            dc = distance_uniform(h, neg if sc else chi)
            worst = max(da, db, dc)
            key = (worst, mask, sa, sb)
            if best is None or key < best[0]:
                best = (key, (mask, sa, sb, sc), (da, db, dc))
    (worst, *_), (mask, sa, sb, sc), dists = best
    # the recovered triple is linear-consistent by the sign constraint
    assert (sa ^ sb) == sc
    constant_achieved = float(worst / eps) if eps else 0.0
    detail.update({"character": mask, "signs": (sa, sb, sc),
                   "distances": dists, "constant": constant_achieved})
    status = "satisfied" if worst <= 2 * eps else "violated"
    return BoundReport("blr", "xor:2", n, 3, status, ic=eps, distance=worst,
                       bound=float(2 * eps) if eps else 0.0,
                       witness=character(mask, n).serialize(), detail=detail)
