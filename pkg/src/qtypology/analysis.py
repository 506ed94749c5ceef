"""Downstream analyses over typed questions.

Everything here works on flat QuestionRecord rows joined from the corpus
and the per-question type assignments, so the statistics stay decoupled
from how the types were induced. The hypothesis tests use exact small-
sample distributions below a cutoff and tie-corrected normal
approximations above it; the exact paths are integer or rational
arithmetic so equal inputs give bit-equal p-values.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date as Date
from fractions import Fraction
from itertools import combinations
from statistics import median
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .corpus import Corpus, tenure_years
from .errors import DegenerateSampleError, UndefinedStatisticError
from .typology import TypeAssignment

SIGNIFICANCE_LEVELS = (0.05, 0.01, 0.001)


def significance_stars(p: Optional[float]) -> str:
    """'*' per threshold crossed, strict inequality, empty for None."""
    if p is None:
        return ""
    stars = 0
    for level in SIGNIFICANCE_LEVELS:
        if p < level:
            stars += 1
    return "*" * stars


@dataclass(frozen=True)
class QuestionRecord:
    pair_id: str
    type_id: int
    asker_id: str
    affiliation: Optional[str]
    tenure: Optional[int]
    first_office_date: Optional[Date]
    date: Date


def build_records(
    corpus: Corpus, assignments: Iterable[TypeAssignment]
) -> list[QuestionRecord]:
    """Join assignments with speaker metadata; unassigned pairs are absent."""
    out = []
    for a in assignments:
        if a.owner_id not in corpus:
            continue
        pair = corpus.get(a.owner_id)
        out.append(
            QuestionRecord(
                pair_id=pair.pair_id,
                type_id=a.type_id,
                asker_id=pair.asker.speaker_id,
                affiliation=pair.asker.affiliation,
                tenure=tenure_years(pair.asker, pair.date),
                first_office_date=pair.asker.first_office_date,
                date=pair.date,
            )
        )
    return out


@dataclass(frozen=True)
class LogOddsResult:
    log_odds: float
    ci_low: float
    ci_high: float
    corrected: bool  # 0.5 added to every cell because one was empty
    table: tuple[float, float, float, float]  # a, b, c, d after correction


def log_odds_by_group(
    records: Sequence[QuestionRecord],
    type_id: int,
    predicate: Callable[[QuestionRecord], bool],
) -> LogOddsResult:
    """Log odds of asking a type-type_id question, group vs complement.

    With a = in-group questions of the type, b = other in-group questions,
    c and d their complements, the statistic is ln((a/b)/(c/d)) with the
    Wald 95% interval +-1.96 sqrt(1/a+1/b+1/c+1/d). Any empty cell brings
    the 0.5 correction to all four cells, flagged on the result. An empty
    group or complement is undefined and raises.
    """
    a = b = c = d = 0
    for r in records:
        if predicate(r):
            if r.type_id == type_id:
                a += 1
            else:
                b += 1
        else:
            if r.type_id == type_id:
                c += 1
            else:
                d += 1
    if a + b == 0 or c + d == 0:
        raise UndefinedStatisticError(
            f"log odds for type {type_id}: empty group or complement"
        )
    corrected = 0 in (a, b, c, d)
    fa, fb, fc, fd = (
        (a + 0.5, b + 0.5, c + 0.5, d + 0.5) if corrected else (float(a), float(b), float(c), float(d))
    )
    lor = math.log(fa) - math.log(fb) - math.log(fc) + math.log(fd)
    half = 1.96 * math.sqrt(1.0 / fa + 1.0 / fb + 1.0 / fc + 1.0 / fd)
    return LogOddsResult(
        log_odds=lor,
        ci_low=lor - half,
        ci_high=lor + half,
        corrected=corrected,
        table=(fa, fb, fc, fd),
    )


@dataclass
class PropensityTable:
    """Per-asker distribution over types; every row sums to one."""

    n_types: int
    rows: dict[str, tuple[float, ...]]
    counts: dict[str, int]


def propensities(
    records: Sequence[QuestionRecord], n_types: int, min_questions: int = 1
) -> PropensityTable:
    per_asker: dict[str, list[int]] = {}
    for r in records:
        per_asker.setdefault(r.asker_id, [0] * n_types)[r.type_id] += 1
    rows = {}
    counts = {}
    for asker, tally in per_asker.items():
        total = sum(tally)
        if total >= min_questions:
            rows[asker] = tuple(t / total for t in tally)
            counts[asker] = total
    return PropensityTable(n_types=n_types, rows=rows, counts=counts)


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str  # exact | normal
    n: int


def _two_sided_normal(z: float) -> float:
    return min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))


def wilcoxon_signed_rank(
    before: Sequence[float], after: Sequence[float], exact_cutoff: int = 25
) -> TestResult:
    """Paired signed-rank test on after - before differences.

    Zero differences are dropped; dropping everything raises
    DegenerateSampleError. Ties among the absolute differences get
    average ranks. The statistic is min(W+, W-). Up to exact_cutoff
    retained pairs the two-sided p comes from the exact sign-flip
    distribution (a subset-sum count over doubled ranks); beyond that a
    tie-corrected normal approximation is used.
    """
    if len(before) != len(after):
        raise ValueError("paired samples must have equal length")
    diffs = [a - b for b, a in zip(before, after) if a != b]
    n = len(diffs)
    if n == 0:
        raise DegenerateSampleError("all paired differences are zero")
    magnitudes = np.array([abs(d) for d in diffs])
    ranks = rankdata(magnitudes)
    w_plus = float(sum(r for r, d in zip(ranks, diffs) if d > 0))
    w_minus = float(sum(r for r, d in zip(ranks, diffs) if d < 0))
    statistic = min(w_plus, w_minus)
    if n <= exact_cutoff:
        doubled = [int(round(2 * r)) for r in ranks]
        total = sum(doubled)
        counts = [0] * (total + 1)
        counts[0] = 1
        for r in doubled:
            for s in range(total, r - 1, -1):
                if counts[s - r]:
                    counts[s] += counts[s - r]
        t2 = int(math.floor(2 * statistic + 1e-9))
        favorable = sum(counts[: t2 + 1])
        p = min(1.0, 2 * favorable / (1 << n))
        return TestResult(statistic=statistic, p_value=p, method="exact", n=n)
    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(magnitudes, return_counts=True)
    tie_term = float(sum(t**3 - t for t in tie_counts)) / 48.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
    if var <= 0:
        raise DegenerateSampleError("zero variance in signed-rank statistic")
    z = (w_plus - mean) / math.sqrt(var)
    return TestResult(
        statistic=statistic, p_value=_two_sided_normal(z), method="normal", n=n
    )


def _u_statistic(x: Sequence[float], y: Sequence[float]) -> float:
    u = 0.0
    for xi in x:
        for yj in y:
            if xi > yj:
                u += 1.0
            elif xi == yj:
                u += 0.5
    return u


def mann_whitney_u(
    x: Sequence[float], y: Sequence[float], exact_cutoff: int = 12
) -> TestResult:
    """Rank-sum test for two independent samples; U counts x-over-y wins.

    With combined size up to exact_cutoff the two-sided p is computed by
    enumerating every assignment of the pooled values to the first group
    and counting those at least as extreme (min(U, nm-U) at or below the
    observed one). Larger samples use the tie- and continuity-corrected
    normal approximation.
    """
    n, m = len(x), len(y)
    if n == 0 or m == 0:
        raise DegenerateSampleError("both samples must be non-empty")
    u_obs = _u_statistic(x, y)
    if n + m <= exact_cutoff:
        pooled = list(x) + list(y)
        # doubled to keep everything integral in the presence of 0.5 ties
        extreme_obs = int(round(2 * min(u_obs, n * m - u_obs)))
        favorable = 0
        total = 0
        for picks in combinations(range(n + m), n):
            chosen = [pooled[i] for i in picks]
            rest_mask = set(picks)
            others = [pooled[i] for i in range(n + m) if i not in rest_mask]
            u = _u_statistic(chosen, others)
            total += 1
            if int(round(2 * min(u, n * m - u))) <= extreme_obs:
                favorable += 1
        return TestResult(
            statistic=u_obs, p_value=favorable / total, method="exact", n=n + m
        )
    pooled = np.array(list(x) + list(y), dtype=np.float64)
    _, tie_counts = np.unique(pooled, return_counts=True)
    N = n + m
    tie_term = float(sum(t**3 - t for t in tie_counts)) / (N * (N - 1))
    var = n * m / 12.0 * ((N + 1) - tie_term)
    if var <= 0:
        raise DegenerateSampleError("zero variance in rank-sum statistic")
    mean = n * m / 2.0
    delta = u_obs - mean
    if delta > 0:
        delta -= 0.5
    elif delta < 0:
        delta += 0.5
    z = delta / math.sqrt(var)
    return TestResult(
        statistic=u_obs, p_value=_two_sided_normal(z), method="normal", n=N
    )


def binomial_test(k: int, n: int, p0: float, exact_cutoff: int = 500) -> float:
    """Exact two-sided binomial p: sum of outcome probabilities <= P(k).

    Up to exact_cutoff trials the probabilities are exact rationals, so
    the comparison against P(k) has no rounding slack at all. Beyond the
    cutoff, float probabilities are compared with a relative tolerance.
    """
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0={p0} outside [0, 1]")
    if p0 == 0.0:
        return 1.0 if k == 0 else 0.0
    if p0 == 1.0:
        return 1.0 if k == n else 0.0
    if n <= exact_cutoff:
        q = Fraction(p0)
        pmf = [
            math.comb(n, i) * q**i * (1 - q) ** (n - i) for i in range(n + 1)
        ]
        cutoff = pmf[k]
        return float(sum(pi for pi in pmf if pi <= cutoff))
    log_p, log_q = math.log(p0), math.log1p(-p0)
    log_pmf = [
        math.lgamma(n + 1)
        - math.lgamma(i + 1)
        - math.lgamma(n - i + 1)
        + i * log_p
        + (n - i) * log_q
        for i in range(n + 1)
    ]
    cutoff = log_pmf[k] + 1e-7
    return min(1.0, sum(math.exp(lp) for lp in log_pmf if lp <= cutoff))


@dataclass(frozen=True)
class TenureRow:
    type_id: int
    n: int
    median_tenure: Optional[float]
    p_value: Optional[float]
    stars: str


@dataclass
class TenureReport:
    affiliation: str
    overall_median: Optional[float]
    overall_n: int
    rows: list[TenureRow]


def median_tenure_by_type(
    records: Sequence[QuestionRecord], affiliation: str, n_types: int
) -> TenureReport:
    """Median asker tenure per question type within one affiliation.

    Each type is tested against questions of every other type with a
    rank-sum test; speakers without a first-office date are ineligible
    and simply excluded.
    """
    eligible = [
        r for r in records if r.affiliation == affiliation and r.tenure is not None
    ]
    rows = []
    for t in range(n_types):
        in_type = [float(r.tenure) for r in eligible if r.type_id == t]
        out_type = [float(r.tenure) for r in eligible if r.type_id != t]
        if not in_type or not out_type:
            rows.append(
                TenureRow(type_id=t, n=len(in_type), median_tenure=None, p_value=None, stars="")
            )
            continue
        result = mann_whitney_u(in_type, out_type)
        rows.append(
            TenureRow(
                type_id=t,
                n=len(in_type),
                median_tenure=float(median(in_type)),
                p_value=result.p_value,
                stars=significance_stars(result.p_value),
            )
        )
    return TenureReport(
        affiliation=affiliation,
        overall_median=float(median(r.tenure for r in eligible)) if eligible else None,
        overall_n=len(eligible),
        rows=rows,
    )


@dataclass(frozen=True)
class SwitchTypeRow:
    type_id: int
    mean_before: float
    mean_after: float
    p_value: Optional[float]
    stars: str
    degenerate: bool


@dataclass
class SwitchDirection:
    direction: str  # to_government | to_opposition
    n_askers: int
    rows: list[SwitchTypeRow]


def _window_bounds(elections: Sequence[Date], e: Date) -> tuple[Optional[Date], Optional[Date]]:
    earlier = [d for d in elections if d < e]
    later = [d for d in elections if d > e]
    return (max(earlier) if earlier else None, min(later) if later else None)


def switch_analysis(
    records: Sequence[QuestionRecord],
    elections: Sequence[Date],
    n_types: int,
    min_questions: int = 5,
) -> list[SwitchDirection]:
    """Propensity shifts for askers whose side changed at an election.

    For each election, the before window runs from the previous election
    (or the start of the data) and the after window to the next one. An
    asker qualifies for a direction when all their before questions are on
    one side, all their after questions on the other, and both windows
    hold at least min_questions questions. Qualifying (asker, election)
    units are pooled across elections; per type, the paired signed-rank
    test compares before and after propensities.
    """
    elections = sorted(elections)
    units: dict[str, list[tuple[tuple[float, ...], tuple[float, ...]]]] = {
        "to_government": [],
        "to_opposition": [],
    }
    for e in elections:
        prev_e, next_e = _window_bounds(elections, e)
        by_asker: dict[str, tuple[list[QuestionRecord], list[QuestionRecord]]] = {}
        for r in records:
            if r.affiliation not in ("government", "opposition"):
                continue
            if r.date < e:
                if prev_e is not None and r.date < prev_e:
                    continue
                by_asker.setdefault(r.asker_id, ([], []))[0].append(r)
            else:
                if next_e is not None and r.date >= next_e:
                    continue
                by_asker.setdefault(r.asker_id, ([], []))[1].append(r)
        for asker, (before, after) in sorted(by_asker.items()):
            if len(before) < min_questions or len(after) < min_questions:
                continue
            aff_before = {r.affiliation for r in before}
            aff_after = {r.affiliation for r in after}
            if len(aff_before) != 1 or len(aff_after) != 1:
                continue
            b_aff, a_aff = aff_before.pop(), aff_after.pop()
            if b_aff == a_aff:
                continue
            direction = "to_government" if a_aff == "government" else "to_opposition"

            def _props(rows: list[QuestionRecord]) -> tuple[float, ...]:
                tally = [0] * n_types
                for r in rows:
                    tally[r.type_id] += 1
                total = sum(tally)
                return tuple(t / total for t in tally)

            units[direction].append((_props(before), _props(after)))

    out = []
    for direction in ("to_government", "to_opposition"):
        pairs = units[direction]
        rows = []
        for t in range(n_types):
            befores = [b[t] for b, _ in pairs]
            afters = [a[t] for _, a in pairs]
            if not pairs:
                rows.append(
                    SwitchTypeRow(t, float("nan"), float("nan"), None, "", True)
                )
                continue
            mean_b = sum(befores) / len(befores)
            mean_a = sum(afters) / len(afters)
            try:
                res = wilcoxon_signed_rank(befores, afters)
                rows.append(
                    SwitchTypeRow(
                        type_id=t,
                        mean_before=mean_b,
                        mean_after=mean_a,
                        p_value=res.p_value,
                        stars=significance_stars(res.p_value),
                        degenerate=False,
                    )
                )
            except DegenerateSampleError:
                rows.append(SwitchTypeRow(t, mean_b, mean_a, None, "", True))
        out.append(SwitchDirection(direction=direction, n_askers=len(pairs), rows=rows))
    return out


@dataclass(frozen=True)
class CohortTypeRow:
    type_id: int
    mean_new: float
    mean_old: float
    p_value: Optional[float]
    stars: str


@dataclass
class CohortReport:
    affiliation: str
    n_new: int
    n_old: int
    rows: list[CohortTypeRow]


def cohort_analysis(
    records: Sequence[QuestionRecord],
    elections: Sequence[Date],
    n_types: int,
    min_questions: int = 1,
) -> list[CohortReport]:
    """First-term askers versus veterans in the sitting after an election.

    For each election window, askers split into the cohort first holding
    office at or after the election and those already in office before
    it; askers without a first-office date are excluded. Units are
    (asker, election) pairs pooled across elections and compared per
    affiliation and type with the rank-sum test on propensities.
    """
    elections = sorted(elections)
    cohorts: dict[str, dict[str, list[tuple[float, ...]]]] = {
        "government": {"new": [], "old": []},
        "opposition": {"new": [], "old": []},
    }
    for e in elections:
        _, next_e = _window_bounds(elections, e)
        window: dict[str, list[QuestionRecord]] = {}
        for r in records:
            if r.date < e or (next_e is not None and r.date >= next_e):
                continue
            if r.affiliation not in ("government", "opposition"):
                continue
            if r.first_office_date is None:
                continue
            window.setdefault(r.asker_id, []).append(r)
        for asker, rows in sorted(window.items()):
            if len(rows) < min_questions:
                continue
            affs = {r.affiliation for r in rows}
            if len(affs) != 1:
                continue
            affiliation = affs.pop()
            first = rows[0].first_office_date
            cohort = "new" if first >= e else "old"
            tally = [0] * n_types
            for r in rows:
                tally[r.type_id] += 1
            total = sum(tally)
            cohorts[affiliation][cohort].append(tuple(t / total for t in tally))

    out = []
    for affiliation in ("government", "opposition"):
        new_rows = cohorts[affiliation]["new"]
        old_rows = cohorts[affiliation]["old"]
        rows = []
        for t in range(n_types):
            news = [row[t] for row in new_rows]
            olds = [row[t] for row in old_rows]
            if not news or not olds:
                rows.append(CohortTypeRow(t, float("nan"), float("nan"), None, ""))
                continue
            mean_new = sum(news) / len(news)
            mean_old = sum(olds) / len(olds)
            try:
                res = mann_whitney_u(news, olds)
                p: Optional[float] = res.p_value
            except DegenerateSampleError:
                p = None
            rows.append(
                CohortTypeRow(
                    type_id=t,
                    mean_new=mean_new,
                    mean_old=mean_old,
                    p_value=p,
                    stars=significance_stars(p),
                )
            )
        out.append(
            CohortReport(
                affiliation=affiliation,
                n_new=len(new_rows),
                n_old=len(old_rows),
                rows=rows,
            )
        )
    return out


def export_latent_features(
    assignments: Sequence[TypeAssignment],
    projections: dict[str, np.ndarray],
    path: str,
) -> None:
    """CSV of per-question type, centroid distance, and latent coordinates.

    Floats are written with repr so reading the file back reproduces the
    exact values.
    """
    if not assignments:
        raise ValueError("no assignments to export")
    d = len(next(iter(projections.values())))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["pair_id", "type_id", "distance"] + [f"z{i}" for i in range(d)]
        )
        for a in assignments:
            vec = projections[a.owner_id]
            writer.writerow(
                [a.owner_id, a.type_id, repr(a.distance)] + [repr(float(v)) for v in vec]
            )


def read_latent_features(path: str) -> list[tuple[str, int, float, np.ndarray]]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        d = len(header) - 3
        for row in reader:
            out.append(
                (
                    row[0],
                    int(row[1]),
                    float(row[2]),
                    np.array([float(v) for v in row[3 : 3 + d]]),
                )
            )
    return out
