"""Executable checks for the known failure modes of group citation indicators.

Three diagnostics:

* consistency: exhaustive search for instances where adding one identical
  paper to two groups flips their ranking. The ratio-of-sums indicator admits
  such flips at tiny sizes; the mean-of-ratios indicator admits none at equal
  group sizes, and the search verifies that exhaustively within bounds.
* indexer sensitivity: rescore the same papers under two category schemes and
  report every per-paper and group-level shift. Fractional counting is
  classification-free, so its deltas are asserted to be identically zero.
* rank-sum test: Mann-Whitney U with midranks and tie-corrected normal
  approximation, for comparing two groups' score distributions without
  assuming anything about their shape.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .baselines import Weighting, compute_baselines
from .corpus import Corpus, Journal
from .indicators import (
    GroupSelection,
    IndicatorReport,
    cpp_fcsm,
    fractional_score,
    mncs,
    score_group,
    score_papers,
    scored_from_pairs,
)

RATIO_OF_SUMS = "cpp_fcsm"
MEAN_OF_RATIOS = "mncs"

Pair = tuple[int, int]


@dataclass(frozen=True)
class SearchBounds:
    """Instance space for the consistency search: equal-size groups of
    integer (citations, expected) pairs with citations in [0, max_citations]
    and expected in [1, max_expected]."""

    max_group_size: int
    max_citations: int
    max_expected: int

    def __post_init__(self) -> None:
        if self.max_group_size < 1 or self.max_citations < 0 or self.max_expected < 1:
            raise ValueError(f"degenerate search bounds {self}")

    def instance_count(self) -> int:
        """Number of (A, B, added) instances the search visits."""
        papers = (self.max_citations + 1) * self.max_expected
        total = 0
        for size in range(1, self.max_group_size + 1):
            groups = math.comb(papers + size - 1, size)
            total += groups * groups * papers
        return total


@dataclass(frozen=True)
class Counterexample:
    """A ranking flip: A beats B, yet after adding the same paper to both,
    B beats A."""

    indicator: str
    group_a: tuple[Pair, ...]
    group_b: tuple[Pair, ...]
    added_paper: Pair
    before_a: float
    before_b: float
    after_a: float
    after_b: float

    def is_strict_flip(self) -> bool:
        return self.before_a > self.before_b and self.after_a < self.after_b


def evaluate_pairs(pairs: Sequence[Pair], indicator: str) -> float:
    """Group indicator value for bare (citations, expected) pairs."""
    scored = scored_from_pairs(pairs)
    if indicator == RATIO_OF_SUMS:
        return cpp_fcsm(scored)
    if indicator == MEAN_OF_RATIOS:
        return mncs(scored)
    raise ValueError(f"unknown indicator {indicator!r}")


def build_counterexample(
    indicator: str,
    group_a: Sequence[Pair],
    group_b: Sequence[Pair],
    added_paper: Pair,
) -> Counterexample:
    return Counterexample(
        indicator=indicator,
        group_a=tuple(group_a),
        group_b=tuple(group_b),
        added_paper=added_paper,
        before_a=evaluate_pairs(group_a, indicator),
        before_b=evaluate_pairs(group_b, indicator),
        after_a=evaluate_pairs([*group_a, added_paper], indicator),
        after_b=evaluate_pairs([*group_b, added_paper], indicator),
    )


# Desk-scale instance: a one-paper group at exactly its expectation versus
# one slightly below, plus an uncited paper with a large expectation.
# Ratio-of-sums flips the ranking (1.0 > 0.9 becomes 1/11 < 0.45); the
# mean-of-ratios keeps it (0.5 > 0.45).
SHIPPED_COUNTEREXAMPLE = build_counterexample(
    RATIO_OF_SUMS,
    group_a=[(1, 1)],
    group_b=[(9, 10)],
    added_paper=(0, 10),
)


def consistency_counterexample(
    indicator: str, bounds: SearchBounds
) -> Counterexample | None:
    """Exhaustively search equal-size groups for a ranking flip.

    Instances are visited in lexicographic order (group size ascending, then
    group A, group B and the added paper, each over pairs ordered by
    (citations, expected)), and the first flip found is returned, so the
    result is deterministic. Comparisons use exact integer arithmetic; the
    reported values come from the real indicator implementations.

    Cost grows as the squared number of multisets of pairs times the number
    of pairs, per group size; ``bounds.instance_count()`` gives the exact
    instance total (890,000 at the default size 2, c and e up to 4, well
    under a second).

    For the ratio-of-sums indicator a flip exists even at group size 1; for
    the mean-of-ratios indicator equal-size groups admit none, so the search
    returns None after visiting every instance in bounds.
    """
    if indicator not in (RATIO_OF_SUMS, MEAN_OF_RATIOS):
        raise ValueError(f"unknown indicator {indicator!r}")
    papers = [
        (c, e)
        for c in range(bounds.max_citations + 1)
        for e in range(1, bounds.max_expected + 1)
    ]
    # Common denominator for exact mean-of-ratios comparisons: c/e scaled by
    # lcm(1..max_expected) is an integer.
    scale = math.lcm(*range(1, bounds.max_expected + 1))
    for size in range(1, bounds.max_group_size + 1):
        groups = list(combinations_with_replacement(papers, size))
        sums_c = [sum(c for c, _ in group) for group in groups]
        sums_e = [sum(e for _, e in group) for group in groups]
        ratio_sums = [
            sum(c * (scale // e) for c, e in group) for group in groups
        ]
        if indicator == RATIO_OF_SUMS:
            found = _search_ratio_of_sums(groups, sums_c, sums_e, papers)
        else:
            found = _search_mean_of_ratios(groups, ratio_sums, papers, scale)
        if found is not None:
            index_a, index_b, added = found
            return build_counterexample(
                indicator, groups[index_a], groups[index_b], added
            )
    return None


def _search_ratio_of_sums(
    groups: list[tuple[Pair, ...]],
    sums_c: list[int],
    sums_e: list[int],
    papers: list[Pair],
) -> tuple[int, int, Pair] | None:
    n = len(groups)
    for ia in range(n):
        ca, ea = sums_c[ia], sums_e[ia]
        for ib in range(n):
            cb, eb = sums_c[ib], sums_e[ib]
            if ca * eb <= cb * ea:  # need A strictly ahead before the addition
                continue
            for xc, xe in papers:
                if (ca + xc) * (eb + xe) < (cb + xc) * (ea + xe):
                    return ia, ib, (xc, xe)
    return None


def _search_mean_of_ratios(
    groups: list[tuple[Pair, ...]],
    ratio_sums: list[int],
    papers: list[Pair],
    scale: int,
) -> tuple[int, int, Pair] | None:
    # Equal sizes throughout, so comparing scaled ratio sums compares means.
    n = len(groups)
    added = [c * (scale // e) for c, e in papers]
    for ia in range(n):
        ra = ratio_sums[ia]
        for ib in range(n):
            rb = ratio_sums[ib]
            if ra <= rb:
                continue
            for index, (xc, xe) in enumerate(papers):
                if ra + added[index] < rb + added[index]:
                    return ia, ib, (xc, xe)
    return None


@dataclass(frozen=True)
class PaperSensitivity:
    paper_id: str
    ncs_a: float | None
    ncs_b: float | None
    percentile_a: float
    percentile_b: float
    fractional_delta: float

    @property
    def ncs_delta(self) -> float | None:
        if self.ncs_a is None or self.ncs_b is None:
            return None
        return self.ncs_b - self.ncs_a


@dataclass(frozen=True)
class SensitivityReport:
    """Per-paper and group-level shifts between two category schemes.

    Deltas are scheme B minus scheme A. Fractional deltas are asserted to be
    identically zero at construction time: fractional counting never sees the
    category scheme, so any nonzero delta is a bug, not a finding.
    """

    group: str
    weighting: str
    papers: tuple[PaperSensitivity, ...]
    report_a: IndicatorReport
    report_b: IndicatorReport

    def __post_init__(self) -> None:
        bad = [p.paper_id for p in self.papers if p.fractional_delta != 0.0]
        if bad:
            raise AssertionError(
                f"fractional scores moved with the category scheme: {bad}"
            )

    @property
    def group_deltas(self) -> dict[str, float]:
        return {
            "cpp_fcsm": self.report_b.cpp_fcsm - self.report_a.cpp_fcsm,
            "mncs": self.report_b.mncs - self.report_a.mncs,
            "mdncs": self.report_b.mdncs - self.report_a.mdncs,
            "pp_top1": self.report_b.pp_top1 - self.report_a.pp_top1,
            "mean_fractional": self.report_b.mean_fractional
            - self.report_a.mean_fractional,
        }


def primary_only_scheme(journals: Sequence[Journal]) -> list[Journal]:
    """Derive the scheme that keeps only each journal's primary category."""
    return [
        Journal(journal.id, journal.title, (journal.primary_category,))
        for journal in journals
    ]


def indexer_sensitivity(
    corpus: Corpus,
    group: GroupSelection,
    scheme_a: Sequence[Journal],
    scheme_b: Sequence[Journal],
    weighting: Weighting,
    top_x: float = 1.0,
) -> SensitivityReport:
    """Score the group under both schemes over the same citation graph."""
    corpus_a = corpus.with_journals(scheme_a)
    corpus_b = corpus.with_journals(scheme_b)
    table_a = compute_baselines(corpus_a)
    table_b = compute_baselines(corpus_b)
    scored_a = score_papers(corpus_a, table_a, group.paper_ids, weighting)
    scored_b = score_papers(corpus_b, table_b, group.paper_ids, weighting)
    papers = []
    for paper_a, paper_b in zip(scored_a, scored_b):
        fractional_a = fractional_score(corpus_a, paper_a.paper_id)
        fractional_b = fractional_score(corpus_b, paper_b.paper_id)
        papers.append(
            PaperSensitivity(
                paper_id=paper_a.paper_id,
                ncs_a=paper_a.ncs,
                ncs_b=paper_b.ncs,
                percentile_a=paper_a.percentile,
                percentile_b=paper_b.percentile,
                fractional_delta=(fractional_b or 0.0) - (fractional_a or 0.0),
            )
        )
    return SensitivityReport(
        group=group.name,
        weighting=str(weighting),
        papers=tuple(papers),
        report_a=score_group(corpus_a, table_a, group, weighting, top_x),
        report_b=score_group(corpus_b, table_b, group, weighting, top_x),
    )


@dataclass(frozen=True)
class RankSumResult:
    """Mann-Whitney U for the first sample, with tie-corrected normal z.

    ``degenerate`` marks the all-tied case, where the rank variance is zero
    and no standardized statistic exists; z and p are then reported as 0 and
    1 (the samples are indistinguishable by rank).
    """

    u_statistic: float
    z: float
    p_two_sided: float
    n_a: int
    n_b: int
    degenerate: bool = False


def rank_sum_test(
    scores_a: Sequence[float], scores_b: Sequence[float]
) -> RankSumResult:
    """Two-sided Mann-Whitney rank-sum test via the normal approximation.

    Midranks handle ties; the variance carries the usual tie correction
    n_a n_b / 12 * (N + 1 - sum(t^3 - t) / (N (N - 1))). The approximation is
    adequate from roughly 8 observations per sample; exact enumeration at tiny
    sizes lives in the test suite, not here.
    """
    n_a, n_b = len(scores_a), len(scores_b)
    if n_a == 0 or n_b == 0:
        raise ValueError("both samples must be non-empty")
    if n_a + n_b < 3:
        raise ValueError("need at least 3 observations overall")
    pooled = sorted(
        [(value, 0) for value in scores_a] + [(value, 1) for value in scores_b]
    )
    total = n_a + n_b
    rank_sum_a = 0.0
    tie_term = 0
    index = 0
    while index < total:
        run_end = index
        while run_end + 1 < total and pooled[run_end + 1][0] == pooled[index][0]:
            run_end += 1
        run_length = run_end - index + 1
        midrank = (index + run_end) / 2 + 1
        rank_sum_a += midrank * sum(
            1 for position in range(index, run_end + 1) if pooled[position][1] == 0
        )
        tie_term += run_length**3 - run_length
        index = run_end + 1
    u = rank_sum_a - n_a * (n_a + 1) / 2
    mean_u = n_a * n_b / 2
    variance = n_a * n_b / 12 * ((total + 1) - tie_term / (total * (total - 1)))
    if variance <= 0:
        return RankSumResult(u, 0.0, 1.0, n_a, n_b, degenerate=True)
    z = (u - mean_u) / math.sqrt(variance)
    p = math.erfc(abs(z) / math.sqrt(2))
    return RankSumResult(u, z, p, n_a, n_b)
