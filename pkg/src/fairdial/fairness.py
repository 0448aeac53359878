"""Fairness bookkeeping: objective outcomes, outcome matrices and losses.

The objective outcome of a pair is what an all-knowing referee would rule:
instantiate the expanded culture under full information, then ask whether
the proponent's motion hypothesis is sceptically accepted (in every
preferred extension).  Comparing the ruling with actual dialogue outcomes
yields the objective local loss; dialogues cut short by the privacy budget
carry the subjective local loss.

Population-level distortion compares precedence digraphs: the ground-truth
and dialogue outcome matrices each induce arcs between agents that beat one
another both ways round, and a weighted census of reversed, one-sided and
missing arcs scores their dissimilarity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ._util import derive_seed
from .af import sceptically_accepted
from .culture import OP, PR, ExpandedCulture, instantiate_ground_truth_framework
from .dialogue import BUDGET_FORCED, DialogueResult, STRATEGIES, run_dispute
from .errors import InputError

Y1 = Fraction(2, 3)  # weight of one-sided disagreement
Y2 = Fraction(1, 3)  # weight of joint absence


def objective_outcome(d_pr, d_op, xc: ExpandedCulture) -> str:
    """Full-information ruling for an ordered pair: PR or OP."""
    inst = instantiate_ground_truth_framework(xc, d_pr, d_op)
    motion = xc.hypothesis(xc.single_motion_id, PR)
    accepted = sceptically_accepted(inst.index_of[motion], inst.framework)
    return PR if accepted else OP


@dataclass(frozen=True)
class OutcomeMatrix:
    """Winner roles over ordered agent pairs; the diagonal is None."""

    entries: tuple

    @property
    def n_agents(self) -> int:
        return len(self.entries)

    def winner(self, pr_agent: int, op_agent: int) -> str:
        if pr_agent == op_agent:
            raise InputError("an agent cannot dispute itself")
        return self.entries[pr_agent][op_agent]


def ground_truth_matrix(agents, xc: ExpandedCulture) -> OutcomeMatrix:
    n = len(agents)
    rows = []
    for j in range(n):
        row = []
        for k in range(n):
            row.append(None if j == k else objective_outcome(agents[j], agents[k], xc))
        rows.append(tuple(row))
    return OutcomeMatrix(entries=tuple(rows))


def dispute_records(agents, xc: ExpandedCulture, strategy: str, g, seed: int):
    """Run every ordered-pair dispute once, yielding (pr, op, result).

    Each pair draws from its own seed stream keyed by (seed, pair, strategy,
    budget), so results are reproducible pairwise, not just in bulk.
    """
    g_key = -1 if g is None else g
    n = len(agents)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            rng = None
            if strategy == "random":
                rng = random.Random(derive_seed(seed, "dlg", j, k, strategy, g_key))
            yield j, k, run_dispute(agents[j], agents[k], xc, strategy, g, rng=rng)


def result_matrix(agents, xc: ExpandedCulture, strategy: str, g,
                  seed: int) -> OutcomeMatrix:
    n = len(agents)
    rows = [[None] * n for _ in range(n)]
    for j, k, res in dispute_records(agents, xc, strategy, g, seed):
        rows[j][k] = res.winner
    return OutcomeMatrix(entries=tuple(tuple(r) for r in rows))


def objective_local_loss(gt_entry: str, re_entry: str) -> int:
    """1 when the dialogue outcome contradicts the referee, else 0."""
    return 0 if gt_entry == re_entry else 1


def subjective_local_loss(result: DialogueResult) -> int:
    """1 when the dialogue was decided by budget exhaustion, else 0."""
    return 1 if result.termination == BUDGET_FORCED else 0


@dataclass(frozen=True)
class PrecedenceGraph:
    """Digraph of settled precedence: arc (j, k) when j outranks k both ways.

    An arc requires agreement across the two orderings of the pair: j wins
    as proponent against k, and k loses its own motion against j.  At most
    one arc may join any two vertices.
    """

    n_agents: int
    arcs: frozenset

    def __post_init__(self):
        for j, k in self.arcs:
            if not (0 <= j < self.n_agents and 0 <= k < self.n_agents) or j == k:
                raise InputError(f"bad arc ({j}, {k})")
            if (k, j) in self.arcs:
                raise InputError(f"pair {{{j}, {k}}} is arced both ways")


def precedence_graph(matrix: OutcomeMatrix) -> PrecedenceGraph:
    n = matrix.n_agents
    arcs = set()
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            if matrix.winner(j, k) == PR and matrix.winner(k, j) == OP:
                arcs.add((j, k))
    return PrecedenceGraph(n_agents=n, arcs=frozenset(arcs))


def _arc_state(graph: PrecedenceGraph, j: int, k: int) -> int:
    if (j, k) in graph.arcs:
        return 1
    if (k, j) in graph.arcs:
        return -1
    return 0


def pair_census(g1: PrecedenceGraph, g2: PrecedenceGraph):
    """Classify every unordered vertex pair across the two graphs.

    Returns (reversed, one_sided, absent_both, agreeing); the four counts
    partition the n(n-1)/2 pairs.
    """
    if g1.n_agents != g2.n_agents:
        raise InputError("precedence graphs must share the vertex set")
    n = g1.n_agents
    reversed_ = one_sided = absent = agree = 0
    for j in range(n):
        for k in range(j + 1, n):
            s1 = _arc_state(g1, j, k)
            s2 = _arc_state(g2, j, k)
            if s1 == s2:
                if s1 == 0:
                    absent += 1
                else:
                    agree += 1
            elif s1 == 0 or s2 == 0:
                one_sided += 1
            else:
                reversed_ += 1
    return reversed_, one_sided, absent, agree


def dag_dissimilarity(g1: PrecedenceGraph, g2: PrecedenceGraph,
                      y1: Fraction = Y1, y2: Fraction = Y2) -> Fraction:
    """Weighted disagreement between two precedence digraphs.

    Reversed pairs count 1, pairs arced in exactly one graph count ``y1``,
    pairs arced in neither count ``y2``; agreeing arcs are free.
    """
    reversed_, one_sided, absent, _ = pair_census(g1, g2)
    return Fraction(reversed_) + Fraction(y1) * one_sided + Fraction(y2) * absent


def global_losses(gt_graph: PrecedenceGraph, re_graph: PrecedenceGraph):
    """Raw and pair-normalised dissimilarity between referee and dialogue."""
    k_raw = dag_dissimilarity(gt_graph, re_graph)
    n = gt_graph.n_agents
    pairs = n * (n - 1) // 2
    if pairs == 0:
        raise InputError("need at least two agents")
    return k_raw, k_raw / pairs


@dataclass(frozen=True)
class Theorem1Report:
    """Census of unrestricted-budget behaviour over one agent population."""

    n_agents: int
    disputes_per_strategy: int
    budget_forced: int
    subjective_loss_total: int
    re_gt_mismatches: dict
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations


def theorem1_check(agents, xc: ExpandedCulture, seed: int) -> Theorem1Report:
    """Check that a budget covering every node cost removes budget effects.

    With g at the total expanded cost no dispute can be budget_forced and
    the subjective loss must vanish; violations are collected rather than
    asserted.  Dialogue-vs-referee mismatches are tallied per strategy as an
    observation, not a failure: strategic play may still lose winnable
    disputes.
    """
    g = xc.total_cost
    gt = ground_truth_matrix(agents, xc)
    violations = []
    forced = 0
    sl_total = 0
    mismatches = {}
    per_strategy = len(agents) * (len(agents) - 1)
    for strategy in STRATEGIES:
        wrong = 0
        for j, k, res in dispute_records(agents, xc, strategy, g, seed):
            if res.termination == BUDGET_FORCED:
                forced += 1
                violations.append(
                    f"{strategy}: dispute ({j}, {k}) ended budget_forced at g={g}"
                )
            sl_total += subjective_local_loss(res)
            if res.winner != gt.winner(j, k):
                wrong += 1
        mismatches[strategy] = wrong
    return Theorem1Report(
        n_agents=len(agents),
        disputes_per_strategy=per_strategy,
        budget_forced=forced,
        subjective_loss_total=sl_total,
        re_gt_mismatches=mismatches,
        violations=tuple(violations),
    )
