"""Observation tables and the active-learning main loop.

The table is the classic (S, E, T) structure with two twists: cells take
values in {1, P, 0, bottom} and every row additionally carries the
number of binders its label leaves open.  Rows compare equal only when
both the cell contents and that register count agree.  Cells whose
label-suffix concatenation is not a legal word are filled with bottom
locally, without asking the teacher; row labels that are themselves
illegal keep an all-bottom row and never participate in closedness or
consistency checks.

The learner starts from the bare letter alphabet and discovers binders
through counterexamples: a counterexample of depth d raises the table's
register bound to d, which adds OPEN, CLOSE and the registers 1..d to
the one-token extensions.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from . import automaton as am
from .teacher import Answer, Teacher
from .words import (
    Alphabet,
    IllegalWordError,
    concat,
    depth,
    is_legal,
    prefixes,
    reg,
    serialize_word,
)


class NotClosedOrConsistentError(ValueError):
    """Hypothesis requested from a table that is not ready."""


class RoundLimitError(RuntimeError):
    """Configured round cap exceeded; carries the stats gathered so far."""

    def __init__(self, message, stats):
        super().__init__(message)
        self.stats = stats


@dataclass
class LearnConfig:
    max_rounds: "int | None" = None
    capture_tables: bool = True
    # callback(table, hypothesis), invoked before each equivalence query;
    # the table is live and keeps mutating, so inspect it inside the call.
    on_hypothesis: "object | None" = None


@dataclass
class RoundSnapshot:
    round: int
    s_size: int
    e_size: int
    n: int
    hypothesis_states: int
    answer: str
    table: "str | None" = None


@dataclass
class RunStats:
    membership_queries: int
    equivalence_queries: int
    s_size: int
    e_size: int
    n: int
    cells: int
    max_counterexample_len: int
    rounds: "list[RoundSnapshot]" = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


class ObservationTable:
    """(S, E, T) over the current token alphabet, with per-row register counts."""

    def __init__(self, sigma):
        self.sigma = frozenset(sigma)
        self.n = 0
        self.s_words = [()]
        self.e_words = [()]
        self._answers = {}

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.sigma, self.n)

    def labels(self):
        """S followed by the one-token extensions not already in S, in scan order."""
        seen = set(self.s_words)
        out = list(self.s_words)
        for s in self.s_words:
            for tok in self.alphabet.tokens():
                word = s + (tok,)
                if word not in seen:
                    seen.add(word)
                    out.append(word)
        return out

    def fill(self, teacher: Teacher):
        """Extend T over (S u S.A).E with membership queries, bottom where illegal."""
        alphabet = self.alphabet
        for label in self.labels():
            for e in self.e_words:
                word = concat(label, e, alphabet)
                if word is not None and word not in self._answers:
                    self._answers[word] = teacher.membership(word)

    def cell(self, label, suffix) -> Answer:
        word = concat(label, suffix, self.alphabet)
        if word is None:
            return Answer.BOTTOM
        return self._answers[word]

    def row(self, label):
        """(cell values over E, register count), or None for illegal labels."""
        if not is_legal(label, self.alphabet):
            return None
        values = tuple(self.cell(label, e) for e in self.e_words)
        return (values, reg(label))

    def check_closed(self):
        """First one-token extension whose row matches no S row, or None."""
        s_rows = {self.row(s) for s in self.s_words}
        in_s = set(self.s_words)
        for s in self.s_words:
            for tok in self.alphabet.tokens():
                word = s + (tok,)
                if word in in_s:
                    continue
                candidate = self.row(word)
                if candidate is not None and candidate not in s_rows:
                    return word
        return None

    def check_consistent(self):
        """First token.suffix extension separating two equal S rows, or None."""
        groups = {}
        for s in self.s_words:
            key = self.row(s)
            groups.setdefault(key, []).append(s)
        clashes = [members for key, members in groups.items() if key is not None and len(members) > 1]
        if not clashes:
            return None
        for tok in self.alphabet.tokens():
            for e in self.e_words:
                for members in clashes:
                    first = members[0]
                    base = self.cell(first + (tok,), e)
                    for other in members[1:]:
                        if self.cell(other + (tok,), e) != base:
                            return (tok,) + e
        return None

    def extend_close(self, witness, teacher: Teacher):
        """Move a closedness witness into S; prefix-closure is preserved
        because the witness is a one-token extension of an S word."""
        if witness in self.s_words:
            raise ValueError(f"{witness!r} is already a row label in S")
        self.s_words.append(witness)
        self.fill(teacher)

    def extend_consistent(self, column, teacher: Teacher):
        """Add the separating word to E; suffix-closure is preserved because
        the new column is a one-token extension of an existing suffix."""
        if column in self.e_words:
            raise ValueError(f"{column!r} is already a column label in E")
        self.e_words.append(column)
        self.fill(teacher)

    def handle_counterexample(self, counterexample, teacher: Teacher):
        """Add the counterexample and its prefixes to S and widen the
        register bound to its depth, growing the token alphabet."""
        if not is_legal(counterexample, self.alphabet.with_depth(depth(counterexample))):
            raise IllegalWordError(
                f"counterexample is not legal: {serialize_word(counterexample)!r}"
            )
        existing = set(self.s_words)
        for prefix in prefixes(counterexample):
            if prefix not in existing:
                existing.add(prefix)
                self.s_words.append(prefix)
        self.n = max(self.n, depth(counterexample))
        self.fill(teacher)

    def state_map(self):
        """Distinct (row, register) pairs of S, numbered in first-occurrence order."""
        ids = {}
        for s in self.s_words:
            key = self.row(s)
            if key is not None and key not in ids:
                ids[key] = f"q{len(ids)}"
        return ids

    def state_of(self, label):
        """Hypothesis state a label maps to, or None for illegal labels."""
        key = self.row(label)
        if key is None:
            return None
        return self.state_map().get(key)

    def to_automaton(self) -> am.NominalAutomaton:
        """Hypothesis machine of a closed and consistent table."""
        if self.check_closed() is not None or self.check_consistent() is not None:
            raise NotClosedOrConsistentError("table is not closed and consistent")
        ids = self.state_map()
        layers = {ids[key]: key[1] for key in ids}
        eps_col = self.e_words.index(())
        finals = []
        for key, state in ids.items():
            values, register = key
            if values[eps_col] is Answer.ONE and register == 0:
                finals.append(state)
        delta = {}
        for s in self.s_words:
            src = ids[self.row(s)]
            for tok in self.alphabet.tokens():
                succ = self.row(s + (tok,))
                if succ is None:
                    continue
                dst = ids[succ]
                if (src, tok) in delta and delta[(src, tok)] != dst:
                    raise NotClosedOrConsistentError(
                        f"conflicting successors for ({src}, {tok!r})"
                    )
                delta[(src, tok)] = dst
        transitions = [(src, tok, dst) for (src, tok), dst in delta.items()]
        return am.NominalAutomaton(
            self.sigma, self.n, layers, ids[self.row(())], finals, transitions
        )

    def cell_count(self) -> int:
        return len(self.labels()) * len(self.e_words)

    def grid(self) -> str:
        """Plain-text table: register column, row labels, one column per suffix."""

        def name(word):
            return serialize_word(word) if word else "eps"

        header = ["reg", "label"] + [name(e) for e in self.e_words]
        body = []
        for label in self.labels():
            legal = is_legal(label, self.alphabet)
            body.append(
                [str(reg(label)) if legal else "-", name(label)]
                + [self.cell(label, e).short for e in self.e_words]
            )
        widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]

        def fmt(row):
            return " | ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()

        rule = "-+-".join("-" * w for w in widths)
        lines = [fmt(header), rule]
        for index, row in enumerate(body):
            if index == len(self.s_words):
                lines.append(rule)
            lines.append(fmt(row))
        return "\n".join(lines) + "\n"


def init_table(teacher: Teacher) -> ObservationTable:
    """Fresh table over the teacher's letters: S = E = {epsilon}, no binders."""
    table = ObservationTable(teacher.sigma)
    table.fill(teacher)
    return table


def run_nlstar(teacher: Teacher, config: "LearnConfig | None" = None):
    """Learn the teacher's language; returns (automaton, stats).

    Each round repairs the table until it is closed and consistent,
    builds the hypothesis and asks an equivalence query.  A returned
    counterexample and its prefixes join S and may widen the register
    bound; a yes answer ends the run.  The final machine accepts exactly
    the target's legal words.
    """
    config = config or LearnConfig()
    table = init_table(teacher)
    snapshots = []

    def stats():
        return RunStats(
            membership_queries=teacher.membership_queries,
            equivalence_queries=teacher.equivalence_queries,
            s_size=len(table.s_words),
            e_size=len(table.e_words),
            n=table.n,
            cells=table.cell_count(),
            max_counterexample_len=max(
                (
                    len(snap.answer.split())
                    for snap in snapshots
                    if snap.answer != "yes"
                ),
                default=0,
            ),
            rounds=snapshots,
        )

    round_index = 0
    while True:
        if config.max_rounds is not None and round_index >= config.max_rounds:
            raise RoundLimitError(
                f"round cap {config.max_rounds} exceeded", stats()
            )
        round_index += 1
        while True:
            witness = table.check_closed()
            if witness is not None:
                table.extend_close(witness, teacher)
            column = table.check_consistent()
            if column is not None:
                table.extend_consistent(column, teacher)
            if witness is None and column is None:
                break
        hypothesis = table.to_automaton()
        if config.on_hypothesis is not None:
            config.on_hypothesis(table, hypothesis)
        counterexample = teacher.equivalence(hypothesis)
        snapshots.append(
            RoundSnapshot(
                round=round_index,
                s_size=len(table.s_words),
                e_size=len(table.e_words),
                n=table.n,
                hypothesis_states=am.state_count(hypothesis),
                answer="yes" if counterexample is None else serialize_word(counterexample),
                table=table.grid() if config.capture_tables else None,
            )
        )
        if counterexample is None:
            return hypothesis, stats()
        table.handle_counterexample(counterexample, teacher)
