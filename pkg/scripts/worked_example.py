#!/usr/bin/env python3
"""Walk through a full learning session for the target a b <n. n*>.

Prints every observation table at hypothesis time, the counterexamples
the teacher picks, and the final machine, both as a table and as DOT.
"""

from nlstar import automaton as am
from nlstar.learner import LearnConfig, run_nlstar
from nlstar.regex import canonicalize, format_regex, parse_regex
from nlstar.teacher import Teacher

TARGET = "ab<n.n*>"
SIGMA = frozenset({"a", "b"})


def main():
    cne = canonicalize(parse_regex(TARGET, SIGMA))
    print(f"target: {TARGET}   canonical: {format_regex(cne)}")
    teacher = Teacher(am.determinize(am.compile(cne, SIGMA)))

    def show(table, hypothesis):
        print()
        print(table.grid())
        print(f"hypothesis: {am.state_count(hypothesis)} states, "
              f"register bound {hypothesis.n}")

    learned, stats = run_nlstar(teacher, LearnConfig(on_hypothesis=show))
    for snap in stats.rounds:
        print(f"round {snap.round}: teacher answered {snap.answer!r}")
    print()
    print(f"done: {am.state_count(learned)} states, "
          f"{stats.membership_queries} membership / "
          f"{stats.equivalence_queries} equivalence queries")
    print()
    print(am.to_dot(learned))


if __name__ == "__main__":
    main()
