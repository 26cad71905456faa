"""Empirical check of the 1-step Markov property of traced codes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..coder import TraceConfig, contains_factor, has_inverse_pair, sample_generic, trace
from ..dirichlet import DirichletDomain
from ..errors import ConstructionFailed
from .forbidden import ForbiddenWordReport, find_forbidden_word
from .realize import RealizabilityResult, realize_word_ideal
from .words import Word, admissible_count, blocks_of, enumerate_admissible, random_admissible

EXHAUSTIVE_MAX_LENGTH = 6
FINITE_FACTOR_NOTE = (
    "codes are finite windows and words are finite factors; agreement of block sets "
    "is checked for these, not for the bi-infinite shift space"
)


@dataclass(frozen=True)
class WordCheck:
    word: Word
    result: RealizabilityResult
    round_trip: bool


@dataclass(frozen=True)
class MarkovReport:
    k: int
    samples: int
    window: int
    seed: int
    is_ideal: bool
    inverse_pair_words: Tuple[Word, ...]          # (a) offending sampled words
    observed_blocks: int
    admissible_blocks: int
    word_checks: Tuple[WordCheck, ...] = ()       # (b) ideal domains
    forbidden: Tuple[ForbiddenWordReport, ...] = ()  # (c) domains with finite vertices
    forbidden_failures: Tuple[Tuple[int, str], ...] = ()
    note: str = FINITE_FACTOR_NOTE

    @property
    def rule_pass(self) -> bool:
        return not self.inverse_pair_words

    @property
    def realization_pass(self) -> Optional[bool]:
        if not self.is_ideal:
            return None
        return all(w.result.realizable and w.round_trip for w in self.word_checks)

    @property
    def forbidden_pass(self) -> Optional[bool]:
        if self.is_ideal:
            return None
        return not self.forbidden_failures and all(f.verified for f in self.forbidden)

    @property
    def passed(self) -> bool:
        extra = self.realization_pass if self.is_ideal else self.forbidden_pass
        return self.rule_pass and bool(extra)


def round_trip(domain: DirichletDomain, result: RealizabilityResult) -> bool:
    """Trace the witness independently and look for the word as a factor."""
    if not result.realizable:
        return False
    w = result.word
    cs = trace(domain, result.verdict.witness, TraceConfig(max_steps=len(w) + 2))
    return contains_factor(cs.word, w)


def check_ideal_words(domain: DirichletDomain, lengths, random_words: int, word_length: int,
                      rng: np.random.Generator) -> List[WordCheck]:
    out = []
    words: List[Word] = []
    for m in lengths:
        words.extend(enumerate_admissible(domain, m))
    for _ in range(random_words):
        words.append(random_admissible(domain, word_length, rng))
    for w in words:
        r = realize_word_ideal(domain, w)
        out.append(WordCheck(w, r, round_trip(domain, r)))
    return out


def markov_check(domain: DirichletDomain, k: int = 1, samples: int = 500, word_length: int = 12,
                 seed: int = 0, window: int = 50, random_words: int = 100,
                 forbidden_budget: int = 400) -> MarkovReport:
    """(a) the no-inverse rule on sampled codes; then (b) realization of admissible
    words on ideal domains, or (c) forbidden words for 1..k otherwise."""
    rng = np.random.default_rng(seed)
    codes = sample_generic(domain, samples, window, int(rng.integers(2**63))) if samples else []
    bad = tuple(c.word for c in codes if has_inverse_pair(c.word, domain.inverse_label))
    observed = blocks_of((c.word for c in codes), k)
    n_adm = admissible_count(domain.alphabet_size, k + 1)
    common = dict(k=k, samples=samples, window=window, seed=seed, is_ideal=domain.is_ideal,
                  inverse_pair_words=bad, observed_blocks=len(observed), admissible_blocks=n_adm)
    if domain.is_ideal:
        lengths = range(1, min(k + 1, EXHAUSTIVE_MAX_LENGTH) + 1)
        checks = check_ideal_words(domain, lengths, random_words, word_length, rng)
        return MarkovReport(word_checks=tuple(checks), **common)
    found, failed = [], []
    for kk in range(1, k + 1):
        try:
            found.append(find_forbidden_word(domain, kk, forbidden_budget, seed=int(rng.integers(2**31))))
        except ConstructionFailed as exc:
            failed.append((kk, str(exc)))
    return MarkovReport(forbidden=tuple(found), forbidden_failures=tuple(failed), **common)
