"""Attack state and the explore/exploit policies built on the mixture MLE.

Three ways to initialize each descent (random simplex point, uniform 1/n,
or warm start from the previous estimate) and three ways to pick the next
guess (random dictionary, highest-weight dictionary, or the word with the
highest estimated mixture probability).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .dictionary import Corpus
from .errors import DuplicateGuess, SuccessExceedsPopulation
from .mixture import DescentConfig, GuessHistory, MixtureWeights, estimate


class InitPolicy(Enum):
    RANDOM = "random"
    AVERAGE = "average"
    BEST = "best"


class GuessPolicy(Enum):
    RANDOM_DICTIONARY = "random-dict"
    BEST_DICTIONARY = "best-dict"
    BY_Q = "by-q"


def initialize_weights(policy: InitPolicy, n: int,
                       prev: MixtureWeights | None = None,
                       rng: np.random.Generator | None = None) -> MixtureWeights:
    """Starting point for a descent under the given policy.

    RANDOM draws uniformly from the simplex (normalized standard-exponential
    components). BEST returns ``prev``, falling back to the uniform point
    when no previous estimate exists.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 dictionaries, got {n}")
    if policy is InitPolicy.AVERAGE:
        return MixtureWeights.uniform(n)
    if policy is InitPolicy.BEST:
        return prev if prev is not None else MixtureWeights.uniform(n)
    if rng is None:
        raise ValueError("random initialization needs an rng")
    draws = rng.standard_exponential(n)
    return MixtureWeights.from_values(draws / draws.sum())


@dataclass
class BanditState:
    """Mutable per-attack state: what was guessed, what we observed, and
    the running weight estimate. One attack owns one state."""

    history: GuessHistory
    current_estimate: MixtureWeights
    previous_estimate: MixtureWeights | None = None
    guessed: set[str] = field(default_factory=set)
    rng: np.random.Generator = field(default_factory=np.random.default_rng)


def new_state(corpus: Corpus, population: int, init: InitPolicy,
              rng: np.random.Generator) -> BanditState:
    """Fresh state before any guess; the first estimate comes from ``init``."""
    start = initialize_weights(init, len(corpus), prev=None, rng=rng)
    return BanditState(
        history=GuessHistory(population),
        current_estimate=start,
        rng=rng,
    )


def select_guess(policy: GuessPolicy, corpus: Corpus, state: BanditState) -> str | None:
    """Choose the next word to guess, or None when all candidates are spent.

    Guessed words are excluded everywhere: a repeated guess compromises
    nobody new. Ties break deterministically (lowest dictionary index for
    BEST_DICTIONARY, lexicographic least word for BY_Q).
    """
    guessed = state.guessed

    if policy is GuessPolicy.BY_Q:
        scores = corpus._vocab_probs @ np.asarray(state.current_estimate)
        if guessed:
            index = corpus._vocab_index
            rows = [index[w] for w in guessed if w in index]
            scores[rows] = -np.inf
            if len(rows) == len(scores):
                return None
        # union_vocabulary is sorted, so the first argmax is the tie-break winner
        return corpus.union_vocabulary[int(np.argmax(scores))]

    if policy is GuessPolicy.RANDOM_DICTIONARY:
        eligible = [i for i, d in enumerate(corpus.dictionaries)
                    if d.next_unguessed(guessed) is not None]
        if not eligible:
            return None
        pick = eligible[int(state.rng.integers(len(eligible)))]
        return corpus.dictionaries[pick].next_unguessed(guessed)

    if policy is GuessPolicy.BEST_DICTIONARY:
        q = state.current_estimate
        best = None
        for i, d in enumerate(corpus.dictionaries):
            if d.next_unguessed(guessed) is None:
                continue
            if best is None or q[i] > q[best]:
                best = i
        if best is None:
            return None
        return corpus.dictionaries[best].next_unguessed(guessed)

    raise ValueError(f"unknown guess policy: {policy!r}")


def record_observation(state: BanditState, word: str, successes: int,
                       corpus: Corpus, init: InitPolicy,
                       cfg: DescentConfig = DescentConfig()) -> BanditState:
    """Fold one guess outcome into the state and re-estimate the weights.

    Zero-success guesses still update the estimate: the remainder term of
    the likelihood shifts mass away from dictionaries that ranked the failed
    word highly.
    """
    if word in state.guessed:
        raise DuplicateGuess(f"{word!r} was already guessed")
    remaining = state.history.population - state.history.total_successes
    if successes < 0:
        raise ValueError(f"negative successes for {word!r}")
    if successes > remaining:
        raise SuccessExceedsPopulation(
            f"{successes} successes for {word!r}, only {remaining} users uncompromised"
        )
    state.previous_estimate = state.current_estimate
    state.history = state.history.extended(word, successes)
    state.guessed.add(word)
    start = initialize_weights(init, len(corpus), prev=state.previous_estimate, rng=state.rng)
    state.current_estimate, _, _ = estimate(corpus, state.history, start, cfg)
    return state
