"""Finite words over the six-letter alphabet and the truncated edge relations.

A word of length ``n`` addresses a level-``n`` cell.  Words are handled as
tuples of ints; every public function also accepts a digit string such as
``"0350"`` and answers in the same form it was given.

Two equivalent edge relations live here:

* the *group form*: ``x i a v ~ x j a v`` with ``j = i + 1 (mod 6)``,
  ``a in {3, 4}`` for odd ``i`` and ``a in {1, 2}`` for even ``i``, and ``v``
  a tail of 0s and 5s;
* the *fixed-point form*: ``x i y ~ x j z`` where each tail letter pair
  ``(y_k, z_k)`` is drawn from two parity-dependent choices.

:func:`conjugation_f` carries the first onto the second.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence, Union

import numpy as np

ALPHABET = tuple(range(6))
TAIL_LETTERS = (0, 5)

Word = tuple
WordLike = Union[str, Sequence[int]]


class WordError(ValueError):
    pass


def parse_word(w: WordLike) -> tuple[int, ...]:
    if isinstance(w, str):
        try:
            digits = tuple(int(c) for c in w)
        except ValueError as exc:
            raise WordError(f"not a word: {w!r}") from exc
    else:
        digits = tuple(int(c) for c in w)
    if not digits:
        raise WordError("empty word")
    if any(d < 0 or d > 5 for d in digits):
        raise WordError(f"digit outside 0..5 in {w!r}")
    return digits


def format_word(w: Sequence[int]) -> str:
    return "".join(str(d) for d in w)


def _out(digits: tuple[int, ...], like: WordLike):
    return format_word(digits) if isinstance(like, str) else digits


def word_index(w: WordLike) -> int:
    """Base-6 value of the digit string; the canonical vertex id."""
    idx = 0
    for d in parse_word(w):
        idx = idx * 6 + d
    return idx


def index_word(idx: int, n: int) -> tuple[int, ...]:
    if not 0 <= idx < 6**n:
        raise WordError(f"index {idx} out of range for level {n}")
    digits = []
    for _ in range(n):
        idx, d = divmod(idx, 6)
        digits.append(d)
    return tuple(reversed(digits))


def all_words(n: int) -> Iterable[tuple[int, ...]]:
    """Every word of length ``n`` in lexicographic (= index) order."""
    return itertools.product(ALPHABET, repeat=n)


def partition_class(w: WordLike) -> int:
    """Index ``k`` of the block ``W_k`` holding ``w``.

    ``k = 1`` when letters 2..n are all 0 or 5, otherwise the last position
    (1-based) whose letter is outside {0, 5}.
    """
    digits = parse_word(w)
    for pos in range(len(digits), 1, -1):
        if digits[pos - 1] not in TAIL_LETTERS:
            return pos
    return 1


def _cross_partner(digits: tuple[int, ...], k: int) -> tuple[int, ...]:
    # digits[k-1] is the alpha slot, digits[k-2] the i/j slot
    c = digits[k - 2]
    alpha = digits[k - 1]
    if alpha in (3, 4):
        # (c, c+1) with c odd, or (c-1, c) with c-1 odd
        partner = c + 1 if c % 2 == 1 else c - 1
    else:
        partner = c + 1 if c % 2 == 0 else c - 1
    out = list(digits)
    out[k - 2] = partner % 6
    return tuple(out)


def word_neighbors(w: WordLike) -> list:
    """Neighbours of ``w`` in ``G_n`` under the group-form relation.

    Always the two last-letter neighbours; a word in ``W_k`` with ``k >= 2``
    has one more, obtained by moving its letter at position ``k - 1`` to the
    partner letter allowed by the letter at position ``k``.
    """
    digits = parse_word(w)
    head, last = digits[:-1], digits[-1]
    nbrs = {head + ((last - 1) % 6,), head + ((last + 1) % 6,)}
    k = partition_class(digits)
    if k >= 2:
        nbrs.add(_cross_partner(digits, k))
    return [_out(d, w) for d in sorted(nbrs)]


def edge_tag(u: WordLike, w: WordLike) -> int:
    """Block ``F_k`` containing the edge ``{u, w}``; raises if not an edge."""
    a, b = parse_word(u), parse_word(w)
    if len(a) != len(b):
        raise WordError("words of different length")
    if b not in [parse_word(x) for x in word_neighbors(a)]:
        raise WordError(f"{format_word(a)} and {format_word(b)} are not adjacent")
    if a[:-1] == b[:-1]:
        return 1
    return partition_class(a)


def conjugation_f(w: WordLike):
    """Translate a word from the group-form address to the fixed-point one.

    ``v_1 = u_1`` and ``v_m = (-1)**v_{m-1} * u_m + v_{m-1}`` (mod 6), so each
    output letter depends on the previous output letter.
    """
    u = parse_word(w)
    v = [u[0]]
    for d in u[1:]:
        prev = v[-1]
        v.append((d if prev % 2 == 0 else -d) + prev)
        v[-1] %= 6
    return _out(tuple(v), w)


def conjugation_f_inverse(w: WordLike):
    v = parse_word(w)
    u = [v[0]]
    for prev, d in zip(v, v[1:]):
        diff = d - prev
        u.append((diff if prev % 2 == 0 else -diff) % 6)
    return _out(tuple(u), w)


def conjugation_f_cumulative(w: WordLike):
    """Variant driven by the running digit sum of the *input* word.

    ``v_m = (-1)**a * u_m + a`` with ``a = u_1 + ... + u_{m-1}``.  It agrees
    with :func:`conjugation_f` on words of length at most two but does not
    carry the group-form edges onto the fixed-point edges from length three
    on; kept for comparison.
    """
    u = parse_word(w)
    v = [u[0]]
    acc = u[0]
    for d in u[1:]:
        v.append(((d if acc % 2 == 0 else -d) + acc) % 6)
        acc = (acc + d) % 6
    return _out(tuple(v), w)


def _fixedpoint_choices(i: int) -> tuple[tuple[int, int], tuple[int, int]]:
    # (y_k, z_k) pairs allowed after the letter i on the i-side
    if i % 2 == 1:
        return ((i + 2) % 6, (i - 1) % 6), ((i + 3) % 6, (i - 2) % 6)
    return ((i + 1) % 6, i), ((i + 2) % 6, (i - 1) % 6)


def fixedpoint_neighbors(w: WordLike) -> list:
    """Neighbours of ``w`` under the truncated fixed-point relation.

    ``x i y ~ x j z`` with ``j = i + 1``; every tail position ``k`` carries a
    letter pair ``(y_k, z_k)`` from :func:`_fixedpoint_choices`.  The word is
    tried both as the ``i``-side and as the ``j``-side at every split point.
    """
    digits = parse_word(w)
    n = len(digits)
    found = set()
    for p in range(n):
        x, c, tail = digits[:p], digits[p], digits[p + 1 :]
        # w as the i-side
        i = c
        pairs = dict(_fixedpoint_choices(i))
        if all(y in pairs for y in tail):
            found.add(x + ((i + 1) % 6,) + tuple(pairs[y] for y in tail))
        # w as the j-side
        i = (c - 1) % 6
        rev = {z: y for y, z in _fixedpoint_choices(i)}
        if all(z in rev for z in tail):
            found.add(x + (i,) + tuple(rev[z] for z in tail))
    found.discard(digits)
    return [_out(d, w) for d in sorted(found)]


def first_disagreement(u: WordLike, v: WordLike) -> int:
    """1-based index of the first differing letter, 0 when equal."""
    a, b = parse_word(u), parse_word(v)
    if len(a) != len(b):
        raise WordError("words of different length")
    for pos, (x, y) in enumerate(zip(a, b), start=1):
        if x != y:
            return pos
    return 0


def delta_metric(u: WordLike, v: WordLike, r: float = 0.5) -> float:
    if not 0.0 < r < 1.0:
        raise WordError("r must lie in (0, 1)")
    m = first_disagreement(u, v)
    return 0.0 if m == 0 else r**m


def shift(w: WordLike):
    digits = parse_word(w)
    if len(digits) < 2:
        raise WordError("cannot shift a word of length 1")
    return _out(digits[1:], w)


def cell_boundary(i: int, j: int, n: int) -> list[tuple[str, str]]:
    """Edges of ``G_n`` that join the top-level cells ``i`` and ``j``.

    Pairs are ``(word in cell i, word in cell j)``, sorted.  Non-neighbouring
    cells give an empty list.
    """
    if i == j:
        raise WordError("cells must differ")
    if n < 2:
        return []
    out = []
    for w in all_words(n):
        if w[0] != i:
            continue
        for u in word_neighbors(w):
            if u[0] == j:
                out.append((format_word(w), format_word(u)))
    return sorted(out)


def hole_words(n: int) -> list[str]:
    """Truncated central-hole set: ``i a v`` with ``a in {2, 3}``, ``v`` over {0, 1}."""
    if n < 2:
        raise WordError("hole set needs n >= 2")
    out = []
    for i in ALPHABET:
        for a in (2, 3):
            for v in itertools.product((0, 1), repeat=n - 2):
                out.append(format_word((i, a) + v))
    return sorted(out)


# -- vectorised edge blocks ---------------------------------------------------


def edge_blocks(n: int) -> list[np.ndarray]:
    """Edge arrays ``F_1 .. F_n`` as ``(m, 2)`` int64 vertex indices, ``u < v``.

    Built directly from the block definitions by index arithmetic; row order
    is deterministic.
    """
    if n < 1:
        raise WordError("level must be >= 1")
    blocks = []
    prefix = np.arange(6 ** (n - 1), dtype=np.int64)[:, None]
    last = np.arange(6, dtype=np.int64)[None, :]
    u = (prefix * 6 + last).ravel()
    v = (prefix * 6 + (last + 1) % 6).ravel()
    blocks.append(np.sort(np.stack([u, v], axis=1), axis=1))
    for k in range(2, n + 1):
        tails = np.array(
            [int("".join(map(str, t)), 6) if t else 0 for t in itertools.product(TAIL_LETTERS, repeat=n - k)],
            dtype=np.int64,
        )
        scale = 6 ** (n - k)
        xs = np.arange(6 ** (k - 2), dtype=np.int64)
        rows = []
        for i in ALPHABET:
            j = (i + 1) % 6
            for alpha in ((3, 4) if i % 2 else (1, 2)):
                a = ((xs * 6 + i) * 6 + alpha)[:, None] * scale + tails[None, :]
                b = ((xs * 6 + j) * 6 + alpha)[:, None] * scale + tails[None, :]
                rows.append(np.stack([a.ravel(), b.ravel()], axis=1))
        blocks.append(np.sort(np.concatenate(rows), axis=1))
    return blocks


def partition_classes(n: int) -> np.ndarray:
    """``partition_class`` of every level-``n`` word, indexed by base-6 value."""
    idx = np.arange(6**n, dtype=np.int64)
    cls = np.ones(6**n, dtype=np.int8)
    settled = np.zeros(6**n, dtype=bool)
    for pos in range(n, 1, -1):
        digit = (idx // 6 ** (n - pos)) % 6
        hit = ~settled & (digit != 0) & (digit != 5)
        cls[hit] = pos
        settled |= hit
    return cls
