"""Parameter-side arithmetic: the renormalization map R and its codings.

R(s) = frac(s/(1-2s)) on [0, 1/2) and 1 - s on [1/2, 1).  Rational orbits
end at 0 or 1/2; quadratic surds are handled exactly via :class:`Surd`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence, Union

from .exactnum import Rat, Surd, floor_of, format_rat, rat

HALF = rat(1, 2)

INF = math.inf  # the n-slot of the coding of 0


class CodingTriple(NamedTuple):
    m: int
    n: Union[int, float]
    r: int

    def __str__(self):
        n = "inf" if self.n == INF else str(self.n)
        return f"({self.m},{n},{self.r})"


class Terminal(Enum):
    INFINITE = "infinite"
    ENDS_AT_HALF = "half"
    ENDS_AT_ZERO = "zero"


@dataclass(frozen=True)
class SplitExpansion:
    """(0; a_1, a_2, ...) with possibly zero or negative partial quotients."""

    terms: tuple
    terminal: Terminal

    def __str__(self):
        body = ",".join(str(a) for a in self.terms)
        tail = ",..." if self.terminal is Terminal.INFINITE else ""
        return f"(0;{body}{tail})"


def _is_surd(s) -> bool:
    return isinstance(s, Surd)


def _one_minus(s):
    return 1 - s


def R(s):
    """The renormalization map, exact for rationals and surds."""
    if not _is_surd(s):
        s = rat(s)
    if s < 0 or s >= 1:
        raise ValueError(f"R is defined on [0, 1), got {s}")
    if s >= HALF:
        return _one_minus(s)
    u = s / (1 - 2 * s)
    return u - floor_of(u)


renorm_R = R


def renorm_R_surd(s: Surd) -> Surd:
    if not _is_surd(s):
        raise TypeError("expected a Surd")
    return R(s)


def coding_map(s) -> CodingTriple:
    if not _is_surd(s):
        s = rat(s)
    if s < 0 or s >= 1:
        raise ValueError(f"coding map is defined on [0, 1), got {s}")
    if s == 0:
        return CodingTriple(0, INF, 1)
    if s == HALF:
        return CodingTriple(2, 0, 1)
    if s > HALF:
        return CodingTriple(0, 1, -1)
    return CodingTriple(2, floor_of(s / (1 - 2 * s)), 1)


def coding_sequence(s, max_len: Optional[int] = None) -> list:
    """Triples M(R^k(s)); stops before R^k(s) = 0 and right after R^k(s) = 1/2.

    Rationals always terminate.  For surds pass ``max_len`` to truncate.
    """
    if not _is_surd(s):
        s = rat(s)
    if s == 0:
        return []
    out = []
    while True:
        if max_len is not None and len(out) >= max_len:
            return out
        c = coding_map(s)
        out.append(c)
        if s == HALF:
            return out
        s = R(s)
        if s == 0:
            return out


def in_omega(seq: Sequence) -> bool:
    """Both admissibility conditions: no two consecutive (0,1,-1), and a finite one does not end with it."""
    prev = None
    for c in seq:
        c = tuple(c)
        if c == (0, 1, -1) and prev == (0, 1, -1):
            return False
        prev = c
    return prev != (0, 1, -1)


def eval_coding(seq: Sequence) -> Rat:
    """Evaluate the nested fraction for a finite admissible coding sequence."""
    seq = [CodingTriple(*c) for c in seq]
    if not seq:
        return rat(0)
    if not in_omega(seq):
        raise ValueError("sequence is not admissible")
    for c in seq:
        if c.n == INF:
            raise ValueError("(0,inf,1) cannot appear inside a finite coding")
    last = seq[-1]
    # innermost value: m_l + 1/n_l, or just m_l for a (2,0,1) tail
    if last == (2, 0, 1):
        x = rat(last.m)
    else:
        x = last.m + 1 / rat(last.n)
    for c in reversed(seq[:-1]):
        # c.m + 1/(c.n + c.r / x)
        x = c.m + 1 / (c.n + c.r / x)
    return 1 / x


def split_expansion(s, max_terms: Optional[int] = None) -> SplitExpansion:
    """Splitted expansion; for surds ``max_terms`` bounds the (infinite) output."""
    if not _is_surd(s):
        s = rat(s)
        if not (0 < s < 1):
            raise ValueError("split expansion needs 0 < s < 1")
        seq = coding_sequence(s)
        irr = False
    else:
        if max_terms is None:
            raise ValueError("a surd needs max_terms")
        seq = coding_sequence(s, max_len=(max_terms + 1) // 2 + 1)
        irr = True
    terms = []
    sign = 1
    for c in seq:
        terms.append(c.m * sign)
        terms.append(int(c.n) * sign)
        sign *= c.r
    if irr:
        return SplitExpansion(tuple(terms[:max_terms]), Terminal.INFINITE)
    if seq and seq[-1] == (2, 0, 1):
        return SplitExpansion(tuple(terms[:-1]), Terminal.ENDS_AT_HALF)
    return SplitExpansion(tuple(terms), Terminal.ENDS_AT_ZERO)


def eval_split(terms: Sequence[int]) -> Rat:
    """(0; a_1, ..., a_k) as a generalized continued fraction (zero quotients allowed)."""
    terms = list(terms)
    if not terms:
        return rat(0)
    x = rat(terms[-1])
    for a in reversed(terms[:-1]):
        if x == 0:
            raise ZeroDivisionError("vanishing tail in expansion")
        x = a + 1 / x
    if x == 0:
        raise ZeroDivisionError("vanishing expansion")
    return 1 / x


def eval_expansion(seq) -> Rat:
    """Evaluate either a coding sequence or a split expansion."""
    if isinstance(seq, SplitExpansion):
        return eval_split(seq.terms)
    seq = list(seq)
    if seq and isinstance(seq[0], (tuple, CodingTriple)):
        return eval_coding(seq)
    return eval_split(seq)


def signed_cf(terms: Sequence[int]) -> tuple:
    """Drop zero quotients: (.., a, 0, b, ..) becomes (.., a+b, ..)."""
    out = list(terms)
    i = 1
    while i < len(out) - 1:
        if out[i] == 0:
            out[i - 1 : i + 2] = [out[i - 1] + out[i + 1]]
            i = max(i - 1, 1)
        else:
            i += 1
    return tuple(out)


def convergents(terms, K: Optional[int] = None) -> list:
    """(p_k, q_k) for k = 0..K with the recurrences for splitted expansions."""
    if isinstance(terms, SplitExpansion):
        terms = terms.terms
    a = [0] + list(terms)  # a[1] is the first quotient after "0;"
    K = len(a) - 1 if K is None else min(K, len(a) - 1)
    p = [0]
    q = [1]
    if K == 0:
        return [(0, 1)]
    if a[1] != 0:
        p.append(1)
        q.append(a[1])
        start = 2
    else:
        p.append(0)
        q.append(1)
        if K >= 2:
            if a[2] == 0:
                raise ValueError("a_1 = 0 forces a_2 != 0")
            p.append(1)
            q.append(a[2])
        start = 3
    for m in range(start, K + 1):
        p.append(a[m] * p[m - 1] + p[m - 2])
        q.append(a[m] * q[m - 1] + q[m - 2])
    return list(zip(p, q))[: K + 1]


def fixed_point(n: int) -> Surd:
    """s_n = (-n + sqrt(n(n+2)))/2, the fixed point of R with coding (2,n,1) repeated."""
    if n < 1:
        raise ValueError("n >= 1")
    root = Surd.sqrt(n * (n + 2))
    return (root - n) / 2


def cf_value(digits: Sequence[int]) -> Rat:
    """Plain continued fraction (0; d_1, ..., d_k)."""
    return eval_split(digits)


def lemma31_denominators(s) -> list:
    """Denominators of R^k(s) along the orbit until it hits 0 or 1/2."""
    s = rat(s)
    qs = [int(s.denominator)]
    while s not in (0, HALF):
        s = R(s)
        qs.append(int(s.denominator))
    return qs


# --------------------------------------------------------------------------
# named intervals


@dataclass(frozen=True)
class NamedInterval:
    family: str
    m: int
    n: int
    lo: Rat
    hi: Rat
    bar: bool = False

    @property
    def name(self) -> str:
        b = "bar " if self.bar else ""
        return f"{b}{self.family}_{{{self.m},{self.n}}}"

    def __str__(self):
        return f"{self.name} = [{format_rat(self.lo)}, {format_rat(self.hi)}]"

    def as_tuple(self) -> tuple:
        return (self.lo, self.hi)


def _sorted_interval(family, m, n, a, b, bar=False) -> NamedInterval:
    lo, hi = (a, b) if a < b else (b, a)
    if lo == hi:
        raise ValueError("degenerate interval")
    return NamedInterval(family, m, n, lo, hi, bar)


def s_mn(m: int, n: int) -> Rat:
    return cf_value([2, 2, 2, m, n])


def t_mn(m: int, n: int) -> Rat:
    return cf_value([2, m, n])


def named_interval(kind: str, m: int, n: int) -> NamedInterval:
    """A_{m,n} (kind "A"), its image "Abar", or Calculation-4.3 families "B".."E".

    A_{m,n} = [s_{m,n}, s_{m,n-1}] and Abar_{m,n} = [t_{m,n}, t_{m,n-1}];
    the families A..E of the finiteness classification use the displayed
    continued fractions with endpoints sorted.
    """
    if kind in ("A", "Abar", "calcA"):
        if m < 2 or n < 2:
            raise ValueError("A_{m,n} needs m >= 2, n >= 2")
    if kind == "A":
        return _sorted_interval("A", m, n, s_mn(m, n), s_mn(m, n - 1))
    if kind == "Abar":
        return _sorted_interval("A", m, n, t_mn(m, n), t_mn(m, n - 1), bar=True)
    if kind == "calcA":
        return _sorted_interval("A", m, n, cf_value([2, m, n]), cf_value([2, m, n - 1]))
    if kind == "B":
        if m < 2 or n < 1:
            raise ValueError("B_{m,n} needs m >= 2, n >= 1")
        return _sorted_interval("B", m, n, cf_value([2, m, 1, n]), cf_value([2, m, 1, n + 1]))
    if kind == "C":
        if m < 1 or m % 2 == 0 or n < 1:
            raise ValueError("C_{m,n} needs odd m >= 1, n >= 1")
        return _sorted_interval("C", m, n, cf_value([2, 1, m, n]), cf_value([2, 1, m, n + 1]))
    if kind == "D":
        if m < 2 or m % 2 or n < 2:
            raise ValueError("D_{m,n} needs even m >= 2, n >= 2")
        return _sorted_interval("D", m, n, cf_value([2, 1, m, n]), cf_value([2, 1, m, n + 1]))
    if kind == "E":
        if m < 2 or m % 2 or n < 2:
            raise ValueError("E_{m,n} needs even m >= 2, n >= 2")
        return _sorted_interval("E", m, n, cf_value([2, 1, m, 1, n]), cf_value([2, 1, m, 1, n - 1]))
    raise ValueError(f"unknown interval family {kind!r}")


def parse_interval(text: str) -> tuple:
    """'p/q:r/t' -> (lo, hi)."""
    a, sep, b = text.partition(":")
    if not sep:
        raise ValueError(f"interval must look like p/q:r/t, got {text!r}")
    lo, hi = rat(a), rat(b)
    if not lo < hi:
        raise ValueError(f"empty interval {text!r}")
    return lo, hi


def sqrt2_minus_1() -> Surd:
    return fixed_point(2)


def convergent_near(s: Surd, min_q: int = 10**4) -> Rat:
    """First convergent of the splitted expansion of ``s`` with q > min_q."""
    k = 8
    while True:
        exp = split_expansion(s, max_terms=k)
        for p, q in convergents(exp):
            if q > min_q:
                return rat(p, q)
        k *= 2
        if k > 4096:
            raise ValueError("no convergent found")
