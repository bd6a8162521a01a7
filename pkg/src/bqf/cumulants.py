"""Boolean cumulant calculus over exact rationals.

Moments and cumulants determine each other through the interval-partition
moment formula; because only the partition into one block has no cut, the
formula collapses to the convolution recursion

    m_n = sum_{k=1..n} K_k m_{n-k},  m_0 = 1,

which both conversion directions use.  Word moments of several variables,
the polynomial oracle built on them, mixed cumulants by sign-alternating
inversion, grouped product cumulants, and the scalar shift rule all live
here, together with the cumulant presets the command line accepts.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ExpansionCapError, OrderShortfallError
from .partitions import IntervalPartition, enumerate_interval
from .rationals import parse_rational, parse_rational_list

DEFAULT_TERM_CAP = 200_000


@dataclass(frozen=True)
class CumulantSequence:
    """Cumulants K_1..K_R of one variable, truncated at order R.

    Reads beyond R raise OrderShortfallError; truncation is a hard
    boundary, not an implicit zero-fill.
    """

    values: tuple

    def __init__(self, values):
        vals = tuple(values)
        if not vals:
            raise DomainError("a cumulant sequence needs at least order 1")
        object.__setattr__(self, "values", vals)

    @property
    def order(self) -> int:
        return len(self.values)

    def k(self, n: int):
        if n < 1:
            raise DomainError(f"cumulant order must be positive, got {n}")
        if n > self.order:
            raise OrderShortfallError(
                f"cumulant K_{n} requested but the sequence stops at order {self.order}"
            )
        return self.values[n - 1]


@dataclass(frozen=True)
class NCPolynomial:
    """A polynomial in non-commuting variables X_1, X_2, ...

    Terms are (coefficient, word) pairs, a word being a tuple of variable
    indices; the empty word is the scalar unit.  Terms are kept sorted by
    (length, word) with zero coefficients dropped, so equal polynomials
    compare equal.
    """

    terms: tuple

    def __init__(self, terms):
        merged = {}
        for coeff, word in terms:
            word = tuple(int(v) for v in word)
            if any(v < 1 for v in word):
                raise DomainError(f"variable indices start at 1, got word {word}")
            merged[word] = merged.get(word, Fraction(0)) + Fraction(coeff)
        cleaned = tuple(
            (merged[w], w) for w in sorted(merged, key=lambda w: (len(w), w)) if merged[w]
        )
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def variable(cls, index: int) -> "NCPolynomial":
        return cls([(Fraction(1), (index,))])

    @classmethod
    def scalar(cls, value) -> "NCPolynomial":
        return cls([(Fraction(value), ())])

    def __add__(self, other):
        other = _coerce_poly(other)
        return NCPolynomial(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial([(-c, w) for c, w in self.terms])

    def __sub__(self, other):
        return self + (-_coerce_poly(other))

    def __mul__(self, other):
        other = _coerce_poly(other)
        prods = []
        for c1, w1 in self.terms:
            for c2, w2 in other.terms:
                prods.append((c1 * c2, w1 + w2))
        return NCPolynomial(prods)

    def __rmul__(self, other):
        return _coerce_poly(other) * self


def _coerce_poly(value) -> NCPolynomial:
    if isinstance(value, NCPolynomial):
        return value
    return NCPolynomial.scalar(value)


def moments_from_cumulants(seq: CumulantSequence, n_max: int) -> list:
    """Moments m_1..m_n_max from cumulants, by the convolution recursion."""
    if n_max < 1:
        raise DomainError(f"moment order must be positive, got {n_max}")
    if n_max > seq.order:
        raise OrderShortfallError(
            f"moments to order {n_max} need cumulants to order {n_max}, have {seq.order}"
        )
    moments = [Fraction(1)]  # m_0
    for n in range(1, n_max + 1):
        moments.append(sum(seq.k(k) * moments[n - k] for k in range(1, n + 1)))
    return moments[1:]


def cumulants_from_moments(moments, n_max: int | None = None) -> CumulantSequence:
    """Cumulants K_1..K_n_max from moments m_1..., inverting the recursion."""
    moments = list(moments)
    if n_max is None:
        n_max = len(moments)
    if n_max < 1:
        raise DomainError(f"cumulant order must be positive, got {n_max}")
    if n_max > len(moments):
        raise DomainError(
            f"cumulants to order {n_max} need moments to order {n_max}, got {len(moments)}"
        )
    full = [Fraction(1)] + [m for m in moments]  # m_0 prepended
    kappa = []
    for n in range(1, n_max + 1):
        tail = sum(kappa[k - 1] * full[n - k] for k in range(1, n))
        kappa.append(full[n] - tail)
    return CumulantSequence(kappa)


def _run_length(word, start: int) -> int:
    head = word[start]
    k = start
    while k < len(word) and word[k] == head:
        k += 1
    return k - start


def word_moment(word, family) -> Fraction:
    """Joint moment of X_{w_1} X_{w_2} ... X_{w_m} for an independent family.

    family maps variable index to its CumulantSequence.  Evaluates the
    interval-partition sum by peeling the first block: only blocks with a
    constant variable contribute, so

        phi(w) = sum_{k=1..run(w)} K_k(X_{w_1}) phi(w_{k+1:}).
    """
    word = tuple(word)
    if not word:
        return Fraction(1)
    for v in set(word):
        if v not in family:
            raise DomainError(f"no cumulant sequence for variable {v}")
    memo = {len(word): Fraction(1)}

    def phi(start: int) -> Fraction:
        if start in memo:
            return memo[start]
        seq = family[word[start]]
        run = _run_length(word, start)
        if run > seq.order:
            raise OrderShortfallError(
                f"variable {word[start]} repeats {run} times in a row but its "
                f"sequence stops at order {seq.order}"
            )
        total = Fraction(0)
        for k in range(1, run + 1):
            total += seq.k(k) * phi(start + k)
        memo[start] = total
        return total

    return phi(0)


def polynomial_moment(poly: NCPolynomial, family) -> Fraction:
    """Expectation of a polynomial: coefficient-weighted word moments."""
    return sum((c * word_moment(w, family) for c, w in poly.terms), Fraction(0))


def element_cumulants(
    poly: NCPolynomial,
    family,
    order: int,
    term_cap: int = DEFAULT_TERM_CAP,
) -> CumulantSequence:
    """Cumulants K_1..K_order of a polynomial element, via its moments.

    Expands poly^m term by term (words concatenate, scalars collapse) and
    converts the resulting moments.  The running expansion is capped at
    term_cap distinct words; a breach raises ExpansionCapError naming the
    cap, so runaway inputs fail fast instead of thrashing.
    """
    if order < 1:
        raise DomainError(f"cumulant order must be positive, got {order}")
    current = {(): Fraction(1)}
    base = poly.terms
    moments = []
    phi_cache = {(): Fraction(1)}
    for power in range(1, order + 1):
        nxt = {}
        for w1, c1 in current.items():
            for c2, w2 in base:
                w = w1 + w2
                acc = nxt.get(w)
                nxt[w] = c1 * c2 if acc is None else acc + c1 * c2
        nxt = {w: c for w, c in nxt.items() if c}
        if len(nxt) > term_cap:
            raise ExpansionCapError(
                f"power {power} expansion has {len(nxt)} terms, over the cap {term_cap}"
            )
        current = nxt
        total = Fraction(0)
        for w, c in current.items():
            if w not in phi_cache:
                phi_cache[w] = word_moment(w, family)
            total += c * phi_cache[w]
        moments.append(total)
    return cumulants_from_moments(moments, order)


def mixed_cumulant(args, family) -> Fraction:
    """The multilinear cumulant K_n(P_1, ..., P_n) of polynomial arguments.

    Inverts the moment formula on the interval lattice:

        K_n = sum_{pi} (-1)^(#pi - 1) prod_{blocks B} phi(prod_{i in B} P_i).
    """
    args = [_coerce_poly(a) for a in args]
    n = len(args)
    if n < 1:
        raise DomainError("mixed cumulant needs at least one argument")
    # phi of every contiguous sub-product, half-open indices [i, j).
    seg = {}
    for i in range(n):
        acc = NCPolynomial.scalar(1)
        for j in range(i + 1, n + 1):
            acc = acc * args[j - 1]
            seg[(i, j)] = polynomial_moment(acc, family)
    total = Fraction(0)
    for pi in enumerate_interval(n):
        prod = Fraction(1)
        for block in pi.blocks():
            prod *= seg[(block[0] - 1, block[-1])]
            if not prod:
                break
        total += (-1) ** (pi.num_blocks - 1) * prod
    return total


def product_cumulant(grouping, word, family) -> Fraction:
    """Cumulant of grouped products of single variables.

    grouping lists consecutive group sizes over the word, so a word
    (w_1, ..., w_m) with grouping (g_1, ..., g_p) means the cumulant
    K_p(Y_1, ..., Y_p) with each Y_j a product of the next g_j variables.
    Evaluated by the lattice product formula: sum of K_pi over partitions
    pi whose join with the grouping partition is the one-block partition,
    where K_pi factors over blocks and vanishes unless the block's
    variables agree.
    """
    word = tuple(word)
    grouping = tuple(int(g) for g in grouping)
    m = len(word)
    if m < 1:
        raise DomainError("empty word")
    if any(g < 1 for g in grouping):
        raise DomainError(f"group sizes must be positive, got {grouping}")
    if sum(grouping) != m:
        raise DomainError(
            f"grouping covers {sum(grouping)} positions but the word has {m}"
        )
    for v in set(word):
        if v not in family:
            raise DomainError(f"no cumulant sequence for variable {v}")
    rho_cuts = set()
    pos = 0
    for g in grouping[:-1]:
        pos += g
        rho_cuts.add(pos)
    total = Fraction(0)
    for pi in enumerate_interval(m):
        if pi.cuts & rho_cuts:
            continue  # join with the grouping is not the one-block partition
        prod = Fraction(1)
        for block in pi.blocks():
            letters = {word[p - 1] for p in block}
            if len(letters) > 1:
                prod = Fraction(0)
                break
            prod *= family[word[block[0] - 1]].k(len(block))
        total += prod
    return total


def shifted_cumulants(seq: CumulantSequence, shift, order: int) -> CumulantSequence:
    """Cumulants of X + a*1 from those of X.

    Adding a scalar is not a convolution in this calculus; the shift feeds
    every order at and above two:

        K_1(X+a) = K_1(X) + a
        K_m(X+a) = sum_{i=0..m-2} C(m-2, i) a^i K_{m-i}(X),  m >= 2.
    """
    a = Fraction(shift)
    if order < 1:
        raise DomainError(f"order must be positive, got {order}")
    if order > seq.order:
        raise OrderShortfallError(
            f"shift to order {order} needs cumulants to order {order}, have {seq.order}"
        )
    out = [seq.k(1) + a]
    for m in range(2, order + 1):
        out.append(
            sum(
                math.comb(m - 2, i) * a**i * seq.k(m - i)
                for i in range(0, m - 1)
            )
        )
    return CumulantSequence(out)


def gaussian_sequence(mean, variance, order: int) -> CumulantSequence:
    """K_1 = mean, K_2 = variance, all higher cumulants zero."""
    if order < 1:
        raise DomainError(f"order must be positive, got {order}")
    vals = [Fraction(mean)]
    if order >= 2:
        vals.append(Fraction(variance))
        vals.extend([Fraction(0)] * (order - 2))
    return CumulantSequence(vals)


def poisson_sequence(rate, jump, order: int) -> CumulantSequence:
    """K_n = jump^n * rate for every n."""
    if order < 1:
        raise DomainError(f"order must be positive, got {order}")
    lam = Fraction(rate)
    alpha = Fraction(jump)
    return CumulantSequence([alpha**n * lam for n in range(1, order + 1)])


def even_poisson_sequence(odd_values, order: int) -> CumulantSequence:
    """All even cumulants equal 1; odd cumulants come from the given list.

    Odd orders beyond the list default to zero.
    """
    if order < 1:
        raise DomainError(f"order must be positive, got {order}")
    odds = [Fraction(v) for v in odd_values]
    vals = []
    for n in range(1, order + 1):
        if n % 2 == 0:
            vals.append(Fraction(1))
        else:
            j = (n - 1) // 2
            vals.append(odds[j] if j < len(odds) else Fraction(0))
    return CumulantSequence(vals)


def custom_sequence(values) -> CumulantSequence:
    return CumulantSequence([Fraction(v) for v in values])


def _parse_kv(body: str, keys) -> dict:
    out = {}
    for piece in body.split(","):
        piece = piece.strip()
        if not piece:
            continue
        key, eq, val = piece.partition("=")
        key = key.strip()
        if not eq or key not in keys:
            raise DomainError(f"bad preset parameter {piece!r}, expected one of {sorted(keys)}")
        out[key] = parse_rational(val)
    missing = set(keys) - set(out)
    if missing:
        raise DomainError(f"preset is missing parameters {sorted(missing)}")
    return out


def parse_distribution(text: str, order: int) -> CumulantSequence:
    """Build a cumulant sequence from a preset string.

    Accepted forms:
        gaussian:c=<rat>,v=<rat>
        poisson:lambda=<rat>,alpha=<rat>
        evenpoisson:odd=<rat-list>
        custom:<rat-list>
    custom ignores the requested order and keeps exactly the listed values.
    """
    kind, sep, body = str(text).partition(":")
    kind = kind.strip()
    if not sep:
        raise DomainError(f"preset {text!r} has no parameters")
    if kind == "gaussian":
        params = _parse_kv(body, {"c", "v"})
        return gaussian_sequence(params["c"], params["v"], order)
    if kind == "poisson":
        params = _parse_kv(body, {"lambda", "alpha"})
        return poisson_sequence(params["lambda"], params["alpha"], order)
    if kind == "evenpoisson":
        key, eq, val = body.partition("=")
        if key.strip() != "odd" or not eq:
            raise DomainError(f"evenpoisson takes odd=<rat-list>, got {body!r}")
        return even_poisson_sequence(parse_rational_list(val), order)
    if kind == "custom":
        return custom_sequence(parse_rational_list(body))
    raise DomainError(f"unknown distribution preset {kind!r}")


def constant_family(seq: CumulantSequence, n: int) -> dict:
    """A family of n variables sharing one cumulant sequence (indices 1..n)."""
    if n < 1:
        raise DomainError(f"family size must be positive, got {n}")
    return {i: seq for i in range(1, n + 1)}
