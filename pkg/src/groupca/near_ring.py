"""Polynomials in group-indexed variables with a substitution product.

An element is a sparse polynomial in variables X_g, one per group element.
Ordinary addition and multiplication are the usual commutative polynomial
operations (monomials are finitely supported exponent maps G -> N, added
pointwise).  The interesting product, written ``star`` here, substitutes
shifted copies of the right operand into the left one:

    star(a, b) = sum over monomials u of a of  a(u) * prod_g shift(g, b)^u(g)

where shift(g, b) relabels X_h to X_{g*h}.  This product is associative,
has X_identity as a two-sided unit, and distributes over addition on the
left only; right distributivity genuinely fails.

Exponent maps carry their own convolution (u*v)(g) = sum_h u(h) v(h^-1 g),
under which supports multiply and total degrees multiply; the leading-term
calculus for bi-invariantly ordered groups is built on it.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dc_field

from .group_ring import GroupRingElement, TwistedGroupRingElement
from .groups import FiniteSubset, GroupElement
from .rings import PrimeField, RingError


class NearRingError(ValueError):
    pass


class TermCapExceeded(NearRingError):
    """Raised when an intermediate polynomial outgrows the configured term cap."""


TERM_CAP = 10**6


class ExponentVector:
    """Finitely supported map group element -> positive exponent (a monomial)."""

    __slots__ = ("group", "items", "_hash")

    def __init__(self, group, items):
        clean = {}
        for g, e in dict(items).items():
            if not isinstance(g, GroupElement) or g.group != group:
                raise NearRingError("exponent key outside the group")
            e = int(e)
            if e < 0:
                raise NearRingError("negative exponent")
            if e:
                clean[g] = e
        self.group = group
        self.items = tuple(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))
        self._hash = hash((group._hash_seed, self.items))

    @classmethod
    def unit(cls, g: GroupElement, exponent: int = 1):
        return cls(g.group, {g: exponent})

    @classmethod
    def empty(cls, group):
        return cls(group, {})

    def degree(self) -> int:
        return sum(e for _, e in self.items)

    def support(self):
        return tuple(g for g, _ in self.items)

    def exponent(self, g) -> int:
        for h, e in self.items:
            if h == g:
                return e
        return 0

    def add(self, other: "ExponentVector") -> "ExponentVector":
        """Pointwise sum: the monomial product X^u * X^v = X^(u+v)."""
        out = dict(self.items)
        for g, e in other.items:
            out[g] = out.get(g, 0) + e
        return ExponentVector(self.group, out)

    def convolve(self, other: "ExponentVector") -> "ExponentVector":
        """(u*v)(g) = sum_h u(h) v(h^-1 g); supports multiply, degrees multiply."""
        out = {}
        for g, e in self.items:
            for h, f in other.items:
                t = g * h
                out[t] = out.get(t, 0) + e * f
        return ExponentVector(self.group, out)

    def translate(self, g: GroupElement) -> "ExponentVector":
        """Relabel by left multiplication: (g.u)(h) = u(g^-1 h)."""
        return ExponentVector(self.group, {g * h: e for h, e in self.items})

    def sort_key(self):
        return (self.degree(), tuple((g.sort_key(), e) for g, e in self.items))

    def __eq__(self, other):
        if not isinstance(other, ExponentVector):
            return NotImplemented
        return self.group == other.group and self.items == other.items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.items:
            return "1"
        return "*".join(
            "X[%s]" % g if e == 1 else "X[%s]^%d" % (g, e) for g, e in self.items
        )


class NearRingElement:
    """Sparse polynomial over a field in group-indexed variables."""

    __slots__ = ("group", "field", "terms")

    def __init__(self, group, field, terms):
        clean = {}
        for u, c in terms.items():
            if not isinstance(u, ExponentVector) or u.group != group:
                raise NearRingError("monomial outside the group")
            if c:
                clean[u] = c
        self.group = group
        self.field = field
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, group, field):
        return cls(group, field, {})

    @classmethod
    def constant(cls, group, field, c):
        return cls(group, field, {ExponentVector.empty(group): c})

    @classmethod
    def one(cls, group, field):
        return cls.constant(group, field, field.one())

    @classmethod
    def variable(cls, g: GroupElement, field, exponent: int = 1, coeff=None):
        c = field.one() if coeff is None else coeff
        return cls(g.group, field, {ExponentVector.unit(g, exponent): c})

    @classmethod
    def identity(cls, group, field):
        """The star unit X_{identity}."""
        return cls.variable(group.identity(), field)

    # -- ordinary polynomial structure ---------------------------------

    def _compat(self, other):
        if not isinstance(other, NearRingElement):
            raise NearRingError("not a near-ring element")
        if other.group != self.group or other.field != self.field:
            raise NearRingError("group or field mismatch")

    def __add__(self, other):
        self._compat(other)
        out = dict(self.terms)
        for u, c in other.terms.items():
            out[u] = out[u] + c if u in out else c
        return NearRingElement(self.group, self.field, out)

    def __neg__(self):
        return NearRingElement(self.group, self.field, {u: -c for u, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return NearRingElement(self.group, self.field, {u: v * c for u, v in self.terms.items()})

    def __mul__(self, other):
        """Ordinary commutative polynomial product (exponents add pointwise)."""
        self._compat(other)
        out = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u.add(v)
                c = a * b
                if w in out:
                    out[w] = out[w] + c
                else:
                    out[w] = c
            if len(out) > TERM_CAP:
                raise TermCapExceeded("polynomial exceeded %d terms" % TERM_CAP)
        return NearRingElement(self.group, self.field, out)

    def __pow__(self, n: int):
        if n < 0:
            raise NearRingError("negative polynomial power")
        acc = NearRingElement.one(self.group, self.field)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, NearRingElement):
            return NotImplemented
        return self.group == other.group and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, frozenset(self.terms.items())))

    # -- structure maps ------------------------------------------------

    def shift(self, g: GroupElement) -> "NearRingElement":
        """Monomial-wise relabeling X_h -> X_{g*h}; a group action fixing constants."""
        return NearRingElement(
            self.group, self.field, {u.translate(g): c for u, c in self.terms.items()}
        )

    def support_elements(self) -> FiniteSubset:
        """Union of the supports of all monomials (the memory set of the induced map)."""
        out = set()
        for u in self.terms:
            out.update(u.support())
        return FiniteSubset(self.group, out)

    def total_degree(self) -> int:
        return max((u.degree() for u in self.terms), default=0)

    def is_constant(self) -> bool:
        return all(u.degree() == 0 for u in self.terms)

    def constant_coefficient(self):
        return self.terms.get(ExponentVector.empty(self.group), self.field.zero())

    def coefficient_sum(self):
        acc = self.field.zero()
        for c in self.terms.values():
            acc = acc + c
        return acc

    def star(self, other: "NearRingElement") -> "NearRingElement":
        """Substitution product: replace X_g in self by shift(g, other)."""
        self._compat(other)
        out = NearRingElement.zero(self.group, self.field)
        shifted = {}
        for u, c in self.terms.items():
            prod = None
            for g, e in u.items:
                if g not in shifted:
                    shifted[g] = other.shift(g)
                factor = shifted[g] ** e
                prod = factor if prod is None else prod * factor
            if prod is None:
                prod = NearRingElement.one(self.group, self.field)
            out = out + prod.scale(c)
        return out

    def star_power(self, n: int) -> "NearRingElement":
        """Right-iterated star power a^(n) = a * a^(n-1); n >= 1."""
        if n < 1:
            raise NearRingError("star power needs n >= 1")
        acc = self
        for _ in range(n - 1):
            acc = self.star(acc)
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for u in sorted(self.terms, key=lambda m: m.sort_key(), reverse=True):
            c = self.terms[u]
            if not u.items:
                parts.append(repr(c))
            elif c == self.field.one():
                parts.append(repr(u))
            else:
                parts.append("%r*%r" % (c, u))
        return " + ".join(parts)


def star(a: NearRingElement, b: NearRingElement) -> NearRingElement:
    return a.star(b)


def exp_convolve(u: ExponentVector, v: ExponentVector) -> ExponentVector:
    return u.convolve(v)


def shift(g: GroupElement, a: NearRingElement) -> NearRingElement:
    return a.shift(g)


def polynomial_apply(coeffs, a: NearRingElement) -> NearRingElement:
    """Evaluate c_0 + sum_{n>=1} c_n a^(star n); coeffs listed from degree 0 up."""
    coeffs = list(coeffs)
    if not coeffs:
        raise NearRingError("empty coefficient list")
    out = NearRingElement.constant(a.group, a.field, coeffs[0])
    power = None
    for n, c in enumerate(coeffs[1:], start=1):
        power = a if n == 1 else a.star(power)
        if c:
            out = out + power.scale(c)
    return out


# ---------------------------------------------------------------------------
# embeddings


def embed_group_ring(a: GroupRingElement) -> NearRingElement:
    """K[G] -> near ring:  sum a(g) g  |->  sum a(g) X_g  (injective, multiplicative)."""
    if a.shape is not None:
        raise NearRingError("embedding needs scalar coefficients")
    terms = {ExponentVector.unit(g): c for g, c in a.coeffs.items()}
    return NearRingElement(a.group, a.field, terms)


def embed_twisted(a: TwistedGroupRingElement) -> NearRingElement:
    """K[t;F][G] -> near ring:  A g  |->  sum_k A_k X_g^(p^k)."""
    field = a.field
    p = field.characteristic
    if p == 0:
        raise NearRingError("twisted embedding needs positive characteristic")
    out = NearRingElement.zero(a.group, field)
    for g, poly in a.coeffs.items():
        terms = {}
        for k, c in enumerate(poly.coeffs):
            if c:
                terms[ExponentVector.unit(g, p**k)] = c
        out = out + NearRingElement(a.group, field, terms)
    return out


# ---------------------------------------------------------------------------
# monomial order and leading terms


class MonomialOrder:
    """Total order on exponent vectors induced by a bi-invariant group order.

    u < v iff at the greatest group element (under the group order) where
    the exponents differ, u has the smaller exponent.
    """

    def __init__(self, group_order):
        self.group_order = group_order

    def compare(self, u: ExponentVector, v: ExponentVector) -> int:
        if u == v:
            return 0
        diff = []
        ue = dict(u.items)
        ve = dict(v.items)
        for g in set(ue) | set(ve):
            if ue.get(g, 0) != ve.get(g, 0):
                diff.append(g)
        top = diff[0]
        for g in diff[1:]:
            if self.group_order.less(top, g):
                top = g
        return -1 if ue.get(top, 0) < ve.get(top, 0) else 1

    def less(self, u, v) -> bool:
        return self.compare(u, v) < 0

    def leading_term(self, a: NearRingElement):
        """Order-maximal monomial and its coefficient; errors on the zero element."""
        if not a:
            raise NearRingError("zero element has no leading term")
        best = None
        for u in a.terms:
            if best is None or self.less(best, u):
                best = u
        return a.terms[best], best


def leading_term(a: NearRingElement, order: MonomialOrder):
    return order.leading_term(a)


# ---------------------------------------------------------------------------
# unit-pair classification


@dataclass
class UnitClassification:
    verdict: str  # "not_unit_pair" | "trivial_unit" | "nontrivial_unit_witness"
    a: object = None
    g: object = None
    b: object = None
    product: object = None
    reverse_product: object = None
    order_backed: bool = True


def classify_unit_pair(alpha: NearRingElement, beta: NearRingElement, order=None) -> UnitClassification:
    """Classify a pair with alpha*beta computed first.

    If the star product is X_identity, try to extract the trivial-unit
    shape alpha = a X_g - a b, beta = a^-1 X_{g^-1} + b; any unit pair not
    of that shape is returned as a witness (over a bi-invariantly ordered
    group and a domain this would contradict the unit theorem).
    """
    ident = NearRingElement.identity(alpha.group, alpha.field)
    prod = alpha.star(beta)
    rev = beta.star(alpha)
    if prod != ident:
        return UnitClassification("not_unit_pair", product=prod, reverse_product=rev)
    extracted = _trivial_unit_shape(alpha, beta)
    if extracted is not None:
        a, g, b = extracted
        return UnitClassification(
            "trivial_unit", a=a, g=g, b=b, product=prod, reverse_product=rev,
            order_backed=order is not None,
        )
    return UnitClassification(
        "nontrivial_unit_witness", product=prod, reverse_product=rev,
        order_backed=order is not None,
    )


def _trivial_unit_shape(alpha, beta):
    group, field = alpha.group, alpha.field
    nonconst = [(u, c) for u, c in alpha.terms.items() if u.degree() > 0]
    if len(nonconst) != 1:
        return None
    u, a = nonconst[0]
    if len(u.items) != 1 or u.items[0][1] != 1:
        return None
    g = u.items[0][0]
    const = alpha.constant_coefficient()
    a_inv = _invert_scalar(a)
    if a_inv is None:
        return None
    b = -(const * a_inv)
    expected_beta = NearRingElement.variable(g.inverse(), field, coeff=a_inv) + NearRingElement.constant(group, field, b)
    if beta == expected_beta:
        return a, g, b
    return None


def _invert_scalar(c):
    try:
        from fractions import Fraction

        if isinstance(c, Fraction):
            return 1 / c if c else None
        return c.inverse() if c else None
    except (RingError, ZeroDivisionError):
        return None


# ---------------------------------------------------------------------------
# exhaustive search over finite coefficient spaces
#
# The star product is K-linear in its left argument, so for a fixed right
# operand beta the map alpha |-> alpha star beta is a linear map on the
# coefficient space.  Unit and zero-divisor searches therefore enumerate
# beta and solve one exact linear system per beta, which makes the search
# exhaustive over the whole space on both sides.  Idempotents are found by
# direct enumeration.  All internals run on plain integers mod p; every
# finding is re-certified through the generic star product.


@dataclass
class Finding:
    kind: str
    alpha: NearRingElement
    beta: object  # NearRingElement or None for idempotents
    product: NearRingElement
    classification: str
    detail: dict = dc_field(default_factory=dict)


@dataclass
class SearchResult:
    kind: str
    findings: list
    monomials: list
    space_size: int
    workers: int


def search_monomials(support: FiniteSubset, max_total_degree: int):
    """Canonical monomial list: exponent support inside ``support``, total
    degree bounded, ordered by (degree, sorted sparse form)."""
    elems = list(support)
    monos = []

    def rec(idx, remaining, current):
        if idx == len(elems):
            monos.append(ExponentVector(support.group, dict(current)))
            return
        for e in range(remaining + 1):
            if e:
                current[elems[idx]] = e
            rec(idx + 1, remaining - e, current)
            if e:
                del current[elems[idx]]

    rec(0, max_total_degree, {})
    monos.sort(key=lambda u: u.sort_key())
    return monos


def _universe(support: FiniteSubset, max_total_degree: int):
    """All products of at most max_total_degree support elements (plus identity)."""
    group = support.group
    layer = {group.identity()}
    universe = {group.identity()}
    for _ in range(max_total_degree):
        layer = {g * s for g in layer for s in support}
        universe |= layer
    return sorted(universe, key=lambda e: e.sort_key())


class _FastPoly:
    """Shared data for the integer-mod-p polynomial fast path."""

    def __init__(self, group, p, support, max_total_degree):
        self.group = group
        self.p = p
        # variables of any product X^u star beta are 2-fold products g*h of
        # support elements, whatever the degree bound
        self.universe = _universe(support, 2)
        self.var_index = {g: i for i, g in enumerate(self.universe)}
        self.shift_map = {}
        for g in support:
            mapping = {}
            for h in support:
                mapping[self.var_index[h]] = self.var_index[g * h]
            self.shift_map[self.var_index[g]] = mapping
        self.monomials = search_monomials(support, max_total_degree)
        # monomial as tuple of (var_index, exponent), sorted by var index
        self.mono_keys = []
        for u in self.monomials:
            key = tuple(sorted((self.var_index[g], e) for g, e in u.items))
            self.mono_keys.append(key)
        self.ident_key = ((self.var_index[group.identity()], 1),)

    def shift_poly(self, poly, g_idx):
        mapping = self.shift_map[g_idx]
        out = {}
        for mono, c in poly.items():
            new = tuple(sorted((mapping[v], e) for v, e in mono))
            out[new] = (out.get(new, 0) + c) % self.p
        return {m: c for m, c in out.items() if c}

    def mul(self, a, b):
        p = self.p
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                acc = dict(m1)
                for v, e in m2:
                    acc[v] = acc.get(v, 0) + e
                key = tuple(sorted(acc.items()))
                out[key] = (out.get(key, 0) + c1 * c2) % p
        return {m: c for m, c in out.items() if c}

    def star_monomial(self, key, shifted_powers):
        """X^u star beta for u given as a fast key, from precomputed (g, e) powers."""
        prod = {(): 1}
        for v, e in key:
            prod = self.mul(prod, shifted_powers[(v, e)])
        return prod

    def digits_to_poly(self, digits):
        return {self.mono_keys[i]: d for i, d in enumerate(digits) if d}

    def poly_to_element(self, poly, field):
        terms = {}
        for mono, c in poly.items():
            ev = ExponentVector(self.group, {self.universe[v]: e for v, e in mono})
            terms[ev] = field.from_int(c)
        return NearRingElement(self.group, field, terms)


def _solve_mod_p(columns, target, p):
    """Solve sum_i x_i col_i = target over F_p; return (particular, kernel basis) or None.

    ``columns`` is a list of dict polynomials; the row space is the union of
    their monomial keys plus the target's.
    """
    keys = sorted(set().union(*[set(c) for c in columns], set(target)))
    key_pos = {k: i for i, k in enumerate(keys)}
    nrows, ncols = len(keys), len(columns)
    rows = [[0] * (ncols + 1) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for m, c in col.items():
            rows[key_pos[m]][j] = c
    for m, c in target.items():
        rows[key_pos[m]][ncols] = c
    # Gauss-Jordan over F_p on the augmented system
    pivots = {}
    r = 0
    for col in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][col] % p:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][col], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
    for i in range(r, nrows):
        if rows[i][ncols] % p:
            return None  # inconsistent
    particular = [0] * ncols
    for col, ri in pivots.items():
        particular[col] = rows[ri][ncols]
    kernel = []
    for col in range(ncols):
        if col in pivots:
            continue
        vec = [0] * ncols
        vec[col] = 1
        for pcol, ri in pivots.items():
            vec[pcol] = (-rows[ri][col]) % p
        kernel.append(vec)
    return particular, kernel


def _enumerate_solutions(particular, kernel, p, cap=100000):
    if len(kernel) == 0:
        yield tuple(particular)
        return
    count = p ** len(kernel)
    if count > cap:
        raise NearRingError("solution space too large to enumerate (%d)" % count)
    for combo in itertools.product(range(p), repeat=len(kernel)):
        vec = list(particular)
        for c, kv in zip(combo, kernel):
            if c:
                vec = [(a + c * b) % p for a, b in zip(vec, kv)]
        yield tuple(vec)


def _search_chunk(kind, group, field, support, max_total_degree, start, stop):
    """Scan enumeration indices [start, stop) of the coefficient odometer."""
    p = field.p
    fast = _FastPoly(group, p, support, max_total_degree)
    m = len(fast.mono_keys)
    target_unit = {fast.ident_key: 1}
    findings = []
    digits = _index_to_digits(start, p, m)
    for index in range(start, stop):
        poly = fast.digits_to_poly(digits)
        if kind == "idempotent":
            if _fast_is_idempotent(fast, poly):
                findings.append((index, tuple(digits), None))
        else:
            beta_digits = tuple(digits)
            nonconstant = any(c and key for key, c in poly.items())
            if kind == "zero_divisor" and not nonconstant:
                _advance(digits, p)
                continue
            shifted_powers = _powers_for(fast, poly, max_total_degree)
            columns = [fast.star_monomial(k, shifted_powers) for k in fast.mono_keys]
            target = target_unit if kind == "unit" else {}
            solved = _solve_mod_p(columns, target, p)
            if solved is not None:
                particular, kernel = solved
                for sol in _enumerate_solutions(particular, kernel, p):
                    if kind == "zero_divisor" and not any(sol):
                        continue  # alpha must be nonzero
                    findings.append((index, beta_digits, sol))
        _advance(digits, p)
    return findings


def _index_to_digits(index, p, m):
    digits = [0] * m
    for i in range(m - 1, -1, -1):
        digits[i] = index % p
        index //= p
    return digits


def _advance(digits, p):
    i = len(digits) - 1
    while i >= 0:
        digits[i] += 1
        if digits[i] < p:
            return
        digits[i] = 0
        i -= 1


def _powers_for(fast, poly, max_degree):
    powers = {}
    shifted = {}
    for key in fast.mono_keys:
        for v, e in key:
            if (v, e) in powers:
                continue
            if v not in shifted:
                shifted[v] = fast.shift_poly(poly, v)
            acc = shifted[v]
            for _ in range(e - 1):
                acc = fast.mul(acc, shifted[v])
            powers[(v, e)] = acc
    powers[((), 0)] = {(): 1}
    return powers


def _fast_is_idempotent(fast, poly):
    p = fast.p
    shifted = {}
    acc = {}
    for key, c in poly.items():
        prod = {(): 1}
        for v, e in key:
            if v not in shifted:
                shifted[v] = fast.shift_poly(poly, v)
            f = shifted[v]
            for _ in range(e):
                prod = fast.mul(prod, f)
        for m, pc in prod.items():
            acc[m] = (acc.get(m, 0) + c * pc) % p
    acc = {m: c for m, c in acc.items() if c}
    return acc == poly


def worker_count(explicit=None) -> int:
    if explicit is not None:
        return max(1, int(explicit))
    env = os.environ.get("GROUPCA_WORKERS")
    return max(1, int(env)) if env else 1


def exhaustive_search(
    kind: str,
    field,
    support: FiniteSubset,
    max_total_degree: int,
    space_cap: int = 2**20,
    workers=None,
) -> SearchResult:
    """Deterministic exhaustive search for units, idempotents, or zero divisors.

    kind: "unit" (all pairs with alpha star beta = X_identity, classified),
    "idempotent" (all alpha with alpha star alpha = alpha), or
    "zero_divisor" (all pairs with alpha star beta = 0, alpha nonzero and
    beta nonconstant).  The search space is every element with exponent
    support in the monomials generated by ``support`` up to the given total
    degree and coefficients in F_p.  Enumeration order is canonical, so the
    findings list is independent of the worker count.
    """
    if kind not in ("unit", "idempotent", "zero_divisor"):
        raise NearRingError("unknown search kind %r" % kind)
    if not isinstance(field, PrimeField):
        raise NearRingError("exhaustive search runs over prime fields only")
    group = support.group
    monomials = search_monomials(support, max_total_degree)
    m = len(monomials)
    size = field.p**m
    if size > space_cap:
        raise NearRingError(
            "search space has %d elements, above the cap of %d" % (size, space_cap)
        )
    nworkers = worker_count(workers)
    chunks = _chunk_ranges(size, nworkers)
    args = [(kind, group, field, support, max_total_degree, a, b) for a, b in chunks]
    if nworkers == 1 or len(chunks) == 1:
        raw = [_search_chunk(*a) for a in args]
    else:
        import multiprocessing

        with multiprocessing.Pool(processes=nworkers) as pool:
            raw = pool.starmap(_search_chunk, args)
    merged = [f for chunk in raw for f in chunk]
    fast = _FastPoly(group, field.p, support, max_total_degree)
    findings = [_certify(kind, fast, field, rec) for rec in merged]
    return SearchResult(kind=kind, findings=findings, monomials=monomials, space_size=size, workers=nworkers)


def _chunk_ranges(size, nworkers):
    n = min(nworkers, size) or 1
    step = (size + n - 1) // n
    return [(i, min(i + step, size)) for i in range(0, size, step)]


def _certify(kind, fast, field, record):
    """Rebuild a raw finding as public elements and recompute its product."""
    index, beta_digits, alpha_sol = record
    if kind == "idempotent":
        alpha = fast.poly_to_element(fast.digits_to_poly(list(beta_digits)), field)
        product = alpha.star(alpha)
        if product != alpha:
            raise NearRingError("fast path disagreed with the generic star product")
        return Finding("idempotent", alpha, None, product, "idempotent")
    beta = fast.poly_to_element(fast.digits_to_poly(list(beta_digits)), field)
    alpha_poly = {fast.mono_keys[i]: c for i, c in enumerate(alpha_sol) if c}
    alpha = fast.poly_to_element(alpha_poly, field)
    product = alpha.star(beta)
    if kind == "unit":
        cls = classify_unit_pair(alpha, beta)
        if cls.verdict == "not_unit_pair":
            raise NearRingError("fast path disagreed with the generic star product")
        detail = {"reverse_product": cls.reverse_product}
        if cls.verdict == "trivial_unit":
            detail.update({"a": cls.a, "g": cls.g, "b": cls.b})
        return Finding("unit", alpha, beta, product, cls.verdict, detail)
    if product:
        raise NearRingError("fast path disagreed with the generic star product")
    return Finding("zero_divisor", alpha, beta, product, "zero_divisor_pair")
