"""Chain complexes of tuples and their integer homology.

Six complex builders share one machinery:

  rel_defect       tuples of bounded defect, deletion-only differential
  rack             all tuples, rack differential
  quandle          rack complex modulo the degenerate subcomplex
  partial_rack     defect-0 tuples over a partial operation
  partial_quandle  partial_rack modulo degenerates
  general_defect   bounded defect with the rack differential, for a
                   total operation compatible with the relation

Homology is reported as a free rank plus invariant factors.  Because
chain groups are free and boundaries land in free groups, the kernel of
each differential is a saturated subgroup; the torsion of H_n therefore
equals the nontrivial invariant factors of the (n+1)-st boundary matrix
and no kernel-basis pullback is needed.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

from .errors import ArgumentError, AxiomError, ParseError
from .snf import SparseIntMatrix, smith_normal_form, solve_integer

COMPLEX_KINDS = (
    "rel_defect",
    "rack",
    "quandle",
    "partial_rack",
    "partial_quandle",
    "general_defect",
)


def defect(rel, word):
    """Number of missing left-to-right related pairs in the tuple."""
    n = len(word)
    missing = 0
    for i in range(n):
        for j in range(i + 1, n):
            if not rel.relate(word[i], word[j]):
                missing += 1
    return missing


def is_degenerate(word):
    return any(word[i] == word[i + 1] for i in range(len(word) - 1))


@dataclass(frozen=True)
class AbelianGroup:
    """Free rank plus invariant factors (each > 1, each dividing the next)."""

    free_rank: int
    invariant_factors: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ArgumentError("free rank must be nonnegative")
        fs = tuple(self.invariant_factors)
        for f in fs:
            if f <= 1:
                raise ArgumentError("invariant factors must exceed 1")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ArgumentError("invariant factors must form a divisibility chain")
        object.__setattr__(self, "invariant_factors", fs)

    def is_trivial(self):
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"


class Chain:
    """A sparse integer combination of basis tuples in one degree."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree, coeffs=None):
        self.degree = degree
        self.coeffs = {}
        if coeffs:
            for word, c in dict(coeffs).items():
                word = tuple(word)
                if len(word) != degree:
                    raise ArgumentError(
                        f"tuple {word!r} has length {len(word)}, expected {degree}"
                    )
                if c:
                    self.coeffs[word] = c

    def __eq__(self, other):
        return (
            isinstance(other, Chain)
            and other.degree == self.degree
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coeffs.items()))))

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if other.degree != self.degree:
            raise ArgumentError("degree mismatch")
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return Chain(self.degree, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return Chain(self.degree, {w: k * c for w, c in self.coeffs.items()})

    def items(self):
        return sorted(self.coeffs.items())

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for word, c in self.items():
            tup = "(" + ",".join(word) + ")"
            if c == 1:
                parts.append(f"+{tup}")
            elif c == -1:
                parts.append(f"-{tup}")
            else:
                parts.append(f"{c:+d}*{tup}")
        return "".join(parts)

    def __repr__(self):
        return f"Chain({self.degree}, {self})"


_CHAIN_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coef>\d+)\s*\*\s*)?\(\s*(?P<body>[^()]*?)\s*\)"
)


def parse_chain(text, degree=None):
    """Parse chains like ``-(5,4)-(3,5)+2*(1,3)``."""
    if text.strip() == "0":
        return Chain(degree if degree is not None else 0)
    pos = 0
    coeffs = {}
    found = False
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _CHAIN_TERM.match(text, pos)
        if not m:
            raise ParseError(f"bad chain syntax near {text[pos:pos+20]!r}", column=pos + 1)
        if found and m.group("sign") is None:
            raise ParseError("chain terms after the first need a sign", column=pos + 1)
        sign = -1 if m.group("sign") == "-" else 1
        coef = int(m.group("coef")) if m.group("coef") else 1
        word = tuple(t.strip() for t in m.group("body").split(",") if t.strip())
        if not word:
            raise ParseError("empty tuple in chain", column=pos + 1)
        if degree is None:
            degree = len(word)
        coeffs[word] = coeffs.get(word, 0) + sign * coef
        pos = m.end()
        found = True
    if not found:
        raise ParseError("empty chain expression")
    return Chain(degree, coeffs)


@dataclass(frozen=True)
class TupleBasis:
    degree: int
    tuples: tuple
    criterion: str = ""
    index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "index", {w: k for k, w in enumerate(self.tuples)}
        )

    def __len__(self):
        return len(self.tuples)

    def __contains__(self, word):
        return tuple(word) in self.index


class ChainComplex:
    """Graded tuple bases with sparse integer boundary matrices.

    boundaries[n] maps degree n to degree n-1 (columns indexed by the
    degree-n basis).  partial_1 is identically zero and C_0 has the
    single empty-tuple generator.
    """

    def __init__(self, kind, max_degree, bases, boundaries, description=""):
        self.kind = kind
        self.max_degree = max_degree
        self.bases = bases
        self.boundaries = boundaries
        self.description = description
        self._snf_cache = {}
        self._snf_t_cache = {}

    def basis(self, n):
        if n < 0 or n > self.max_degree:
            raise ArgumentError(f"degree {n} outside 0..{self.max_degree}")
        return self.bases[n]

    def rank(self, n):
        return len(self.basis(n))

    def boundary_matrix(self, n):
        if n < 1 or n > self.max_degree:
            raise ArgumentError(f"no boundary matrix for degree {n}")
        return self.boundaries[n]

    def chain(self, coeffs, degree=None):
        if isinstance(coeffs, str):
            c = parse_chain(coeffs, degree)
        else:
            c = Chain(degree, coeffs)
        return self.project(c)

    def project(self, chain):
        """Validate a chain against the basis, dropping degenerate tuples
        when this complex is a quotient by the degenerate subcomplex."""
        basis = self.basis(chain.degree)
        out = {}
        quotient = self.kind in ("quandle", "partial_quandle")
        for word, c in chain.coeffs.items():
            if word in basis:
                out[word] = c
            elif quotient and is_degenerate(word):
                continue
            else:
                raise ArgumentError(f"tuple {word!r} not in the degree-{chain.degree} basis")
        return Chain(chain.degree, out)

    def boundary(self, chain):
        """The boundary of a chain, one degree down."""
        n = chain.degree
        if n < 1:
            raise ArgumentError("boundary needs degree at least 1")
        if n > self.max_degree:
            raise ArgumentError(f"degree {n} beyond max degree {self.max_degree}")
        chain = self.project(chain)
        if n == 1:
            return Chain(0)
        basis_n = self.basis(n)
        basis_m = self.basis(n - 1)
        vec = {basis_n.index[w]: c for w, c in chain.coeffs.items()}
        image = self.boundaries[n].mul_vector(vec)
        return Chain(n - 1, {basis_m.tuples[i]: c for i, c in image.items()})

    def _snf(self, n, transforms=False):
        cache = self._snf_t_cache if transforms else self._snf_cache
        if n not in cache:
            if transforms and n in self._snf_cache:
                pass
            cache[n] = smith_normal_form(self.boundaries[n], transforms=transforms)
        return cache[n]

    def homology(self, n):
        """H_n = ker d_n / im d_(n+1) as free rank plus invariant factors.

        Valid for 0 <= n <= max_degree - 1; the top degree would need
        the next boundary matrix.
        """
        if n < 0:
            raise ArgumentError("negative degree")
        if n >= self.max_degree:
            raise ArgumentError(
                f"homology in degree {n} needs boundaries up to {n + 1}; "
                f"complex only holds degrees up to {self.max_degree}"
            )
        if n == 0:
            nullity = self.rank(0)
        else:
            nullity = self.rank(n) - self._snf(n).rank
        snf_next = self._snf(n + 1)
        free = nullity - snf_next.rank
        torsion = tuple(snf_next.nontrivial_factors)
        return AbelianGroup(free, torsion)

    def express_as_boundary(self, chain):
        """A witness w with boundary(w) = chain, or None.

        The chain must be a cycle; solved over the integers through the
        Smith form of the next boundary matrix.
        """
        n = chain.degree
        chain = self.project(chain)
        if n >= self.max_degree:
            raise ArgumentError("no stored boundary matrix above this degree")
        if not self.boundary(chain).is_zero():
            raise ArgumentError("chain is not a cycle")
        basis_n = self.basis(n)
        basis_up = self.basis(n + 1)
        rhs = {basis_n.index[w]: c for w, c in chain.coeffs.items()}
        snf = self._snf(n + 1, transforms=True)
        sol = solve_integer(self.boundaries[n + 1], rhs, snf=snf)
        if sol is None:
            return None
        return Chain(n + 1, {basis_up.tuples[j]: c for j, c in sol.items()})

    def order_in_homology(self, chain):
        """Least m >= 1 with m*chain a boundary; 0 stands for infinite order."""
        n = chain.degree
        chain = self.project(chain)
        if n >= self.max_degree:
            raise ArgumentError("no stored boundary matrix above this degree")
        if not self.boundary(chain).is_zero():
            raise ArgumentError("chain is not a cycle")
        if chain.is_zero():
            return 1
        basis_n = self.basis(n)
        mat = self.boundaries[n + 1]
        snf = self._snf(n + 1, transforms=True)
        m = mat.nrows
        c = [0] * m
        for w, v in chain.coeffs.items():
            c[basis_n.index[w]] = v
        uc = [sum(snf.U[i][k] * c[k] for k in range(m)) for i in range(m)]
        order = 1
        for i in range(m):
            d = snf.diagonal[i] if i < len(snf.diagonal) else 0
            if d:
                if uc[i] % d:
                    need = d // math.gcd(d, uc[i])
                    order = order * need // math.gcd(order, need)
            elif uc[i]:
                return 0
        return order


# -- builders -----------------------------------------------------------------


def _deletion_column(word, basis_prev):
    col = {}
    n = len(word)
    for i in range(1, n + 1):
        sgn = -1 if i % 2 else 1
        target = word[: i - 1] + word[i:]
        if target in basis_prev.index:
            k = basis_prev.index[target]
            col[k] = col.get(k, 0) + sgn
        else:
            raise AxiomError(
                f"deletion boundary of {word!r} leaves the basis at {target!r}"
            )
    return {k: v for k, v in col.items() if v}


def _rack_column(word, basis_prev, star, quotient, context):
    col = {}
    n = len(word)
    for i in range(1, n + 1):
        sgn = -1 if i % 2 else 1
        xi = word[i - 1]
        deleted = word[: i - 1] + word[i:]
        acted = []
        for j in range(i - 1):
            prod = star(word[j], xi)
            if prod is None:
                raise AxiomError(
                    f"{context}: {word[j]!r} * {xi!r} undefined while "
                    f"differentiating {word!r} (PQ1 failure on a needed entry)"
                )
            acted.append(prod)
        acted = tuple(acted) + word[i:]
        for target, s in ((deleted, sgn), (acted, -sgn)):
            if quotient and is_degenerate(target):
                continue
            if target not in basis_prev.index:
                raise AxiomError(
                    f"{context}: boundary of {word!r} leaves the basis at "
                    f"{target!r} (PQ2 failure: products escape the defect bound)"
                )
            k = basis_prev.index[target]
            col[k] = col.get(k, 0) + s
    return {k: v for k, v in col.items() if v}


def _tuples_with_defect(rel, n, bound):
    """All n-tuples over rel.elements with defect <= bound, in lex order
    of element indices; generated by extension so prefixes prune early."""
    elements = rel.elements
    out = []

    def extend(prefix, miss):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for e in elements:
            extra = sum(1 for x in prefix if not rel.relate(x, e))
            if miss + extra <= bound:
                prefix.append(e)
                extend(prefix, miss + extra)
                prefix.pop()

    extend([], 0)
    return out


def build_complex(kind, source, max_degree, defect_bound=0):
    """Materialize bases and boundary matrices for one of the six theories.

    `source` is a BinaryRelation for kind 'rel_defect' and a
    PartialAlgebra otherwise.  Quotient kinds use the non-degenerate
    tuples as basis and drop degenerate generators from boundary
    images.  The composite of consecutive boundaries is asserted to be
    zero at build time.
    """
    if kind not in COMPLEX_KINDS:
        raise ArgumentError(f"unknown complex kind {kind!r}")
    if max_degree < 1:
        raise ArgumentError("max degree must be at least 1")

    if kind == "rel_defect":
        rel = source
        elements = rel.elements
        star = None
        description = f"defect-{defect_bound} complex of a relation on {len(elements)} elements"
    else:
        algebra = source
        rel = algebra.rel
        elements = algebra.elements
        star = algebra.star_or_none
        description = f"{kind} complex of {algebra.describe()}"
        if kind in ("rack", "quandle", "general_defect") and not algebra.star_total():
            raise AxiomError(f"{kind} complex needs a total * operation")
        if kind == "general_defect":
            _check_general_defect_conditions(algebra)

    quotient = kind in ("quandle", "partial_quandle")

    bases = {0: TupleBasis(0, ((),), "unit")}
    for n in range(1, max_degree + 1):
        if kind in ("rel_defect", "general_defect"):
            tuples = _tuples_with_defect(rel, n, defect_bound)
            crit = f"defect <= {defect_bound}"
        elif kind in ("partial_rack", "partial_quandle"):
            tuples = _tuples_with_defect(rel, n, 0)
            crit = "defect = 0"
        else:
            tuples = [tuple(w) for w in itertools.product(elements, repeat=n)]
            crit = "all tuples"
        if quotient:
            tuples = [w for w in tuples if not is_degenerate(w)]
            crit += ", non-degenerate"
        bases[n] = TupleBasis(n, tuple(tuples), crit)

    boundaries = {}
    for n in range(1, max_degree + 1):
        prev = bases[n - 1]
        cols = []
        for word in bases[n].tuples:
            if n == 1:
                cols.append({})
            elif kind == "rel_defect":
                cols.append(_deletion_column(word, prev))
            else:
                cols.append(_rack_column(word, prev, star, quotient, kind))
        boundaries[n] = SparseIntMatrix.from_columns(cols, len(prev))

    complex_ = ChainComplex(kind, max_degree, bases, boundaries, description)

    # d o d = 0, checked degree by degree on every generator
    for n in range(2, max_degree + 1):
        mat_n = boundaries[n]
        mat_prev = boundaries[n - 1]
        for j in range(mat_n.ncols):
            col = mat_n.column(j)
            if mat_prev.mul_vector(col):
                raise AxiomError(
                    f"d o d != 0 at degree {n}, generator {bases[n].tuples[j]!r}"
                )
    return complex_


def _check_general_defect_conditions(algebra):
    """Remark-style requirements for running the rack differential at
    arbitrary defect: the operation acts within dominance classes and is
    right self-distributive everywhere."""
    from .relation import dominance

    pre = dominance(algebra.rel)
    for x in algebra.elements:
        for y in algebra.elements:
            p = algebra.star_or_none(x, y)
            if p is None:
                raise AxiomError("general defect complex needs a total * operation")
            if not pre.equivalent(x, p):
                raise AxiomError(
                    f"general defect condition (1) fails: {x!r} * {y!r} = {p!r} "
                    f"is not dominance-equivalent to {x!r}"
                )
    for x in algebra.elements:
        for y in algebra.elements:
            for z in algebra.elements:
                lhs = algebra.star_or_none(algebra.star_or_none(x, y), z)
                rhs = algebra.star_or_none(
                    algebra.star_or_none(x, z), algebra.star_or_none(y, z)
                )
                if lhs != rhs:
                    raise AxiomError(
                        f"general defect condition (2) fails on ({x!r},{y!r},{z!r})"
                    )
