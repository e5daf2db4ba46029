"""Finite binary relations on named elements.

A relation is a 0/1 incidence matrix over an ordered list of distinct
names.  Nothing is assumed about the bit pattern: reflexivity, symmetry
and transitivity are properties to test, not invariants.  On top of the
raw matrix this module provides the dominance preorder, its equivalence
classes and quotient, the symmetric / semi-transitive / combined
closures, and monotone-map checking.

All values are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArgumentError, ParseError, UnknownElementError

CLOSURE_KINDS = ("symmetric", "semi_transitive", "st")


class BinaryRelation:
    """An ordered element list plus a square 0/1 matrix.

    ``matrix[i][j] == 1`` means element ``i`` relates to element ``j``.
    Iteration orders everywhere follow declaration order, so derived
    data (classes, closures, printed tables) is deterministic.
    """

    __slots__ = ("elements", "matrix", "_index")

    def __init__(self, elements, matrix):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise ArgumentError("element names must be distinct")
        n = len(elements)
        rows = []
        for row in matrix:
            row = tuple(int(b) for b in row)
            if len(row) != n or any(b not in (0, 1) for b in row):
                raise ArgumentError("matrix must be square over bits 0/1")
            rows.append(row)
        if len(rows) != n:
            raise ArgumentError("matrix must be square over bits 0/1")
        self.elements = elements
        self.matrix = tuple(rows)
        self._index = {name: i for i, name in enumerate(elements)}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_pairs(cls, elements, pairs):
        elements = tuple(elements)
        index = {name: i for i, name in enumerate(elements)}
        rows = [[0] * len(elements) for _ in elements]
        for x, y in pairs:
            rows[index[x]][index[y]] = 1
        return cls(elements, rows)

    @classmethod
    def full(cls, elements):
        elements = tuple(elements)
        return cls(elements, [[1] * len(elements) for _ in elements])

    @classmethod
    def empty(cls, elements):
        elements = tuple(elements)
        return cls(elements, [[0] * len(elements) for _ in elements])

    # -- basic queries ---------------------------------------------------------

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElementError(f"unknown element {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    def __len__(self):
        return len(self.elements)

    def relate(self, x, y):
        """The matrix bit for the named pair (x, y)."""
        return self.matrix[self.index(x)][self.index(y)]

    def bit(self, i, j):
        return self.matrix[i][j]

    def pairs(self):
        """All related pairs, in row-major declaration order."""
        out = []
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                if self.matrix[i][j]:
                    out.append((x, y))
        return out

    def row_set(self, x):
        i = self.index(x)
        return frozenset(y for j, y in enumerate(self.elements) if self.matrix[i][j])

    def col_set(self, x):
        j = self.index(x)
        return frozenset(y for i, y in enumerate(self.elements) if self.matrix[i][j])

    # -- standard properties ----------------------------------------------------

    def is_reflexive(self):
        return all(self.matrix[i][i] for i in range(len(self.elements)))

    def is_symmetric(self):
        m = self.matrix
        n = len(self.elements)
        return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))

    def is_transitive(self):
        m = self.matrix
        n = len(self.elements)
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    for k in range(n):
                        if m[j][k] and not m[i][k]:
                            return False
        return True

    def is_semi_transitive(self):
        """Transitivity restricted to pairwise-distinct triples."""
        m = self.matrix
        n = len(self.elements)
        for i in range(n):
            for j in range(n):
                if i != j and m[i][j]:
                    for k in range(n):
                        if k != i and k != j and m[j][k] and not m[i][k]:
                            return False
        return True

    def is_subset_of(self, other):
        if self.elements != other.elements:
            raise ArgumentError("relations live on different element lists")
        n = len(self.elements)
        return all(
            self.matrix[i][j] <= other.matrix[i][j] for i in range(n) for j in range(n)
        )

    # -- structure --------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, BinaryRelation)
            and self.elements == other.elements
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.elements, self.matrix))

    def __repr__(self):
        return f"BinaryRelation({list(self.elements)!r}, {len(self.pairs())} pairs)"

    def rename(self, mapping):
        """A copy with elements renamed through `mapping` (a total dict)."""
        return BinaryRelation(tuple(mapping[e] for e in self.elements), self.matrix)

    def restricted(self, names):
        """The induced relation on a sub-list of elements, in the given order."""
        idx = [self.index(x) for x in names]
        return BinaryRelation(
            tuple(names), [[self.matrix[i][j] for j in idx] for i in idx]
        )

    def to_text(self):
        lines = [" ".join(self.elements)]
        for row in self.matrix:
            lines.append(" ".join(str(b) for b in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Preorder:
    """Dominance data for a relation: the preorder, its classes, the quotient.

    ``dominance.relate(a, b) == 1`` iff b inherits every outgoing and
    incoming edge of a.  ``classes`` partitions the elements into
    mutual-dominance classes, each named after its lexicographically
    least member; ``quotient`` is the induced relation on class names.
    """

    base: BinaryRelation
    dominance: BinaryRelation
    classes: tuple
    quotient: BinaryRelation

    def class_of(self, x):
        for cls in self.classes:
            if x in cls:
                return cls
        raise UnknownElementError(f"unknown element {x!r}")

    def equivalent(self, x, y):
        return self.dominance.relate(x, y) and self.dominance.relate(y, x)


def dominance(rel):
    """The dominance preorder of a relation, with classes and quotient.

    a dominates b when every aRc implies bRc and every dRa implies dRb.
    Mutual dominance is an equivalence; the quotient [a]R[b] iff aRb is
    well-defined because equivalent elements share exact rows/columns.
    """
    n = len(rel.elements)
    m = rel.matrix
    dom = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            ok = all(m[b][c] for c in range(n) if m[a][c])
            if ok:
                ok = all(m[d][b] for d in range(n) if m[d][a])
            dom[a][b] = 1 if ok else 0
    dom_rel = BinaryRelation(rel.elements, dom)

    seen = set()
    classes = []
    for i, x in enumerate(rel.elements):
        if x in seen:
            continue
        cls = [rel.elements[j] for j in range(n) if dom[i][j] and dom[j][i]]
        seen.update(cls)
        classes.append(tuple(cls))
    class_names = tuple(min(cls) for cls in classes)
    reps = {name: cls[0] for name, cls in zip(class_names, classes)}
    qrows = [
        [rel.relate(reps[a], reps[b]) for b in class_names] for a in class_names
    ]
    quotient = BinaryRelation(class_names, qrows)
    return Preorder(rel, dom_rel, tuple(classes), quotient)


def closure(rel, kind):
    """Least superset of `rel` that is symmetric, semi-transitive, or both.

    Semi-transitivity only fires on triples of pairwise-distinct
    elements, so symmetric pairs never force reflexive bits.  The `st`
    closure alternates both rules to the joint fixpoint; the rules are
    monotone, so the result does not depend on alternation order.
    """
    if kind not in CLOSURE_KINDS:
        raise ArgumentError(f"unknown closure kind {kind!r}")
    n = len(rel.elements)
    m = [list(row) for row in rel.matrix]

    def sym_step():
        changed = False
        for i in range(n):
            for j in range(n):
                if m[i][j] and not m[j][i]:
                    m[j][i] = 1
                    changed = True
        return changed

    def semi_step():
        changed = False
        for i in range(n):
            for j in range(n):
                if i != j and m[i][j]:
                    for k in range(n):
                        if k != i and k != j and m[j][k] and not m[i][k]:
                            m[i][k] = 1
                            changed = True
        return changed

    if kind == "symmetric":
        sym_step()
    elif kind == "semi_transitive":
        while semi_step():
            pass
    else:
        changed = True
        while changed:
            changed = sym_step()
            changed = semi_step() or changed
    return BinaryRelation(rel.elements, m)


class ElementMap:
    """A total function between the element sets of two relations."""

    __slots__ = ("mapping",)

    def __init__(self, mapping):
        self.mapping = dict(mapping)

    def __call__(self, x):
        try:
            return self.mapping[x]
        except KeyError:
            raise UnknownElementError(f"map undefined on {x!r}") from None

    def image(self):
        return frozenset(self.mapping.values())

    def compose(self, then):
        """The map x -> then(self(x))."""
        return ElementMap({x: then(y) for x, y in self.mapping.items()})


def is_monotone(f, r_src, r_dst):
    """Whether f preserves relatedness; on failure also a witness pair.

    Returns ``(1, None)`` or ``(0, (x, y))`` where xRy holds in the
    source but f(x)Rf(y) fails in the target.
    """
    for x in r_src.elements:
        fx = f(x)
        if fx not in r_dst:
            raise UnknownElementError(f"{fx!r} not in target relation")
    for x in r_src.elements:
        for y in r_src.elements:
            if r_src.relate(x, y) and not r_dst.relate(f(x), f(y)):
                return 0, (x, y)
    return 1, None


def parse_rel(text, source=None):
    """Parse the `.rel` format: a names line, then one 0/1 row per element.

    `#` starts a comment; blank lines are skipped.
    """
    rows = []
    names = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if names is None:
            names = line.split()
            if len(set(names)) != len(names):
                raise ParseError("duplicate element names", line=lineno, source=source)
            continue
        toks = line.split()
        if len(toks) != len(names):
            raise ParseError(
                f"expected {len(names)} entries, got {len(toks)}",
                line=lineno,
                source=source,
            )
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise ParseError("matrix entries must be 0 or 1", line=lineno, source=source)
        if any(b not in (0, 1) for b in row):
            raise ParseError("matrix entries must be 0 or 1", line=lineno, source=source)
        rows.append(row)
        if len(rows) > len(names):
            raise ParseError("too many matrix rows", line=lineno, source=source)
    if names is None:
        raise ParseError("empty relation file", source=source)
    if len(rows) != len(names):
        raise ParseError(
            f"expected {len(names)} matrix rows, got {len(rows)}", source=source
        )
    return BinaryRelation(names, rows)


def load_rel(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_rel(fh.read(), source=str(path))
