"""Boolean terms over named variables, and the extension of a relation to them.

Terms are syntax trees built from variables, the constants 0 and 1, meet
(&), join (|) and negation (!).  A relation R on generators extends to
all terms by a fixed two-stage evaluation: first each generator row is
pushed through the right-hand term, then the left-hand term is applied
to the resulting bits.  The result is invariant under replacing either
side by a Boolean-equivalent term, which is what makes term-labelled
diagram moves well-defined.

Terms built from variables, meet and join only are *lattice terms*; on
those the free-distributive-lattice order is decidable by comparing the
induced monotone Boolean functions, which is how `lattice_leq` works.
"""

from __future__ import annotations

import re

from .errors import ArgumentError, CapacityError, ParseError, UnknownElementError

#: Hard cap on distinct variables in any truth-table computation.
MAX_TRUTH_TABLE_VARS = 24


class BoolTerm:
    """Base class for term nodes.  Instances are immutable and hashable."""

    __slots__ = ()

    # precedence: join 1 < meet 2 < not 3 < atom 4
    prec = 4

    def variables(self):
        out = []
        self._collect(out)
        seen = set()
        uniq = []
        for v in out:
            if v not in seen:
                seen.add(v)
                uniq.append(v)
        return tuple(uniq)

    def _collect(self, out):
        pass

    def evaluate(self, assignment):
        raise NotImplementedError

    def is_lattice_term(self, allow_constants=False):
        raise NotImplementedError

    def _child_str(self, child):
        s = str(child)
        if child.prec < self.prec:
            return f"({s})"
        return s

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class Var(BoolTerm):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def _collect(self, out):
        out.append(self.name)

    def evaluate(self, assignment):
        try:
            return assignment[self.name]
        except KeyError:
            raise UnknownElementError(f"no value for variable {self.name!r}") from None

    def is_lattice_term(self, allow_constants=False):
        return True

    def __str__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return hash(("var", self.name))


class Const(BoolTerm):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = 1 if value else 0

    def evaluate(self, assignment):
        return self.value

    def is_lattice_term(self, allow_constants=False):
        return allow_constants

    def __str__(self):
        return str(self.value)

    def __eq__(self, other):
        return isinstance(other, Const) and other.value == self.value

    def __hash__(self):
        return hash(("const", self.value))


class Not(BoolTerm):
    __slots__ = ("arg",)
    prec = 3

    def __init__(self, arg):
        self.arg = arg

    def _collect(self, out):
        self.arg._collect(out)

    def evaluate(self, assignment):
        return 1 - self.arg.evaluate(assignment)

    def is_lattice_term(self, allow_constants=False):
        return False

    def __str__(self):
        return "!" + self._child_str(self.arg)

    def __eq__(self, other):
        return isinstance(other, Not) and other.arg == self.arg

    def __hash__(self):
        return hash(("not", self.arg))


class _Binary(BoolTerm):
    __slots__ = ("left", "right")
    op = "?"

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def _collect(self, out):
        self.left._collect(out)
        self.right._collect(out)

    def is_lattice_term(self, allow_constants=False):
        return self.left.is_lattice_term(allow_constants) and self.right.is_lattice_term(
            allow_constants
        )

    def __str__(self):
        # left-associative: same-precedence child on the right needs parens
        ls = self._child_str(self.left)
        rs = str(self.right)
        if self.right.prec <= self.prec:
            rs = f"({rs})"
        return f"{ls}{self.op}{rs}"

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other.left == self.left
            and other.right == self.right
        )

    def __hash__(self):
        return hash((self.op, self.left, self.right))


class Meet(_Binary):
    __slots__ = ()
    prec = 2
    op = "&"

    def evaluate(self, assignment):
        return self.left.evaluate(assignment) & self.right.evaluate(assignment)


class Join(_Binary):
    __slots__ = ()
    prec = 1
    op = "|"

    def evaluate(self, assignment):
        return self.left.evaluate(assignment) | self.right.evaluate(assignment)


def meet_all(terms):
    terms = list(terms)
    if not terms:
        return Const(1)
    out = terms[0]
    for t in terms[1:]:
        out = Meet(out, t)
    return out


def join_all(terms):
    terms = list(terms)
    if not terms:
        return Const(0)
    out = terms[0]
    for t in terms[1:]:
        out = Join(out, t)
    return out


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_.']*)|(?P<const>[01])|(?P<op>[&|!()]))")


def parse_term(text):
    """Parse the term grammar.

    ``t ::= name | "0" | "1" | "(" t ")" | "!" t | t "&" t | t "|" t``
    with ``!`` tightest, then ``&``, then ``|``; binary operators are
    left-associative.  Errors carry the offending position.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = len(text) - len(stripped) + 1
            raise ParseError(f"unexpected character {stripped[0]!r}", column=col)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))

    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def parse_join():
        node = parse_meet()
        while peek()[0] == "op" and peek()[1] == "|":
            take()
            node = Join(node, parse_meet())
        return node

    def parse_meet():
        node = parse_factor()
        while peek()[0] == "op" and peek()[1] == "&":
            take()
            node = Meet(node, parse_factor())
        return node

    def parse_factor():
        kind, val, col = peek()
        if kind == "op" and val == "!":
            take()
            return Not(parse_factor())
        if kind == "op" and val == "(":
            take()
            node = parse_join()
            kind, val, col = take()
            if not (kind == "op" and val == ")"):
                raise ParseError("expected ')'", column=col)
            return node
        if kind == "name":
            take()
            return Var(val)
        if kind == "const":
            take()
            return Const(int(val))
        raise ParseError(
            f"expected a term, found {val!r}" if val else "unexpected end of input",
            column=col,
        )

    node = parse_join()
    kind, val, col = peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", column=col)
    return node


def _check_vars(rel, term):
    for v in term.variables():
        if v not in rel:
            raise UnknownElementError(f"term variable {v!r} not in relation elements")


def eval_rel(rel, q, p):
    """The extended relation bit  q R p  for Boolean terms q, p.

    Stage one fixes a generator a and computes  a R p  by evaluating p
    on the bits (R(a, a1), ..., R(a, an)).  Stage two evaluates q on the
    stage-one bits.  Distribution goes left first, then right; the
    other order would give a different (equally consistent) extension
    and is deliberately not provided.
    """
    if isinstance(q, str):
        q = parse_term(q)
    if isinstance(p, str):
        p = parse_term(p)
    _check_vars(rel, q)
    _check_vars(rel, p)
    row_bits = {}
    for a in q.variables():
        i = rel.index(a)
        assignment = {b: rel.matrix[i][rel.index(b)] for b in p.variables()}
        row_bits[a] = p.evaluate(assignment)
    return q.evaluate(row_bits)


def eval_sets(rel, term, f_subset, side):
    """Structural set semantics of a term (union/intersection/complement).

    ``lower`` computes  t_(R,F) = {y in F | t R y}  for any F; ``upper``
    computes  t^(R,A) = {y | y R t}  and only accepts F equal to the
    full element list.  Returns elements in declaration order.
    """
    if isinstance(term, str):
        term = parse_term(term)
    _check_vars(rel, term)
    f_subset = list(f_subset)
    for y in f_subset:
        if y not in rel:
            raise UnknownElementError(f"{y!r} not in relation elements")
    fset = frozenset(f_subset)
    if side == "upper" and fset != frozenset(rel.elements):
        raise ArgumentError("upper-side set semantics requires F to be all elements")
    if side not in ("lower", "upper"):
        raise ArgumentError(f"side must be 'lower' or 'upper', not {side!r}")

    def go(t):
        if isinstance(t, Var):
            if side == "lower":
                return frozenset(y for y in fset if rel.relate(t.name, y))
            return frozenset(y for y in fset if rel.relate(y, t.name))
        if isinstance(t, Const):
            return fset if t.value else frozenset()
        if isinstance(t, Not):
            return fset - go(t.arg)
        if isinstance(t, Meet):
            return go(t.left) & go(t.right)
        if isinstance(t, Join):
            return go(t.left) | go(t.right)
        raise ArgumentError(f"unknown term node {t!r}")

    result = go(term)
    return tuple(y for y in rel.elements if y in result)


def truth_table(term, var_order=None):
    """The term's Boolean function as an integer bitmask.

    Bit k holds the value under the assignment where variable i gets
    bit i of k.  Capped at MAX_TRUTH_TABLE_VARS variables.
    """
    if var_order is None:
        var_order = term.variables()
    var_order = tuple(var_order)
    n = len(var_order)
    if n > MAX_TRUTH_TABLE_VARS:
        raise CapacityError(
            f"{n} variables exceeds the truth-table cap of {MAX_TRUTH_TABLE_VARS}"
        )
    mask = (1 << (1 << n)) - 1
    pattern = {}
    for i, v in enumerate(var_order):
        # bitmask of assignments where variable i is 1
        block = (1 << (1 << i)) - 1
        width = 1 << (i + 1)
        chunk = block << (1 << i)
        reps = (1 << n) // width
        val = 0
        for r in range(reps):
            val |= chunk << (r * width)
        pattern[v] = val

    def go(t):
        if isinstance(t, Var):
            return pattern[t.name]
        if isinstance(t, Const):
            return mask if t.value else 0
        if isinstance(t, Not):
            return mask & ~go(t.arg)
        if isinstance(t, Meet):
            return go(t.left) & go(t.right)
        if isinstance(t, Join):
            return go(t.left) | go(t.right)
        raise ArgumentError(f"unknown term node {t!r}")

    return go(term)


def bool_equiv(p, q):
    """Truth-table equality over the union of both variable lists."""
    if isinstance(p, str):
        p = parse_term(p)
    if isinstance(q, str):
        q = parse_term(q)
    var_order = p.variables()
    extra = tuple(v for v in q.variables() if v not in var_order)
    var_order = var_order + extra
    return truth_table(p, var_order) == truth_table(q, var_order)


def lattice_leq(p, q):
    """Whether p <= q in the free distributive lattice, i.e. p & q ~ p.

    Both terms must be negation-free (constants are tolerated); the
    order is decided by comparing the induced monotone Boolean
    functions over all assignments.  The standard representation of the
    free distributive lattice by monotone functions makes this sound.
    """
    if isinstance(p, str):
        p = parse_term(p)
    if isinstance(q, str):
        q = parse_term(q)
    for t in (p, q):
        if not t.is_lattice_term(allow_constants=True):
            raise ArgumentError("lattice order is only defined for negation-free terms")
    return 1 if bool_equiv(Meet(p, q), p) else 0
