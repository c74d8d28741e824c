"""Normal-form bases for Com, Lie, As and D, and elements built on them.

Monomials carry their leaf labels explicitly, so substitution and relabelling
never need positional bookkeeping:

* Com: the sorted tuple of labels (the generator X_n on those labels);
* Lie: a left-combed bracket ``[[..[l1;l2]..];lk]`` stored as ``(l1,..,lk)``
  with ``l1`` the smallest label;
* As: the word of labels;
* D: ``(j, label)`` for ``d^j`` applied to one input.

Operad-level structure constants are integers.  Field coefficients only enter
through :class:`OperadElement` and the divided-power layer.

Group actions: ``sigma . x`` relabels leaf ``i`` as ``sigma(i)``, which is a
left action.  The right action is ``x . sigma = sigma^-1 . x``.  Evaluating
``sigma . x`` on ``(a_1..a_n)`` gives ``x(a_sigma(1), .., a_sigma(n))``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from . import _backend
from .coefficients import Coefficient, add_scaled, add_term, field
from .combinatorics import Permutation, as_composition, iota
from .linalg import Echelon, solve


def _add(vec, key, c):
    v = vec.get(key, 0) + c
    if v:
        vec[key] = v
    else:
        vec.pop(key, None)


class Operad:
    """Interface shared by the base operads and the distributive products."""

    name = "?"

    def labels(self, mono):
        raise NotImplementedError

    def relabel(self, mono, f):
        """Integer combination for the monomial with each label l sent to f[l]."""
        raise NotImplementedError

    def substitute(self, mono, label, inner):
        """Plug ``inner`` into leaf ``label``; inner labels are fresh."""
        raise NotImplementedError

    def unit(self, label):
        raise NotImplementedError

    def basis(self, labels):
        raise NotImplementedError

    def min_label(self, mono):
        return min(self.labels(mono))

    def sort_key(self, mono):
        return (len(self.labels(mono)), repr(mono))

    def render(self, mono, names):
        raise NotImplementedError

    # derived helpers

    def act(self, sigma, mono):
        """sigma . mono: leaf i becomes sigma(i)."""
        return self.relabel(mono, {l: sigma(l) for l in self.labels(mono)})

    def partial_compose(self, x, i, y):
        """x o_i y on the standard labels 1..n of x and 1..m of y."""
        n, m = len(self.labels(x)), len(self.labels(y))
        if not 1 <= i <= n:
            raise IndexError(f"index {i} out of range for arity {n}")
        big = n + m + 1
        # park x's later labels above everything, plug y in, then close the gap
        fx = {l: (l if l < i else (big + l if l > i else i)) for l in range(1, n + 1)}
        out = {}
        for xm, cx in self.relabel(x, fx).items():
            fy = {l: big * 4 + l for l in range(1, m + 1)}
            for ym, cy in self.relabel(y, fy).items():
                for zm, cz in self.substitute(xm, i, ym).items():
                    g = {}
                    for l in self.labels(zm):
                        if l < i:
                            g[l] = l
                        elif l >= big * 4:
                            g[l] = i + (l - big * 4) - 1
                        else:
                            g[l] = l - big + m - 1
                    for wm, cw in self.relabel(zm, g).items():
                        _add(out, wm, cx * cy * cz * cw)
        return out

    def compose_many(self, x, inners):
        """x(y_1, .., y_k) with y_j on labels 1..m_j, concatenated."""
        n = len(self.labels(x))
        if len(inners) != n:
            raise ValueError("one inner monomial per input required")
        sizes = [len(self.labels(y)) for y in inners]
        total = sum(sizes)
        off = total + 1
        current = {m: c for m, c in self.relabel(x, {l: off * 8 + l for l in range(1, n + 1)}).items()}
        start = 0
        for j, (y, s) in enumerate(zip(inners, sizes), start=1):
            shifted = self.relabel(y, {l: start + l for l in range(1, s + 1)})
            nxt = {}
            for xm, cx in current.items():
                for ym, cy in shifted.items():
                    for zm, cz in self.substitute(xm, off * 8 + j, ym).items():
                        _add(nxt, zm, cx * cy * cz)
            current = nxt
            start += s
        return current


# --- Com ---------------------------------------------------------------------

class ComOperad(Operad):
    name = "Com"

    def labels(self, mono):
        return mono

    def relabel(self, mono, f):
        return {tuple(sorted(f[l] for l in mono)): 1}

    def min_label(self, mono):
        return mono[0]

    def substitute(self, mono, label, inner):
        return {tuple(sorted([l for l in mono if l != label] + list(inner))): 1}

    def unit(self, label):
        return (label,)

    def basis(self, labels):
        return [tuple(sorted(labels))]

    def sort_key(self, mono):
        return (len(mono), mono)

    def render(self, mono, names):
        return "*".join(names[l] for l in mono)

    def generator_text(self, n):
        return f"X_{n}"


# --- Lie ---------------------------------------------------------------------

def comb_to_tree(comb):
    tree = comb[0]
    for l in comb[1:]:
        tree = (tree, l)
    return tree


def tree_leaves(tree):
    if isinstance(tree, int):
        return (tree,)
    return tree_leaves(tree[0]) + tree_leaves(tree[1])


@lru_cache(maxsize=None)
def _comb_pattern_nf(pattern):
    return tuple(_backend.lie_tree_normal_form(comb_to_tree(pattern)).items())


def lie_comb_normalize(seq):
    """Normal form of the left-combed bracket on the label sequence ``seq``."""
    if seq[0] == min(seq):
        return {tuple(seq): 1}
    order = sorted(seq)
    rank = {l: i for i, l in enumerate(order)}
    pattern = tuple(rank[l] for l in seq)
    return {tuple(order[i] for i in comb): c for comb, c in _comb_pattern_nf(pattern)}


class LieOperad(Operad):
    name = "Lie"

    def labels(self, mono):
        return tuple(sorted(mono))

    def relabel(self, mono, f):
        return lie_comb_normalize(tuple(f[l] for l in mono))

    def min_label(self, mono):
        return mono[0]

    def substitute(self, mono, label, inner):
        t = comb_to_tree(inner)

        def rec(tree):
            if isinstance(tree, int):
                return t if tree == label else tree
            return (rec(tree[0]), rec(tree[1]))

        return _backend.lie_tree_normal_form(rec(comb_to_tree(mono)))

    def unit(self, label):
        return (label,)

    def basis(self, labels):
        labels = sorted(labels)
        return [(labels[0],) + p for p in permutations(labels[1:])]

    def sort_key(self, mono):
        return (len(mono), mono)

    def render(self, mono, names):
        s = names[mono[0]]
        for l in mono[1:]:
            s = f"[{s};{names[l]}]"
        return s


# --- As ----------------------------------------------------------------------

class AsOperad(Operad):
    name = "As"

    def labels(self, mono):
        return tuple(sorted(mono))

    def relabel(self, mono, f):
        return {tuple(f[l] for l in mono): 1}

    def substitute(self, mono, label, inner):
        out = []
        for l in mono:
            out.extend(inner if l == label else (l,))
        return {tuple(out): 1}

    def unit(self, label):
        return (label,)

    def basis(self, labels):
        return [tuple(p) for p in permutations(sorted(labels))]

    def sort_key(self, mono):
        return (len(mono), mono)

    def render(self, mono, names):
        return ".".join(names[l] for l in mono)


# --- D -----------------------------------------------------------------------

class DOperad(Operad):
    """The polynomial operad F[d], concentrated in arity one."""

    name = "D"

    def __init__(self, max_degree=3):
        self.max_degree = max_degree

    def labels(self, mono):
        return (mono[1],)

    def relabel(self, mono, f):
        return {(mono[0], f[mono[1]]): 1}

    def min_label(self, mono):
        return mono[1]

    def substitute(self, mono, label, inner):
        if label != mono[1]:
            raise KeyError(label)
        return {(mono[0] + inner[0], inner[1]): 1}

    def unit(self, label):
        return (0, label)

    def basis(self, labels):
        (l,) = labels
        return [(j, l) for j in range(self.max_degree + 1)]

    def sort_key(self, mono):
        return (1, mono[0], mono[1])

    def render(self, mono, names):
        j, l = mono
        if j == 0:
            return names[l]
        return ("d" if j == 1 else f"d^{j}") + f"({names[l]})"


COM = ComOperad()
LIE = LieOperad()
AS = AsOperad()
D = DOperad()

BASE_OPERADS = {"com": COM, "lie": LIE, "as": AS, "d": D}


def default_names(n):
    return {i: f"x{i}" for i in range(1, n + 1)}


# --- elements ----------------------------------------------------------------

class OperadElement:
    """Finite linear combination of normal-form monomials of one arity."""

    __slots__ = ("operad", "n", "terms", "characteristic")

    def __init__(self, operad, n, terms=None, characteristic=0):
        F = field(characteristic)
        self.operad = operad
        self.n = n
        self.characteristic = characteristic
        clean = {}
        for m, c in (terms or {}).items():
            add_term(clean, m, F(c), F)
        for m in clean:
            if tuple(sorted(operad.labels(m))) != tuple(range(1, n + 1)):
                raise ValueError(f"monomial {m!r} is not on labels 1..{n}")
        self.terms = clean

    @classmethod
    def monomial(cls, operad, mono, characteristic=0, coefficient=1):
        n = len(operad.labels(mono))
        return cls(operad, n, {mono: coefficient}, characteristic)

    @property
    def field(self):
        return field(self.characteristic)

    def _check(self, other):
        if not isinstance(other, OperadElement):
            raise TypeError("expected an OperadElement")
        if other.operad is not self.operad and other.operad != self.operad:
            raise ValueError(f"operad mismatch: {self.operad.name} vs {other.operad.name}")
        if other.characteristic != self.characteristic:
            from .coefficients import CharacteristicMismatch

            raise CharacteristicMismatch("elements over different characteristics")
        if other.n != self.n:
            raise ValueError(f"arity mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        add_scaled(out, other.terms, 1, self.field)
        return OperadElement(self.operad, self.n, out, self.characteristic)

    def __sub__(self, other):
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        F = self.field
        c = F(scalar)
        return OperadElement(self.operad, self.n, {m: F.mul(v, c) for m, v in self.terms.items()}, self.characteristic)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OperadElement):
            return NotImplemented
        return (self.operad.name == other.operad.name and self.n == other.n
                and self.characteristic == other.characteristic and self.terms == other.terms)

    def __hash__(self):
        return hash((self.operad.name, self.n, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def coefficient(self, mono):
        return Coefficient(self.terms.get(mono, 0), self.characteristic)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self.operad.sort_key(kv[0]))

    def map_int(self, fn):
        """Apply an integer-valued linear map monomialwise."""
        F = self.field
        out = {}
        for m, c in self.terms.items():
            for m2, k in fn(m).items():
                add_term(out, m2, F.mul(c, F(k)), F)
        return out

    def act(self, sigma):
        """sigma . x (relabel i -> sigma(i))."""
        if sigma.n != self.n:
            raise ValueError("degree mismatch")
        return OperadElement(self.operad, self.n, self.map_int(lambda m: self.operad.act(sigma, m)), self.characteristic)

    def right_act(self, sigma):
        """x . sigma = sigma^-1 . x."""
        return self.act(sigma.inverse())

    def compose(self, i, other):
        return operad_compose(self, i, other)

    def render(self, names=None):
        return render_terms(self.sorted_terms(), lambda m: self.operad.render(m, names or default_names(self.n)), self.characteristic)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"OperadElement({self.operad.name}, {self.n}, {self.render()!r})"


def signed_value(v, characteristic):
    """Representative used for printing: residues above p/2 print negative."""
    if characteristic and v > characteristic // 2:
        return v - characteristic
    return v


def render_terms(terms, render_mono, characteristic):
    if not terms:
        return "0"
    parts = []
    for m, c in terms:
        v = signed_value(c, characteristic)
        body = render_mono(m)
        neg = v < 0
        mag = -v if neg else v
        text = body if mag == 1 else f"{mag}*{body}"
        parts.append(("- " if neg else "+ ") + text)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[1:]


def operad_compose(x, i, y):
    """Partial composition x o_i y, bilinear."""
    if x.operad.name != y.operad.name:
        raise ValueError(f"operad mismatch: {x.operad.name} vs {y.operad.name}")
    if x.characteristic != y.characteristic:
        raise ValueError("characteristic mismatch")
    if not 1 <= i <= x.n:
        raise IndexError(f"index {i} out of range for arity {x.n}")
    F = x.field
    out = {}
    for xm, cx in x.terms.items():
        for ym, cy in y.terms.items():
            c = F.mul(cx, cy)
            for zm, k in x.operad.partial_compose(xm, i, ym).items():
                add_term(out, zm, F.mul(c, F(k)), F)
    return OperadElement(x.operad, x.n + y.n - 1, out, x.characteristic)


def full_compose(x, ys):
    """x(y_1, .., y_n) with inputs concatenated."""
    F = x.field
    out = {}

    def rec(j, chosen, coef):
        if j == len(ys):
            for xm, cx in x.terms.items():
                for zm, k in x.operad.compose_many(xm, chosen).items():
                    add_term(out, zm, F.mul(F.mul(cx, coef), F(k)), F)
            return
        for ym, cy in ys[j].terms.items():
            rec(j + 1, chosen + [ym], F.mul(coef, cy))

    rec(0, [], F(1))
    return OperadElement(x.operad, sum(y.n for y in ys), out, x.characteristic)


def symmetric_action(sigma, x):
    """The right action x . sigma."""
    return x.right_act(sigma)


def unit_element(operad, characteristic=0):
    return OperadElement.monomial(operad, operad.unit(1), characteristic)


def young_generators(r):
    """Adjacent transpositions generating the Young subgroup of iota(r)."""
    r = as_composition(r)
    n = r.n
    gens = []
    for block in iota(r).blocks:
        for a, b in zip(block, block[1:]):
            img = list(range(1, n + 1))
            img[a - 1], img[b - 1] = b, a
            gens.append(Permutation(img))
    return gens


def invariants_under(x, r):
    r = as_composition(r)
    if r.n != x.n:
        raise ValueError(f"{r} does not sum to the arity {x.n}")
    return all(x.act(g) == x for g in young_generators(r))


def invariant_basis(operad, n, r, characteristic=0, labels_basis=None):
    """Basis of the Sigma_r-invariants of operad(n), by exact nullspace."""
    from .linalg import nullspace

    F = field(characteristic)
    basis = labels_basis or operad.basis(tuple(range(1, n + 1)))
    index = {m: j for j, m in enumerate(basis)}
    gens = young_generators(r)
    # stack (g - 1) for every generator into one tall matrix, columns = basis
    columns = []
    for m in basis:
        col = {}
        for gi, g in enumerate(gens):
            for m2, k in operad.act(g, m).items():
                add_term(col, (gi, m2), F(k), F)
            add_term(col, (gi, m), F(-1), F)
        columns.append(col)
    out = []
    for comb in nullspace(columns, F, key=lambda k: (k[0], operad.sort_key(k[1]))):
        out.append(OperadElement(operad, n, {basis[j]: v for j, v in comb.items()}, characteristic))
    del index
    return out


def lie_normal_form(expr, characteristic=0):
    """Normalise a bracket tree (ints and 2-tuples) or a list of
    (coefficient, tree) pairs into the left-combed basis."""
    items = expr if isinstance(expr, list) else [(1, expr)]
    F = field(characteristic)
    out = {}
    n = None
    for c, tree in items:
        leaves = tree_leaves(tree)
        if len(set(leaves)) != len(leaves):
            raise ValueError(f"repeated label in {tree!r}; evaluate into a free algebra instead")
        if n is None:
            n = len(leaves)
        elif n != len(leaves):
            raise ValueError("all monomials must have the same arity")
        for comb, k in _backend.lie_tree_normal_form(tree).items():
            add_term(out, comb, F.mul(F(c), F(k)), F)
    return OperadElement(LIE, n or 0, out, characteristic)


def left_comb(n, characteristic=0):
    return OperadElement.monomial(LIE, tuple(range(1, n + 1)), characteristic)


def frobenius_element(p, characteristic=0):
    """Sum over sigma with sigma(1) = 1 of sigma acting on the left-combed
    (p-1)-fold bracket."""
    from .coefficients import _is_prime

    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    base = left_comb(p, characteristic)
    total = OperadElement(LIE, p, {}, characteristic)
    for rest in permutations(range(2, p + 1)):
        total = total + base.act(Permutation((1,) + rest))
    return total


def com_generator(n, characteristic=0):
    return OperadElement.monomial(COM, tuple(range(1, n + 1)), characteristic)


def bracket(characteristic=0):
    return left_comb(2, characteristic)


# --- free algebras: coinvariant normal forms -----------------------------------

def _runs(word):
    out = []
    for letter in word:
        if out and out[-1][0] == letter:
            out[-1][1] += 1
        else:
            out.append([letter, 1])
    return tuple(k for _, k in out)


def stable_sort_permutation(word):
    """pi with pi(i) = position of letter i after a stable sort."""
    order = sorted(range(len(word)), key=lambda i: (word[i], i))
    img = [0] * len(word)
    for new, old in enumerate(order, start=1):
        img[old] = new
    return Permutation(img), tuple(word[i] for i in order)


_ECHELONS = {}


def coinvariant_echelon(operad, n, runs, characteristic):
    """Echelon basis of span{m - g.m} for the Young subgroup with the given runs."""
    key = (operad.name, id(operad), n, runs, characteristic)
    ech = _ECHELONS.get(key)
    if ech is not None:
        return ech
    F = field(characteristic)
    ech = Echelon(F, key=operad.sort_key)
    gens = young_generators(runs)
    if gens:
        for m in operad.basis(tuple(range(1, n + 1))):
            for g in gens:
                vec = {m: 1}
                for m2, k in operad.act(g, m).items():
                    add_term(vec, m2, F(-k), F)
                if vec:
                    ech.add(vec)
    _ECHELONS[key] = ech
    return ech


class FreeAlgebraElement:
    """Element of the free algebra on letters: (monomial, sorted word) pairs,
    the monomial reduced modulo the relabellings that fix the word."""

    __slots__ = ("operad", "terms", "characteristic")

    def __init__(self, operad, terms=None, characteristic=0):
        self.operad = operad
        self.characteristic = characteristic
        self.terms = dict(terms or {})

    @property
    def field(self):
        return field(self.characteristic)

    @classmethod
    def from_word(cls, x, word):
        """Class of (x; word) for an OperadElement x and any word of letters."""
        if len(word) != x.n:
            raise ValueError(f"word of length {len(word)} for arity {x.n}")
        F = x.field
        pi, sorted_word = stable_sort_permutation(tuple(word))
        moved = x.act(pi)
        ech = coinvariant_echelon(x.operad, x.n, _runs(sorted_word), x.characteristic)
        red = ech.reduce(moved.terms)
        return cls(x.operad, {(m, sorted_word): c for m, c in red.items() if c}, x.characteristic)

    def __add__(self, other):
        if other.characteristic != self.characteristic or other.operad.name != self.operad.name:
            raise ValueError("incompatible free algebra elements")
        out = dict(self.terms)
        add_scaled(out, other.terms, 1, self.field)
        return FreeAlgebraElement(self.operad, out, self.characteristic)

    def __mul__(self, scalar):
        F = self.field
        c = F(scalar)
        return FreeAlgebraElement(self.operad, {k: F.mul(v, c) for k, v in self.terms.items() if F.mul(v, c)}, self.characteristic)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, FreeAlgebraElement):
            return NotImplemented
        return (self.operad.name == other.operad.name and self.characteristic == other.characteristic
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][1], self.operad.sort_key(kv[0][0])))

    def render_monomial(self, key):
        mono, word = key
        return self.operad.render(mono, {i: w for i, w in enumerate(word, start=1)})

    def __str__(self):
        return render_terms(self.sorted_terms(), self.render_monomial, self.characteristic)

    def __repr__(self):
        return f"FreeAlgebraElement({str(self)!r})"


def evaluate(x, args):
    """Substitute a word of generators (repeats allowed) into x."""
    return FreeAlgebraElement.from_word(x, tuple(args))


def evaluate_tree(tree, word_of, characteristic=0):
    """Free Lie algebra element of a bracket tree whose leaves are letters."""
    leaves = []

    def label(t):
        if isinstance(t, tuple):
            return (label(t[0]), label(t[1]))
        leaves.append(t)
        return len(leaves)

    labelled = label(tree)
    x = lie_normal_form(labelled, characteristic)
    return evaluate(x, [word_of.get(l, l) for l in leaves])


def jacobson_s(i, p, characteristic=None):
    """Coefficient of t^(i-1) in ad(t x + y)^(p-1)(x), in the free Lie algebra
    on {x, y}."""
    from itertools import product

    if not 1 <= i <= p - 1:
        raise ValueError(f"i must lie in 1..{p - 1}")
    char = p if characteristic is None else characteristic
    total = FreeAlgebraElement(LIE, {}, char)
    for word in product("xy", repeat=p - 1):
        if word.count("x") != i - 1:
            continue
        tree = "x"
        for letter in reversed(word):
            tree = (letter, tree)
        total = total + evaluate_tree(tree, {}, char)
    return total


def trace_preimage(x, runs):
    """Some mu with sum over the Young group of ``runs`` of g . mu == x, in
    the coinvariant normal form basis, or None when x is not a norm."""
    from .combinatorics import young_subgroup

    F = x.field
    n = x.n
    ech = coinvariant_echelon(x.operad, n, tuple(runs), x.characteristic)
    standard = [m for m in x.operad.basis(tuple(range(1, n + 1))) if m not in ech.rows]
    group = young_subgroup(iota(runs))
    columns = []
    for m in standard:
        col = {}
        for g in group:
            for m2, k in x.operad.act(g, m).items():
                add_term(col, m2, F(k), F)
        columns.append(col)
    sol = solve(columns, x.terms, F, key=x.operad.sort_key)
    if sol is None:
        return None
    return OperadElement(x.operad, n, {standard[j]: v for j, v in sol.items()}, x.characteristic)
