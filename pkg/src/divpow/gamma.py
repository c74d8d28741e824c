"""Divided-power operations beta_{x,r} on free Gamma(P)-algebras.

Model.  An element of Gamma(P, V) in arity n is a Sigma_n-invariant tensor in
P(n) (x) V^{(x)n}, stored as ``{(monomial, word): coefficient}``.  Such a
tensor is determined by its entries at sorted words; at a sorted word ``w``
the entry ``x_w`` is invariant under the Young group of the runs of ``w``, and
the tensor equals ``sum_w beta_{x_w, runs(w)}(distinct letters of w)``.  The
canonical form of a :class:`BetaExpression` is exactly that restriction.

Two independent routes compute nested applications:

* the engine (:func:`tilde_lambda`, :func:`gamma_monad_mult`,
  :func:`associator`): expand arguments by additivity, combine the operations,
  sum over wreath coset representatives and read the result over the
  partition ``r <> (q_1..q_p)``;
* the oracle (:func:`tilde_lambda_oracle` and friends): expand everything to
  full invariant tensors, insert the inner tensors slot by slot with every
  shuffle of positions (block minima increasing picks one representative per
  slot permutation), combine, and read off the result.
"""

from __future__ import annotations

from itertools import product as cartesian
from time import perf_counter

from . import _backend
from .coefficients import add_term, compositions, field
from .combinatorics import (
    Composition,
    Permutation,
    as_composition,
    coset_representatives,
    diamond,
    iota,
    wreath_coset_representatives,
)
from .distributive import DistributiveLaw, ProductOperad, product_operad
from .operads import (
    FreeAlgebraElement,
    Operad,
    OperadElement,
    _runs,
    invariants_under,
    render_terms,
    trace_preimage,
)


class NotInvariant(ValueError):
    """Raised for tensors or elements lacking the required symmetry."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NestingError(ValueError):
    pass


def _runs_letters(word):
    letters = []
    for a in word:
        if not letters or letters[-1] != a:
            letters.append(a)
    return tuple(letters)


def _same_operad(a, b):
    return a is b or a.name == b.name


# --- invariant tensors ----------------------------------------------------------------

class InvariantTensor:
    """Sum of (monomial, word) pairs, possibly of several arities."""

    __slots__ = ("operad", "characteristic", "terms")

    def __init__(self, operad, terms=None, characteristic=0):
        self.operad = operad
        self.characteristic = characteristic
        F = field(characteristic)
        clean = {}
        for k, c in (terms or {}).items():
            add_term(clean, k, F(c), F)
        self.terms = clean

    @property
    def field(self):
        return field(self.characteristic)

    def _moved(self, part, img):
        F = self.field
        f = (0,) + img
        moved = {}
        for (m, w), c in part.items():
            w2 = _act_word(img, w)
            for m2, k in self.operad.relabel(m, f).items():
                add_term(moved, (m2, w2), F.mul(c, F(k)), F)
        return moved

    def transposition_witness(self):
        """First (arity, i) whose transposition (i i+1) moves the tensor.

        The generators (1 2) and the long cycle are tried first; the
        transpositions are only scanned to name a witness."""
        arities = sorted({len(w) for _, w in self.terms})
        for n in arities:
            if n < 2:
                continue
            part = {k: c for k, c in self.terms.items() if len(k[1]) == n}
            swap = (2, 1) + tuple(range(3, n + 1))
            cycle = tuple(range(2, n + 1)) + (1,)
            if self._moved(part, swap) == part and self._moved(part, cycle) == part:
                continue
            for i in range(1, n):
                img = list(range(1, n + 1))
                img[i - 1], img[i] = i + 1, i
                if self._moved(part, tuple(img)) != part:
                    return (n, i)
        return None

    def is_invariant(self):
        return self.transposition_witness() is None

    def __add__(self, other):
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_term(out, k, c, F)
        return InvariantTensor(self.operad, out, self.characteristic)

    def __mul__(self, scalar):
        F = self.field
        c = F(scalar)
        return InvariantTensor(self.operad, {k: F.mul(v, c) for k, v in self.terms.items()}, self.characteristic)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * -1

    def __eq__(self, other):
        if not isinstance(other, InvariantTensor):
            return NotImplemented
        return self.characteristic == other.characteristic and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0][1]), kv[0][1], self.operad.sort_key(kv[0][0])))

        def show(key):
            m, w = key
            x = self.operad.render(m, {l: f"x{l}" for l in self.operad.labels(m)})
            return f"({x})@({','.join(map(str, w))})"

        return render_terms(items, show, self.characteristic)

    def __repr__(self):
        return f"InvariantTensor({self})"


def _act_word(sigma_img, word):
    out = [None] * len(word)
    for k, a in enumerate(word):
        out[sigma_img[k] - 1] = a
    return tuple(out)


def _orbit_into(out, operad, x_terms, n, r, word, coef, F):
    """out += coef * sum over Sigma_n / Sigma_r of sigma . (x (x) word)."""
    for img in _backend.interval_fillings(tuple(range(1, n + 1)), tuple(r)):
        f = (0,) + img
        w2 = _act_word(img, word)
        for m, c in x_terms.items():
            for m2, k in operad.relabel(m, f).items():
                add_term(out, (m2, w2), F.mul(F.mul(coef, c), F(k)), F)


def _vector(arg):
    """Letters and {letter: coefficient} dicts as coefficient dicts."""
    if isinstance(arg, str):
        return {arg: 1}
    if isinstance(arg, dict):
        return arg
    raise NestingError("nested arguments must be flattened first (gamma_monad_mult)")


def beta_expand(x, r, args):
    """The symmetrised tensor of beta_{x,r}(args) over plain generators."""
    r = as_composition(r)
    if isinstance(x, BetaTerm):
        x, r, args = x.x, x.r, x.args
    _check_term(x, r, args)
    F = x.field
    vectors = [_vector(a) for a in args]
    # multilinear expansion of each y_i^{(x) r_i}
    words = {(): F(1)}
    for k, vec in zip(r, vectors):
        for _ in range(k):
            nxt = {}
            for w, c in words.items():
                for a, ca in vec.items():
                    add_term(nxt, w + (a,), F.mul(c, F(ca)), F)
            words = nxt
    out = {}
    for w, c in words.items():
        _orbit_into(out, x.operad, x.terms, x.n, r.parts, w, c, F)
    return InvariantTensor(x.operad, out, x.characteristic)


def tensor_to_beta(t):
    """Canonical BetaExpression of an invariant tensor (entries at sorted words)."""
    witness = t.transposition_witness()
    if witness is not None:
        n, i = witness
        raise NotInvariant(f"not invariant: transposition ({i} {i + 1}) moves the arity-{n} part", witness)
    sorted_terms = {k: c for k, c in t.terms.items() if list(k[1]) == sorted(k[1])}
    return BetaExpression(t.operad, sorted_terms, t.characteristic)


# --- beta expressions ---------------------------------------------------------------

class BetaExpression:
    """Canonical sum of beta-terms: ``{(monomial, sorted word): coefficient}``.

    Grouping by word gives terms ``beta_{x_w, runs(w)}(letters of w)`` with
    distinct, increasing letters and positive parts.
    """

    __slots__ = ("operad", "characteristic", "terms")

    def __init__(self, operad, terms=None, characteristic=0):
        self.operad = operad
        self.characteristic = characteristic
        F = field(characteristic)
        clean = {}
        for k, c in (terms or {}).items():
            add_term(clean, k, F(c), F)
        self.terms = clean

    @classmethod
    def generator(cls, operad, letter, characteristic=0, coefficient=1):
        return cls(operad, {(operad.unit(1), (letter,)): coefficient}, characteristic)

    @classmethod
    def vector(cls, operad, coeffs, characteristic=0):
        return cls(operad, {(operad.unit(1), (a,)): c for a, c in coeffs.items()}, characteristic)

    @property
    def field(self):
        return field(self.characteristic)

    def entries(self):
        """Word -> invariant OperadElement, in word order."""
        grouped = {}
        for (m, w), c in self.terms.items():
            grouped.setdefault(w, {})[m] = c
        return {w: OperadElement(self.operad, len(w), grouped[w], self.characteristic)
                for w in sorted(grouped, key=lambda w: (len(w), w))}

    def beta_terms(self):
        return [BetaTerm(x, _runs(w), list(_runs_letters(w))) for w, x in self.entries().items()]

    def expand(self):
        F = self.field
        out = {}
        for w, x in self.entries().items():
            _orbit_into(out, self.operad, x.terms, len(w), _runs(w), w, F(1), F)
        return InvariantTensor(self.operad, out, self.characteristic)

    def _check(self, other):
        if not isinstance(other, BetaExpression):
            raise TypeError("expected a BetaExpression")
        if not _same_operad(self.operad, other.operad) or self.characteristic != other.characteristic:
            raise ValueError("incompatible BetaExpressions")

    def __add__(self, other):
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_term(out, k, c, F)
        return BetaExpression(self.operad, out, self.characteristic)

    def __mul__(self, scalar):
        F = self.field
        c = F(scalar)
        return BetaExpression(self.operad, {k: F.mul(v, c) for k, v in self.terms.items()}, self.characteristic)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, BetaExpression):
            return NotImplemented
        return (self.operad.name == other.operad.name and self.characteristic == other.characteristic
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for w, x in self.entries().items():
            runs = ",".join(str(k) for k in _runs(w))
            if len(_runs(w)) == 1:
                runs += ","
            parts.append(f"beta({x.render()}, ({runs}); {', '.join(_runs_letters(w))})")
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"BetaExpression({self.render()!r})"


def _check_term(x, r, args):
    if not isinstance(x, OperadElement):
        raise TypeError("x must be an OperadElement")
    if r.n != x.n:
        raise ValueError(f"{r} does not sum to the arity {x.n}")
    if len(args) != len(r):
        raise ValueError(f"{len(r)} parts but {len(args)} arguments")
    if not invariants_under(x, r):
        raise NotInvariant(f"{x} is not invariant under the Young subgroup of {r}")


class BetaTerm:
    """beta_{x,r}(args); an argument is a letter, a {letter: coefficient} dict,
    a BetaExpression or a BetaTerm (nested)."""

    __slots__ = ("x", "r", "args")

    def __init__(self, x, r, args):
        r = as_composition(r)
        args = list(args)
        _check_term(x, r, args)
        self.x, self.r, self.args = x, r, args

    @property
    def nested(self):
        return any(isinstance(a, (BetaExpression, BetaTerm)) for a in self.args)

    def canonical(self):
        if self.nested:
            raise NestingError("nested term: use gamma_monad_mult, associator or tilde_lambda")
        return beta_canonical(self.x, self.r, self.args)

    def expand(self):
        return beta_expand(self.x, self.r, self.args)

    def render(self):
        def show(a):
            if isinstance(a, str):
                return a
            if isinstance(a, dict):
                return "(" + " + ".join(f"{c}*{k}" for k, c in a.items()) + ")"
            return a.render()

        parts = ",".join(str(k) for k in self.r)
        if len(self.r) == 1:
            parts += ","
        return f"beta({self.x.render()}, ({parts}); {', '.join(show(a) for a in self.args)})"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"BetaTerm({self.render()!r})"


# --- canonical reading over a partition --------------------------------------------------

def _read_partition(operad, X, blocks, letters, F, out, scale=1):
    """out += canonical form of beta_{X,R}(letters), R given by ``blocks``
    (position tuples) with ``letters[b]`` the generator of block b.

    Positions are ordered by (letter, block, position), which sends every
    block onto an interval inside the run of its letter; the entry at the
    sorted word is then the sum over the run Young group modulo those
    intervals."""
    if not X:
        return
    pos_key = {}
    for b, (block, a) in enumerate(zip(blocks, letters)):
        for p in block:
            pos_key[p] = (a, b, p)
    order = sorted(pos_key, key=pos_key.get)
    n = len(order)
    pi0 = [0] * (n + 1)
    for new, old in enumerate(order, start=1):
        pi0[old] = new
    word = tuple(pos_key[p][0] for p in order)
    run_blocks, intervals = [], []
    for k, p in enumerate(order, start=1):
        a, b, _ = pos_key[p]
        if run_blocks and word[run_blocks[-1][-1] - 1] == a:
            run_blocks[-1].append(k)
            if intervals[-1][-1][0] == b:
                intervals[-1][-1][1] += 1
            else:
                intervals[-1].append([b, 1])
        else:
            run_blocks.append([k])
            intervals.append([[b, 1]])
    moved = {}
    for m, c in X.items():
        for m2, k in operad.relabel(m, pi0).items():
            add_term(moved, m2, F.mul(c, F(k)), F)
    sizes = [tuple(s for _, s in iv) for iv in intervals]
    fills = _backend.young_fillings([tuple(b) for b in run_blocks], sizes)
    scale = F(scale)
    for img in fills:
        f = (0,) + img
        for m, c in moved.items():
            for m2, k in operad.relabel(m, f).items():
                add_term(out, (m2, word), F.mul(F.mul(c, scale), F(k)), F)


def _refinements(r, vectors, F):
    """Additivity and homogeneity: split each part over the letters of its vector.

    Yields (coefficient, [(part, letter, argument index)]) with zero parts
    dropped."""
    per_part = []
    for i, (k, vec) in enumerate(zip(r, vectors)):
        items = [(a, F(c)) for a, c in vec.items() if F(c) != 0]
        options = []
        if k == 0:
            options.append((F(1), []))
        elif items:
            for split in compositions(k, len(items)):
                coef = F(1)
                chosen = []
                for s, (a, c) in zip(split, items):
                    if s:
                        coef = F.mul(coef, F(c) ** s if F.characteristic == 0 else pow(c, s, F.characteristic))
                        chosen.append((s, a, i))
                options.append((coef, chosen))
        per_part.append(options)
    for combo in cartesian(*per_part):
        coef = F(1)
        parts = []
        for c, chosen in combo:
            coef = F.mul(coef, c)
            parts.extend(chosen)
        if coef != 0:
            yield coef, parts


def beta_canonical(x, r, args):
    """Canonical BetaExpression of beta_{x,r}(args) for generator arguments."""
    r = as_composition(r)
    _check_term(x, r, args)
    F = x.field
    vectors = [_vector(a) for a in args]
    out = {}
    for coef, parts in _refinements(r.parts, vectors, F):
        blocks = [b for b in iota([k for k, _, _ in parts]).blocks]
        _read_partition(x.operad, x.terms, blocks, [a for _, a, _ in parts], F, out, coef)
    return BetaExpression(x.operad, out, x.characteristic)


def beta_over_partition(x, R, letters):
    """beta_{x,R}(letters) for a set partition R (one letter per block)."""
    F = x.field
    out = {}
    _read_partition(x.operad, x.terms, [tuple(b) for b in R.blocks], list(letters), F, out)
    return BetaExpression(x.operad, out, x.characteristic)


def trace_map(x, word):
    """(x; y_1..y_n) -> beta_{x,(1,..,1)}(y_1..y_n)."""
    word = tuple(word)
    if len(word) != x.n:
        raise ValueError(f"word of length {len(word)} for arity {x.n}")
    return BetaTerm(x, (1,) * x.n, list(word))


# --- nested application: the engine ----------------------------------------------------

def _as_expression(arg, operad, characteristic):
    if isinstance(arg, BetaExpression):
        if not _same_operad(arg.operad, operad):
            raise ValueError(f"argument lives over {arg.operad.name}, expected {operad.name}")
        return arg
    if isinstance(arg, BetaTerm):
        if arg.nested:
            raise NestingError("arguments may be nested one level only")
        return _as_expression(arg.canonical(), operad, characteristic)
    if isinstance(arg, str):
        return BetaExpression.generator(operad, arg, characteristic)
    if isinstance(arg, dict):
        return BetaExpression.vector(operad, arg, characteristic)
    raise TypeError(f"unsupported argument {arg!r}")


def _pieces(expr):
    """Canonical summands of an inner expression: (word, {monomial: coef})."""
    grouped = {}
    for (m, w), c in expr.terms.items():
        grouped.setdefault(w, {})[m] = c
    return [(w, grouped[w]) for w in sorted(grouped, key=lambda w: (len(w), w))]


def _compose_slots(x_terms, slots, combine, F):
    """sum over monomial choices of x(y_1, .., y_N) via ``combine``."""
    out = {}
    for choice in cartesian(*(s.items() for s in slots)):
        coef = F(1)
        ys = []
        for m, c in choice:
            coef = F.mul(coef, c)
            ys.append(m)
        for xm, cx in x_terms.items():
            c0 = F.mul(coef, cx)
            for zm, k in combine(xm, ys).items():
                add_term(out, zm, F.mul(c0, F(k)), F)
    return out


def _nested_engine(x, r, args, inner, combine, target):
    r = as_composition(r)
    _check_term(x, r, args)
    F = x.field
    char = x.characteristic
    exprs = [_as_expression(a, inner, char) for a in args]
    vectors = [{k: 1 for k in range(len(_pieces(e)))} for e in exprs]
    pieces = [_pieces(e) for e in exprs]
    out = {}
    for _, parts in _refinements(r.parts, vectors, F):
        ks = [k for k, _, _ in parts]
        chosen = [pieces[i][j] for _, j, i in parts]
        qs = [Composition(_runs(w)) for w, _ in chosen]
        slots = []
        for k, (_, y) in zip(ks, chosen):
            slots.extend([y] * k)
        X = _compose_slots(x.terms, slots, combine, F)
        summed = {}
        for sigma in wreath_coset_representatives(ks, qs):
            f = (0,) + sigma.images
            for m, c in X.items():
                for m2, k in target.relabel(m, f).items():
                    add_term(summed, m2, F.mul(c, F(k)), F)
        R = diamond(ks, [iota(q) for q in qs])
        letters = [a for (w, _), k in zip(chosen, ks) for a in _runs_letters(w)]
        _read_partition(target, summed, [tuple(b) for b in R.blocks], letters, F, out)
    return BetaExpression(target, out, char)


def monad_combine(P):
    return lambda xm, ys: P.compose_many(xm, list(ys))


def law_combine(law):
    P = law.P

    def combine(xm, ys):
        pm, start = {}, 0
        for k, y in enumerate(ys, start=1):
            n = len(P.labels(y))
            ((shifted, _),) = P.relabel(y, [0] + [start + l for l in range(1, n + 1)]).items()
            pm[k] = shifted
            start += n
        return law.apply(xm, pm)

    return combine


def associator_combine(target):
    return lambda xm, ys: target.from_pair(xm, tuple(ys))


def gamma_monad_mult(outer, operad=None):
    """Flatten beta_{x,r}(t_1..t_p) with t_i in Gamma(P, V) into Gamma(P, V)."""
    P = operad or outer.x.operad
    return _nested_engine(outer.x, outer.r, outer.args, P, monad_combine(P), P)


def associator(outer, target):
    """Gamma(P, Gamma(Q, V)) -> Gamma(P o Q, V) for a product operad ``target``."""
    if not isinstance(target, ProductOperad):
        raise TypeError("associator needs the product operad as target")
    return _nested_engine(outer.x, outer.r, outer.args, target.Q, associator_combine(target), target)


def tilde_lambda(s, law):
    """Image of beta_{x,r}(t_1..t_p), x in Q and t_i in Gamma(P, V), in Gamma(P o Q, V)."""
    _check_law(s, law)
    return _nested_engine(s.x, s.r, s.args, law.P, law_combine(law), product_operad(law))


def _check_law(s, law):
    if not isinstance(law, DistributiveLaw):
        raise TypeError("expected a distributive law")
    if not _same_operad(s.x.operad, law.Q):
        raise ValueError(f"outer element lives over {s.x.operad.name}, the law expects {law.Q.name}")


# --- nested application: the tensor oracle ------------------------------------------------

def _full_tensor(expr):
    return list(expr.expand().terms.items())


def _placements(us, word):
    """Ordered set partitions (B_1..B_k), minima increasing, with the letters
    of u_i read along B_i; restricted to those producing ``word`` when it is
    given."""
    from itertools import combinations

    sizes = [len(u) for u in us]
    n = sum(sizes)
    out = []

    def rec(k, remaining, acc):
        if k == len(us):
            out.append(tuple(acc))
            return
        first, rest = remaining[0], remaining[1:]
        u = us[k]
        if word is not None and word[first - 1] != u[0]:
            return
        pool = rest if word is None else [v for v in rest if word[v - 1] in u[1:]]
        for others in combinations(pool, sizes[k] - 1):
            if word is not None and any(word[v - 1] != a for v, a in zip(others, u[1:])):
                continue
            taken = set(others)
            rec(k + 1, [v for v in rest if v not in taken], acc + [(first,) + others])

    rec(0, list(range(1, n + 1)), [])
    return out


def _nested_oracle(x, r, args, inner, combine, target, full=False):
    """Expand to tensors, insert inner tensors at every placement, combine.

    With ``full`` every word is produced and the result goes through
    :func:`tensor_to_beta` (which re-checks invariance); otherwise only the
    placements giving sorted words are produced."""
    r = as_composition(r)
    _check_term(x, r, args)
    F = x.field
    char = x.characteristic
    exprs = [_as_expression(a, inner, char) for a in args]
    inner_full = [_full_tensor(e) for e in exprs]
    # outer tensor over index letters 0..p-1
    index_word = tuple(i for i, k in enumerate(r.parts) for _ in range(k))
    outer = {}
    _orbit_into(outer, x.operad, x.terms, x.n, r.parts, index_word, F(1), F)
    out = {}
    for (xm, W), cx in outer.items():
        for choice in cartesian(*(inner_full[i] for i in W)):
            coef = cx
            ys, us = [], []
            for (ym, u), c in choice:
                coef = F.mul(coef, c)
                ys.append(ym)
                us.append(u)
            target_word = None if full else tuple(sorted(a for u in us for a in u))
            blocks_list = _placements(us, target_word)
            if not blocks_list:
                continue
            N = sum(len(u) for u in us)
            combined = combine(xm, ys)
            for blocks in blocks_list:
                f = [0] * (N + 1)
                word = [None] * N
                start = 0
                for block, u in zip(blocks, us):
                    for j, (pos, a) in enumerate(zip(block, u), start=1):
                        f[start + j] = pos
                        word[pos - 1] = a
                    start += len(u)
                word = tuple(word)
                for zm, k in combined.items():
                    for zm2, k2 in target.relabel(zm, f).items():
                        add_term(out, (zm2, word), F.mul(coef, F(k * k2)), F)
    if full:
        return tensor_to_beta(InvariantTensor(target, out, char))
    return BetaExpression(target, out, char)


def tilde_lambda_oracle(s, law, full=False):
    _check_law(s, law)
    return _nested_oracle(s.x, s.r, s.args, law.P, law_combine(law), product_operad(law), full)


def gamma_monad_mult_oracle(outer, operad=None, full=False):
    P = operad or outer.x.operad
    return _nested_oracle(outer.x, outer.r, outer.args, P, monad_combine(P), P, full)


def associator_oracle(outer, target, full=False):
    return _nested_oracle(outer.x, outer.r, outer.args, target.Q, associator_combine(target), target, full)


# --- reading flat results ---------------------------------------------------------------

def to_free_algebra(expr):
    """The free-algebra element a flat BetaExpression represents: each entry
    beta_{x_w, runs}(letters) is written as mu(w) with x_w the Young-group
    norm of mu."""
    total = FreeAlgebraElement(expr.operad, {}, expr.characteristic)
    for w, x in expr.entries().items():
        mu = trace_preimage(x, _runs(w))
        if mu is None:
            raise NotInvariant(f"entry at {''.join(map(str, w))} is not a norm; no free-algebra reading")
        total = total + FreeAlgebraElement.from_word(mu, w)
    return total


def from_free_algebra(elem):
    """Trace of a free-algebra element: sum of beta_{mu,(1,..,1)}(w)."""
    F = elem.field
    out = BetaExpression(elem.operad, {}, elem.characteristic)
    for (m, w), c in elem.terms.items():
        x = OperadElement(elem.operad, len(w), {m: c}, elem.characteristic)
        out = out + beta_canonical(x, (1,) * len(w), list(w))
    del F
    return out


def to_nested(expr):
    """For P o D products: the entries of Gamma(P, Gamma(D, V)) as
    {((letter, j), ..): P-element}; the letter (a, j) stands for d^j a and
    only sorted words are kept."""
    op = expr.operad
    if not (isinstance(op, ProductOperad) and op.Q.name == "D"):
        raise TypeError("nested reading is implemented for products with D")
    P = op.P
    out = {}
    F = expr.field
    for (m, w), c in expr.terms.items():
        top, facs = m
        letters = tuple((w[l - 1], j) for j, l in sorted(facs, key=lambda f: f[1]))
        if list(letters) != sorted(letters):
            continue
        add_term(out.setdefault(letters, {}), top, c, F)
    return {k: OperadElement(P, len(k), v, expr.characteristic) for k, v in sorted(out.items()) if v}


# --- reports ------------------------------------------------------------------------------

class Report:
    """Outcome of a verification scenario: named checks with their failures."""

    def __init__(self, scenario, characteristic=0, **meta):
        self.scenario = scenario
        self.characteristic = characteristic
        self.meta = meta
        self.checks = []
        self._t0 = perf_counter()
        self.wall_time = 0.0

    def check(self, name):
        entry = {"name": name, "instances": 0, "failures": []}
        self.checks.append(entry)
        return entry

    def record(self, entry, ok, **sides):
        entry["instances"] += 1
        if not ok:
            entry["failures"].append({k: str(v) for k, v in sides.items()})

    def finish(self):
        self.wall_time = perf_counter() - self._t0
        return self

    def merge(self, other):
        self.checks.extend(other.checks)
        return self

    @property
    def instances(self):
        return sum(c["instances"] for c in self.checks)

    @property
    def failures(self):
        return [dict(f, check=c["name"]) for c in self.checks for f in c["failures"]]

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            "scenario": self.scenario,
            "characteristic": self.characteristic,
            **self.meta,
            "instances": self.instances,
            "passed": self.passed,
            "wall_time": round(self.wall_time, 4),
            "checks": [{"name": c["name"], "instances": c["instances"], "failures": c["failures"]}
                       for c in self.checks],
        }

    def summary_lines(self):
        lines = []
        for c in self.checks:
            status = "PASS" if not c["failures"] else f"FAIL ({len(c['failures'])})"
            lines.append(f"  {c['name']}: {c['instances']} instances, {status}")
        return lines


# --- beta relations ---------------------------------------------------------------------

ALPHABET = ("a", "b", "c")


def _compositions_positive(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions_positive(n - first):
            yield (first,) + rest


_BASIS_CACHE = {}


def _invariant_basis(P, n, r, char):
    from .operads import invariant_basis

    key = (P.name, n, tuple(r), char)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = invariant_basis(P, n, r, char)
    return _BASIS_CACHE[key]


def _arg_patterns(p):
    """Every assignment of the alphabet to p arguments, up to renaming letters
    (letters first used in alphabet order); the all-distinct-cycled
    assignment comes first."""
    out = []

    def rec(acc, used):
        if len(acc) == p:
            out.append(list(acc))
            return
        for k in range(min(used + 1, len(ALPHABET))):
            rec(acc + [ALPHABET[k]], max(used, k + 1))

    rec([], 0)
    first = [ALPHABET[i % 3] for i in range(p)]
    out.remove(first)
    return [first] + out


def _young_quotient(big, small_sizes):
    """Representatives of Young(big) / Young(small): permutations preserving the
    blocks of ``big`` and increasing on the intervals of ``small_sizes``."""
    blocks = [tuple(b) for b in big.blocks if b]
    return [Permutation(img) for img in _backend.young_fillings(blocks, small_sizes)]


def _sum_action(x, perms):
    total = OperadElement(x.operad, x.n, {}, x.characteristic)
    for s in perms:
        total = total + x.act(s)
    return total


def _inverse_factorials(i, j, F):
    from math import factorial

    return F.inv(F(factorial(i) * factorial(j)))


def verify_beta_relations(P, characteristic=0, max_n=4):
    """Check the beta relations in the tensor model, plus the characteristic-p
    relations of divided p-powers (Com) and of the restricted p-map (Lie)."""
    from itertools import permutations

    from .combinatorics import block_permutation, compose_composition, rhd_composition

    char = characteristic
    F = field(char)
    rep = Report("check-beta", char, operad=P.name, max_n=max_n)
    c_round = rep.check("roundtrip")
    c1, c2, c3 = rep.check("block-permutation"), rep.check("zero-part"), rep.check("scalar-argument")
    c4, c5, c6 = rep.check("repeated-arguments"), rep.check("sum-argument"), rep.check("linear-in-operation")
    c7a, c7b = rep.check("unit"), rep.check("monad-multiplication")
    lam = 2
    for n in range(1, max_n + 1):
        for r in _compositions_positive(n):
            basis = _invariant_basis(P, n, r, char)
            p = len(r)
            for bi, x in enumerate(basis):
                for args in _arg_patterns(p):
                    T = beta_expand(x, r, args)
                    rep.record(c_round, tensor_to_beta(T) == beta_canonical(x, r, args),
                               lhs=tensor_to_beta(T), rhs=beta_canonical(x, r, args))
                    # block permutations
                    rhos = list(permutations(range(1, p + 1))) if p <= 3 else [
                        tuple(range(2, p + 1)) + (1,), (2, 1) + tuple(range(3, p + 1))]
                    for img in rhos:
                        rho = Permutation(img)
                        rstar = block_permutation(rho, r)
                        rinv = rho.inverse()
                        moved = [args[rinv(j) - 1] for j in range(1, p + 1)]
                        rhs = beta_expand(x.act(rstar), Composition(r).permuted(rho), moved)
                        rep.record(c1, T == rhs, lhs=T, rhs=rhs)
                    # a zero part with its argument
                    rhs = beta_expand(x, (0,) + tuple(r), ["c"] + args)
                    rep.record(c2, T == rhs, lhs=T, rhs=rhs)
                    # scalar in the first argument
                    lhs = beta_expand(x, r, [{args[0]: lam}] + args[1:])
                    rhs = T * F.mul(1, F(lam) ** r[0] if not char else pow(lam, r[0], char))
                    rep.record(c3, lhs == rhs, lhs=lhs, rhs=rhs)
                    # a sum in the first argument
                    a0, a1 = args[0], ALPHABET[(ALPHABET.index(args[0]) + 1) % 3]
                    lhs = beta_expand(x, r, [{a0: 1, a1: 1}] + args[1:])
                    rhs = None
                    for l in range(r[0] + 1):
                        rr = compose_composition(Composition(r), 1, Composition((l, r[0] - l)))
                        term = beta_expand(x, rr, [a0, a1] + args[1:])
                        rhs = term if rhs is None else rhs + term
                    rep.record(c5, lhs == rhs, lhs=lhs, rhs=rhs)
                # repeated arguments, for every coarsening q of the parts
                for q in _compositions_positive(p):
                    if len(q) > 3:
                        continue
                    letters = list(ALPHABET[:len(q)])
                    repeated = [letters[i] for i, k in enumerate(q) for _ in range(k)]
                    lhs = beta_expand(x, r, repeated)
                    qr = rhd_composition(Composition(q), Composition(r))
                    inner_sizes, start = [], 0
                    for k in q:
                        inner_sizes.append(tuple(r[start:start + k]))
                        start += k
                    y = _sum_action(x, _young_quotient(iota(qr), inner_sizes))
                    rhs = beta_expand(y, qr, letters)
                    rep.record(c4, lhs == rhs, lhs=lhs, rhs=rhs)
                # linearity in x
                # in dimension one y = x, which still exercises the scalar
                y = basis[(bi + 1) % len(basis)]
                args = _arg_patterns(p)[0]
                lhs = beta_expand(x * lam + y, r, args)
                rhs = beta_expand(x, r, args) * lam + beta_expand(y, r, args)
                rep.record(c6, lhs == rhs, lhs=lhs, rhs=rhs)
    # unit, both as an operation and as an inner argument
    unit = OperadElement.monomial(P, P.unit(1), char)
    for a in ALPHABET:
        lhs = beta_expand(unit, (1,), [a])
        rhs = InvariantTensor(P, {(P.unit(1), (a,)): 1}, char)
        rep.record(c7a, lhs == rhs, lhs=lhs, rhs=rhs)
    for n in range(1, max_n + 1):
        for r in _compositions_positive(n):
            for x in _invariant_basis(P, n, r, char):
                args = _arg_patterns(len(r))[0]
                lhs = gamma_monad_mult(BetaTerm(x, r, [BetaTerm(unit, (1,), [a]) for a in args]), P)
                rhs = beta_canonical(x, r, args)
                rep.record(c7a, lhs == rhs, lhs=lhs, rhs=rhs)
                inner = BetaExpression(P, beta_canonical(x, r, args).terms, char)
                lhs = gamma_monad_mult(BetaTerm(unit, (1,), [inner]), P)
                rep.record(c7a, lhs == inner, lhs=lhs, rhs=inner)
    # monad multiplication against the tensor oracle
    for outer, inners in _monad_instances(P, char, max_n):
        s = BetaTerm(outer[0], outer[1], inners)
        lhs = gamma_monad_mult(s, P)
        rhs = gamma_monad_mult_oracle(s, P)
        rep.record(c7b, lhs == rhs, lhs=lhs, rhs=rhs)
    if char and P.name == "Com":
        _soublin_checks(rep, char)
    if char and P.name == "Lie" and char <= max_n:
        _restricted_lie_checks(rep, char)
    return rep.finish()


def _inner_terms(P, char, max_m):
    """Small canonical beta-terms beta_{y,q}(letters) of arity <= max_m."""
    out = []
    for m in range(1, max_m + 1):
        for q in _compositions_positive(m):
            if len(q) > 3:
                continue
            for y in _invariant_basis(P, m, q, char)[:2]:
                for shift in range(3 - len(q) + 1):
                    out.append(BetaTerm(y, q, list(ALPHABET[shift:shift + len(q)])))
    return out


def _monad_instances(P, char, max_n):
    """Outer terms with one inner term per part, total arity <= max_n."""
    inner = _inner_terms(P, char, max(1, max_n - 1))
    for n in range(1, max_n + 1):
        for r in _compositions_positive(n):
            if len(r) > 2:
                continue
            for x in _invariant_basis(P, n, r, char)[:2]:
                budget = max_n
                if len(r) == 1:
                    for t in inner:
                        if r[0] * t.x.n <= budget and t.x.n > 1:
                            yield (x, r), [t]
                else:
                    for t1 in inner:
                        for t2 in inner:
                            if r[0] * t1.x.n + r[1] * t2.x.n <= budget and (t1.x.n > 1 or t2.x.n > 1):
                                yield (x, r), [t1, t2]


def _soublin_checks(rep, p):
    from .operads import com_generator

    F = field(p)
    Xp = com_generator(p, p)
    ones = (1,) * p
    cp1, cp2, cp3, cp4 = rep.check("Cp1"), rep.check("Cp2"), rep.check("Cp3"), rep.check("Cp4")
    gamma_a = beta_expand(Xp, (p,), ["a"])
    for lam in range(p):
        lhs = beta_expand(Xp, (p,), [{"a": lam}])
        rhs = gamma_a * pow(lam, p, p)
        rep.record(cp1, lhs == rhs, lhs=lhs, rhs=rhs)
    lhs = beta_expand(Xp, ones, ["a"] * p)
    rep.record(cp2, lhs.is_zero(), lhs=lhs, rhs=0)
    lhs = beta_expand(Xp, (p,), [{"a": 1, "b": 1}])
    rhs = beta_expand(Xp, (p,), ["b"]) + gamma_a
    for i in range(1, p):
        rhs = rhs + beta_expand(Xp, ones, ["a"] * i + ["b"] * (p - i)) * _inverse_factorials(i, p - i, F)
    rep.record(cp3, lhs == rhs, lhs=lhs, rhs=rhs)
    s = BetaTerm(Xp, (p,), [BetaTerm(com_generator(2, p), (1, 1), ["a", "b"])])
    lhs = gamma_monad_mult(s, Xp.operad)
    rep.record(cp4, lhs.is_zero(), lhs=lhs, rhs=0)
    oracle = gamma_monad_mult_oracle(s, Xp.operad)
    rep.record(cp4, oracle.is_zero(), lhs=oracle, rhs=0)


def _rename_letters(elem, mapping):
    out = FreeAlgebraElement(elem.operad, {}, elem.characteristic)
    for (m, w), c in elem.terms.items():
        x = OperadElement(elem.operad, len(w), {m: c}, elem.characteristic)
        out = out + FreeAlgebraElement.from_word(x, [mapping[a] for a in w])
    return out


def _restricted_lie_checks(rep, p):
    from .operads import frobenius_element, jacobson_s

    F = field(p)
    Lp = frobenius_element(p, p)
    l2, l3 = rep.check("L2"), rep.check("L3")
    Fa = beta_expand(Lp, (p,), ["a"])
    for lam in range(p):
        lhs = beta_expand(Lp, (p,), [{"a": lam}])
        rhs = Fa * pow(lam, p, p)
        rep.record(l2, lhs == rhs, lhs=lhs, rhs=rhs)
    lhs = beta_expand(Lp, (p,), [{"a": 1, "b": 1}])
    rhs = Fa + beta_expand(Lp, (p,), ["b"])
    for i in range(1, p):
        s_i = _rename_letters(jacobson_s(i, p, p), {"x": "a", "y": "b"})
        rhs = rhs + from_free_algebra(s_i).expand() * F.inv(F(i))
    rep.record(l3, lhs == rhs, lhs=lhs, rhs=rhs)


def repeated_args_reduction(x, r, args):
    """Both sides of beta_{x,(1,..,1)}(a_1^{x r_1}, ..) = (prod r_i!) beta_{x,r}(a)."""
    from math import factorial

    r = as_composition(r)
    _check_term(x, r, args)
    repeated = [a for a, k in zip(args, r) for _ in range(k)]
    lhs = beta_expand(x, (1,) * x.n, repeated)
    scale = 1
    for k in r:
        scale *= factorial(k)
    rhs = beta_expand(x, r, args) * scale
    return lhs, rhs, lhs - rhs


# --- the Poisson Frobenius -----------------------------------------------------------------

def frobenius_image(p):
    """F(a*b) for F = beta_{L_p,(p)}, computed in Gamma(Pois, V) in characteristic p."""
    from .coefficients import _is_prime
    from .distributive import PoissonLaw
    from .operads import com_generator, frobenius_element

    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    s = BetaTerm(frobenius_element(p, p), (p,), [BetaTerm(com_generator(2, p), (1, 1), ["a", "b"])])
    return tilde_lambda(s, PoissonLaw())


def split_bare_factors(elem, letters=("a", "b")):
    """Group a free Poisson element as sum a^{*i} b^{*j} Gamma_{i,j}: bare
    letters (factors outside brackets) are counted and removed."""
    from .distributive import POIS

    F = elem.field
    groups = {}
    for ((top, facs), w), c in elem.terms.items():
        counts = [0] * len(letters)
        kept = []
        for f in facs:
            if len(f) == 1 and w[f[0] - 1] in letters:
                counts[letters.index(w[f[0] - 1])] += 1
            else:
                kept.append(f)
        key = tuple(counts)
        if not kept:
            raise ValueError("monomial without brackets in a Frobenius image")
        labels = sorted(l for f in kept for l in f)
        renum = {l: k for k, l in enumerate(labels, start=1)}
        facs2 = tuple(tuple(renum[l] for l in f) for f in kept)
        mono = (tuple(sorted(f[0] for f in facs2)), facs2)
        x = OperadElement(POIS, len(labels), {mono: c}, elem.characteristic)
        part = FreeAlgebraElement.from_word(x, [w[l - 1] for l in labels])
        groups[key] = groups.get(key, FreeAlgebraElement(POIS, {}, elem.characteristic)) + part
    del F
    return groups


def frobenius_of_product(p):
    """Gamma_{i,j} of F(a*b) = sum a^{*i} b^{*j} Gamma_{i,j} in characteristic p."""
    from .distributive import POIS

    image = to_free_algebra(frobenius_image(p))
    groups = {k: v for k, v in split_bare_factors(image).items() if not v.is_zero()}
    for key in ((0, 0), (1, 0), (0, 1)):
        groups.setdefault(key, FreeAlgebraElement(POIS, {}, p))
    return dict(sorted(groups.items()))


def check_pois_compat(p):
    """Two compatibility relations of divided powers with the Poisson bracket
    in characteristic p: [gamma_p(a); b] = gamma_{p-1}(a)*[a;b] and
    F(gamma_p(a)) = 0."""
    from math import factorial

    from .distributive import POIS, PoissonLaw
    from .operads import bracket, com_generator, frobenius_element

    law = PoissonLaw()
    rep = Report("check-pois", p)
    gamma_p = BetaTerm(com_generator(p, p), (p,), ["a"])
    bra = bracket(p)

    entry = rep.check("bracket-divided-power")
    lhs = tilde_lambda(BetaTerm(bra, (1, 1), [gamma_p, "b"]), law)
    pois_product = OperadElement(POIS, 2, {((1, 2), ((1,), (2,))): 1}, p)
    pois_bracket = OperadElement(POIS, 2, {((1,), ((1, 2),)): 1}, p)
    lifted_gamma = OperadElement(POIS, p, {(tuple(range(1, p + 1)), tuple((l,) for l in range(1, p + 1))): 1}, p)
    via_monad = gamma_monad_mult(
        BetaTerm(pois_bracket, (1, 1), [beta_canonical(lifted_gamma, (p,), ["a"]), "b"]), POIS)
    rep.record(entry, lhs == via_monad, lhs=lhs, rhs=via_monad)
    ab = gamma_monad_mult(BetaTerm(pois_bracket, (1, 1), ["a", "b"]), POIS)
    if p > 2:
        lifted_prev = OperadElement(POIS, p - 1, {(tuple(range(1, p)), tuple((l,) for l in range(1, p))): 1}, p)
        gamma_prev = beta_canonical(lifted_prev, (p - 1,), ["a"])
    else:
        gamma_prev = BetaExpression.generator(POIS, "a", p)
    rhs = gamma_monad_mult(BetaTerm(pois_product, (1, 1), [gamma_prev, ab]), POIS)
    rep.record(entry, lhs == rhs, lhs=lhs, rhs=rhs)
    # the same right-hand side written with an ordinary power of a
    power = BetaExpression.generator(POIS, "a", p)
    for _ in range(p - 2):
        power = gamma_monad_mult(BetaTerm(pois_product, (1, 1), [power, "a"]), POIS)
    scaled = gamma_monad_mult(BetaTerm(pois_product, (1, 1), [power, ab]), POIS) * field(p).inv(factorial(p - 1) % p)
    rep.record(entry, lhs == scaled, lhs=lhs, rhs=scaled)

    entry = rep.check("frobenius-of-divided-power")
    image = tilde_lambda(BetaTerm(frobenius_element(p, p), (p,), [gamma_p]), law)
    rep.record(entry, image.is_zero(), lhs=image, rhs=0)
    return rep.finish()


# --- Lev_p -------------------------------------------------------------------------------

class PAdicExpansion:
    """r = sum_k lambda_k p^{E_k} with digits in [1, p-1], exponents increasing."""

    __slots__ = ("base", "r", "digits")

    def __init__(self, r, base):
        if r < 0 or base < 2:
            raise ValueError("need r >= 0 and base >= 2")
        self.base, self.r = base, r
        digits, e, m = [], 0, r
        while m:
            m, d = divmod(m, base)
            if d:
                digits.append((d, e))
            e += 1
        self.digits = tuple(digits)

    @property
    def length(self):
        return len(self.digits)

    def value(self):
        return sum(d * self.base ** e for d, e in self.digits)

    def __repr__(self):
        return " + ".join(f"{d}*{self.base}^{e}" for d, e in self.digits) or "0"


def summation_condition(exponents, p):
    from fractions import Fraction

    return sum(Fraction(1, p ** i) for i in exponents) == 1


def lev_monomials(p, max_size):
    """Exponent multisets of the image of Lev_p, generated from the unit by
    composing the p-ary generator (all exponents 1) in the partition operad."""
    from .combinatorics import SetPartition, partition_circ, partition_exponents

    star = SetPartition([(), tuple(range(1, p + 1))], p)
    unit = SetPartition([(1,)], 1)
    seen = {(0,)}
    frontier = [unit]
    while frontier:
        nxt = []
        for J in frontier:
            if J.n + p - 1 > max_size:
                continue
            for l in range(1, J.n + 1):
                K = partition_circ(J, l, star)
                key = tuple(sorted(partition_exponents(K)))
                if key not in seen:
                    seen.add(key)
                    nxt.append(K)
        frontier = nxt
    return sorted(seen, key=lambda e: (len(e), e))


def kraft_monomials(p, max_size):
    """Exponent multisets of size <= max_size satisfying the summation condition."""
    out = []

    def rec(size, remaining, low, acc):
        from fractions import Fraction

        if remaining == 0:
            out.append(tuple(acc))
            return
        if size == max_size:
            return
        for e in range(low, max_size + 1):
            w = Fraction(1, p ** e)
            if w <= remaining and remaining <= w * (max_size - size):
                rec(size + 1, remaining - w, e, acc + [e])

    from fractions import Fraction

    rec(0, Fraction(1), 0, [])
    return sorted(out, key=lambda e: (len(e), e))


def levp_verify(p, max_size=2):
    """Relations of the Lev_p-structure on Gamma(Shift_Com, V) in characteristic p,
    the summation condition, and the p-adic factorisation of beta_{X_n,r}."""
    from collections import Counter
    from fractions import Fraction

    from .distributive import product_element, shift_operad
    from .operads import COM

    F = field(p)
    S = shift_operad(COM)
    rep = Report("check-levp", p, max_size=max_size)

    def ones(k, j=0):
        return product_element(S, tuple(range(1, k + 1)), ((j, 1),) * k, p)

    star_x = ones(p, 1)

    def star(args):
        return gamma_monad_mult(BetaTerm(star_x, (1,) * p, args), S)

    def phi(a):
        return gamma_monad_mult(BetaTerm(star_x, (p,), [a]), S)

    letters = ["u", "v", "w"][:max(2, min(3, max_size))]
    gens = [{letters[0]: 1}, {letters[1]: 1}, {letters[0]: 1, letters[1]: 1}]
    if p > 2:
        gens.append({letters[0]: 2, letters[1]: 1})
    if len(letters) > 2:
        gens.append({letters[0]: 1, letters[2]: 1})
    r1, r2, r3, r4 = (rep.check(f"relation{k}") for k in range(1, 5))
    for a in gens:
        base = phi(BetaExpression.vector(S, a, p))
        for lam in range(p):
            lhs = phi(BetaExpression.vector(S, {k: F.mul(F(v), lam) for k, v in a.items()}, p))
            rep.record(r1, lhs == base * pow(lam, p, p), lhs=lhs, rhs=base * pow(lam, p, p))
        lhs = star([BetaExpression.vector(S, a, p)] * p)
        rep.record(r2, lhs.is_zero(), lhs=lhs, rhs=0)
    for a in gens:
        for b in gens:
            A, B = BetaExpression.vector(S, a, p), BetaExpression.vector(S, b, p)
            both = dict(a)
            for k, v in b.items():
                both[k] = both.get(k, 0) + v
            lhs = phi(BetaExpression.vector(S, both, p))
            rhs = phi(A) + phi(B)
            for i in range(1, p):
                rhs = rhs + star([A] * i + [B] * (p - i)) * _inverse_factorials(i, p - i, F)
            rep.record(r3, lhs == rhs, lhs=lhs, rhs=rhs)
    for combo in ({letters[0]: p}, {letters[0]: p - 1, letters[1]: 1}, dict.fromkeys(letters[:p], 1)):
        args = [BetaExpression.generator(S, k, p) for k, m in combo.items() for _ in range(m)]
        if len(args) != p:
            continue
        inner = star(args)
        lhs = phi(inner)
        rep.record(r4, lhs.is_zero(), lhs=lhs, rhs=0)
        oracle = gamma_monad_mult_oracle(BetaTerm(star_x, (p,), [inner]), S)
        rep.record(r4, oracle.is_zero(), lhs=oracle, rhs=0)

    # summation condition: generated monomials = monomials with sum p^-i = 1
    cond = rep.check("summation-condition")
    generated = lev_monomials(p, p * p)
    kraft = kraft_monomials(p, p * p)
    rep.record(cond, generated == kraft, lhs=generated, rhs=kraft)
    for e in generated:
        rep.record(cond, summation_condition(e, p), lhs=e, rhs="sum p^-i = 1")

    # p-adic factorisation of beta_{X_n, r}(d^{i_1} v_1, ..)
    fact = rep.check("padic-factorisation")
    ident = rep.check("padic-identity")
    names = [f"v{k}" for k in range(1, 10)]

    def d_letter(i, v):
        mono = ((1,), ((i, 1),))
        return BetaExpression(S, {(mono, (v,)): 1}, p)

    def gamma_pow(k, y):
        return gamma_monad_mult(BetaTerm(ones(k), (k,), [y]), S) if k > 1 else y

    for e in generated:
        counts = sorted(Counter(e).items())
        r = tuple(c for _, c in counts)
        exps = [i for i, _ in counts]
        vs = names[:len(r)]
        lhs = gamma_monad_mult(BetaTerm(ones(len(e)), r, [d_letter(i, v) for i, v in zip(exps, vs)]), S)
        factors, total = [], Fraction(0)
        for (i, rj), v in zip(counts, vs):
            for lam, E in PAdicExpansion(rj, p).digits:
                g = d_letter(i, v)
                h = d_letter(i - E, v)
                for _ in range(E):
                    g = gamma_pow(p, g)
                    h = phi(h)
                rep.record(ident, g == h, lhs=g, rhs=h)
                factors.append(gamma_pow(lam, g))
                total += Fraction(lam, p ** (i - E))
        rep.record(ident, total == 1, lhs=total, rhs=1)
        if len(factors) == 1:
            rhs = factors[0]
        else:
            rhs = gamma_monad_mult(BetaTerm(ones(len(factors)), (1,) * len(factors), factors), S)
        rep.record(fact, lhs == rhs, lhs=lhs, rhs=rhs)
    return rep.finish()


# --- the d-endomorphism and divided derivations ------------------------------------------------

def _d_element(j, char):
    from .operads import D

    return OperadElement(D, 1, {(j, 1): 1}, char)


def check_shift(P, characteristic=0, max_n=5):
    """d(beta_{x,r}(a..)) = beta_{x,r}(da..) for the shift law over P."""
    from .distributive import ShiftLaw, shift_operad

    char = characteristic
    law, T = ShiftLaw(P), shift_operad(P)
    rep = Report("check-shift", char, operad=P.name, max_n=max_n)
    chk = rep.check(f"shift-{P.name}")
    for j in (1, 2):
        d = _d_element(j, char)
        for n in range(1, max_n + 1):
            for r in _compositions_positive(n):
                for x in _invariant_basis(P, n, r, char):
                    for args in _arg_patterns(len(r))[:3]:
                        lhs = tilde_lambda(BetaTerm(d, (1,), [BetaTerm(x, r, args)]), law)
                        rhs = associator(BetaTerm(x, r, [BetaTerm(d, (1,), [a]) for a in args]), T)
                        rep.record(chk, lhs == rhs, lhs=lhs, rhs=rhs)
    return rep.finish()


def divided_derivation(x, r, args, P=None):
    """sum_i beta_{x, r o_i (r_i - 1, 1)}(.., a_i, d a_i, ..) in Gamma(Der_P, V)."""
    from .combinatorics import compose_composition
    from .distributive import der_operad

    P = P or x.operad
    r = as_composition(r)
    T = der_operad(P)
    d = _d_element(1, x.characteristic)
    total = BetaExpression(T, {}, x.characteristic)
    for i in range(1, len(r) + 1):
        rr = compose_composition(r, i, Composition((r[i - 1] - 1, 1)))
        new_args = list(args[:i]) + [BetaTerm(d, (1,), [args[i - 1]])] + list(args[i:])
        total = total + associator(BetaTerm(x, rr, new_args), T)
    return total


def check_derivation(P, characteristic=0, max_n=5):
    """Divided-derivation sum formula for the derivation law over P, and the
    power rule d(gamma_n(a)) = gamma_{n-1}(a) * d(a) over Com."""
    from .distributive import DerivationLaw, der_operad, product_element
    from .operads import COM

    char = characteristic
    law, T = DerivationLaw(P), der_operad(P)
    rep = Report("check-derivation", char, operad=P.name, max_n=max_n)
    d = _d_element(1, char)
    chk = rep.check(f"sum-formula-{P.name}")
    for n in range(1, max_n + 1):
        for r in _compositions_positive(n):
            for x in _invariant_basis(P, n, r, char):
                for args in _arg_patterns(len(r))[:3]:
                    lhs = tilde_lambda(BetaTerm(d, (1,), [BetaTerm(x, r, args)]), law)
                    rhs = divided_derivation(x, r, args, P)
                    rep.record(chk, lhs == rhs, lhs=lhs, rhs=rhs)
    if P.name == COM.name:
        power = rep.check("power-rule")
        one = lambda k: product_element(T, tuple(range(1, k + 1)), ((0, 1),) * k, char)
        da = BetaTerm(product_element(T, (1,), ((1, 1),), char), (1,), ["a"])
        for n in range(2, max(max_n, 5) + 1):
            from .operads import com_generator

            lhs = tilde_lambda(BetaTerm(d, (1,), [BetaTerm(com_generator(n, char), (n,), ["a"])]), law)
            rhs = gamma_monad_mult(BetaTerm(one(2), (1, 1), [BetaTerm(one(n - 1), (n - 1,), ["a"]), da]), T)
            rep.record(power, lhs == rhs, lhs=lhs, rhs=rhs)
    return rep.finish()


# --- engine against oracle -------------------------------------------------------------------

def _letter_terms(P, char, max_m, max_per_shape=2):
    out = []
    for m in range(1, max_m + 1):
        for q in _compositions_positive(m):
            if len(q) > 3:
                continue
            for y in _invariant_basis(P, m, q, char)[:max_per_shape]:
                starts = range(3 - len(q) + 1) if m > 1 else range(3)
                for s in starts:
                    out.append(BetaTerm(y, q, list(ALPHABET[s:s + len(q)])))
    return out


def _first_use_ordered(terms):
    """True when letters first appear in alphabet order (one instance per renaming)."""
    seen = []
    for t in terms:
        for a in t.args:
            if a not in seen:
                seen.append(a)
    return seen == list(ALPHABET[:len(seen)])


def check_lambda_oracle(characteristic=0, max_arity=6, full=False):
    """tilde_lambda against the tensor oracle for the shift, derivation and
    Poisson laws, total arity <= max_arity."""
    from .distributive import DerivationLaw, PoissonLaw, ShiftLaw
    from .operads import COM, LIE

    char = characteristic
    rep = Report("check-lambda", char, max_arity=max_arity)

    def compare(entry, s, law):
        lhs = tilde_lambda(s, law)
        rhs = tilde_lambda_oracle(s, law, full)
        rep.record(entry, lhs == rhs, lhs=lhs, rhs=rhs)

    for P in (COM, LIE):
        inner = _letter_terms(P, char, max_arity if P is COM else min(max_arity, 5))
        for name, law in (("shift", ShiftLaw(P)), ("der", DerivationLaw(P))):
            entry = rep.check(f"{name}-{P.name}")
            for j in (1, 2):
                d = _d_element(j, char)
                for t in inner:
                    compare(entry, BetaTerm(d, (1,), [t]), law)
                # sums of two inner terms
                for t1, t2 in zip(inner, inner[1:]):
                    if t1.x.n + t2.x.n <= max_arity:
                        both = t1.canonical() + t2.canonical()
                        compare(entry, BetaTerm(d, (1,), [both]), law)
    law = PoissonLaw()
    entry = rep.check("pois")
    inner = _letter_terms(COM, char, 3)
    for n in range(1, 5):
        for r in _compositions_positive(n):
            for x in _invariant_basis(LIE, n, r, char):
                for choice in cartesian(*([inner] * len(r))):
                    size = sum(k * t.x.n for k, t in zip(r, choice))
                    if size > max_arity or (n >= 4 and size > n + 1) or not _first_use_ordered(choice):
                        continue
                    compare(entry, BetaTerm(x, r, list(choice)), law)
    return rep.finish()
