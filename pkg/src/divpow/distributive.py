"""Distributive laws Q o P -> P o Q and the product operads they define.

A product monomial is ``(top, factors)``: ``factors`` is a tuple of
Q-monomials on disjoint label sets, sorted by smallest label, and ``top`` is a
P-monomial whose labels are those smallest labels ("names").

A law's ``apply(q, pmonos)`` takes a Q-monomial ``q`` over names and a dict
name -> P-monomial (disjoint leaf labels) and returns the P o Q combination
over the leaf labels, as ``{product monomial: int}``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product as cartesian

from . import _backend
from .coefficients import add_term, compositions, field, multinomial_int
from .combinatorics import SetPartition, partition_exponents, partition_from_exponents
from .operads import COM, LIE, D, DOperad, Operad, OperadElement, comb_to_tree


def _add(vec, key, c):
    v = vec.get(key, 0) + c
    if v:
        vec[key] = v
    else:
        vec.pop(key, None)


def _mul_combos(combos):
    """Product of a list of {key: int} dicts, as {tuple of keys: int}."""
    out = {(): 1}
    for combo in combos:
        nxt = {}
        for keys, c in out.items():
            for k, c2 in combo.items():
                _add(nxt, keys + (k,), c * c2)
        out = nxt
    return out


def assemble(P, Q, top, named):
    """Normal form of ``top`` over names with ``named[name]`` the factor at name."""
    fmin = {nm: Q.min_label(f) for nm, f in named.items()}
    factors = tuple(sorted(named.values(), key=Q.min_label))
    return {(t, factors): c for t, c in P.relabel(top, fmin).items()}


def graft(Q, outer, inner):
    """Substitute each Q-monomial of ``inner`` (keyed by name) into the outer
    factor containing that name.  Returns {tuple of factors: int}, aligned
    with ``outer``."""
    current = {tuple(outer): 1}
    for nm, g in inner.items():
        nxt = {}
        for facs, c in current.items():
            k = next(k for k, f in enumerate(facs) if nm in Q.labels(f))
            for f2, c2 in Q.substitute(facs[k], nm, g).items():
                _add(nxt, facs[:k] + (f2,) + facs[k + 1:], c * c2)
        current = nxt
    return current


# --- laws ----------------------------------------------------------------------

class DistributiveLaw:
    name = "?"

    def __init__(self, P, Q):
        self.P = P
        self.Q = Q

    def apply(self, q, pmonos):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.P.name})"


class ShiftLaw(DistributiveLaw):
    """(d^j; mu) -> (mu; d^j, .., d^j)."""

    name = "shift"

    def __init__(self, P):
        super().__init__(P, D)

    def apply(self, q, pmonos):
        j, nm = q
        p = pmonos[nm]
        facs = tuple((j, l) for l in sorted(self.P.labels(p)))
        return {(p, facs): 1}


class DerivationLaw(DistributiveLaw):
    """(d^j; mu) -> sum over compositions t of j of mult(j, t) (mu; d^t1, ..)."""

    name = "der"

    def __init__(self, P):
        super().__init__(P, D)

    def apply(self, q, pmonos):
        j, nm = q
        p = pmonos[nm]
        labels = sorted(self.P.labels(p))
        out = {}
        for t in compositions(j, len(labels)):
            c = multinomial_int(t)
            if c:
                _add(out, (p, tuple(zip(t, labels))), c)
        return out


def _pois_bracket(left, right):
    """Leibniz expansion of [M1; M2] for products of Lie trees, unnormalised.
    Each side is a list of (sign, tuple of trees)."""
    out = []
    for s1, fs in left:
        for s2, gs in right:
            for i, f in enumerate(fs):
                for j, g in enumerate(gs):
                    rest = fs[:i] + fs[i + 1:] + gs[:j] + gs[j + 1:]
                    out.append((s1 * s2, rest + ((f, g),)))
    return out


def pois_expand_raw(tree, pmonos):
    """All summands of the Leibniz expansion of a bracket tree over names
    whose leaves are commutative monomials, before any normalisation."""
    if isinstance(tree, int):
        return [(1, tuple(pmonos[tree]))]
    return _pois_bracket(pois_expand_raw(tree[0], pmonos), pois_expand_raw(tree[1], pmonos))


def pois_normalize(summands):
    """Normal form {(top, factors): int} of a list of (sign, trees)."""
    out = {}
    for s, trees in summands:
        combos = [_backend.lie_tree_normal_form(t) for t in trees]
        for facs, c in _mul_combos(combos).items():
            facs = tuple(sorted(facs, key=min))
            _add(out, (tuple(f[0] for f in facs), facs), s * c)
    return out


class PoissonLaw(DistributiveLaw):
    """Lie o Com -> Com o Lie by the Leibniz rule in every slot."""

    name = "pois"

    def __init__(self):
        super().__init__(COM, LIE)

    def apply(self, q, pmonos):
        return pois_normalize(pois_expand_raw(comb_to_tree(q), pmonos))


# --- product operads -------------------------------------------------------------

class ProductOperad(Operad):
    def __init__(self, law, name=None):
        self.law = law
        self.P = law.P
        self.Q = law.Q
        self.name = name or f"{self.P.name}o{self.Q.name}[{law.name}]"

    def __eq__(self, other):
        return isinstance(other, ProductOperad) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def labels(self, mono):
        return tuple(sorted(l for f in mono[1] for l in self.Q.labels(f)))

    def relabel(self, mono, f):
        top, facs = mono
        Q = self.Q
        images = [Q.relabel(g, f) for g in facs]
        if all(len(im) == 1 for im in images):
            # common case: every factor stays a single monomial
            coef, fmin, new = 1, {}, []
            for g, im in zip(facs, images):
                (h, c), = im.items()
                coef *= c
                fmin[Q.min_label(g)] = Q.min_label(h)
                new.append(h)
            new.sort(key=Q.min_label)
            return {(t, tuple(new)): c * coef for t, c in self.P.relabel(top, fmin).items()}
        out = {}
        for new, c in _mul_combos([Q.relabel(g, f) for g in facs]).items():
            named = {min(Q.labels(g)): h for g, h in zip(facs, new)}
            for m, c2 in assemble(self.P, Q, top, named).items():
                _add(out, m, c * c2)
        return out

    def substitute(self, mono, label, inner):
        P, Q = self.P, self.Q
        top, facs = mono
        j = next(k for k, f in enumerate(facs) if label in Q.labels(f))
        qj = facs[j]
        name_j = min(Q.labels(qj))
        itop, ifacs = inner
        pmonos = {l: P.unit(l) for l in Q.labels(qj) if l != label}
        pmonos[label] = itop
        inner_named = {min(Q.labels(g)): g for g in ifacs}
        others = {min(Q.labels(f)): f for k, f in enumerate(facs) if k != j}
        out = {}
        for (top2, facs2), c in self.law.apply(qj, pmonos).items():
            names2 = [min(Q.labels(f)) for f in facs2]
            for top3, c3 in P.substitute(top, name_j, top2).items():
                for new, c4 in graft(Q, facs2, inner_named).items():
                    named = dict(others)
                    named.update(zip(names2, new))
                    for m, c5 in assemble(P, Q, top3, named).items():
                        _add(out, m, c * c3 * c4 * c5)
        return out

    def unit(self, label):
        return (self.P.unit(label), (self.Q.unit(label),))

    def basis(self, labels):
        P, Q = self.P, self.Q
        out = []
        for blocks in _set_partitions(sorted(labels)):
            if not all(Q.supports_arity(len(b)) for b in blocks):
                continue
            for facs in cartesian(*(Q.basis(b) for b in blocks)):
                names = [b[0] for b in blocks]
                for t in P.basis(names):
                    out.append((t, tuple(facs)))
        return out

    def sort_key(self, mono):
        top, facs = mono
        return (len(self.labels(mono)), self.P.sort_key(top), tuple(self.Q.sort_key(f) for f in facs))

    def render(self, mono, names):
        top, facs = mono
        inner = {min(self.Q.labels(f)): self.Q.render(f, names) for f in facs}
        return self.P.render(top, inner)

    def from_pair(self, top, factors):
        """Normal form of (top over 1..k; factors on consecutive labels)."""
        named, start = {}, 0
        for k, f in enumerate(factors, start=1):
            n = len(self.Q.labels(f))
            named[k] = self.Q.relabel(f, {l: start + l for l in range(1, n + 1)})
            start += n
        out = {}
        for choice, c in _mul_combos(list(named.values())).items():
            for m, c2 in assemble(self.P, self.Q, top, dict(zip(named, choice))).items():
                _add(out, m, c * c2)
        return out


def _set_partitions(items):
    """Unordered set partitions, blocks sorted by first element."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        yield [(first,)] + sub
        for k in range(len(sub)):
            yield sub[:k] + [tuple(sorted((first,) + sub[k]))] + sub[k + 1:]


def _supports_arity(self, n):
    return n >= 1


Operad.supports_arity = _supports_arity
DOperad.supports_arity = lambda self, n: n == 1


@lru_cache(maxsize=None)
def shift_operad(P):
    return ProductOperad(ShiftLaw(P), name=f"Shift_{P.name}")


@lru_cache(maxsize=None)
def der_operad(P):
    return ProductOperad(DerivationLaw(P), name=f"Der_{P.name}")


POIS = ProductOperad(PoissonLaw(), name="Pois")

LAWS = {"shift": ShiftLaw, "der": DerivationLaw, "pois": lambda P=None: PoissonLaw()}


def make_law(name, P=COM):
    if name == "pois":
        return PoissonLaw()
    try:
        return LAWS[name](P)
    except KeyError:
        raise ValueError(f"unknown law {name!r}") from None


def product_operad(law):
    if isinstance(law, PoissonLaw):
        return POIS
    if isinstance(law, ShiftLaw):
        return shift_operad(law.P)
    return der_operad(law.P)


# --- element-level entry points ------------------------------------------------------

def apply_law(law, q, ps, characteristic=0):
    """Lambda(q; p_1, .., p_k) for OperadElements q in Q(k) and p_i in P,
    with the p_i placed on consecutive labels."""
    F = field(characteristic)
    target = product_operad(law)
    if len(ps) != q.n:
        raise ValueError(f"{q.n} inputs expected, got {len(ps)}")
    out = {}
    shifted, start = [], 0
    for p in ps:
        shifted.append({law.P.relabel(m, {l: start + l for l in range(1, p.n + 1)}).popitem()[0]: c
                        for m, c in p.terms.items()})
        start += p.n
    for qm, cq in q.terms.items():
        for choice in cartesian(*(s.items() for s in shifted)):
            coef = F(cq)
            pm = {}
            for nm, (m, c) in enumerate(choice, start=1):
                coef = F.mul(coef, c)
                pm[nm] = m
            for mono, k in law.apply(qm, pm).items():
                add_term(out, mono, F.mul(coef, F(k)), F)
    return OperadElement(target, start, out, characteristic)


def _d(j, characteristic):
    return OperadElement(D, 1, {(j, 1): 1}, characteristic)


def _as_element(P, mu, characteristic):
    if isinstance(mu, OperadElement):
        return mu
    return OperadElement.monomial(P, mu, characteristic)


def shift_law(j, mu, P=COM, characteristic=0):
    return apply_law(ShiftLaw(P), _d(j, characteristic), [_as_element(P, mu, characteristic)], characteristic)


def der_law(j, mu, P=COM, characteristic=0):
    return apply_law(DerivationLaw(P), _d(j, characteristic), [_as_element(P, mu, characteristic)], characteristic)


def pois_law(q, ps, characteristic=0):
    """q a Lie element of arity k, ps a list of k Com monomials or elements."""
    q = _as_element(LIE, q, characteristic)
    return apply_law(PoissonLaw(), q, [_as_element(COM, p, characteristic) for p in ps], characteristic)


def product_compose(x, i, y):
    """Partial composition in a product operad."""
    if not isinstance(x.operad, ProductOperad):
        raise TypeError("product_compose needs elements of a product operad")
    return x.compose(i, y)


def product_element(operad, top, factors, characteristic=0, coefficient=1):
    """OperadElement for (top; factors) given on standard labels."""
    F = field(characteristic)
    out = {}
    for m, c in operad.from_pair(top, factors).items():
        add_term(out, m, F.mul(F(coefficient), F(c)), F)
    n = sum(len(operad.Q.labels(f)) for f in factors)
    return OperadElement(operad, n, out, characteristic)


# --- shifted commutative monomials and partitions ---------------------------------

def shift_com_from_partition(J):
    exps = partition_exponents(J)
    n = len(exps)
    return (tuple(range(1, n + 1)), tuple((e, l) for l, e in enumerate(exps, start=1)))


def shift_com_to_partition(mono, n=None):
    top, facs = mono
    exps = [j for j, _ in sorted(facs, key=lambda f: f[1])]
    return partition_from_exponents(exps)


# --- ODL diagrams -------------------------------------------------------------

def _standard_basis(op, k):
    return op.basis(tuple(range(1, k + 1)))


def _place(P, ps, start):
    """Relabel P-monomials onto consecutive labels from start+1."""
    out, pos = [], start
    for p in ps:
        k = len(P.labels(p))
        out.append(P.relabel(p, {l: pos + l for l in range(1, k + 1)}).popitem()[0])
        pos += k
    return out, pos


def _p_tuples(P, count, budget):
    """Tuples of ``count`` P-basis monomials with total arity <= budget."""
    if count == 0:
        yield ()
        return
    for k in range(1, budget - count + 2):
        for p in _standard_basis(P, k):
            for rest in _p_tuples(P, count - 1, budget - k):
                yield (p,) + rest


def _q_shapes(Q, max_arity):
    for a in range(1, max_arity + 1):
        if Q.supports_arity(a):
            yield from _standard_basis(Q, a)


def _fmt(op, vec):
    if not vec:
        return "0"
    return " + ".join(f"{c}*{op.render(m, {l: f'x{l}' for l in op.labels(m)})}" for m, c in
                      sorted(vec.items(), key=lambda kv: op.sort_key(kv[0])))


def _reduce(vec, F):
    out = {}
    for k, v in vec.items():
        add_term(out, k, F(v), F)
    return out


def check_odl(law, max_arity=4, characteristic=0, max_degree=3):
    """Check ODL1-ODL4 on basis instances up to the given total arity.

    Returns {"law", "max_arity", "characteristic", "passed", "diagrams": [...]},
    each diagram entry being {law, diagram, arity, instances, failures}."""
    P = law.P
    Q = DOperad(max_degree) if isinstance(law.Q, DOperad) else law.Q
    target = product_operad(law)
    F = field(characteristic)
    diagrams = []

    def record(name, instances, failures):
        diagrams.append({"law": law.name, "diagram": name, "arity": max_arity,
                         "instances": instances, "failures": failures})

    def compare(lhs, rhs, describe, failures):
        lhs, rhs = _reduce(lhs, F), _reduce(rhs, F)
        if lhs != rhs:
            failures.append({"input": describe(), "lhs": _fmt(target, lhs), "rhs": _fmt(target, rhs)})

    # ODL1: compatibility with composition in Q
    inst, fails = 0, []
    for q1 in _q_shapes(Q, max_arity):
        a = len(Q.labels(q1))
        for q2 in _q_shapes(Q, max_arity - a + 1):
            b = len(Q.labels(q2))
            for i in range(1, a + 1):
                for ps in _p_tuples(P, a + b - 1, max_arity):
                    inst += 1
                    placed, _ = _place(P, ps, 0)
                    pm = dict(enumerate(placed, start=1))
                    lhs = {}
                    for q, c in Q.partial_compose(q1, i, q2).items():
                        for m, c2 in law.apply(q, pm).items():
                            _add(lhs, m, c * c2)
                    rhs = {}
                    q2r = Q.relabel(q2, {l: i + l - 1 for l in range(1, b + 1)}).popitem()[0]
                    q1r = Q.relabel(q1, {l: (l if l <= i else l + b - 1) for l in range(1, a + 1)}).popitem()[0]
                    for (top2, facs2), c in law.apply(q2r, {l: pm[l] for l in Q.labels(q2r)}).items():
                        pm1 = {l: pm[l] for l in Q.labels(q1r) if l != i}
                        pm1[i] = top2
                        inner = {min(Q.labels(f)): f for f in facs2}
                        for (top1, facs1), c1 in law.apply(q1r, pm1).items():
                            for new, c3 in graft(Q, facs1, inner).items():
                                for m, c4 in assemble(P, Q, top1, _rename(Q, facs1, new)).items():
                                    _add(rhs, m, c * c1 * c3 * c4)
                    compare(lhs, rhs, lambda: f"q1={q1} o_{i} q2={q2}; p={ps}", fails)
    record("ODL1", inst, fails)

    # ODL2: unit of Q
    inst, fails = 0, []
    for k in range(1, max_arity + 1):
        for p in _standard_basis(P, k):
            inst += 1
            lhs = law.apply(Q.unit(1), {1: p})
            rhs = {(p, tuple(Q.unit(l) for l in sorted(P.labels(p)))): 1}
            compare(lhs, rhs, lambda: f"p={p}", fails)
    record("ODL2", inst, fails)

    # ODL3: compatibility with composition in P
    inst, fails = 0, []
    for q in _q_shapes(Q, max_arity):
        a = len(Q.labels(q))
        for ps in _p_tuples(P, a, max_arity):
            placed, end = _place(P, ps, 0)
            for t, pt in enumerate(placed, start=1):
                for leaf in P.labels(pt):
                    for c_ar in range(1, max_arity - end + 2):
                        for p2 in _standard_basis(P, c_ar):
                            inst += 1
                            p2r = P.relabel(p2, {l: end + l for l in range(1, c_ar + 1)}).popitem()[0]
                            lhs = {}
                            for pt2, c in P.substitute(pt, leaf, p2r).items():
                                pm = dict(enumerate(placed, start=1))
                                pm[t] = pt2
                                for m, c2 in law.apply(q, pm).items():
                                    _add(lhs, m, c * c2)
                            rhs = {}
                            inner = next(iter(assemble(P, Q, p2r, {l: Q.unit(l) for l in P.labels(p2r)})))
                            for mono, c in law.apply(q, dict(enumerate(placed, start=1))).items():
                                for m, c2 in target.substitute(mono, leaf, inner).items():
                                    _add(rhs, m, c * c2)
                            compare(lhs, rhs, lambda: f"q={q}; p={ps}; p{t} o_{leaf} {p2}", fails)
    record("ODL3", inst, fails)

    # ODL4: unit of P
    inst, fails = 0, []
    for q in _q_shapes(Q, max_arity):
        inst += 1
        labels = Q.labels(q)
        lhs = law.apply(q, {l: P.unit(l) for l in labels})
        rhs = {(P.unit(min(labels)), (q,)): 1}
        compare(lhs, rhs, lambda: f"q={q}", fails)
    record("ODL4", inst, fails)

    return {"law": law.name, "operad": P.name, "max_arity": max_arity, "characteristic": characteristic,
            "passed": all(not d["failures"] for d in diagrams), "diagrams": diagrams}


def _rename(Q, old, new):
    """Map the names of ``old`` factors to the grafted ``new`` factors."""
    return {min(Q.labels(f)): g for f, g in zip(old, new)}
