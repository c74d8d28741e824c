"""Command-line frontend: expression parsing and printing, evaluation into
free Gamma-algebras, and the named verification scenarios.

Expression grammar (whitespace is ignored)::

    expr   := ['-'] term (('+' | '-') term)*  |  '0'
    term   := [coeff '*'] factor ('*' factor)*
    coeff  := nat ['/' nat]
    factor := '[' expr ';' expr ']' | 'X_' nat | 'd' ['^' nat] ['(' expr ')']
            | 'gamma_' nat '(' expr ')'
            | 'beta' '(' expr ',' composition ';' expr (',' expr)* ')'
            | ident | '(' expr ')'

Inside ``beta(...)`` the first expression is an operation written in the
variables ``x1, x2, ...`` (or with ``X_n`` / ``d^j``); everywhere else
identifiers are generators of V.  A bare ``d`` is a generator; ``d`` followed
by ``^`` or ``(`` is the derivation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .coefficients import _is_prime, field, vandermonde_check
from .combinatorics import (
    Composition,
    Permutation,
    SetPartition,
    coset_representatives,
    diamond,
    gamma_k,
    iota,
    partition_circ,
    pr,
    rhd,
    tensor_partitions,
    wreath_coset_representatives,
)
from .distributive import (
    POIS,
    DerivationLaw,
    PoissonLaw,
    ProductOperad,
    ShiftLaw,
    check_odl,
    der_operad,
    shift_operad,
)
from .gamma import (
    BetaExpression,
    BetaTerm,
    NotInvariant,
    Report,
    check_derivation,
    check_lambda_oracle,
    check_pois_compat,
    check_shift,
    frobenius_image,
    gamma_monad_mult,
    levp_verify,
    split_bare_factors,
    tilde_lambda_oracle,
    to_free_algebra,
    verify_beta_relations,
)
from .operads import COM, LIE, DOperad, FreeAlgebraElement, Operad, OperadElement, full_compose

SCHEMA_PATH = Path(__file__).with_name("report.schema.json")


# --- AST -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Letter:
    name: str


@dataclass(frozen=True)
class ComGen:
    n: int


@dataclass(frozen=True)
class DPow:
    j: int
    arg: Optional["Node"] = None


@dataclass(frozen=True)
class Bracket:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class GammaPow:
    n: int
    arg: "Node"


@dataclass(frozen=True)
class Beta:
    op: "Node"
    parts: tuple
    args: tuple


@dataclass(frozen=True)
class Sum:
    """Linear combination: ``terms`` is a tuple of (Fraction, node)."""
    terms: tuple


Node = Union[Letter, ComGen, DPow, Bracket, Product, GammaPow, Beta, Sum]


class ExprError(ValueError):
    """Syntax error (with a character position) or arity error (with a node path)."""

    def __init__(self, message, position=None, path=None):
        self.position = position
        self.path = tuple(path or ())
        where = []
        if position is not None:
            where.append(f"at position {position}")
        if self.path:
            where.append("in " + "/".join(self.path))
        super().__init__(message + (f" ({', '.join(where)})" if where else ""))


# --- parsing -------------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")
_COM_GEN = re.compile(r"X_?(\d+)")
_GAMMA = re.compile(r"gamma_(\d+)")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, ident, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("num", num, start))
        elif ident is not None:
            out.append(("ident", ident, start))
        else:
            out.append(("sym", sym, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, value, k=0):
        kind, v, _ = self.peek(k)
        return kind == "sym" and v == value

    def expect(self, value):
        kind, v, pos = self.next()
        if kind != "sym" or v != value:
            raise ExprError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def nat(self):
        kind, v, pos = self.next()
        if kind != "num":
            raise ExprError(f"expected a number, found {v or 'end of input'!r}", pos)
        return int(v)

    def expr(self):
        if self.peek()[0] == "num" and self.peek()[1] == "0" and not self.at("*", 1) and not self.at("/", 1):
            self.next()
            return Sum(())
        terms = []
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        terms.append(self.term(sign))
        while self.at("+") or self.at("-"):
            sign = 1 if self.next()[1] == "+" else -1
            terms.append(self.term(sign))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self, sign):
        coef = Fraction(sign)
        if self.peek()[0] == "num":
            num = self.nat()
            den = 1
            if self.at("/"):
                self.next()
                den_pos = self.peek()[2]
                den = self.nat()
                if den == 0:
                    raise ExprError("zero denominator", den_pos)
            coef *= Fraction(num, den)
            self.expect("*")
        factors = [self.factor()]
        while self.at("*"):
            self.next()
            factors.append(self.factor())
        node = factors[0] if len(factors) == 1 else Product(tuple(factors))
        return coef, node

    def factor(self):
        kind, v, pos = self.next()
        if kind == "sym" and v == "[":
            left = self.expr()
            self.expect(";")
            right = self.expr()
            self.expect("]")
            return Bracket(left, right)
        if kind == "sym" and v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind != "ident":
            raise ExprError(f"unexpected {v or 'end of input'!r}", pos)
        m = _COM_GEN.fullmatch(v)
        if m:
            n = int(m.group(1))
            if n < 1:
                raise ExprError("X_n needs n >= 1", pos)
            return ComGen(n)
        m = _GAMMA.fullmatch(v)
        if m:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return GammaPow(int(m.group(1)), arg)
        if v == "beta" and self.at("("):
            return self.beta()
        if v == "d" and (self.at("^") or self.at("(")):
            j = 1
            if self.at("^"):
                self.next()
                j = self.nat()
            arg = None
            if self.at("("):
                self.next()
                arg = self.expr()
                self.expect(")")
            return DPow(j, arg)
        if not v[0].islower():
            raise ExprError(f"unknown symbol {v!r}", pos)
        return Letter(v)

    def beta(self):
        self.expect("(")
        op = self.expr()
        self.expect(",")
        self.expect("(")
        parts = [self.nat()]
        while self.at(","):
            self.next()
            if self.at(")"):
                break
            parts.append(self.nat())
        self.expect(")")
        self.expect(";")
        args = [self.expr()]
        while self.at(","):
            self.next()
            args.append(self.expr())
        self.expect(")")
        return Beta(op, tuple(parts), tuple(args))


def parse(text: str) -> Node:
    """Parse an expression into its AST."""
    p = _Parser(text)
    node = p.expr()
    kind, v, pos = p.peek()
    if kind != "end":
        raise ExprError(f"unexpected {v!r}", pos)
    return node


# --- printing --------------------------------------------------------------------------------

def _coef_text(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_text(node: Node) -> str:
    """Inverse of :func:`parse` (up to whitespace)."""
    if isinstance(node, Letter):
        return node.name
    if isinstance(node, ComGen):
        return f"X_{node.n}"
    if isinstance(node, DPow):
        if node.arg is None:
            # a bare "d" would read back as a generator
            return f"d^{node.j}"
        head = "d" if node.j == 1 else f"d^{node.j}"
        return f"{head}({to_text(node.arg)})"
    if isinstance(node, Bracket):
        return f"[{to_text(node.left)};{to_text(node.right)}]"
    if isinstance(node, Product):
        return "*".join(f"({to_text(f)})" if isinstance(f, (Sum, Product)) else to_text(f) for f in node.factors)
    if isinstance(node, GammaPow):
        return f"gamma_{node.n}({to_text(node.arg)})"
    if isinstance(node, Beta):
        parts = ",".join(map(str, node.parts)) + ("," if len(node.parts) == 1 else "")
        return f"beta({to_text(node.op)}, ({parts}); {', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Sum):
        if not node.terms:
            return "0"
        out = []
        for k, (c, t) in enumerate(node.terms):
            body = to_text(t)
            if isinstance(t, Sum):
                body = f"({body})"
            mag = abs(c)
            text = body if mag == 1 else f"{_coef_text(mag)}*{body}"
            if k == 0:
                out.append(("- " if c < 0 else "") + text)
            else:
                out.append(("- " if c < 0 else "+ ") + text)
        return " ".join(out)
    raise TypeError(f"not an expression node: {node!r}")


# --- evaluation ---------------------------------------------------------------------------

OPERADS = {
    "com": COM,
    "lie": LIE,
    "pois": POIS,
    "shift-com": shift_operad(COM),
    "shift-lie": shift_operad(LIE),
    "der-com": der_operad(COM),
    "der-lie": der_operad(LIE),
}


def resolve_operad(name) -> Operad:
    if isinstance(name, Operad):
        return name
    key = name.lower().replace("_", "-")
    if key not in OPERADS:
        raise ValueError(f"unknown operad {name!r}; choose from {', '.join(OPERADS)}")
    return OPERADS[key]


def _lift_top(T, mono):
    if isinstance(T, ProductOperad):
        return (mono, tuple(T.Q.unit(l) for l in T.P.labels(mono)))
    return mono


def _lift_factor(T, mono):
    return (T.P.unit(T.Q.min_label(mono)), (mono,))


def _generator(T, kind, n, char, path):
    """The operation of ``T`` playing the role of X_n, the bracket or d^n."""
    if kind == "product":
        mono = tuple(range(1, n + 1))
        if T is COM:
            return OperadElement(T, n, {mono: 1}, char)
        if isinstance(T, ProductOperad) and T.P is COM:
            return OperadElement(T, n, {_lift_top(T, mono): 1}, char)
    elif kind == "bracket":
        if T is LIE:
            return OperadElement(T, 2, {(1, 2): 1}, char)
        if isinstance(T, ProductOperad) and T.P is LIE:
            return OperadElement(T, 2, {_lift_top(T, (1, 2)): 1}, char)
        if isinstance(T, ProductOperad) and T.Q is LIE:
            return OperadElement(T, 2, {_lift_factor(T, (1, 2)): 1}, char)
    elif kind == "d":
        if isinstance(T, ProductOperad) and isinstance(T.Q, DOperad):
            return OperadElement(T, 1, {_lift_factor(T, (n, 1)): 1}, char)
    names = {"product": "a commutative product", "bracket": "a bracket", "d": "a derivation d"}
    raise ExprError(f"operad {T.name} has no {names[kind]}", path=path)


class _Evaluator:
    def __init__(self, T, char):
        self.T = T
        self.char = char
        self.F = field(char)

    def scalar(self, c, path):
        try:
            return self.F(c)
        except ZeroDivisionError as exc:
            raise ExprError(f"scalar {_coef_text(c)} is undefined in characteristic {self.char}", path=path) from exc

    # Gamma(T, V)-values

    def value(self, node, path=()):
        T, char = self.T, self.char
        if isinstance(node, Letter):
            return BetaExpression.generator(T, node.name, char)
        if isinstance(node, Sum):
            total = BetaExpression(T, {}, char)
            for k, (c, t) in enumerate(node.terms, start=1):
                total = total + self.value(t, path + (f"term {k}",)) * self.scalar(c, path)
            return total
        if isinstance(node, Product):
            x = _generator(T, "product", len(node.factors), char, path)
            args = [self.value(f, path + (f"factor {k}",)) for k, f in enumerate(node.factors, start=1)]
            return gamma_monad_mult(BetaTerm(x, (1,) * len(args), args), T)
        if isinstance(node, Bracket):
            x = _generator(T, "bracket", 2, char, path)
            args = [self.value(node.left, path + ("left",)), self.value(node.right, path + ("right",))]
            return gamma_monad_mult(BetaTerm(x, (1, 1), args), T)
        if isinstance(node, DPow):
            if node.arg is None:
                raise ExprError("d^j needs an argument outside an operation", path=path)
            x = _generator(T, "d", node.j, char, path)
            return gamma_monad_mult(BetaTerm(x, (1,), [self.value(node.arg, path + ("d",))]), T)
        if isinstance(node, GammaPow):
            if node.n < 1:
                raise ExprError("gamma_n needs n >= 1", path=path)
            x = _generator(T, "product", node.n, char, path)
            return gamma_monad_mult(BetaTerm(x, (node.n,), [self.value(node.arg, path + (f"gamma_{node.n}",))]), T)
        if isinstance(node, Beta):
            x = self.operation(node.op, path + ("beta operation",))
            if sum(node.parts) != x.n:
                raise ExprError(f"composition {node.parts} does not sum to the arity {x.n}", path=path)
            if len(node.args) != len(node.parts):
                raise ExprError(f"{len(node.parts)} parts but {len(node.args)} arguments", path=path)
            args = [self.value(a, path + (f"beta argument {k}",)) for k, a in enumerate(node.args, start=1)]
            try:
                return gamma_monad_mult(BetaTerm(x, node.parts, args), T)
            except NotInvariant as exc:
                raise ExprError(str(exc), path=path) from exc
        if isinstance(node, ComGen):
            raise ExprError(f"X_{node.n} is an operation; use it inside beta(...) or gamma_n", path=path)
        raise TypeError(f"not an expression node: {node!r}")

    # operations in T, written in the variables x1, x2, ...

    def operation(self, node, path=()):
        elem, names = self._op(node, path)
        return self._positional(elem, names, path)

    def _positional(self, elem, names, path):
        if names is None:
            return elem
        try:
            idx = [int(n[1:]) for n in names]
        except ValueError:
            idx = []
        if sorted(idx) != list(range(1, len(names) + 1)) or any(not n.startswith("x") for n in names):
            raise ExprError(f"operation variables must be x1..x{len(names)}, each used once; got {', '.join(names)}",
                            path=path)
        return elem.act(Permutation(idx))

    def _op(self, node, path):
        T, char = self.T, self.char
        if isinstance(node, Letter):
            return OperadElement(T, 1, {T.unit(1): 1}, char), [node.name]
        if isinstance(node, ComGen):
            return _generator(T, "product", node.n, char, path), None
        if isinstance(node, DPow):
            d = _generator(T, "d", node.j, char, path)
            if node.arg is None:
                return d, None
            inner, names = self._op(node.arg, path + ("d",))
            return full_compose(d, [inner]), names
        if isinstance(node, (Product, Bracket)):
            subs = node.factors if isinstance(node, Product) else (node.left, node.right)
            kind = "product" if isinstance(node, Product) else "bracket"
            gen = _generator(T, kind, len(subs), char, path)
            elems, names = [], []
            for k, s in enumerate(subs, start=1):
                e, ns = self._op(s, path + (f"{kind} {k}",))
                if ns is None:
                    raise ExprError("cannot mix positional generators with named variables", path=path)
                elems.append(e)
                names.extend(ns)
            return full_compose(gen, elems), names
        if isinstance(node, Sum):
            total = None
            for k, (c, t) in enumerate(node.terms, start=1):
                sub = path + (f"term {k}",)
                e, ns = self._op(t, sub)
                e = self._positional(e, ns, sub) * self.scalar(c, sub)
                if total is not None and total.n != e.n:
                    raise ExprError(f"summands of arity {total.n} and {e.n}", path=sub)
                total = e if total is None else total + e
            if total is None:
                raise ExprError("an operation cannot be 0 without an arity", path=path)
            return total, None
        raise ExprError(f"{type(node).__name__} is not an operation", path=path)


def evaluate(node: Union[Node, str], operad="pois", characteristic: int = 0) -> BetaExpression:
    """Value of an expression in the free Gamma(operad)-algebra on its letters."""
    if isinstance(node, str):
        node = parse(node)
    return _Evaluator(resolve_operad(operad), characteristic).value(node)


def evaluate_operation(node: Union[Node, str], operad="com", characteristic: int = 0) -> OperadElement:
    """An operadic element written in the variables x1..xn."""
    if isinstance(node, str):
        node = parse(node)
    return _Evaluator(resolve_operad(operad), characteristic).operation(node)


def evaluate_free(node, operad="pois", characteristic=0) -> FreeAlgebraElement:
    return to_free_algebra(evaluate(node, operad, characteristic))


# --- scenarios ------------------------------------------------------------------------------

REFERENCE_FROBENIUS = {
    2: {
        "F(a*b)": "a*b*[a;b]",
        "gamma": {(1, 1): "[a;b]"},
    },
    3: {
        "F(a*b)": "[[b;a];a]*a*b*b + [[a;b];b]*a*a*b - a*b*[a;b]*[a;b]",
        "gamma": {(1, 1): "-[a;b]*[a;b]", (1, 2): "[[b;a];a]", (2, 1): "[[a;b];b]"},
    },
}


class UsageError(ValueError):
    pass


def _scenario_poisson_frobenius(opts):
    p = opts.char
    if not _is_prime(p):
        raise UsageError("poisson-frobenius needs a prime --char")
    rep = Report("poisson-frobenius", p)
    image = frobenius_image(p)
    free = to_free_algebra(image)
    groups = {k: v for k, v in split_bare_factors(free).items() if not v.is_zero()}
    for key in ((0, 0), (1, 0), (0, 1)):
        groups.setdefault(key, FreeAlgebraElement(POIS, {}, p))
    groups = dict(sorted(groups.items()))
    lines = [f"F(a*b) = {free}"] + [f"Gamma_{{{i},{j}}} = {v}" for (i, j), v in groups.items()]

    if opts.max_arity is None or opts.max_arity >= 2 * p:
        from .operads import com_generator, frobenius_element

        entry = rep.check("engine-vs-oracle")
        s = BetaTerm(frobenius_element(p, p), (p,), [BetaTerm(com_generator(2, p), (1, 1), ["a", "b"])])
        oracle = tilde_lambda_oracle(s, PoissonLaw())
        rep.record(entry, oracle == image, lhs=image, rhs=oracle)

    ref = REFERENCE_FROBENIUS.get(p)
    if ref is not None:
        entry = rep.check("reference F(a*b)")
        expected = evaluate_free(ref["F(a*b)"], POIS, p)
        rep.record(entry, free == expected, input="F(a*b)", lhs=free, rhs=expected)
        entry = rep.check("reference Gamma")
        for key, val in groups.items():
            text = ref["gamma"].get(key, "0")
            expected = evaluate_free(text, POIS, p)
            rep.record(entry, val == expected, input=f"Gamma_{{{key[0]},{key[1]}}}", lhs=val, rhs=expected)
        for key in ref["gamma"]:
            if key not in groups:
                rep.record(entry, False, input=f"Gamma_{{{key[0]},{key[1]}}}", lhs=0, rhs=ref["gamma"][key])
    result = {"F(a*b)": str(free), "gamma": {f"{i},{j}": str(v) for (i, j), v in groups.items()}}
    return rep, lines, result


def _operads(opts, default=("com", "lie")):
    names = [opts.operad] if opts.operad else list(default)
    out = []
    for n in names:
        if n not in ("com", "lie"):
            raise UsageError(f"--operad must be com or lie for {opts.scenario}")
        out.append(resolve_operad(n))
    return out


def _combined(name, char, reports, **meta):
    rep = Report(name, char, **meta)
    many = len(reports) > 1
    for sub in reports:
        for c in sub.checks:
            label = f"{sub.meta.get('operad')}:{c['name']}" if many and sub.meta.get("operad") else c["name"]
            rep.checks.append(dict(c, name=label))
    return rep


def _scenario_check_beta(opts):
    reports = []
    for P in _operads(opts):
        n = opts.max_arity if opts.max_arity is not None else (5 if P is COM else 4)
        sub = verify_beta_relations(P, opts.char, n)
        sub.meta.setdefault("operad", P.name)
        reports.append(sub)
    return _combined("check-beta", opts.char, reports), [], None


def _scenario_check_derivation(opts):
    n = opts.max_arity if opts.max_arity is not None else 5
    reports = []
    for P in _operads(opts):
        sub = check_derivation(P, opts.char, n)
        sub.meta.setdefault("operad", P.name)
        reports.append(sub)
    return _combined("check-derivation", opts.char, reports, max_n=n), [], None


def _scenario_check_shift(opts):
    n = opts.max_arity if opts.max_arity is not None else 5
    reports = []
    for P in _operads(opts):
        sub = check_shift(P, opts.char, n)
        sub.meta.setdefault("operad", P.name)
        reports.append(sub)
    return _combined("check-shift", opts.char, reports, max_n=n), [], None


def _scenario_check_levp(opts):
    if not _is_prime(opts.char):
        raise UsageError("check-levp needs a prime --char")
    size = opts.max_arity if opts.max_arity is not None else 2
    rep = levp_verify(opts.char, size)
    return rep, [], None


def _scenario_check_lambda(opts):
    n = opts.max_arity if opts.max_arity is not None else 6
    return check_lambda_oracle(opts.char, n, full=opts.full), [], None


def _scenario_check_pois(opts):
    if not _is_prime(opts.char):
        raise UsageError("check-pois needs a prime --char")
    return check_pois_compat(opts.char), [], None


def _scenario_check_odl(opts):
    if opts.law == "pois":
        if opts.operad not in (None, "com"):
            raise UsageError("the Poisson law is defined over com (with lie inside); drop --operad")
        law = PoissonLaw()
    else:
        P = resolve_operad(opts.operad or "com")
        if P not in (COM, LIE):
            raise UsageError("--operad must be com or lie")
        law = (ShiftLaw if opts.law == "shift" else DerivationLaw)(P)
    n = opts.max_arity if opts.max_arity is not None else 4
    raw = check_odl(law, max_arity=n, characteristic=opts.char)
    rep = Report("check-odl", opts.char, law=raw["law"], operad=raw["operad"], max_arity=n)
    for d in raw["diagrams"]:
        rep.checks.append({"name": d["diagram"], "instances": d["instances"], "failures": d["failures"]})
    return rep, [], None


def _scenario_vandermonde(opts):
    m_max = opts.max_arity if opts.max_arity is not None else 4
    rep = Report("vandermonde", 0, max_degree=opts.max_degree, max_parts=m_max)
    entry = rep.check("vandermonde")
    for m in range(1, m_max + 1):
        for j in range(opts.max_degree + 1):
            for k in range(opts.max_degree + 1 - j):
                rep.record(entry, vandermonde_check(j, k, m), input=f"j={j}, k={k}, m={m}",
                           lhs="sum of products", rhs="multinomial")
    return rep, [], None


def _partition_op(op, args):
    def comp(t):
        return Composition.parse(t)

    def part(t):
        return SetPartition.parse(t)

    def need(k):
        if len(args) != k:
            raise UsageError(f"partitions {op} takes {k} arguments, got {len(args)}")

    if op == "diamond":
        if len(args) < 1:
            raise UsageError("partitions diamond takes a composition and one partition per part")
        r = comp(args[0])
        Qs = [part(a) for a in args[1:]]
        if len(Qs) != len(r):
            raise UsageError(f"{r} has {len(r)} parts but {len(Qs)} partitions were given")
        return str(diamond(r, Qs))
    if op == "gamma":
        need(2)
        return str(gamma_k(part(args[0]), int(args[1])))
    if op == "rhd":
        need(2)
        return str(rhd(part(args[0]), part(args[1])))
    if op == "tensor":
        need(2)
        return str(tensor_partitions(part(args[0]), part(args[1])))
    if op == "iota":
        need(1)
        return str(iota(comp(args[0])))
    if op == "pr":
        need(1)
        return str(pr(part(args[0])))
    if op == "circ":
        need(3)
        return str(partition_circ(part(args[0]), int(args[1]), part(args[2])))
    if op == "cosets":
        need(1)
        r = comp(args[0])
        return " ".join(str(s) for s in coset_representatives(r.n, r))
    if op == "wreath-cosets":
        if len(args) < 1:
            raise UsageError("partitions wreath-cosets takes a composition k and one composition per part")
        ks = comp(args[0])
        qs = [comp(a) for a in args[1:]]
        if len(qs) != len(ks):
            raise UsageError(f"{ks} has {len(ks)} parts but {len(qs)} compositions were given")
        return " ".join(str(s) for s in wreath_coset_representatives(ks, qs))
    raise UsageError(f"unknown partition operation {op!r}")


PARTITION_OPS = ("diamond", "gamma", "rhd", "tensor", "iota", "pr", "circ", "cosets", "wreath-cosets")


def _scenario_partitions(opts):
    rep = Report("partitions", 0, operation=opts.operation, arguments=list(opts.args))
    entry = rep.check(opts.operation)
    try:
        result = _partition_op(opts.operation, opts.args)
    except UsageError:
        raise
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc)) from exc
    rep.record(entry, True)
    return rep, [result], result


def _scenario_eval(opts):
    T = resolve_operad(opts.operad or "pois")
    rep = Report("eval", opts.char, operad=T.name, expression=opts.expression)
    try:
        value = evaluate(opts.expression, T, opts.char)
    except ExprError as exc:
        raise UsageError(str(exc)) from exc
    lines = [str(value)]
    result = {"canonical": str(value)}
    entry = rep.check("print-parse round trip")
    again = evaluate(str(value), T, opts.char)
    rep.record(entry, again == value, lhs=value, rhs=again)
    try:
        free = to_free_algebra(value)
    except NotInvariant:
        free = None
    if free is not None:
        lines.append(f"= {free}")
        result["free"] = str(free)
        again = to_free_algebra(evaluate(str(free), T, opts.char))
        rep.record(entry, again == free, lhs=free, rhs=again)
    return rep, lines, result


SCENARIOS = {
    "poisson-frobenius": _scenario_poisson_frobenius,
    "check-odl": _scenario_check_odl,
    "check-beta": _scenario_check_beta,
    "check-levp": _scenario_check_levp,
    "check-derivation": _scenario_check_derivation,
    "check-shift": _scenario_check_shift,
    "check-lambda": _scenario_check_lambda,
    "check-pois": _scenario_check_pois,
    "vandermonde": _scenario_vandermonde,
    "partitions": _scenario_partitions,
    "eval": _scenario_eval,
}


def run_scenario(name: str, options) -> tuple:
    """Run a scenario; returns (Report, printable lines, result payload)."""
    if name not in SCENARIOS:
        raise UsageError(f"unknown scenario {name!r}")
    options.scenario = name
    rep, lines, result = SCENARIOS[name](options)
    rep.finish()
    return rep, lines, result


def report_document(rep: Report, result=None) -> dict:
    doc = rep.to_dict()
    if result is not None:
        doc["result"] = result
    return doc


def _print_human(rep, lines, out):
    for line in lines:
        print(line, file=out)
    print(f"scenario {rep.scenario} (characteristic {rep.characteristic})", file=out)
    for line in rep.summary_lines():
        print(line, file=out)
    for f in rep.failures[:5]:
        print("  failure in " + f["check"] + ":", file=out)
        for k, v in f.items():
            if k != "check":
                print(f"    {k}: {v}", file=out)
    status = "PASS" if rep.passed else "FAIL"
    print(f"{status} ({rep.instances} instances, {rep.wall_time:.2f} s)", file=out)


def _build_parser():
    ap = argparse.ArgumentParser(prog="divpow", description="Divided power operations on operadic algebras.")
    sub = ap.add_subparsers(dest="scenario", required=True, metavar="scenario")

    def add(name, help_text, char_required, operad=False, max_arity=True):
        p = sub.add_parser(name, help=help_text)
        if char_required:
            p.add_argument("--char", type=int, required=True, help="characteristic (0 for the rationals)")
        else:
            p.add_argument("--char", type=int, default=0, help="characteristic (default 0)")
        if max_arity:
            p.add_argument("--max-arity", type=int, default=None, help="size bound for the exhaustive suite")
        if operad:
            p.add_argument("--operad", choices=("com", "lie"), default=None)
        p.add_argument("--json", action="store_true", help="print the report as JSON")
        return p

    add("poisson-frobenius", "F(a*b) in divided power Poisson algebras", True)
    p = add("check-odl", "diagrams ODL1-ODL4 of a distributive law", False, operad=True)
    p.add_argument("--law", choices=("shift", "der", "pois"), required=True)
    add("check-beta", "the beta relations, Soublin and restricted Lie checks", True, operad=True)
    add("check-levp", "p-level structure on Gamma(Shift_Com)", True)
    add("check-derivation", "divided derivation sum formula and power rule", True, operad=True)
    add("check-shift", "the shift endomorphism commutes with beta", True, operad=True)
    p = add("check-lambda", "law extension against the tensor oracle", True)
    p.add_argument("--full", action="store_true", help="oracle over all words, not only sorted ones")
    add("check-pois", "[gamma_p(a);b] and F(gamma_p(a)) in char p", True, max_arity=False)
    p = add("vandermonde", "sum of multinomial products identity", False)
    p.add_argument("--max-degree", type=int, default=8, help="bound on j+k")
    p = add("partitions", "combinatorics of compositions and set partitions", False, max_arity=False)
    p.add_argument("operation", choices=PARTITION_OPS)
    p.add_argument("args", nargs="*")
    p = add("eval", "evaluate an expression in a free Gamma-algebra", True, max_arity=False)
    p.add_argument("--operad", default="pois", choices=tuple(OPERADS))
    p.add_argument("expression")
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        opts = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if opts.char < 0 or (opts.char and not _is_prime(opts.char)):
        print(f"divpow: --char must be 0 or a prime, got {opts.char}", file=sys.stderr)
        return 2
    if getattr(opts, "max_arity", None) is not None and opts.max_arity < 1:
        print("divpow: --max-arity must be positive", file=sys.stderr)
        return 2
    try:
        rep, lines, result = run_scenario(opts.scenario, opts)
    except (UsageError, ExprError) as exc:
        print(f"divpow: {exc}", file=sys.stderr)
        return 2
    if opts.json:
        print(json.dumps(report_document(rep, result), indent=2))
    else:
        _print_human(rep, lines, sys.stdout)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
