"""Text format for parametric shapes and its expression language.

Grammar (comments run from ``#`` to end of line)::

    expr  := term (('+'|'-') term)*
    term  := unary (('*'|'/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-2^2``
is ``-(2^2) = -4``.  Function names are the reserved single-argument set
from :mod:`diffgeo.jets`; ``pi`` is the one builtin constant.  Identifiers
are case-sensitive.

Definition files are line oriented::

    curve helix              # or: surface <name>
    param t in [0, 6.283185307179586]
    const a = 1
    const b = 0.5
    x = a*cos(t)
    y = a*sin(t)
    z = b*t

Curves declare one parameter, surfaces two (in order u, v).  Evaluation
lifts the parameters into jets, so every derivative a caller reads is an
exact Taylor coefficient of the definition.
"""

import math
from dataclasses import dataclass

from . import jets
from .errors import ArityError, DomainError, LexError, ParseError, UnknownIdentifier
from .jets import FUNCTIONS, Jet1, Jet2
from .vectors import Vec3

__all__ = [
    "Token", "tokenize", "parse", "parse_text", "to_text",
    "Num", "Var", "Const", "Neg", "BinOp", "Call",
    "ShapeDefinition", "load_definition", "eval_scalar",
]

_KEYWORDS = {"curve", "surface", "surfacecurve", "param", "const", "in"}
_CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Token:
    kind: str      # number | identifier | operator | paren | keyword
    lexeme: str
    position: int  # byte offset into the source text


def tokenize(text):
    """Token stream for ``text``; raises LexError on any unknown character."""
    out = []
    data = text.encode("utf-8").decode("utf-8")  # reject invalid input early
    i, n = 0, len(data)
    while i < n:
        ch = data[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch == "#":
            while i < n and data[i] != "\n":
                i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and data[i + 1].isdigit()):
            j = i
            while j < n and (data[j].isdigit() or data[j] == "."):
                j += 1
            if j < n and data[j] in "eE":
                k = j + 1
                if k < n and data[k] in "+-":
                    k += 1
                if k < n and data[k].isdigit():
                    j = k
                    while j < n and data[j].isdigit():
                        j += 1
            out.append(Token("number", data[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (data[j].isalnum() or data[j] == "_"):
                j += 1
            word = data[i:j]
            kind = "keyword" if word in _KEYWORDS else "identifier"
            out.append(Token(kind, word, i))
            i = j
            continue
        if ch in "+-*/^=,":
            out.append(Token("operator", ch, i))
            i += 1
            continue
        if ch in "()[]":
            out.append(Token("paren", ch, i))
            i += 1
            continue
        raise LexError(i, ch)
    return out


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str  # builtin named constant (pi)


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


class _Parser:
    def __init__(self, tokens, end_pos):
        self.toks = tokens
        self.i = 0
        self.end_pos = end_pos

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is not None:
            self.i += 1
        return t

    def fail(self, expected):
        t = self.peek()
        pos = t.position if t is not None else self.end_pos
        found = t.lexeme if t is not None else "end of input"
        raise ParseError(pos, expected, found)

    def expect_op(self, lexeme):
        t = self.peek()
        if t is None or t.lexeme != lexeme:
            self.fail(f"'{lexeme}'")
        return self.next()

    def expr(self):
        node = self.term()
        while True:
            t = self.peek()
            if t is not None and t.kind == "operator" and t.lexeme in "+-":
                self.next()
                node = BinOp(t.lexeme, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            t = self.peek()
            if t is not None and t.kind == "operator" and t.lexeme in "*/":
                self.next()
                node = BinOp(t.lexeme, node, self.unary())
            else:
                return node

    def unary(self):
        t = self.peek()
        if t is not None and t.kind == "operator" and t.lexeme == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        t = self.peek()
        if t is not None and t.kind == "operator" and t.lexeme == "^":
            self.next()
            node = BinOp("^", node, self.unary())
        return node

    def atom(self):
        t = self.peek()
        if t is None:
            self.fail("an expression")
        if t.kind == "number":
            self.next()
            return Num(float(t.lexeme))
        if t.kind == "identifier":
            self.next()
            nxt = self.peek()
            if nxt is not None and nxt.lexeme == "(":
                self.next()
                arg = self.expr()
                close = self.peek()
                if close is None or close.lexeme != ")":
                    self.fail("')'")
                self.next()
                return Call(t.lexeme, arg)
            if t.lexeme in _CONSTANTS:
                return Const(t.lexeme)
            return Var(t.lexeme)
        if t.lexeme == "(":
            self.next()
            node = self.expr()
            close = self.peek()
            if close is None or close.lexeme != ")":
                self.fail("')'")
            self.next()
            return node
        self.fail("an expression")


def parse(tokens, end_pos=0):
    """Parse a full token stream into an Expr tree."""
    p = _Parser(list(tokens), end_pos)
    node = p.expr()
    left = p.peek()
    if left is not None:
        raise ParseError(left.position, "end of expression", left.lexeme)
    return node


def parse_text(text):
    toks = tokenize(text)
    return parse(toks, len(text))


# --------------------------------------------------------------------------
# pretty printing (round-trips through parse into a structurally equal tree)
# --------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_text(node):
    def go(n, parent_prec, is_right):
        if isinstance(n, Num):
            return repr(n.value) if n.value != int(n.value) else str(int(n.value))
        if isinstance(n, (Var, Const)):
            return n.name
        if isinstance(n, Call):
            return f"{n.fn}({go(n.arg, 0, False)})"
        if isinstance(n, Neg):
            body = f"-{go(n.arg, _PREC['neg'], False)}"
            return f"({body})" if parent_prec > _PREC["neg"] else body
        prec = _PREC[n.op]
        # '-' and '/' are left-associative; '^' is right-associative
        lp = go(n.left, prec if n.op != "^" else prec + 1, False)
        rp = go(n.right, prec + (1 if n.op in "+-*/" else 0), True)
        body = f"{lp}{n.op}{rp}"
        need = parent_prec > prec or (parent_prec == prec and is_right)
        return f"({body})" if need else body

    return go(node, 0, False)


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def eval_scalar(node, env):
    """Evaluate ``node`` with ``env`` mapping identifier -> float or jet."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return _CONSTANTS[node.name]
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnknownIdentifier(f"undeclared identifier {node.name!r}") from None
    if isinstance(node, Neg):
        return -eval_scalar(node.arg, env)
    if isinstance(node, Call):
        fn = FUNCTIONS.get(node.fn)
        if fn is None:
            if node.fn in env or node.fn in _CONSTANTS:
                raise ArityError(f"{node.fn!r} is not a function")
            raise UnknownIdentifier(f"unknown function {node.fn!r}")
        return fn(eval_scalar(node.arg, env))
    l = eval_scalar(node.left, env)
    r = eval_scalar(node.right, env)
    op = node.op
    if op == "+":
        return l + r
    if op == "-":
        return l - r
    if op == "*":
        return l * r
    if op == "/":
        if isinstance(r, (int, float)):
            return _div(l, r)
        return l / r
    return jets.power(l, r)


def _div(l, r):
    if r == 0.0:
        raise DomainError("division by zero")
    return l / r


def compile_expr(node):
    """Compile an Expr tree into a closure over an env dict.

    Same semantics as :func:`eval_scalar`, minus the per-node dispatch cost;
    shape evaluators sit inside ODE right-hand sides, so this matters."""
    if isinstance(node, Num):
        c = node.value
        return lambda env: c
    if isinstance(node, Const):
        c = _CONSTANTS[node.name]
        return lambda env: c
    if isinstance(node, Var):
        name = node.name

        def ref(env, name=name):
            try:
                return env[name]
            except KeyError:
                raise UnknownIdentifier(
                    f"undeclared identifier {name!r}") from None

        return ref
    if isinstance(node, Neg):
        arg = compile_expr(node.arg)
        return lambda env: -arg(env)
    if isinstance(node, Call):
        fn = FUNCTIONS.get(node.fn)
        if fn is None:
            name = node.fn

            def bad(env, name=name):
                raise UnknownIdentifier(f"unknown function {name!r}")

            return bad
        arg = compile_expr(node.arg)
        return lambda env: fn(arg(env))
    left = compile_expr(node.left)
    right = compile_expr(node.right)
    op = node.op
    if op == "+":
        return lambda env: left(env) + right(env)
    if op == "-":
        return lambda env: left(env) - right(env)
    if op == "*":
        return lambda env: left(env) * right(env)
    if op == "/":
        def div(env):
            r = right(env)
            if isinstance(r, (int, float)):
                return _div(left(env), r)
            return left(env) / r

        return div
    return lambda env: jets.power(left(env), right(env))


def _free_names(node, acc):
    if isinstance(node, Var):
        acc.add(node.name)
    elif isinstance(node, Neg):
        _free_names(node.arg, acc)
    elif isinstance(node, BinOp):
        _free_names(node.left, acc)
        _free_names(node.right, acc)
    elif isinstance(node, Call):
        _free_names(node.arg, acc)
    return acc


# --------------------------------------------------------------------------
# shape definitions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ShapeDefinition:
    """A parsed curve/surface/surface-curve definition.

    ``kind`` is 'curve', 'surface' or 'surfacecurve'; ``params`` maps each
    parameter name to its closed domain interval; ``components`` holds the
    Expr trees in output order (x,y,z -- or u,v for surface curves).
    """

    kind: str
    name: str
    params: dict
    constants: dict
    components: tuple
    component_names: tuple

    def domain(self, param):
        return self.params[param]

    @property
    def compiled(self):
        if not hasattr(self, "_compiled"):
            object.__setattr__(self, "_compiled",
                               tuple(compile_expr(c) for c in self.components))
        return self._compiled

    def eval(self, *args, clamp=False, check_domain=True):
        """Evaluate at jet (or float) parameter values, in declaration order.

        With ``check_domain``, out-of-domain value coefficients raise
        DomainError unless ``clamp`` pulls them to the nearest bound.
        Kernel wrappers evaluate with ``check_domain=False`` (the domain is
        sampling metadata; shooting solvers probe beyond it)."""
        names = list(self.params)
        if len(args) != len(names):
            raise ArityError(
                f"{self.kind} takes {len(names)} parameter(s), got {len(args)}")
        env = dict(self.constants)
        for name, val in zip(names, args):
            lo, hi = self.params[name]
            v0 = val.value if hasattr(val, "value") else float(val)
            if check_domain and not lo <= v0 <= hi:
                if not clamp:
                    raise DomainError(
                        f"parameter {name}={v0!r} outside [{lo!r}, {hi!r}]")
                clamped = min(max(v0, lo), hi)
                if isinstance(val, Jet1):
                    val = Jet1(clamped, *val.c[1:])
                elif isinstance(val, Jet2):
                    val = Jet2((clamped,) + val.c[1:])
                else:
                    val = clamped
            env[name] = val
        seed = env[names[0]]
        vals = []
        for fn in self.compiled:
            out = fn(env)
            if isinstance(out, (int, float)) and not isinstance(seed, (int, float)):
                out = seed * 0.0 + out  # constant component lifted to jet kind
            vals.append(out)
        if len(vals) == 3:
            return Vec3(*vals)
        return tuple(vals)


def _def_error(lineno, msg):
    return ParseError(lineno, msg)


def load_definition(text):
    """Parse definition-file text into a validated ShapeDefinition."""
    kind = None
    name = ""
    params = {}
    constants = {}
    comps = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head in ("curve", "surface", "surfacecurve"):
            if kind is not None:
                raise _def_error(lineno, "duplicate header line")
            kind = head
            name = line[len(head):].strip()
            continue
        if kind is None:
            raise _def_error(lineno, "definition must start with 'curve <name>', "
                                     "'surface <name>' or 'surfacecurve <name>'")
        if head == "param":
            rest = line[len("param"):].strip()
            if " in " not in rest:
                raise _def_error(lineno, "param line must read 'param <id> in [a, b]'")
            pname, dom = rest.split(" in ", 1)
            pname = pname.strip()
            dom = dom.strip()
            if not (dom.startswith("[") and dom.endswith("]") and "," in dom):
                raise _def_error(lineno, "domain must be '[a, b]'")
            lo_s, hi_s = dom[1:-1].split(",", 1)
            lo = _eval_literal(lo_s, lineno)
            hi = _eval_literal(hi_s, lineno)
            if not lo < hi:
                raise _def_error(lineno, f"empty domain [{lo}, {hi}]")
            if pname in params or pname in constants:
                raise _def_error(lineno, f"duplicate name {pname!r}")
            if pname in FUNCTIONS or pname in _CONSTANTS:
                raise _def_error(lineno, f"{pname!r} is a reserved word")
            params[pname] = (lo, hi)
            continue
        if head == "const":
            rest = line[len("const"):].strip()
            if "=" not in rest:
                raise _def_error(lineno, "const line must read 'const <id> = <number>'")
            cname, value = rest.split("=", 1)
            cname = cname.strip()
            if cname in params or cname in constants:
                raise _def_error(lineno, f"duplicate name {cname!r}")
            if cname in FUNCTIONS or cname in _CONSTANTS:
                raise _def_error(lineno, f"{cname!r} is a reserved word")
            constants[cname] = _eval_literal(value, lineno)
            continue
        if "=" in line:
            cname, body = line.split("=", 1)
            cname = cname.strip()
            if cname in comps:
                raise _def_error(lineno, f"duplicate component {cname!r}")
            comps[cname] = parse_text(body.strip())
            continue
        raise _def_error(lineno, f"unrecognized line {line!r}")

    if kind is None:
        raise _def_error(0, "empty definition")
    n_params = {"curve": 1, "surface": 2, "surfacecurve": 1}[kind]
    if len(params) != n_params:
        raise _def_error(0, f"a {kind} needs exactly {n_params} parameter(s), "
                            f"got {len(params)}")
    wanted = ("u", "v") if kind == "surfacecurve" else ("x", "y", "z")
    missing = [c for c in wanted if c not in comps]
    if missing:
        raise _def_error(0, f"missing component(s): {', '.join(missing)}")
    extra = [c for c in comps if c not in wanted]
    if extra:
        raise _def_error(0, f"unexpected component(s): {', '.join(extra)}")

    declared = set(params) | set(constants)
    for cname in wanted:
        for free in sorted(_free_names(comps[cname], set())):
            if free not in declared:
                raise UnknownIdentifier(
                    f"component {cname!r} references undeclared identifier {free!r}")

    return ShapeDefinition(
        kind=kind, name=name, params=dict(params), constants=dict(constants),
        components=tuple(comps[c] for c in wanted), component_names=wanted)


def _eval_literal(text, lineno):
    """A numeric literal, allowing expressions over numbers and pi."""
    node = parse_text(text.strip())
    free = _free_names(node, set())
    if free:
        raise _def_error(lineno, f"literal may not reference {sorted(free)}")
    return float(eval_scalar(node, {}))
