"""Theory and structure files.

Both are sequences of s-expressions whose head names the entry::

    (vocab (< 2) (P 1) (f fun 1) (c const))
    (mode paren)
    (sentence (qcof (w) (x) (y) (< x y)))

    (carrier (sum Q (fin 1)))          ; or (universe a b c)
    (rel E (a b) (b c))
    (pred P (is (piece -inf +inf)))
    (tag R0 ())
    (const c (at 1 0))
    (fun f ((a) b) ((b) a))

A bare formula at top level is read as a sentence.  Lines starting with
``#`` or ``;`` are comments.
"""

from __future__ import annotations

import json
from typing import Optional

from . import orders as O
from .errors import ArityError, FormulaSyntaxError, InputError
from .formulas import FUNCTION, RELATION, STANDARD, Theory, Vocabulary, parse, to_text
from .intervals import format_intervalset, parse_intervalset
from .sexpr import Atom, SList, read_all
from .structures import FiniteStructure, OrderStructure


class FileFormatError(InputError):
    code = "file-format"


def _head(x):
    return x[0].text if isinstance(x, SList) and x.items and isinstance(x[0], Atom) else None


def _atom(x, what):
    if not isinstance(x, Atom):
        raise FileFormatError(f"expected {what}", position=x.pos)
    return x.text


def _int(x, what):
    try:
        return int(_atom(x, what))
    except ValueError:
        raise FileFormatError(f"expected {what}", position=x.pos) from None


def read_vocab(items) -> Vocabulary:
    """``(< 2)`` relation, ``(f fun 1)`` function, ``(F fun 1 indexed)``, ``(c const)``."""
    v = Vocabulary()
    for it in items:
        if not isinstance(it, SList) or not it.items:
            raise FileFormatError("vocabulary entries are lists like (E 2)", position=it.pos)
        name = _atom(it[0], "a symbol name")
        rest = [_atom(a, "a symbol attribute") for a in it.items[1:]]
        if rest == ["const"]:
            v = v.add(name, FUNCTION, 0)
        elif rest and rest[0] == "fun":
            if len(rest) < 2:
                raise FileFormatError(f"function {name} needs an arity", position=it.pos)
            v = v.add(name, FUNCTION, int(rest[1]), indexed="indexed" in rest[2:])
        elif len(rest) == 1 and rest[0].isdigit():
            v = v.add(name, RELATION, int(rest[0]))
        else:
            raise FileFormatError(f"cannot read vocabulary entry for {name}", position=it.pos)
    return v


def format_vocab(v: Vocabulary) -> str:
    parts = []
    for name, s in v.items():
        if s.kind == RELATION:
            parts.append(f"({name} {s.arity})")
        elif s.arity == 0 and not s.indexed:
            parts.append(f"({name} const)")
        else:
            parts.append(f"({name} fun {s.arity}{' indexed' if s.indexed else ''})")
    return "(vocab " + " ".join(parts) + ")"


# theories ------------------------------------------------------------------------------------


def read_theory(text: str, mode: Optional[str] = None, path: Optional[str] = None, allow_reserved=None) -> Theory:
    try:
        exprs = read_all(text)
        vocab = Vocabulary()
        file_mode = STANDARD
        raw = []
        for x in exprs:
            h = _head(x)
            if h == "vocab":
                vocab = vocab.union(read_vocab(x.items[1:]))
            elif h == "mode":
                file_mode = _atom(x[1], "a logic mode")
            elif h == "sentence":
                if len(x) != 2:
                    raise FileFormatError("(sentence f) takes one formula", position=x.pos)
                raw.append(x[1])
            else:
                raw.append(x)
        mode = mode or file_mode
        reserved = any(n.startswith("$") for n in vocab) if allow_reserved is None else allow_reserved
        return Theory(vocab, [parse(s, vocab, mode, allow_reserved=reserved) for s in raw], mode)
    except InputError as e:
        if e.path is None:
            e.path = path
        raise


def write_theory(T: Theory, header=()) -> str:
    lines = [f"# {h}" for h in header]
    lines.append(format_vocab(T.vocab))
    lines.append(f"(mode {T.mode})")
    lines += [f"(sentence {to_text(s)})" for s in T.sentences]
    return "\n".join(lines) + "\n"


# structures ----------------------------------------------------------------------------------


def _universe_elt(x):
    t = _atom(x, "a universe element")
    return int(t) if t.lstrip("-").isdigit() else t


def _universe_tuple(x, where):
    if not isinstance(x, SList):
        raise FileFormatError(f"expected a tuple in {where}", position=x.pos)
    return tuple(_universe_elt(a) for a in x.items)


def read_structure(text: str, path: Optional[str] = None, vocab: Optional[Vocabulary] = None):
    """A ``FiniteStructure`` (with ``universe``) or an ``OrderStructure`` (with ``carrier``)."""
    try:
        return _read_structure(read_all(text), vocab)
    except InputError as e:
        if e.path is None:
            e.path = path
        raise


def _read_structure(exprs, vocab):
    entries = {}
    for x in exprs:
        h = _head(x)
        if h is None:
            raise FileFormatError("structure entries are lists headed by a keyword", position=x.pos)
        entries.setdefault(h, []).append(x)
    unknown = set(entries) - {"vocab", "carrier", "universe", "rel", "pred", "tag", "const", "fun"}
    if unknown:
        x = entries[sorted(unknown)[0]][0]
        raise FileFormatError(f"unknown structure entry {_head(x)!r}", position=x.pos)
    v = vocab or Vocabulary()
    for x in entries.get("vocab", ()):
        v = v.union(read_vocab(x.items[1:]))
    if ("carrier" in entries) == ("universe" in entries):
        raise FileFormatError("a structure needs exactly one of carrier or universe", position=0)
    if "universe" in entries:
        return _read_finite(entries, v)
    return _read_order(entries, v)


def _read_finite(entries, v):
    (u,) = entries["universe"]
    universe = tuple(_universe_elt(a) for a in u.items[1:])
    rels, funcs = {}, {}
    for x in entries.get("rel", ()):
        name = _atom(x[1], "a relation name")
        tuples = {_universe_tuple(a, name) for a in x.items[2:]}
        if name not in v:
            ar = {len(t) for t in tuples}
            if len(ar) != 1:
                raise ArityError(f"cannot infer the arity of {name}", position=x.pos)
            v = v.add(name, RELATION, ar.pop())
        rels[name] = tuples
    for x in entries.get("const", ()):
        name = _atom(x[1], "a constant name")
        if name not in v:
            v = v.add(name, FUNCTION, 0)
        funcs[(name, None)] = {(): _universe_elt(x[2])}
    for x in entries.get("fun", ()):
        name = _atom(x[1], "a function name")
        tab = {}
        for entry in x.items[2:]:
            if not isinstance(entry, SList) or len(entry) != 2:
                raise FileFormatError("function entries are ((args...) value)", position=entry.pos)
            tab[_universe_tuple(entry[0], name)] = _universe_elt(entry[1])
        if name not in v:
            ar = {len(k) for k in tab} or {0}
            v = v.add(name, FUNCTION, ar.pop())
        funcs[(name, None)] = tab
    return FiniteStructure(v, universe, rels, funcs)


def _read_order(entries, v):
    (c,) = entries["carrier"]
    if len(c) != 2:
        raise FileFormatError("(carrier <order term>) takes one term", position=c.pos)
    carrier = O.normalize(O.term_from_sexpr(c[1]))
    if "<" not in v:
        v = v.add("<", RELATION, 2)
    preds, tags, consts = {}, {}, {}
    for x in entries.get("pred", ()):
        name = _atom(x[1], "a predicate name")
        if name not in v:
            v = v.add(name, RELATION, 1)
        preds[name] = parse_intervalset(x[2], carrier)
    for x in entries.get("tag", ()):
        name = _atom(x[1], "a tag name")
        tuples = set()
        for t in x.items[2:]:
            if not isinstance(t, SList):
                raise FileFormatError("tag tuples are lists of elements", position=t.pos)
            tuples.add(tuple(O.parse_element(e, carrier) for e in t.items))
        if name not in v:
            ar = {len(t) for t in tuples} or {0}
            v = v.add(name, RELATION, ar.pop())
        tags[name] = tuples
    for x in entries.get("const", ()):
        name = _atom(x[1], "a constant name")
        if name not in v:
            v = v.add(name, FUNCTION, 0)
        consts[name] = O.parse_element(x[2], carrier)
    if entries.get("rel") or entries.get("fun"):
        raise FileFormatError("order structures take pred, tag and const entries only", position=0)
    return OrderStructure(v, carrier, preds, tags, consts)


def write_structure(S) -> str:
    lines = [format_vocab(S.vocab)]
    if isinstance(S, FiniteStructure):
        lines.append("(universe " + " ".join(map(str, S.universe)) + ")")
        for name, ts in sorted(S.relations.items()):
            body = " ".join("(" + " ".join(map(str, t)) + ")" for t in sorted(ts, key=repr))
            lines.append(f"(rel {name}{' ' if body else ''}{body})")
        for (name, ix), tab in sorted(S.functions.items(), key=lambda kv: repr(kv[0])):
            if S.vocab[name].arity == 0 and ix is None:
                lines.append(f"(const {name} {tab[()]})")
                continue
            body = " ".join(f"(({' '.join(map(str, k))}) {v})" for k, v in sorted(tab.items(), key=repr))
            lines.append(f"(fun {name} {body})")
        return "\n".join(lines) + "\n"
    t = S.carrier
    lines.append(f"(carrier {O.format_term(t)})")
    for name, s in sorted(S.preds.items()):
        lines.append(f"(pred {name} {format_intervalset(s)})")
    for name, ts in sorted(S.tags.items()):
        body = " ".join("(" + " ".join(O.format_element(t, e) for e in tup) + ")" for tup in sorted(ts, key=repr))
        lines.append(f"(tag {name}{' ' if body else ''}{body})")
    for name, e in sorted(S.consts.items()):
        lines.append(f"(const {name} {O.format_element(t, e)})")
    return "\n".join(lines) + "\n"


def read_params(text: str, carrier) -> list:
    """A list of element literals, e.g. ``(at 0 1/2) (at 1 0)``."""
    try:
        return [O.parse_element(x, carrier) for x in read_all(text)]
    except FormulaSyntaxError as e:
        raise FileFormatError(str(e), position=e.position) from None


# tree output ---------------------------------------------------------------------------------

TREE_SCHEMA = {
    "type": "object",
    "required": ["command", "ok"],
    "properties": {
        "command": {"type": "string"},
        "ok": {"type": "boolean"},
        "seed": {"type": ["integer", "null"]},
        "result": {},
    },
}


def dump_tree(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_tree(text: str):
    return json.loads(text)
