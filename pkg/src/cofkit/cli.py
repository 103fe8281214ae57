"""Command-line entry point.

Exit status: 0 on success, 1 when a checked property fails, 2 on bad input.
Every flag can also be set through an environment variable ``COFKIT_<FLAG>``
(for example ``COFKIT_SEED=7``); explicit flags win.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import orders as O
from .errors import CofkitError, InputError
from .files import dump_tree, read_params, read_structure, read_theory, write_theory
from .formulas import MODES, STANDARD, to_text
from .structures import FiniteStructure, Surrogate

ENV_PREFIX = "COFKIT_"


@dataclass
class RunConfig:
    command: str
    mode: str = STANDARD
    mode_given: bool = False
    surrogate: Optional[Surrogate] = None
    budget: Optional[int] = None
    rounds: int = 6
    plays: int = 1000
    seed: int = 0
    instances: int = 500
    fmt: str = "text"

    def budget_value(self, default: int) -> int:
        return self.budget if self.budget is not None else default


def _env(name, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    return default if raw is None else cast(raw)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}", path=path) from None


def _theory(path, cfg):
    return read_theory(_read(path), cfg.mode if cfg.mode_given else None, path=path)


class Output:
    def __init__(self, cfg, command, seed=None):
        self.cfg = cfg
        self.lines = []
        self.tree = {"command": command, "ok": True, "seed": seed, "result": {}}

    def line(self, text=""):
        self.lines.append(text)

    def set(self, key, value):
        self.tree["result"][key] = value

    def fail(self):
        self.tree["ok"] = False

    def render(self) -> str:
        if self.cfg.fmt == "tree":
            return dump_tree(self.tree)
        return "\n".join(self.lines) + ("\n" if self.lines else "")


# commands -----------------------------------------------------------------------------------


def cmd_parse(args, cfg, out):
    T = _theory(args.theory, cfg)
    text = write_theory(T)
    out.line(text.rstrip("\n"))
    out.set("mode", T.mode)
    out.set("theory", text)
    out.set("sentences", [to_text(s) for s in T.sentences])


def cmd_morleyize(args, cfg, out):
    from .morleyization import morleyize, roundtrip_ok

    T = _theory(args.theory, cfg)
    res = morleyize(T)
    text = write_theory(res.t_plus, header=[f"tags: {len(res.rows)}"])
    table = res.table()
    out.set("theory", text)
    out.set("table", table)
    out.set("roundtrip", roundtrip_ok(T, res))
    out.line(text.rstrip("\n"))
    if args.emit_table == "json":
        import json

        out.line(json.dumps(table, indent=2, sort_keys=True))
    else:
        for r in table:
            out.line(f"; {r['alias']} = {r['tag']}/{r['arity']}: {r['formula']}")


def cmd_skolemize(args, cfg, out):
    from .skolemization import skolemize_theory

    T = _theory(args.theory, cfg)
    res = skolemize_theory(T, budget=cfg.budget_value(8), materialized=args.materialize)
    header = [f"universal: {'true' if res.universal else 'false'}"]
    if res.truncated:
        header.append(f"truncated: index ranges cut at {cfg.budget_value(8)}")
    text = write_theory(res.theory, header=header)
    out.line(text.rstrip("\n"))
    out.set("theory", text)
    out.set("universal", res.universal)
    out.set("truncated", res.truncated)
    registry = [
        {"name": s.name, "kind": s.kind, "arity": s.arity, "indexed": s.indexed, "source": s.source, "origin": s.origin}
        for s in sorted(res.registry.values(), key=lambda s: s.name)
    ]
    out.set("registry", registry)
    if args.emit_registry:
        for r in registry:
            out.line(f"; {r['name']} {r['kind']}/{r['arity']}{' indexed' if r['indexed'] else ''} "
                     f"from {r['source']}: {r['origin']}")
    if not res.universal:
        out.fail()


def cmd_eval(args, cfg, out):
    """Truth of each sentence; symbols the structure leaves open are searched for."""
    from .analysis import is_universal
    from .expansion import expansion_exists
    from .finite_eval import SchemaContext, eval_finite
    from .formulas import FUNCTION, And
    from .order_eval import eval_order

    T = _theory(args.theory, cfg)
    S = read_structure(_read(args.structure), path=args.structure, vocab=T.vocab)
    universal = all(is_universal(s) for s in T.sentences)
    out.line(f"universal: {'true' if universal else 'false'}")
    out.set("universal", universal)
    budget = cfg.budget_value(64)
    open_syms = []
    if isinstance(S, FiniteStructure):
        given = {name for name, _ in S.functions}
        open_syms = [n for n, s in T.vocab.items() if s.kind == FUNCTION and n not in given]
    if open_syms:
        ctx = SchemaContext(cfg.surrogate, budget)
        found = expansion_exists(S, And(tuple(T.sentences)), open_syms, ctx)
        model = found is not None
        out.line(f"open symbols: {' '.join(open_syms)}")
        out.line(f"expansion found: {'true' if model else 'false'}")
        out.set("open_symbols", open_syms)
        out.set("sentences", [])
    else:
        results = []
        for s in T.sentences:
            if isinstance(S, FiniteStructure):
                v = eval_finite(S, s, surrogate=cfg.surrogate, budget=budget)
            else:
                v = eval_order(S, s)
            results.append({"sentence": to_text(s), "value": v})
            out.line(f"{'true ' if v else 'false'} {to_text(s)}")
        model = all(r["value"] for r in results)
        out.set("sentences", results)
    if not T.sentences:
        out.line("empty theory: every structure is a model")
    out.line(f"model: {'true' if model else 'false'}")
    if cfg.surrogate is not None:
        out.line(f"surrogate: {cfg.surrogate}")
    out.set("model", model)
    if not model:
        out.fail()


def cmd_check_embedding(args, cfg, out):
    from .aec import strong_sub
    from .embeddings import infer_inclusion
    from .morleyization import morleyize

    res = morleyize(_theory(args.theory, cfg)) if args.theory else None
    vocab = res.vocab if res is not None else None
    M = read_structure(_read(args.source), path=args.source, vocab=vocab)
    N = read_structure(_read(args.target), path=args.target, vocab=vocab)
    if res is not None:
        M, N = _resolve_aliases(M, res), _resolve_aliases(N, res)
    emb = infer_inclusion(M, N)
    params = None
    if args.params:
        params = read_params(_read(args.params), M.carrier)
    v = strong_sub(M, N, emb, res, params=params)
    out.line(f"inclusion: {emb.name}")
    out.line(f"strong substructure: {v.describe()}")
    out.set("inclusion", emb.name)
    out.set("holds", v.holds)
    out.set("exact", v.exact)
    out.set("checks", v.checked)
    out.set("witness", None if v.witness is None else [str(w) for w in v.witness])
    if not v.holds:
        out.fail()


def _resolve_aliases(S, res):
    """Tag entries may use the short aliases ``R0, R1, ...``."""
    if isinstance(S, FiniteStructure):
        return S
    names = {r.alias: r.name for r in res.rows.values()}
    if not any(k in names for k in S.tags):
        return S
    from .structures import OrderStructure

    tags = {k: v for k, v in S.tags.items() if k not in names and v}
    tags.update({names[k]: v for k, v in S.tags.items() if k in names})
    vocab = res.vocab
    for n in S.vocab:
        if n not in vocab and n not in names:
            sym = S.vocab[n]
            vocab = vocab.add(n, sym.kind, sym.arity, sym.indexed)
    return OrderStructure(vocab, S.carrier, S.preds, tags, S.consts)


def cmd_aec_suite(args, cfg, out):
    from .aec import campaign

    T = _theory(args.theory, cfg) if args.theory else None
    rep = campaign(cfg.seed, cfg.instances, T)
    for line in rep.lines():
        out.line(line)
    out.set("instances", rep.instances)
    out.set("table", rep.table())
    out.set("counterexamples", [{"property": p, "instance": d} for p, d in rep.counterexamples])
    if not rep.ok:
        out.fail()


def cmd_ef_game(args, cfg, out):
    from .efgames import Outcome, ef_decide

    A, B = O.parse_term(args.left), O.parse_term(args.right)
    r = ef_decide(A, B, cfg.rounds, cfg.plays, cfg.seed)
    out.line(f"{O.format_term(A)} vs {O.format_term(B)}")
    out.line(r.line())
    out.set("outcome", r.outcome.value)
    out.set("rounds", r.rounds)
    out.set("method", r.method)
    out.set("plays", r.plays)
    out.set("losses", r.losses)
    if r.outcome == Outcome.UNDECIDED and r.losses:
        out.fail()


def cmd_demo(args, cfg, out):
    from .aec import cofinality_theory, fin_chain, insertion_chain, run_chain, tagged_end_chain
    from .efgames import separation_report
    from .morleyization import morleyize
    from .skolemization import skolemize_theory

    ok = True
    out.line("== separation of (Q,<) from Q x k1 ==")
    sep = separation_report(O.Q, O.LexProd(O.Q, O.NamedRegular(1)), cfg.rounds, cfg.plays, cfg.seed)
    out.lines += sep.lines()
    ok &= sep.separated_by_qcof and sep.ef_equivalent
    out.set("separation", {
        "qcof": [sep.qcof_left, sep.qcof_right],
        "games": [{"rounds": g.rounds, "outcome": g.outcome.value, "plays": g.plays, "losses": g.losses}
                  for g in sep.games],
    })

    out.line("")
    out.line("== cofinality under unions of chains ==")
    chains = {}
    fc = run_chain(fin_chain(), check_steps=False)
    out.lines += fc.lines()
    ok &= fc.union_cofinality == O.OMEGA_COF
    neg = run_chain(tagged_end_chain())
    out.lines += neg.lines()
    ok &= not neg.union_ok and not neg.steps_ok
    pos = run_chain(insertion_chain())
    out.lines += pos.lines()
    ok &= pos.smooth
    for key, r in (("fin", fc), ("tagged_end", neg), ("insertion", pos)):
        chains[key] = {"union": O.format_term(r.union.carrier), "cofinality": str(r.union_cofinality),
                       "tag_axioms": r.union_ok, "steps_strong": r.steps_ok}
    out.set("chains", chains)

    out.line("")
    out.line("== morleyize and skolemize T = {QCof(w; x<y)} ==")
    T = cofinality_theory()
    res = morleyize(T)
    sk = skolemize_theory(T)
    out.lines += write_theory(res.t_plus).rstrip("\n").split("\n")
    out.lines += write_theory(sk.theory, header=[f"universal: {'true' if sk.universal else 'false'}"]).rstrip("\n").split("\n")
    ok &= sk.universal
    out.set("pipeline", {"tags": res.table(), "universal": sk.universal, "symbols": len(sk.registry)})
    if not ok:
        out.fail()


COMMANDS = {
    "parse": cmd_parse,
    "morleyize": cmd_morleyize,
    "skolemize": cmd_skolemize,
    "eval": cmd_eval,
    "check-embedding": cmd_check_embedding,
    "aec-suite": cmd_aec_suite,
    "ef-game": cmd_ef_game,
    "demo": cmd_demo,
}

RANDOMIZED = {"aec-suite", "ef-game", "demo"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES, default=None,
                        help="logic mode for theories (env COFKIT_MODE; default: the file's, else standard)")
    common.add_argument("--surrogate", default=_env("surrogate", None),
                        help="finite stand-ins for infinite cardinals, e.g. aleph0=3,k1=5 (env COFKIT_SURROGATE)")
    common.add_argument("--budget", type=int, default=_env("budget", None, int),
                        help="schema instantiation budget (env COFKIT_BUDGET)")
    common.add_argument("--rounds", type=int, default=_env("rounds", 6, int), help="EF rounds (env COFKIT_ROUNDS)")
    common.add_argument("--plays", type=int, default=_env("plays", 1000, int),
                        help="random EF plays per decision (env COFKIT_PLAYS)")
    common.add_argument("--seed", type=int, default=_env("seed", 0, int), help="random seed (env COFKIT_SEED)")
    common.add_argument("--format", dest="fmt", choices=("text", "tree"), default=_env("format", "text"),
                        help="text report or JSON tree (env COFKIT_FORMAT)")

    p = argparse.ArgumentParser(prog="cofkit", description=__doc__.split("\n")[0],
                                epilog="Exit status: 0 success, 1 property violation, 2 input error.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse a theory file and print it normalized")
    s.add_argument("theory")

    s = sub.add_parser("morleyize", parents=[common], help="tag generalized quantifiers; print T+ and the tag table")
    s.add_argument("theory")
    s.add_argument("--emit-table", choices=("json", "text"), default="text")

    s = sub.add_parser("skolemize", parents=[common], help="produce the universal theory")
    s.add_argument("theory")
    s.add_argument("--emit-registry", action="store_true", help="list the new function symbols")
    s.add_argument("--materialize", action="store_true", help="unfold index ranges up to --budget")

    s = sub.add_parser("eval", parents=[common], help="evaluate a theory in a structure")
    s.add_argument("theory")
    s.add_argument("structure")

    s = sub.add_parser("check-embedding", parents=[common], help="decide whether M is a strong substructure of N")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--theory")
    s.add_argument("--params", help="file of element literals of M used for the elementarity spot check")

    s = sub.add_parser("aec-suite", parents=[common], help="seeded campaign over the class axioms")
    s.add_argument("--theory", help="theory over < for the order-side instances")
    s.add_argument("--instances", type=int, default=_env("instances", 500, int))

    s = sub.add_parser("ef-game", parents=[common], help="decide an Ehrenfeucht-Fraisse game on two order terms")
    s.add_argument("left")
    s.add_argument("right")

    sub.add_parser("demo", parents=[common], help="QCof separation, chain unions and the full pipeline")
    return p


def make_config(ns) -> RunConfig:
    mode = ns.mode or _env("mode", None)
    if mode is not None and mode not in MODES:
        raise InputError(f"unknown logic mode {mode!r}")
    if ns.budget is not None and ns.budget < 1:
        raise InputError("budget must be positive")
    if ns.plays < 1 or ns.rounds < 0:
        raise InputError("plays must be positive and rounds non-negative")
    try:
        surrogate = Surrogate.parse(ns.surrogate) if ns.surrogate else None
    except ValueError as e:
        raise InputError(f"bad surrogate map: {e}") from None
    return RunConfig(ns.command, mode=mode or STANDARD, mode_given=mode is not None, surrogate=surrogate,
                     budget=ns.budget, rounds=ns.rounds, plays=ns.plays, seed=ns.seed,
                     instances=getattr(ns, "instances", 500), fmt=ns.fmt)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = make_config(ns)
        out = Output(cfg, ns.command, cfg.seed if ns.command in RANDOMIZED else None)
        if ns.command in RANDOMIZED and cfg.fmt == "text":
            out.line(f"# cofkit {ns.command} seed={cfg.seed}")
        COMMANDS[ns.command](ns, cfg, out)
    except CofkitError as e:
        diag = e.diagnostic()
        sys.stderr.write(dump_tree({"error": diag}))
        return 2
    sys.stdout.write(out.render())
    return 0 if out.tree["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
