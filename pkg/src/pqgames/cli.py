"""Command-line interface: ``pqgames run|trace|solve|bench|play|export``.

Exit codes follow sysexits: 0 success, 2 malformed game file, 64 usage
error, 70 strategy space too large, 74 I/O failure.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from pathlib import Path

import numpy as np

from . import catalog, entanglement, gamefile, gates
from .engine import (
    ClassicalMixedStrategy,
    ClassicalPureStrategy,
    QuantumStrategy,
    enumerate_payoff_matrix,
    evolve_pure,
    solve_zero_sum,
    win_probability,
)
from .errors import DomainError, GameFileError, ResourceError
from .qstate import sample_basis, sample_outcome
from .rng import SplitMix64

EX_OK = 0
EX_DATAERR_FILE = 2
EX_USAGE = 64
EX_SOFTWARE = 70
EX_IOERR = 74

SEED_ENV = "PQGAME_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def fmt_prob(p: float) -> str:
    return f"{p:.12f}"


def fmt_num(x: float) -> str:
    return f"{x:.12g}"


def resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def parse_a(text: str, n: int) -> int:
    """Bit string (``0b...``, or exactly n binary digits) or decimal integer."""
    try:
        if text.startswith("0b"):
            a = int(text[2:], 2)
        elif len(text) == n and set(text) <= {"0", "1"}:
            a = gates.bits_to_int(gates.parse_bits(text, n))
        else:
            a = int(text)
    except (ValueError, DomainError):
        raise UsageError(f"--a {text!r} is neither a bit string of length {n} nor an integer") from None
    if not 0 <= a < (1 << n):
        raise UsageError(f"--a {a} out of range for n={n}")
    return a


# -- game selection -------------------------------------------------------------


class Selected:
    """A resolved game: the PQ game plus the strategies and hidden parameter to play."""

    def __init__(self, name, game, q, p, a=None, meta=None):
        self.name = name
        self.game = game
        self.q = q
        self.p = p
        self.a = a
        self.meta = meta or {}


def _pick(moves, item: str, where: str):
    item = item.strip()
    if item.isdigit():
        idx = int(item)
        if idx >= len(moves):
            raise UsageError(f"{where}: index {idx} out of range")
        return moves[idx]
    for m in moves:
        if m.label == item or m.token == item:
            return m
    raise UsageError(f"{where}: no move named {item!r}")


def _q_strategy(game, flag, default):
    if flag is None:
        return default
    items = flag.split(",")
    if len(items) != len(game.q_move_sets):
        raise UsageError(f"--q needs {len(game.q_move_sets)} comma-separated moves")
    return QuantumStrategy(tuple(_pick(s, it, f"--q turn {i + 1}") for i, (s, it) in enumerate(zip(game.q_move_sets, items))))


def _penny_picard(game, flag):
    i, x = game.p_move_sets[0]
    if flag in (None, "uniform"):
        return ClassicalMixedStrategy.uniform(game)
    if flag == "flip":
        return ClassicalPureStrategy((x,))
    if flag == "stay":
        return ClassicalPureStrategy((i,))
    if flag.startswith("p="):
        try:
            pf = float(flag[2:])
        except ValueError:
            raise UsageError(f"bad --picard {flag!r}") from None
        if not 0.0 <= pf <= 1.0:
            raise UsageError("--picard p=<flip probability> must lie in [0, 1]")
        return ClassicalMixedStrategy.from_weights(game, [[1.0 - pf, pf]])
    raise UsageError("--picard must be flip, stay, uniform or p=<flip probability>")


def _file_picard(game, flag):
    if flag == "uniform":
        return ClassicalMixedStrategy.uniform(game)
    items = [None] * game.k if flag is None else flag.split(",")
    if len(items) != game.k:
        raise UsageError(f"--picard needs {game.k} comma-separated moves")
    moves = []
    for i, (s, it) in enumerate(zip(game.p_move_sets, items)):
        if isinstance(s, gates.OracleFamily):
            moves.append(None)
        elif it is None:
            moves.append(s[0])
        else:
            moves.append(_pick(s, it, f"--picard turn {i + 1}"))
    return ClassicalPureStrategy(tuple(moves))


def select(args, seed, pure_only=False) -> Selected:
    sel = args.game
    n = getattr(args, "n", None)
    a_text = getattr(args, "a", None)
    picard = getattr(args, "picard", None)
    if sel == "penny":
        inst = catalog.penny_flip()
        if pure_only and picard in (None, "uniform"):
            picard = "flip"
        p = _penny_picard(inst.game, picard)
        if pure_only and isinstance(p, ClassicalMixedStrategy):
            raise UsageError("this command needs a pure Picard strategy (flip or stay)")
        return Selected("penny", inst.game, _q_strategy(inst.game, getattr(args, "q", None), inst.q_reference), p)
    if sel in ("grover", "bv", "guess"):
        n = 3 if n is None else n
        if not 1 <= n <= catalog.MAX_QUBITS:
            raise UsageError(f"--n must lie in [1, {catalog.MAX_QUBITS}]")
        a = parse_a(a_text, n) if a_text is not None else SplitMix64(seed).next_below(1 << n)
        if sel == "grover":
            inst = catalog.grover_game(n, a)
        elif sel == "bv":
            inst = catalog.bv_game(n, a)
        else:
            inst = catalog.classical_guess_game(n)
        meta = {"n": n, "a": gates.int_to_bits(a, n), "k": inst.k}
        q = _q_strategy(inst.game, getattr(args, "q", None), inst.q_reference)
        return Selected(sel, inst.game, q, inst.picard_reference, a, meta)
    if sel.startswith("file:"):
        path = sel[5:]
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot read {path}: {exc.strerror}") from None
        game = gamefile.loads(text)
        q = _q_strategy(game, getattr(args, "q", None), QuantumStrategy(tuple(s[0] for s in game.q_move_sets)))
        p = _file_picard(game, picard)
        if pure_only and isinstance(p, ClassicalMixedStrategy):
            raise UsageError("this command needs a pure Picard strategy")
        a = None
        meta = {}
        if game.is_parameterized:
            n_reg = game.hidden_params.stop.bit_length() - 1
            a = parse_a(a_text, n_reg) if a_text is not None else SplitMix64(seed).next_below(len(game.hidden_params))
            meta = {"a": gates.int_to_bits(a, n_reg) if n_reg else str(a)}
        return Selected(game.name, game, q, p, a, meta)
    raise UsageError(f"unknown game {sel!r} (expected penny, grover, bv, guess or file:PATH)")


# -- commands ---------------------------------------------------------------


def cmd_run(args, out) -> int:
    seed = resolve_seed(args.seed)
    s = select(args, seed)
    prob = win_probability(s.game, s.q, s.p, s.a)
    print(f"game {s.name}", file=out)
    for key, value in s.meta.items():
        print(f"{key} {value}", file=out)
    print(f"win_probability {fmt_prob(prob)}", file=out)
    print(f"queries {s.game.k}", file=out)
    if args.sample:
        if isinstance(s.p, ClassicalMixedStrategy):
            outcome = "win" if SplitMix64(seed).next_float() < prob else "lose"
        else:
            final = evolve_pure(s.game, s.q, s.p, s.a).final_state
            outcome = sample_outcome(final, s.game.projector(s.a), seed)
        print(f"outcome {outcome}", file=out)
        print(f"seed {seed}", file=out)
    return EX_OK


def trace_csv(game, transcript, tol) -> str:
    tr = entanglement.trace_transcript(transcript, tol)
    buf = io.StringIO()
    buf.write("step,label,norm,global_entanglement,is_product\n")
    for r in tr.rows:
        label = r.label.replace(",", ";")
        buf.write(f"{r.step},{label},{r.norm:.9f},{r.global_entanglement:.9f},{'true' if r.is_product else 'false'}\n")
    return buf.getvalue()


def cmd_trace(args, out) -> int:
    seed = resolve_seed(args.seed)
    s = select(args, seed, pure_only=True)
    t = evolve_pure(s.game, s.q, s.p, s.a)
    text = trace_csv(s.game, t, args.tol if args.tol is not None else entanglement.PRODUCT_TOL)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        out.write(text)
    return EX_OK


def cmd_solve(args, out) -> int:
    seed = resolve_seed(args.seed)
    s = select(args, seed)
    m = enumerate_payoff_matrix(s.game, classical_q=not args.quantum)
    eps = args.tol if args.tol is not None else 1e-6
    eq = solve_zero_sum(m, eps)

    def mixture(labels, weights):
        return " ".join(f"{lab}={fmt_num(w)}" for lab, w in zip(labels, weights) if w > 0)

    print(f"game {s.name}", file=out)
    print(f"matrix {m.shape[0]}x{m.shape[1]}", file=out)
    print(f"value {fmt_num(eq.value)}", file=out)
    print(f"q_mixture {mixture(m.row_labels, eq.row_mixture)}", file=out)
    print(f"picard_mixture {mixture(m.col_labels, eq.col_mixture)}", file=out)
    print(f"exploitability {fmt_num(eq.exploitability)}", file=out)
    print(f"method {eq.method}", file=out)
    return EX_OK


def cmd_bench(args, out) -> int:
    seed = resolve_seed(args.seed)
    n = args.n if args.n is not None else 8
    if not 1 <= n <= catalog.MAX_QUBITS:
        raise UsageError(f"--n must lie in [1, {catalog.MAX_QUBITS}]")
    if args.trials is not None and args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.baseline == "classical-guess":
        st = catalog.classical_guess_baseline(n, args.trials or 10_000, seed)
        lines = [
            ("baseline", "classical-guess"), ("n", n), ("N", st.N), ("trials", st.trials), ("seed", seed),
            ("mean_queries", fmt_num(st.mean)), ("stddev", fmt_num(st.stddev)), ("stderr", fmt_num(st.stderr)),
            ("exact_mean", fmt_num(st.exact_mean)), ("quantum_queries", st.quantum_queries),
        ]
    elif args.baseline == "classical-bv":
        trials = args.trials or 1
        rng = SplitMix64(seed)
        counts, recovered = [], True
        for _ in range(trials):
            a = parse_a(args.a, n) if args.a is not None else rng.next_below(1 << n)
            r = catalog.classical_bv_baseline(n, a)
            counts.append(r.queries)
            recovered &= r.recovered == gates.int_to_bits(a, n)
        c = np.array(counts, dtype=float)
        lines = [
            ("baseline", "classical-bv"), ("n", n), ("trials", trials), ("seed", seed),
            ("queries", fmt_num(c.mean())), ("stddev", fmt_num(c.std(ddof=1) if trials > 1 else 0.0)),
            ("recovered_all", "true" if recovered else "false"), ("quantum_queries", 1),
        ]
    else:
        raise UsageError(f"unknown baseline {args.baseline!r}")
    for key, value in lines:
        print(f"{key} {value}", file=out)
    return EX_OK


def cmd_export(args, out) -> int:
    seed = resolve_seed(args.seed)
    s = select(args, seed)
    text = gamefile.dumps(s.game)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        out.write(text)
    return EX_OK


# -- interactive play -----------------------------------------------------------


class _Session:
    def __init__(self, inp, out):
        self.inp = inp
        self.out = out

    def say(self, text=""):
        print(text, file=self.out)

    def ask(self, prompt, valid):
        """Prompt until ``valid`` accepts the answer; ``None`` on EOF."""
        while True:
            self.say(prompt)
            line = self.inp.readline()
            if not line:
                return None
            answer = line.strip()
            self.say(f"> {answer}")
            try:
                return valid(answer)
            except ValueError as exc:
                self.say(f"invalid input: {exc}")


def _play_penny(sess, master):
    inst = catalog.penny_flip()
    _, x = inst.game.p_move_sets[0]
    i = inst.game.p_move_sets[0][0]

    def choice(ans):
        if ans in ("flip", "f"):
            return x
        if ans in ("stay", "s", "no-flip"):
            return i
        raise ValueError("answer flip or stay")

    rnd = 0
    while True:
        rnd += 1
        sess.say(f"round {rnd}: the penny starts heads up; Q reaches into the box (H)")
        move = sess.ask("Picard, flip or stay?", choice)
        if move is None:
            return
        t = evolve_pure(inst.game, inst.q_reference, ClassicalPureStrategy((move,)))
        round_seed = master.next_u64()
        outcome = sample_outcome(t.final_state, inst.game.projector(), round_seed)
        sess.say("Q reaches into the box again (H); the box is opened")
        sess.say(f"round_seed {round_seed}")
        sess.say("outcome: Q wins" if outcome == "win" else "outcome: Picard wins")
        sess.say(f"exact win probability {fmt_prob(t.win_probability)}")
        if not _again(sess):
            return


def _again(sess):
    def yn(ans):
        if ans.lower() in ("y", "yes"):
            return True
        if ans.lower() in ("n", "no"):
            return False
        raise ValueError("answer y or n")

    return bool(sess.ask("play again? (y/n)", yn))


def _play_guess(sess, master, n):
    def oracle_type(ans):
        if ans in ("grover", "bv"):
            return ans
        raise ValueError("answer grover or bv")

    def secret(ans):
        try:
            return parse_a(ans, n)
        except UsageError as exc:
            raise ValueError(str(exc)) from None

    rnd = 0
    while True:
        rnd += 1
        sess.say(f"round {rnd}: pick a number between 0 and {(1 << n) - 1}")
        kind = sess.ask("oracle type? (grover/bv)", oracle_type)
        if kind is None:
            return
        a = sess.ask(f"Picard's secret a? ({n}-bit string or integer)", secret)
        if a is None:
            return
        inst = catalog.grover_game(n, a) if kind == "grover" else catalog.bv_game(n, a)
        t = inst.transcript()
        round_seed = master.next_u64()
        guess = sample_basis(t.final_state, round_seed) >> 1
        word = "query" if t.oracle_calls == 1 else "queries"
        sess.say(f"Q announces {gates.int_to_bits(guess, n)} after {t.oracle_calls} {word}")
        sess.say(f"round_seed {round_seed}")
        sess.say("outcome: Q wins" if guess == a else "outcome: Picard wins")
        sess.say(f"exact win probability {fmt_prob(t.win_probability)}")
        if not _again(sess):
            return


def cmd_play(args, out, inp) -> int:
    seed = resolve_seed(args.seed)
    sess = _Session(inp, out)
    master = SplitMix64(seed)
    if args.game == "penny":
        sess.say(f"PQ Penny Flip; you are Picard. seed {seed}")
        _play_penny(sess, master)
    elif args.game == "guess":
        n = args.n if args.n is not None else 3
        if not 1 <= n <= 12:
            raise UsageError("--n must lie in [1, 12] for interactive play")
        sess.say(f"PQ Guess a Number with n={n}; you are Picard. seed {seed}")
        _play_guess(sess, master, n)
    else:
        raise UsageError("play supports penny and guess")
    sess.say("session over")
    return EX_OK


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pqgames", description="Quantum-versus-classical PQ games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def game_args(p, picard=True):
        p.add_argument("game", help="penny | grover | bv | guess | file:PATH")
        p.add_argument("--n", type=int, help="register qubits (search games)")
        p.add_argument("--a", help="Picard's hidden number: integer or n-bit string")
        p.add_argument("--q", help="Q's moves, comma-separated labels or indices")
        if picard:
            p.add_argument("--picard", help="penny: flip|stay|uniform|p=P; files: comma-separated moves")
        p.add_argument("--seed", type=int, help=f"64-bit seed (default ${SEED_ENV} or 0)")

    p = sub.add_parser("run", help="evaluate a game and print Q's win probability")
    game_args(p)
    p.add_argument("--sample", action="store_true", help="also draw a seeded measurement outcome")

    p = sub.add_parser("trace", help="per-step entanglement trace as CSV")
    game_args(p)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--tol", type=float, help="product-state tolerance")

    p = sub.add_parser("solve", help="solve the classical restriction as a zero-sum matrix game")
    game_args(p, picard=False)
    p.add_argument("--quantum", action="store_true", help="keep Q's non-permutation moves in the enumeration")
    p.add_argument("--tol", type=float, help="exploitability target (default 1e-6)")

    p = sub.add_parser("bench", help="classical query-count baselines")
    p.add_argument("baseline", choices=["classical-guess", "classical-bv"])
    p.add_argument("--n", type=int)
    p.add_argument("--a")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("play", help="interactive text-mode session; you play Picard")
    p.add_argument("game", choices=["penny", "guess"])
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("export", help="write a game definition file")
    game_args(p, picard=False)
    p.add_argument("--out", help="JSON path (default stdout)")
    return parser


def main(argv=None, stdin=None, stdout=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "run": cmd_run,
        "trace": cmd_trace,
        "solve": cmd_solve,
        "bench": cmd_bench,
        "export": cmd_export,
    }
    try:
        if args.command == "play":
            return cmd_play(args, stdout, stdin)
        return handlers[args.command](args, stdout)
    except GameFileError as exc:
        print(f"pqgames: game file error: {exc}", file=sys.stderr)
        return EX_DATAERR_FILE
    except (UsageError, DomainError) as exc:
        print(f"pqgames: {exc}", file=sys.stderr)
        return EX_USAGE
    except ResourceError as exc:
        print(f"pqgames: {exc}", file=sys.stderr)
        return EX_SOFTWARE
    except OSError as exc:
        print(f"pqgames: {exc}", file=sys.stderr)
        return EX_IOERR


def run() -> None:
    sys.exit(main())
