"""JSON game definitions.

A document looks like::

    {
      "name": "grover-n2",
      "qubits": 2,
      "ancilla": true,
      "initial_state": 0,
      "turns": [
        {"player": "Q", "moves": [{"tensor": ["Hn", "HX"]}]},
        {"player": "P", "moves": "oracle:delta:a"},
        {"player": "Q", "moves": ["grover_turn"]}
      ],
      "repeat_block": {"from_turn": 1, "count": 1},
      "projector": {"target_register": "a"}
    }

Move tokens: ``H``, ``X``, ``I``, ``HX`` (H after sigma_x), ``I:<d>``,
``Hn`` (H on every register qubit), ``grover_turn``, ``oracle:delta:<a>``,
``oracle:dot:<bits>``, ``perm:[...]``, plus the composites
``{"tensor": [...]}``, ``{"compose": [...]}`` (first element acts first) and
``{"unitary": [[[re, im], ...], ...]}``.  On a Picard turn,
``oracle:delta:a`` / ``oracle:dot:a`` stands for the oracle answering for
the hidden number.  ``repeat_block`` repeats ``turns[from_turn:]`` until it
occurs ``count`` times in all.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import gates
from .engine import PQGame, RegisterTarget
from .errors import DomainError, GameFileError
from .qstate import Projector, StateVector, basis_state


class _Context:
    def __init__(self, qubits: int | None, ancilla: bool, dim: int):
        self.qubits = qubits
        self.ancilla = ancilla
        self.dim = dim


def _fail(msg, loc):
    raise GameFileError(msg, loc)


def build_move(token, ctx: _Context, loc: str = "move") -> gates.Move:
    """Construct a move from its vocabulary token."""
    if isinstance(token, dict):
        if len(token) != 1:
            _fail("composite move must have exactly one key", loc)
        (key, value), = token.items()
        if key in ("tensor", "compose"):
            if not isinstance(value, list) or not value:
                _fail(f"{key!r} needs a non-empty list", loc)
            parts = [build_move(t, ctx, f"{loc}.{key}[{i}]") for i, t in enumerate(value)]
            try:
                return gates.Move.kron(parts) if key == "tensor" else gates.Move.compose(parts)
            except DomainError as exc:
                _fail(str(exc), loc)
        if key == "unitary":
            try:
                m = np.array([[complex(re, im) for re, im in row] for row in value])
                return gates.Move.unitary(m, label="U", token={"unitary": value})
            except (TypeError, ValueError) as exc:
                _fail(f"bad unitary payload: {exc}", loc)
        _fail(f"unknown composite {key!r}", loc)
    if not isinstance(token, str):
        _fail(f"move must be a string or object, got {token!r}", loc)
    simple = {
        "H": gates.hadamard,
        "X": gates.pauli_x,
        "I": lambda: gates.identity(2),
        "HX": gates.hadamard_pauli_x,
    }
    if token in simple:
        return simple[token]()
    try:
        if token.startswith("I:"):
            return gates.identity(int(token[2:]))
        if token.startswith("perm:"):
            perm = json.loads(token[5:])
            if not isinstance(perm, list):
                _fail("perm payload must be a list", loc)
            return gates.Move.permutation(perm, label=f"perm{len(perm)}")
        if token in ("Hn", "grover_turn") or token.startswith("oracle:"):
            n = ctx.qubits
            if n is None:
                _fail(f"{token!r} needs a qubit count", loc)
            if token == "Hn":
                return gates.hadamard_n(n)
            if not ctx.ancilla:
                _fail(f"{token!r} needs an ancilla qubit", loc)
            if token == "grover_turn":
                return gates.grover_turn(n)
            parts = token.split(":")
            if len(parts) != 3:
                _fail(f"malformed oracle token {token!r}", loc)
            _, kind, arg = parts
            if arg == "a":
                _fail("the hidden-parameter oracle is only allowed as a whole Picard turn", loc)
            if kind == "delta":
                return gates.cached_delta_move(int(arg), n)
            if kind == "dot":
                return gates.cached_dot_move(gates.parse_bits(arg, n))
            _fail(f"unknown oracle kind {kind!r}", loc)
    except GameFileError:
        raise
    except (ValueError, DomainError) as exc:
        _fail(str(exc), loc)
    _fail(f"unknown move token {token!r}", loc)


def _initial_state(raw, fac, loc):
    if isinstance(raw, bool):
        _fail("initial_state must be an index or amplitude list", loc)
    if isinstance(raw, int):
        try:
            return basis_state(fac, raw)
        except DomainError as exc:
            _fail(str(exc), loc)
    if isinstance(raw, list):
        try:
            amps = np.array([complex(re, im) for re, im in raw])
            return StateVector(amps, fac)
        except (TypeError, ValueError) as exc:
            _fail(f"amplitudes must be [re, im] pairs: {exc}", loc)
        except DomainError as exc:
            _fail(str(exc), loc)
    _fail("initial_state must be a basis index or a list of [re, im] pairs", loc)


def game_from_dict(doc: dict) -> PQGame:
    if not isinstance(doc, dict):
        _fail("document must be a JSON object", "$")
    name = doc.get("name", "game")
    if not isinstance(name, str):
        _fail("name must be a string", "name")
    qubits = doc.get("qubits")
    ancilla = doc.get("ancilla", False)
    if not isinstance(ancilla, bool):
        _fail("ancilla must be true or false", "ancilla")
    if qubits is not None:
        if isinstance(qubits, bool) or not isinstance(qubits, int) or qubits < 1:
            _fail("qubits must be a positive integer", "qubits")
        fac = (2,) * (qubits + int(ancilla))
        register = tuple(range(qubits))
    elif "dimension" in doc:
        d = doc["dimension"]
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            _fail("dimension must be a positive integer", "dimension")
        if ancilla:
            _fail("ancilla requires a qubit count", "ancilla")
        fac = (d,)
        register = None
    else:
        _fail("one of qubits or dimension is required", "$")
    ctx = _Context(qubits, ancilla, math.prod(fac))
    if "initial_state" not in doc:
        _fail("missing field", "initial_state")
    psi0 = _initial_state(doc["initial_state"], fac, "initial_state")

    turns = doc.get("turns")
    if not isinstance(turns, list) or not turns:
        _fail("turns must be a non-empty list", "turns")
    sequence = list(enumerate(turns))
    block = doc.get("repeat_block")
    if block is not None:
        if not isinstance(block, dict) or set(block) != {"from_turn", "count"}:
            _fail("repeat_block needs exactly from_turn and count", "repeat_block")
        start, count = block["from_turn"], block["count"]
        if not isinstance(start, int) or not 0 <= start < len(turns):
            _fail("from_turn out of range", "repeat_block.from_turn")
        if not isinstance(count, int) or count < 1:
            _fail("count must be a positive integer", "repeat_block.count")
        sequence = sequence[:start] + sequence[start:] * count

    q_sets, p_sets = [], []
    for pos, (i, turn) in enumerate(sequence):
        loc = f"turns[{i}]"
        if not isinstance(turn, dict) or "player" not in turn or "moves" not in turn:
            _fail("turn needs player and moves", loc)
        player = turn["player"]
        expected = "Q" if pos % 2 == 0 else "P"
        if player != expected:
            _fail(f"expected a {expected} turn (turns alternate Q, P, ..., P, Q), got {player!r}", loc)
        moves = turn["moves"]
        if player == "P" and isinstance(moves, str) and moves.startswith("oracle:") and moves.endswith(":a"):
            kind = moves.split(":")[1]
            if qubits is None or not ancilla:
                _fail("hidden-parameter oracles need qubits and an ancilla", f"{loc}.moves")
            try:
                p_sets.append(gates.OracleFamily(kind, qubits))
            except DomainError as exc:
                _fail(str(exc), f"{loc}.moves")
            continue
        if isinstance(moves, (str, dict)):
            moves = [moves]
        if not isinstance(moves, list) or not moves:
            _fail("moves must be a non-empty list", f"{loc}.moves")
        built = []
        for j, tok in enumerate(moves):
            m = build_move(tok, ctx, f"{loc}.moves[{j}]")
            if m.dim != ctx.dim:
                _fail(f"move has dimension {m.dim}, game has {ctx.dim}", f"{loc}.moves[{j}]")
            if player == "P" and not m.is_permutation:
                _fail("Picard's moves must be permutations", f"{loc}.moves[{j}]")
            built.append(m)
        (q_sets if player == "Q" else p_sets).append(tuple(built))
    if len(sequence) % 2 == 0:
        _fail("the last turn must be Q's", "turns")

    proj = doc.get("projector")
    if not isinstance(proj, dict) or len(proj) != 1:
        _fail("projector must be {\"basis\": [...]} or {\"target_register\": \"a\"}", "projector")
    if "basis" in proj:
        idx = proj["basis"]
        if not isinstance(idx, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in idx):
            _fail("basis must be a list of integers", "projector.basis")
        try:
            win = Projector.onto_basis(ctx.dim, idx)
        except DomainError as exc:
            _fail(str(exc), "projector.basis")
    elif proj.get("target_register") == "a":
        if qubits is None:
            _fail("target_register needs a qubit count", "projector")
        win = RegisterTarget(fac, qubits)
    else:
        _fail("unknown projector form", "projector")
    try:
        return PQGame(psi0, tuple(q_sets), tuple(p_sets), win, register=register, name=name)
    except DomainError as exc:
        _fail(str(exc), "$")


def loads(text: str) -> PQGame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFileError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return game_from_dict(doc)


def load(path) -> PQGame:
    return loads(Path(path).read_text(encoding="utf-8"))


# -- export -------------------------------------------------------------------


def _token(m: gates.Move):
    if m.token is not None:
        return m.token
    mat = m.matrix
    return {"unitary": [[[float(z.real), float(z.imag)] for z in row] for row in mat]}


def _turn_dict(player, moves):
    if isinstance(moves, gates.OracleFamily):
        return {"player": player, "moves": moves.token}
    return {"player": player, "moves": [_token(m) for m in moves]}


def game_to_dict(g: PQGame) -> dict:
    fac = g.factorization
    reg = g.register
    doc: dict = {"name": g.name}
    if all(f == 2 for f in fac) and reg == tuple(range(len(reg))) and len(fac) - len(reg) in (0, 1):
        doc["qubits"] = len(reg)
        if len(fac) > len(reg):
            doc["ancilla"] = True
    elif len(fac) == 1:
        doc["dimension"] = fac[0]
    else:
        raise DomainError(f"factorization {fac} has no game-file form")
    amps = g.initial_state.amplitudes
    nz = np.flatnonzero(amps)
    if nz.size == 1 and amps[nz[0]] == 1.0:
        doc["initial_state"] = int(nz[0])
    else:
        doc["initial_state"] = [[float(z.real), float(z.imag)] for z in amps]

    turns = [_turn_dict("Q", g.q_move_sets[0])]
    for i in range(g.k):
        turns.append(_turn_dict("P", g.p_move_sets[i]))
        turns.append(_turn_dict("Q", g.q_move_sets[i + 1]))
    pairs = [json.dumps(turns[1 + 2 * i: 3 + 2 * i], sort_keys=True) for i in range(g.k)]
    if g.k > 1 and len(set(pairs)) == 1:
        doc["turns"] = turns[:3]
        doc["repeat_block"] = {"from_turn": 1, "count": g.k}
    else:
        doc["turns"] = turns

    w = g.win_condition
    if isinstance(w, RegisterTarget):
        doc["projector"] = {"target_register": "a"}
    elif w.indices is not None:
        doc["projector"] = {"basis": [int(i) for i in w.indices]}
    else:
        raise DomainError("dense projectors have no game-file form")
    return doc


def dumps(g: PQGame) -> str:
    return json.dumps(game_to_dict(g), indent=2) + "\n"
