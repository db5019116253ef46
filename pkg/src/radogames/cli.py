"""Command-line interface.

Subcommands: analyze, enumerate, mu, detect, solve, simulate, play.
Exit codes: 0 success, 2 parse error, 3 size cap exceeded, 4 illegal input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from radogames.engine import (
    BREAKER,
    MAKER,
    GameState,
    IllegalMoveError,
    MinimaxStrategy,
    apply_move,
    certify_winner,
    replay,
    solve_exact,
    winner_check,
)
from radogames.experiments import (
    ExperimentSpec,
    emit_report,
    frequency_table,
    render_report,
    run_threshold_sweep,
)
from radogames.hypergraphs import Board, Hypergraph, compute_mu, enumerate_solutions, sample_board
from radogames.matrices import (
    MatrixParseError,
    RadoSystem,
    SizeCapError,
    analyze_system,
    associated_pair,
    parse_system,
    progression_system,
    schur_system,
    sidon_system,
)
from radogames.strategies import (
    DecompositionBreaker,
    EsPotentialBreaker,
    GreedyMaker,
    PairingBreaker,
    RandomMaker,
    StrategyPreconditionError,
    TripleMaker,
    breaker_chain_pairing,
    breaker_power_pairing,
)
from radogames.structures import Decomposition, decompose_component

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_ILLEGAL = 4

NAMED_SYSTEMS = {
    "schur": schur_system,
    "ap3": lambda: progression_system(3),
    "ap4": lambda: progression_system(4),
    "sidon": sidon_system,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_system(args) -> tuple[RadoSystem, str]:
    if getattr(args, "system", None):
        name = args.system
        if name in NAMED_SYSTEMS:
            return NAMED_SYSTEMS[name](), name
        raise CliError(f"unknown system {name!r}; choose from {sorted(NAMED_SYSTEMS)}", EXIT_ILLEGAL)
    if getattr(args, "matrix_file", None):
        try:
            with open(args.matrix_file) as fh:
                return parse_system(fh.read()), os.path.basename(args.matrix_file)
        except FileNotFoundError:
            raise CliError(f"no such file: {args.matrix_file}", EXIT_PARSE) from None
        except MatrixParseError as exc:
            raise CliError(f"{args.matrix_file}: {exc}", EXIT_PARSE) from None
    raise CliError("provide --system or --matrix-file", EXIT_ILLEGAL)


def _load_board(args, seed: int) -> Board:
    if getattr(args, "board", None):
        try:
            members = [int(tok) for tok in args.board.replace(",", " ").split()]
        except ValueError:
            raise CliError("--board must list integers", EXIT_ILLEGAL) from None
        n = getattr(args, "n", None) or max(members, default=0)
        return Board.from_iterable(n, members)
    n = getattr(args, "n", None)
    if n is None:
        raise CliError("provide --n or --board", EXIT_ILLEGAL)
    p = getattr(args, "p", None)
    if p is None:
        return Board.full(n)
    return sample_board(n, p, seed)


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def cmd_analyze(args, out) -> int:
    system, name = _load_system(args)
    profile = analyze_system(system)
    print(f"system {name}: {system}", file=out)
    print(f"rank = {profile.rank}", file=out)
    if profile.irredundant_pair:
        print(f"pair irredundant: yes, witness {profile.pair_witness}", file=out)
    else:
        print(f"pair irredundant: no (searched up to {profile.search_bound})", file=out)
    if profile.irredundant_matrix:
        print(f"matrix irredundant: yes, witness {profile.matrix_witness}", file=out)
    else:
        print(f"matrix irredundant: no (searched up to {profile.search_bound})", file=out)
    print(f"abundant (no two-term row after elimination): {'yes' if profile.abundant else 'no'}", file=out)
    if not profile.irredundant_pair:
        print("pair not irredundant; trivially the blocker's win", file=out)
        return EXIT_OK
    if profile.density is not None:
        print(
            f"density m = {_fraction_str(profile.density)}, threshold exponent "
            f"{_fraction_str(profile.threshold_exponent)}",
            file=out,
        )
        if profile.strictly_balanced is not None:
            tag = "yes" if profile.strictly_balanced else f"no, violating W = {profile.violating_subset}"
            print(f"strictly balanced: {tag}", file=out)
        try:
            pair = associated_pair(system)
            print(f"reduced system: {pair.system} on columns {pair.column_map}", file=out)
        except Exception as exc:  # reduction is best-effort in the report
            print(f"reduced system: unavailable ({exc})", file=out)
    elif profile.irredundant_matrix:
        print("abundance fails; random-board threshold exponent -1/3 regime,", file=out)
        print("and the (1:2) biased game is the blocker's win", file=out)
    else:
        coeffs = [a for row in system.entries for a in row]
        if all(a > 0 for a in coeffs) or all(a < 0 for a in coeffs):
            print("matrix not irredundant (one-signed row): blocker wins at any vanishing p", file=out)
        else:
            print("matrix not irredundant: threshold exponent -1/3 regime", file=out)
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    system, _ = _load_system(args)
    board = _load_board(args, args.seed)
    h = enumerate_solutions(system, board)
    print(h.to_json(), file=out)
    return EXIT_OK


def cmd_mu(args, out) -> int:
    system, name = _load_system(args)
    result = compute_mu(system, args.n, mode=args.mode)
    print(f"mu({args.n}, {name}) = {result.mu}", file=out)
    print(f"witness = {list(result.witness)}", file=out)
    return EXIT_OK


def cmd_detect(args, out) -> int:
    if args.hypergraph:
        try:
            with open(args.hypergraph) as fh:
                h = Hypergraph.from_json(fh.read())
        except FileNotFoundError:
            raise CliError(f"no such file: {args.hypergraph}", EXIT_PARSE) from None
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise CliError(f"{args.hypergraph}: {exc}", EXIT_PARSE) from None
    else:
        system, _ = _load_system(args)
        h = enumerate_solutions(system, _load_board(args, args.seed))
    report = {"components": []}
    for cid in h.component_ids():
        entry = {
            "id": cid,
            "vertices": list(h.component_vertices(cid)),
            "edges": [list(e) for e in h.component_edges(cid)],
        }
        try:
            result = decompose_component(h, cid)
        except SizeCapError as exc:
            entry["error"] = str(exc)
        else:
            if isinstance(result, Decomposition):
                entry["case"] = result.case
                entry["order"] = [list(e) for e in result.order]
                entry["prefix_length"] = result.prefix_length
            else:
                entry["bicycle"] = result.to_json_dict()
        report["components"].append(entry)
    print(json.dumps(report, indent=2), file=out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    system, name = _load_system(args)
    board = _load_board(args, args.seed)
    k = system.cols
    h = enumerate_solutions(system, board)
    if args.mode == "exact":
        winner = solve_exact(h, bias=args.bias, component_cap=args.cap)
        print(f"winner({name}, |board|={len(board)}, bias={args.bias}) = {winner}", file=out)
    else:
        cert = certify_winner(h, solver_cap=args.cap)
        winner = cert.winner or "unknown"
        print(f"winner({name}, |board|={len(board)}) = {winner} [{cert.certificate}]", file=out)
        if cert.witness_vertices:
            print(f"witness sub-board: {list(cert.witness_vertices)}", file=out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    system, name = _load_system(args)
    n_values = tuple(int(tok) for tok in args.n_values.split(","))
    spec = ExperimentSpec(
        system=system,
        system_id=name,
        n_values=n_values,
        trials=args.trials,
        seed=args.seed,
        probabilities=tuple(float(t) for t in args.probabilities.split(",")) if args.probabilities else (),
        multipliers=tuple(float(t) for t in args.multipliers.split(",")) if args.multipliers else (),
        solver_cap=args.cap,
    )
    result = run_threshold_sweep(spec)
    if args.out:
        emit_report(result.records, args.format, args.out)
        print(f"wrote {len(result.records)} records to {args.out}", file=out)
    else:
        print(render_report(result.records, args.format), end="", file=out)
    if args.freq_table:
        with open(args.freq_table, "w") as fh:
            fh.write(frequency_table(result.summary))
        print(f"wrote frequency table to {args.freq_table}", file=out)
    return EXIT_OK


def _strategy_by_name(name: str, role: str, system: RadoSystem, board: Board, seed: int):
    if name == "es-breaker":
        return EsPotentialBreaker()
    if name == "dl2-breaker":
        return DecompositionBreaker()
    if name == "greedy-maker":
        return GreedyMaker()
    if name == "random-maker":
        return RandomMaker(seed)
    if name == "minimax":
        return MinimaxStrategy(role)
    if name == "triple-maker":
        if system.rows != 1 or system.cols != 2:
            raise CliError("triple-maker needs a 1x2 system", EXIT_ILLEGAL)
        a, b = system.entries[0]
        return TripleMaker(a, -b, system.rhs[0])
    if name == "chain-pairing":
        if system.rows != 1 or system.cols != 2:
            raise CliError("chain-pairing needs a 1x2 system", EXIT_ILLEGAL)
        a, b = system.entries[0]
        return PairingBreaker(breaker_chain_pairing(board, a, -b, system.rhs[0]), name)
    if name == "power-pairing":
        coeffs = sorted({abs(a) for row in system.entries for a in row if a})
        if len(coeffs) != 2:
            raise CliError("power-pairing needs exactly two distinct coefficients", EXIT_ILLEGAL)
        return PairingBreaker(breaker_power_pairing(board, coeffs[0], coeffs[1]), name)
    raise CliError(f"unknown strategy {name!r}", EXIT_ILLEGAL)


def cmd_play(args, out, input_fn=input) -> int:
    system, name = _load_system(args)
    board = _load_board(args, args.seed)
    h = enumerate_solutions(system, board)
    human_role = args.human
    machine_role = BREAKER if human_role == MAKER else MAKER
    strategy = _strategy_by_name(args.opponent, machine_role, system, board, args.seed)
    print(f"playing {name} on board {list(board.members)}; you are {human_role}", file=out)
    print(f"winning sets: {[list(e) for e in h.edges]}", file=out)
    state = GameState.initial(h, bias=args.bias)
    transcript = []
    round_no = 1
    while winner_check(state) is None:
        mover = state.to_move
        if mover == human_role:
            vertex = _prompt_move(state, input_fn, out)
        else:
            vertex = strategy.next_move(state)
            print(f"{mover} plays {vertex}", file=out)
        nxt = apply_move(state, vertex)
        transcript.append((mover, vertex, round_no))
        if mover == BREAKER and nxt.to_move == MAKER:
            round_no += 1
        state = nxt
    winner = winner_check(state)
    print(f"game over: {winner} wins", file=out)
    # transcript must replay to the same endgame
    from radogames.engine import Move

    final = replay(h, [Move(*m) for m in transcript], bias=args.bias)
    assert final.maker == state.maker and final.breaker == state.breaker
    return EXIT_OK


def _prompt_move(state, input_fn, out) -> int:
    while True:
        raw = input_fn(f"{state.to_move} move (unclaimed: {list(state.unclaimed())}): ")
        try:
            vertex = int(raw.strip())
        except (ValueError, AttributeError):
            print("enter an integer", file=out)
            continue
        if vertex in state.maker or vertex in state.breaker or vertex not in state.hypergraph.component_of:
            print(f"{vertex} is not available; try again", file=out)
            continue
        return vertex


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radogames", description=__doc__)
    default_seed = int(os.environ.get("RADO_SEED", "0"))
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, board=False):
        p.add_argument("--system", help=f"named system: {', '.join(sorted(NAMED_SYSTEMS))}")
        p.add_argument("--matrix-file", help="matrix file (text or JSON)")
        p.add_argument("--seed", type=int, default=default_seed)
        if board:
            p.add_argument("--n", type=int)
            p.add_argument("--p", type=float)
            p.add_argument("--board", help="explicit board, e.g. '1,2,3,5'")

    p = sub.add_parser("analyze", help="classify a system")
    add_common(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("enumerate", help="solution hypergraph as JSON")
    add_common(p, board=True)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("mu", help="largest solution-free subset of [1, n]")
    add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "branch_and_bound"], default="branch_and_bound")
    p.set_defaults(fn=cmd_mu)

    p = sub.add_parser("detect", help="per-component structure report")
    add_common(p, board=True)
    p.add_argument("--hypergraph", help="hypergraph JSON file")
    p.set_defaults(fn=cmd_detect)

    p = sub.add_parser("solve", help="exact winner")
    add_common(p, board=True)
    p.add_argument("--bias", type=int, default=1)
    p.add_argument("--mode", choices=["exact", "certify"], default="exact")
    p.add_argument("--cap", type=int, default=24)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("simulate", help="threshold sweep")
    add_common(p)
    p.add_argument("--n-values", required=True, help="e.g. '64,128'")
    p.add_argument("--multipliers", help="scales of n^(-1/m), e.g. '0.2,1,5'")
    p.add_argument("--probabilities", help="explicit p grid, e.g. '0.01,0.1'")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--cap", type=int, default=24)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--freq-table", help="also write a plot-friendly frequency table")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("play", help="interactive match against a strategy")
    add_common(p, board=True)
    p.add_argument("--human", choices=[MAKER, BREAKER], default=MAKER)
    p.add_argument("--opponent", default="es-breaker")
    p.add_argument("--bias", type=int, default=1)
    p.set_defaults(fn=cmd_play)
    return parser


def main(argv=None, out=None, input_fn=input) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.fn is cmd_play:
            return cmd_play(args, out, input_fn)
        return args.fn(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except MatrixParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizeCapError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (IllegalMoveError, StrategyPreconditionError, ValueError) as exc:
        print(f"illegal input: {exc}", file=sys.stderr)
        return EXIT_ILLEGAL


if __name__ == "__main__":
    sys.exit(main())
