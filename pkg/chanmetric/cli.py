"""Command line interface for chanmetric."""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from rich.markup import escape

from . import __version__
from .embedding import embed_points, embed_weight, exact_embed, induced_distance, verify_embedding
from .errors import ChanmetricError, ValidationError
from .export import (
    export_constraints,
    format_certificate,
    format_embedding,
    format_family,
    format_matrix,
    format_ranks,
    format_report,
    vector_labels,
)
from .metrization import MODES, Infeasible, Matched, describe_certificate, extract_constraints, metrize
from .minimal import heuristic_minimize, minimize_dimension, minimize_dimension_points
from .orders import (
    Channel,
    DistanceMatrix,
    channel_equivalent,
    decoder_agreement_oracle,
    decoding_equivalent,
    first_disagreement,
    matched,
    mdd_decode,
    mld_decode,
    weak_order,
)
from .parsing import load_input
from .patterns import check_realizable, realize, scale_shift, solve_cap, solve_sym, sym_to_cap, sym_transform
from .schemas import (
    DecodeOutput,
    EmbeddingOutput,
    EquivOutput,
    GenOutput,
    MatchedOutput,
    MetrizeOutput,
    OptimalityModel,
    OrderOutput,
    PatternOutput,
    ScalingModel,
    VerifyOutput,
    ViolationModel,
    certificate_to_model,
    dump,
    rat_grid,
    rat_list,
)
from .utils import console, format_rat, log_fields, parse_rat, set_log_level

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="chanmetric", description="Channel metrization and Hamming cube embeddings"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default=os.getenv("CHANMETRIC_LOG_LEVEL", "WARNING"),
        help="Python logging level (DEBUG, INFO, WARNING, ERROR)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    order = sub.add_parser("order", help="Column weak-order matrix of a matrix file")
    direction = order.add_mutually_exclusive_group(required=True)
    direction.add_argument("--asc", dest="direction", action="store_const", const="ascending")
    direction.add_argument("--desc", dest="direction", action="store_const", const="descending")
    order.add_argument("file")
    order.add_argument("--json", action="store_true")

    metrize_cmd = sub.add_parser("metrize", help="Find a distance matched to a channel")
    metrize_cmd.add_argument("channel")
    metrize_cmd.add_argument("--mode", choices=MODES, default="distance")
    metrize_cmd.add_argument("--json", action="store_true")
    metrize_cmd.add_argument("--graph-out", help="Directory for the comparison graph export")

    equiv = sub.add_parser("equiv", help="Decoding equivalence of two matrices")
    equiv.add_argument("first")
    equiv.add_argument("second")
    equiv.add_argument("--as", dest="kind", choices=("distance", "channel"), required=True)
    equiv.add_argument("--json", action="store_true")

    matched_cmd = sub.add_parser("matched", help="Is a distance matched to a channel")
    matched_cmd.add_argument("channel")
    matched_cmd.add_argument("distance")
    matched_cmd.add_argument("--oracle", action="store_true", help="Also compare decoders on every code")
    matched_cmd.add_argument("--json", action="store_true")

    decode = sub.add_parser("decode", help="MLD or MDD decode set")
    decode.add_argument("file")
    decode.add_argument("--as", dest="kind", choices=("channel", "distance"), required=True)
    decode.add_argument("--code", required=True, help="Comma-separated codewords, e.g. 1,3")
    decode.add_argument("--received", type=int, required=True)
    decode.add_argument("--json", action="store_true")

    pattern = sub.add_parser("setpattern", help="Set pattern tools")
    pattern_sub = pattern.add_subparsers(dest="action", required=True)
    solve = pattern_sub.add_parser("solve", help="Solve a complete cap or sym pattern")
    kind = solve.add_mutually_exclusive_group(required=True)
    kind.add_argument("--cap", dest="kind", action="store_const", const="cap")
    kind.add_argument("--sym", dest="kind", action="store_const", const="sym")
    solve.add_argument("file")
    solve.add_argument("--graded", action="store_true", help="Values listed x1, x2, x3, x12, ...")
    solve.add_argument("--json", action="store_true")

    embed = sub.add_parser("embed", help="Embed a weight or distance into a Hamming cube")
    source = embed.add_mutually_exclusive_group(required=True)
    source.add_argument("--weight", dest="weight")
    source.add_argument("--distance", dest="distance")
    embed.add_argument("--graded", action="store_true")
    strategy = embed.add_mutually_exclusive_group()
    strategy.add_argument("--minimal", action="store_true", help="Smallest cube in the equivalence class")
    strategy.add_argument("--heuristic", action="store_true", help="Minimal search restricted by the order of x'")
    strategy.add_argument("--exact", action="store_true", help="Isometric embedding (distance input)")
    embed.add_argument("--m", type=int, help="Explicit scale for the rescaled solution")
    embed.add_argument("--r", help="Explicit shift, with --m")
    embed.add_argument("--json", action="store_true")

    verify = sub.add_parser("verify-embed", help="Check an embedding file against a weight or distance")
    verify.add_argument("embedding")
    target = verify.add_mutually_exclusive_group(required=True)
    target.add_argument("--weight", dest="weight")
    target.add_argument("--distance", dest="distance")
    verify.add_argument("--graded", action="store_true")
    verify.add_argument("--json", action="store_true")

    gen = sub.add_parser("gen", help="Random test inputs")
    gen.add_argument("kind", choices=("channel", "distance"))
    gen.add_argument("n", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--json", action="store_true")

    return parser


def _progress() -> bool:
    return sys.stderr.isatty()


def _emit(text: str) -> None:
    print(text)


def run_order(args: argparse.Namespace) -> int:
    grid = load_input(args.file, "grid").payload
    ranks = weak_order(grid, args.direction)  # type: ignore[arg-type]
    if args.json:
        _emit(dump(OrderOutput(direction=args.direction, ranks=ranks.as_lists())))
    else:
        _emit(format_ranks(ranks))
    return EXIT_OK


def run_metrize(args: argparse.Namespace) -> int:
    channel = load_input(args.channel, "channel").payload
    assert isinstance(channel, Channel)
    if args.graph_out:
        export_constraints(extract_constraints(channel, args.mode), args.graph_out)
    result = metrize(channel, args.mode)
    if isinstance(result, Matched):
        if args.json:
            classes = [
                {"pairs": sorted(pair.label() for pair in pairs), "value": value}
                for pairs, value in sorted(result.class_values.items(), key=lambda item: (item[1], sorted(item[0])))
            ]
            _emit(dump(MetrizeOutput(feasible=True, mode=args.mode, distance=rat_grid(result.distance.entries), class_values=classes)))
        else:
            _emit(format_matrix(result.distance.entries))
        return EXIT_OK
    assert isinstance(result, Infeasible)
    if args.json:
        model = certificate_to_model(result.certificate, describe_certificate(result.certificate))
        _emit(dump(MetrizeOutput(feasible=False, mode=args.mode, certificate=model)))
    else:
        _emit("not metrizable")
        _emit(format_certificate(result.certificate))
    return EXIT_NEGATIVE


def _witness(code: Sequence[int], received: int) -> dict:
    return {"code": sorted(c + 1 for c in code), "received": received + 1}


def run_equiv(args: argparse.Namespace) -> int:
    first = load_input(args.first, args.kind).payload
    second = load_input(args.second, args.kind).payload
    witness = None
    if args.kind == "distance":
        assert isinstance(first, DistanceMatrix) and isinstance(second, DistanceMatrix)
        same = decoding_equivalent(first, second)
        if not same:
            found = first_disagreement(first, second, progress=_progress())
            witness = None if found is None else _witness(*found)
    else:
        assert isinstance(first, Channel) and isinstance(second, Channel)
        same = channel_equivalent(first, second)
    if args.json:
        _emit(dump(EquivOutput(kind=args.kind, equivalent=same, witness=witness)))
    else:
        _emit("equivalent" if same else "not equivalent")
        if witness:
            _emit(f"witness: code {witness['code']} received {witness['received']}")
    return EXIT_OK if same else EXIT_NEGATIVE


def run_matched(args: argparse.Namespace) -> int:
    channel = load_input(args.channel, "channel").payload
    distance = load_input(args.distance, "distance").payload
    assert isinstance(channel, Channel) and isinstance(distance, DistanceMatrix)
    verdict = matched(channel, distance)
    output = MatchedOutput(matched=verdict)
    if args.oracle:
        report = decoder_agreement_oracle(channel, distance, progress=_progress())
        output.oracle = report.agree
        output.codes_checked = report.codes_checked
        if report.witness is not None:
            output.witness = _witness(*report.witness)
    code = EXIT_OK if verdict else EXIT_NEGATIVE
    if args.json:
        _emit(dump(output))
        return code
    _emit(f"matched: {'yes' if verdict else 'no'}")
    if args.oracle:
        _emit(f"oracle: {'agree' if output.oracle else 'disagree'} ({output.codes_checked} codes)")
        if output.witness:
            _emit(f"witness: code {output.witness['code']} received {output.witness['received']}")
    return code


def _shift(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _parse_code(text: str) -> List[int]:
    try:
        members = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ValidationError(f"malformed code {text!r}") from exc
    return [member - 1 for member in members]


def run_decode(args: argparse.Namespace) -> int:
    matrix = load_input(args.file, args.kind).payload
    code = _parse_code(args.code)
    received = args.received - 1
    if isinstance(matrix, Channel):
        decoded = mld_decode(matrix, code, received)
    else:
        assert isinstance(matrix, DistanceMatrix)
        decoded = mdd_decode(matrix, code, received)
    members = sorted(c + 1 for c in decoded)
    if args.json:
        _emit(dump(DecodeOutput(kind=args.kind, code=sorted(c + 1 for c in code), received=args.received, decoded=members)))
    else:
        _emit(" ".join(str(c) for c in members))
    return EXIT_OK


def run_setpattern(args: argparse.Namespace) -> int:
    vector = load_input(args.file, "subsetvector", graded=args.graded).payload
    if args.kind == "cap":
        x = solve_cap(vector)  # type: ignore[arg-type]
        cap = vector
    else:
        cap = sym_to_cap(vector)  # type: ignore[arg-type]
        x = solve_sym(vector)  # type: ignore[arg-type]
    realizable = check_realizable(x)
    output = PatternOutput(
        kind=args.kind,
        n=x.n,
        x=rat_list(x.to_graded() if args.graded else x.values),
        cap=rat_list(cap.to_graded() if args.graded else cap.values),  # type: ignore[union-attr]
        realizable=realizable,
    )
    family_lines: List[str] = []
    if realizable:
        family = realize(x)
        family_lines = family.render()
        output.realization = family_lines
    elif args.kind == "sym":
        witness = scale_shift(x)
        x_prime = witness.x_prime
        image = sym_transform(x_prime)
        output.scaling = ScalingModel(
            m=witness.m,
            r=format_rat(witness.r),
            k=format_rat(witness.k),
            x_prime=rat_list(x_prime.to_graded() if args.graded else x_prime.values),
            sym=rat_list(image.to_graded() if args.graded else image.values),
        )
    if args.json:
        _emit(dump(output))
        return EXIT_OK
    labels = vector_labels(x.n, args.graded)
    if args.kind == "sym":
        cap_labels = vector_labels(x.n, args.graded, prefix="c")
        _emit("cap: " + " ".join(f"{label}={value}" for label, value in zip(cap_labels, output.cap)))
    _emit("x: " + " ".join(f"{label}={value}" for label, value in zip(labels, output.x)))
    _emit(f"realizable: {'yes' if realizable else 'no'}")
    if realizable:
        _emit(format_family(realize(x)))
    elif output.scaling is not None:
        scaling = output.scaling
        _emit(f"scaled: m={scaling.m} r={scaling.r} k={scaling.k}")
        _emit("x': " + " ".join(f"{label}={value}" for label, value in zip(labels, scaling.x_prime)))
    return EXIT_OK


def run_embed(args: argparse.Namespace) -> int:
    optimality: Optional[OptimalityModel] = None
    r = None if args.r is None else _shift(args.r)
    if args.weight:
        weight = load_input(args.weight, "weight", graded=args.graded).payload
        if args.exact:
            raise ValidationError("--exact needs --distance")
        if args.minimal or args.heuristic:
            search = heuristic_minimize if args.heuristic else minimize_dimension
            best = search(weight, progress=_progress())  # type: ignore[arg-type]
            embedding = best.embedding
            optimality = OptimalityModel(
                N_star=best.n_star, incumbent=best.incumbent_n, nodes_explored=best.nodes_explored, method=best.method
            )
        else:
            embedding = embed_weight(weight, args.m, r)  # type: ignore[arg-type,assignment]
        kind = "generators"
        words = embedding.generators
    else:
        distance = load_input(args.distance, "distance").payload
        assert isinstance(distance, DistanceMatrix)
        if args.exact:
            found = exact_embed(distance, progress=_progress())
            if found is None:
                _emit("no isometric embedding")
                return EXIT_NEGATIVE
            point_embedding = found
        elif args.minimal:
            points = minimize_dimension_points(distance, progress=_progress())
            point_embedding = points.embedding
            optimality = OptimalityModel(
                N_star=points.n_star, incumbent=points.incumbent_n, nodes_explored=points.nodes_explored, method="branch-and-bound"
            )
        elif args.heuristic:
            raise ValidationError("--heuristic needs --weight")
        else:
            point_embedding = embed_points(distance, args.m, r)
        kind = "images"
        words = point_embedding.images
        embedding = point_embedding  # type: ignore[assignment]
        log_fields(logging.DEBUG, "embed_points_induced", distance=format_matrix(induced_distance(words).entries))
    if args.json:
        _emit(
            dump(
                EmbeddingOutput(
                    kind=kind,  # type: ignore[arg-type]
                    n=embedding.n,
                    N=embedding.length,
                    m=None if embedding.m is None else format_rat(embedding.m),
                    k=None if embedding.k is None else format_rat(embedding.k),
                    words=[word.to_string() for word in words],
                    optimality=optimality,
                )
            )
        )
        return EXIT_OK
    _emit(format_embedding(embedding))
    if optimality is not None:
        _emit(f"N*: {optimality.N_star}")
        _emit(f"incumbent: {optimality.incumbent}")
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    parsed = load_input(args.embedding, "embedding").payload
    if args.weight:
        target = load_input(args.weight, "weight", graded=args.graded).payload
        embedding = parsed.as_linear()  # type: ignore[union-attr]
    else:
        target = load_input(args.distance, "distance").payload
        embedding = parsed.as_points()  # type: ignore[union-attr]
    report = verify_embedding(embedding, target)  # type: ignore[arg-type]
    if args.json:
        _emit(
            dump(
                VerifyOutput(
                    ok=report.ok,
                    m=None if report.m is None else format_rat(report.m),
                    k=None if report.k is None else format_rat(report.k),
                    order_preserved=report.order_preserved,
                    injective=report.injective,
                    matches_declared=report.matches_declared,
                    violations=[
                        ViolationModel(
                            at=v.label,
                            target=format_rat(v.target),
                            expected=format_rat(v.expected),
                            observed=v.observed,
                        )
                        for v in report.violations
                    ],
                    notes=list(report.notes),
                )
            )
        )
    else:
        _emit(format_report(report))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def random_channel(n: int, rng: random.Random) -> Channel:
    rows = []
    for _ in range(n):
        weights = [rng.randint(1, 9) for _ in range(n)]
        total = sum(weights)
        rows.append([Fraction(w, total) for w in weights])
    return Channel.from_rows(rows)


def random_distance(n: int, rng: random.Random) -> DistanceMatrix:
    grid = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            grid[i][j] = grid[j][i] = Fraction(rng.randint(1, 9), rng.randint(1, 4))
    return DistanceMatrix.from_rows(grid)


def run_gen(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise ValidationError("n must be at least 1")
    rng = random.Random(args.seed)
    matrix = random_channel(args.n, rng) if args.kind == "channel" else random_distance(args.n, rng)
    if args.json:
        _emit(dump(GenOutput(kind=args.kind, n=args.n, seed=args.seed, entries=rat_grid(matrix.entries))))
    else:
        _emit(format_matrix(matrix.entries))
    return EXIT_OK


COMMANDS = {
    "order": run_order,
    "metrize": run_metrize,
    "equiv": run_equiv,
    "matched": run_matched,
    "decode": run_decode,
    "setpattern": run_setpattern,
    "embed": run_embed,
    "verify-embed": run_verify,
    "gen": run_gen,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_log_level(args.log_level)
    log_fields(logging.DEBUG, "command_start", command=args.command)
    try:
        return COMMANDS[args.command](args)
    except (ChanmetricError, OSError) as exc:
        console.print(f"[red]error:[/red] {escape(str(exc))}", markup=True, highlight=False, soft_wrap=True)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
