"""Command-line surface: validate, gen-snapshot, simulate, play, serve.

Exit codes: 0 success, 1 domain failure (invalid profile, lost replay,
engine error), 2 input error (unreadable files, malformed documents,
infeasible generator parameters).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import generator, simulate as sim
from .errors import DomainError
from .generator import InfeasibleParametersError, with_stranger_pool
from .session import MockClock, RealClock, SessionService, SessionStore
from .snapshot import (
    ProfileSnapshot,
    SnapshotParseError,
    SnapshotReferenceError,
    SnapshotSchemaError,
    load_snapshot_file,
    validate_snapshot,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="RNG seed")
    common.add_argument("--config", default=None, help="server config file (JSON)")
    return common


def _load_profile(path: str) -> ProfileSnapshot:
    return with_stranger_pool(load_snapshot_file(path))


def cmd_validate(args) -> int:
    try:
        snapshot = load_snapshot_file(args.path)
    except (SnapshotParseError, SnapshotSchemaError, SnapshotReferenceError) as exc:
        if args.json:
            print(json.dumps(exc.to_payload()))
        else:
            print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_INPUT
    report = validate_snapshot(snapshot)
    if args.json:
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(f"non-public items: {report.non_public_item_count}")
        for finding in report.violations:
            print(f"violation [{finding.code}]: {finding.message}")
        print("ok" if report.ok else "INVALID")
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_gen_snapshot(args) -> int:
    seed = args.seed if args.seed is not None else 0
    try:
        snapshot = generator.generate_snapshot(
            contacts=args.contacts,
            items=args.items,
            lists=args.lists,
            public_fraction=args.public_fraction,
            seed=seed,
        )
    except InfeasibleParametersError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_INPUT
    generator.write_snapshot(snapshot, args.output)
    if not args.json:
        print(f"wrote {args.output}")
    else:
        print(json.dumps({"output": str(args.output), "seed": seed}))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        snapshot = _load_profile(args.path)
    except (SnapshotParseError, SnapshotSchemaError, SnapshotReferenceError) as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_INPUT
    policy = sim.PlayerPolicy(
        perception_error=args.epsilon,
        reaction_seconds_per_pick=args.reaction,
        battle_policy=sim.BattlePolicy(args.battle_policy),
    )
    seed = args.seed if args.seed is not None else 0
    try:
        summary = sim.simulate(snapshot, policy, sessions=args.sessions, seed=seed)
    except DomainError as exc:
        print(f"engine error: {exc.message}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.json:
        print(json.dumps(summary.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(f"sessions: {summary.sessions}")
        print(
            "score:     mean {mean:.1f}  p50 {p50:.0f}  p95 {p95:.0f}".format(
                **summary.score.to_json_dict()
            )
        )
        print(
            "awareness: mean {mean:.3f}  p50 {p50:.3f}  p95 {p95:.3f}".format(
                **summary.awareness.to_json_dict()
            )
        )
        print(f"smileys:   {dict(sorted(summary.smiley_distribution.items()))}")
    return EXIT_OK


def cmd_play(args) -> int:
    try:
        snapshot = _load_profile(args.path)
    except (SnapshotParseError, SnapshotSchemaError, SnapshotReferenceError) as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_INPUT

    if args.transcript:
        try:
            transcript = json.loads(Path(args.transcript).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read transcript: {exc}", file=sys.stderr)
            return EXIT_INPUT
        try:
            report = sim.replay_transcript(snapshot, transcript)
        except (DomainError, ValueError) as exc:
            print(f"transcript mismatch: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
        return EXIT_OK

    return _play_interactive(snapshot, args)


def _play_interactive(snapshot: ProfileSnapshot, args) -> int:
    service = SessionService(clock=RealClock(), store=SessionStore())
    try:
        token, step = service.create_session(snapshot, seed=args.seed)
    except DomainError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_DOMAIN

    print("Do you know who can actually see what you share?")
    print("Work through ten quick comparisons, then find your audience.")
    try:
        while True:
            label = service.state_view(token)["step"]
            if label == "finished":
                break
            if label in ("motivation", "briefing_item_battle", "briefing_game", "briefing_score_feedback"):
                input(f"[{label}] press enter to continue... ")
                service.advance(token)
            elif label == "item_battle":
                pair = service.battle_pair(token)
                print(
                    f"\ncomparison {pair['round_no']}/{pair['rounds_total']}: which is more personal?"
                )
                print(f"  [a] {pair['item_a']['content_ref']}")
                print(f"  [b] {pair['item_b']['content_ref']}")
                choice = input("a/b> ").strip().lower()
                if choice in ("a", "b"):
                    winner = pair["item_a" if choice == "a" else "item_b"]["id"]
                    service.battle_choice(token, winner)
            elif label.startswith("game_"):
                view = service.round_view(token)
                print(
                    f"\nround {view['round_no']}/{view['rounds_total']}"
                    f" | {view['item']['content_ref']}"
                    f" | score {view['score']} | hearts {view['hearts']}"
                )
                for idx, entry in enumerate(view["gallery"], start=1):
                    print(f"  {idx:2d}. {entry['display_name']}")
                raw = input("pick a number> ").strip()
                if not raw.isdigit() or not 1 <= int(raw) <= len(view["gallery"]):
                    print("pick 1-20")
                    continue
                person = view["gallery"][int(raw) - 1]["person_id"]
                try:
                    outcome = service.round_select(token, person)
                except DomainError as exc:
                    print(f"({exc.message})")
                    continue
                print(
                    f"-> {outcome['outcome']} [{outcome['frame']}]"
                    f" score {outcome['score']} hearts {outcome['hearts']}"
                )
            elif label == "score_feedback":
                report = service.result(token)
                print()
                print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
                print(f"\n{report.share_text()}")
    except (KeyboardInterrupt, EOFError):
        print("\naborted")
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import ServerConfig, load_config, run_server

    try:
        config = load_config(args.config) if args.config else load_config(None)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.listen:
        from dataclasses import replace

        config = replace(config, listen=args.listen)
    if args.static_dir:
        from dataclasses import replace

        config = replace(config, static_dir=args.static_dir)
    run_server(config)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="privcheck",
        description="Privacy-awareness game over a profile snapshot.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a snapshot file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen-snapshot", parents=[common], help="generate a synthetic snapshot")
    p.add_argument("--contacts", "-n", type=int, required=True)
    p.add_argument("--items", "-m", type=int, required=True)
    p.add_argument("--lists", "-l", type=int, default=2)
    p.add_argument("--public-fraction", "-p", type=float, default=0.0)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_gen_snapshot)

    p = sub.add_parser("simulate", parents=[common], help="run simulated players")
    p.add_argument("path")
    p.add_argument("--sessions", "-N", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=0.0, help="perception error probability")
    p.add_argument("--reaction", type=float, default=0.5, help="seconds per pick")
    p.add_argument(
        "--battle-policy",
        choices=[bp.value for bp in sim.BattlePolicy],
        default=sim.BattlePolicy.TRUE_ORDER.value,
    )
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("play", parents=[common], help="play in the terminal or replay a transcript")
    p.add_argument("path")
    p.add_argument("--transcript", default=None, help="recorded command file to replay")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP API (and UI, if configured)")
    p.add_argument("--listen", default=None, help="host:port")
    p.add_argument("--static-dir", default=None, help="directory of built UI assets")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
