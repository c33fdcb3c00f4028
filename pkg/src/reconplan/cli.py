"""Command-line entry points: simulate, reconcile, serve, report."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .session import Session, SessionConfig, create_session, export_json


def _load_config(path: str | None, seed: int | None) -> SessionConfig:
    config = SessionConfig.load(path) if path else SessionConfig.default()
    if seed is not None:
        doc = config.to_json_dict()
        doc["seed"] = seed
        config = SessionConfig.from_json_dict(doc)
    return config


def _parse_action(text: str, n_workers: int) -> tuple[int, ...]:
    try:
        action = tuple(int(part) for part in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise click.BadParameter(f"could not parse action {text!r}") from exc
    if len(action) != n_workers:
        raise click.BadParameter(f"action must list all {n_workers} workers")
    return action


@click.group()
def main():
    """Repair-dispatch planning with reward-weighting reconciliation."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Session config JSON; defaults to the built-in problem.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--steps", type=int, default=None,
              help="Steps to execute; defaults to the full episode (horizon - 1).")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the session export here instead of stdout.")
@click.option("--debug", is_flag=True, help="Include true states in the export.")
def simulate(config_path, seed, steps, out_path, debug):
    """Run a headless episode, executing the planner's recommendation each step."""
    config = _load_config(config_path, seed)
    max_steps = config.hvac.horizon - 1
    steps = max_steps if steps is None else steps
    if not (0 <= steps <= max_steps):
        raise click.BadParameter(f"steps must lie in [0, {max_steps}]")
    session = create_session(config)
    for k in range(steps):
        action, _ = session.recommend()
        report = session.step(action)
        click.echo(f"t={report.t} action={action} reward={report.reward:g}", err=True)
    payload = export_json(session.export(debug=debug))
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
        click.echo(f"wrote {out_path}", err=True)
    else:
        click.echo(payload, nl=False)


@main.command()
@click.option("--session", "session_path", type=click.Path(exists=True), required=True,
              help="Session export JSON to replay.")
@click.option("--timestep", type=int, required=True,
              help="Timestep at which to reconcile (replays the log up to it).")
@click.option("--user-action", required=True,
              help='Proposed action as comma-separated worker destinations, e.g. "2,1".')
@click.option("--out", "out_path", type=click.Path(), default=None)
def reconcile(session_path, timestep, user_action, out_path):
    """One-shot reconciliation of a proposed action at a logged timestep."""
    with open(session_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    replay = dict(doc)
    replay["steps"] = [s for s in doc["steps"] if s["t"] < timestep]
    if len(replay["steps"]) != timestep - 1:
        raise click.ClickException(f"session log does not reach timestep {timestep}")
    session = Session.from_export(replay)
    action = _parse_action(user_action, session.config.hvac.n_workers)
    recommended, estimate = session.recommend()
    result, explanation = session.propose(action)
    payload = {
        "timestep": timestep,
        "a_a": list(recommended),
        "a_h": list(action),
        "q_values": [
            {"action": list(a), "q": float(q)}
            for a, q in zip(session.config.hvac.actions(), estimate.q_values)
        ],
        "reconcile_result": result.to_json_dict(),
        "explanation": explanation.to_json_list(),
    }
    rendered = export_json(payload)
    if out_path:
        Path(out_path).write_text(rendered, encoding="utf-8")
        click.echo(f"wrote {out_path}", err=True)
    else:
        click.echo(rendered, nl=False)
    for sentence in explanation.sentences():
        click.echo(sentence, err=True)


@main.command()
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def serve(port, host, config_path):
    """Serve the session HTTP API."""
    import uvicorn

    from .service import create_app

    app = create_app(_load_config(config_path, None))
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--session", "session_path", type=click.Path(exists=True), required=True)
@click.option("--out-dir", type=click.Path(), required=True)
@click.option("--tsv", is_flag=True, help="Write tab-separated tables instead of CSV.")
def report(session_path, out_dir, tsv):
    """Render a session export to timeline/weighting figures and tables."""
    from .report import render_report

    with open(session_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    paths = render_report(doc, out_dir, delimiter="\t" if tsv else ",")
    for path in paths:
        click.echo(str(path))


if __name__ == "__main__":
    main()
