"""``tsys`` command line: compute, cross-check, specialise and export.

Exit codes: 0 on success, 2 when the input is out of scope or malformed,
3 when an internal consistency check fails (methods disagree, a division
is not exact, ...).
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .errors import InternalError, InvalidKappa, InvalidSurface, ScopeError, SiteNotLocated, TSystemError
from .graph import build_closure, build_graph, to_dot
from .laurent import LaurentPoly, render, to_json_terms
from .matching import enumerate_matchings, solve_edge, solve_matching
from .network import BLOCK_ANCHOR, build_network, solve_network
from .oracle import Instance, solve_oracle
from .path import solve_path
from .specialize import (
    lambda_scheme,
    pentagram_p,
    pentagram_q,
    specialize as run_specialize,
    speyer_scheme,
)
from .surface import Point3, SteppedSurface

SOLVERS = {
    "oracle": solve_oracle,
    "matching": solve_matching,
    "edge": solve_edge,
    "path": solve_path,
    "network": solve_network,
}

USER_ERRORS = (ScopeError, InvalidSurface, InvalidKappa, SiteNotLocated)


class CrossCheckFailure(Exception):
    pass


def _guard(func):
    """Turn package errors into diagnostics and exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except USER_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (InternalError, CrossCheckFailure) as exc:
            click.echo(f"internal check failed: {exc}", err=True)
            sys.exit(3)
        except TSystemError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _load_surface(source: str) -> SteppedSurface:
    if source == "fund":
        return SteppedSurface.fund()
    path = Path(source)
    if not path.is_file():
        raise InvalidSurface(f"surface file {source!r} not found")
    surface = SteppedSurface.from_json(path.read_text())
    surface.validate()
    return surface


def _instance(point: tuple[int, int, int], surface: str) -> Instance:
    return Instance(_load_surface(surface), Point3(*point))


def _poly_payload(p: LaurentPoly) -> dict:
    return {"polynomial": render(p), "terms": to_json_terms(p)}


def _emit_json(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2))


point_option = click.option(
    "--point", nargs=3, type=int, required=True, metavar="I J K", help="Target point (i+j+k odd)."
)
surface_option = click.option(
    "--surface", default="fund", show_default=True, help='"fund" or a surface JSON file.'
)
format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
)


@click.group()
def main() -> None:
    """Solutions of the T-system with principal coefficients."""


@main.command()
@point_option
@surface_option
@click.option(
    "--method",
    type=click.Choice([*SOLVERS, "all"]),
    default="oracle",
    show_default=True,
    help='Solver to run; "all" runs every solver and cross-checks them.',
)
@format_option
@_guard
def compute(point, surface, method, fmt):
    """Compute T at a point."""
    inst = _instance(point, surface)
    names = list(SOLVERS) if method == "all" else [method]
    results = {name: SOLVERS[name](inst) for name in names}
    answer = results[names[0]]
    if method == "all":
        agreeing = [name for name in names if results[name] == answer]
        if len(agreeing) != len(names):
            bad = ", ".join(name for name in names if name not in agreeing)
            raise CrossCheckFailure(f"{bad} disagree with the recurrence")
    if fmt == "json":
        payload = {"point": list(point), "surface": surface, "method": method, **_poly_payload(answer)}
        if method == "all":
            payload["agreement"] = f"{len(names)}/{len(names)}"
        _emit_json(payload)
        return
    click.echo(render(answer))
    if method == "all":
        click.echo(f"{len(names)}/{len(names)} methods agree")


def _network_text(inst: Instance) -> str:
    gbar = build_closure(inst.surface, inst.point)
    net = build_network(gbar)
    lines = [f"rows {net.r_min}..{net.r_max}", f"chips {len(net.chips)}"]
    for n, chip in enumerate(net.chips):
        targets = " ".join(str(r) for r, _ in chip.outgoing) or "-"
        top = chip.row - BLOCK_ANCHOR[chip.variant]
        lines.append(f"{n}: {chip.describe()} anchor row {chip.row} block from row {top} out {targets}")
    return "\n".join(lines)


def _matchings_text(inst: Instance) -> str:
    g = build_graph(inst.surface, inst.point)
    labels = {e.key: e.label() for e in g.edges}
    matchings = enumerate_matchings(g)
    lines = [f"matchings {len(matchings)}"]
    for n, m in enumerate(matchings):
        lines.append(f"{n}: " + " ".join(labels[k] for k in m.sorted_keys()))
    return "\n".join(lines)


@main.command()
@click.argument("what", type=click.Choice(["graph", "closure", "network", "matchings"]))
@point_option
@surface_option
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout.")
@_guard
def export(what, point, surface, output):
    """Export the graph, its closure, the network or the matchings."""
    inst = _instance(point, surface)
    if what == "graph":
        text = to_dot(build_graph(inst.surface, inst.point), "G")
    elif what == "closure":
        text = to_dot(build_closure(inst.surface, inst.point), "Gbar")
    elif what == "network":
        text = _network_text(inst)
    else:
        text = _matchings_text(inst)
    if not text.endswith("\n"):
        text += "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text)


@main.command()
@click.option("--scheme", type=click.Choice(["speyer", "lambda", "pentagram"]), required=True)
@click.option("--point", nargs=3, type=int, default=None, metavar="I J K", help="Target point (speyer, lambda).")
@surface_option
@click.option("--n", "n", type=int, default=None, help="Number of polygon vertices (pentagram).")
@click.option("--kappa", type=int, default=None, help="Diagonal parameter (pentagram).")
@click.option("--step", type=int, default=1, show_default=True, help="Iterate of the map (pentagram).")
@click.option("--index", "ell", type=int, default=None, help="Single index 1..n (pentagram; default all).")
@format_option
@_guard
def specialize(scheme, point, surface, n, kappa, step, ell, fmt):
    """Specialise the coefficients to another coefficient system."""
    if not _load_surface(surface).is_fund():
        raise ScopeError("specialisation is only available over the fundamental surface")
    if scheme == "pentagram":
        if n is None or kappa is None:
            raise click.UsageError("--n and --kappa are required for the pentagram scheme")
        indices = [ell] if ell is not None else list(range(1, n + 1))
        rows = []
        for index in indices:
            rows.append((index, pentagram_p(index, step, n, kappa), pentagram_q(index, step, n, kappa)))
        if fmt == "json":
            _emit_json(
                {
                    "scheme": "pentagram",
                    "n": n,
                    "kappa": kappa,
                    "step": step,
                    "values": [{"index": i, "p": str(p), "q": str(q)} for i, p, q in rows],
                }
            )
            return
        for i, p, q in rows:
            click.echo(f"p^({step})[{i}] = {p}")
            click.echo(f"q^({step})[{i}] = {q}")
        return
    if point is None:
        raise click.UsageError(f"--point is required for the {scheme} scheme")
    inst = Instance(SteppedSurface.fund(), Point3(*point))
    chosen = speyer_scheme() if scheme == "speyer" else lambda_scheme()
    value = run_specialize(inst, chosen)
    if fmt == "json":
        _emit_json({"scheme": scheme, "point": list(point), **_poly_payload(value)})
        return
    click.echo(render(value))


if __name__ == "__main__":  # pragma: no cover
    main()
