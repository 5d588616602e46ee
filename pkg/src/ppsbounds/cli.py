"""Command-line front end.

Each command builds the same request model the HTTP service accepts and
either calls the handler in-process (default) or posts it to a running
service given with --server.  Output is deterministic: canonical JSON (sorted
keys), fixed CSV columns, or plain text.

Exit codes: 0 ok, 2 usage or validation error, 3 capacity exceeded,
4 verification failure.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from ppsbounds import __version__
from ppsbounds.cohomology import CapacityError, SphereTuple
from ppsbounds.config import OverrideConfig

EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_VERIFICATION = 4


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False)


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_config(path: str | None) -> OverrideConfig:
    if not path:
        return OverrideConfig.empty()
    try:
        return OverrideConfig.from_file(path)
    except (OSError, ValueError) as exc:
        _fail(str(exc), EXIT_USAGE)


def _dispatch(ctx, path: str, payload: dict) -> dict:
    server = ctx.obj["server"]
    if server:
        import httpx

        response = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
        if response.status_code != 200:
            try:
                body = response.json()
            except ValueError:
                body = {"error": response.text}
            _fail(
                body.get("error", f"service returned {response.status_code}"),
                body.get("exit_code", EXIT_USAGE),
            )
        return response.json()
    from ppsbounds.service.app import LOCAL_HANDLERS

    model_cls, handler = LOCAL_HANDLERS[path]
    try:
        request = model_cls(**payload)
    except Exception as exc:  # pydantic validation
        _fail(str(exc), EXIT_USAGE)
    try:
        result = handler(request)
    except CapacityError as exc:
        _fail(str(exc), EXIT_CAPACITY)
    except ValueError as exc:
        _fail(str(exc), EXIT_USAGE)
    return json.loads(result.model_dump_json())


def _parse_tuple(text: str) -> list[int]:
    try:
        return list(SphereTuple.parse(text).entries)
    except CapacityError as exc:
        _fail(str(exc), EXIT_CAPACITY)
    except ValueError as exc:
        _fail(str(exc), EXIT_USAGE)


def _overrides(ctx) -> list[dict]:
    return ctx.obj["config"].to_jsonable()


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(p) for p in text.replace(" ", "").split(",") if p != ""]
    except ValueError:
        _fail(f"cannot parse coordinates from {text!r}", EXIT_USAGE)


@click.group()
@click.version_option(version=__version__, prog_name="pps")
@click.option(
    "--config",
    "config_path",
    envvar="PPS_CONFIG",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="override file with provenance-carrying exact values",
)
@click.option(
    "--server",
    default=None,
    metavar="URL",
    help="base URL of a running service; commands are sent there instead of computed locally",
)
@click.pass_context
def main(ctx, config_path, server):
    """Exact bounds, obstructions and motion planners for sphere-product quotients."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = _load_config(config_path)
    ctx.obj["server"] = server


def _render_bounds_text(data: dict) -> str:
    lines = [
        f"spheres ({','.join(str(n) for n in data['spheres'])})  dim {data['dim']}",
        f"TC  in [{data['tc']['lo']}, {data['tc']['hi']}]",
        f"cat in [{data['cat']['lo']}, {data['cat']['hi']}]",
    ]
    flags = data["flags"]
    lines.append(
        "flags: "
        + ", ".join(
            f"{key}={flags[key]}"
            for key in sorted(flags)
        )
    )
    lines.append(f"registry for the bottom space: {data['base_registry']}")
    lines.append("items:")
    for item in data["items"]:
        value = item["value"] if item["applicable"] else "n/a"
        lines.append(
            f"  [{item['quantity']}] {item['tag']:<20} {item['kind']:<5} {value!s:>4}  {item['citation']}"
        )
    return "\n".join(lines)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row[c] is None else row[c] for c in columns])
    return buf.getvalue()


@main.command()
@click.argument("spheres")
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="text")
@click.pass_context
def bounds(ctx, spheres, fmt):
    """Certified TC/cat interval with the full bound audit for SPHERES."""
    payload = {"spheres": _parse_tuple(spheres), "overrides": _overrides(ctx)}
    data = _dispatch(ctx, "/bounds", payload)
    if fmt == "json":
        click.echo(canonical_json(data))
    elif fmt == "csv":
        from ppsbounds.bounds import TABLE_COLUMNS

        click.echo(_csv_text(TABLE_COLUMNS, [data["row"]]), nl=False)
    else:
        click.echo(_render_bounds_text(data))


@main.command()
@click.argument("m", type=int)
@click.argument("n", type=int)
@click.argument("l", type=int)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def axial(ctx, m, n, l, fmt):
    """Binomial obstruction for an axial map P^M x P^N -> P^L."""
    if min(m, n, l) < 1:
        _fail("m, n and L must be at least 1", EXIT_USAGE)
    data = _dispatch(ctx, "/axial", {"m": m, "n": n, "l": l})
    if fmt == "json":
        click.echo(canonical_json(data))
    else:
        click.echo(data["verdict"])


@main.command()
@click.argument("spheres")
@click.option("--gd", type=int, default=None, help="exact geometric dimension override")
@click.option(
    "--gd-provenance",
    default="command line override",
    show_default=True,
    help="where the --gd value comes from",
)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def imm(ctx, spheres, gd, gd_provenance, fmt):
    """Immersion-dimension report for SPHERES."""
    payload = {
        "spheres": _parse_tuple(spheres),
        "gd": gd,
        "gd_provenance": gd_provenance,
        "overrides": _overrides(ctx),
    }
    data = _dispatch(ctx, "/immersion", payload)
    if fmt == "json":
        click.echo(canonical_json(data))
        return
    lines = [
        f"spheres ({','.join(str(n) for n in data['spheres'])})  dim {data['dim']}",
        f"stably parallelizable: {data['stably_parallelizable']}",
        f"immersion dimension: lower {data['imm_lower']}"
        + (f", exact {data['imm_exact']}" if data["imm_exact"] is not None else ""),
        f"gd: {data['gd_value']} ({data['gd_source']})"
        if data["gd_value"] is not None
        else "gd: not used",
        f"metastable_ok: {data['metastable_ok']}  gd_above_half: {data['gd_above_half']}",
    ]
    lines += [f"note: {note}" for note in data["notes"]]
    click.echo("\n".join(lines))


@main.command()
@click.argument("spheres")
@click.option("--poincare", is_flag=True, help="print the rank of every graded piece")
@click.option("--degree", type=int, default=None, help="print the basis of one degree")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def ring(ctx, spheres, poincare, degree, fmt):
    """Cohomology ring summary for SPHERES."""
    payload = {
        "spheres": _parse_tuple(spheres),
        "poincare": poincare,
        "degree": degree,
    }
    data = _dispatch(ctx, "/ring", payload)
    if fmt == "json":
        click.echo(canonical_json(data))
        return
    lines = [
        f"spheres ({','.join(str(n) for n in data['spheres'])})",
        f"total rank {data['total_rank']}, top degree {data['top_degree']}",
        "relations: " + "; ".join(data["relations"]),
    ]
    if data["poincare"] is not None:
        lines.append("poincare: " + ",".join(str(r) for r in data["poincare"]))
    if data["basis"] is not None:
        lines.append(f"degree {data['degree']} basis: " + ", ".join(data["basis"]))
    click.echo("\n".join(lines))


@main.command()
@click.argument("spheres")
@click.option("--max-len", type=int, default=None, help="cap the searched product length")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def zcl(ctx, spheres, max_len, fmt):
    """Standard-generator zero-divisor cup-length of SPHERES (TC lower bound)."""
    payload = {"spheres": _parse_tuple(spheres), "max_len": max_len}
    data = _dispatch(ctx, "/zcl", payload)
    if fmt == "json":
        click.echo(canonical_json(data))
    else:
        click.echo(str(data["zcl"]))


@main.command()
@click.option("--sphere", "spheres", required=True, metavar="N[,M...]",
              help="sphere dimension, or a comma list for a product planner")
@click.option("--from", "start", required=True, metavar="COORDS",
              help="start point, comma-separated coordinates")
@click.option("--to", "goal", required=True, metavar="COORDS",
              help="goal point, comma-separated coordinates")
@click.option("--pole", default=None, metavar="COORDS",
              help="pole of the even-sphere planner (single sphere only)")
@click.option("--cap-radius", type=float, default=0.5, show_default=True)
@click.option("--t-samples", type=int, default=11, show_default=True)
@click.pass_context
def plan(ctx, spheres, start, goal, pole, cap_radius, t_samples):
    """Plan a path and print rule id, level and sampled points as JSON."""
    dims = [int(p) for p in spheres.split(",") if p.strip()]
    payload = {
        "spheres": dims,
        "start": _parse_floats(start),
        "goal": _parse_floats(goal),
        "pole": _parse_floats(pole) if pole else None,
        "cap_radius": cap_radius,
        "t_samples": t_samples,
    }
    data = _dispatch(ctx, "/plan", payload)
    click.echo(canonical_json(data))


@main.command()
@click.option("--sphere", "spheres", required=True, metavar="N[,M...]",
              help="sphere dimension, or a comma list for a product planner")
@click.option("--samples", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tolerance", type=float, default=1e-9, show_default=True)
@click.option("--t-samples", type=int, default=11, show_default=True)
@click.option("--cap-radius", type=float, default=0.5, show_default=True)
@click.pass_context
def verify(ctx, spheres, samples, seed, tolerance, t_samples, cap_radius):
    """Verify a planner by sampling; exit code 4 on any defect."""
    dims = [int(p) for p in spheres.split(",") if p.strip()]
    payload = {
        "spheres": dims,
        "samples": samples,
        "seed": seed,
        "tolerance": tolerance,
        "t_samples": t_samples,
        "cap_radius": cap_radius,
    }
    data = _dispatch(ctx, "/verify", payload)
    click.echo(canonical_json(data))
    if not data["ok"]:
        sys.exit(EXIT_VERIFICATION)


@main.command()
@click.option("--family", required=True, metavar="EXPR[,EXPR...]",
              help='entries as expressions in e, e.g. "2^e,2^e"')
@click.option("--range", "erange", default="1..5", show_default=True,
              metavar="A..B", help="range of e")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="write CSV here instead of stdout")
@click.pass_context
def table(ctx, family, erange, out):
    """CSV of bound reports over a parameterized family of sphere tuples."""
    try:
        start_s, stop_s = erange.split("..")
        start, stop = int(start_s), int(stop_s)
    except ValueError:
        _fail(f"cannot parse range {erange!r} (expected A..B)", EXIT_USAGE)
    payload = {
        "family": family,
        "start": start,
        "stop": stop,
        "overrides": _overrides(ctx),
    }
    data = _dispatch(ctx, "/table", payload)
    text = _csv_text(data["columns"], data["rows"])
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"wrote {len(data['rows'])} rows to {out}")
    else:
        click.echo(text, nl=False)


@main.command("nonsingular-check")
@click.argument("map_name", metavar="MAP")
@click.option("--left", default=None, metavar="TUPLE", help="cone tuple of the first factor")
@click.option("--right", default=None, metavar="TUPLE", help="cone tuple of the second factor")
@click.option("--variant", type=click.Choice(["classical", "biradial", "blockwise"]),
              default="classical", show_default=True)
@click.option("--budget", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def nonsingular_check(ctx, map_name, left, right, variant, budget, seed):
    """Sample a built-in map (real, complex, quaternion, octonion,
    inner_product) for zeros on unit-block cone pairs."""
    payload = {
        "map": map_name,
        "left": _parse_tuple(left) if left else None,
        "right": _parse_tuple(right) if right else None,
        "variant": variant,
        "budget": budget,
        "seed": seed,
    }
    data = _dispatch(ctx, "/check-map", payload)
    click.echo(canonical_json(data))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("ppsbounds.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
