"""Command-line front end: lattice info, orbits, portraits, scans,
trajectories and Ising reports, with cached orbit tables.

Commands
    lattice-info   one table row: n, k, |Aut|, states, orbit counts
    orbits         enumerate orbits, write CSV (and warm the cache)
    portrait       phase portrait per rule: DOT + CSV + summary
    scan           per-rule property report (reversibility etc.)
    trajectory     single-trajectory analysis on any lattice
    ising          spectrum, entropy curve and convex intruders

Orbit tables are cached under <out>/cache keyed by the content hash of the
serialized lattice, so repeated runs are cheap and byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import lattice as latmod
from .dynamics import (TrajectoryBudgetExceeded, build_portrait, scan_rules,
                       trajectory_analysis)
from .lattice import Lattice, LatticeError
from .mesoscopic import convex_intruders, density_of_states, entropy_curve
from .rules import Rule, class_representatives
from .statespace import (DEFAULT_STATE_CAP, OrbitTable, State, StateCapExceeded,
                         enumerate_orbits)
from .symmetry import (DEFAULT_GROUP_CAP, automorphisms, burnside_count,
                       is_transitive, permutation_dump, translation_group)


def _load_lattice(spec: str) -> Lattice:
    if spec.startswith("@"):
        return latmod.parse(Path(spec[1:]).read_text())
    return latmod.from_spec(spec)


def _load_rules(spec: str, k: int) -> list[Rule]:
    """Rule list spec: 'all136', or comma-separated codes / B-S strings."""
    if spec == "all136":
        return class_representatives(3)
    return [Rule.from_spec(tok, k=k) for tok in spec.split(",") if tok.strip()]


def _group_for(lat: Lattice, kind: str, cap: int):
    if kind == "translations":
        return translation_group(lat)
    return automorphisms(lat, cap=cap)


# ---------------------------------------------------------------------------
# orbit table cache


def _cache_key(lat: Lattice, q: int, group_kind: str) -> str:
    payload = latmod.serialize(lat) + f"|q={q}|group={group_kind}"
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _table_cached(lat: Lattice, group, q: int, group_kind: str,
                  cache_dir: Path | None, state_cap: int) -> OrbitTable:
    if cache_dir is None:
        return enumerate_orbits(lat, group, q=q, state_cap=state_cap)
    key = _cache_key(lat, q, group_kind)
    npz = cache_dir / f"{key}.npz"
    meta = cache_dir / f"{key}.json"
    if npz.exists() and meta.exists():
        data = np.load(npz)
        info = json.loads(meta.read_text())
        if info["order"] == group.order and info["q"] == q:
            index = data["index"] if "index" in data.files else None
            return OrbitTable(lat, group, q, data["reps"], data["sizes"], index)
    table = enumerate_orbits(lat, group, q=q, state_cap=state_cap)
    cache_dir.mkdir(parents=True, exist_ok=True)
    arrays = {"reps": table.reps, "sizes": table.sizes}
    if table.index is not None:
        arrays["index"] = table.index
    np.savez(npz, **arrays)
    meta.write_text(json.dumps({"lattice": lat.name, "q": q,
                                "order": group.order,
                                "group": group_kind}) + "\n")
    return table


# ---------------------------------------------------------------------------
# commands


def cmd_lattice_info(args) -> int:
    lat = _load_lattice(args.lattice)
    group = _group_for(lat, args.group, args.group_cap)
    q = args.q
    states = q ** lat.n
    burnside = burnside_count(group, q)
    print(f"lattice:     {lat.name}")
    print(f"vertices:    {lat.n}")
    print(f"valency:     {lat.k}")
    print(f"edges:       {lat.n_edges}")
    print(f"|Aut|:       {group.order}")
    print(f"transitive:  {is_transitive(group)}")
    print(f"states q^n:  {states}")
    print(f"orbits:      {burnside} (Burnside)")
    if states <= args.state_cap:
        table = enumerate_orbits(lat, group, q=q, state_cap=args.state_cap)
        print(f"enumerated:  {table.n_orbits}")
        if table.n_orbits != burnside:
            print("WARNING: enumeration disagrees with Burnside", file=sys.stderr)
            return 1
    else:
        print(f"enumerated:  skipped (state space exceeds cap {args.state_cap})")
    return 0


def cmd_orbits(args) -> int:
    lat = _load_lattice(args.lattice)
    group = _group_for(lat, args.group, args.group_cap)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cache = None if args.no_cache else out / "cache"
    table = _table_cached(lat, group, args.q, args.group, cache, args.state_cap)
    path = out / f"{_slug(lat.name)}_orbits.csv"
    path.write_text(table.to_csv())
    print(f"{table.n_orbits} orbits -> {path}")
    if args.dump_group:
        gpath = out / f"{_slug(lat.name)}_group.txt"
        gpath.write_text(permutation_dump(group, style=args.perm_format))
        print(f"group ({group.order} elements) -> {gpath}")
    return 0


def _slug(name: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in name).strip("_")


def cmd_portrait(args) -> int:
    lat = _load_lattice(args.lattice)
    group = _group_for(lat, args.group, args.group_cap)
    rules = _load_rules(args.rules, k=lat.k)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cache = None if args.no_cache else out / "cache"
    try:
        table = _table_cached(lat, group, args.q, args.group, cache, args.state_cap)
    except StateCapExceeded as exc:
        print(f"error: {exc}; use the `trajectory` command for single states",
              file=sys.stderr)
        return 2
    for rule in rules:
        adapted = rule.with_valency(lat.k)
        portrait = build_portrait(table, adapted)
        base = out / f"{_slug(lat.name)}_rule{rule.code}"
        if args.format in ("dot", "all"):
            Path(f"{base}.dot").write_text(portrait.to_dot())
        Path(f"{base}.csv").write_text(portrait.to_csv())
        views = f"rule {rule.code} = {rule.bs_string()}"
        if rule.k == 3:
            views += f" = {rule.polynomial()}"
        print(views)
        print(portrait.summary())
    return 0


def cmd_scan(args) -> int:
    lat = _load_lattice(args.lattice)
    group = _group_for(lat, args.group, args.group_cap)
    rules = _load_rules(args.rules, k=lat.k)
    props = []
    if args.reversible:
        props.append("reversible")
    if args.has_spaceship:
        props.append("has_spaceship")
    if args.has_eden:
        props.append("has_eden")
    if args.isolated_cycle is not None:
        props.append("has_isolated_cycle")
    if args.conserves:
        props.append(f"conserves_{args.conserves}")
    if not props:
        print("error: no properties requested", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cache = None if args.no_cache else out / "cache"
    table = _table_cached(lat, group, args.q, args.group, cache, args.state_cap)
    length = args.isolated_cycle if args.isolated_cycle not in (None, 0) else None

    if args.workers > 1:
        rows = _parallel_scan(table, rules, props, length, args.workers)
    else:
        rows = scan_rules(table, rules, props, cycle_length=length)

    lines = ["rule_code,property,value"]
    for row in rows:
        for p in props:
            lines.append(f"{row['rule']},{p},{str(row[p]).lower()}")
    path = out / f"{_slug(lat.name)}_scan.csv"
    path.write_text("\n".join(lines) + "\n")
    for p in props:
        hits = [row["rule"] for row in rows if row[p]]
        print(f"{p}: {len(hits)} of {len(rows)} rules -> {hits if len(hits) <= 20 else '...'}")
    print(f"report -> {path}")
    return 0


def _parallel_scan(table, rules, props, length, workers):
    """Shard the rule list over a fork pool; merge keeps rule-code order."""
    import multiprocessing as mp

    global _SCAN_CTX
    _SCAN_CTX = (table, props, length)
    try:
        ctx = mp.get_context("fork")
    except ValueError:
        return scan_rules(table, rules, props, cycle_length=length)
    rules = sorted(rules, key=lambda r: r.code)
    with ctx.Pool(workers) as pool:
        chunks = pool.map(_scan_shard, [rules[i::workers] for i in range(workers)])
    rows = [row for chunk in chunks for row in chunk]
    return sorted(rows, key=lambda row: row["rule"])


_SCAN_CTX = None


def _scan_shard(rules):
    table, props, length = _SCAN_CTX
    return scan_rules(table, rules, props, cycle_length=length)


def _parse_initial(args, lat: Lattice) -> State:
    text = args.init
    if text == "glider":
        return _glider_state(lat)
    if set(text) <= {"0", "1"} and len(text) == lat.n:
        return State.from_digits([int(ch) for ch in text], q=2)
    return State(code=int(text), q=2, n=lat.n)


def _glider_state(lat: Lattice) -> State:
    """Standard 5-cell glider at a fixed offset on a square torus."""
    if lat.family is None or lat.family[0] != "square":
        raise LatticeError("the glider pattern needs a square lattice")
    N = lat.family[1]
    if N < 5:
        raise LatticeError("glider needs N >= 5")
    cells = [(1, 0), (2, 1), (0, 2), (1, 2), (2, 2)]
    code = 0
    for x, y in cells:
        v = y * N + x
        code |= 1 << (lat.n - 1 - v)
    return State(code=code, q=2, n=lat.n)


def cmd_trajectory(args) -> int:
    lat = _load_lattice(args.lattice)
    group = _group_for(lat, args.group, args.group_cap)
    rules = _load_rules(args.rules, k=lat.k)
    if len(rules) != 1:
        print("error: trajectory needs exactly one rule", file=sys.stderr)
        return 2
    rule = rules[0].with_valency(lat.k)
    s0 = _parse_initial(args, lat)
    try:
        res = trajectory_analysis(lat, group, rule, s0, max_steps=args.max_steps)
    except TrajectoryBudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    print(f"transient:     {res.transient}")
    print(f"orbit period:  {res.orbit_period}")
    print(f"state period:  {res.state_period}")
    print(f"spaceship:     {res.is_spaceship}")
    print(f"shift element: {res.shift.cycle_string()}")
    return 0


def cmd_ising(args) -> int:
    lat = _load_lattice(args.lattice)
    group = _group_for(lat, args.group, args.group_cap)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cache = None if args.no_cache else out / "cache"
    table = _table_cached(lat, group, args.q, args.group, cache, args.state_cap)
    spec = density_of_states(table, J=args.J, B=args.B)
    report = convex_intruders(spec)
    base = _slug(lat.name)
    (out / f"{base}_spectrum.csv").write_text(spec.to_csv())
    curve = entropy_curve(spec)
    lines = ["e,s"] + [f"{e:.10g},{s:.10g}" for e, s in curve]
    (out / f"{base}_entropy.csv").write_text("\n".join(lines) + "\n")
    (out / f"{base}_intruders.csv").write_text(report.to_csv())
    if args.format in ("svg", "all"):
        rho = [(lv.E / lat.n, lv.count / spec.total) for lv in spec.levels]
        (out / f"{base}_entropy.svg").write_text(_svg_chart(
            curve, "e", "s", f"specific entropy: {lat.name}"))
        (out / f"{base}_dos.svg").write_text(_svg_chart(
            rho, "e", "rho", f"density of states: {lat.name}"))
    print(f"levels: {len(spec.levels)}, E in [{spec.levels[0].E}, {spec.levels[-1].E}]")
    if report.intruders:
        for iv in report.intruders:
            n = lat.n
            print(f"intruder: E in [{iv.E_start}, {iv.E_end}] "
                  f"(e in [{iv.E_start / n:.4g}, {iv.E_end / n:.4g}], "
                  f"{len(iv.witnesses)} witnesses)")
    else:
        print("no convex intruders (fully concave)")
    return 0


def _svg_chart(points, xlabel, ylabel, title, width=640, height=420) -> str:
    """Minimal standalone SVG polyline chart."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    spanx = (x1 - x0) or 1.0
    spany = (y1 - y0) or 1.0
    mx, my = 50, 30

    def px(x):
        return mx + (x - x0) / spanx * (width - 2 * mx)

    def py(y):
        return height - my - (y - y0) / spany * (height - 2 * my)

    pts = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in points)
    return f"""<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">
<rect width="100%" height="100%" fill="white"/>
<text x="{width / 2}" y="16" text-anchor="middle" font-size="13">{title}</text>
<text x="{width / 2}" y="{height - 6}" text-anchor="middle" font-size="11">{xlabel}</text>
<text x="12" y="{height / 2}" font-size="11" transform="rotate(-90 12 {height / 2})">{ylabel}</text>
<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.2"/>
<text x="{mx}" y="{height - my + 14}" font-size="10">{x0:.3g}</text>
<text x="{width - mx}" y="{height - my + 14}" text-anchor="end" font-size="10">{x1:.3g}</text>
<text x="{mx - 4}" y="{py(y0)}" text-anchor="end" font-size="10">{y0:.3g}</text>
<text x="{mx - 4}" y="{py(y1)}" text-anchor="end" font-size="10">{y1:.3g}</text>
</svg>
"""


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latsym",
                                 description="symmetry analysis of lattice dynamics")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, rules=False):
        p.add_argument("--lattice", required=True,
                       help="family spec like square(5,moore) or @file")
        p.add_argument("--out", default="latsym-out", help="output directory")
        p.add_argument("--q", type=int, default=2, help="values per vertex")
        p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
        p.add_argument("--group-cap", type=int, default=DEFAULT_GROUP_CAP)
        p.add_argument("--group", choices=("full", "translations"), default="full")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--no-cache", action="store_true")
        p.add_argument("--format", choices=("csv", "dot", "svg", "all"), default="all")
        if rules:
            p.add_argument("--rules", required=True,
                           help="comma-separated codes or B/S specs, or all136")

    p = sub.add_parser("lattice-info", help="symmetry summary for one lattice")
    common(p)
    p.set_defaults(func=cmd_lattice_info)

    p = sub.add_parser("orbits", help="enumerate orbits of the state space")
    common(p)
    p.add_argument("--dump-group", action="store_true")
    p.add_argument("--perm-format", choices=("cycles", "images"), default="cycles")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("portrait", help="phase portraits modulo symmetry")
    common(p, rules=True)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("scan", help="select rules with requested properties")
    common(p, rules=True)
    p.add_argument("--reversible", action="store_true")
    p.add_argument("--has-spaceship", action="store_true")
    p.add_argument("--has-eden", action="store_true")
    p.add_argument("--isolated-cycle", type=int, nargs="?", const=0, default=None,
                   metavar="LENGTH", help="isolated cycle, optionally of exact state period")
    p.add_argument("--conserves", choices=("magnetization", "energy"))
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("trajectory", help="single-trajectory analysis")
    common(p, rules=True)
    p.add_argument("--init", required=True,
                   help="bit string, integer code, or 'glider'")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("ising", help="microcanonical Ising statistics")
    common(p)
    p.add_argument("--J", type=int, default=1)
    p.add_argument("--B", type=int, default=0)
    p.set_defaults(func=cmd_ising)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.time()
    try:
        rc = args.func(args)
    except (LatticeError, StateCapExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if rc == 0:
        print(f"done in {time.time() - t0:.2f}s")
    return rc


if __name__ == "__main__":
    sys.exit(main())
