"""Command-line entry point.

Exit status: 0 on success, 2 when the computation succeeded but the answer is
negative (no root, not divisible, condition fails), 1 on error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import acceptance, examples, plotting, schema
from .braid import tau
from .errors import ParseError, PolybraidError
from .family import NoRoot, perturb_off_discriminant
from .polycore import MonicPoly, discriminant, roots
from .progroup import (
    StageMorphism,
    decide_star_conditions,
    dual_m_divisible,
    pro_m_divisible_abelianized,
    realize_as_wedge_system,
)
from .sl2z import U_REF, V_REF, free_pair_check, image_rank_sum, psl_normal_form, verify_uv_identities
from .tracking import Tracker, auto_loops, loop_braid, solvability_verdict

OK, ERROR, NEGATIVE = 0, 1, 2
DEFAULT_SEED = 0


def default_seed() -> int:
    raw = os.environ.get("POLYBRAID_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"POLYBRAID_SEED must be an integer, got {raw!r}") from None


def _cjson(z: Any) -> Any:
    """Exact rationals stay numbers; everything else becomes [re, im]."""
    if isinstance(z, (int, np.integer)):
        return int(z)
    if isinstance(z, Fraction):
        return int(z) if z.denominator == 1 else str(z)
    z = complex(z)
    return [z.real, z.imag]


def parse_coeffs(text: str) -> MonicPoly:
    """JSON list (a_{n-1}, ..., a_0); entries are numbers or [re, im] pairs."""
    raw = schema.parse_text(text)
    if not isinstance(raw, list) or not raw:
        raise ParseError("coefficients must be a non-empty JSON list")
    vals = []
    for c in raw:
        if isinstance(c, bool):
            raise ParseError("booleans are not coefficients")
        if isinstance(c, int):
            vals.append(c)
        elif isinstance(c, float):
            vals.append(complex(c))
        elif isinstance(c, list) and len(c) == 2 and all(isinstance(x, (int, float)) for x in c):
            vals.append(complex(c[0], c[1]))
        else:
            raise ParseError(f"bad coefficient {c!r}")
    return MonicPoly.from_highest(vals)


def parse_loop_arg(text: str) -> list[str]:
    """'e1,-e2' -> ['e1', '-e2']."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ParseError("empty loop")
    return parts


def _loop_json(loop) -> list[str]:
    return [eid if s > 0 else f"-{eid}" for eid, s in loop]


def emit(doc: Any, out: str | None) -> None:
    text = schema.dumps(doc)
    if out:
        schema.write_atomic(out, text)
    else:
        sys.stdout.write(text)


# commands


def cmd_roots(a) -> int:
    p = parse_coeffs(a.coeffs)
    rs = roots(p, tol=a.tol)
    ordered = sorted(rs.roots, key=lambda z: (z.real, z.imag))
    emit({"degree": p.degree, "roots": [_cjson(z) for z in ordered], "tolerance": rs.tolerance}, a.out)
    return OK


def cmd_disc(a) -> int:
    p = parse_coeffs(a.coeffs)
    emit({"degree": p.degree, "discriminant": _cjson(discriminant(p)), "exact": p.is_exact}, a.out)
    return OK


def cmd_track(a) -> int:
    F = schema.load(a.family, "family")
    edges = [a.edge] if a.edge else [e.id for e in F.graph.edges]
    tracker = Tracker(F)
    doc = {}
    for eid in edges:
        tr = tracker.trajectory(eid)
        doc[eid] = {
            "params": [float(s) for s in tr.params],
            "positions": [[_cjson(z) for z in row] for row in tr.positions],
            "steps": len(tr.certificates),
        }
        if a.svg:
            path = Path(a.svg)
            target = path if len(edges) == 1 else path.with_name(f"{path.stem}_{eid}{path.suffix}")
            schema.write_atomic(target, plotting.strand_plot(tr.params, tr.positions, title=f"edge {eid}"))
    emit({"trajectories": doc}, a.out)
    return OK


def cmd_braid(a) -> int:
    F = schema.load(a.family, "family")
    tracker = Tracker(F)
    loops = auto_loops(F) if a.loop == "auto" else [parse_loop_arg(a.loop)]
    out = []
    for k, L in enumerate(loops):
        m = loop_braid(F, L, tracker)
        out.append(
            {
                "loop": _loop_json(m.loop),
                "braid": schema.braid_to_json(m.braid),
                "permutation": list(m.permutation.images),
                "rotation": m.rotation,
            }
        )
        if a.svg:
            path = Path(a.svg)
            target = path if len(loops) == 1 else path.with_name(f"{path.stem}_{k + 1}{path.suffix}")
            schema.write_atomic(target, plotting.braid_diagram(m.braid, title=" ".join(out[-1]["loop"])))
    emit({"monodromy": out}, a.out)
    return OK


def cmd_solve(a) -> int:
    F = schema.load(a.family, "family")
    loops = None if a.loops == "auto" else [parse_loop_arg(x) for x in a.loops.split(";")]
    v = solvability_verdict(F, loops)
    doc = {
        "loops": [_loop_json(L) for L in v.loops],
        "braids": [list(m.braid.letters) for m in v.monodromy],
        "permutations": [list(p.images) for p in v.permutations],
        "exact_root_exists": v.exact_root_exists,
        "completely_solvable": v.completely_solvable,
        "fixed_strands": sorted(v.fixed_strands),
    }
    if v.witness is not None:
        doc["witness_strand"] = v.witness_strand
        doc["witness"] = {eid: [_cjson(z) for z in vals] for eid, vals in v.witness.items()}
    emit(doc, a.out)
    return OK if v.exact_root_exists else NEGATIVE


def cmd_perturb(a) -> int:
    F = schema.load(a.family, "family")
    seed = a.seed if a.seed is not None else default_seed()
    res = perturb_off_discriminant(F, a.tol, budget=a.budget, rng_seed=seed)
    emit(
        {
            "family": schema.family_to_json(res.family),
            "deviation": res.deviation,
            "attempts": res.attempts,
            "min_discriminant": res.min_discriminant,
            "seed": seed,
        },
        a.out,
    )
    return OK


def cmd_mthroot(a) -> int:
    from .family import mth_root_on_loop, winding_number

    f = schema.load(a.loop, "scalar_loop")
    res = mth_root_on_loop(f, a.m)
    if isinstance(res, NoRoot):
        emit({"root_exists": False, "winding": res.winding, "m": a.m, "reason": res.reason}, a.out)
        return NEGATIVE
    emit({"root_exists": True, "winding": winding_number(f), "m": a.m, "root": schema.scalar_loop_to_json(res)}, a.out)
    return OK


def cmd_pro_divisible(a) -> int:
    P = schema.load(a.system, "profree")
    if a.phi:
        phi = schema.load(a.phi, "morphism")
        res = dual_m_divisible(P, phi, a.m, stage_budget=a.budget)
        verdict, stage = res.divisible, res.stage
        doc = {"m": a.m, "status": res.status, "divisible": verdict, "stage": stage}
    else:
        verdict = pro_m_divisible_abelianized(P, a.m, stage_budget=a.budget)
        doc = {"m": a.m, "divisible": verdict}
    emit(doc, a.out)
    return OK if verdict is not False else NEGATIVE


def cmd_pro_star(a) -> int:
    P = schema.load(a.system, "profree")
    phi = schema.load(a.phi, "morphism")
    d = decide_star_conditions(P, phi, stage_budget=a.budget)
    emit(
        {
            "stable_generators": [list(p.images) for p in d.stable_generators],
            "stable_order": d.stable_order,
            "star_n": d.star_n,
            "star_star_n": d.star_star_n,
            "stabilization_stage": d.stabilization_stage,
            "common_fixed": sorted(d.common_fixed),
            "exact": d.exact,
        },
        a.out,
    )
    return OK if d.star_n else NEGATIVE


def cmd_sl2z_verify(a) -> int:
    checks = verify_uv_identities()
    fp = free_pair_check(U_REF, V_REF, a.budget)
    doc = {
        "identities": [
            {"name": c.name, "product": c.product.rows(), "target": c.target.rows(), "sign": c.sign, "holds_in_psl": True}
            for c in checks
        ],
        "normal_forms": {"U": str(psl_normal_form(U_REF)), "V": str(psl_normal_form(V_REF))},
        "free_pair": {"free": fp.free, "length": fp.length, "relation": fp.relation, "words_checked": fp.words_checked},
        "image_rank_sum": image_rank_sum(U_REF, V_REF),
    }
    emit(doc, a.out)
    return OK if fp.free else NEGATIVE


def cmd_examples(a) -> int:
    name = a.name
    morph = None
    if name == "dyadic":
        P = examples.dyadic_solenoid()
    elif name == "universal":
        P = examples.universal_solenoid(a.k)
    elif name == "solenoid":
        P = examples.solenoid([int(x) for x in a.multipliers.split(",")])
    elif name == "deg-n":
        P, morph = examples.counterexample_deg_n(a.n, a.stages)
    elif name == "deg4":
        P, morph = examples.counterexample_deg4(a.stages)
    elif name == "acyclic":
        P = examples.acyclic_nonabelian(a.stages, a.word_budget, a.k_max)
    else:  # argparse restricts the choices
        raise ParseError(f"unknown example {name!r}")
    doc: dict[str, Any] = {"system": schema.profree_to_json(P)}
    if morph is not None:
        doc["morphism"] = schema.morphism_to_json(morph)
    if a.wedge:
        doc["wedge_system"] = realize_as_wedge_system(P)
    emit(doc, a.out)
    return OK


def cmd_render(a) -> int:
    doc = schema.parse_text(Path(a.input).read_text())
    if "strands" in doc and "word" in doc:
        svg = plotting.braid_diagram(schema.braid_from_json(doc))
    else:
        F = schema.family_from_json(doc)
        eid = a.edge or F.graph.edges[0].id
        tr = Tracker(F).trajectory(eid)
        svg = plotting.strand_plot(tr.params, tr.positions, title=f"edge {eid}")
    if a.out:
        schema.write_atomic(a.out, svg)
    else:
        sys.stdout.write(svg)
    return OK


def cmd_report(a) -> int:
    out = Path(a.out_dir)
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["criterion", "name", "passed", "seconds", "detail"])
    for r in results:
        w.writerow([r.number, r.name, "pass" if r.passed else "fail", f"{r.seconds:.3f}", r.detail])
    schema.write_atomic(out / "acceptance.tsv", buf.getvalue())
    schema.write_atomic(
        out / "acceptance.json",
        schema.dumps([{"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results]),
    )
    for name, svg in report_figures(results).items():
        schema.write_atomic(out / name, svg)
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed; artifacts in {out}")
    return OK if ok else ERROR


def report_figures(results: Sequence[acceptance.CriterionResult]) -> dict[str, str]:
    from .braid import b_commutator_dictionary
    from .family import PolyFamily, circle

    figs = {"acceptance.svg": plotting.verdict_bar([f"{r.number}. {r.name}" for r in results], [r.passed for r in results])}
    for n in (2, 3):
        F = PolyFamily.from_function(circle(12 * n), n, lambda _e, t: [-np.exp(2j * np.pi * t)] + [0.0] * (n - 1))
        tr = Tracker(F).trajectory("loop")
        figs[f"strands_n{n}.svg"] = plotting.strand_plot(tr.params, tr.positions, title=f"z^{n} - exp(2 pi i t)")
        m = loop_braid(F, ["loop"])
        figs[f"braid_n{n}.svg"] = plotting.braid_diagram(m.braid, title=f"monodromy, permutation {tau(m.braid)}")
    d = b_commutator_dictionary(4)
    for key in ("u", "v", "a", "b"):
        figs[f"b4_{key}.svg"] = plotting.braid_diagram(d[key], title=key)
    return figs


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polybraid", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", "-o", help="output path (default: stdout)")
        return p

    p = add("roots", cmd_roots, "roots of a monic polynomial given as '[a_{n-1}, ..., a_0]'")
    p.add_argument("coeffs")
    p.add_argument("--tol", type=float, default=1e-9)
    p = add("disc", cmd_disc, "discriminant of a monic polynomial")
    p.add_argument("coeffs")
    p = add("track", cmd_track, "track roots along the edges of a family")
    p.add_argument("family")
    p.add_argument("--edge")
    p.add_argument("--svg", help="write a strand plot here")
    p = add("braid", cmd_braid, "monodromy braid of a loop ('e1,-e2' or 'auto')")
    p.add_argument("family")
    p.add_argument("--loop", default="auto")
    p.add_argument("--svg", help="write a braid diagram here")
    p = add("solve", cmd_solve, "exact-root / complete-solvability verdict")
    p.add_argument("family")
    p.add_argument("--loops", default="auto", help="'auto' or loops separated by ';'")
    p = add("perturb", cmd_perturb, "shift a family off the discriminant variety")
    p.add_argument("family")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--budget", type=int, default=40)
    p.add_argument("--seed", type=int)
    p = add("mthroot", cmd_mthroot, "continuous m-th root of a non-vanishing loop")
    p.add_argument("loop")
    p.add_argument("--m", type=int, required=True)
    p = add("pro-divisible", cmd_pro_divisible, "m-divisibility of the dual (or abelianized) system")
    p.add_argument("system")
    p.add_argument("--phi", help="stage morphism to Z; omit to test every class")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--budget", type=int, default=64)
    p = add("pro-star", cmd_pro_star, "decide the strand conditions for a morphism into a braid group")
    p.add_argument("system")
    p.add_argument("phi")
    p.add_argument("--budget", type=int, default=256)
    p = add("sl2z-verify", cmd_sl2z_verify, "check the U, V identities, freeness and rank")
    p.add_argument("--budget", type=int, default=10)
    p = add("examples", cmd_examples, "emit a named inverse system as JSON")
    p.add_argument("name", choices=["dyadic", "universal", "solenoid", "deg-n", "deg4", "acyclic"])
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--stages", type=int, default=3)
    p.add_argument("--multipliers", default="2,2,2")
    p.add_argument("--word-budget", type=int, default=1)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--wedge", action="store_true", help="include the wedge-of-circles description")
    p = add("render", cmd_render, "SVG of a braid JSON or of a family's first edge")
    p.add_argument("input")
    p.add_argument("--edge")
    p = sub.add_parser("report", help="run every acceptance criterion and write TSV, JSON and SVG artifacts")
    p.set_defaults(func=cmd_report)
    p.add_argument("--out-dir", default="report")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        return a.func(a)
    except PolybraidError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return ERROR
    except (OSError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": "error", "message": str(exc)}) + "\n")
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
