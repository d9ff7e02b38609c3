"""Batch front-end: parse JSON specifications, dispatch computations, emit
deterministic reports.

Exit codes: 0 all asserted checks passed, 1 usage or specification error,
2 a mathematical cross-check failed (the implementation-bug signal).
Reports are byte-identical for identical (spec, seed, version); wall-clock
timing therefore goes to stderr, never into a report.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, characters, conjugacy, criteria, gelfand, groups, morphisms
from .errors import MathCheckError, SpecError, TauMackeyError

ENV_SEED = "TAUMACKEY_SEED"
DEFAULT_SEED = characters.DEFAULT_SEED
COMMANDS = (
    "char-table",
    "fs",
    "simply-reducible",
    "gelfand",
    "clifford-battery",
    "condition-star",
    "power-sums",
)


@dataclass(frozen=True)
class Budgets:
    pairs: int = conjugacy.PAIR_BUDGET
    order: int = groups.ORDER_CAP
    classes: int = characters.CLASS_CAP


# ---------------------------------------------------------------------------
# specification parsing
# ---------------------------------------------------------------------------

def _load_json_arg(text: str, what: str):
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text  # bare shorthand like "inverse"


def build_group(spec, cap: int = groups.ORDER_CAP) -> groups.GroupTable:
    """Group specification: {"family": name, "n": int} |
    {"generators": [cycles], "degree": int} | {"product": [spec, spec]} |
    {"semidirect": {"base": spec, "tau": tau-spec}}."""
    if not isinstance(spec, dict):
        raise SpecError(f"group spec must be an object, got {spec!r}")
    if "family" in spec:
        return groups.construct_family(spec["family"], spec.get("n"), cap)
    if "generators" in spec:
        degree = spec.get("degree")
        if not isinstance(degree, int) or degree < 1:
            raise SpecError("generator specs need a positive integer 'degree'")
        perms = [groups.parse_cycles(s, degree) for s in spec["generators"]]
        return groups.enumerate_from_generators(
            perms, groups.perm_compose, groups.perm_label,
            "generators", cap, meta={"degree": degree},
        )
    if "product" in spec:
        parts = spec["product"]
        if not isinstance(parts, list) or len(parts) != 2:
            raise SpecError("'product' takes exactly two group specs")
        return groups.direct_product(build_group(parts[0], cap),
                                     build_group(parts[1], cap), cap)
    if "semidirect" in spec:
        inner = spec["semidirect"]
        base = build_group(inner.get("base"), cap)
        tau = build_tau(base, inner.get("tau"))
        return groups.construct_semidirect_with_involution(base, tau)
    raise SpecError(f"group spec needs one of family/generators/product/semidirect: {spec}")


def build_tau(G: groups.GroupTable, spec) -> morphisms.GroupMap:
    """tau specification: "inverse" | "identity" | "clifford" |
    {"inner": element} | {"generator_images": {gen: image}}."""
    if spec is None:
        spec = "inverse"
    if isinstance(spec, dict) and set(spec) == {"tau"}:
        spec = spec["tau"]
    if spec == "inverse":
        return morphisms.tau_inverse(G)
    if spec == "identity":
        return morphisms.tau_identity(G)
    if spec == "clifford":
        return morphisms.tau_clifford(G)
    if isinstance(spec, dict) and "inner" in spec:
        return morphisms.tau_inner(G, G.element_id(spec["inner"]))
    if isinstance(spec, dict) and "generator_images" in spec:
        pairs = {
            G.element_id(k): G.element_id(v)
            for k, v in spec["generator_images"].items()
        }
        return morphisms.tau_from_generator_images(G, pairs)
    raise SpecError(f"bad tau spec: {spec!r}")


def build_sigma(G: groups.GroupTable, spec) -> morphisms.GroupMap:
    """Automorphism specification: "identity" | {"inner": element} |
    {"generator_images": {...}}."""
    if spec == "identity":
        return morphisms.validate(G, np.arange(G.order), "automorphism")
    if isinstance(spec, dict) and "inner" in spec:
        g0 = G.element_id(spec["inner"])
        images = np.array([G.conj(g0, x) for x in range(G.order)], dtype=np.int64)
        return morphisms.validate(G, images, "automorphism")
    if isinstance(spec, dict) and "generator_images" in spec:
        raise SpecError("generator_images sigma specs are not supported; use inner")
    raise SpecError(f"bad sigma spec: {spec!r}")


def build_subgroup(G: groups.GroupTable, spec) -> np.ndarray:
    """Subgroup specification: {"generators": [...]} |
    {"centralizer_of_sigma": sigma-spec}."""
    if isinstance(spec, dict) and "generators" in spec:
        ids = [G.element_id(s) for s in spec["generators"]]
        return groups.subgroup_closure(G, ids)
    if isinstance(spec, dict) and "centralizer_of_sigma" in spec:
        sigma = build_sigma(G, spec["centralizer_of_sigma"])
        return np.flatnonzero(sigma.images == np.arange(G.order)).astype(np.int64)
    raise SpecError(f"bad subgroup spec: {spec!r}")


# ---------------------------------------------------------------------------
# payload helpers
# ---------------------------------------------------------------------------

def _exact(value: int) -> dict:
    """Exact integers travel as decimal strings, tagged."""
    return {"value": str(int(value)), "exact": True}


def _identity(holds: bool, residual: float | None = None) -> dict:
    out: dict = {"holds": bool(holds)}
    if residual is None:
        out["exact"] = True
    else:
        out["residual"] = float(residual)
    return out


def _fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _verdict_payload(v: criteria.SRVerdict) -> dict:
    cosets: dict | bool
    if v.mackey_cosets is None:
        cosets = {"skipped": v.skipped.get("mackey_cosets", "pair budget exceeded")}
    else:
        cosets = v.mackey_cosets
    payload = {
        "definition": {
            "multiplicity_free": v.definition_mf,
            "all_rows_self_conjugate": v.definition_selfconj,
            "holds": v.definition,
        },
        "mackey_cosets": cosets,
        "mackey_wigner": {
            "holds": v.mackey_wigner,
            "sum_twisted_cubes": _exact(v.sums[0]),
            "sum_centralizer_squares": _exact(v.sums[1]),
        },
        "witnesses": v.witnesses,
        "partially_verified": v.partially_verified,
        "agree": v.agree,
    }
    if v.agree:
        payload["simply_reducible"] = v.verdicts[0]
    return payload


# ---------------------------------------------------------------------------
# command handlers: each returns (payload, exit_code)
# ---------------------------------------------------------------------------

def _cmd_char_table(job, seed, budgets):
    G = build_group(job["group"], budgets.order)
    table = characters.compute_character_table(G, seed, budgets.classes)
    return characters.table_to_jsonable(table), 0


def _cmd_fs(job, seed, budgets):
    G = build_group(job["group"], budgets.order)
    tau = build_tau(G, job.get("tau"))
    table = characters.compute_character_table(G, seed, budgets.classes)
    tw = characters.twisted_fs_indicators(table, tau)
    census = characters.self_conjugate_census(table, tau)
    expansion = characters.twisted_count_expansion_residual(table, tau)
    payload = {
        "order": G.order,
        "degrees": [int(d) for d in table.degrees],
        "twisted_indicators": [int(x) for x in tw.values],
        "indicator_residual": tw.max_residual,
        "census": {
            "self_conjugate_rows": census.count,
            "tau_invariant_classes": census.invariant_class_route,
            "averaged_squared_counts": census.squared_count_route,
            "equal": _identity(True),
        },
        "count_expansion": _identity(expansion < 1e-6, expansion),
    }
    if np.array_equal(tau.images, G.inverse):
        payload["classical_indicators"] = [
            int(x) for x in characters.fs_indicators(table)
        ]
    return payload, 0


def _cmd_simply_reducible(job, seed, budgets):
    G = build_group(job["group"], budgets.order)
    tau = build_tau(G, job.get("tau"))
    table = characters.compute_character_table(G, seed, budgets.classes)
    v = criteria.simply_reducible_verdict(G, tau, table, budgets.pairs)
    return _verdict_payload(v), 0 if v.agree else 2


def _cmd_power_sums(job, seed, budgets):
    G = build_group(job["group"], budgets.order)
    tau = build_tau(G, job.get("tau"))
    n = int(job.get("n", 2))
    rep = conjugacy.power_sum_report(G, tau, n, budgets.pairs)
    verified: dict | bool
    if rep.verified_against_orbits is None:
        verified = {"skipped": rep.skipped_reason or "orbit scan skipped"}
    else:
        verified = rep.verified_against_orbits
    return {
        "n": n,
        "sum_centralizer_pow": _exact(rep.sum_centralizer_pow),
        "sum_twisted_pow": _exact(rep.sum_twisted_square_pow),
        "equal": rep.equal,
        "verified_against_orbits": verified,
    }, 0


def _cmd_gelfand(job, seed, budgets):
    G = build_group(job["group"], budgets.order)
    tau = build_tau(G, job.get("tau"))
    if "subgroup" not in job:
        raise SpecError("gelfand needs a 'subgroup' spec")
    K = build_subgroup(G, job["subgroup"])
    space = gelfand.build_coset_space(G, K)
    table = characters.compute_character_table(G, seed, budgets.classes)
    rep = gelfand.gelfand_criteria_report(space, tau, table, pair_budget=budgets.pairs)
    payload = {
        "order": G.order,
        "subgroup_order": len(K),
        "points": space.size,
        "gelfand": rep.gelfand,
        "rank": rep.rank,
        "multiplicities": [int(m) for m in rep.multiplicities],
        "hypothesis_twisted_equivalent": rep.hypothesis_holds,
        "weak_symmetry": rep.weak_symmetry,
        "subgroup_tau_invariant": rep.subgroup_tau_invariant,
        "conditions": {
            "skew_dim_zero": rep.cond_skew_dim_zero,
            "orbits_symmetric": rep.cond_orbits_symmetric,
            "double_cosets_invariant": rep.cond_cosets_invariant,
            "constituents_indicator_one": rep.cond_constituents_positive,
        },
        "orbit_analysis": {
            "orbits": rep.analysis.orbit_count,
            "symmetric": rep.analysis.m_symmetric,
            "antisymmetric": rep.analysis.m_antisymmetric,
            "hom_sym_dim": rep.analysis.hom_sym_dim,
            "hom_skew_dim": rep.analysis.hom_skew_dim,
        },
        "equivalences": (
            _identity(True) if rep.equivalences_asserted
            else {"skipped": "twisted permutation representation not equivalent"}
        ),
    }
    if rep.gelfand:
        sph = gelfand.spherical_functions(space, table)
        tw = gelfand.twisted_fs_gelfand(space, tau, table)
        payload["spherical"] = {
            "constituent_rows": [int(i) for i in sph.constituent_rows],
            "normalization": _identity(True, sph.normalization_residual),
            "inversion": _identity(True, sph.inversion_residual),
            "orthogonality": _identity(True, sph.orthogonality_residual),
        }
        payload["twisted_pair"] = {
            "indicators": [int(x) for x in tw.indicator_values],
            "averaged_indicator": _identity(True, tw.averaged_indicator_residual),
            "squared_count_average": {
                "lhs": _fraction(tw.degree_sum_lhs),
                "rhs": _fraction(tw.degree_sum_rhs),
                "exact": True,
                "holds": tw.degree_sum_lhs == tw.degree_sum_rhs,
            },
            "count_inversion": _identity(True, tw.count_inversion_residual),
            "self_conjugate_constituents": tw.self_conjugate_constituents,
            "tau_invariant_k_orbits": (
                tw.tau_invariant_k_orbits
                if tw.tau_invariant_k_orbits is not None
                else {"skipped": tw.skipped.get("k_orbit_comparison", "")}
            ),
        }
    else:
        payload["spherical"] = {"skipped": "pair is not multiplicity-free"}
        payload["twisted_pair"] = {"skipped": "pair is not multiplicity-free"}
    return payload, 0


def _cmd_condition_star(job, seed, budgets):
    G = build_group(job["group"], budgets.order)
    if "sigma" not in job:
        raise SpecError("condition-star needs a 'sigma' spec")
    sigma = build_sigma(G, job["sigma"])
    star = gelfand.condition_star(G, sigma, seed, budgets.pairs)
    payload = {
        "holds": star.holds,
        "fixed_subgroup_order": star.fixed_subgroup_order,
        "omega_size": star.omega_size,
        "omega_classes_in_group": star.omega_classes_in_group,
        "omega_classes_in_fixed_subgroup": star.omega_classes_in_fixed_subgroup,
        "gelfand": (
            star.gelfand if star.gelfand is not None
            else {"skipped": star.skipped.get("gelfand_assertion", "")}
        ),
        "rank": star.rank,
    }
    return payload, 0


def _cmd_clifford_battery(job, seed, budgets):
    n_max = int(job.get("n", 5))
    entries = []
    worst = 0
    for n in range(1, n_max + 1):
        G = groups.construct_family("clifford", n, budgets.order)
        tau = morphisms.tau_clifford(G)
        table = characters.compute_character_table(G, seed, budgets.classes)
        v = criteria.simply_reducible_verdict(G, tau, table, budgets.pairs)
        closed_form = 2 ** (3 * n + 1)
        entries.append({
            "n": n,
            "order": G.order,
            "tau": "sign-twisted" if n % 4 == 3 else "inverse",
            "verdict": _verdict_payload(v),
            "closed_form_2_pow_3n_plus_1": _exact(closed_form),
            "matches_closed_form": v.sums[1] == closed_form,
        })
        worst = max(worst, 0 if v.agree else 2)
    return {"entries": entries}, worst


_HANDLERS = {
    "char-table": _cmd_char_table,
    "fs": _cmd_fs,
    "simply-reducible": _cmd_simply_reducible,
    "power-sums": _cmd_power_sums,
    "gelfand": _cmd_gelfand,
    "condition-star": _cmd_condition_star,
    "clifford-battery": _cmd_clifford_battery,
}


# ---------------------------------------------------------------------------
# job running, reports, cache
# ---------------------------------------------------------------------------

def run_job(job: dict, seed: int, budgets: Budgets | None = None) -> tuple[dict, int]:
    """Run one job spec into a (report, exit_code) pair."""
    budgets = budgets or Budgets()
    command = job.get("command")
    if command not in _HANDLERS:
        raise SpecError(f"unknown command {command!r}; expected one of {COMMANDS}")
    report = {
        "tool": "taumackey",
        "version": __version__,
        "command": command,
        "input": {k: v for k, v in job.items() if k != "command"},
        "seed": seed,
        "budget_pairs": budgets.pairs,
    }
    try:
        payload, code = _HANDLERS[command](job, seed, budgets)
    except MathCheckError as exc:
        report["payload"] = {"cross_check_failure": str(exc)}
        return report, 2
    report["payload"] = payload
    return report, code


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict, indent: int = 0) -> str:
    lines = []

    def walk(obj, depth):
        pad = "  " * depth
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}{k}:")
                    walk(v, depth + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}- [{i}]")
                    walk(v, depth + 1)
                else:
                    lines.append(f"{pad}- {v}")
        else:
            lines.append(f"{pad}{obj}")

    walk(report, indent)
    return "\n".join(lines) + "\n"


def _cache_key(job: dict, seed: int, budgets: Budgets) -> str:
    blob = json.dumps(
        {
            "job": job,
            "seed": seed,
            "budget": [budgets.pairs, budgets.order, budgets.classes],
            "version": __version__,
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def _run_isolated(job: dict, job_seed: int, budgets: Budgets) -> dict:
    """One job, with specification errors contained in its own report."""
    try:
        report, code = run_job(job, job_seed, budgets)
    except SpecError as exc:
        report = {
            "tool": "taumackey",
            "version": __version__,
            "command": job.get("command"),
            "input": {k: v for k, v in job.items() if k != "command"},
            "seed": job_seed,
            "budget_pairs": budgets.pairs,
            "payload": {"error": str(exc)},
        }
        code = 1
    return {"report": report, "exit_code": code}


def run_batch(
    manifest: dict,
    seed: int,
    budgets: Budgets | None = None,
    cache_dir: Path | None = None,
    workers: int = 1,
) -> tuple[dict, int, dict]:
    """Run every job in a manifest on a bounded worker pool; per-job reports
    are cached by a content hash of (spec, seed, budgets, version).  Returns
    (aggregate, worst_exit_code, cache_stats)."""
    budgets = budgets or Budgets()
    jobs = manifest.get("jobs")
    if not isinstance(jobs, list):
        raise SpecError("manifest must be an object with a 'jobs' list")
    stats = {"jobs": len(jobs), "cache_hits": 0, "cache_misses": 0}
    results: list[dict | None] = [None] * len(jobs)
    pending = []
    for i, job in enumerate(jobs):
        job_seed = int(job.get("seed", seed))
        key = _cache_key(job, job_seed, budgets)
        if cache_dir is not None:
            path = cache_dir / f"{key}.json"
            if path.exists():
                results[i] = json.loads(path.read_text())
                stats["cache_hits"] += 1
                continue
        pending.append((i, job, job_seed, key))
    if pending:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [
                    (i, key, pool.submit(_run_isolated, job, job_seed, budgets))
                    for i, job, job_seed, key in pending
                ]
                outcomes = [(i, key, f.result()) for i, key, f in futures]
        else:
            outcomes = [
                (i, key, _run_isolated(job, job_seed, budgets))
                for i, job, job_seed, key in pending
            ]
        for i, key, outcome in outcomes:
            results[i] = outcome
            if cache_dir is not None:
                stats["cache_misses"] += 1
                cache_dir.mkdir(parents=True, exist_ok=True)
                (cache_dir / f"{key}.json").write_text(
                    json.dumps(outcome, sort_keys=True, indent=2) + "\n"
                )
    reports = [r["report"] for r in results]
    worst = max((r["exit_code"] for r in results), default=0)
    aggregate = {
        "tool": "taumackey",
        "version": __version__,
        "command": "batch",
        "seed": seed,
        "budget_pairs": budgets.pairs,
        "jobs": reports,
        "exit_code": worst,
    }
    return aggregate, worst, stats


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget-pairs", type=int, default=conjugacy.PAIR_BUDGET)
    p.add_argument("--budget-order", type=int, default=groups.ORDER_CAP)
    p.add_argument("--budget-classes", type=int, default=characters.CLASS_CAP)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", type=str, default=None)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taumackey",
        description=(
            "Exact twisted Frobenius-Schur, simple-reducibility, and "
            "Gelfand-pair checks on small finite groups"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--group", type=str, default=None,
                       help="group spec as JSON or @file")
        p.add_argument("--tau", type=str, default=None)
        p.add_argument("--subgroup", type=str, default=None)
        p.add_argument("--sigma", type=str, default=None)
        p.add_argument("--n", type=int, default=None)
        _add_common(p)
    b = sub.add_parser("batch")
    b.add_argument("manifest", type=str)
    b.add_argument("--cache-dir", type=str, default=".taumackey-cache")
    b.add_argument("--workers", type=int, default=1)
    _add_common(b)
    return parser


def _effective_seed(arg_seed) -> int:
    if arg_seed is not None:
        return int(arg_seed)
    env = os.environ.get(ENV_SEED)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise SpecError(f"{ENV_SEED} must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    started = time.perf_counter()
    try:
        seed = _effective_seed(args.seed)
        budgets = Budgets(args.budget_pairs, args.budget_order, args.budget_classes)
        if args.command == "batch":
            manifest = json.loads(Path(args.manifest).read_text())
            cache_dir = Path(args.cache_dir) if args.cache_dir else None
            aggregate, code, stats = run_batch(
                manifest, seed, budgets, cache_dir, workers=args.workers
            )
            text = (
                render_report(aggregate)
                if args.format == "json"
                else render_text(aggregate)
            )
            _emit(text, args.out)
            print(
                f"batch: {stats['jobs']} jobs, {stats['cache_hits']} cache hits, "
                f"{time.perf_counter() - started:.2f}s",
                file=sys.stderr,
            )
            return code
        job = {"command": args.command}
        for key in ("group", "tau", "subgroup", "sigma"):
            raw = getattr(args, key)
            if raw is not None:
                job[key] = _load_json_arg(raw, key)
        if args.n is not None:
            job["n"] = args.n
        if args.command != "clifford-battery" and "group" not in job:
            raise SpecError(f"{args.command} needs --group")
        report, code = run_job(job, seed, budgets)
        text = render_report(report) if args.format == "json" else render_text(report)
        _emit(text, args.out)
        print(
            f"{args.command}: {time.perf_counter() - started:.2f}s", file=sys.stderr
        )
        return code
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MathCheckError as exc:
        print(f"cross-check failure: {exc}", file=sys.stderr)
        return 2
    except TauMackeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
