"""Batch command-line front end. One JSON document on stdout per run.

Exit codes: 0 success, 1 a checked property failed (the report is still
printed), 2 bad input (``{"error": {"kind", "detail"}}``).
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from . import basechange as bc
from . import dpaxioms as dpa
from . import gamma as gm
from . import polylaw as pl
from .errors import GammaForgeError, MalformedInput, all_error_classes
from .jsonio import (
    dumps,
    gamma_from_json,
    gamma_to_json,
    loads,
    polylaw_from_json,
    polylaw_to_json,
    spec_from_json,
    to_json,
    vector_from_json,
    vector_to_json,
    coords_from_json,
)
from .sampling import DEFAULT_SEED, SEED_ENV, case_rng, random_gamma, spec_of
from .scalars import ZZ, parse_ring

# library error class name -> CLI error kind
ERROR_KINDS = {cls.__name__: cls.kind for cls in all_error_classes()}
USAGE_KIND = "UsageError"


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    input: str | None = None
    seed: int = DEFAULT_SEED
    samples: int = 200
    max_n: int = 4
    budget: int = gm.DEFAULT_BUDGET
    output: str | None = None
    pretty: bool = False
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if self.max_n < 2:
            raise UsageError("--max-n must be >= 2")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")


def _seed_default() -> int:
    env = os.environ.get(SEED_ENV)
    return int(env, 0) if env else DEFAULT_SEED


def _int(text: str) -> int:
    return int(text, 0)


def _labels(text: str | None) -> list:
    return [x for x in (text or "").split(",") if x]


def _read_input(cfg: CliConfig, required: bool = True):
    src = cfg.input
    if src is None:
        if required:
            raise MalformedInput("this command needs --input (a path, inline JSON, or '-')")
        return None
    if src == "-":
        return loads(sys.stdin.read())
    if src.lstrip().startswith(("{", "[")):
        return loads(src)
    if not os.path.exists(src):
        raise MalformedInput(f"input {src!r} is neither inline JSON nor an existing file")
    with open(src, encoding="utf-8") as fh:
        return loads(fh.read())


def _field(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedInput(f"input needs a {key!r} field")
    return doc[key]


def _need(cfg: CliConfig, key: str):
    value = cfg.extra.get(key)
    if value is None:
        raise UsageError(f"--{key.replace('_', '-')} is required for {cfg.command}")
    return value


# --------------------------------------------------------------------------
# commands; each returns (document, ok)


def cmd_gamma_mul(cfg):
    doc = _read_input(cfg)
    a = gamma_from_json(_field(doc, "a"))
    b = gamma_from_json(_field(doc, "b"))
    return gamma_to_json(gm.g_mul(a, b)), True


def cmd_gamma_dp(cfg):
    x = vector_from_json(_read_input(cfg))
    return gamma_to_json(gm.dp_generator(_need(cfg, "n"), x)), True


def cmd_gamma_n(cfg):
    a = gamma_from_json(_read_input(cfg))
    return gamma_to_json(gm.gamma_n(_need(cfg, "n"), a, budget=cfg.budget)), True


def cmd_gamma_map(cfg):
    doc = _read_input(cfg)
    a = gamma_from_json(_field(doc, "element"))
    target = spec_from_json(_field(doc, "target"))
    cols_doc = _field(doc, "columns")
    if not isinstance(cols_doc, dict):
        raise MalformedInput("columns must map source labels to coordinate objects")
    cols = {x: gm.ModuleVector(target, coords_from_json(target, c)) for x, c in cols_doc.items()}
    return gamma_to_json(gm.map_linear(cols, a, target)), True


def cmd_gamma_quotient(cfg):
    doc = _read_input(cfg)
    a = gamma_from_json(_field(doc, "element"))
    drop = _field(doc, "drop")
    if not isinstance(drop, list):
        raise MalformedInput("drop must be a list of basis labels")
    return gamma_to_json(gm.quotient_by_basis_span(drop, a)), True


def _structure(cfg):
    kind = cfg.extra.get("structure") or "gamma"
    ring = parse_ring(cfg.extra.get("ring") or "Z")
    if kind == "rational":
        return dpa.rational_canonical(ring, _labels(cfg.extra.get("ideal")))
    spec = spec_of(ring, cfg.extra.get("rank") or 2)
    dp = dpa.gamma_augmentation(spec, budget=cfg.budget)
    if kind == "oracle":
        dp = dpa.oracle_structure(spec)
    elif kind == "quotient":
        drop = _labels(cfg.extra.get("drop")) or [spec.basis.labels[-1]]
        dp = dpa.quotient_dp(dp, drop, seed=cfg.seed, max_n=cfg.max_n)
    elif kind != "gamma":
        raise UsageError(f"unknown structure {kind!r}")
    return dp


def cmd_axioms_check(cfg):
    dp = _structure(cfg)
    mutate = cfg.extra.get("mutate")
    if mutate:
        if mutate not in dpa.MUTATIONS:
            raise UsageError(f"--mutate must be one of {sorted(dpa.MUTATIONS)}")
        dp = dpa.corrupt(dp, mutate)
    report = dpa.check_axioms(dp, cfg.seed, cfg.samples, cfg.max_n, jobs=cfg.jobs)
    return {"structure": dp.name, "ok": report.ok, "axioms": report.to_json()}, report.ok


def cmd_oracle_check(cfg):
    doc = _read_input(cfg, required=False)
    if doc is not None:
        a = gamma_from_json(doc)
        n = _need(cfg, "n")
        ours, oracle = gm.gamma_n(n, a, budget=cfg.budget), dpa.gamma_oracle(n, a)
        return {"gamma": gamma_to_json(ours), "oracle": gamma_to_json(oracle), "agree": ours == oracle}, ours == oracle
    ring = parse_ring(cfg.extra.get("ring") or "Z")
    max_rank = cfg.extra.get("rank") or 3
    mismatches = []
    for i in range(cfg.samples):
        rng = case_rng(cfg.seed, "oracle", i)
        spec = spec_of(ring, rng.randint(1, max_rank))
        a = random_gamma(rng, spec)
        n = rng.randint(0, cfg.max_n)
        if gm.gamma_n(n, a, budget=cfg.budget) != dpa.gamma_oracle(n, a):
            mismatches.append({"case": i, "n": n, "element": gamma_to_json(a)})
    ok = not mismatches
    return {"samples": cfg.samples, "mismatches": len(mismatches),
            "first": mismatches[0] if mismatches else None, "ok": ok}, ok


def cmd_law_eval(cfg):
    doc = _read_input(cfg)
    f = polylaw_from_json(_field(doc, "law"))
    m = vector_from_json(_field(doc, "at"))
    return vector_to_json(pl.eval_at(f, m)), True


def cmd_law_coeff(cfg):
    doc = _read_input(cfg)
    f = polylaw_from_json(_field(doc, "law"))
    fam_doc = doc.get("family")
    if fam_doc is None:
        family = {x: f.source.basis_vector(x) for x in f.source.basis.labels}
    elif isinstance(fam_doc, dict):
        family = {name: gm.ModuleVector(f.source, coords_from_json(f.source, c)) for name, c in fam_doc.items()}
    else:
        raise MalformedInput("family must map names to coordinate objects")
    table = pl.coeff_of(f, family)
    rows = sorted(table.items(), key=lambda kv: kv[0].sort_key)
    return {"family": list(family), "coeffs": [{"exps": k.as_dict(), "vector": to_json(v)["coords"]}
                                               for k, v in rows]}, True


def cmd_law_component(cfg):
    f = polylaw_from_json(_field(_read_input(cfg), "law"))
    d = cfg.extra.get("d")
    if d is not None:
        return polylaw_to_json(pl.component(f, d)), True
    parts = pl.components(f)
    return {"components": [{"d": k, "law": polylaw_to_json(v)} for k, v in parts.items()],
            "sum_matches": pl.component_sum(f) == f}, pl.component_sum(f) == f


def cmd_law_diff(cfg):
    f = polylaw_from_json(_field(_read_input(cfg), "law"))
    n = _need(cfg, "n")
    a = pl.divided_differential_structural(n, f)
    b = pl.divided_differential_extraction(n, f)
    return {"law": polylaw_to_json(a), "paths_agree": a == b}, a == b


def cmd_law_factor(cfg):
    f = polylaw_from_json(_field(_read_input(cfg), "law"))
    phi = pl.factor_homogeneous(f, cfg.extra.get("d"))
    return {"target": to_json(f.target), "columns": {k: to_json(v)["coords"] for k, v in phi.items()}}, True


def cmd_basechange_verify(cfg):
    ext = bc.parse_extension(cfg.extra.get("ext") or "Z->Q")
    rank = cfg.extra.get("rank") or 2
    report = bc.verify_extension(ext, rank, cfg.seed, cfg.samples, max_n=min(cfg.max_n, 3))
    spec = spec_of(ext.base, rank)
    table = bc.theta_table(ext, spec, 3)
    report["uniqueness"] = bc.theta_uniqueness(ext, spec, table, cfg.seed)
    ok = report["ok"] and report["uniqueness"]
    report["ok"] = ok
    return report, ok


def cmd_reduction_check(cfg):
    mods = [int(x) for x in _labels(cfg.extra.get("mod") or "4,6,9")]
    doc = _read_input(cfg, required=False)
    if doc is not None:
        a = gamma_from_json(doc)
        n = _need(cfg, "n")
        results = {str(q): bc.reduction_square(q, a, n) for q in mods}
        ok = all(results.values())
        return {"commutes": results, "ok": ok}, ok
    failures = 0
    for i in range(cfg.samples):
        rng = case_rng(cfg.seed, "reduction", i)
        spec = spec_of(ZZ, rng.randint(1, cfg.extra.get("rank") or 3))
        a = random_gamma(rng, spec)
        m = rng.randint(0, cfg.max_n)
        q = rng.choice(mods)
        if not bc.reduction_square(q, a, m):
            failures += 1
    return {"samples": cfg.samples, "moduli": mods, "failures": failures, "ok": failures == 0}, failures == 0


COMMANDS = {
    "gamma-mul": (cmd_gamma_mul, "product of two elements {a, b}"),
    "gamma-dp": (cmd_gamma_dp, "x^[n] of a module vector"),
    "gamma-n": (cmd_gamma_n, "gamma_n of an augmentation-ideal element"),
    "gamma-map": (cmd_gamma_map, "Gamma(f) applied to {element, target, columns}"),
    "gamma-quotient": (cmd_gamma_quotient, "projection {element, drop} to Gamma(M/span(drop))"),
    "axioms-check": (cmd_axioms_check, "run the divided power axiom harness"),
    "oracle-check": (cmd_oracle_check, "compare gamma_n with the fraction-field oracle"),
    "law-eval": (cmd_law_eval, "evaluate {law, at}"),
    "law-coeff": (cmd_law_coeff, "coefficients of {law, family}"),
    "law-component": (cmd_law_component, "homogeneous components of {law}"),
    "law-diff": (cmd_law_diff, "divided differential D^n of {law}"),
    "law-factor": (cmd_law_factor, "linear factorisation of a homogeneous {law}"),
    "basechange-verify": (cmd_basechange_verify, "check theta for an extension"),
    "reduction-check": (cmd_reduction_check, "reduction mod n commutes with gamma_n"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gamma-forge", description="Divided power algebras and polynomial laws, exactly.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text, description=help_text)
        s.add_argument("--input", help="path, inline JSON, or '-' for stdin")
        s.add_argument("--seed", type=_int, default=None, help=f"default {DEFAULT_SEED:#x} or ${SEED_ENV}")
        s.add_argument("--samples", type=int, default=200)
        s.add_argument("--max-n", type=int, default=4)
        s.add_argument("--budget", type=int, default=gm.DEFAULT_BUDGET)
        s.add_argument("--output", help="write JSON here instead of stdout")
        s.add_argument("--pretty", action="store_true")
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--n", type=int)
        s.add_argument("--d", type=int)
        s.add_argument("--ring")
        s.add_argument("--rank", type=int)
        s.add_argument("--ext")
        s.add_argument("--mod")
        s.add_argument("--structure", choices=["gamma", "oracle", "rational", "quotient"])
        s.add_argument("--ideal", help="comma-separated monomial generators (rational structure)")
        s.add_argument("--drop", help="comma-separated basis labels (quotient structure)")
        s.add_argument("--mutate", help="corrupt gamma to exercise the harness")
    return p


def parse_config(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    common = {"command", "input", "seed", "samples", "max_n", "budget", "output", "pretty", "jobs"}
    extra = {k: v for k, v in vars(ns).items() if k not in common}
    return CliConfig(
        command=ns.command,
        input=ns.input,
        seed=_seed_default() if ns.seed is None else ns.seed,
        samples=ns.samples,
        max_n=ns.max_n,
        budget=ns.budget,
        output=ns.output,
        pretty=ns.pretty,
        jobs=ns.jobs,
        extra=extra,
    )


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    pretty = "--pretty" in (argv or [])
    output = None
    try:
        cfg = parse_config(argv)
        pretty, output = cfg.pretty, cfg.output
        doc, ok = COMMANDS[cfg.command][0](cfg)
        code = 0 if ok else 1
    except GammaForgeError as exc:
        doc, code = {"error": {"kind": exc.kind, "detail": str(exc)}}, 2
    except (UsageError, ValueError) as exc:
        doc, code = {"error": {"kind": USAGE_KIND, "detail": str(exc)}}, 2
    text = dumps(doc, pretty) + "\n"
    if output and code != 2:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
