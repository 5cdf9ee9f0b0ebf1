"""Config-driven experiment runner producing a deterministic CSV + JSON bundle.

A config is a JSON object::

    {"seed": 7, "experiments": [{"name": "trend", "kind": "h_ell_trend", "params": {...}}]}

Each experiment writes ``<name>.csv``; ``summary.json`` lists every experiment
with its status. No timestamps or timings are written, so the same config and
seed give byte-identical files.
"""

from __future__ import annotations

import hashlib
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from . import capacity, constructions, harmonic, io, lcmfree, primes, setfam
from .errors import InvalidInputError, LcmSunflowerError


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    format: str = "csv"
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.name or not all(ch.isalnum() or ch in "_.-" for ch in self.name):
            raise InvalidInputError(f"experiment name {self.name!r} must be a plain file stem")
        if self.kind not in EXPERIMENTS:
            raise InvalidInputError(f"{self.name}: unknown kind {self.kind!r}; known: {sorted(EXPERIMENTS)}")
        if self.format not in ("csv", "json"):
            raise InvalidInputError(f"{self.name}: format must be csv or json")
        allowed = EXPERIMENTS[self.kind].defaults
        extra = set(self.params) - set(allowed)
        if extra:
            raise InvalidInputError(f"{self.name}: unknown parameter(s) {sorted(extra)} for {self.kind}")

    def resolved(self) -> dict:
        out = dict(EXPERIMENTS[self.kind].defaults)
        out.update(self.params)
        return out


@dataclass(frozen=True)
class ReportConfig:
    seed: int
    experiments: tuple[ExperimentConfig, ...]
    source_sha256: str = ""


_EXP_KEYS = {"name", "kind", "params", "format", "seed"}


def parse_config(data: Any, source_text: str = "") -> ReportConfig:
    if not isinstance(data, dict):
        raise io.DataError("config: expected a JSON object")
    extra = set(data) - {"seed", "experiments"}
    if extra:
        raise io.DataError(f"config: unknown key(s) {sorted(extra)}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise io.DataError("config.seed: expected an integer")
    raw = data.get("experiments")
    if not isinstance(raw, list):
        raise io.DataError("config.experiments: expected a list")
    exps, names = [], set()
    for i, e in enumerate(raw):
        where = f"config.experiments[{i}]"
        if not isinstance(e, dict):
            raise io.DataError(f"{where}: expected an object")
        bad = set(e) - _EXP_KEYS
        if bad:
            raise io.DataError(f"{where}: unknown key(s) {sorted(bad)}")
        if "name" not in e or "kind" not in e:
            raise io.DataError(f"{where}: name and kind are required")
        if not isinstance(e.get("params", {}), dict):
            raise io.DataError(f"{where}.params: expected an object")
        try:
            exp = ExperimentConfig(e["name"], e["kind"], dict(e.get("params", {})), e.get("format", "csv"), e.get("seed"))
        except InvalidInputError as exc:
            raise io.DataError(f"{where}: {exc}") from None
        if exp.name in names:
            raise io.DataError(f"{where}: duplicate name {exp.name!r}")
        names.add(exp.name)
        exps.append(exp)
    digest = hashlib.sha256(source_text.encode()).hexdigest() if source_text else hashlib.sha256(
        io.dumps(data).encode()
    ).hexdigest()
    return ReportConfig(seed, tuple(exps), digest)


def load_config(path: str) -> ReportConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise io.DataError(f"{path}: {exc.strerror}") from None
    return parse_config(io.load_json_text(text, path), text)


# ---------------------------------------------------------------- experiments


@dataclass(frozen=True)
class _Kind:
    run: Callable[[dict, random.Random], tuple[list[dict], dict]]
    defaults: dict


def _h_ell_trend(p, rng):
    rows = harmonic.trend_rows(p["Ns"], p["ells"])
    ratios = [r["ratio"] for r in rows]
    return rows, {"min_ratio": min(ratios), "max_ratio": max(ratios)}


def _exponent_sweep(p, rng):
    rows = []
    summary = {}
    for k in p["ks"]:
        Bstar = constructions.optimal_B(k)
        for i in range(p["steps"] + 1):
            B = p["B_min"] + (p["B_max"] - p["B_min"]) * i / p["steps"]
            rows.append({"k": k, "B": B, "g": constructions.exponent_g(B, k), "is_optimum": False})
        rows.append({"k": k, "B": Bstar, "g": constructions.exponent_g(Bstar, k), "is_optimum": True})
        summary[f"k{k}"] = {"B_star": Bstar, "c_k": constructions.ck(k)}
    return rows, summary


def _fk_table(p, rng):
    rows = []
    for N in range(p["N_min"], p["N_max"] + 1):
        res = lcmfree.exact_fk(N, p["k"])
        rows.append(
            {
                "N": N,
                "k": p["k"],
                "value": str(res.value),
                "value_float": float(res.value),
                "excluded": " ".join(str(a) for a in range(1, N + 1) if a not in set(res.optimal_set)),
                "exact": res.exact,
                "nodes": res.nodes,
            }
        )
    return rows, {"last_value": rows[-1]["value"] if rows else None}


def _capacity_table(p, rng):
    rows = []
    for k in p["ks"]:
        for n in range(p["n_max"] + 1):
            res = capacity.max_sunflower_free(n, k, co=p["co"])
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "co": p["co"],
                    "F": res.F_value,
                    "exact": res.exact,
                    "nodes": res.nodes_explored,
                    "witness_ok": capacity.verify_witness(res),
                    "lower_estimate": capacity.capacity_lower_estimate(res) if n > 0 and res.exact else "",
                }
            )
    return rows, {"all_witnesses_ok": all(r["witness_ok"] for r in rows)}


def _zomega_majorant(p, rng):
    rows = []
    for X in p["Xs"]:
        for z in p["zs"]:
            s = harmonic.z_omega_sum(X, z)
            m = harmonic.euler_majorant(X, z)
            rows.append({"X": X, "z": z, "sum": s, "majorant": m, "holds": s <= m})
    return rows, {"all_hold": all(r["holds"] for r in rows)}


def _g_constant(p, rng):
    rows = []
    for z in p["zs"]:
        g = harmonic.G_constant(z, p["cutoff"])
        lo = g.interval()[0]
        rows.append({"z": z, "cutoff": g.cutoff, "G": g.value, "lower": lo, "abs_error_bound": g.abs_error_bound})
    return rows, {}


def _sathe_selberg(p, rng):
    rows = []
    for x in p["xs"]:
        for ell in p["ells"]:
            main = harmonic.sathe_selberg_main_term(x, ell, p["cutoff"])
            count = harmonic.A_ell(x, ell)
            rows.append({"x": x, "ell": ell, "count": count, "main_term": main, "ratio": count / main})
    return rows, {}


def _thm12_sweep(p, rng):
    rows = []
    for k in p["ks"]:
        for limit in p["prime_limits"]:
            table = primes.sieve_primes(limit)
            pool = constructions.prime_pool(table, p["prime_min"], limit)
            for b in p["Bs"]:
                B = constructions.optimal_B(k) if b == "auto" else float(b)
                buckets = constructions.greedy_buckets(pool, Fraction(B), count_target=0)
                rep = constructions.thm12_construction(
                    k, buckets, enumerate=p["enumerate"], cap=p["cap"], allow_truncate=True
                )
                rows.append(
                    {
                        "k": k,
                        "prime_limit": limit,
                        "B": B,
                        "t": buckets.t,
                        "harmonic_sum_float": float(rep.harmonic_sum),
                        "exponent": rep.predicted_exponent,
                        "elements": rep.extras.get("element_count", ""),
                        "sum_matches_product": rep.freeness_checks.get("sum_matches_product", ""),
                        "lcm_k_free": rep.freeness_checks.get("lcm_k_free", ""),
                    }
                )
    return rows, {"all_free": all(r["lcm_k_free"] in ("", True) for r in rows)}


def _random_cosunflower_free(rng: random.Random, t: int, k: int, tries: int) -> setfam.SetFamily:
    members: list[int] = []
    for _ in range(tries):
        s = rng.randrange(1 << t)
        if s in members:
            continue
        if setfam.cosunflower_in(members + [s], k) is None:
            members.append(s)
    return setfam.SetFamily(t, tuple(members))


def _blowup_sweep(p, rng):
    rows = []
    k = p["k"]
    for trial in range(p["trials"]):
        t = rng.randint(1, p["t_max"])
        base = _random_cosunflower_free(rng, t, k, p["tries"])
        sizes = [rng.randint(1, p["block_max"]) for _ in range(t)]
        extra = rng.randint(0, 2)
        n = sum(sizes) + extra
        if n > p["ground_max"]:
            sizes = [1] * t
            n = t + extra
        order = list(range(n))
        rng.shuffle(order)
        blocks, pos = [], 0
        for s in sizes:
            blocks.append(setfam.mask_of(order[pos : pos + s]))
            pos += s
        bl = setfam.Blocks(n, tuple(blocks), setfam.mask_of(order[pos:]))
        fam = setfam.blow_up(base, bl)
        free = setfam.find_k_cosunflower(fam, k, "buckets") is None
        rows.append({"trial": trial, "t": t, "ground": n, "base_size": len(base), "size": len(fam), "cosunflower_free": free})
    return rows, {"failures": sum(not r["cosunflower_free"] for r in rows)}


EXPERIMENTS: dict[str, _Kind] = {
    "h_ell_trend": _Kind(_h_ell_trend, {"Ns": [10**4, 10**5, 10**6], "ells": [1, 2, 3]}),
    "exponent_sweep": _Kind(_exponent_sweep, {"ks": [3, 4, 5], "B_min": 1.0, "B_max": 10.0, "steps": 90}),
    "fk_table": _Kind(_fk_table, {"N_min": 1, "N_max": 40, "k": 3}),
    "capacity_table": _Kind(_capacity_table, {"n_max": 4, "ks": [3], "co": False}),
    "zomega_majorant": _Kind(_zomega_majorant, {"Xs": [10**3, 10**4, 10**5], "zs": [0.5, 1.0, 1.5, 1.9]}),
    "g_constant": _Kind(_g_constant, {"zs": [0.0, 0.5, 1.0, 1.5], "cutoff": 10**6}),
    "sathe_selberg": _Kind(_sathe_selberg, {"xs": [10**6], "ells": [1, 2, 3], "cutoff": 10**6}),
    "thm12_sweep": _Kind(
        _thm12_sweep,
        {"ks": [3, 4], "prime_limits": [1000, 10**5], "prime_min": 2, "Bs": ["auto", 1.0], "enumerate": True, "cap": 3000},
    ),
    "blowup_sweep": _Kind(
        _blowup_sweep, {"trials": 200, "k": 3, "t_max": 5, "block_max": 3, "ground_max": 14, "tries": 40}
    ),
}


def _validate_types(exp: ExperimentConfig, params: dict) -> None:
    for key, default in EXPERIMENTS[exp.kind].defaults.items():
        val = params[key]
        if isinstance(default, list) and not isinstance(val, list):
            raise InvalidInputError(f"{exp.name}.{key}: expected a list")
        if isinstance(default, bool) and not isinstance(val, bool):
            raise InvalidInputError(f"{exp.name}.{key}: expected true or false")
        if isinstance(default, int) and not isinstance(default, bool) and not isinstance(val, int):
            raise InvalidInputError(f"{exp.name}.{key}: expected an integer")
    if ("k" in params and params["k"] < 3) or any(k < 3 for k in params.get("ks", [])):
        raise InvalidInputError(f"{exp.name}: k must be >= 3")
    if exp.kind == "fk_table" and params["N_max"] > 40:
        raise InvalidInputError(f"{exp.name}: fk_table is limited to N <= 40")


def run_experiment(exp: ExperimentConfig, seed: int) -> dict:
    """Run one experiment; returns rows, summary and the error text (if any)."""
    own_seed = exp.seed if exp.seed is not None else seed
    rng = random.Random(f"{own_seed}:{exp.name}")
    params = exp.resolved()
    try:
        _validate_types(exp, params)
        rows, summary = EXPERIMENTS[exp.kind].run(params, rng)
    except (LcmSunflowerError, ValueError, TypeError) as exc:
        return {"name": exp.name, "rows": None, "summary": {}, "error": f"{type(exc).__name__}: {exc}"}
    return {"name": exp.name, "rows": rows, "summary": summary, "error": None}


def _run_star(arg):
    return run_experiment(*arg)


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_safe(v) for v in obj]
    return obj


def run_report(cfg: ReportConfig, out_dir: str, jobs: int = 1) -> dict:
    """Run every experiment (in parallel when jobs > 1) and write the bundle to ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    tasks = [(exp, cfg.seed) for exp in cfg.experiments]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_star, tasks))
    else:
        results = [_run_star(t) for t in tasks]
    entries = []
    for exp, res in zip(cfg.experiments, results):
        entry: dict = {"name": exp.name, "kind": exp.kind}
        if res["error"] is not None:
            entry.update({"status": "error", "file": None, "error": res["error"]})
        else:
            fname = f"{exp.name}.{exp.format}"
            path = os.path.join(out_dir, fname)
            if exp.format == "csv":
                text = harmonic.rows_to_csv(res["rows"])
            else:
                text = io.dumps(_json_safe({"rows": res["rows"]}))
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            entry.update({"status": "ok", "file": fname, "rows": len(res["rows"]), "summary": _json_safe(res["summary"])})
        entries.append(entry)
    summary = {
        "seed": cfg.seed,
        "config_sha256": cfg.source_sha256,
        "experiments": entries,
        "failures": sum(e["status"] == "error" for e in entries),
    }
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(io.dumps(summary))
    return summary


def bundle_digest(out_dir: str) -> str:
    """sha256 over every file of a bundle, in name order."""
    h = hashlib.sha256()
    for name in sorted(os.listdir(out_dir)):
        h.update(name.encode() + b"\0")
        with open(os.path.join(out_dir, name), "rb") as fh:
            h.update(fh.read())
    return h.hexdigest()
