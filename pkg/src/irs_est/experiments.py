"""Deterministic figure datasets: Rayleigh fits and MSE/CRLB sweeps.

Every pipeline writes one CSV: ``#``-prefixed metadata lines (tool
version, experiment, seed, Fisher mode, the full config as one JSON line
and pipeline results), a column-name row, then the data rows.  Floats are
written positionally with 17 significant digits.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .channel_model import SystemParams, sample_cascades, theoretical_moments
from .crlb import FISHER_MODES, FisherPrior, RayleighFit, bayesian_crlb, classical_crlb, fisher_prior, rayleigh_mle, rayleigh_pdf
from .estimation import MsePoint, closed_form_mse, empirical_mse
from .rand_core import MAX_SEED, derive_stream
from .signal import LinkId, make_pilot_block

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "HistFitResult",
    "SweepResult",
    "format_value",
    "prior_samples",
    "run_hist_fit",
    "run_mse_vs_energy",
    "run_mse_vs_length",
    "run_all",
]

log = logging.getLogger(__name__)

SUMMARY_NAME = "summary.json"
# execution settings that cannot change any number written to a dataset
EXECUTION_KEYS = ("workers", "out_dir")


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to regenerate the datasets.

    ``hist_elements`` lists the surface sizes used by :func:`run_all` for
    the histogram datasets (IRS-1 for links 1 and 3, IRS-2 for link 2).
    The energy sweep uses the link's configured pilot length; the length
    sweep uses ``pilot_symbol_energy`` per symbol.
    """

    params: SystemParams = field(default_factory=SystemParams)
    link: int = 1
    subcarrier: int = 0
    n_samples: int = 100_000
    trials: int = 100_000
    energy_grid: tuple = (1.0, 2.0, 4.0, 8.0, 16.0)
    length_grid: tuple = (1, 2, 4, 8, 16)
    hist_elements: tuple = (5, 60)
    hist_bins: int = 100
    seed: int = 0
    out_dir: str = "results"
    fisher_mode: str = "magnitude"
    fisher_trim: float = 0.0
    workers: int = 1

    def __post_init__(self):
        errors = []
        try:
            object.__setattr__(self, "link", int(LinkId.parse(self.link)))
        except ValueError as exc:
            errors.append(str(exc))
        for name in ("n_samples", "trials", "hist_bins", "workers"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                errors.append(f"{name} must be an integer >= 1, got {value!r}")
        if isinstance(self.subcarrier, bool) or not isinstance(self.subcarrier, (int, np.integer)) \
                or not 0 <= self.subcarrier < self.params.N:
            errors.append(f"subcarrier must be an integer in [0, {self.params.N - 1}], got {self.subcarrier!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) \
                or not 0 <= self.seed <= MAX_SEED:
            errors.append(f"seed must be an integer in [0, 2**64 - 1], got {self.seed!r}")
        if self.fisher_mode not in FISHER_MODES:
            errors.append(f"fisher_mode must be one of {', '.join(FISHER_MODES)}, got {self.fisher_mode!r}")
        if not isinstance(self.fisher_trim, (int, float)) or not 0.0 <= self.fisher_trim < 1.0:
            errors.append(f"fisher_trim must be in [0, 1), got {self.fisher_trim!r}")
        for name, integer in (("energy_grid", False), ("length_grid", True), ("hist_elements", True)):
            grid = tuple(getattr(self, name))
            object.__setattr__(self, name, grid)
            if not grid:
                errors.append(f"{name} must be nonempty")
                continue
            if integer and not all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) and v >= 1
                                   for v in grid):
                errors.append(f"{name} must hold integers >= 1, got {list(grid)!r}")
                continue
            if not integer and not all(isinstance(v, (int, float)) and math.isfinite(v) and v > 0 for v in grid):
                errors.append(f"{name} must hold positive reals, got {list(grid)!r}")
                continue
            if any(b <= a for a, b in zip(grid, grid[1:])):
                errors.append(f"{name} must be strictly increasing, got {list(grid)!r}")
        if errors:
            raise ConfigError("; ".join(errors))

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name != "params"}
        for name in ("energy_grid", "length_grid", "hist_elements"):
            d[name] = list(d[name])
        return {"params": self.params.to_dict(), "experiment": d}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        """Strict inverse of :meth:`to_dict`: every key required, none unknown."""
        if not isinstance(d, dict):
            raise ConfigError("config must be a mapping with 'params' and 'experiment' sections")
        param_keys = set(SystemParams().to_dict())
        exp_keys = {f.name for f in dataclasses.fields(cls)} - {"params"}
        problems = []
        missing, unknown = [], []
        for section in ("params", "experiment"):
            if not isinstance(d.get(section), dict):
                missing.append(section)
        unknown += sorted(set(d) - {"params", "experiment"})
        sections = {"params": param_keys, "experiment": exp_keys}
        for section, keys in sections.items():
            sub = d.get(section)
            if not isinstance(sub, dict):
                continue
            missing += [f"{section}.{k}" for k in sorted(keys - set(sub))]
            unknown += [f"{section}.{k}" for k in sorted(set(sub) - keys)]
        if missing:
            problems.append("missing config keys: " + ", ".join(missing))
        if unknown:
            problems.append("unknown config keys: " + ", ".join(unknown))
        if problems:
            raise ConfigError("; ".join(problems))
        try:
            params = SystemParams.from_dict(d["params"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid params: {exc}") from None
        return cls(params=params, **d["experiment"])

    def replace(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)

    def config_json(self, include_execution: bool = False) -> str:
        d = self.to_dict()
        if not include_execution:
            for key in EXECUTION_KEYS:
                d["experiment"].pop(key)
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class HistFitResult:
    path: Path
    elements: int
    fit: RayleighFit


@dataclass(frozen=True)
class SweepResult:
    path: Path
    points: list
    prior_fit: RayleighFit
    prior: FisherPrior


def format_value(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return np.format_float_positional(float(v), precision=17, unique=False, fractional=False, trim="k")


def _write_csv(path: Path, experiment: str, cfg: ExperimentConfig, meta: dict, columns: list[str], rows) -> Path:
    lines = [
        f"# tool: irs-est {__version__}",
        f"# experiment: {experiment}",
        f"# seed: {cfg.seed}",
        f"# fisher_mode: {cfg.fisher_mode}",
        f"# config: {cfg.config_json()}",
    ]
    for key, value in meta.items():
        lines.append(f"# {key}: {format_value(value) if isinstance(value, (int, float, np.number)) else value}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def _elements_for(cfg: ExperimentConfig) -> int:
    return cfg.params.N2 if cfg.link == LinkId.IRS2 else cfg.params.N1


def _with_elements(params: SystemParams, link: int, n: int) -> SystemParams:
    return replace(params, N2=n) if link == LinkId.IRS2 else replace(params, N1=n)


def prior_samples(cfg: ExperimentConfig, params: SystemParams | None = None) -> np.ndarray:
    """Cascade draws used for Rayleigh fitting and the prior Fisher information."""
    params = cfg.params if params is None else params
    label = ("samples", params.N1, params.N2)
    return sample_cascades(params, cfg.link, cfg.n_samples, cfg.seed, label, k=cfg.subcarrier, workers=cfg.workers)


def run_hist_fit(cfg: ExperimentConfig, path: str | os.PathLike | None = None) -> HistFitResult:
    """Histogram of ``|J|`` with the fitted Rayleigh density at the bin centres."""
    elements = _elements_for(cfg)
    r = np.abs(prior_samples(cfg))
    fit = rayleigh_mle(r)
    top = r.max()
    counts, edges = np.histogram(r, bins=cfg.hist_bins, range=(0.0, top) if top > 0 else None, density=True)
    centres = 0.5 * (edges[:-1] + edges[1:])
    pdf = rayleigh_pdf(centres, fit.b_hat) if fit.b_hat > 0 else np.zeros_like(centres)
    rows = zip(edges[:-1], edges[1:], centres, counts, pdf)
    if path is None:
        path = Path(cfg.out_dir) / f"hist_fit_link{cfg.link}_n{elements}.csv"
    meta = {"elements": elements, "n": fit.n, "b_hat": fit.b_hat, "ks_stat": fit.ks_stat}
    out = _write_csv(path, "hist-fit", cfg, meta,
                     ["bin_left", "bin_right", "bin_center", "density", "rayleigh_pdf"], rows)
    log.info("hist-fit N=%d: b_hat=%.6g ks=%.4g -> %s", elements, fit.b_hat, fit.ks_stat, out)
    return HistFitResult(path=out, elements=elements, fit=fit)


def _prior(cfg: ExperimentConfig) -> tuple[RayleighFit, FisherPrior]:
    z = prior_samples(cfg)
    fit = rayleigh_mle(z)
    return fit, fisher_prior(z, fit.b_hat, cfg.fisher_mode, cfg.fisher_trim)


def _sweep_point(cfg, x, f_prior, label, sweep_value) -> MsePoint:
    p = cfg.params
    var_j = theoretical_moments(p).var(cfg.link)
    return MsePoint(
        sweep_value=sweep_value,
        closed_form=closed_form_mse(x, var_j, p.sigma2_noise),
        empirical=empirical_mse(p, cfg.link, cfg.subcarrier, cfg.trials, cfg.seed, x=x, label=label,
                                workers=cfg.workers),
        crlb_bayes=bayesian_crlb(x, p.sigma2_noise, f_prior),
        crlb_classical=classical_crlb(x, p.sigma2_noise),
    )


def _write_sweep(path, experiment, column, cfg, points, fit, prior) -> Path:
    meta = {
        "link": cfg.link,
        "prior_b_hat": fit.b_hat,
        "prior_ks_stat": fit.ks_stat,
        "fisher_prior": prior.value,
        "fisher_trim": prior.trim,
        "var_j": theoretical_moments(cfg.params).var(cfg.link),
    }
    rows = [(pt.sweep_value, pt.closed_form, pt.empirical, pt.crlb_bayes, pt.crlb_classical) for pt in points]
    return _write_csv(path, experiment, cfg, meta,
                      [column, "closed_form_mse", "empirical_mse", "bayesian_crlb", "classical_crlb"], rows)


def run_mse_vs_energy(cfg: ExperimentConfig, path=None) -> SweepResult:
    """MSE and bounds against total pilot energy ``x^H x`` at fixed pilot length.

    One QPSK pattern is drawn for the experiment and rescaled to each grid
    energy.
    """
    p = cfg.params
    k, link = cfg.subcarrier, cfg.link
    length = p.pilot_length(link)
    stream = derive_stream(cfg.seed, ("mse-energy", "pilot", k, link))
    x_unit = make_pilot_block(p, link, k, stream, total_energy=1.0, length=length).x
    fit, prior = _prior(cfg)
    points = []
    for i, energy in enumerate(cfg.energy_grid):
        x = x_unit * math.sqrt(energy)
        points.append(_sweep_point(cfg, x, prior.value, ("mse-energy", i), float(energy)))
    if path is None:
        path = Path(cfg.out_dir) / f"mse_vs_energy_link{link}.csv"
    out = _write_sweep(path, "mse-energy", "pilot_energy", cfg, points, fit, prior)
    log.info("mse-energy -> %s", out)
    return SweepResult(path=out, points=points, prior_fit=fit, prior=prior)


def run_mse_vs_length(cfg: ExperimentConfig, path=None) -> SweepResult:
    """MSE and bounds against pilot length with ``pilot_symbol_energy`` per symbol."""
    p = cfg.params
    k, link = cfg.subcarrier, cfg.link
    fit, prior = _prior(cfg)
    points = []
    for i, length in enumerate(cfg.length_grid):
        stream = derive_stream(cfg.seed, ("mse-length", "pilot", int(length), k, link))
        x = make_pilot_block(p, link, k, stream, length=int(length)).x
        points.append(_sweep_point(cfg, x, prior.value, ("mse-length", i), int(length)))
    if path is None:
        path = Path(cfg.out_dir) / f"mse_vs_length_link{link}.csv"
    out = _write_sweep(path, "mse-length", "pilot_length", cfg, points, fit, prior)
    log.info("mse-length -> %s", out)
    return SweepResult(path=out, points=points, prior_fit=fit, prior=prior)


def run_all(cfg: ExperimentConfig) -> dict:
    """Run every pipeline, write ``summary.json`` and return the summary.

    A failing pipeline does not stop the others; its entry in
    ``summary["pipelines"]`` carries ``status: "failed"`` and the error.
    """
    out_dir = Path(cfg.out_dir)
    pipelines = {}
    summary = {"tool": f"irs-est {__version__}", "seed": cfg.seed, "fisher_mode": cfg.fisher_mode,
               "config": cfg.to_dict(), "hist_fit": [], "prior": None, "pipelines": pipelines}

    def record(name, fn):
        try:
            result = fn()
        except Exception as exc:  # reported, not raised: remaining pipelines still run
            log.error("pipeline %s failed: %s", name, exc)
            pipelines[name] = {"status": "failed", "error": f"{type(exc).__name__}: {exc}"}
            return None
        pipelines[name] = {"status": "ok", "path": os.path.relpath(result.path, out_dir)}
        return result

    for n in cfg.hist_elements:
        sub = cfg.replace(params=_with_elements(cfg.params, cfg.link, int(n)))
        res = record(f"hist-fit-n{n}", lambda: run_hist_fit(sub))
        if res is not None:
            summary["hist_fit"].append({"elements": res.elements, "b_hat": res.fit.b_hat,
                                        "ks_stat": res.fit.ks_stat, "n": res.fit.n})
    energy = record("mse-energy", lambda: run_mse_vs_energy(cfg))
    record("mse-length", lambda: run_mse_vs_length(cfg))
    if energy is not None:
        summary["prior"] = {"b_hat": energy.prior_fit.b_hat, "ks_stat": energy.prior_fit.ks_stat,
                            "fisher_prior": energy.prior.value, "mode": energy.prior.mode,
                            "trim": energy.prior.trim, "n": energy.prior.n}
    summary["ok"] = all(p["status"] == "ok" for p in pipelines.values())
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / SUMMARY_NAME, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary
