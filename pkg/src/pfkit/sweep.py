"""Deterministic parameter sweeps over the model catalog.

A sweep replaces one or two model parameters with uniform grids, evaluates
eigenvalues / coalescence data / phase per grid point through the batch
kernel, and emits rows in fixed grid order (outer axis slowest).  Output is
byte-identical across runs and worker counts: every row is an elementwise
function of its grid coordinates, workers only split the flat index range,
and floats are printed with 17 significant digits.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .catalog import _MODEL_TYPES, model_from_dict
from .errors import InvalidGrid
from .mat2 import DEGENERACY_TOL

__all__ = [
    "CSV_HEADER",
    "GridAxis",
    "SweepConfig",
    "config_from_dict",
    "run_sweep",
    "SweepResult",
    "write_csv",
    "write_json",
]

CSV_HEADER = ("p1", "p2", "re_e0", "im_e0", "re_e1", "im_e1",
              "abs_gamma", "discriminant", "ep_margin", "phase", "pf_exists")

MAX_STEPS = 10 ** 7


@dataclass(frozen=True)
class GridAxis:
    """One swept parameter: uniform grid of ``steps`` points on [start, stop]."""

    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if not (1 <= self.steps <= MAX_STEPS):
            raise InvalidGrid(f"steps must be in [1, {MAX_STEPS}], got {self.steps}")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise InvalidGrid("grid endpoints must be finite")

    def values(self):
        if self.steps == 1:
            return np.array([float(self.start)])
        step = (self.stop - self.start) / (self.steps - 1)
        return self.start + np.arange(self.steps) * step


@dataclass(frozen=True)
class SweepConfig:
    """A model template with grid axes plus output options.

    ``branch`` ("plus" | "minus" | "both") is recorded with the output; the
    emitted columns themselves are branch-agnostic (eigenvalues are reported
    in lexicographic order and pseudo-fermion existence does not depend on
    the branch choice).
    """

    model: str
    fixed: dict
    axes: tuple
    tol: float = DEGENERACY_TOL
    branch: str = "minus"
    output: str = "csv"
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not (1 <= len(self.axes) <= 2):
            raise InvalidGrid("a sweep needs one or two grid axes")
        if self.branch not in ("plus", "minus", "both"):
            raise InvalidGrid(f"branch must be plus|minus|both, got {self.branch!r}")
        if self.output not in ("csv", "json"):
            raise InvalidGrid(f"output must be csv|json, got {self.output!r}")
        if self.workers < 1:
            raise InvalidGrid("workers must be >= 1")

    @property
    def shape(self):
        return tuple(ax.steps for ax in self.axes)

    @property
    def size(self):
        n = 1
        for s in self.shape:
            n *= s
        return n


def config_from_dict(doc, **overrides):
    """Build a :class:`SweepConfig` from a JSON document.

    Grid axes are the params whose value is {"from": a, "to": b, "steps": n};
    axis order follows their order in the document (first axis is the outer,
    slowest-varying one).  Keyword overrides win over document values.
    """
    if "model" not in doc:
        raise InvalidGrid("sweep config needs a 'model' entry")
    fixed, axes = {}, []
    for name, val in doc.get("params", {}).items():
        if isinstance(val, dict):
            try:
                axes.append(GridAxis(name, float(val["from"]), float(val["to"]),
                                     int(val["steps"])))
            except KeyError as exc:
                raise InvalidGrid(f"grid descriptor for {name!r} needs "
                                  "'from', 'to' and 'steps'") from exc
        elif isinstance(val, (list, tuple)):
            fixed[name] = complex(float(val[0]), float(val[1]))
        else:
            fixed[name] = float(val)
    cfg = SweepConfig(
        model=doc["model"],
        fixed=fixed,
        axes=tuple(axes),
        tol=float(doc.get("tol", DEGENERACY_TOL)),
        branch=doc.get("branch", "minus"),
        output=doc.get("output", "csv"),
        seed=int(doc.get("seed", 0)),
        workers=int(doc.get("workers", 1)),
    )
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg


def _grid_values(config, lo, hi):
    """Parameter values (scalars or flat arrays) for flat indices [lo, hi)."""
    idx = np.arange(lo, hi)
    values = dict(config.fixed)
    if len(config.axes) == 1:
        ax = config.axes[0]
        values[ax.name] = ax.values()[idx]
        coords = (values[ax.name], None)
    else:
        ax1, ax2 = config.axes
        i1, i2 = np.divmod(idx, ax2.steps)
        values[ax1.name] = ax1.values()[i1]
        values[ax2.name] = ax2.values()[i2]
        coords = (values[ax1.name], values[ax2.name])
    return values, coords


def _entries_dg(v):
    eit = np.exp(1j * np.asarray(v["theta"], dtype=complex))
    eip = np.exp(1j * np.asarray(v["phi"], dtype=complex))
    h00 = v["r"] * eit
    h01 = v["s"] * eip
    h10 = v["t_c"] * np.conj(eip)
    h11 = v["r"] * np.conj(eit)
    margin = (v["r"] * np.sin(np.asarray(v["theta"]))) ** 2 - v["s"] * v["t_c"]
    return h00, h01, h10, h11, margin


def _entries_part(v):
    return _entries_dg({"r": v["r"], "s": v["s"], "t_c": v["s"],
                        "theta": v["theta"], "phi": 0.0})


def _entries_gmm(v):
    nu0 = np.asarray(v["nu0"], dtype=complex)
    h00 = np.asarray(v["e1"], dtype=complex) - 1j * np.asarray(v["g1"])
    h11 = np.asarray(v["e2"], dtype=complex) - 1j * np.asarray(v["g2"])
    z = -(np.asarray(v["e2"]) - np.asarray(v["e1"])) \
        + 1j * (np.asarray(v["g2"]) - np.asarray(v["g1"]))
    margin = np.abs(z * z + 4.0 * nu0 ** 2)
    return h00, nu0, nu0, h11, margin


def _entries_mo(v):
    e = np.asarray(v["E"], dtype=complex)
    th = np.asarray(v["theta"], dtype=complex)
    ph = np.asarray(v["phi"], dtype=complex)
    sin, cos = np.sin(th), np.cos(th)
    h00 = e * cos
    h01 = e * np.exp(-1j * ph) * sin
    h10 = e * np.exp(1j * ph) * sin
    h11 = -e * cos
    return h00, h01, h10, h11, np.inf  # no degenerate locus in this family


def _entries_rel(v):
    mc2 = np.asarray(v["m"]) * np.asarray(v["c"]) ** 2
    cpx = np.asarray(v["c"]) * np.asarray(v["px"])
    h00 = mc2.astype(complex)
    h01 = (cpx + np.asarray(v["v"])).astype(complex)
    h10 = (cpx - np.asarray(v["v"])).astype(complex)
    h11 = -h00
    margin = cpx + np.asarray(v["v"])
    return h00, h01, h10, h11, margin


def _entries_jsm(v):
    a = np.asarray(v["a_r"], dtype=float)
    b = np.asarray(v["b_r"], dtype=float)
    h00 = a.astype(complex)
    h01 = 1j * b
    h10 = 1j * b
    h11 = -h00
    margin = a ** 2 - b ** 2
    return h00, h01, h10, h11, margin


_ENTRY_BUILDERS = {
    "DG": _entries_dg,
    "Part": _entries_part,
    "GMM": _entries_gmm,
    "MO": _entries_mo,
    "Rel": _entries_rel,
    "JSM": _entries_jsm,
}


@dataclass(frozen=True)
class SweepResult:
    """Column arrays of one sweep, in grid order."""

    config: SweepConfig
    p1: np.ndarray
    p2: np.ndarray | None
    e0: np.ndarray
    e1: np.ndarray
    abs_gamma: np.ndarray
    discriminant: np.ndarray
    ep_margin: np.ndarray
    phase: np.ndarray        # int8 codes
    pf_exists: np.ndarray    # bool

    def __len__(self):
        return len(self.p1)

    def phase_labels(self):
        return np.array(_kernels.PHASE_LABELS, dtype=object)[self.phase]

    def spec_at(self, i):
        """The model instance at flat row index ``i``."""
        values, _ = _grid_values(self.config, i, i + 1)
        params = {}
        for k, v in values.items():
            z = complex(np.asarray(v).reshape(-1)[0]) if np.ndim(v) else complex(v)
            params[k] = [z.real, z.imag] if z.imag != 0 else z.real
        return model_from_dict({"model": self.config.model, "params": params})


def _validate_param_names(config):
    cls = _MODEL_TYPES.get(config.model)
    if cls is None:
        raise InvalidGrid(f"unknown model {config.model!r}")
    expected = set(cls.__dataclass_fields__)
    got = set(config.fixed) | {ax.name for ax in config.axes}
    if got != expected:
        raise InvalidGrid(
            f"{config.model} expects parameters {sorted(expected)}, got {sorted(got)}")


def _eval_slice(config, lo, hi):
    values, (c1, c2) = _grid_values(config, lo, hi)
    builder = _ENTRY_BUILDERS[config.model]
    h00, h01, h10, h11, margin = builder(values)
    n = hi - lo
    h00, h01, h10, h11 = (np.broadcast_to(np.asarray(a, dtype=complex), (n,)).copy()
                          for a in (h00, h01, h10, h11))
    margin = np.broadcast_to(np.asarray(margin, dtype=float), (n,)).copy()
    e0, e1, disc, absg, phase = _kernels.sweep_eval(h00, h01, h10, h11, config.tol)
    pf = (phase != 2) & (h01 != 0)
    return c1, c2, e0, e1, absg, disc, margin, phase, pf


def run_sweep(config):
    """Evaluate the whole grid; workers only partition the flat index range."""
    if config.model not in _ENTRY_BUILDERS:
        raise InvalidGrid(f"unknown model {config.model!r}")
    _validate_param_names(config)
    n = config.size
    workers = min(config.workers, n) or 1
    if workers == 1:
        parts = [_eval_slice(config, 0, n)]
    else:
        bounds = np.linspace(0, n, workers + 1, dtype=int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_eval_slice, config, int(a), int(b))
                       for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            parts = [f.result() for f in futures]

    cols = [np.concatenate([p[k] for p in parts]) if parts[0][k] is not None else None
            for k in range(9)]
    return SweepResult(config, cols[0], cols[1], cols[2], cols[3],
                       cols[4], cols[5], cols[6], cols[7], cols[8])


#: rows formatted per kernel call; bounds peak memory on huge sweeps
_CSV_CHUNK = 200_000


def write_csv(result, stream):
    """Emit the fixed-header CSV; p2 is left empty for 1D sweeps.

    Floats are printed with "%.17g" (round-trip exact, '.' separator, no
    locale dependence).  Row formatting goes through the kernel backend in
    bounded chunks; both backends produce identical bytes.
    """
    stream.write(",".join(CSV_HEADER) + "\n")
    n = len(result)
    for lo in range(0, n, _CSV_CHUNK):
        hi = min(lo + _CSV_CHUNK, n)
        sl = slice(lo, hi)

        def col(a):
            return np.ascontiguousarray(a[sl], dtype=float)

        stream.write(_kernels.format_rows(
            col(result.p1),
            None if result.p2 is None else col(result.p2),
            col(result.e0.real), col(result.e0.imag),
            col(result.e1.real), col(result.e1.imag),
            col(result.abs_gamma), col(result.discriminant),
            col(result.ep_margin),
            np.ascontiguousarray(result.phase[sl], dtype=np.int8),
            np.ascontiguousarray(result.pf_exists[sl], dtype=np.uint8),
        ))


def _json_num(x):
    x = float(x)
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    if np.isnan(x):
        return "nan"
    return x


def write_json(result, stream):
    labels = _kernels.PHASE_LABELS
    rows = []
    for i in range(len(result)):
        rows.append({
            "p1": _json_num(result.p1[i]),
            "p2": _json_num(result.p2[i]) if result.p2 is not None else None,
            "re_e0": _json_num(result.e0[i].real),
            "im_e0": _json_num(result.e0[i].imag),
            "re_e1": _json_num(result.e1[i].real),
            "im_e1": _json_num(result.e1[i].imag),
            "abs_gamma": _json_num(result.abs_gamma[i]),
            "discriminant": _json_num(result.discriminant[i]),
            "ep_margin": _json_num(result.ep_margin[i]),
            "phase": labels[result.phase[i]],
            "pf_exists": bool(result.pf_exists[i]),
        })
    json.dump({"model": result.config.model, "rows": rows}, stream, indent=None,
              separators=(",", ":"))
    stream.write("\n")
