"""Experiment configs, run traces, and the batch driver behind the CLI.

Configs are a line-oriented ``key = value`` text format with a canonical
serializer, so a parsed-then-serialized config reproduces the canonical
text byte for byte and its hash pins the run.  Traces carry every exact
value alongside a 12-digit decimal rendering; the exact string is
authoritative.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import fixtures
from .caratheodory import (RESTRICTION_NOTICE, dyadic_basis, arcs_basis,
                           gap_theta, density_search, mixing_trace,
                           correlation_average, reduction_check,
                           invariance_check)
from .dynamics import (SetLike, TowerSet, Transformation, make_system,
                       tower_measure, verify_measure_preserving)
from .errors import ComponentBudgetError, ConfigError, RefinementBudgetError
from .intervals import EMPTY, IntervalSet, from_text as set_from_text
from .scalars import Scalar, parse_scalar, render
from .splinter import (BUDGET_EXHAUSTED, CONVERGED, DEFAULT_COMPONENT_BUDGET,
                       STALLED, splinter, verify_orbit_decomposition)

try:  # single source of truth for the version stamp in file headers
    from importlib.metadata import version as _pkg_version
    ARTIFACT_VERSION = _pkg_version("artifact")
except Exception:  # pragma: no cover - not installed
    ARTIFACT_VERSION = "0.0.0"

DEFAULT_DIGITS = 12
DEFAULT_SEED = 20260826

COMMANDS = ("splinter", "verify", "density", "gap", "mixing", "reduction",
            "demo")

# integer-valued parameters and their defaults (None = no default)
_INT_KEYS = {"n_max": None, "depth": 8, "m": None, "seed": DEFAULT_SEED,
             "stall_window": None, "component_budget": DEFAULT_COMPONENT_BUDGET,
             "sample": 8, "digits": DEFAULT_DIGITS}
_SCALAR_KEYS = ("epsilon",)
_STR_KEYS = {"basis": "dyadic"}
_KEY_ORDER = (["command", "system"] + sorted(_INT_KEYS) + list(_SCALAR_KEYS)
              + sorted(_STR_KEYS))


@dataclass
class ExperimentConfig:
    command: str
    system: str
    sets: dict  # name -> IntervalSet | TowerSet
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        make_system(self.system)  # validates the descriptor
        for key in self.parameters:
            if key not in _INT_KEYS and key not in _SCALAR_KEYS \
                    and key not in _STR_KEYS:
                raise ConfigError(f"unknown parameter {key!r}")
        eps = self.parameters.get("epsilon")
        if eps is not None and eps.sign() <= 0:
            raise ConfigError("epsilon must be positive")
        for key in ("n_max", "m", "component_budget", "sample"):
            val = self.parameters.get(key)
            if val is not None and val < 1:
                raise ConfigError(f"{key} must be positive")

    # -- parameter access with defaults ------------------------------
    def get_int(self, key: str, override=None):
        val = self.parameters.get(key, _INT_KEYS.get(key))
        if val is None and override is None:
            raise ConfigError(f"missing required parameter {key!r}")
        return val if val is not None else override

    def opt_int(self, key: str):
        return self.parameters.get(key, _INT_KEYS.get(key))

    def get_scalar(self, key: str) -> Scalar:
        val = self.parameters.get(key)
        if val is None:
            raise ConfigError(f"missing required parameter {key!r}")
        return val

    def get_str(self, key: str) -> str:
        return self.parameters.get(key, _STR_KEYS.get(key))

    def require_set(self, name: str) -> SetLike:
        if name not in self.sets:
            raise ConfigError(f"missing required set {name!r}")
        return self.sets[name]

    # -- canonical text form ------------------------------------------
    def to_text(self) -> str:
        lines = [f"command = {self.command}", f"system = {self.system}"]
        for key in _KEY_ORDER[2:]:
            if key in self.parameters:
                val = self.parameters[key]
                text = val.to_text() if isinstance(val, Scalar) else str(val)
                lines.append(f"{key} = {text}")
        for name in sorted(self.sets):
            lines.append(f"set.{name} = {_set_to_text(self.sets[name])}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def _set_to_text(S: SetLike) -> str:
    return S.to_text()


def _set_from_text(text: str, tag) -> SetLike:
    if "|" in text:
        base_text, top_text = (part.strip() for part in text.split("|", 1))
        return TowerSet(set_from_text(base_text, tag),
                        set_from_text(top_text, tag))
    return set_from_text(text, tag)


def parse_config(text: str) -> ExperimentConfig:
    """Parse the line-oriented config format, with line numbers on errors."""
    raw: dict[str, str] = {}
    set_texts: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        target = set_texts if key.startswith("set.") else raw
        name = key[4:] if key.startswith("set.") else key
        if name in target:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        target[name] = value
    if "command" not in raw:
        raise ConfigError("missing required key 'command'")
    if "system" not in raw:
        raise ConfigError("missing required key 'system'")
    command = raw.pop("command")
    system = raw.pop("system")
    try:
        T = make_system(system)
    except Exception as exc:
        raise ConfigError(f"bad system descriptor {system!r}: {exc}") from exc
    tag = getattr(getattr(T, "angle", None), "tag", None)
    params: dict = {}
    for key, value in raw.items():
        try:
            if key in _INT_KEYS:
                params[key] = int(value)
            elif key in _SCALAR_KEYS:
                params[key] = parse_scalar(value, tag)
            elif key in _STR_KEYS:
                params[key] = value
            else:
                raise ConfigError(f"unknown key {key!r}")
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from exc
    sets = {}
    for name, value in set_texts.items():
        try:
            sets[name] = _set_from_text(value, tag)
        except Exception as exc:
            raise ConfigError(f"bad set {name!r}: {exc}") from exc
    return ExperimentConfig(command, system, sets, params)


# ---------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------

@dataclass
class RunTrace:
    header: dict
    records: list
    summary: dict

    def columns(self) -> list[str]:
        seen: list[str] = []
        for rec in self.records:
            for key in rec:
                if key not in seen:
                    seen.append(key)
        return seen

    def to_columnar(self) -> str:
        lines = [f"# {key}: {value}" for key, value in self.header.items()]
        cols = self.columns()
        if cols:
            lines.append("\t".join(cols))
            for rec in self.records:
                lines.append("\t".join(str(rec.get(col, "")) for col in cols))
        for key, value in self.summary.items():
            lines.append(f"# summary.{key}: {value}")
        return "\n".join(lines) + "\n"

    def to_structured(self) -> str:
        return json.dumps({"header": self.header, "records": self.records,
                           "summary": self.summary}, indent=2) + "\n"


def _header(config: Optional[ExperimentConfig], fixture: str) -> dict:
    head = {"artifact_version": ARTIFACT_VERSION, "fixture": fixture,
            "restriction": RESTRICTION_NOTICE}
    if config is not None:
        head["config_hash"] = config.digest()
        for line in config.to_text().rstrip("\n").split("\n"):
            key, _, value = line.partition(" = ")
            head[f"config.{key}"] = value
    return head


def _pair(value: Scalar, digits: int) -> tuple[str, str]:
    return value.to_text(), render(value, digits)


# ---------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------

def _run_splinter(config: ExperimentConfig, T: Transformation,
                  digits: int) -> tuple[RunTrace, int]:
    d = splinter(T, config.require_set("J1"), config.require_set("J2"),
                 config.get_scalar("epsilon"), config.get_int("n_max"),
                 stall_window=config.opt_int("stall_window"),
                 component_budget=config.get_int("component_budget"))
    records = [rec.row(digits) for rec in d.trace]
    final = d.residuals[-1].measure() if d.residuals else Scalar(0)
    exact, dec = _pair(final, digits)
    summary = {"status": d.status, "depth": d.depth,
               "final_measure_B": exact, "final_measure_B_decimal": dec,
               "n_max": config.get_int("n_max"),
               "component_budget": config.get_int("component_budget")}
    trace = RunTrace(_header(config, f"splinter:{T.descriptor()}"),
                     records, summary)
    return trace, (2 if d.status == BUDGET_EXHAUSTED else 0)


def _run_verify(config: ExperimentConfig, T: Transformation,
                digits: int) -> tuple[RunTrace, int]:
    records, ok = [], True
    for name in sorted(config.sets):
        rep = verify_measure_preserving(T, config.sets[name])
        ok &= rep.passed
        records.append({"set": name, "preserved": rep.passed,
                        "measure": rep.measure_set.to_text(),
                        "preimage_measure": rep.measure_preimage.to_text()})
    trace = RunTrace(_header(config, f"verify:{T.descriptor()}"), records,
                     {"status": "pass" if ok else "fail", "sets": len(records)})
    return trace, (0 if ok else 1)


def _basis(config: ExperimentConfig):
    kind = config.get_str("basis")
    depth = config.get_int("depth")
    return dyadic_basis(depth) if kind == "dyadic" else arcs_basis(depth)


def _run_density(config: ExperimentConfig, T: Transformation,
                 digits: int) -> tuple[RunTrace, int]:
    S = config.require_set("S")
    eps = config.get_scalar("epsilon")
    window = density_search(S, eps, _basis(config))
    found = window is not None
    records = [{"set": S.to_text(), "epsilon": eps.to_text(), "found": found,
                "window": window.to_text() if found else ""}]
    trace = RunTrace(_header(config, "density"), records,
                     {"status": "pass" if found else "fail"})
    return trace, (0 if found else 1)


def _run_gap(config: ExperimentConfig, T: Transformation,
             digits: int) -> tuple[RunTrace, int]:
    B = config.require_set("B")
    records, ok = [], True
    basis = _basis(config)
    for J in basis.elements_at(basis.bound):
        rep = gap_theta(B, J)
        ok &= rep.caratheodory_equality
        records.append({"window": J.to_text(), "theta": rep.theta.to_text(),
                        "mu_B_J": rep.part_in.to_text(),
                        "mu_Bc_J": rep.part_out.to_text(),
                        "equality": rep.caratheodory_equality})
    trace = RunTrace(_header(config, "gap"), records,
                     {"status": "pass" if ok else "fail",
                      "windows": len(records)})
    return trace, (0 if ok else 1)


def _run_mixing(config: ExperimentConfig, T: Transformation,
                digits: int) -> tuple[RunTrace, int]:
    C, D = config.require_set("C"), config.require_set("D")
    n_max = config.get_int("n_max")
    budget = config.get_int("component_budget")
    seq = mixing_trace(T, C, D, n_max, component_budget=budget)
    records = []
    for j, value in enumerate(seq, start=1):
        exact, dec = _pair(value, digits)
        records.append({"step": j, "trace": exact, "trace_decimal": dec})
    m = config.opt_int("m") or n_max
    avg = correlation_average(T, C, D, m, component_budget=budget)
    exact, dec = _pair(avg, digits)
    product = C.measure() * D.measure()
    trace = RunTrace(_header(config, f"mixing:{T.descriptor()}"), records,
                     {"status": "pass", "m": m, "cesaro_average": exact,
                      "cesaro_average_decimal": dec,
                      "product": product.to_text()})
    return trace, 0


def _run_reduction(config: ExperimentConfig, T: Transformation,
                   digits: int) -> tuple[RunTrace, int]:
    B = config.require_set("B")
    rep = reduction_check(T, B, _basis(config), config.get_int("sample"),
                          config.get_scalar("epsilon"),
                          config.get_int("n_max"),
                          stall_window=config.opt_int("stall_window"),
                          component_budget=config.get_int("component_budget"))
    trace = RunTrace(_header(config, f"reduction:{T.descriptor()}"),
                     rep.rows, {"status": "pass" if rep.passed else "fail",
                                "mode": rep.note})
    return trace, (0 if rep.passed else 1)


_DISPATCH = {"splinter": _run_splinter, "verify": _run_verify,
             "density": _run_density, "gap": _run_gap,
             "mixing": _run_mixing, "reduction": _run_reduction}


def run(config: ExperimentConfig) -> tuple[RunTrace, int]:
    """Dispatch a config to its command; returns (trace, exit code)."""
    digits = config.get_int("digits")
    if config.command == "demo":
        return demo_kakutani()
    T = make_system(config.system)
    try:
        return _DISPATCH[config.command](config, T, digits)
    except ConfigError:
        raise
    except (ComponentBudgetError, RefinementBudgetError) as exc:
        trace = RunTrace(_header(config, config.command), [],
                         {"status": "budget-exhausted", "error": str(exc)})
        return trace, 2
    except AssertionError as exc:
        trace = RunTrace(_header(config, config.command), [],
                         {"status": "fail", "error": str(exc)})
        return trace, 1


def demo_kakutani() -> tuple[RunTrace, int]:
    """Canonical two-storey suite: total mass, preservation, splinter,
    and the discontinuity listing of the odometer."""
    T = make_system("kakutani")
    records, ok = [], True

    full = T.full_set()
    total = tower_measure(full)
    ok &= total == Scalar(Fraction(5, 3))
    records.append({"check": "total-measure", "value": total.to_text(),
                    "pass": total == Scalar(Fraction(5, 3))})

    from .intervals import AT_ZERO, ParityTail, make_set
    zero_tail = TowerSet(make_set([], [ParityTail(AT_ZERO, 0, "even")]), EMPTY)
    battery = [full, T.empty_set(),
               fixtures.tower_splinter_inputs()["J1"],
               fixtures.tower_splinter_inputs()["J2"],
               fixtures.tower_column_splinter_inputs()["J1"],
               zero_tail]
    for i, S in enumerate(battery):
        rep = verify_measure_preserving(T, S)
        ok &= rep.passed
        records.append({"check": f"preservation[{i}]", "set": S.to_text(),
                        "value": rep.measure_set.to_text(),
                        "pass": rep.passed})

    d = splinter(**fixtures.tower_splinter_inputs())
    ok &= d.status == CONVERGED
    records.append({"check": "tower-splinter", "status": d.status,
                    "depth": d.depth,
                    "final_measure_B": d.residuals[-1].measure().to_text(),
                    "pass": d.status == CONVERGED})

    disc = make_system("odometer").discontinuities(4)
    listing = ", ".join(x.to_text() for x in disc)
    expected = ", ".join(str(Fraction(1) - Fraction(1, 1 << n))
                         for n in range(5))
    ok &= listing == expected
    records.append({"check": "odometer-discontinuities", "value": listing,
                    "pass": listing == expected})

    trace = RunTrace(_header(None, "demo-kakutani"), records,
                     {"status": "pass" if ok else "fail"})
    return trace, (0 if ok else 1)


# ---------------------------------------------------------------------
# plot data
# ---------------------------------------------------------------------

def emit_plot_data(trace: RunTrace, fmt: str, out_path) -> list:
    """Write plot-ready columns; exact strings go to a JSON sidecar.

    ``csv`` keeps only numeric-looking columns (decimal renderings are
    emitted without their exactness marker); ``structured`` writes the
    full trace as JSON.  Returns the list of paths written.
    """
    import pathlib
    out_path = pathlib.Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    stamp = (f"artifact_version={trace.header.get('artifact_version')} "
             f"config_hash={trace.header.get('config_hash', 'none')}")
    written = [out_path]
    if fmt == "structured":
        body = trace.to_structured()
        out_path.write_text(f"# {stamp}\n{body}")
        return written
    if fmt != "csv":
        raise ValueError(f"unknown plot format {fmt!r}")
    cols = [c for c in trace.columns()
            if any(_numeric(rec.get(c)) for rec in trace.records)]
    lines = [f"# {stamp}"]
    if cols:
        lines.append(",".join(cols))
        for rec in trace.records:
            lines.append(",".join(_as_float_text(rec.get(col, ""))
                                  for col in cols))
    out_path.write_text("\n".join(lines) + "\n")
    sidecar = out_path.with_suffix(out_path.suffix + ".exact.json")
    sidecar.write_text(trace.to_structured())
    written.append(sidecar)
    return written


def _numeric(value) -> bool:
    if isinstance(value, (int, float)):
        return True
    if not isinstance(value, str):
        return False
    try:
        float(value.lstrip("~"))
        return True
    except ValueError:
        return False


def _as_float_text(value) -> str:
    if isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, str) and _numeric(value):
        return value.lstrip("~")
    return ""
