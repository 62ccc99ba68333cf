"""Scenario configuration files.

Grammar: ``[section]`` headers followed by ``key = value`` lines; ``#`` or
``;`` start comments; lists are comma-separated.  Sections and keys::

    [model]
    type = price | labor | bargaining
    types = 1, 2, 3
    lambda = 0.35          # price
    F = 1                  # price
    r = 0.1                # labor wage discounting (defaults to [scenario] r)
    max_effort = 1         # labor
    chi = 1                # bargaining, scalar or per-period list
    max_price = 3          # bargaining

    [scenario]
    p_terminal = 0.01, 0.495, 0.495
    sigma = 0.5            # scalar or one value per attrition period
    dt = 0.1
    r = 0.1
    t_bar = 10
    tol = 1e-6
    output_dir = out       # optional

    [sweep]                # optional
    sigma = 0.25, 0.5
    dt = 0.1, 0.05
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .errors import AttritionError

MODELS = ("price", "labor", "bargaining")
KNOWN = {
    "model": {"type", "types", "lambda", "f", "r", "max_effort", "chi", "max_price"},
    "scenario": {"p_terminal", "sigma", "dt", "r", "t_bar", "tol", "output_dir"},
    "sweep": {"sigma", "dt"},
}


class ConfigError(AttritionError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


@dataclass(frozen=True)
class ScenarioConfig:
    model: str
    model_params: dict
    theta_space: tuple[float, ...]
    p_terminal: tuple[float, ...]
    sigma: tuple[float, ...]  # one value, or one per attrition period
    dt: float
    r: float
    t_bar: float
    tol: float = 1e-6
    output_dir: Optional[str] = None
    sweep_sigma: tuple[float, ...] = ()
    sweep_dt: tuple[float, ...] = ()
    source: Optional[str] = field(default=None, compare=False)

    @property
    def steps(self) -> int:
        return int(round(self.t_bar / self.dt))

    def sigma_value(self):
        return self.sigma[0] if len(self.sigma) == 1 else list(self.sigma)

    def with_overrides(self, **kw) -> "ScenarioConfig":
        return replace(self, **kw)


def _line_index(text: str) -> dict[tuple[str, str], int]:
    index, section = {}, None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip().lower()
            index[(section, "")] = n
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", line)
        if m and section is not None:
            index[(section, m.group(1).strip().lower())] = n
    return index


class _Reader:
    def __init__(self, parser, lines, source):
        self.parser = parser
        self.lines = lines
        self.source = source

    def error(self, section, key, message):
        return ConfigError(message, self.lines.get((section, key)), f"{section}.{key}")

    def raw(self, section, key, default=None):
        if self.parser.has_option(section, key):
            return self.parser.get(section, key).strip()
        if default is None:
            raise ConfigError("missing required field", self.lines.get((section, "")), f"{section}.{key}")
        return default

    def number(self, section, key, default=None):
        text = self.raw(section, key, None if default is None else repr(default))
        try:
            val = float(text)
        except ValueError:
            raise self.error(section, key, f"not a number: {text!r}") from None
        if not math.isfinite(val):
            raise self.error(section, key, f"must be finite, got {text!r}")
        return val

    def numbers(self, section, key, default=None):
        text = self.raw(section, key, default)
        try:
            vals = tuple(float(x) for x in text.split(",") if x.strip())
        except ValueError:
            raise self.error(section, key, f"not a list of numbers: {text!r}") from None
        if not vals:
            raise self.error(section, key, "empty list")
        if not all(math.isfinite(v) for v in vals):
            raise self.error(section, key, "values must be finite")
        return vals


def parse_config(text: str, source: Optional[str] = None) -> ScenarioConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigError(f"cannot parse: {exc.errors[0][1] if exc.errors else exc}", line) from None
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], getattr(exc, "lineno", None)) from None
    lines = _line_index(text)
    rd = _Reader(parser, lines, source)

    for section in parser.sections():
        if section not in KNOWN:
            raise ConfigError(f"unknown section [{section}]", lines.get((section, "")))
        for key in parser.options(section):
            if key not in KNOWN[section]:
                raise rd.error(section, key, "unknown field")
    for section in ("model", "scenario"):
        if not parser.has_section(section):
            raise ConfigError(f"missing section [{section}]")

    model = rd.raw("model", "type").lower()
    if model not in MODELS:
        raise rd.error("model", "type", f"expected one of {', '.join(MODELS)}, got {model!r}")
    types = rd.numbers("model", "types", "1, 2, 3")
    if len(types) < 2 or any(b <= a for a, b in zip(types, types[1:])):
        raise rd.error("model", "types", "need at least two strictly increasing types")

    dt = rd.number("scenario", "dt")
    if dt <= 0:
        raise rd.error("scenario", "dt", "must be positive")
    r = rd.number("scenario", "r")
    if r <= 0:
        raise rd.error("scenario", "r", "must be positive")
    t_bar = rd.number("scenario", "t_bar")
    if t_bar < 0 or abs(round(t_bar / dt) * dt - t_bar) > 1e-9:
        raise rd.error("scenario", "t_bar", f"must be a nonnegative multiple of dt={dt:g}")
    tol = rd.number("scenario", "tol", 1e-6)
    if tol <= 0:
        raise rd.error("scenario", "tol", "must be positive")

    p_terminal = rd.numbers("scenario", "p_terminal")
    if len(p_terminal) != len(types):
        raise rd.error("scenario", "p_terminal", f"expected {len(types)} weights, got {len(p_terminal)}")
    if any(w < 0 for w in p_terminal) or abs(sum(p_terminal) - 1) > 1e-9:
        raise rd.error("scenario", "p_terminal", "weights must be nonnegative and sum to 1")
    sigma = rd.numbers("scenario", "sigma")
    steps = int(round(t_bar / dt))
    if len(sigma) not in (1, steps):
        raise rd.error("scenario", "sigma", f"give one intensity or {steps} (one per period)")
    if any(s < 0 for s in sigma):
        raise rd.error("scenario", "sigma", "intensities must be nonnegative")

    params: dict = {}
    if model == "price":
        params["lam"] = rd.number("model", "lambda")
        params["F"] = rd.number("model", "f")
    elif model == "labor":
        params["r"] = rd.number("model", "r", r)
        params["max_effort"] = rd.number("model", "max_effort", 1.0)
    else:
        chi = rd.numbers("model", "chi", "1")
        params["chi"] = chi[0] if len(chi) == 1 else chi
        params["max_price"] = rd.number("model", "max_price", 3.0)

    sweep_sigma = rd.numbers("sweep", "sigma") if parser.has_option("sweep", "sigma") else ()
    sweep_dt = rd.numbers("sweep", "dt") if parser.has_option("sweep", "dt") else ()
    output_dir = parser.get("scenario", "output_dir").strip() if parser.has_option("scenario", "output_dir") else None

    return ScenarioConfig(
        model=model,
        model_params=params,
        theta_space=types,
        p_terminal=p_terminal,
        sigma=sigma,
        dt=dt,
        r=r,
        t_bar=t_bar,
        tol=tol,
        output_dir=output_dir,
        sweep_sigma=sweep_sigma,
        sweep_dt=sweep_dt,
        source=source,
    )


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, str(path))
