"""Run configuration: a flat INI document, one table per concern.

Example
-------
    [grid]
    x_max = 40.0
    n_points = 8001

    [potential]
    kind = zero

    [factorization]
    d = -0.5
    b = 1.0

    [wavenumbers]
    values = 1.0 2.0

    [regularization]
    epsilon = 1e-3
    k_max = 12.0

    [battery]
    members =
        gaussian 3.5 1.0
        gaussian 4.0 1.0
    x_samples = 2.0 3.0 4.0

    [scan]
    window = -5.0 5.0
    samples = 2001

    [smearing]
    k = 2.0
    member = gaussian 2.0 1.0

    [output]
    directory = out
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .distributions import (
    DEFAULT_BATTERY,
    DEFAULT_X_SAMPLES,
    RegularizationParams,
)
from .errors import ConfigError
from .grids import DEFAULT_GRID, Grid
from .potentials import Potential, make_potential
from .quadrature import DEFAULT_ETA_SCHEDULE
from .testfunctions import TestFunction


@dataclass(frozen=True)
class RunConfig:
    grid: Grid
    potential: Potential
    a: complex
    wavenumbers: tuple[float, ...]
    regularization: RegularizationParams
    battery: tuple[TestFunction, ...]
    x_samples: tuple[float, ...]
    scan_window: tuple[float, float]
    scan_samples: int
    smear_k: float
    smear_member: TestFunction | None
    path_d_values: tuple[float, ...]
    out_dir: Path
    identity_tol: float = 5e-3
    source: dict = field(default_factory=dict)

    @property
    def d(self) -> float:
        return self.a.real

    @property
    def b(self) -> float:
        return self.a.imag


def _get(cp, section, option, cast, default=None, required=False):
    if not cp.has_option(section, option):
        if required:
            raise ConfigError(f"missing field '{option}' in [{section}]")
        return default
    raw = cp.get(section, option)
    try:
        return cast(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for '{option}' in [{section}]: {raw!r}") from exc


def _floats(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.replace(",", " ").split())


def _member(tokens: list[str]) -> TestFunction:
    family = tokens[0]
    args = [float(t) for t in tokens[1:]]
    if family == "zero":
        return TestFunction("zero")
    if family in ("gaussian", "compact_bump"):
        if len(args) != 2:
            raise ValueError(f"{family} needs center and width")
        return TestFunction(family, args[0], args[1])
    if family == "odd_gaussian":
        return TestFunction("odd_gaussian", 0.0, args[0] if args else 1.0)
    raise ValueError(f"unknown family {family!r}")


def _members(raw: str) -> tuple[TestFunction, ...]:
    out = []
    for line in raw.splitlines():
        tokens = line.replace(",", " ").split()
        if tokens:
            out.append(_member(tokens))
    if not out:
        raise ValueError("no battery members")
    return tuple(out)


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a run configuration file.

    Raises ConfigError with the offending section/field named.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    x_max = _get(cp, "grid", "x_max", float, required=cp.has_section("grid"))
    if x_max is None:
        grid = DEFAULT_GRID
    else:
        n_points = _get(cp, "grid", "n_points", int, required=True)
        if x_max <= 0 or n_points < 2:
            raise ConfigError("bad [grid]: need x_max > 0 and n_points >= 2")
        grid = Grid(x_max, n_points)

    kind = _get(cp, "potential", "kind", str, default="zero")
    try:
        if kind == "zero":
            potential = make_potential("zero")
        elif kind == "square_well":
            potential = make_potential(
                "square_well",
                depth=_get(cp, "potential", "depth", float, required=True),
                width=_get(cp, "potential", "width", float, required=True),
            )
        elif kind == "user_table":
            potential = make_potential(
                "user_table",
                path=_get(cp, "potential", "path", str, required=True),
            )
        else:
            raise ConfigError(f"unknown potential kind {kind!r} in [potential]")
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad [potential]: {exc}") from exc

    d = _get(cp, "factorization", "d", float, required=True)
    b = _get(cp, "factorization", "b", float, required=True)
    if b == 0:
        raise ConfigError("bad [factorization]: b must be nonzero")
    if d > 0:
        raise ConfigError("bad [factorization]: d must be <= 0")
    a = complex(d, b)

    wavenumbers = _get(cp, "wavenumbers", "values", _floats, default=())

    epsilon = _get(cp, "regularization", "epsilon", float, default=0.0)
    reg = RegularizationParams(
        epsilon=epsilon,
        k_max=_get(cp, "regularization", "k_max", float, default=12.0),
        k_min=_get(cp, "regularization", "k_min", float, default=1e-3),
        k_step=_get(cp, "regularization", "k_step", float, default=0.01),
        eta_schedule=_get(
            cp, "regularization", "eta", _floats, default=DEFAULT_ETA_SCHEDULE
        ),
        override_sign=_get(
            cp, "regularization", "override_sign", cp._convert_to_boolean, default=False
        ),
    )
    if reg.k_max <= reg.k_min or reg.k_step <= 0:
        raise ConfigError("bad [regularization]: need k_max > k_min and k_step > 0")

    battery = _get(cp, "battery", "members", _members, default=DEFAULT_BATTERY)
    x_samples = _get(cp, "battery", "x_samples", _floats, default=DEFAULT_X_SAMPLES)

    window = _get(cp, "scan", "window", _floats, default=(-5.0, 5.0))
    if len(window) != 2 or window[1] <= window[0]:
        raise ConfigError("bad [scan]: window needs two increasing values")
    samples = _get(cp, "scan", "samples", int, default=2001)

    smear_k = _get(cp, "smearing", "k", float, default=1.0)
    smear_member = _get(
        cp, "smearing", "member", lambda raw: _member(raw.split()), default=None
    )

    path_ds = _get(cp, "path", "d_values", _floats, default=())
    if any(dd > 0 for dd in path_ds):
        raise ConfigError("bad [path]: all d_values must be <= 0")

    out_dir = Path(_get(cp, "output", "directory", str, default="out"))
    identity_tol = _get(cp, "output", "identity_tol", float, default=5e-3)

    return RunConfig(
        grid=grid,
        potential=potential,
        a=a,
        wavenumbers=wavenumbers,
        regularization=reg,
        battery=battery,
        x_samples=x_samples,
        scan_window=(window[0], window[1]),
        scan_samples=samples,
        smear_k=smear_k,
        smear_member=smear_member,
        path_d_values=path_ds,
        out_dir=out_dir,
        identity_tol=identity_tol,
        source={s: dict(cp.items(s)) for s in cp.sections()},
    )
