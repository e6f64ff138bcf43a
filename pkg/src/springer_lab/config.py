"""Experiment configuration files (TOML).

Grammar (all values integers unless noted)::

    name = "node"                 # string, optional
    description = "..."           # string, optional

    [field]
    p = 3                         # odd prime
    e = 1                         # q = p^e
    hermitian = true              # k = F_{q^2} with eps; false: k = F_q

    [[branch]]                    # one table per branch, in order
    n = 1                         # pi = t^n
    gamma = [ { exp = 1, coeff = [0, 1] } ]   # coeff = [plain, eps]: plain + eps*eps

    [[partition]]                 # optional, 1-based branch labels
    I1 = [1]
    I2 = [2]

    [run]                         # optional
    d = [0]                       # components Z^d to enumerate
    route = "sandwich"            # or "window"
    window = 0                    # window depth N (0 = automatic)
    absorb = 1                    # branch absorbing the Lambda^0 normalization
    precision_ceiling = 128
    budget = 10000000
    fiber_samples = 20
    sections = ["invariants", "enumerate", "orbital", "strata", "verify-fl"]
                                  # what ``corpus`` runs for this file

    [expected]                    # optional regression values
    delta = 1
    conductor = [1, 1]
    z0 = 3                        # |Z^0(k)|
    SO = 5                        # |Z^0(F_q)| (hermitian data)
    O_kappa = [3]                 # one per partition

Plain and ``eps`` parts are codes of ``F_q`` (reduced mod ``p`` when
``e = 1``, so negative integers are allowed there).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .fields import FieldError, galois_field, hermitian_field
from .series import TruncatedSeries
from .spectral import Branch, SpectralDatum, SpectralError

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config"]


class ConfigError(ValueError):
    """A configuration problem, tagged with the offending key path."""

    def __init__(self, where, message):
        super().__init__(f"{where}: {message}")
        self.where = where


_ROUTES = ("sandwich", "window")
_SECTIONS = ("invariants", "enumerate", "orbital", "strata", "verify-fl")


@dataclass
class ExperimentConfig:
    name: str
    description: str
    p: int
    e: int
    hermitian: bool
    branches: list
    partitions: list
    d: list = dc_field(default_factory=lambda: [0])
    route: str = "sandwich"
    window: int = 0
    absorb: int = 0
    precision_ceiling: int = 128
    budget: int = 10**7
    fiber_samples: int = 20
    sections: tuple = _SECTIONS
    expected: dict = dc_field(default_factory=dict)
    source: str = ""

    @property
    def field(self):
        return hermitian_field(self.p, self.e) if self.hermitian else galois_field(self.p, self.e)

    @property
    def q(self):
        return self.p**self.e

    def datum(self):
        F = self.field
        branches = []
        for n, terms in self.branches:
            coeffs = {exp: self._element(F, plain, eps) for exp, plain, eps in terms}
            gamma = TruncatedSeries.from_terms(F, coeffs)
            branches.append(Branch(n, gamma, self.hermitian))
        return SpectralDatum(F, branches, self.precision_ceiling, self.name)

    def _element(self, F, plain, eps):
        q = self.q
        if self.e == 1:
            plain, eps = plain % self.p, eps % self.p
        if self.hermitian:
            return plain + eps * q
        return plain


def _need(table, key, kind, where):
    if key not in table:
        raise ConfigError(where, f"missing key '{key}'")
    return _typed(table[key], kind, f"{where}.{key}" if where else key)


def _typed(value, kind, where):
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ConfigError(where, f"expected an integer, got {value!r}")
    if kind is bool and not isinstance(value, bool):
        raise ConfigError(where, f"expected true/false, got {value!r}")
    if kind is str and not isinstance(value, str):
        raise ConfigError(where, f"expected a string, got {value!r}")
    if kind is list and not isinstance(value, list):
        raise ConfigError(where, f"expected an array, got {value!r}")
    if kind is dict and not isinstance(value, dict):
        raise ConfigError(where, f"expected a table, got {value!r}")
    return value


def _known(table, keys, where):
    extra = sorted(set(table) - set(keys))
    if extra:
        raise ConfigError(where or "top level", f"unknown key(s) {extra}")


def parse_config(doc, source="<string>"):
    """Validate a parsed TOML document and build an :class:`ExperimentConfig`."""
    _known(doc, ["name", "description", "field", "branch", "partition", "run", "expected"], "")
    name = _typed(doc.get("name", Path(source).stem), str, "name")
    description = _typed(doc.get("description", ""), str, "description")
    fld = _need(doc, "field", dict, "")
    _known(fld, ["p", "e", "hermitian"], "field")
    p = _need(fld, "p", int, "field")
    e = _typed(fld.get("e", 1), int, "field.e")
    herm = _typed(fld.get("hermitian", False), bool, "field.hermitian")
    if p == 2:
        raise ConfigError("field.p", "even characteristic is not supported")
    if e < 1:
        raise ConfigError("field.e", "must be >= 1")
    q = p**e
    try:
        galois_field(p, e)
    except FieldError as exc:
        raise ConfigError("field.p", str(exc)) from None
    if q**(2 if herm else 1) > 1024:
        raise ConfigError("field", f"coefficient field of order {q ** (2 if herm else 1)} is too large (max 1024)")

    raw_branches = _need(doc, "branch", list, "")
    if not raw_branches:
        raise ConfigError("branch", "at least one branch is required")
    branches = []
    for bi, b in enumerate(raw_branches):
        where = f"branch[{bi + 1}]"
        _typed(b, dict, where)
        _known(b, ["n", "gamma"], where)
        n = _need(b, "n", int, where)
        if n < 1:
            raise ConfigError(f"{where}.n", "must be >= 1")
        terms = []
        for ti, t in enumerate(_need(b, "gamma", list, where)):
            tw = f"{where}.gamma[{ti + 1}]"
            _typed(t, dict, tw)
            _known(t, ["exp", "coeff"], tw)
            exp = _need(t, "exp", int, tw)
            coeff = _need(t, "coeff", list, tw)
            if len(coeff) != 2:
                raise ConfigError(f"{tw}.coeff", "expected [plain, eps]")
            plain = _typed(coeff[0], int, f"{tw}.coeff[1]")
            eps = _typed(coeff[1], int, f"{tw}.coeff[2]")
            if e > 1 and not (0 <= plain < q and 0 <= eps < q):
                raise ConfigError(f"{tw}.coeff", f"parts must be F_{q} codes in [0, {q})")
            if not herm and eps % p:
                raise ConfigError(f"{tw}.coeff", "eps parts need field.hermitian = true")
            if exp < 1:
                raise ConfigError(f"{tw}.exp", "gamma must vanish at t = 0 (exp >= 1)")
            terms.append((exp, plain, eps))
        if not terms:
            raise ConfigError(f"{where}.gamma", "gamma = 0 is not allowed")
        branches.append((n, terms))

    m = len(branches)
    partitions = []
    for pi, part in enumerate(doc.get("partition", [])):
        where = f"partition[{pi + 1}]"
        _typed(part, dict, where)
        _known(part, ["I1", "I2"], where)
        I1 = [_typed(x, int, f"{where}.I1") for x in _need(part, "I1", list, where)]
        I2 = [_typed(x, int, f"{where}.I2") for x in _need(part, "I2", list, where)]
        if not I1 or not I2:
            raise ConfigError(where, "both parts must be nonempty")
        if sorted(I1 + I2) != list(range(1, m + 1)):
            raise ConfigError(where, f"I1 and I2 must partition the labels 1..{m}")
        partitions.append(([x - 1 for x in I1], [x - 1 for x in I2]))

    run = _typed(doc.get("run", {}), dict, "run")
    _known(run, ["d", "route", "window", "absorb", "precision_ceiling", "budget", "fiber_samples", "sections"], "run")
    d = [_typed(x, int, "run.d") for x in _typed(run.get("d", [0]), list, "run.d")]
    route = _typed(run.get("route", "sandwich"), str, "run.route")
    if route not in _ROUTES:
        raise ConfigError("run.route", f"expected one of {_ROUTES}")
    window = _typed(run.get("window", 0), int, "run.window")
    absorb = _typed(run.get("absorb", 1), int, "run.absorb")
    if not 1 <= absorb <= m:
        raise ConfigError("run.absorb", f"must be a branch label in 1..{m}")
    ceiling = _typed(run.get("precision_ceiling", 128), int, "run.precision_ceiling")
    budget = _typed(run.get("budget", 10**7), int, "run.budget")
    samples = _typed(run.get("fiber_samples", 20), int, "run.fiber_samples")
    sections = [_typed(x, str, "run.sections") for x in _typed(run.get("sections", list(_SECTIONS)), list, "run.sections")]
    bad = sorted(set(sections) - set(_SECTIONS))
    if bad:
        raise ConfigError("run.sections", f"unknown section(s) {bad}; expected some of {_SECTIONS}")
    expected = _typed(doc.get("expected", {}), dict, "expected")
    _known(expected, ["delta", "conductor", "z0", "SO", "O_kappa"], "expected")

    cfg = ExperimentConfig(
        name=name,
        description=description,
        p=p,
        e=e,
        hermitian=herm,
        branches=branches,
        partitions=partitions,
        d=d,
        route=route,
        window=window,
        absorb=absorb - 1,
        precision_ceiling=ceiling,
        budget=budget,
        fiber_samples=samples,
        sections=tuple(sections),
        expected=expected,
        source=source,
    )
    # cross-field constraints are checked by building the datum now
    try:
        cfg.datum()
    except (SpectralError, FieldError) as exc:
        raise ConfigError("branch", str(exc)) from None
    return cfg


def load_config(path, precision_ceiling=None, budget=None):
    """Read and validate a TOML file; command-line overrides win."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc.strerror}") from None
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"TOML syntax error: {exc}") from None
    cfg = parse_config(doc, str(path))
    if precision_ceiling is not None:
        cfg.precision_ceiling = precision_ceiling
    if budget is not None:
        cfg.budget = budget
    return cfg
