"""Exact jet-prolongation engine for pseudogroup orbit computations.

A Scenario describes a bundle R^p x R^q, a family of generating vector
fields whose coefficients are polynomials in the base and order-0 fiber
coordinates and linear in the Taylor coefficients of finitely many free
functions of the base, and coordinate strata (equalities / inequations on
jet coordinates).  The engine prolongs the generators to jet space by the
standard recursion

    component on u_{sigma + e_i} = D_i(component on u_sigma)
                                   - sum_j u_{sigma + e_j} * D_i(xi_j),

evaluates them at seeded random rational points of a stratum, and measures
the orbit codimension by exact rank.  All sampling places the base point
at the origin: the shipped pseudogroups contain the base translations,
which act trivially on the fiber jet coordinates of the trivialized
bundle, so orbit ranks are unchanged -- and Taylor parameters above the
cutoff then contribute exactly zero rows, which is asserted through
sentinel parameters.

Free-function truncation: order-k components involve jets of the free
functions up to order k + lift_order, so functions are truncated at
polynomial degree k + lift_order + 1 with a sentinel one degree higher.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .algebra import Polynomial, RationalFunction
from .exprs import ExpressionError, evaluate_node, parse_expression
from .hilbert import HilbertSpec, gf_from_hilbert
from .jetpoly import Poly, RationalPair, matrix_rank

MultiIndex = tuple[int, ...]


class OrderExceeded(ValueError):
    """A total derivative stepped past the jet space's order."""


class BadPoint(ValueError):
    """Point coordinates do not match the jet space."""


class NonlinearParameters(ValueError):
    """An expression multiplied two parameter-carrying factors."""


class GenericityFailure(RuntimeError):
    """Sampled ranks stayed inconsistent after retries."""


class BadSample(RuntimeError):
    """Could not sample a point satisfying the open conditions."""


class UnknownScenario(ValueError):
    """No built-in scenario with that id."""


def _multi_indices(p: int, total: int) -> list[MultiIndex]:
    """All multi-indices of given total order, descending lexicographic."""
    if p == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _multi_indices(p - 1, total - first):
            out.append((first,) + rest)
    return out


def _add_index(sigma: MultiIndex, i: int) -> MultiIndex:
    return sigma[:i] + (sigma[i] + 1,) + sigma[i + 1 :]


class JetSpace:
    """Coordinates of J^order(R^p, R^q): base x_i and jet u^alpha_sigma.

    Variable ids are assigned deterministically: base variables first, then
    jet coordinates by total order, fiber index, and descending
    lexicographic multi-index (u10 before u01).  The order-0 jet coordinate
    prints as the bare fiber name.
    """

    def __init__(
        self,
        p: int,
        q: int,
        order: int,
        base_names: Sequence[str],
        fiber_names: Sequence[str],
    ):
        if order > 9:
            raise OrderExceeded("jet orders beyond 9 are not supported")
        if len(base_names) != p or len(fiber_names) != q:
            raise ValueError("name lists must match p and q")
        self.p = p
        self.q = q
        self.order = order
        self.base_names = tuple(base_names)
        self.fiber_names = tuple(fiber_names)
        self._names: list[str] = []
        self._jet_of: dict[tuple[int, MultiIndex], int] = {}
        self._info: list[tuple] = []
        for i, name in enumerate(self.base_names):
            self._names.append(name)
            self._info.append(("base", i))
        for m in range(order + 1):
            for alpha in range(q):
                for sigma in _multi_indices(p, m):
                    var = len(self._names)
                    self._jet_of[(alpha, sigma)] = var
                    self._names.append(self._jet_name(alpha, sigma))
                    self._info.append(("jet", alpha, sigma))
        self._by_name = {name: var for var, name in enumerate(self._names)}

    def _jet_name(self, alpha: int, sigma: MultiIndex) -> str:
        base = self.fiber_names[alpha]
        if sum(sigma) == 0:
            return base
        digits = "".join(str(s) for s in sigma)
        sep = "_" if base[-1].isdigit() else ""
        return f"{base}{sep}{digits}"

    @property
    def dim(self) -> int:
        return len(self._names)

    def jet_var(self, alpha: int, sigma: MultiIndex) -> int:
        try:
            return self._jet_of[(alpha, sigma)]
        except KeyError:
            raise OrderExceeded(
                f"coordinate u^{alpha}_{sigma} exceeds order {self.order}"
            ) from None

    def base_var(self, i: int) -> int:
        return i

    def info(self, var: int) -> tuple:
        return self._info[var]

    def name_of(self, var: int) -> str:
        return self._names[var]

    def var_by_name(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise BadPoint(f"unknown coordinate {name!r}") from None

    def coordinates(self) -> range:
        return range(len(self._names))

    def coordinate_names(self) -> list[str]:
        return list(self._names)

    def jet_items(self) -> list[tuple[int, MultiIndex, int]]:
        """(alpha, sigma, var) for all jet coordinates in coordinate order."""
        out = []
        for var, info in enumerate(self._info):
            if info[0] == "jet":
                out.append((info[1], info[2], var))
        return out


def total_derivative(space: JetSpace, poly: Poly, direction: int) -> Poly:
    """D_i = d/dx_i + sum u^alpha_{sigma+e_i} d/du^alpha_sigma on jet polynomials."""
    if not 0 <= direction < space.p:
        raise ValueError(f"direction {direction} out of range")
    out = poly.diff(space.base_var(direction))
    for var in poly.variables():
        info = space.info(var)
        if info[0] != "jet":
            continue
        partial = poly.diff(var)
        if partial.is_zero():
            continue
        _, alpha, sigma = info
        target = space.jet_var(alpha, _add_index(sigma, direction))
        out = out + Poly.variable(target) * partial
    return out


class LinExpr:
    """Polynomial expression linear in parameters: {param or None: Poly}."""

    __slots__ = ("parts",)

    def __init__(self, parts: Mapping[Optional[int], Poly] | None = None):
        cleaned = {}
        if parts:
            for key, poly in parts.items():
                if not poly.is_zero():
                    cleaned[key] = poly
        object.__setattr__(self, "parts", cleaned)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("LinExpr is immutable")

    @classmethod
    def constant(cls, value) -> "LinExpr":
        return cls({None: Poly.constant(value)})

    @classmethod
    def from_poly(cls, poly: Poly) -> "LinExpr":
        return cls({None: poly})

    @classmethod
    def parameter(cls, param: int, coeff: Poly | None = None) -> "LinExpr":
        return cls({param: coeff if coeff is not None else Poly.constant(1)})

    def is_zero(self) -> bool:
        return not self.parts

    def param_free(self) -> bool:
        return set(self.parts) <= {None}

    def __add__(self, other) -> "LinExpr":
        other = _coerce_lin(other)
        if other is None:
            return NotImplemented
        out = dict(self.parts)
        for key, poly in other.parts.items():
            acc = out.get(key, Poly.zero()) + poly
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
        return LinExpr(out)

    __radd__ = __add__

    def __neg__(self) -> "LinExpr":
        return LinExpr({key: -poly for key, poly in self.parts.items()})

    def __sub__(self, other) -> "LinExpr":
        other = _coerce_lin(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LinExpr":
        other = _coerce_lin(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "LinExpr":
        other = _coerce_lin(other)
        if other is None:
            return NotImplemented
        if not self.param_free() and not other.param_free():
            raise NonlinearParameters(
                "product of two parameter-carrying expressions"
            )
        if self.param_free():
            scalar = self.parts.get(None, Poly.zero())
            carrier = other
        else:
            scalar = other.parts.get(None, Poly.zero())
            carrier = self
        return LinExpr({key: scalar * poly for key, poly in carrier.parts.items()})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LinExpr":
        other = _coerce_lin(other)
        if other is None:
            return NotImplemented
        if not other.param_free():
            raise NonlinearParameters("division by a parameter-carrying expression")
        divisor = other.parts.get(None, Poly.zero())
        try:
            c = divisor.constant_value()
        except ValueError:
            raise NonlinearParameters(
                "division by a non-constant polynomial in a field component"
            ) from None
        if c == 0:
            raise ZeroDivisionError("division by zero")
        inv = Fraction(1) / c
        return LinExpr({key: poly * inv for key, poly in self.parts.items()})

    def __pow__(self, exponent: int) -> "LinExpr":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative int")
        if exponent == 0:
            return LinExpr.constant(1)
        if exponent == 1:
            return self
        if not self.param_free():
            raise NonlinearParameters("power of a parameter-carrying expression")
        return LinExpr({None: self.parts.get(None, Poly.zero()) ** exponent})

    def map_polys(self, fn: Callable[[Poly], Poly]) -> "LinExpr":
        return LinExpr({key: fn(poly) for key, poly in self.parts.items()})

    def evaluate(self, point: Mapping[int, Fraction]) -> dict[Optional[int], Fraction]:
        return {key: poly.evaluate(point) for key, poly in self.parts.items()}


def _coerce_lin(value) -> LinExpr | None:
    if isinstance(value, LinExpr):
        return value
    if isinstance(value, Poly):
        return LinExpr.from_poly(value)
    if isinstance(value, (int, Fraction)):
        return LinExpr.constant(value)
    return None


@dataclass(frozen=True)
class ParamField:
    """A generating field on the order-0 bundle, linear in its parameters."""

    label: str
    xi: tuple[LinExpr, ...]  # base components
    phi: tuple[LinExpr, ...]  # fiber components


@dataclass(frozen=True)
class ParamInfo:
    """Descriptor of one global parameter slot."""

    name: str
    sentinel: bool


@dataclass(frozen=True)
class ProlongedField:
    """Components of a prolonged generator on a JetSpace."""

    space: JetSpace
    label: str
    xi: tuple[LinExpr, ...]
    components: dict[tuple[int, MultiIndex], LinExpr]

    def component(self, alpha: int, sigma: MultiIndex) -> LinExpr:
        return self.components[(alpha, sigma)]


def prolong(space: JetSpace, field: ParamField, order: int | None = None) -> ProlongedField:
    """Geometric prolongation of a field to jet coordinates of the space.

    Seeds with the order-0 fiber components and applies the recursion; each
    order-m component involves jet coordinates of order at most m, so the
    result is a genuine vector field on the finite jet space.
    """
    k = space.order if order is None else order
    if k > space.order:
        raise OrderExceeded(f"order {k} exceeds the space's order {space.order}")
    dxi = [
        [field.xi[j].map_polys(lambda poly, i=i: total_derivative(space, poly, i))
         for j in range(space.p)]
        for i in range(space.p)
    ]
    components: dict[tuple[int, MultiIndex], LinExpr] = {}
    zero_sigma = (0,) * space.p
    for alpha in range(space.q):
        components[(alpha, zero_sigma)] = field.phi[alpha]
    for m in range(1, k + 1):
        for sigma in _multi_indices(space.p, m):
            i = next(idx for idx, s in enumerate(sigma) if s > 0)
            tau = sigma[:i] + (sigma[i] - 1,) + sigma[i + 1 :]
            for alpha in range(space.q):
                prev = components[(alpha, tau)]
                acc = prev.map_polys(
                    lambda poly: total_derivative(space, poly, i)
                )
                for j in range(space.p):
                    shift = Poly.variable(space.jet_var(alpha, _add_index(tau, j)))
                    acc = acc - dxi[i][j] * shift
                components[(alpha, sigma)] = acc
    return ProlongedField(space=space, label=field.label, xi=field.xi, components=components)


def vertical_representative(
    p: int,
    q: int,
    base_names: Sequence[str],
    fiber_names: Sequence[str],
    field: ParamField,
    k: int,
) -> dict[tuple[int, MultiIndex], LinExpr]:
    """Evolutionary form: component on u^alpha_sigma is D^sigma(characteristic).

    The characteristic is Q_alpha = phi_alpha - sum_i xi_i u^alpha_{e_i};
    components of order k involve jet coordinates of order k + 1, so they
    live in a one-order-larger space (returned expressions reference it).
    """
    space = JetSpace(p, q, k + 1, base_names, fiber_names)
    out: dict[tuple[int, MultiIndex], LinExpr] = {}
    zero_sigma = (0,) * p
    for alpha in range(q):
        q_char = field.phi[alpha]
        for i in range(p):
            e_i = _add_index(zero_sigma, i)
            q_char = q_char - field.xi[i] * Poly.variable(space.jet_var(alpha, e_i))
        out[(alpha, zero_sigma)] = q_char
        for m in range(1, k + 1):
            for sigma in _multi_indices(p, m):
                i = next(idx for idx, s in enumerate(sigma) if s > 0)
                tau = sigma[:i] + (sigma[i] - 1,) + sigma[i + 1 :]
                out[(alpha, sigma)] = out[(alpha, tau)].map_polys(
                    lambda poly: total_derivative(space, poly, i)
                )
    return out


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StratumCase:
    """A coordinate stratum: vanishing jet coordinates plus open conditions."""

    label: str
    equalities: tuple[str, ...] = ()
    inequations: tuple[str, ...] = ()

    def __post_init__(self):
        overlap = set(self.equalities) & set(self.inequations)
        if overlap:
            raise ValueError(f"coordinates {sorted(overlap)} both zero and nonzero")


class Scenario:
    """Declarative description of a pseudogroup action on a trivial bundle.

    Built from a plain dict (JSON-compatible), so new examples need no code:

        {"id": ..., "base": [names], "fiber": [names],
         "free_functions": [names], "lift_order": r0,
         "generators": [{"xi": [exprs], "phi": [exprs]}, ...],
         "strata": [{"label": ..., "equalities": [...], "inequations": [...]}],
         "invariants": {label: [rational exprs]},          # optional
         "positivity": [polynomial exprs required > 0]}    # optional

    Generator expressions use base names, order-0 fiber names, and
    free-function jet tokens f, f_x, f_xy, ... (suffix letters are base
    names); each free function belongs to the single generator using it.
    """

    def __init__(self, data: Mapping):
        self.id: str = data["id"]
        self.base: tuple[str, ...] = tuple(data["base"])
        self.fiber: tuple[str, ...] = tuple(data["fiber"])
        self.free_functions: tuple[str, ...] = tuple(data.get("free_functions", ()))
        self.lift_order: int = int(data.get("lift_order", 0))
        self.generators: tuple[Mapping, ...] = tuple(data["generators"])
        self.strata: dict[str, StratumCase] = {}
        for raw in data.get("strata", ()):
            case = StratumCase(
                label=raw["label"],
                equalities=tuple(raw.get("equalities", ())),
                inequations=tuple(raw.get("inequations", ())),
            )
            self.strata[case.label] = case
        self.invariants: dict[str, tuple[str, ...]] = {
            label: tuple(exprs)
            for label, exprs in dict(data.get("invariants", {})).items()
        }
        self.positivity: tuple[str, ...] = tuple(data.get("positivity", ()))
        self.p = len(self.base)
        self.q = len(self.fiber)
        for name in self.base:
            if len(name) != 1:
                raise ValueError("base variable names must be single letters")

    def space(self, order: int) -> JetSpace:
        return JetSpace(self.p, self.q, order, self.base, self.fiber)

    def stratum(self, label: str) -> StratumCase:
        try:
            return self.strata[label]
        except KeyError:
            raise UnknownScenario(
                f"scenario {self.id!r} has no stratum {label!r}"
            ) from None

    # -- generator instantiation ----------------------------------------

    def instantiate(
        self, space: JetSpace, cutoff: int
    ) -> tuple[list[ParamField], list[ParamInfo]]:
        """Truncate free functions at polynomial degree `cutoff`.

        Parameters are the monomial coefficients of each free function up
        to the cutoff, plus one sentinel coefficient of degree cutoff + 1
        per function, which must act trivially in every later evaluation.
        Each free function belongs to the one generator that mentions it.
        """
        params: list[ParamInfo] = []
        fields = []
        for g_idx, gen in enumerate(self.generators):
            symbols = set()
            for expr in list(gen["xi"]) + list(gen["phi"]):
                symbols |= _expression_symbols(expr)
            tokens: dict[str, LinExpr] = {}
            for fname in self.free_functions:
                gammas = self._requested_gammas(fname, symbols)
                if not gammas:
                    continue
                degrees: list[tuple[MultiIndex, int]] = []
                for total in range(cutoff + 1):
                    for beta in _multi_indices(self.p, total):
                        degrees.append((beta, len(params)))
                        params.append(
                            ParamInfo(name=f"{fname}[{beta}]", sentinel=False)
                        )
                sentinel_beta = (cutoff + 1,) + (0,) * (self.p - 1)
                degrees.append((sentinel_beta, len(params)))
                params.append(
                    ParamInfo(name=f"{fname}[{sentinel_beta}]#sentinel", sentinel=True)
                )
                for token, gamma in gammas.items():
                    parts: dict[Optional[int], Poly] = {}
                    for beta, param in degrees:
                        poly = _monomial_derivative(space, beta, gamma)
                        if not poly.is_zero():
                            parts[param] = poly
                    tokens[token] = LinExpr(parts)
            resolver = self._symbol_resolver(space, tokens)
            xi = tuple(_parse_component(expr, resolver) for expr in gen["xi"])
            phi = tuple(_parse_component(expr, resolver) for expr in gen["phi"])
            if len(xi) != self.p or len(phi) != self.q:
                raise ValueError("generator component count must match p and q")
            fields.append(ParamField(label=f"gen{g_idx}", xi=xi, phi=phi))
        return fields, params

    def _requested_gammas(self, fname: str, symbols: set) -> dict[str, MultiIndex]:
        """Map of jet tokens of one free function used in the expressions."""
        out: dict[str, MultiIndex] = {}
        for sym in symbols:
            if sym == fname:
                out[sym] = (0,) * self.p
            elif sym.startswith(fname + "_"):
                suffix = sym[len(fname) + 1 :]
                gamma = [0] * self.p
                for ch in suffix:
                    if ch not in self.base:
                        raise ExpressionError(
                            f"bad derivative suffix {sym!r}: {ch!r} is not a base variable"
                        )
                    gamma[self.base.index(ch)] += 1
                out[sym] = tuple(gamma)
        return out

    def _symbol_resolver(self, space: JetSpace, tokens: dict[str, LinExpr]):
        zero_sigma = (0,) * self.p

        def resolve(name: str) -> LinExpr:
            if name in tokens:
                return tokens[name]
            if name in self.base:
                return LinExpr.from_poly(
                    Poly.variable(space.base_var(self.base.index(name)))
                )
            if name in self.fiber:
                alpha = self.fiber.index(name)
                return LinExpr.from_poly(
                    Poly.variable(space.jet_var(alpha, zero_sigma))
                )
            raise ExpressionError(
                f"unknown symbol {name!r} in a generator of scenario {self.id!r}"
            )

        return resolve

    # -- invariant parsing -------------------------------------------------

    def parse_invariant(self, space: JetSpace, text: str) -> RationalPair:
        def resolve(name: str) -> RationalPair:
            return RationalPair(Poly.variable(space.var_by_name(name)))

        node = parse_expression(text)
        return evaluate_node(node, RationalPair.constant, resolve)


def _expression_symbols(text: str) -> set[str]:
    from .exprs import Sym, Neg, BinOp, Pow, parse_expression as _parse

    node = _parse(text)
    out: set[str] = set()

    def walk(n):
        if isinstance(n, Sym):
            out.add(n.name)
        elif isinstance(n, Neg):
            walk(n.operand)
        elif isinstance(n, BinOp):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Pow):
            walk(n.base)

    walk(node)
    return out


def _parse_component(text: str, resolver) -> LinExpr:
    node = parse_expression(text)
    return evaluate_node(node, LinExpr.constant, resolver)


def _monomial_derivative(space: JetSpace, beta: MultiIndex, gamma: MultiIndex) -> Poly:
    """d^gamma (x^beta) as a polynomial in the base variables."""
    coeff = 1
    exps = []
    for i in range(len(beta)):
        if gamma[i] > beta[i]:
            return Poly.zero()
        for step in range(gamma[i]):
            coeff *= beta[i] - step
        exps.append(beta[i] - gamma[i])
    mono = tuple(
        (space.base_var(i), e) for i, e in enumerate(exps) if e > 0
    )
    return Poly({mono: Fraction(coeff)})


# ---------------------------------------------------------------------------
# Points, rows, ranks
# ---------------------------------------------------------------------------


def make_point(space: JetSpace, values: Mapping[str, Fraction]) -> dict[int, Fraction]:
    """Assignment for every coordinate; base defaults to 0, jets are required."""
    point: dict[int, Fraction] = {}
    for name, value in values.items():
        var = space.var_by_name(name)
        point[var] = Fraction(value)
    for var in space.coordinates():
        if var in point:
            continue
        kind = space.info(var)[0]
        if kind == "base":
            point[var] = Fraction(0)
        else:
            raise BadPoint(f"missing value for coordinate {space.name_of(var)!r}")
    return point


def _rows_at_point(
    prolonged: Sequence[ProlongedField],
    params: Sequence[ParamInfo],
    point: Mapping[int, Fraction],
) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Tangent rows (one per parameter / per fixed generator) and the
    sentinel violations (sentinel parameters with any nonzero entry)."""
    if not prolonged:
        return [], []
    space = prolonged[0].space
    coords = list(space.coordinates())
    n = len(coords)
    rows: list[list[Fraction]] = []
    violations: list[list[Fraction]] = []
    zero = Fraction(0)
    for field in prolonged:
        per_key: dict[Optional[int], list[Fraction]] = {}

        def bump(key, col, value):
            if value == 0:
                return
            row = per_key.get(key)
            if row is None:
                row = [zero] * n
                per_key[key] = row
            row[col] = value

        for col, var in enumerate(coords):
            info = space.info(var)
            if info[0] == "base":
                expr = field.xi[info[1]]
            else:
                expr = field.components[(info[1], info[2])]
            for key, value in expr.evaluate(point).items():
                bump(key, col, value)
        for key, row in per_key.items():
            if key is not None and params[key].sentinel:
                violations.append(row)
            else:
                rows.append(row)
    return rows, violations


def _check_sentinels(violations: list[list[Fraction]]) -> None:
    if violations:
        raise ValueError(
            "sentinel parameter acts nontrivially: cutoff too small "
            "or base point away from the origin"
        )


def orbit_rank(
    scenario: Scenario,
    point_values: Mapping[str, Fraction],
    k: int,
    param_cutoff: int | None = None,
) -> int:
    """Exact dimension of the orbit tangent span at a jet point.

    One matrix row per free-function Taylor parameter and per fixed
    generator, columns over all coordinates of J^k.  The sentinel
    parameters (degree cutoff + 1) must contribute zero rows.
    """
    space = scenario.space(k)
    cutoff = (
        param_cutoff if param_cutoff is not None else k + scenario.lift_order + 1
    )
    fields, params = scenario.instantiate(space, cutoff)
    prolonged = [prolong(space, f) for f in fields]
    point = make_point(space, point_values)
    rows, sentinel_rows = _rows_at_point(prolonged, params, point)
    base_at_origin = all(
        point[space.base_var(i)] == 0 for i in range(space.p)
    )
    if base_at_origin:
        _check_sentinels(sentinel_rows)
    return matrix_rank(rows)


def sample_stratum_point(
    space: JetSpace,
    stratum: StratumCase,
    rng: random.Random,
    positivity: Sequence[RationalPair] = (),
    max_tries: int = 60,
) -> dict[str, Fraction]:
    """Seeded random rational stratum point: base at origin, fibers in [-20, 20].

    Equality coordinates are 0, inequation coordinates nonzero, everything
    else a reduced random fraction; optional positivity expressions must
    evaluate positive (resampled until they do).
    """
    eq = set(stratum.equalities)
    ineq = set(stratum.inequations)
    names = []
    for var in space.coordinates():
        if space.info(var)[0] == "jet":
            names.append(space.name_of(var))
    for _ in range(max_tries):
        values: dict[str, Fraction] = {}
        for name in names:
            if name in eq:
                values[name] = Fraction(0)
                continue
            num = rng.randint(-20, 20)
            if name in ineq:
                while num == 0:
                    num = rng.randint(-20, 20)
            values[name] = Fraction(num, rng.randint(1, 20))
        if positivity:
            point = make_point(space, values)
            ok = True
            for expr in positivity:
                den = expr.den.evaluate(point)
                if den == 0 or expr.num.evaluate(point) / den <= 0:
                    ok = False
                    break
            if not ok:
                continue
        return values
    raise BadSample(
        f"could not sample a point of stratum {stratum.label!r} "
        f"after {max_tries} tries"
    )


class _StratumEngine:
    """Shared prolongation/evaluation machinery for one scenario at one order."""

    def __init__(self, scenario: Scenario, k_max: int):
        self.scenario = scenario
        self.k_max = k_max
        self.space = scenario.space(k_max)
        cutoff = k_max + scenario.lift_order + 1
        self.fields, self.params = scenario.instantiate(self.space, cutoff)
        self.prolonged = [prolong(self.space, f) for f in self.fields]
        self.positivity = [
            scenario.parse_invariant(self.space, text) for text in scenario.positivity
        ]
        # column count of the order-k block (coordinates are sorted by order)
        self.cols_at = [
            self.space.p
            + self.space.q * sum(len(_multi_indices(self.space.p, m)) for m in range(k + 1))
            for k in range(k_max + 1)
        ]

    def eq_columns(self, stratum: StratumCase) -> list[int]:
        return [self.space.var_by_name(name) for name in stratum.equalities]

    def ranks_for_point(self, values: Mapping[str, Fraction], stratum: StratumCase) -> list[int]:
        point = make_point(self.space, values)
        rows, sentinel_rows = _rows_at_point(self.prolonged, self.params, point)
        _check_sentinels(sentinel_rows)
        eq_cols = self.eq_columns(stratum)
        for row in rows:
            for col in eq_cols:
                if row[col] != 0:
                    raise ValueError(
                        f"generator not tangent to stratum {stratum.label!r} "
                        f"at coordinate {self.space.name_of(col)!r}"
                    )
        return [matrix_rank([row[: self.cols_at[k]] for row in rows])
                for k in range(self.k_max + 1)]

    def stratum_dim(self, stratum: StratumCase, k: int) -> int:
        eq_orders = [
            sum(self.space.info(self.space.var_by_name(name))[2])
            for name in stratum.equalities
        ]
        active = sum(1 for order in eq_orders if order <= k)
        return self.cols_at[k] - active


def stratum_codim_sequence(
    scenario: Scenario,
    stratum: StratumCase | str,
    k_max: int,
    seed: int,
) -> tuple[list[int], list[int]]:
    """Orbit codimensions s_k inside the stratum and increments h_k, k = 0..k_max.

    Three seeded sample points per round; the per-order ranks must agree
    across the round (one retry round, then genericity-failure).  Generators
    are checked tangent to the stratum and sentinel rows checked zero at
    every sampled point.
    """
    if isinstance(stratum, str):
        stratum = scenario.stratum(stratum)
    engine = _StratumEngine(scenario, k_max)
    rng = random.Random(seed)
    ranks: list[list[int]] | None = None
    for _ in range(2):
        trials = []
        for _ in range(3):
            values = sample_stratum_point(
                engine.space, stratum, rng, engine.positivity
            )
            trials.append(engine.ranks_for_point(values, stratum))
        if all(t == trials[0] for t in trials):
            ranks = trials
            break
    if ranks is None:
        raise GenericityFailure(
            f"ranks inconsistent across samples for stratum {stratum.label!r}"
        )
    rank_k = [max(t[k] for t in ranks) for k in range(k_max + 1)]
    s = [engine.stratum_dim(stratum, k) - rank_k[k] for k in range(k_max + 1)]
    h = [s[0]] + [s[k] - s[k - 1] for k in range(1, k_max + 1)]
    return s, h


def annihilation_check(
    scenario: Scenario,
    invariant: str,
    stratum: StratumCase | str,
    seed: int,
    n_points: int = 20,
) -> bool:
    """True iff the invariant's derivative along every generator row vanishes
    at n_points seeded random stratum points.

    The invariant is a rational expression in jet coordinates; its
    denominator must be nonzero at the sampled points (resampled when it
    vanishes, error if that keeps failing).
    """
    if isinstance(stratum, str):
        stratum = scenario.stratum(stratum)
    probe_space = scenario.space(9)
    pair_probe = scenario.parse_invariant(probe_space, invariant)
    order = 0
    for poly in (pair_probe.num, pair_probe.den):
        for var in poly.variables():
            info = probe_space.info(var)
            if info[0] == "jet":
                order = max(order, sum(info[2]))
    engine = _StratumEngine(scenario, order)
    space = engine.space
    pair = scenario.parse_invariant(space, invariant)
    coords = list(space.coordinates())
    d_num = [pair.num.diff(var) for var in coords]
    d_den = [pair.den.diff(var) for var in coords]
    rng = random.Random(seed)
    checked = 0
    attempts = 0
    while checked < n_points:
        attempts += 1
        if attempts > 3 * n_points:
            raise BadSample(
                f"invariant denominator vanishes on stratum {stratum.label!r}"
            )
        values = sample_stratum_point(space, stratum, rng, engine.positivity)
        point = make_point(space, values)
        den_value = pair.den.evaluate(point)
        if den_value == 0:
            continue
        num_value = pair.num.evaluate(point)
        rows, sentinel_rows = _rows_at_point(engine.prolonged, engine.params, point)
        _check_sentinels(sentinel_rows)
        dn = [p.evaluate(point) for p in d_num]
        dd = [p.evaluate(point) for p in d_den]
        for row in rows:
            derivative = sum(
                row[c] * (dn[c] * den_value - num_value * dd[c])
                for c in range(len(coords))
                if row[c] != 0
            )
            if derivative != 0:
                return False
        checked += 1
    return True


# ---------------------------------------------------------------------------
# Built-in scenarios and the worked demos
# ---------------------------------------------------------------------------

#: pseudogroup (x, y, u) -> (X(x, y), y + c1, u + c2) acting on scalar
#: functions u(x, y); generators f(x, y) d/dx, d/dy, d/du
X_REPARAM = {
    "id": "x-reparam",
    "base": ["x", "y"],
    "fiber": ["u"],
    "free_functions": ["f"],
    "lift_order": 0,
    "generators": [
        {"xi": ["f", "0"], "phi": ["0"]},
        {"xi": ["0", "1"], "phi": ["0"]},
        {"xi": ["0", "0"], "phi": ["1"]},
    ],
    "strata": [
        {"label": "sigma0", "equalities": [], "inequations": ["u10"]},
        {"label": "sigma1", "equalities": ["u10"], "inequations": ["u20"]},
        {"label": "sigma2", "equalities": ["u10", "u20"], "inequations": ["u11"]},
        {
            "label": "sigma3",
            "equalities": ["u10", "u20", "u11"],
            "inequations": ["u30"],
        },
        {
            "label": "sigma4",
            "equalities": ["u10", "u20", "u11", "u30"],
            "inequations": ["u21"],
        },
        {
            "label": "sigma5",
            "equalities": ["u10", "u20", "u11", "u30", "u21"],
            "inequations": ["u12"],
        },
        {
            "label": "sigma6",
            "equalities": ["u10", "u20", "u11", "u30", "u21", "u12"],
            "inequations": ["u40"],
        },
    ],
    "invariants": {
        "sigma1": [
            "u01",
            "u02 - u11^2/u20",
            "u03 - (u11^3/u20^3)*u30 + 3*(u11^2/u20^2)*u21 - 3*(u11/u20)*u12",
        ],
        "sigma2": [
            "u01",
            "u30/u11^3",
            "u40/u11^4 - 6*u30*u21/u11^5 + 3*u02*u30^2/u11^6",
        ],
        "sigma3": [
            "u01",
            "u02",
            "u03 + 2*u21^3/u30^2 - 3*u21*u12/u30",
            "(u30*u12 - u21^2)^3/u30^4",
        ],
    },
}

#: full diffeomorphism pseudogroup of the plane lifted to metric coefficients
METRIC2D = {
    "id": "metric2d",
    "base": ["x", "y"],
    "fiber": ["g11", "g12", "g22"],
    "free_functions": ["a", "b"],
    "lift_order": 1,
    "generators": [
        {
            "xi": ["a", "b"],
            "phi": [
                "-(2*g11*a_x + 2*g12*b_x)",
                "-(g11*a_y + g12*b_y + g12*a_x + g22*b_x)",
                "-(2*g12*a_y + 2*g22*b_y)",
            ],
        }
    ],
    "strata": [{"label": "generic", "equalities": [], "inequations": []}],
    "positivity": ["g11", "g11*g22 - g12^2"],
}

BUILTIN_SCENARIOS = {
    "x-reparam": X_REPARAM,
    "metric2d": METRIC2D,
}


def get_scenario(scenario_id: str) -> Scenario:
    try:
        return Scenario(BUILTIN_SCENARIOS[scenario_id])
    except KeyError:
        raise UnknownScenario(
            f"unknown scenario {scenario_id!r}; built-in: {sorted(BUILTIN_SCENARIOS)}"
        ) from None


_SIGMA_CHAIN = ("sigma0", "sigma1", "sigma2", "sigma3", "sigma4", "sigma5", "sigma6")


@dataclass(frozen=True)
class StratumRow:
    label: str
    h: tuple[int, ...]
    counting_function: RationalFunction
    note: str


def _fit_constant_tail(h: Sequence[int]) -> HilbertSpec:
    """Fit an eventually-constant spec; needs 3 equal trailing values."""
    if len(h) < 3 or not (h[-1] == h[-2] == h[-3]):
        raise GenericityFailure(
            f"no constant tail visible in {list(h)}; extend k_max"
        )
    c = h[-1]
    onset = len(h) - 1
    while onset > 0 and h[onset - 1] == c:
        onset -= 1
    exceptions = {k: h[k] for k in range(onset) if h[k] != 0}
    return HilbertSpec(exceptions, onset, Polynomial.constant(c))


def lie_example_table(k_max: int = 7, seed: int = 2024) -> list[StratumRow]:
    """Orbit-codimension table of the x-reparametrization pseudogroup.

    Runs the rank engine over the singular strata sigma0..sigma6 up to
    k_max and fits each row's counting function; the final row is the
    infinite stratum, handled analytically (the residual action there is
    the three translations, leaving one new invariant per order).
    """
    scenario = get_scenario("x-reparam")
    rows = []
    for label in _SIGMA_CHAIN:
        _, h = stratum_codim_sequence(scenario, label, k_max, seed)
        if all(v == 0 for v in h):
            spec = HilbertSpec({}, 0, Polynomial.zero())
        else:
            spec = _fit_constant_tail(h)
        rows.append(
            StratumRow(
                label=label,
                h=tuple(h),
                counting_function=gf_from_hilbert(spec),
                note=f"fit verified to k_max={k_max} only",
            )
        )
    inf_spec = HilbertSpec({}, 1, Polynomial.constant(1))
    rows.append(
        StratumRow(
            label="sigma-infinity",
            h=tuple(inf_spec.values(k_max)),
            counting_function=gf_from_hilbert(inf_spec),
            note="analytic: residual action is the three translations",
        )
    )
    return rows


def metric2d_case(k_max: int, seed: int = 2024) -> list[int]:
    """h_k of plane metrics under diffeomorphisms, by direct rank counting.

    Cost-guarded to k_max <= 4 (the prolonged expressions grow quickly).
    """
    if k_max > 4:
        raise ValueError("metric2d_case is cost-guarded to k_max <= 4")
    scenario = get_scenario("metric2d")
    _, h = stratum_codim_sequence(scenario, "generic", k_max, seed)
    return h


# ---------------------------------------------------------------------------
# The 3D distribution sub-example
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistributionReport:
    stratum: str
    rank: int
    checks: tuple[tuple[str, bool], ...]


def distribution_example(seed: int = 77, n_points: int = 20) -> list[DistributionReport]:
    """Rank and invariant checks for the 3D involutive pair on (r, s, t).

    The vector fields are X = 2r d/dr + s d/ds and Y = r d/ds + 2s d/dt.
    On the open stratum r != 0 the candidate invariant t - s^2/r is
    annihilated by both fields while the commonly quoted variant t - s^2/t
    is not; both outcomes are reported, nothing is silently corrected.
    """
    r, s, t = Poly.variable(0), Poly.variable(1), Poly.variable(2)
    fields = {
        "X": [2 * r, s, Poly.zero()],
        "Y": [Poly.zero(), r, 2 * s],
    }

    def derivative_along(name: str, pair: RationalPair, point) -> Fraction:
        num_v = pair.num.evaluate(point)
        den_v = pair.den.evaluate(point)
        if den_v == 0:
            raise BadSample("denominator vanished at a sample point")
        total = Fraction(0)
        for var in (0, 1, 2):
            comp = fields[name][var].evaluate(point)
            if comp == 0:
                continue
            total += comp * (
                pair.num.diff(var).evaluate(point) * den_v
                - num_v * pair.den.diff(var).evaluate(point)
            )
        return total

    def annihilated(pair: RationalPair, sampler) -> bool:
        rng = random.Random(seed)
        for _ in range(n_points):
            point = sampler(rng)
            for name in ("X", "Y"):
                if derivative_along(name, pair, point) != 0:
                    return False
        return True

    def rank_at(sampler) -> int:
        rng = random.Random(seed + 1)
        best = 0
        for _ in range(3):
            point = sampler(rng)
            rows = [
                [fields[name][var].evaluate(point) for var in (0, 1, 2)]
                for name in ("X", "Y")
            ]
            best = max(best, matrix_rank(rows))
        return best

    def frac(rng, nonzero=False):
        num = rng.randint(-20, 20)
        while nonzero and num == 0:
            num = rng.randint(-20, 20)
        return Fraction(num, rng.randint(1, 20))

    def open_sampler(rng):
        return {0: frac(rng, nonzero=True), 1: frac(rng), 2: frac(rng, nonzero=True)}

    def r_zero_sampler(rng):
        return {0: Fraction(0), 1: frac(rng, nonzero=True), 2: frac(rng)}

    def line_sampler(rng):
        return {0: Fraction(0), 1: Fraction(0), 2: frac(rng)}

    candidate = RationalPair(t * r - s * s, r)  # t - s^2/r
    printed = RationalPair(t * t - s * s, t)  # t - s^2/t as printed
    plain_t = RationalPair(t)

    return [
        DistributionReport(
            stratum="r != 0",
            rank=rank_at(open_sampler),
            checks=(
                ("t - s^2/r annihilated", annihilated(candidate, open_sampler)),
                ("t - s^2/t annihilated", annihilated(printed, open_sampler)),
            ),
        ),
        DistributionReport(
            stratum="r = 0, s != 0",
            rank=rank_at(r_zero_sampler),
            checks=(),
        ),
        DistributionReport(
            stratum="r = s = 0",
            rank=rank_at(line_sampler),
            checks=(("t annihilated", annihilated(plain_t, line_sampler)),),
        ),
    ]
