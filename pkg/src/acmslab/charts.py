"""Coordinate charts whose structure tensors are symbolic expressions.

A chart holds one expression per tensor component (metric, endomorphism
field, Reeb field, contact form) in variables x1..xd, plus a derivative
mode. Evaluation produces plain numpy arrays at a point; first and second
derivatives come either from exact symbolic differentiation or from central
differences, selected by the mode. Everything downstream (Christoffel
symbols, covariant derivatives, curvature assembly) consumes the arrays
produced here.

Chart files are line oriented: ``dim = 5``, an optional
``derivative_mode = symbolic | fd[:<step>]``, optional per-coordinate
``domain[i] = <lo> <hi>`` bounds, and component lines ``g[i][j] = <expr>``,
``phi[i][j] = <expr>``, ``xi[i] = <expr>``, ``eta[i] = <expr>`` with
1-based indices. Omitted components are zero; ``#`` starts a comment.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace

import numpy as np

from .config import DEFAULT_TOLERANCES, FD_SECOND_STEP
from .errors import ChartFormatError, ShapeError
from .exprs import EvalError, Expr, Num, differentiate, evaluate, free_variables, parse, to_text
from .linalg import LinearOp, Metric
from .structure import AcmsPoint

_ZERO = Num(0.0)
_DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True)
class DerivativeMode:
    """How chart derivatives are taken: exact symbolic trees or central
    finite differences with a fixed step."""

    kind: str
    step: float | None = None

    def __post_init__(self):
        if self.kind not in ("symbolic", "fd"):
            raise ChartFormatError(f"unknown derivative mode {self.kind!r}")
        if self.kind == "fd":
            if self.step is None:
                object.__setattr__(self, "step", _DEFAULT_FD_STEP)
            elif self.step <= 0:
                raise ChartFormatError(f"finite-difference step must be positive, got {self.step}")
        elif self.step is not None:
            raise ChartFormatError("symbolic mode takes no step")

    @classmethod
    def parse(cls, text: str) -> "DerivativeMode":
        text = text.strip()
        if text == "symbolic":
            return cls("symbolic")
        if text == "fd":
            return cls("fd")
        if text.startswith("fd:"):
            try:
                return cls("fd", float(text[3:]))
            except ValueError as exc:
                raise ChartFormatError(f"bad finite-difference step in {text!r}") from exc
        raise ChartFormatError(f"unknown derivative mode {text!r}")

    def format(self) -> str:
        if self.kind == "symbolic":
            return "symbolic"
        return f"fd:{self.step!r}"


SYMBOLIC = DerivativeMode("symbolic")


def _grid2(entries, dim: int) -> tuple[tuple[Expr, ...], ...]:
    rows = tuple(tuple(row) for row in entries)
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ShapeError(f"expected a {dim}x{dim} expression grid")
    return rows


def _grid1(entries, dim: int) -> tuple[Expr, ...]:
    row = tuple(entries)
    if len(row) != dim:
        raise ShapeError(f"expected {dim} expressions")
    return row


@dataclass(frozen=True)
class Chart:
    """One coordinate chart: expression grids plus evaluation machinery."""

    dim: int
    g: tuple[tuple[Expr, ...], ...]
    phi: tuple[tuple[Expr, ...], ...]
    xi: tuple[Expr, ...]
    eta: tuple[Expr, ...]
    mode: DerivativeMode = SYMBOLIC
    domain: tuple[tuple[float, float], ...] = ()
    name: str = ""
    _dcache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ShapeError(f"dimension must be positive, got {self.dim}")
        object.__setattr__(self, "g", _grid2(self.g, self.dim))
        object.__setattr__(self, "phi", _grid2(self.phi, self.dim))
        object.__setattr__(self, "xi", _grid1(self.xi, self.dim))
        object.__setattr__(self, "eta", _grid1(self.eta, self.dim))
        if not self.domain:
            object.__setattr__(self, "domain", tuple((-1.0, 1.0) for _ in range(self.dim)))
        else:
            dom = tuple((float(lo), float(hi)) for lo, hi in self.domain)
            if len(dom) != self.dim:
                raise ShapeError(f"domain has {len(dom)} intervals for dimension {self.dim}")
            for k, (lo, hi) in enumerate(dom):
                if not lo < hi:
                    raise ChartFormatError(f"domain[{k + 1}] is empty: [{lo}, {hi}]")
            object.__setattr__(self, "domain", dom)
        for expr in self._all_exprs():
            extra = {i for i in free_variables(expr) if i > self.dim}
            if extra:
                names = ", ".join(f"x{i}" for i in sorted(extra))
                raise ChartFormatError(
                    f"expression {to_text(expr)!r} uses variables outside the chart: {names}"
                )

    def _all_exprs(self):
        for row in self.g:
            yield from row
        for row in self.phi:
            yield from row
        yield from self.xi
        yield from self.eta

    def with_mode(self, mode: DerivativeMode) -> "Chart":
        return replace(self, mode=mode)

    # -- point evaluation ---------------------------------------------------

    def _values(self, y) -> list[float]:
        y = np.asarray(y, float)
        if y.shape != (self.dim,):
            raise ShapeError(f"point has shape {y.shape}, expected ({self.dim},)")
        return [float(v) for v in y]

    def _eval(self, expr: Expr, values: list[float], what: str) -> float:
        try:
            return evaluate(expr, values)
        except EvalError as exc:
            raise EvalError(f"{what} at point {values}: {exc.message}", exc.where) from exc

    def g_at(self, y) -> np.ndarray:
        values = self._values(y)
        out = np.empty((self.dim, self.dim))
        for i in range(self.dim):
            for j in range(self.dim):
                out[i, j] = self._eval(self.g[i][j], values, f"g[{i + 1}][{j + 1}]")
        return out

    def metric_at(self, y) -> Metric:
        return Metric(self.g_at(y))

    def phi_at(self, y) -> LinearOp:
        values = self._values(y)
        out = np.empty((self.dim, self.dim))
        for i in range(self.dim):
            for j in range(self.dim):
                out[i, j] = self._eval(self.phi[i][j], values, f"phi[{i + 1}][{j + 1}]")
        return LinearOp(out)

    def xi_at(self, y) -> np.ndarray:
        values = self._values(y)
        return np.array([self._eval(self.xi[i], values, f"xi[{i + 1}]")
                         for i in range(self.dim)])

    def eta_at(self, y) -> np.ndarray:
        values = self._values(y)
        return np.array([self._eval(self.eta[i], values, f"eta[{i + 1}]")
                         for i in range(self.dim)])

    def acms_point_at(self, y, *, tol: float | None = None) -> AcmsPoint:
        if tol is None:
            tol = DEFAULT_TOLERANCES.acms_exact
        return AcmsPoint(self.phi_at(y), self.xi_at(y), self.eta_at(y),
                         self.metric_at(y), tol=tol)

    # -- derivative grids ---------------------------------------------------

    def _diff(self, expr: Expr, k: int) -> Expr:
        key = ("d", expr, k)
        cached = self._dcache.get(key)
        if cached is None:
            cached = differentiate(expr, k + 1)
            self._dcache[key] = cached
        return cached

    def _sym_grid(self, key: str, builder):
        grid = self._dcache.get(key)
        if grid is None:
            grid = builder()
            self._dcache[key] = grid
        return grid

    def dg_at(self, y) -> np.ndarray:
        """dg[k, i, j] is the x_k derivative of g[i][j]."""
        if self.mode.kind == "fd":
            return self._fd_tensor(self.g_at, y, (self.dim, self.dim))
        grid = self._sym_grid("dg", lambda: tuple(
            tuple(tuple(self._diff(self.g[i][j], k) for j in range(self.dim))
                  for i in range(self.dim))
            for k in range(self.dim)))
        values = self._values(y)
        out = np.empty((self.dim,) * 3)
        for k in range(self.dim):
            for i in range(self.dim):
                for j in range(self.dim):
                    out[k, i, j] = self._eval(grid[k][i][j], values,
                                              f"d g[{i + 1}][{j + 1}] / d x{k + 1}")
        return out

    def ddg_at(self, y) -> np.ndarray:
        """ddg[m, k, i, j] is the second derivative of g[i][j] along x_m, x_k.
        Only available in symbolic mode; finite differencing is handled one
        level up by differentiating Christoffel symbols directly."""
        if self.mode.kind == "fd":
            raise ShapeError("second metric derivatives are symbolic-mode only")
        grid = self._sym_grid("ddg", lambda: tuple(
            tuple(tuple(tuple(self._diff(self._diff(self.g[i][j], k), m)
                              for j in range(self.dim)) for i in range(self.dim))
                  for k in range(self.dim))
            for m in range(self.dim)))
        values = self._values(y)
        out = np.empty((self.dim,) * 4)
        for m in range(self.dim):
            for k in range(self.dim):
                for i in range(self.dim):
                    for j in range(self.dim):
                        out[m, k, i, j] = self._eval(
                            grid[m][k][i][j], values,
                            f"dd g[{i + 1}][{j + 1}] / d x{k + 1} d x{m + 1}")
        return out

    def dphi_at(self, y) -> np.ndarray:
        """dphi[k, i, j] is the x_k derivative of phi[i][j]."""
        if self.mode.kind == "fd":
            return self._fd_tensor(lambda p: self.phi_at(p).mat, y, (self.dim, self.dim))
        grid = self._sym_grid("dphi", lambda: tuple(
            tuple(tuple(self._diff(self.phi[i][j], k) for j in range(self.dim))
                  for i in range(self.dim))
            for k in range(self.dim)))
        values = self._values(y)
        out = np.empty((self.dim,) * 3)
        for k in range(self.dim):
            for i in range(self.dim):
                for j in range(self.dim):
                    out[k, i, j] = self._eval(grid[k][i][j], values,
                                              f"d phi[{i + 1}][{j + 1}] / d x{k + 1}")
        return out

    def dxi_at(self, y) -> np.ndarray:
        """dxi[k, i] is the x_k derivative of xi[i]."""
        if self.mode.kind == "fd":
            return self._fd_tensor(self.xi_at, y, (self.dim,))
        grid = self._sym_grid("dxi", lambda: tuple(
            tuple(self._diff(self.xi[i], k) for i in range(self.dim))
            for k in range(self.dim)))
        values = self._values(y)
        out = np.empty((self.dim, self.dim))
        for k in range(self.dim):
            for i in range(self.dim):
                out[k, i] = self._eval(grid[k][i], values, f"d xi[{i + 1}] / d x{k + 1}")
        return out

    def deta_at(self, y) -> np.ndarray:
        """deta[k, i] is the x_k derivative of eta[i]."""
        if self.mode.kind == "fd":
            return self._fd_tensor(self.eta_at, y, (self.dim,))
        grid = self._sym_grid("deta", lambda: tuple(
            tuple(self._diff(self.eta[i], k) for i in range(self.dim))
            for k in range(self.dim)))
        values = self._values(y)
        out = np.empty((self.dim, self.dim))
        for k in range(self.dim):
            for i in range(self.dim):
                out[k, i] = self._eval(grid[k][i], values, f"d eta[{i + 1}] / d x{k + 1}")
        return out

    def _fd_tensor(self, fn, y, comp_shape) -> np.ndarray:
        y = np.asarray(y, float)
        h = self.mode.step
        out = np.empty((self.dim,) + comp_shape)
        for k in range(self.dim):
            bump = np.zeros(self.dim)
            bump[k] = h
            out[k] = (np.asarray(fn(y + bump)) - np.asarray(fn(y - bump))) / (2.0 * h)
        return out


# ---------------------------------------------------------------------------
# derived pointwise geometry


def christoffel(chart: Chart, y) -> np.ndarray:
    """Levi-Civita symbols Gam[k, i, j] with upper index first."""
    ginv = chart.metric_at(y).inverse
    dg = chart.dg_at(y)
    term = dg + np.transpose(dg, (1, 0, 2)) - np.transpose(dg, (1, 2, 0))
    return 0.5 * np.einsum("kl,ijl->kij", ginv, term)


def christoffel_derivative(chart: Chart, y) -> np.ndarray:
    """dGam[m, k, i, j], the x_m derivative of Gam[k, i, j].

    Symbolic mode differentiates the closed form through the metric inverse;
    finite-difference mode re-centers `christoffel` with the second-level step.
    """
    if chart.mode.kind == "fd":
        d = chart.dim
        y = np.asarray(y, float)
        step = FD_SECOND_STEP
        out = np.empty((d, d, d, d))
        for m in range(d):
            bump = np.zeros(d)
            bump[m] = step
            out[m] = (christoffel(chart, y + bump) - christoffel(chart, y - bump)) / (2.0 * step)
        return out
    ginv = chart.metric_at(y).inverse
    dg = chart.dg_at(y)
    ddg = chart.ddg_at(y)
    term = dg + np.transpose(dg, (1, 0, 2)) - np.transpose(dg, (1, 2, 0))
    dterm = (ddg + np.transpose(ddg, (0, 2, 1, 3)) - np.transpose(ddg, (0, 2, 3, 1)))
    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    return (0.5 * np.einsum("mkl,ijl->mkij", dginv, term)
            + 0.5 * np.einsum("kl,mijl->mkij", ginv, dterm))


def nabla_xi(chart: Chart, y) -> LinearOp:
    """Covariant gradient of the Reeb field: column j is the derivative of
    xi along the j-th coordinate direction."""
    gam = christoffel(chart, y)
    dxi = chart.dxi_at(y)
    mat = dxi.T + np.einsum("ijk,k->ij", gam, chart.xi_at(y))
    return LinearOp(mat)


def nabla_phi(chart: Chart, y) -> np.ndarray:
    """Table T[i, j, k]: the j-th component of (nabla_{e_i} phi)(e_k)."""
    gam = christoffel(chart, y)
    phi = chart.phi_at(y).mat
    dphi = chart.dphi_at(y)
    return (dphi + np.einsum("jil,lk->ijk", gam, phi)
            - np.einsum("lik,jl->ijk", gam, phi))


def d_eta(chart: Chart, y) -> np.ndarray:
    """Exterior derivative of the contact form with the 1/2 convention,
    so that d eta agrees with g(nabla xi applied and paired) exactly."""
    deta = chart.deta_at(y)
    return 0.5 * (deta - deta.T)


def _perm_sign(perm) -> int:
    inversions = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def contact_volume_coefficient(eta_vec, deta_mat) -> float:
    """Coordinate coefficient of eta wedge (d eta)^n on the frame.

    Uses the determinant convention for wedge products, which introduces a
    1/2^n normalization for the n two-form factors.
    """
    eta_vec = np.asarray(eta_vec, float)
    deta_mat = np.asarray(deta_mat, float)
    d = eta_vec.shape[0]
    n = (d - 1) // 2
    total = 0.0
    for perm in itertools.permutations(range(d)):
        term = _perm_sign(perm) * eta_vec[perm[0]]
        if term == 0.0:
            continue
        for p in range(n):
            term *= deta_mat[perm[1 + 2 * p], perm[2 + 2 * p]]
        total += term
    return total / (2.0 ** n)


def sample_points(chart: Chart, count: int, seed: int, *, shrink: float = 0.9) -> np.ndarray:
    """Uniform draws from the chart's domain box, shrunk toward its center
    to keep finite-difference stencils inside the domain."""
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in chart.domain])
    hi = np.array([b[1] for b in chart.domain])
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo) * shrink
    return center + rng.uniform(-1.0, 1.0, (count, chart.dim)) * half


# ---------------------------------------------------------------------------
# file format

_INDEXED2 = re.compile(r"^(g|phi)\[(\d+)\]\[(\d+)\]$")
_INDEXED1 = re.compile(r"^(xi|eta|domain)\[(\d+)\]$")


def chart_from_text(text: str, *, name: str = "") -> Chart:
    dim = None
    mode = SYMBOLIC
    mode_line = None
    domain: dict[int, tuple[float, float]] = {}
    fields2: dict[tuple[str, int, int], Expr] = {}
    fields1: dict[tuple[str, int], Expr] = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ChartFormatError(f"line {lineno}: expected 'name = value', got {raw.strip()!r}")
        lhs, rhs = line.split("=", 1)
        lhs = lhs.strip()
        rhs = rhs.strip()
        if lhs in seen:
            raise ChartFormatError(f"line {lineno}: duplicate assignment to {lhs}")
        seen.add(lhs)
        if lhs == "dim":
            try:
                dim = int(rhs)
            except ValueError as exc:
                raise ChartFormatError(f"line {lineno}: dim must be an integer") from exc
            if dim < 1:
                raise ChartFormatError(f"line {lineno}: dim must be positive")
            continue
        if lhs == "derivative_mode":
            try:
                mode = DerivativeMode.parse(rhs)
            except ChartFormatError as exc:
                raise ChartFormatError(f"line {lineno}: {exc}") from exc
            mode_line = lineno
            continue
        if dim is None:
            raise ChartFormatError(f"line {lineno}: dim must be set before {lhs!r}")
        m2 = _INDEXED2.match(lhs)
        m1 = _INDEXED1.match(lhs)
        if m2:
            kind, i, j = m2.group(1), int(m2.group(2)), int(m2.group(3))
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ChartFormatError(f"line {lineno}: index out of range in {lhs} (dim {dim})")
            fields2[(kind, i - 1, j - 1)] = _parse_component(rhs, lineno)
        elif m1:
            kind, i = m1.group(1), int(m1.group(2))
            if not 1 <= i <= dim:
                raise ChartFormatError(f"line {lineno}: index out of range in {lhs} (dim {dim})")
            if kind == "domain":
                parts = rhs.split()
                if len(parts) != 2:
                    raise ChartFormatError(f"line {lineno}: domain wants '<lo> <hi>'")
                try:
                    lo, hi = float(parts[0]), float(parts[1])
                except ValueError as exc:
                    raise ChartFormatError(f"line {lineno}: bad domain bound") from exc
                if not lo < hi:
                    raise ChartFormatError(f"line {lineno}: empty domain [{lo}, {hi}]")
                domain[i - 1] = (lo, hi)
            else:
                fields1[(kind, i - 1)] = _parse_component(rhs, lineno)
        else:
            raise ChartFormatError(f"line {lineno}: unrecognized field {lhs!r}")
    if dim is None:
        raise ChartFormatError("chart file never sets dim")
    del mode_line

    def entry2(kind, i, j):
        expr = fields2.get((kind, i, j))
        if expr is None and kind == "g":
            expr = fields2.get((kind, j, i))
        return expr if expr is not None else _ZERO

    g = [[entry2("g", i, j) for j in range(dim)] for i in range(dim)]
    phi = [[fields2.get(("phi", i, j), _ZERO) for j in range(dim)] for i in range(dim)]
    xi = [fields1.get(("xi", i), _ZERO) for i in range(dim)]
    eta = [fields1.get(("eta", i), _ZERO) for i in range(dim)]
    dom = tuple(domain.get(i, (-1.0, 1.0)) for i in range(dim))
    return Chart(dim, tuple(map(tuple, g)), tuple(map(tuple, phi)),
                 tuple(xi), tuple(eta), mode=mode, domain=dom, name=name)


def _parse_component(rhs: str, lineno: int) -> Expr:
    try:
        return parse(rhs)
    except Exception as exc:
        raise ChartFormatError(f"line {lineno}: {exc}") from exc


def chart_to_text(chart: Chart) -> str:
    lines = [f"dim = {chart.dim}", f"derivative_mode = {chart.mode.format()}"]
    for i, (lo, hi) in enumerate(chart.domain):
        if (lo, hi) != (-1.0, 1.0):
            lines.append(f"domain[{i + 1}] = {lo!r} {hi!r}")
    for i in range(chart.dim):
        for j in range(chart.dim):
            if chart.g[i][j] != _ZERO and chart.g[i][j] != Num(0):
                lines.append(f"g[{i + 1}][{j + 1}] = {to_text(chart.g[i][j])}")
    for i in range(chart.dim):
        for j in range(chart.dim):
            if chart.phi[i][j] != _ZERO and chart.phi[i][j] != Num(0):
                lines.append(f"phi[{i + 1}][{j + 1}] = {to_text(chart.phi[i][j])}")
    for i in range(chart.dim):
        if chart.xi[i] != _ZERO and chart.xi[i] != Num(0):
            lines.append(f"xi[{i + 1}] = {to_text(chart.xi[i])}")
    for i in range(chart.dim):
        if chart.eta[i] != _ZERO and chart.eta[i] != Num(0):
            lines.append(f"eta[{i + 1}] = {to_text(chart.eta[i])}")
    return "\n".join(lines) + "\n"


def load_chart(path, *, name: str | None = None) -> Chart:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if name is None:
        name = str(path)
    return chart_from_text(text, name=name)


def save_chart(chart: Chart, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(chart_to_text(chart))
