"""Finite-dimensional triple systems and their operator calculus.

Three concrete models share one interface:

  disc         complex numbers, {x,y,z} = x conj(y) z, norm |x|
  hilbert(n)   column vectors, {x,y,z} = ((x|y) z + (z|y) x)/2, norm ||x||_2
  matrix(p,q)  p-by-q complex matrices, {x,y,z} = (x y* z + z y* x)/2,
               norm = largest singular value

with (x|y) linear in x and conjugate-linear in y. Elements are flat
coordinate vectors in the canonical basis (matrix units row-major for the
matrix model); the matrix shape only matters to the norm and the product.

The box operator x [] y = {x, y, .} is linear and is represented by its
matrix in the canonical basis. The quadratic operator Q_x = {x, ., x} is
conjugate-linear; it is stored as the matrix of its linear part, to be
applied to conjugated coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UsageError
from .linalg import CMatrix, spectral_norm, spectrum
from .sampling import SamplingBudget, gaussian_complex, stream

_KINDS = ("disc", "hilbert", "matrix")


@dataclass(frozen=True)
class TripleModel:
    """One of the three concrete models; dims is (), (n,) or (p, q)."""

    kind: str
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UsageError(f"unknown model kind {self.kind!r}")
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        expected = {"disc": 0, "hilbert": 1, "matrix": 2}[self.kind]
        if len(dims) != expected:
            raise UsageError(f"{self.kind} model takes {expected} dimension(s), got {dims}")
        if any(d < 1 for d in dims):
            raise UsageError(f"model dimensions must be >= 1, got {dims}")

    @property
    def coord_dim(self) -> int:
        if self.kind == "disc":
            return 1
        if self.kind == "hilbert":
            return self.dims[0]
        return self.dims[0] * self.dims[1]

    @property
    def norm_kind(self) -> str:
        return {"disc": "modulus", "hilbert": "euclidean", "matrix": "spectral"}[self.kind]

    def descriptor(self) -> str:
        if self.kind == "disc":
            return "disc"
        if self.kind == "hilbert":
            return f"hilbert:{self.dims[0]}"
        return f"matrix:{self.dims[0]}x{self.dims[1]}"

    def __str__(self):
        return self.descriptor()


def disc() -> TripleModel:
    return TripleModel("disc")


def hilbert(n: int) -> TripleModel:
    return TripleModel("hilbert", (n,))


def matrix(p: int, q: int) -> TripleModel:
    return TripleModel("matrix", (p, q))


def parse_model(text: str) -> TripleModel:
    """Parse a model descriptor: "disc", "hilbert:N", "matrix:PxQ"."""
    t = text.strip().lower()
    if t == "disc":
        return disc()
    if t.startswith("hilbert:"):
        try:
            return hilbert(int(t.split(":", 1)[1]))
        except ValueError:
            raise UsageError(f"bad hilbert descriptor {text!r}, expected hilbert:N")
    if t.startswith("matrix:"):
        dims = t.split(":", 1)[1]
        parts = dims.split("x")
        if len(parts) == 2:
            try:
                return matrix(int(parts[0]), int(parts[1]))
            except ValueError:
                pass
        raise UsageError(f"bad matrix descriptor {text!r}, expected matrix:PxQ")
    raise UsageError(f"unknown model descriptor {text!r}")


@dataclass(frozen=True, eq=False)
class TripleElement:
    """An element of a model, as coordinates in the canonical basis."""

    model: TripleModel
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.complex128)
        if c.shape != (self.model.coord_dim,):
            raise UsageError(
                f"coords shape {c.shape} does not match model {self.model} "
                f"(expected ({self.model.coord_dim},))"
            )
        if not np.all(np.isfinite(c)):
            raise UsageError("coordinates must be finite")
        c = np.ascontiguousarray(c)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def as_matrix(self) -> np.ndarray:
        """Matrix-model elements reshaped to (p, q); identity elsewhere."""
        if self.model.kind == "matrix":
            return self.coords.reshape(self.model.dims)
        return self.coords.reshape(-1, 1)

    def __neg__(self) -> "TripleElement":
        return TripleElement(self.model, -self.coords)

    def __add__(self, other: "TripleElement") -> "TripleElement":
        if not isinstance(other, TripleElement) or other.model != self.model:
            return NotImplemented
        return TripleElement(self.model, self.coords + other.coords)

    def __sub__(self, other: "TripleElement") -> "TripleElement":
        if not isinstance(other, TripleElement) or other.model != self.model:
            return NotImplemented
        return TripleElement(self.model, self.coords - other.coords)

    def __repr__(self):
        return f"TripleElement({self.model}, norm={triple_norm(self):.6g})"


def element(model: TripleModel, coords) -> TripleElement:
    return TripleElement(model, np.asarray(coords, dtype=np.complex128).reshape(-1))


def zero(model: TripleModel) -> TripleElement:
    return TripleElement(model, np.zeros(model.coord_dim, dtype=np.complex128))


def basis_element(model: TripleModel, i: int) -> TripleElement:
    if not 0 <= i < model.coord_dim:
        raise UsageError(f"basis index {i} out of range for {model}")
    c = np.zeros(model.coord_dim, dtype=np.complex128)
    c[i] = 1.0
    return TripleElement(model, c)


def _require_same_model(*xs: TripleElement) -> TripleModel:
    m = xs[0].model
    for x in xs[1:]:
        if x.model != m:
            raise UsageError(f"model mismatch: {x.model} vs {m}")
    return m


def triple_product(x: TripleElement, y: TripleElement, z: TripleElement) -> TripleElement:
    """{x, y, z}: linear and symmetric in x, z; conjugate-linear in y."""
    m = _require_same_model(x, y, z)
    if m.kind == "matrix":
        xm, ym, zm = x.as_matrix(), y.as_matrix(), z.as_matrix()
        ystar = ym.conj().T
        out = 0.5 * (xm @ ystar @ zm + zm @ ystar @ xm)
        return TripleElement(m, out.reshape(-1))
    # disc is hilbert(1)
    ip_xy = np.vdot(y.coords, x.coords)
    ip_zy = np.vdot(y.coords, z.coords)
    return TripleElement(m, 0.5 * (ip_xy * z.coords + ip_zy * x.coords))


def triple_norm(x: TripleElement) -> float:
    """The norm each model carries: modulus, euclidean, or spectral."""
    if x.model.kind == "matrix":
        return float(np.linalg.norm(x.as_matrix(), 2))
    return float(np.linalg.norm(x.coords))


def triple_norm_batch(model: TripleModel, coords: np.ndarray) -> np.ndarray:
    """Vectorized triple_norm over rows of an (n, coord_dim) array."""
    coords = np.asarray(coords, dtype=np.complex128)
    if model.kind == "matrix":
        p, q = model.dims
        sv = np.linalg.svd(coords.reshape(-1, p, q), compute_uv=False)
        return sv[:, 0]
    return np.linalg.norm(coords, axis=1)


def box_rep(x: TripleElement, y: TripleElement) -> CMatrix:
    """Matrix of the linear operator z -> {x, y, z} in the canonical basis."""
    m = _require_same_model(x, y)
    d = m.coord_dim
    cols = np.empty((d, d), dtype=np.complex128)
    for j in range(d):
        cols[:, j] = triple_product(x, y, basis_element(m, j)).coords
    return CMatrix(d, d, cols)


def box_rep_batch(model: TripleModel, xs: np.ndarray, y: TripleElement) -> np.ndarray:
    """Closed-form box matrices for many left arguments at once.

    Returns an (n, d, d) array whose k-th slab is box_rep(xs[k], y).
    Same matrices as the basis route, built without a Python loop.
    """
    xs = np.asarray(xs, dtype=np.complex128)
    d = model.coord_dim
    if model.kind == "matrix":
        p, q = model.dims
        xm = xs.reshape(-1, p, q)
        ystar = y.as_matrix().conj().T
        left = xm @ ystar                       # (n, p, p)
        right = ystar @ xm                      # (n, q, q)
        eye_p = np.eye(p, dtype=np.complex128)
        eye_q = np.eye(q, dtype=np.complex128)
        # row-major vec: vec(A Z) = (A kron I) vec Z, vec(Z B) = (I kron B^T) vec Z
        term1 = np.einsum("nij,kl->nikjl", left, eye_q).reshape(-1, d, d)
        term2 = np.einsum("ij,nlk->nikjl", eye_p, right).reshape(-1, d, d)
        return 0.5 * (term1 + term2)
    ip = xs @ y.coords.conj()                   # (x_k | y)
    eye = np.eye(d, dtype=np.complex128)
    outer = xs[:, :, None] * y.coords.conj()[None, None, :]
    return 0.5 * (ip[:, None, None] * eye[None, :, :] + outer)


@dataclass(frozen=True, eq=False)
class AntilinearRep:
    """Conjugate-linear operator stored as (matrix of linear part) o conj."""

    matrix: CMatrix

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix.entries @ np.conj(np.asarray(v, dtype=np.complex128))


def quadratic_rep(x: TripleElement) -> AntilinearRep:
    """Q_x: z -> {x, z, x}, conjugate-linear.

    Columns are {x, e_j, x} over the canonical basis, so applying the stored
    matrix to conj(z) reproduces the triple product for every z.
    """
    m = x.model
    d = m.coord_dim
    cols = np.empty((d, d), dtype=np.complex128)
    for j in range(d):
        cols[:, j] = triple_product(x, basis_element(m, j), x).coords
    return AntilinearRep(CMatrix(d, d, cols))


def bergman_rep(x: TripleElement, y: TripleElement) -> CMatrix:
    """B(x, y) = id - 2 x [] y + Q_x Q_y as a plain (linear) matrix.

    Q_x Q_y is linear; its matrix is M_x conj(M_y) for the stored parts.
    """
    m = _require_same_model(x, y)
    d = m.coord_dim
    eye = np.eye(d, dtype=np.complex128)
    qx = quadratic_rep(x).matrix.entries
    qy = quadratic_rep(y).matrix.entries
    b = eye - 2.0 * box_rep(x, y).entries + qx @ np.conj(qy)
    return CMatrix(d, d, b)


def bergman_sqrt(a: TripleElement, rtol: float = 1e-10) -> CMatrix:
    """B_a = B(a, a)^(1/2); requires ||a|| < 1 so B(a, a) is positive."""
    from .linalg import principal_sqrt

    if triple_norm(a) >= 1.0:
        raise DomainError(f"bergman_sqrt needs ||a|| < 1, got {triple_norm(a):.6g}")
    return principal_sqrt(bergman_rep(a, a), rtol=rtol)


def sample_coords(
    model: TripleModel, n: int, rng: np.random.Generator, norms=None
) -> np.ndarray:
    """(n, coord_dim) Gaussian coordinates, rows rescaled to given triple norms.

    norms may be a scalar, an (n,) array, or None to keep the raw draws.
    """
    xs = gaussian_complex(rng, (n, model.coord_dim))
    if norms is None:
        return xs
    target = np.broadcast_to(np.asarray(norms, dtype=np.float64), (n,))
    cur = triple_norm_batch(model, xs)
    cur = np.maximum(cur, 1e-300)
    return xs * (target / cur)[:, None]


def sample_element(model: TripleModel, rng: np.random.Generator, norm=None) -> TripleElement:
    return TripleElement(model, sample_coords(model, 1, rng, norm if norm is None else [norm])[0])


@dataclass(frozen=True, eq=False)
class OperatorNormEstimate:
    """Operator norm of a matrix acting on a model, in the triple norm.

    certified=True means exact (SVD on a euclidean-norm model). On the
    spectral-norm model the value is a sampled-plus-ascent lower bound and
    certified=False; witness attains the reported value.
    """

    estimate: float
    witness: TripleElement
    certified: bool
    samples_used: int


def op_norm_triple(
    op: CMatrix, model: TripleModel, budget: SamplingBudget | None = None
) -> OperatorNormEstimate:
    """sup ||op x|| / ||x|| over the model's triple norm."""
    if op.shape != (model.coord_dim, model.coord_dim):
        raise UsageError(f"operator shape {op.shape} does not match {model}")
    if model.norm_kind in ("modulus", "euclidean"):
        # triple norm is euclidean on coordinates, so the sup is the largest
        # singular value and the top right singular vector attains it
        u, s, vh = np.linalg.svd(op.entries)
        witness = TripleElement(model, vh[0].conj())
        return OperatorNormEstimate(float(s[0]), witness, True, 0)

    budget = budget or SamplingBudget()
    rng = stream(budget.seed, 0x0B)
    xs = sample_coords(model, budget.samples, rng, 1.0)
    vals = triple_norm_batch(model, xs @ op.entries.T)
    k = int(np.argmax(vals))
    best_x, best = xs[k], float(vals[k])
    eta = 0.5
    for _ in range(budget.ascent_steps):
        d = gaussian_complex(rng, (budget.probes, model.coord_dim))
        cand = best_x[None, :] + eta * d
        cn = triple_norm_batch(model, cand)
        cand = cand / np.maximum(cn, 1e-300)[:, None]
        cv = triple_norm_batch(model, cand @ op.entries.T)
        j = int(np.argmax(cv))
        if float(cv[j]) > best:
            best, best_x = float(cv[j]), cand[j]
            eta = min(eta * 1.25, 1.0)
        else:
            eta = max(eta * 0.6, 1e-7)
    return OperatorNormEstimate(best, TripleElement(model, best_x), False, budget.samples)


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    worst_residual: float
    worst_trial: int
    threshold: float


@dataclass(frozen=True)
class AxiomReport:
    model_descriptor: str
    trials: int
    seed: int
    tol: float
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def axiom_suite(
    model: TripleModel,
    trials: int = 1000,
    seed: int = 0,
    tol: float = 1e-10,
    opnorm_budget: SamplingBudget | None = None,
    opnorm_every: int = 16,
) -> AxiomReport:
    """Randomized verification of the algebraic structure.

    Per trial (unit-norm elements, so absolute residuals are relative):
      outer symmetry and linearity of the product, conjugate-linearity in
      the middle slot, the five-variable Jordan identity, reality and
      non-negativity of spec(x [] x), and the cube identity
      ||{x,x,x}|| = ||x||^3.

    The operator-norm axiom ||x [] x|| = ||x||^2 runs on every
    `opnorm_every`-th trial: it is exact on euclidean-norm models and a
    statistical lower bound on the spectral-norm model, where only the
    upper violation (estimate above ||x||^2) is held to `tol` and the
    lower gap gets a loose sanity threshold.
    """
    if trials < 1:
        raise UsageError("trials must be >= 1")
    names = [
        "outer-symmetry",
        "outer-linearity",
        "middle-conjugate-linearity",
        "jordan-identity",
        "box-spectrum-real-nonnegative",
        "cube-norm",
        "opnorm-square-upper",
        "opnorm-square-lower",
    ]
    worst = {n: (0.0, -1) for n in names}
    ob = opnorm_budget or SamplingBudget(samples=128, ascent_steps=16, probes=8, seed=seed)

    for t in range(trials):
        rng = stream(seed, 1, t)
        xs = sample_coords(model, 6, rng, 1.0)
        x, y, z, a, b, w = (TripleElement(model, c) for c in xs)
        lam = complex(*rng.normal(size=2))
        mu = complex(*rng.normal(size=2))

        def note(name, r):
            if r > worst[name][0]:
                worst[name] = (float(r), t)

        # {x,y,z} = {z,y,x}
        p_xyz = triple_product(x, y, z)
        p_zyx = triple_product(z, y, x)
        note("outer-symmetry", float(np.linalg.norm(p_xyz.coords - p_zyx.coords)))

        # additivity and homogeneity in the outer slot
        lhs = triple_product(element(model, lam * x.coords + mu * w.coords), y, z)
        rhs = lam * p_xyz.coords + mu * triple_product(w, y, z).coords
        note("outer-linearity", float(np.linalg.norm(lhs.coords - rhs)))

        # conjugate homogeneity in the middle slot
        lhs2 = triple_product(x, element(model, lam * y.coords), z)
        note(
            "middle-conjugate-linearity",
            float(np.linalg.norm(lhs2.coords - np.conj(lam) * p_xyz.coords)),
        )

        # {a,b,{x,y,z}} = {{a,b,x},y,z} - {x,{b,a,y},z} + {x,y,{a,b,z}}
        jl = triple_product(a, b, p_xyz)
        jr = (
            triple_product(triple_product(a, b, x), y, z).coords
            - triple_product(x, triple_product(b, a, y), z).coords
            + triple_product(x, y, triple_product(a, b, z)).coords
        )
        note("jordan-identity", float(np.linalg.norm(jl.coords - jr)))

        # spec(x [] x) must be real and >= 0
        sp = spectrum(box_rep(x, x), tol=1e-6)
        ev = sp.eigenvalues
        note("box-spectrum-real-nonnegative", max(float(np.max(np.abs(ev.imag))), float(max(0.0, -np.min(ev.real)))))

        # ||{x,x,x}|| = ||x||^3 with ||x|| = 1
        note("cube-norm", abs(triple_norm(triple_product(x, x, x)) - 1.0))

        if t % max(1, opnorm_every) == 0:
            est = op_norm_triple(box_rep(x, x), model, ob)
            note("opnorm-square-upper", max(0.0, est.estimate - 1.0))
            note("opnorm-square-lower", max(0.0, 1.0 - est.estimate))

    thresholds = {n: tol for n in names}
    thresholds["opnorm-square-lower"] = tol if model.norm_kind != "spectral" else 0.05
    checks = tuple(
        AxiomCheck(n, worst[n][0] <= thresholds[n], worst[n][0], worst[n][1], thresholds[n])
        for n in names
    )
    return AxiomReport(model.descriptor(), trials, seed, tol, checks)
