"""Coclosed form spectra and Betti numbers of the supported base manifolds.

Supported bases: round unit spheres S^n (odd n), flat cubic tori T^n (odd n,
eigenvalue scale c0 = (2*pi/L)^2 rational), and user-supplied spectrum files.
All spectral data is exact: sphere eigenvalues and multiplicities come from
the Weyl dimension formula for the rotation group, torus data from lattice
counting, file data verbatim.

For a base of odd dimension n and form degree k, the shifted frequencies are
nu = sqrt(eta + A_k^2) with A_k = (n-1)/2 - k.  On the round sphere the shift
completes the square: nu = j + (n-1)/2 for every degree, with polynomial
multiplicities, which is what makes the exact zeta continuation downstream
possible.

Sphere multiplicities are not taken from a table: for degree k and twin index
k' = min(k, n-1-k) they are the Weyl dimension of the rotation-group
representation with highest weight (j, 1, ..., 1, 0, ..., 0) (k' ones),
doubled at the middle degree k' = (n-1)/2 where two mirror representations
contribute.  Off-by-one conventions are guarded by the duality, Weyl-count
and classical-function-spectrum checks in the test suite.

Spectrum file format (line oriented, '#' comments allowed):

    dim=n rank=R
    betti=b_0,...,b_n
    k,eta,mult

with eta in decimal or p/q rational text.  Round trips are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .olver import RationalPolynomial


class UnsupportedManifoldError(ValueError):
    pass


class MalformedSpectrumFile(ValueError):
    pass


@dataclass(frozen=True)
class SpectralLine:
    """One eigenvalue of the coclosed form Laplacian: degree, eigenvalue, multiplicity."""

    k: int
    eta: Fraction
    mult: int

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("coclosed spectral lines carry eta > 0 (zero modes are excluded)")
        if self.mult <= 0:
            raise ValueError("multiplicity must be a positive integer")


@dataclass(frozen=True)
class DegreeData:
    """Shift and weight data attached to a form degree on an n-dimensional base."""

    k: int
    n: int

    @property
    def A(self) -> Fraction:
        return Fraction(self.n - 1, 2) - self.k

    @property
    def delta(self) -> Fraction:
        return Fraction(1, 2) if 2 * self.k == self.n - 1 else Fraction(1)

    @property
    def c(self) -> Fraction:
        return (-1) ** self.k * (Fraction(self.k) - Fraction(self.n, 2))


@dataclass(frozen=True)
class BaseManifold:
    """Descriptor of a supported base: named family plus parameters.

    kind: 'sphere' | 'torus' | 'file'
    n: odd dimension; rank: rank of the trivial flat bundle (scales
    multiplicities and Betti numbers); scale: torus eigenvalue scale
    c0 = (2*pi/L)^2; lines/betti: file-backed data.
    """

    kind: str
    n: int
    rank: int = 1
    scale: Fraction = Fraction(1)
    lines: tuple = ()
    betti_raw: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.n < 1 or self.n % 2 == 0:
            raise UnsupportedManifoldError(f"base dimension must be odd and >= 1, got {self.n}")
        if self.rank < 1:
            raise UnsupportedManifoldError("bundle rank must be a positive integer")
        if self.kind not in ("sphere", "torus", "file"):
            raise UnsupportedManifoldError(f"unknown base manifold kind {self.kind!r}")
        if self.kind == "sphere" and self.n > 7:
            raise UnsupportedManifoldError("round spheres are supported for odd n <= 7")

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind == "sphere":
            return f"sphere:{self.n}"
        if self.kind == "torus":
            return f"torus:{self.n}" + (f":{self.scale}" if self.scale != 1 else "")
        return "file"

    def degree(self, k: int) -> DegreeData:
        return DegreeData(k, self.n)


def sphere(n: int, rank: int = 1) -> BaseManifold:
    return BaseManifold("sphere", n, rank)


def torus(n: int, rank: int = 1, scale=Fraction(1)) -> BaseManifold:
    scale = Fraction(scale)
    if scale <= 0:
        raise UnsupportedManifoldError("torus eigenvalue scale must be positive")
    return BaseManifold("torus", n, rank, scale=scale)


# ---------------------------------------------------------------------------
# Betti numbers


def betti(M: BaseManifold, k: int) -> int:
    """Betti number of degree k, times the bundle rank."""
    if not 0 <= k <= M.n:
        raise ValueError(f"degree k must lie in 0..{M.n}")
    if M.kind == "sphere":
        return M.rank if k in (0, M.n) else 0
    if M.kind == "torus":
        return M.rank * math.comb(M.n, k)
    return M.betti_raw[k]


# ---------------------------------------------------------------------------
# Round spheres: Weyl dimension formula for the coclosed eigenspaces


def _weyl_dim_sphere(n: int, kprime: int, j: int) -> Fraction:
    """Dimension of the rotation-group representation with highest weight
    (j, 1^kprime, 0^...) for the symmetry group of S^n, n odd."""
    m = (n + 1) // 2
    lam = [j] + [1] * kprime + [0] * (m - 1 - kprime)
    rho = [m - 1 - i for i in range(m)]
    l = [lam[i] + rho[i] for i in range(m)]
    num = Fraction(1)
    den = Fraction(1)
    for i in range(m):
        for jj in range(i + 1, m):
            num *= Fraction(l[i] ** 2 - l[jj] ** 2)
            den *= Fraction(rho[i] ** 2 - rho[jj] ** 2)
    return num / den


def sphere_multiplicity(n: int, k: int, j: int) -> int:
    """Multiplicity of the j-th coclosed k-form eigenvalue (j+k)(j+n-1-k) on S^n."""
    if n == 1:
        if k != 0:
            return 0
        return 2
    if k >= n:
        return 0
    kp = min(k, n - 1 - k)
    d = _weyl_dim_sphere(n, kp, j)
    if kp == (n - 1) // 2:
        d *= 2
    if d.denominator != 1:
        raise RuntimeError(f"non-integer multiplicity for n={n}, k={k}, j={j}: {d}")
    return int(d)


def sphere_multiplicity_polynomial(M: BaseManifold, k: int) -> RationalPolynomial:
    """Multiplicity as an exact polynomial in x = nu = j + (n-1)/2 (spheres only).

    Even in x; valid for j >= 1, i.e. x >= (n+1)/2.
    """
    if M.kind != "sphere":
        raise UnsupportedManifoldError("multiplicity polynomials exist for spheres only")
    n = M.n
    if k >= n:
        return RationalPolynomial({})
    if n == 1:
        return RationalPolynomial.constant(2 * M.rank)
    m = (n + 1) // 2
    kp = min(k, n - 1 - k)
    lam_tail = [1] * kp + [0] * (m - 1 - kp)
    rho = [m - 1 - i for i in range(m)]
    l_tail = [lam_tail[i - 1] + rho[i] for i in range(1, m)]
    # l_1 = j + m - 1 = x; dimension = prod_i (x^2 - l_i^2) * prod_{i<j tail} (...) / denom
    poly = RationalPolynomial.constant(1)
    for li in l_tail:
        poly = poly * RationalPolynomial({2: 1, 0: -(li ** 2)})
    num_tail = Fraction(1)
    den = Fraction(1)
    for i in range(len(l_tail)):
        for jj in range(i + 1, len(l_tail)):
            num_tail *= Fraction(l_tail[i] ** 2 - l_tail[jj] ** 2)
    for i in range(m):
        for jj in range(i + 1, m):
            den *= Fraction(rho[i] ** 2 - rho[jj] ** 2)
    scale = num_tail / den * M.rank
    if kp == (n - 1) // 2:
        scale *= 2
    return poly.scale(scale)


def _sphere_lines(M: BaseManifold, k: int, cutoff: Fraction) -> list:
    n = M.n
    if k >= n:
        return []
    out = []
    c = Fraction(n - 1, 2)
    j = 1
    while j + c <= cutoff:
        eta = Fraction((j + k) * (j + n - 1 - k))
        out.append(SpectralLine(k, eta, M.rank * sphere_multiplicity(n, k, j)))
        j += 1
    return out


# ---------------------------------------------------------------------------
# Flat cubic tori


def _sum_of_squares_counts(n: int, qmax: int) -> list:
    """counts[q] = #{m in Z^n : |m|^2 = q} for q = 0..qmax, by convolution."""
    base = [0] * (qmax + 1)
    base[0] = 1
    j = 1
    while j * j <= qmax:
        base[j * j] = 2
        j += 1
    counts = base[:]
    for _ in range(n - 1):
        nxt = [0] * (qmax + 1)
        for q1, c1 in enumerate(counts):
            if c1 == 0:
                continue
            for q2 in range(0, qmax - q1 + 1):
                if base[q2]:
                    nxt[q1 + q2] += c1 * base[q2]
        counts = nxt
    return counts


def _torus_lines(M: BaseManifold, k: int, cutoff: Fraction) -> list:
    n = M.n
    if k >= n:
        # coclosed n-forms with positive eigenvalue do not exist
        return []
    A2 = DegreeData(k, n).A ** 2
    if cutoff ** 2 <= A2:
        return []
    qmax_f = (cutoff ** 2 - A2) / M.scale
    qmax = int(qmax_f)
    per_point = M.rank * math.comb(n - 1, k)
    counts = _sum_of_squares_counts(n, qmax)
    out = []
    for q in range(1, qmax + 1):
        if counts[q]:
            out.append(SpectralLine(k, M.scale * q, counts[q] * per_point))
    return out


# ---------------------------------------------------------------------------
# Public spectral interface


def coclosed_spectrum(M: BaseManifold, k: int, cutoff) -> list:
    """All coclosed spectral lines of degree k with nu = sqrt(eta + A_k^2) <= cutoff.

    Cutoff is inclusive; ties are included.  Ordered by eigenvalue.
    """
    if not 0 <= k <= M.n:
        raise ValueError(f"degree k must lie in 0..{M.n}")
    cutoff = Fraction(cutoff)
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    if M.kind == "sphere":
        return _sphere_lines(M, k, cutoff)
    if M.kind == "torus":
        return _torus_lines(M, k, cutoff)
    A2 = DegreeData(k, M.n).A ** 2
    out = [ln for ln in M.lines if ln.k == k and ln.eta + A2 <= cutoff ** 2]
    return sorted(out, key=lambda ln: ln.eta)


def nu_stream(M: BaseManifold, k: int, cutoff) -> list:
    """(nu, multiplicity) pairs for degree k up to the cutoff.

    nu is exact (Fraction) whenever eta + A_k^2 is a perfect rational square,
    else a float good to double precision (file- and torus-backed bases).
    """
    dd = DegreeData(k, M.n)
    A2 = dd.A ** 2
    out = []
    for ln in coclosed_spectrum(M, k, cutoff):
        s = ln.eta + A2
        r = _exact_sqrt(s)
        out.append((r if r is not None else math.sqrt(float(s)), ln.mult))
    return out


def _exact_sqrt(q: Fraction):
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# Spectrum files


def spectrum_text(M: BaseManifold, cutoff) -> str:
    lines = [f"dim={M.n} rank={M.rank}"]
    lines.append("betti=" + ",".join(str(betti(M, k)) for k in range(M.n + 1)))
    for k in range(M.n + 1):
        for ln in coclosed_spectrum(M, k, cutoff):
            lines.append(f"{ln.k},{_format_rational(ln.eta)},{ln.mult}")
    return "\n".join(lines) + "\n"


def write_spectrum_file(M: BaseManifold, path, cutoff) -> None:
    Path(path).write_text(spectrum_text(M, cutoff))


def read_spectrum_file(path) -> BaseManifold:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MalformedSpectrumFile(f"cannot read {path}: {exc}") from exc
    n = rank = None
    bett = None
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        if s.startswith("dim="):
            try:
                head = dict(part.split("=", 1) for part in s.split())
                n = int(head["dim"])
                rank = int(head["rank"])
            except Exception as exc:
                raise MalformedSpectrumFile(f"{path}:{lineno}: bad header {s!r}") from exc
            continue
        if s.startswith("betti="):
            bett = tuple(int(b) for b in s[len("betti="):].split(","))
            continue
        parts = s.split(",")
        if len(parts) != 3:
            raise MalformedSpectrumFile(f"{path}:{lineno}: expected 'k,eta,mult', got {s!r}")
        try:
            k = int(parts[0])
            eta = _parse_rational(parts[1])
            mult = int(parts[2])
        except ValueError as exc:
            raise MalformedSpectrumFile(f"{path}:{lineno}: {exc}") from exc
        lines.append(SpectralLine(k, eta, mult))
    if n is None or bett is None:
        raise MalformedSpectrumFile(f"{path}: missing 'dim=' header or 'betti=' line")
    if len(bett) != n + 1:
        raise MalformedSpectrumFile(f"{path}: betti line must carry {n + 1} entries")
    return BaseManifold("file", n, rank, lines=tuple(lines), betti_raw=bett,
                        label=f"file:{path.name}")


def _parse_rational(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(s)


def _format_rational(q: Fraction) -> str:
    """Exact decimal text when the denominator is 2^a 5^b, else p/q."""
    den = q.denominator
    d2 = d5 = 0
    while den % 2 == 0:
        den //= 2
        d2 += 1
    while den % 5 == 0:
        den //= 5
        d5 += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    shift = max(d2, d5)
    scaled = q * 10 ** shift
    assert scaled.denominator == 1
    if shift == 0:
        return str(scaled.numerator)
    digits = str(abs(scaled.numerator)).rjust(shift + 1, "0")
    sign = "-" if scaled.numerator < 0 else ""
    return f"{sign}{digits[:-shift]}.{digits[-shift:]}"
