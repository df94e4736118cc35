"""Split decomposition and the polynomial subalgebra basis.

For a validated pair with orderings fixed, the subspaces

    U_i = (Vstar_0 + ... + Vstar_i)  meet  (V_i + ... + V_d)

decompose V directly, refine both flag filtrations, and are raised by
A - theta_i I and lowered by Astar - thetastar_i I.  The polynomials
tau_i(x) = (x - theta_0)...(x - theta_{i-1}) evaluate on A to a basis of
the subalgebra they generate, and tau_i(A) maps U_0 into U_i.  Every one
of those statements is checked here, per index, and reported as flags so
a failing candidate pinpoints which identity broke.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import HypothesisNotMet, InvariantViolation, TauImageVanished
from .linalg import Matrix, poly_eval_matrix, vec_is_zero
from .pairs import TriDiagonalPair, _SpanAccumulator
from .polynomials import Polynomial
from .subspaces import (
    Subspace,
    image_of,
    subspace_intersect,
    subspace_leq,
    subspace_sum,
)


@dataclass(frozen=True)
class SplitReport:
    """Per-identity verification flags.

    eq4: the U_i sum directly to V.
    eq5[i]: U_0+...+U_i equals Vstar_0+...+Vstar_i.
    eq6[i]: U_i+...+U_d equals V_i+...+V_d.
    eq7[i]: (A - theta_i I) U_i lies in U_{i+1} (zero at i = d).
    eq8[i]: (Astar - thetastar_i I) U_i lies in U_{i-1} (zero at i = 0).
    eq10[i]: tau_i(A) U_0 lies in U_i.

    Fields not yet computed are None.
    """

    eq4: bool
    eq5: tuple
    eq6: tuple
    eq7: tuple | None = None
    eq8: tuple | None = None
    eq10: tuple | None = None

    def all_true(self) -> bool:
        for value in (self.eq4, self.eq5, self.eq6, self.eq7, self.eq8, self.eq10):
            if value is None:
                return False
            if value is not True and not all(value):
                return False
        return True


@dataclass(frozen=True)
class SplitDecomposition:
    """The subspaces U_0..U_d of a pair, with verification flags.

    Constructed by split_subspaces; direct construction is possible for
    negative controls and performs no checking.
    """

    U: tuple
    pair: TriDiagonalPair
    report: SplitReport

    @property
    def dims(self) -> tuple:
        return tuple(u.dim for u in self.U)


@dataclass(frozen=True)
class TauBasis:
    """The polynomials tau_0..tau_d and their evaluations at A; the
    matrices form a basis of the subalgebra generated by A."""

    taus: tuple
    tau_matrices: tuple


def split_subspaces(pair: TriDiagonalPair) -> SplitDecomposition:
    """Compute U_i from the defining intersection and record the
    direct-sum and filtration identities.

    The subspaces come straight from the definition, not from the
    raising maps, so the raising/lowering checks stay independent.
    """
    field = pair.field
    n = pair.dim
    d = pair.diameter
    prefix_star = []
    acc = Subspace.zero(field, n)
    for i in range(d + 1):
        acc = subspace_sum(acc, pair.vstar(i))
        prefix_star.append(acc)
    suffix = [None] * (d + 1)
    acc = Subspace.zero(field, n)
    for i in range(d, -1, -1):
        acc = subspace_sum(acc, pair.v(i))
        suffix[i] = acc
    u_spaces = tuple(
        subspace_intersect(prefix_star[i], suffix[i]) for i in range(d + 1)
    )
    # direct sum: each summand must enlarge the running sum by its dimension
    eq4 = True
    acc = Subspace.zero(field, n)
    for u in u_spaces:
        before = acc.dim
        acc = subspace_sum(acc, u)
        if acc.dim != before + u.dim:
            eq4 = False
    if acc.dim != n:
        eq4 = False
    eq5 = []
    acc = Subspace.zero(field, n)
    for i in range(d + 1):
        acc = subspace_sum(acc, u_spaces[i])
        eq5.append(acc == prefix_star[i])
    eq6 = [None] * (d + 1)
    acc = Subspace.zero(field, n)
    for i in range(d, -1, -1):
        acc = subspace_sum(acc, u_spaces[i])
        eq6[i] = acc == suffix[i]
    report = SplitReport(eq4=eq4, eq5=tuple(eq5), eq6=tuple(eq6))
    return SplitDecomposition(U=u_spaces, pair=pair, report=report)


def verify_raising_lowering(sd: SplitDecomposition) -> SplitReport:
    """Check that A - theta_i I raises U_i into U_{i+1} and
    Astar - thetastar_i I lowers U_i into U_{i-1}, with zero subspaces
    past both ends; returns the report with per-index flags filled in."""
    pair = sd.pair
    field = pair.field
    n = pair.dim
    d = pair.diameter
    eye = Matrix.identity(field, n)
    zero_space = Subspace.zero(field, n)
    eq7 = []
    for i in range(d + 1):
        shifted = pair.a - eye.scale(pair.theta(i))
        target = sd.U[i + 1] if i < d else zero_space
        eq7.append(subspace_leq(image_of(shifted, sd.U[i]), target))
    eq8 = []
    for i in range(d + 1):
        shifted = pair.astar - eye.scale(pair.thetastar(i))
        target = sd.U[i - 1] if i > 0 else zero_space
        eq8.append(subspace_leq(image_of(shifted, sd.U[i]), target))
    return replace(sd.report, eq7=tuple(eq7), eq8=tuple(eq8))


def tau_basis(pair: TriDiagonalPair) -> TauBasis:
    """tau_i = (x - theta_0)...(x - theta_{i-1}), evaluated at A.

    The d+1 matrices are asserted linearly independent: they span the
    subalgebra generated by A, which has dimension d+1 because the
    minimal polynomial of a diagonalizable A has degree d+1.
    """
    field = pair.field
    d = pair.diameter
    taus = tuple(
        Polynomial.from_roots(field, [pair.theta(h) for h in range(i)])
        for i in range(d + 1)
    )
    mats = tuple(poly_eval_matrix(t, pair.a) for t in taus)
    acc = _SpanAccumulator(field)
    for m in mats:
        if not acc.add(m.flatten()):
            raise InvariantViolation("tau matrices are linearly dependent")
    return TauBasis(taus=taus, tau_matrices=mats)


def verify_tau_images(sd: SplitDecomposition) -> SplitReport:
    """Check tau_i(A) U_0 lies in U_i for every i and fill the eq10 flags.

    Built from the polynomials directly so the check stays meaningful on
    corrupted decompositions where tau_basis assertions might not hold.
    """
    pair = sd.pair
    field = pair.field
    d = pair.diameter
    flags = []
    for i in range(d + 1):
        tau_i = Polynomial.from_roots(field, [pair.theta(h) for h in range(i)])
        mat = poly_eval_matrix(tau_i, pair.a)
        flags.append(subspace_leq(image_of(mat, sd.U[0]), sd.U[i]))
    return replace(sd.report, eq10=tuple(flags))


def complete_report(sd: SplitDecomposition) -> SplitReport:
    """All identity flags in one report."""
    with_rl = verify_raising_lowering(sd)
    with_tau = verify_tau_images(sd)
    return replace(with_rl, eq10=with_tau.eq10)


def tau_images(pair: TriDiagonalPair, u, sd: SplitDecomposition | None = None) -> tuple:
    """The vectors tau_i(A)u for a nonzero u in Vstar_0.

    Each image is asserted to lie in U_i and the full sequence to be
    linearly independent; on a genuine pair both hold for every valid u.
    A vanishing image raises TauImageVanished with the failing index,
    which feeds the reducibility-witness construction.
    """
    field = pair.field
    d = pair.diameter
    u = tuple(field.scalar(x) for x in u)
    if vec_is_zero(u):
        raise HypothesisNotMet("u must be nonzero")
    if not pair.vstar(0).contains(u):
        raise HypothesisNotMet("u must lie in the first Astar-eigenspace")
    if sd is None:
        sd = split_subspaces(pair)
    eye = Matrix.identity(field, pair.dim)
    images = [u]
    for i in range(1, d + 1):
        shifted = pair.a - eye.scale(pair.theta(i - 1))
        nxt = shifted.apply(images[-1])
        if vec_is_zero(nxt):
            raise TauImageVanished(
                f"tau_{i}(A)u = 0 for a nonzero u in Vstar_0", u=u, index=i
            )
        images.append(nxt)
    for i, w in enumerate(images):
        if not sd.U[i].contains(w):
            raise InvariantViolation(f"tau_{i}(A)u escapes U_{i}")
    acc = _SpanAccumulator(field)
    for w in images:
        if not acc.add(w):
            raise InvariantViolation("tau images of u are linearly dependent")
    return tuple(images)
