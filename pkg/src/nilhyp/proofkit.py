"""Module endomorphisms described by where they send the generators.

A map is given by polynomials ``b_{l,tau}(s)`` with
``u_{j,sigma} -> sum b_{l,tau}(A) u_{l,tau}`` and extended by
``A^i u -> A^i (image of u)``.  That extension is well defined exactly when
the image of ``u_{j,sigma}`` has exponent at most ``t_j``; for ``l > j`` this
means ``s^{t_l - t_j}`` divides ``b_{l,tau}``.

The swaps, the maps ``eta(k, l)`` and the projections are the commuting
maps that separate hyperinvariant subspaces from the rest; :func:`find_witness`
tries them before falling back to a generic commutant element.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

from .commutant import commutant_basis, violation
from .exactalg import Matrix, Subspace, kernel_image
from .nilpotent import GeneratorSet, NilpotentOperator
from .poly import coerce, monomial, valuation


class NotWellDefined(ValueError):
    def __init__(self, j, sigma, l, tau, reason):
        super().__init__(f"u_({j},{sigma}) -> component ({l},{tau}): {reason}")
        self.key = (j, sigma)
        self.component = (l, tau)


@dataclass(frozen=True, eq=False)
class ModuleHom:
    gs: GeneratorSet
    images: dict = dc_field(repr=False)
    matrix: Matrix = dc_field(repr=False)

    def apply(self, x: Sequence) -> tuple:
        return self.matrix.apply(x)

    @cached_property
    def kernel(self) -> Subspace:
        return kernel_image(self.matrix)[0]

    @cached_property
    def image(self) -> Subspace:
        return kernel_image(self.matrix)[1]

    def commutes(self) -> bool:
        A = self.gs.op.matrix
        return A @ self.matrix == self.matrix @ A


def hom_from_images(gs: GeneratorSet, images: Mapping) -> ModuleHom:
    """Build the endomorphism sending ``u_{j,sigma}`` to
    ``sum b_{l,tau}(A) u_{l,tau}``; generators absent from ``images`` go to 0."""
    t = gs.segre
    F = gs.field
    clean = {}
    for key, comps in images.items():
        if key not in gs.generators:
            raise KeyError(f"no generator {key}")
        tj = t.size(key[0])
        row = {}
        for comp, poly in comps.items():
            if comp not in gs.generators:
                raise KeyError(f"no generator {comp}")
            b = coerce(F, poly)
            tl = t.size(comp[0])
            if len(b) > tl:
                raise NotWellDefined(*key, *comp, f"degree {len(b) - 1} >= {tl}")
            if b and tl - valuation(b) > tj:
                raise NotWellDefined(
                    *key, *comp, f"image has exponent {tl - valuation(b)} > {tj}; "
                    f"s^{tl - tj} must divide b(s)")
            if b:
                row[comp] = b
        clean[key] = row

    n = gs.op.n
    cols: list = [None] * n
    for key in t.keys():
        w = gs.vector(clean.get(key, {}))
        o = gs.offsets[key]
        size = t.size(key[0])
        for i in range(size):
            cols[o + size - 1 - i] = w
            w = gs.op.apply(w)
    M = Matrix.from_columns(F, cols, n) @ gs.basis_inv
    hom = ModuleHom(gs, clean, M)
    if not hom.commutes():
        raise AssertionError("well-defined module map fails to commute with A")
    return hom


def identity_hom(gs: GeneratorSet) -> ModuleHom:
    one = (gs.field.one,)
    return hom_from_images(gs, {k: {k: one} for k in gs.keys()})


def swap_automorphism(gs: GeneratorSet, j: int, sigma: int, rho: int) -> ModuleHom:
    """Exchange ``u_{j,sigma}`` and ``u_{j,rho}``, fixing the other generators."""
    _check_key(gs, (j, sigma))
    _check_key(gs, (j, rho))
    one = (gs.field.one,)
    swap = {(j, sigma): (j, rho), (j, rho): (j, sigma)}
    return hom_from_images(gs, {k: {swap.get(k, k): one} for k in gs.keys()})


def eta(gs: GeneratorSet, k: int, l: int, mu: int = 1) -> ModuleHom:
    """Send every ``u_{k,tau}`` to ``u_{l,mu}`` (if ``k > l``) or to
    ``A^{t_l - t_k} u_{l,mu}`` (if ``k < l``); kill all other generators."""
    t = gs.segre
    if k == l:
        raise ValueError("eta(k, l) is only defined for k != l")
    _check_key(gs, (l, mu))
    if not 1 <= k <= t.m:
        raise IndexError(f"block index {k} outside 1..{t.m}")
    shift = 0 if k > l else t.size(l) - t.size(k)
    target = monomial(gs.field, shift)
    return hom_from_images(gs, {(k, tau): {(l, mu): target} for tau in range(1, t.mult(k) + 1)})


def projection(gs: GeneratorSet, j: int, sigma: int) -> ModuleHom:
    """Projection onto ``<u_{j,sigma}>`` along the other cyclic summands."""
    _check_key(gs, (j, sigma))
    return hom_from_images(gs, {(j, sigma): {(j, sigma): (gs.field.one,)}})


def _check_key(gs: GeneratorSet, key):
    if key not in gs.generators:
        raise IndexError(f"no generator {key} for type {gs.segre}")


class Witness(NamedTuple):
    kind: str  # "swap", "eta", "projection" or "commutant"
    label: str
    matrix: Matrix
    vector: tuple  # some x in X whose image leaves X


def structural_maps(gs: GeneratorSet):
    """Swaps, then the eta maps, then projections, each with a label."""
    t = gs.segre
    for j in range(1, t.m + 1):
        for s in range(1, t.mult(j) + 1):
            for r in range(s + 1, t.mult(j) + 1):
                yield "swap", f"alpha[j={j}; {s}<->{r}]", swap_automorphism(gs, j, s, r)
    for k in range(1, t.m + 1):
        for l in range(1, t.m + 1):
            if k != l:
                yield "eta", f"eta[k={k}, l={l}]", eta(gs, k, l)
    for key in t.keys():
        yield "projection", f"pi[{key[0]},{key[1]}]", projection(gs, *key)


def find_witness(op: NilpotentOperator, X: Subspace, gs: GeneratorSet | None = None) -> Witness | None:
    """A commuting map that moves ``X``, or None when ``X`` is hyperinvariant."""
    gs = op.generators if gs is None else gs
    for kind, label, hom in structural_maps(gs):
        x = violation(X, hom.matrix)
        if x is not None:
            return Witness(kind, label, hom.matrix, x)
    cb = commutant_basis(op)
    local_X = X.image(cb.frame_inv)
    for i, B in enumerate(cb.local):
        if violation(local_X, B) is not None:
            M = cb.to_global(B)
            return Witness("commutant", f"commutant basis element {i}", M, violation(X, M))
    return None
