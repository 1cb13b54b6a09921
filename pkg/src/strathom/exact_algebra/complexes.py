"""Chain complexes of free modules with exact homology.

A complex carries its orientation explicitly: ``hom`` complexes lower the
degree, ``coh`` complexes raise it.  Homology is computed from a saturated
kernel basis plus a Smith form, so ranks and invariant factors come out
exactly over Z; over Q and F_p only dimensions are needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .matrices import (IntMatrix, kernel_basis, rank_mod_p, smith, solve)
from .modules import Coefficients, FGModule, GradedModule, module_from_relations


class ComplexValidationError(ValueError):
    pass


class ChainComplex:
    """Finitely supported complex of free modules with named bases.

    ``diffs[k]`` is the differential leaving degree k (to k-1 for ``hom``
    orientation, to k+1 for ``coh``).  d(d(x)) = 0 is asserted on
    construction.
    """

    def __init__(self, orientation: str, ranks: Dict[int, int],
                 diffs: Dict[int, IntMatrix], basis: Optional[Dict[int, list]] = None,
                 check: bool = True, modulus: Optional[int] = None):
        if orientation not in ("hom", "coh"):
            raise ValueError("orientation must be 'hom' or 'coh'")
        self.orientation = orientation
        self.modulus = modulus
        self.ranks = {k: r for k, r in ranks.items() if r}
        self.diffs = {}
        self.basis = basis or {}
        step = -1 if orientation == "hom" else 1
        for k, m in diffs.items():
            if m.is_zero():
                continue
            if m.cols != ranks.get(k, 0) or m.rows != ranks.get(k + step, 0):
                raise ComplexValidationError(
                    f"differential at degree {k} has shape {m.rows}x{m.cols}, "
                    f"expected {ranks.get(k + step, 0)}x{ranks.get(k, 0)}")
            self.diffs[k] = m
        if check:
            for k, m in self.diffs.items():
                nxt = self.diffs.get(k + step)
                if nxt is not None and not self._is_zero(nxt * m):
                    raise ComplexValidationError(
                        f"d o d != 0 between degrees {k} and {k + 2 * step}")

    def _is_zero(self, m: IntMatrix) -> bool:
        if self.modulus:
            return all(v % self.modulus == 0 for v in m.entries.values())
        return m.is_zero()

    @property
    def step(self) -> int:
        return -1 if self.orientation == "hom" else 1

    def support(self) -> List[int]:
        return sorted(self.ranks)

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def diff(self, k: int) -> IntMatrix:
        if k in self.diffs:
            return self.diffs[k]
        return IntMatrix(self.rank(k + self.step), self.rank(k))

    def dualize(self) -> "ChainComplex":
        """Linear dual: transposed differentials, opposite orientation.

        The sign convention d(c) = -(-1)^|c| c(d .) scales differentials
        by units only, which leaves every (co)homology group unchanged, so
        plain transposes suffice for group-level results.
        """
        new_orient = "coh" if self.orientation == "hom" else "hom"
        diffs = {}
        for k, m in self.diffs.items():
            # d^*: degree (k + step) -> degree k dual; leaving degree k+step
            diffs[k + self.step] = m.transpose()
        return ChainComplex(new_orient, dict(self.ranks), diffs, check=False,
                            modulus=self.modulus)

    def shift(self, s: int) -> "ChainComplex":
        return ChainComplex(self.orientation,
                            {k + s: r for k, r in self.ranks.items()},
                            {k + s: m for k, m in self.diffs.items()}, check=False,
                            modulus=self.modulus)

    @classmethod
    def zero(cls, orientation: str = "hom") -> "ChainComplex":
        return cls(orientation, {}, {})


def homology(C: ChainComplex, k: int, ring: Coefficients = Coefficients("Z")) -> FGModule:
    """H_k = (kernel of the differential leaving k) / (image entering k)."""
    n = C.rank(k)
    if n == 0:
        return FGModule.zero()
    out = C.diff(k)
    inc = C.diff(k - C.step)
    if ring.kind == "Z":
        K = kernel_basis(out) if not out.is_zero() else IntMatrix.identity(n)
        if K.cols == 0:
            return FGModule.zero()
        if inc.is_zero():
            return FGModule.free(K.cols)
        Y = solve(K, inc)
        if Y is None:
            raise ComplexValidationError("image does not lie in the kernel")
        return module_from_relations(K.cols, Y)
    if ring.kind == "Q":
        sd_out = smith(out, need_U=False, need_V=False) if not out.is_zero() else None
        sd_in = smith(inc, need_U=False, need_V=False) if not inc.is_zero() else None
        r_out = sd_out.rank if sd_out else 0
        r_in = sd_in.rank if sd_in else 0
        return FGModule.free(n - r_out - r_in)
    p = ring.p
    return FGModule.free(n - rank_mod_p(out, p) - rank_mod_p(inc, p))


def homology_all(C: ChainComplex, ring: Coefficients = Coefficients("Z")) -> GradedModule:
    return GradedModule({k: homology(C, k, ring) for k in C.support()})


@dataclass
class ChainMap:
    """Degree-zero map of complexes; commutes with the differentials."""
    dom: ChainComplex
    cod: ChainComplex
    mats: Dict[int, IntMatrix] = field(default_factory=dict)

    def __post_init__(self):
        if self.dom.orientation != self.cod.orientation:
            raise ComplexValidationError("chain map between mixed orientations")
        step = self.dom.step
        modulus = self.dom.modulus or self.cod.modulus
        for k in set(self.dom.support()) | set(self.cod.support()):
            f_k = self.mat(k)
            f_next = self.mat(k + step)
            delta = self.cod.diff(k) * f_k - f_next * self.dom.diff(k)
            zero = (all(v % modulus == 0 for v in delta.entries.values())
                    if modulus else delta.is_zero())
            if not zero:
                raise ComplexValidationError(f"chain map fails to commute at degree {k}")

    def mat(self, k: int) -> IntMatrix:
        if k in self.mats:
            return self.mats[k]
        return IntMatrix(self.cod.rank(k), self.dom.rank(k))

    @classmethod
    def zero(cls, dom: ChainComplex, cod: ChainComplex) -> "ChainMap":
        return cls(dom, cod, {})

    @classmethod
    def identity(cls, C: ChainComplex) -> "ChainMap":
        return cls(C, C, {k: IntMatrix.identity(C.rank(k)) for k in C.support()})


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone of f: A -> B with differential D(b, a) = (db + f a, -da).

    Cohomological cone in degree j is B^j + A^{j+1}; homological cone in
    degree j is B_j + A_{j-1}.  Either way the long exact sequence with A
    and B holds in homology.
    """
    A, B = f.dom, f.cod
    step = A.step
    da = step      # A sits one degree along the orientation: B^j + A^{j+step}
    ranks = {}
    degrees = set(B.support()) | {k - da for k in A.support()}
    for j in degrees:
        ranks[j] = B.rank(j) + A.rank(j + da)
    diffs = {}
    for j in sorted(degrees):
        rows = ranks.get(j + step, 0)
        cols = ranks.get(j, 0)
        if rows == 0 or cols == 0:
            continue
        bR, aR = B.rank(j), A.rank(j + da)
        bR2 = B.rank(j + step)
        ent = {}
        for (r, c), v in B.diff(j).entries.items():
            ent[(r, c)] = v
        fm = f.mat(j + da)
        for (r, c), v in fm.entries.items():
            ent[(r, bR + c)] = v
        for (r, c), v in A.diff(j + da).entries.items():
            ent[(bR2 + r, bR + c)] = -v
        m = IntMatrix(rows, cols, ent)
        if not m.is_zero():
            diffs[j] = m
    return ChainComplex(A.orientation, ranks, diffs,
                        modulus=A.modulus or B.modulus)
