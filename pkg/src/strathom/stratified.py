"""Filtered simplicial complexes: the combinatorial models of stratified
pseudomanifolds.

The filtration is encoded by a level in 0..n on each vertex; the front
face of a simplex spanned by vertices of level <= i is then exactly its
intersection with the i-th filtration stage, so every simplex is filtered
with a canonical join decomposition.  Constructors build cones,
suspensions and disjoint unions with the conic filtration.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple


class StratifiedValidationError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _close_under_faces(simplices):
    out = set()
    for s in simplices:
        s = tuple(s)
        for r in range(1, len(s) + 1):
            for face in itertools.combinations(s, r):
                out.add(frozenset(face))
    return out


class FilteredComplex:
    """Finite simplicial complex with a vertex-level filtration."""

    def __init__(self, dimension: int, levels: Dict, simplices, close: bool = True,
                 name: str = ""):
        self.n = dimension
        self.levels = dict(levels)
        self.name = name
        raw = {frozenset(s) for s in simplices}
        raw |= {frozenset([v]) for v in self.levels}
        if close:
            raw = _close_under_faces(raw)
        self.simplices = raw
        self._sorted_cache: Dict[FrozenSet, Tuple] = {}
        self.validate(closed=not close)
        self._strata = None
        self._stratum_of: Dict[FrozenSet, "Stratum"] = {}

    # -- validation ----------------------------------------------------

    def validate(self, closed: bool = True):
        violations = []
        for v, lv in self.levels.items():
            if not (0 <= lv <= self.n):
                violations.append(f"vertex {v} has level {lv} outside 0..{self.n}")
        for s in self.simplices:
            for v in s:
                if v not in self.levels:
                    violations.append(f"simplex {sorted(s, key=str)} uses unknown vertex {v}")
        if violations:
            raise StratifiedValidationError(violations)
        if closed:
            for s in self.simplices:
                if len(s) > 1:
                    for face in itertools.combinations(s, len(s) - 1):
                        if frozenset(face) not in self.simplices:
                            violations.append(
                                f"missing face {sorted(face, key=str)} of {sorted(s, key=str)}")
        if not any(lv == self.n for lv in self.levels.values()):
            violations.append(f"no vertex of level {self.n}: X_{self.n - 1} = X")
        maximal = self.maximal_simplices()
        for m in maximal:
            if len(m) - 1 != self.n:
                violations.append(
                    f"maximal simplex {sorted(m, key=str)} has dimension {len(m) - 1}, "
                    f"expected {self.n}")
            elif not any(self.levels[v] == self.n for v in m):
                violations.append(
                    f"maximal simplex {sorted(m, key=str)} has no level-{self.n} vertex")
        if violations:
            raise StratifiedValidationError(violations)
        return self

    # -- basic structure -------------------------------------------------

    def sorted_vertices(self, s: FrozenSet) -> Tuple:
        """Vertices ordered by (level, id): the join decomposition order."""
        t = self._sorted_cache.get(s)
        if t is None:
            t = tuple(sorted(s, key=lambda v: (self.levels[v], v)))
            self._sorted_cache[s] = t
        return t

    def maximal_simplices(self) -> List[FrozenSet]:
        by_size = sorted(self.simplices,
                         key=lambda s: (-len(s), tuple(sorted(s, key=str))))
        maximal = []
        for s in by_size:
            if not any(s < m for m in maximal):
                maximal.append(s)
        return maximal

    def simplices_of_dim(self, k: int) -> List[Tuple]:
        out = [self.sorted_vertices(s) for s in self.simplices if len(s) == k + 1]
        out.sort()
        return out

    def max_level(self, s: Iterable) -> int:
        return max(self.levels[v] for v in s)

    def is_regular(self, s: Iterable) -> bool:
        return self.max_level(s) == self.n

    def join_decomposition(self, s: Iterable) -> List[Tuple]:
        """Blocks Delta_0, ..., Delta_n of the filtered simplex (may be empty)."""
        blocks = [[] for _ in range(self.n + 1)]
        for v in self.sorted_vertices(frozenset(s)):
            blocks[self.levels[v]].append(v)
        return [tuple(b) for b in blocks]

    def front_face(self, s: Iterable, i: int) -> Tuple:
        """Vertices of level <= i, in order: the intersection with X_i."""
        return tuple(v for v in self.sorted_vertices(frozenset(s))
                     if self.levels[v] <= i)

    # -- strata ----------------------------------------------------------

    def strata(self) -> List["Stratum"]:
        if self._strata is not None:
            return self._strata
        by_level: Dict[int, List[FrozenSet]] = {}
        for s in self.simplices:
            by_level.setdefault(self.max_level(s), []).append(s)
        strata = []
        for level in sorted(by_level):
            members = by_level[level]
            parent = {s: s for s in members}

            def find(x):
                while parent[x] is not x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            def union(a, b):
                ra, rb = find(a), find(b)
                if ra is not rb:
                    parent[ra] = rb

            member_set = set(members)
            for s in members:
                if len(s) > 1:
                    for face in itertools.combinations(s, len(s) - 1):
                        f = frozenset(face)
                        if f in member_set:
                            union(s, f)
            groups: Dict[FrozenSet, List[FrozenSet]] = {}
            for s in members:
                groups.setdefault(find(s), []).append(s)
            comps = sorted(groups.values(),
                           key=lambda g: min(tuple(sorted(s, key=str)) for s in g))
            for idx, comp in enumerate(comps):
                strata.append(Stratum(
                    level=level,
                    index=idx,
                    simplices=frozenset(comp),
                    dim=max(len(s) - 1 for s in comp),
                    codim=self.n - level,
                    regular=(level == self.n),
                ))
        self._strata = strata
        for st in strata:
            for s in st.simplices:
                self._stratum_of[s] = st
        return strata

    def stratum_of(self, s: Iterable) -> "Stratum":
        if self._strata is None:
            self.strata()
        return self._stratum_of[frozenset(s)]

    def strata_met_by(self, s: Iterable) -> List["Stratum"]:
        """Strata whose point set the simplex meets: one per level present."""
        s = frozenset(s)
        if self._strata is None:
            self.strata()
        seen_levels = sorted({self.levels[v] for v in s})
        out = []
        for i in seen_levels:
            front = frozenset(self.front_face(s, i))
            out.append(self._stratum_of[front])
        return out

    # -- constructors ------------------------------------------------------

    def cone(self, name: str = "") -> "FilteredComplex":
        """Simplicial cone with the conic filtration: apex at level 0,
        all other levels shifted up by one."""
        if not self.simplices:
            raise StratifiedValidationError(["cone on the empty complex: links must be non-empty"])
        apex = _fresh_vertex(self.levels)
        levels = {v: lv + 1 for v, lv in self.levels.items()}
        levels[apex] = 0
        simplices = set()
        for s in self.simplices:
            simplices.add(s)
            simplices.add(s | {apex})
        simplices.add(frozenset([apex]))
        return FilteredComplex(self.n + 1, levels, simplices, close=False,
                               name=name or (f"cone({self.name})" if self.name else "cone"))

    def suspension(self, name: str = "") -> "FilteredComplex":
        if not self.simplices:
            raise StratifiedValidationError(["suspension of the empty complex"])
        south = _fresh_vertex(self.levels)
        north = south + 1 if isinstance(south, int) else f"{south}'"
        levels = {v: lv + 1 for v, lv in self.levels.items()}
        levels[south] = 0
        levels[north] = 0
        simplices = set()
        for s in self.simplices:
            simplices.add(s)
            simplices.add(s | {south})
            simplices.add(s | {north})
        simplices.add(frozenset([south]))
        simplices.add(frozenset([north]))
        return FilteredComplex(self.n + 1, levels, simplices, close=False,
                               name=name or (f"susp({self.name})" if self.name else "susp"))

    def disjoint_union(self, other: "FilteredComplex", name: str = "") -> "FilteredComplex":
        if self.n != other.n:
            raise StratifiedValidationError(
                [f"disjoint union of different formal dimensions {self.n} != {other.n}"])
        offset = (max(self.levels) + 1) if self.levels else 0
        levels = dict(self.levels)
        relabel = {v: v + offset for v in other.levels}
        for v, lv in other.levels.items():
            levels[relabel[v]] = lv
        simplices = set(self.simplices)
        for s in other.simplices:
            simplices.add(frozenset(relabel[v] for v in s))
        return FilteredComplex(self.n, levels, simplices, close=False,
                               name=name or f"({self.name} + {other.name})")

    def __repr__(self):
        return (f"FilteredComplex({self.name or 'X'}, n={self.n}, "
                f"{len(self.levels)} vertices, {len(self.simplices)} simplices)")


def _fresh_vertex(levels: Dict) -> int:
    ints = [v for v in levels if isinstance(v, int)]
    return (max(ints) + 1) if ints else 0


@dataclass(frozen=True)
class Stratum:
    """Connected component of X_i minus X_{i-1}, as its member simplices."""
    level: int
    index: int
    simplices: FrozenSet
    dim: int
    codim: int
    regular: bool

    @property
    def key(self) -> Tuple[int, int]:
        return (self.level, self.index)

    def __repr__(self):
        kind = "regular" if self.regular else f"codim {self.codim}"
        return f"Stratum(level={self.level}, index={self.index}, dim={self.dim}, {kind})"


def manifold_complex(dimension: int, simplices, name: str = "") -> FilteredComplex:
    """All vertices at the top level: a single-stratum (per component) model."""
    levels = {}
    for s in simplices:
        for v in s:
            levels[v] = dimension
    return FilteredComplex(dimension, levels, simplices, close=True, name=name)


class GMPerversity:
    """Perversity depending only on codimension, with the GM growth rule."""

    def __init__(self, values: Sequence[int]):
        self.values = tuple(int(v) for v in values)
        n = len(self.values) - 1
        for i, v in enumerate(self.values[:3]):
            if v != 0:
                raise ValueError("GM-perversity must vanish in codimensions 0..2")
        for i in range(2, n):
            lo, hi = self.values[i], self.values[i + 1]
            if not (lo <= hi <= lo + 1):
                raise ValueError(
                    f"GM growth violated between codimensions {i} and {i + 1}: {self.values}")

    def __call__(self, codim: int) -> int:
        if codim < 0:
            raise ValueError("negative codimension")
        if codim >= len(self.values):
            raise ValueError(f"codimension {codim} beyond the stored range")
        return self.values[codim]

    def __eq__(self, other):
        return isinstance(other, GMPerversity) and self.values == other.values

    def __repr__(self):
        return f"GMPerversity{self.values}"

    @property
    def top_codim(self) -> int:
        return len(self.values) - 1

    @classmethod
    def zero(cls, n: int) -> "GMPerversity":
        return cls([0] * (n + 1))

    @classmethod
    def top(cls, n: int) -> "GMPerversity":
        return cls([0 if i < 2 else i - 2 for i in range(n + 1)])

    @classmethod
    def k_bar(cls, n: int, k: int) -> "GMPerversity":
        """The perversity with value k in codimension n, minimal below."""
        if not (0 <= k <= max(n - 2, 0)):
            raise ValueError(f"value {k} outside the GM range 0..{n - 2}")
        return cls([max(0, k - (n - i)) if i >= 2 else 0 for i in range(n + 1)])

    def complementary(self) -> "GMPerversity":
        """D(p) = t - p; the GM constraints survive complementation."""
        n = self.top_codim
        return GMPerversity([(0 if i < 2 else (i - 2) - self.values[i])
                             for i in range(n + 1)])

    @classmethod
    def all_for(cls, n: int):
        """Every GM-perversity for formal dimension n."""
        if n < 3:
            return [cls.zero(n)]
        out = []

        def rec(vals):
            if len(vals) == n + 1:
                out.append(cls(vals))
                return
            i = len(vals) - 1
            if i < 2:
                rec(vals + [0])
            else:
                rec(vals + [vals[-1]])
                rec(vals + [vals[-1] + 1])
        rec([0, 0, 0])
        return out


class Perversity:
    """Stratum-indexed perversity; forced to 0 on regular strata."""

    def __init__(self, X: FilteredComplex, values: Dict[Tuple[int, int], int]):
        self.X = X
        self.values = {}
        for st in X.strata():
            v = values.get(st.key, 0)
            if st.regular and v != 0:
                raise ValueError("perversity must vanish on regular strata")
            self.values[st.key] = 0 if st.regular else v

    @classmethod
    def from_gm(cls, X: FilteredComplex, gm: GMPerversity) -> "Perversity":
        vals = {st.key: (0 if st.regular else gm(st.codim)) for st in X.strata()}
        return cls(X, vals)

    @classmethod
    def from_codim_values(cls, X: FilteredComplex, by_codim: Dict[int, int]) -> "Perversity":
        vals = {st.key: by_codim.get(st.codim, 0) for st in X.strata() if not st.regular}
        return cls(X, vals)

    def __call__(self, stratum: Stratum) -> int:
        return self.values[stratum.key]

    def __le__(self, other: "Perversity") -> bool:
        return all(self.values[k] <= other.values[k] for k in self.values)

    def __eq__(self, other):
        return isinstance(other, Perversity) and self.values == other.values

    def complementary(self) -> "Perversity":
        vals = {}
        for st in self.X.strata():
            if not st.regular:
                vals[st.key] = (st.codim - 2) - self.values[st.key]
        return Perversity(self.X, vals)

    def __repr__(self):
        sing = {k: v for k, v in self.values.items() if v or True}
        return f"Perversity({sing})"
