"""Allowed pairs of subsets, the binary tree of pairs, partitions, sign vectors."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .errors import NotAllowed, SaturatedPair


@dataclass(frozen=True)
class AllowedPair:
    n: int
    I: tuple
    Iprime: tuple
    j: int
    k: int
    case: str

    @property
    def saturated(self) -> bool:
        return self.case == "i"

    def key(self):
        return (self.n, self.I, self.Iprime)

    def to_json(self):
        return {"n": self.n, "I": list(self.I), "Iprime": list(self.Iprime)}

    def label(self) -> str:
        fmt = lambda s: "{" + ",".join(map(str, s)) + "}" if s else "{}"
        return f"({fmt(self.I)},{fmt(self.Iprime)})"


def validate_pair(n: int, I, Iprime) -> AllowedPair:
    """Classify (I, I') into one of the five allowed cases and attach j, k."""
    if n < 1:
        raise NotAllowed("n must be positive")
    I = tuple(sorted(set(I)))
    Ip = tuple(sorted(set(Iprime)))
    for name, s in (("I", I), ("Iprime", Ip)):
        bad = [x for x in s if not 1 <= x <= n - 1]
        if bad:
            raise NotAllowed(f"{name} has elements outside [1,{n - 1}]: {bad}")
    if set(I) & set(Ip):
        raise NotAllowed(f"I and Iprime intersect in {sorted(set(I) & set(Ip))}")
    union = set(I) | set(Ip)
    if union == set(range(1, n)):
        return AllowedPair(n, I, Ip, 0, 1, "i")
    if not I and not Ip:
        return AllowedPair(n, I, Ip, 0, n, "ii")
    if not I and len(Ip) == 1 and 1 <= Ip[0] <= n - 2:
        return AllowedPair(n, I, Ip, Ip[0], n, "iii")
    for k in Ip:
        if 2 <= k <= n - 1 and union == set(range(k, n)):
            return AllowedPair(n, I, Ip, 0, k, "iv")
    for k in Ip:
        for j in Ip:
            if 1 <= j <= k - 2 and union == {j} | set(range(k, n)):
                return AllowedPair(n, I, Ip, j, k, "v")
    raise NotAllowed(
        f"({sorted(I)},{sorted(Ip)}) is disjoint but matches none of the five "
        "allowed shapes: not saturated, not empty, not a single I' element "
        "in [1,n-2], and the union is neither [k,n-1] nor {j} u [k,n-1]"
    )


def left_child(p: AllowedPair) -> AllowedPair:
    if p.saturated:
        raise SaturatedPair(f"{p.label()} is saturated")
    Ip = (set(p.Iprime) - {p.j}) | {p.j + 1}
    return validate_pair(p.n, p.I, Ip)


def right_child(p: AllowedPair) -> AllowedPair:
    if p.saturated:
        raise SaturatedPair(f"{p.label()} is saturated")
    I = set(range(p.j + 1, p.k)) | set(p.I)
    return validate_pair(p.n, I, p.Iprime)


def root(n: int) -> AllowedPair:
    return validate_pair(n, (), ())


@dataclass
class TreeNode:
    pair: AllowedPair
    left: TreeNode | None = None
    right: TreeNode | None = None
    path: str = ""

    def walk(self) -> Iterator[TreeNode]:
        yield self
        if self.left is not None:
            yield from self.left.walk()
            yield from self.right.walk()

    def leaves(self) -> list:
        return [v for v in self.walk() if v.left is None]


def enumerate_tree(n: int) -> TreeNode:
    if n < 2:
        raise ValueError("n must be at least 2")

    def grow(pair, path):
        node = TreeNode(pair, path=path)
        if not pair.saturated:
            node.left = grow(left_child(pair), path + "L")
            node.right = grow(right_child(pair), path + "R")
        return node

    return grow(root(n), "")


def path_to(pair: AllowedPair) -> str:
    """The L/R word leading from the root to ``pair``."""
    for node in enumerate_tree(pair.n).walk():
        if node.pair == pair:
            return node.path
    raise KeyError(pair.label())


def codim_w(I) -> int:
    return sum(I)


def dimension(pair: AllowedPair) -> int:
    """n(n+1)/2 - w(I) - w(I'), the number of free coordinates of the chart."""
    n = pair.n
    return n * (n + 1) // 2 - codim_w(pair.I) - codim_w(pair.Iprime)


@dataclass(frozen=True)
class PartitionData:
    """lambda = elements of I decreasing, mu = the complementary parts."""

    n: int
    lam: tuple
    mu: tuple

    @property
    def s(self) -> int:
        return len(self.lam)


def partition_data(n: int, I) -> PartitionData:
    lam = tuple(sorted(I, reverse=True))
    removed = {n - x for x in lam}
    mu = tuple(v for v in range(n - 1, -1, -1) if v not in removed)
    return PartitionData(n, lam, mu)


# ---------------------------------------------------------------------------
# admissible sets as sign vectors

def enumerate_admissible(n: int, maximal_only: bool = False) -> list:
    values = (1, -1) if maximal_only else (1, 0, -1)
    return [tuple(s) for s in product(values, repeat=n)]


def signs_to_str(signs) -> str:
    return "".join("+" if e > 0 else "-" if e < 0 else "0" for e in signs)


def signs_from_str(s: str) -> tuple:
    table = {"+": 1, "-": -1, "0": 0}
    return tuple(table[c] for c in s)


def signs_from_T(n: int, T) -> tuple:
    """Maximal sign vector with + exactly on T."""
    T = set(T)
    return tuple(1 if q in T else -1 for q in range(1, n + 1))


def T_from_signs(signs) -> tuple:
    return tuple(q for q, e in enumerate(signs, start=1) if e > 0)


def parse_subset(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(sorted(int(v) for v in text.split(",") if v.strip()))
