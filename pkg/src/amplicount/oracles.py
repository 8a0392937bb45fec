"""Query-counted Boolean black boxes and heuristic families."""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ContractError
from .statevec import check_qubits


class QueryCounter:
    """Mutable query tally; derived oracles share their parent's counter."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def __repr__(self) -> str:
        return f"QueryCounter({self.count})"


@dataclass(eq=False)
class Oracle:
    """Boolean function on ``{0, ..., 2**n - 1}`` with a query counter.

    ``charge`` is called once per coherent phase application, ``evaluate``
    once per classical point evaluation. ``predicate`` and ``mask`` are
    diagnostic and never counted.
    """

    n: int
    mask: np.ndarray
    label: str = ""
    counter: QueryCounter = field(default_factory=QueryCounter)

    def __post_init__(self) -> None:
        check_qubits(self.n)
        mask = np.ascontiguousarray(self.mask, dtype=np.bool_).reshape(-1)
        if mask.size != 1 << self.n:
            raise ContractError(f"mask of size {mask.size} does not cover 2**{self.n} points")
        mask.flags.writeable = False
        self.mask = mask
        self._mask_u8 = mask.view(np.uint8)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def t(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def queries(self) -> int:
        return self.counter.count

    @property
    def mask_u8(self) -> np.ndarray:
        return self._mask_u8

    def solutions(self) -> list[int]:
        return np.flatnonzero(self.mask).tolist()

    def predicate(self, x: int) -> bool:
        return bool(self.mask[x])

    def evaluate(self, x: int) -> bool:
        """Classical query."""
        if not 0 <= x < self.N:
            raise ContractError(f"point {x} outside the domain of size {self.N}")
        self.counter.count += 1
        return bool(self.mask[x])

    def charge(self, k: int = 1) -> None:
        self.counter.count += k

    def clone(self) -> Oracle:
        """Same predicate, fresh counter."""
        return Oracle(self.n, self.mask, self.label)

    def with_ancilla(self) -> Oracle:
        """Oracle on one extra low qubit: good iff the original is good and the ancilla is 1.

        Shares this oracle's counter, so each query is one query of the original.
        """
        lifted = np.zeros(2 * self.N, dtype=np.bool_)
        lifted[1::2] = self.mask
        return Oracle(self.n + 1, lifted, f"{self.label}+ancilla", self.counter)

    def to_spec(self) -> dict[str, Any]:
        return {"n": self.n, "solutions": self.solutions()}


def make_subset_oracle(n: int, solutions: Iterable[int], label: str = "") -> Oracle:
    check_qubits(n)
    N = 1 << n
    mask = np.zeros(N, dtype=np.bool_)
    for x in solutions:
        x = int(x)
        if not 0 <= x < N:
            raise ContractError(f"solution {x} outside the domain of size {N}")
        mask[x] = True
    return Oracle(n, mask, label or f"subset(n={n})")


def make_random_oracle(n: int, t: int, seed: int) -> Oracle:
    """Uniformly random ``t``-subset of the domain, reproducible from ``seed``."""
    check_qubits(n)
    N = 1 << n
    if not 0 <= t <= N:
        raise ContractError(f"t must lie in [0, {N}], got {t}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(N, size=t, replace=False)
    return make_subset_oracle(n, chosen, label=f"random(n={n},t={t},seed={seed})")


def oracle_from_spec(spec: dict[str, Any]) -> Oracle:
    """Build an oracle from ``{"n", "solutions"}`` or ``{"n", "t", "seed"}``."""
    if not isinstance(spec, dict) or "n" not in spec:
        raise ContractError(f"oracle spec must be an object with an 'n' field, got {spec!r}")
    n = spec["n"]
    if not isinstance(n, int):
        raise ContractError("oracle 'n' must be an integer")
    if "solutions" in spec:
        sols = spec["solutions"]
        if not isinstance(sols, list) or not all(isinstance(x, int) for x in sols):
            raise ContractError("oracle 'solutions' must be a list of integers")
        return make_subset_oracle(n, sols)
    if "t" in spec and "seed" in spec:
        return make_random_oracle(n, int(spec["t"]), int(spec["seed"]))
    raise ContractError("oracle spec needs 'solutions' or both 't' and 'seed'")


def load_oracle(path: str | Path) -> Oracle:
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ContractError(f"cannot read oracle file {path}: {exc}") from exc
    return oracle_from_spec(spec)


Heuristic = Callable[[int, int], int]


@dataclass(eq=False)
class HeuristicFamily:
    """Weighted family of search problems sharing one heuristic ``G(member, seed)``."""

    members: list[Oracle]
    weights: np.ndarray
    heuristic: Heuristic
    seed_space_size: int
    heuristic_spec: str = ""

    def __post_init__(self) -> None:
        self._images: dict[int, np.ndarray] = {}
        if not self.members:
            raise ContractError("a heuristic family needs at least one member")
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (len(self.members),):
            raise ContractError("one weight per member is required")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-9:
            raise ContractError("weights must be non-negative and sum to 1")
        R = self.seed_space_size
        if R < 1 or R & (R - 1):
            raise ContractError(f"seed space size must be a power of 2, got {R}")

    @property
    def seed_bits(self) -> int:
        return self.seed_space_size.bit_length() - 1

    def image(self, member: int) -> np.ndarray:
        """All ``G(member, r)`` over the seed space, bounds-checked."""
        if member in self._images:
            return self._images[member]
        N = self.members[member].N
        xs = np.fromiter(
            (self.heuristic(member, r) for r in range(self.seed_space_size)),
            dtype=np.int64,
            count=self.seed_space_size,
        )
        if xs.size and (xs.min() < 0 or xs.max() >= N):
            raise ContractError(f"heuristic maps member {member} outside its domain")
        xs.flags.writeable = False
        self._images[member] = xs
        return xs

    def h(self, member: int) -> int:
        """Number of seeds the heuristic turns into solutions."""
        return int(np.count_nonzero(self.members[member].mask[self.image(member)]))


@dataclass(eq=False)
class SeedOracle(Oracle):
    """Oracle over the seed space, ``r -> F(G(F, r))``.

    Every query stands for one evaluation of F and one of G; both tallies
    equal the seed-oracle query count.
    """

    member_oracle: Oracle | None = None
    seed_map: np.ndarray | None = None

    def lookup(self, r: int) -> int:
        assert self.seed_map is not None
        return int(self.seed_map[r])


def induced_seed_oracle(fam: HeuristicFamily, member: int) -> SeedOracle:
    if not 0 <= member < len(fam.members):
        raise ContractError(f"member {member} not in a family of {len(fam.members)}")
    F = fam.members[member]
    xs = fam.image(member)
    return SeedOracle(
        fam.seed_bits,
        F.mask[xs],
        label=f"seed[{member}]:{F.label}",
        member_oracle=F,
        seed_map=xs,
    )


def parse_heuristic(spec: str, base_dir: Path | None = None) -> Heuristic:
    """Builtin heuristic maps: identity, constant:<x>, affine:<a>,<b>, table:<file>.

    Affine maps reduce modulo the member's domain size, supplied through the
    closure built in :func:`family_from_spec`.
    """
    kind, _, arg = spec.partition(":")
    kind = kind.strip()
    if kind == "identity":
        return lambda member, r: r
    if kind == "constant":
        x0 = int(arg)
        return lambda member, r: x0
    if kind == "affine":
        body = arg.split("mod")[0]
        try:
            a, b = (int(s) for s in body.split(","))
        except ValueError as exc:
            raise ContractError(f"affine heuristic needs '<a>,<b>', got {arg!r}") from exc
        return _AffineMap(a, b)
    if kind == "table":
        path = Path(arg)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            table = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ContractError(f"cannot read heuristic table {path}: {exc}") from exc
        if table and isinstance(table[0], list):
            return lambda member, r: int(table[member][r])
        return lambda member, r: int(table[r])
    raise ContractError(f"unknown heuristic spec {spec!r}")


class _AffineMap:
    def __init__(self, a: int, b: int) -> None:
        self.a, self.b = a, b
        self.moduli: Sequence[int] = ()

    def __call__(self, member: int, r: int) -> int:
        return (self.a * r + self.b) % self.moduli[member]


def family_from_spec(spec: dict[str, Any], base_dir: Path | None = None) -> HeuristicFamily:
    try:
        members = [oracle_from_spec(m) for m in spec["members"]]
        R = int(spec["seed_space_size"])
        hspec = str(spec["heuristic"])
    except (KeyError, TypeError) as exc:
        raise ContractError(f"malformed family spec: {exc}") from exc
    weights = spec.get("weights")
    if weights is None:
        weights = [1.0 / len(members)] * len(members)
    G = parse_heuristic(hspec, base_dir)
    if isinstance(G, _AffineMap):
        G.moduli = [m.N for m in members]
    return HeuristicFamily(members, np.asarray(weights, dtype=float), G, R, hspec)


def load_family(path: str | Path) -> HeuristicFamily:
    path = Path(path)
    try:
        spec = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ContractError(f"cannot read family file {path}: {exc}") from exc
    return family_from_spec(spec, path.parent)
