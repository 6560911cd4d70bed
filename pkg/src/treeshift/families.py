"""Printed criteria and explicit constructions for the studied tree families.

A two-branch tree has generation-constant weights indexed
``lambda_{-kappa+1}..lambda_0`` on the trunk and ``lambda_1..lambda_theta``
on both branches; a binary tree has one weight per level.  The condition
evaluators reproduce the published formulas exactly as printed, including
their index sets; out-of-range weight references are recorded and skipped so
the cross-validation audit can quantify the printed statements instead of
silently repairing them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .conjugation import Conjugation, conjugation_from_matrix, verify_c_symmetry
from .serialize import complex_to_pair
from .shift import ShiftMatrix, build_shift, positivize_weights
from .trees import DirectedTree, generate_binary, generate_two_branch

__all__ = [
    "TwoBranchWeights",
    "BinaryWeights",
    "ConditionReport",
    "FamilyConditionError",
    "two_branch_cs_condition",
    "two_branch_phase_sequences",
    "two_branch_conjugation",
    "binary_cs_condition",
    "binary_pairing_moduli",
    "is_palindromic",
    "classify_tree_family",
    "BlockDecomposition",
    "decompose_equal_weight_tree",
    "chains_to_matrix",
    "chain_pairing",
    "reversal_pairing_cs",
    "reversal_pairing_conjugation",
]

SQRT2 = float(np.sqrt(2.0))


class FamilyConditionError(ValueError):
    """A construction's hypothesis fails; the message names the failing step."""


@dataclass(frozen=True)
class TwoBranchWeights:
    """Generation-constant weights for a two-branch tree.

    ``trunk`` holds ``lambda_{-kappa+1}..lambda_0`` (length kappa), ``branch``
    holds ``lambda_1..lambda_theta`` (length theta, shared by both branches).
    """

    kappa: int
    theta: int
    trunk: tuple[complex, ...]
    branch: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "trunk", tuple(complex(w) for w in self.trunk))
        object.__setattr__(self, "branch", tuple(complex(w) for w in self.branch))
        if len(self.trunk) != self.kappa:
            raise ValueError(
                f"trunk needs {self.kappa} weights, got {len(self.trunk)}"
            )
        if len(self.branch) != self.theta:
            raise ValueError(
                f"branch needs {self.theta} weights, got {len(self.branch)}"
            )

    def weight(self, index: int) -> complex:
        """Unified accessor: index in -kappa+1..0 is trunk, 1..theta branch."""
        if -self.kappa + 1 <= index <= 0:
            return self.trunk[index + self.kappa - 1]
        if 1 <= index <= self.theta:
            return self.branch[index - 1]
        raise IndexError(f"weight index {index} outside -{self.kappa - 1}..{self.theta}")

    def in_range(self, index: int) -> bool:
        return -self.kappa + 1 <= index <= self.theta

    def to_assignment(self) -> dict[str, complex]:
        w: dict[str, complex] = {}
        for l in range(-self.kappa + 1, 1):
            w[str(l)] = self.weight(l)
        for i in (1, 2):
            for j in range(1, self.theta + 1):
                w[f"{i},{j}"] = self.weight(j)
        return w

    def shift(self) -> ShiftMatrix:
        return build_shift(generate_two_branch(self.kappa, self.theta), self.to_assignment())


@dataclass(frozen=True)
class BinaryWeights:
    """One weight per level for a binary tree: ``levels[k-1]`` = lambda_k."""

    kappa: int
    levels: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(complex(w) for w in self.levels))
        if len(self.levels) != self.kappa:
            raise ValueError(f"need {self.kappa} level weights, got {len(self.levels)}")

    def weight(self, level: int) -> complex:
        if not 1 <= level <= self.kappa:
            raise IndexError(f"level {level} outside 1..{self.kappa}")
        return self.levels[level - 1]

    def in_range(self, level: int) -> bool:
        return 1 <= level <= self.kappa

    def to_assignment(self) -> dict[str, complex]:
        w: dict[str, complex] = {}
        for k in range(1, self.kappa + 1):
            for l in range(1, 2**k + 1):
                w[f"{k},{l}"] = self.weight(k)
        return w

    def shift(self) -> ShiftMatrix:
        return build_shift(generate_binary(self.kappa), self.to_assignment())


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a printed criterion: per-clause booleans plus skipped refs."""

    satisfied: bool
    clauses: tuple[dict, ...]
    skipped: tuple[dict, ...]

    def to_doc(self) -> dict:
        return {
            "satisfied": bool(self.satisfied),
            "clauses": [dict(c) for c in self.clauses],
            "skipped": [dict(s) for s in self.skipped],
        }


def _close(lhs: float, rhs: float, rtol: float) -> bool:
    return abs(lhs - rhs) <= rtol * max(1.0, abs(lhs), abs(rhs))


def two_branch_cs_condition(w: TwoBranchWeights, rtol: float = 1e-9) -> ConditionReport:
    """Evaluate the printed two-branch criterion exactly as stated.

    Clause (i) compares ``|lambda_{1+j}|`` with ``|lambda_{theta+1-j}|`` for
    j = 1..theta-1.  When theta - kappa = 1 clause (ii) compares
    ``|lambda_{-kappa+j}|`` with ``|lambda_{theta-j+1}|`` for j = 1..kappa+theta.
    Otherwise clause (iii) requires ``sqrt(2)|lambda_1| = |lambda_{theta-kappa}|``
    together with the same comparisons for j = 1..kappa+theta excluding
    j = kappa (the exclusion is the printed one, reproduced as is).
    """
    kappa, theta = w.kappa, w.theta
    clauses: list[dict] = []
    skipped: list[dict] = []

    def compare(clause: str, j: int, lhs_index: int, rhs_index: int, factor: float = 1.0):
        missing = [i for i in (lhs_index, rhs_index) if not w.in_range(i)]
        if missing:
            skipped.append({
                "clause": clause,
                "j": j,
                "out_of_range_indices": missing,
            })
            return
        lhs = factor * abs(w.weight(lhs_index))
        rhs = abs(w.weight(rhs_index))
        clauses.append({
            "clause": clause,
            "j": j,
            "lhs": float(lhs),
            "rhs": float(rhs),
            "holds": _close(lhs, rhs, rtol),
        })

    for j in range(1, theta):
        compare("i", j, 1 + j, theta + 1 - j)
    if theta - kappa == 1:
        for j in range(1, kappa + theta + 1):
            compare("ii", j, -kappa + j, theta - j + 1)
    else:
        compare("iii", 0, 1, theta - kappa, factor=SQRT2)
        for j in range(1, kappa + theta + 1):
            if j == kappa:
                skipped.append({"clause": "iii", "j": j, "excluded_by_printed_set": True})
                continue
            compare("iii", j, -kappa + j, theta - j + 1)
    satisfied = all(c["holds"] for c in clauses)
    return ConditionReport(satisfied=satisfied, clauses=tuple(clauses), skipped=tuple(skipped))


def binary_cs_condition(w: BinaryWeights, rtol: float = 1e-9) -> ConditionReport:
    """Evaluate the printed binary criterion ``2|lambda_{l+1}| = |lambda_{kappa-l}|``
    for l = 0..kappa as stated; l values referencing the undefined weights
    ``lambda_0`` or ``lambda_{kappa+1}`` are recorded and skipped."""
    kappa = w.kappa
    clauses: list[dict] = []
    skipped: list[dict] = []
    for l in range(0, kappa + 1):
        lhs_index, rhs_index = l + 1, kappa - l
        missing = [i for i in (lhs_index, rhs_index) if not w.in_range(i)]
        if missing:
            skipped.append({"clause": "rita2", "l": l, "out_of_range_indices": missing})
            continue
        lhs = 2.0 * abs(w.weight(lhs_index))
        rhs = abs(w.weight(rhs_index))
        clauses.append({
            "clause": "rita2",
            "l": l,
            "lhs": float(lhs),
            "rhs": float(rhs),
            "holds": _close(lhs, rhs, rtol),
        })
    satisfied = all(c["holds"] for c in clauses)
    return ConditionReport(satisfied=satisfied, clauses=tuple(clauses), skipped=tuple(skipped))


def binary_pairing_moduli(kappa: int) -> list[dict]:
    """Norm bookkeeping for the aggregate-vector pairing ``C(C f_{kappa-l}) = C f_l``:
    the scalar mapping ``f_{kappa-l}`` to ``f_l`` must have modulus
    ``norm(f_l)/norm(f_{kappa-l}) = sqrt(2^(2l-kappa))``.  Audit output only."""
    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    return [
        {"l": l, "modulus": float(np.sqrt(2.0 ** (2 * l - kappa)))}
        for l in range(0, kappa + 1)
    ]


def is_palindromic(chain: Sequence[complex], rtol: float = 1e-9) -> bool:
    """True iff the moduli read the same in both directions."""
    mods = [abs(complex(c)) for c in chain]
    return all(
        _close(mods[i], mods[len(mods) - 1 - i], rtol) for i in range(len(mods) // 2)
    )


def two_branch_phase_sequences(
    w: TwoBranchWeights, rtol: float = 1e-9
) -> tuple[tuple[complex, ...], tuple[complex, ...]]:
    """Phase recursions with seeds delta_0 = gamma_0 = 1.

    ``delta_j = delta_{j-1} * lambda_{1+j} / lambda_{theta-j+1}`` for
    j = 1..theta-1 and
    ``gamma_j = gamma_{j-1} * nu_j lambda_{-kappa+j} / (mu_j lambda_{theta-j+1})``
    for j = 1..theta+kappa, where ``mu_j = sqrt(2)`` exactly when j = theta and
    ``nu_j = sqrt(2)`` exactly when j = kappa+1.  Raises
    :class:`FamilyConditionError` at the first step that leaves the unit circle
    by more than ``rtol``.
    """
    kappa, theta = w.kappa, w.theta
    deltas = [complex(1.0)]
    for j in range(1, theta):
        value = deltas[-1] * w.weight(1 + j) / w.weight(theta - j + 1)
        if abs(abs(value) - 1.0) > rtol:
            raise FamilyConditionError(
                f"delta recursion step j={j} yields modulus {abs(value):.12g} != 1"
            )
        deltas.append(value)
    gammas = [complex(1.0)]
    for j in range(1, theta + kappa + 1):
        mu = SQRT2 if j == theta else 1.0
        nu = SQRT2 if j == kappa + 1 else 1.0
        value = gammas[-1] * nu * w.weight(-kappa + j) / (mu * w.weight(theta - j + 1))
        if abs(abs(value) - 1.0) > rtol:
            raise FamilyConditionError(
                f"gamma recursion step j={j} yields modulus {abs(value):.12g} != 1"
            )
        gammas.append(value)
    return tuple(deltas), tuple(gammas)


def _two_branch_symmetrized_columns(tree: DirectedTree, kappa: int, theta: int):
    """Columns of the f/g basis change: trunk vectors, then sum vectors
    f_1..f_theta, then difference vectors g_1..g_theta."""
    n = tree.n
    cols = np.zeros((n, n))
    labels: list[str] = []
    pos = 0
    for l in range(-kappa, 1):
        cols[tree.index_of(str(l)), pos] = 1.0
        labels.append(f"f[{l}]")
        pos += 1
    for j in range(1, theta + 1):
        i1, i2 = tree.index_of(f"1,{j}"), tree.index_of(f"2,{j}")
        cols[i1, pos] = cols[i2, pos] = 1.0 / SQRT2
        labels.append(f"f[{j}]")
        pos += 1
    for j in range(1, theta + 1):
        i1, i2 = tree.index_of(f"1,{j}"), tree.index_of(f"2,{j}")
        cols[i1, pos] = 1.0 / SQRT2
        cols[i2, pos] = -1.0 / SQRT2
        labels.append(f"g[{j}]")
        pos += 1
    return cols, labels


def two_branch_conjugation(
    w: TwoBranchWeights, rtol: float = 1e-9, tol: float = 1e-10
) -> Conjugation:
    """Build the explicit conjugation for a two-branch shift.

    Weights are positivized first; the phase recursions then run on the
    moduli (seeds 1), the conjugation is assembled in the symmetrized basis
    as ``C f_{-kappa+j} = gamma_j f_{theta-j}``, ``C g_{1+j} = delta_j g_{theta-j}``,
    gauged back to the original weights, and re-verified before returning.
    """
    kappa, theta = w.kappa, w.theta
    tree = generate_two_branch(kappa, theta)
    assignment = w.to_assignment()
    positive, gauge = positivize_weights(tree, assignment)
    w_pos = TwoBranchWeights(
        kappa=kappa,
        theta=theta,
        trunk=tuple(positive[str(l)] for l in range(-kappa + 1, 1)),
        branch=tuple(positive[f"1,{j}"] for j in range(1, theta + 1)),
    )
    deltas, gammas = two_branch_phase_sequences(w_pos, rtol=rtol)

    cols, labels = _two_branch_symmetrized_columns(tree, kappa, theta)
    n = tree.n
    p = np.zeros((n, n), dtype=complex)
    col_of = {label: i for i, label in enumerate(labels)}
    for j in range(0, kappa + theta + 1):
        p[col_of[f"f[{theta - j}]"], col_of[f"f[{-kappa + j}]"]] = gammas[j]
    for j in range(0, theta):
        p[col_of[f"g[{theta - j}]"], col_of[f"g[{1 + j}]"]] = deltas[j]
    a_pos = cols @ p @ cols.T
    d = np.array([gauge[v] for v in tree.vertices], dtype=complex)
    a = (d[:, None] * a_pos) * d[None, :]
    cert = conjugation_from_matrix(a, basis=tree.vertices, tol=tol)
    s = build_shift(tree, assignment)
    report = verify_c_symmetry(s, cert, tol=tol)
    if not report.passed:
        raise FamilyConditionError(
            f"constructed conjugation fails intertwining: residual {report.residual:.3e}"
        )
    return cert


def classify_tree_family(tree: DirectedTree) -> Optional[tuple[str, dict]]:
    """Structural detection of path / two-branch / binary shape.

    Returns ``(family, info)`` with the data the decomposition needs, or
    ``None`` when the tree fits none of the three shapes.  Detection is by
    structure only; vertex labels play no role.
    """
    branching = tree.branching_vertices()
    if not branching:
        order = tree.path_from_root(tree.leaves()[0]) if tree.n else ()
        if len(order) == tree.n:
            return "path", {"order": order}
        return None
    if len(branching) == 1:
        b = branching[0]
        kids = tree.children_of(b)
        if len(kids) != 2:
            return None
        trunk = tree.path_from_root(b)
        arms = []
        for child in kids:
            arm = [child]
            while True:
                nxt = tree.children_of(arm[-1])
                if len(nxt) == 0:
                    break
                if len(nxt) > 1:
                    return None
                arm.append(nxt[0])
            arms.append(tuple(arm))
        if len(arms[0]) != len(arms[1]):
            return None
        if len(trunk) + len(arms[0]) + len(arms[1]) != tree.n:
            return None
        return "two_branch", {
            "kappa": len(trunk) - 1,
            "theta": len(arms[0]),
            "trunk": tuple(trunk),
            "arms": tuple(arms),
        }
    # candidate binary: every non-leaf has exactly two children, leaves level
    leaf_depths = {tree.depth_of(v) for v in tree.leaves()}
    if len(leaf_depths) != 1:
        return None
    kappa = leaf_depths.pop()
    if kappa < 1:
        return None
    for v in tree.vertices:
        kids = tree.children_of(v)
        if len(kids) not in (0, 2):
            return None
        if len(kids) == 0 and tree.depth_of(v) != kappa:
            return None
    if tree.n != 2 ** (kappa + 1) - 1:
        return None
    return "binary", {"kappa": kappa}


def _generation_values(tree: DirectedTree, weights: dict, rtol: float) -> list[complex]:
    """One weight per depth, failing if any generation mixes values."""
    values: list[complex] = []
    for d in range(1, tree.depth + 1):
        generation = tree.at_depth(d)
        first = complex(weights[generation[0]])
        for v in generation[1:]:
            if abs(complex(weights[v]) - first) > rtol * max(1.0, abs(first)):
                raise ValueError(
                    f"weights are not generation-constant at depth {d} "
                    f"(vertex {v} differs)"
                )
        values.append(first)
    return values


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Unitary basis change exhibiting T as a direct sum of truncated shifts.

    ``chains[k]`` holds the weight sequence of the k-th block (empty = 1x1
    zero block); columns of ``transform`` are grouped chain by chain, and
    ``transform* @ matrix @ transform`` equals the block diagonal up to
    ``residual``.
    """

    transform: np.ndarray
    chains: tuple[tuple[complex, ...], ...]
    chain_labels: tuple[str, ...]
    basis: tuple[str, ...]
    matrix: np.ndarray
    residual: float

    def to_doc(self) -> dict:
        return {
            "chains": [[complex_to_pair(c) for c in chain] for chain in self.chains],
            "chain_labels": list(self.chain_labels),
            "residual": float(self.residual),
        }


def chains_to_matrix(chains: Sequence[Sequence[complex]]) -> np.ndarray:
    """Block diagonal of truncated shifts with the given weight chains."""
    sizes = [len(chain) + 1 for chain in chains]
    n = sum(sizes)
    m = np.zeros((n, n), dtype=complex)
    offset = 0
    for chain, size in zip(chains, sizes):
        for i, c in enumerate(chain):
            m[offset + i + 1, offset + i] = complex(c)
        offset += size
    return m


def decompose_equal_weight_tree(
    tree: DirectedTree, weights: dict, rtol: float = 1e-9
) -> BlockDecomposition:
    """Orthogonal decomposition of a generation-constant shift into chains.

    Two-branch trees split into the chain
    ``(lambda_{-kappa+1},..,lambda_0, sqrt(2) lambda_1, lambda_2,..,lambda_theta)``
    along the symmetrized sum vectors plus the difference chain
    ``(lambda_2,..,lambda_theta)``; binary trees split into the aggregate
    chain ``(sqrt(2) lambda_1,..,sqrt(2) lambda_kappa)`` plus one chain
    ``(sqrt(2) lambda_{k+2},..,sqrt(2) lambda_kappa)`` per level-k branching
    vertex; paths are returned unchanged.
    """
    detected = classify_tree_family(tree)
    if detected is None:
        raise ValueError("tree is not a path, two-branch, or binary family tree")
    family, info = detected
    values = _generation_values(tree, weights, rtol)
    n = tree.n
    s = build_shift(tree, weights)

    cols = np.zeros((n, n))
    chains: list[tuple[complex, ...]] = []
    chain_labels: list[str] = []
    pos = 0

    if family == "path":
        for v in info["order"]:
            cols[tree.index_of(v), pos] = 1.0
            pos += 1
        chains.append(tuple(values))
        chain_labels.append("path")
    elif family == "two_branch":
        kappa, theta = info["kappa"], info["theta"]
        trunk, arms = info["trunk"], info["arms"]
        for v in trunk:
            cols[tree.index_of(v), pos] = 1.0
            pos += 1
        for j in range(theta):
            cols[tree.index_of(arms[0][j]), pos] = 1.0 / SQRT2
            cols[tree.index_of(arms[1][j]), pos] = 1.0 / SQRT2
            pos += 1
        main = list(values[:kappa]) + [SQRT2 * values[kappa]] + list(values[kappa + 1 :])
        chains.append(tuple(main))
        chain_labels.append("sum")
        for j in range(theta):
            cols[tree.index_of(arms[0][j]), pos] = 1.0 / SQRT2
            cols[tree.index_of(arms[1][j]), pos] = -1.0 / SQRT2
            pos += 1
        chains.append(tuple(values[kappa + 1 :]))
        chain_labels.append("difference")
    else:
        kappa = info["kappa"]
        # aggregate chain over full levels
        for k in range(kappa + 1):
            level = tree.at_depth(k)
            for v in level:
                cols[tree.index_of(v), pos] = 1.0 / np.sqrt(len(level))
            pos += 1
        chains.append(tuple(SQRT2 * values[k] for k in range(kappa)))
        chain_labels.append("aggregate")
        # one difference chain per branching vertex, level by level
        descendants_cache: dict[str, dict[int, list[str]]] = {}

        def level_descendants(v: str, depth: int) -> list[str]:
            per_vertex = descendants_cache.setdefault(v, {})
            if depth in per_vertex:
                return per_vertex[depth]
            if tree.depth_of(v) == depth:
                result = [v]
            else:
                result = []
                for c in tree.children_of(v):
                    result.extend(level_descendants(c, depth))
            per_vertex[depth] = result
            return result

        for k in range(kappa):
            for v in tree.at_depth(k):
                left, right = tree.children_of(v)
                for m in range(k + 1, kappa + 1):
                    scale = 1.0 / np.sqrt(2 ** (m - k))
                    for u in level_descendants(left, m):
                        cols[tree.index_of(u), pos] = scale
                    for u in level_descendants(right, m):
                        cols[tree.index_of(u), pos] = -scale
                    pos += 1
                chains.append(tuple(SQRT2 * values[m] for m in range(k + 1, kappa)))
                chain_labels.append(f"difference@depth{k}:{v}")

    block = chains_to_matrix(chains)
    residual = float(np.linalg.norm(cols.T @ s.matrix @ cols - block))
    scale = max(1.0, float(np.linalg.norm(s.matrix)))
    if residual > 1e-12 * scale:
        raise ValueError(f"decomposition residual {residual:.3e} exceeds tolerance")
    return BlockDecomposition(
        transform=cols,
        chains=tuple(chains),
        chain_labels=tuple(chain_labels),
        basis=tuple(tree.vertices),
        matrix=s.matrix,
        residual=residual,
    )


def chain_pairing(
    chains: Sequence[Sequence[complex]], rtol: float = 1e-9
) -> Optional[list[dict]]:
    """Partition chains into palindromic singletons and mirror pairs.

    Matching is on moduli.  Returns the partition description or ``None``
    when some chain is neither palindromic nor matched by a reversed partner
    of equal length.
    """
    mods = [tuple(abs(complex(c)) for c in chain) for chain in chains]
    used = [False] * len(chains)
    partition: list[dict] = []
    for i, mi in enumerate(mods):
        if used[i]:
            continue
        used[i] = True
        if all(_close(mi[p], mi[len(mi) - 1 - p], rtol) for p in range(len(mi) // 2)):
            partition.append({"kind": "palindrome", "blocks": [i]})
            continue
        partner = None
        for j in range(i + 1, len(chains)):
            if used[j] or len(mods[j]) != len(mi):
                continue
            if all(_close(mods[j][p], mi[len(mi) - 1 - p], rtol) for p in range(len(mi))):
                partner = j
                break
        if partner is None:
            return None
        used[partner] = True
        partition.append({"kind": "mirror_pair", "blocks": [i, partner]})
    return partition


def _pairing_matrix(chains: Sequence[Sequence[complex]], partition: list[dict]) -> np.ndarray:
    sizes = [len(chain) + 1 for chain in chains]
    offsets = np.concatenate(([0], np.cumsum(sizes))).astype(int)
    n = int(offsets[-1])
    p = np.zeros((n, n))
    for part in partition:
        if part["kind"] == "palindrome":
            (i,) = part["blocks"]
            o, size = offsets[i], sizes[i]
            for a in range(size):
                p[o + size - 1 - a, o + a] = 1.0
        else:
            i, j = part["blocks"]
            oi, oj, size = offsets[i], offsets[j], sizes[i]
            for a in range(size):
                p[oj + size - 1 - a, oi + a] = 1.0
                p[oi + size - 1 - a, oj + a] = 1.0
    return p


def reversal_pairing_cs(
    decomposition: BlockDecomposition, rtol: float = 1e-9, tol: float = 1e-10
) -> Optional[Conjugation]:
    """Conjugation for a block decomposition with positive chains, by flips
    within palindromic blocks and cross flips between mirror pairs.

    The candidate is verified against the decomposition's matrix before being
    returned; ``None`` means no pairing partition exists.
    """
    partition = chain_pairing(decomposition.chains, rtol=rtol)
    if partition is None:
        return None
    p = _pairing_matrix(decomposition.chains, partition)
    u = decomposition.transform
    a = u @ p @ u.T
    try:
        cert = conjugation_from_matrix(a, basis=decomposition.basis, tol=tol)
    except Exception:
        return None
    report = verify_c_symmetry(decomposition.matrix, cert, tol=tol)
    if not report.passed:
        return None
    return cert


def reversal_pairing_conjugation(
    tree: DirectedTree, weights: dict, rtol: float = 1e-9, tol: float = 1e-10
) -> Optional[Conjugation]:
    """End-to-end pairing oracle for arbitrary complex generation-constant
    weights on a supported tree: positivize, decompose, pair, gauge back,
    verify against the original shift.  ``None`` when inapplicable or no
    pairing exists."""
    if classify_tree_family(tree) is None:
        return None
    try:
        positive, gauge = positivize_weights(tree, weights)
        decomposition = decompose_equal_weight_tree(tree, positive, rtol=rtol)
    except ValueError:
        return None
    base = reversal_pairing_cs(decomposition, rtol=rtol, tol=tol)
    if base is None:
        return None
    d = np.array([gauge[v] for v in tree.vertices], dtype=complex)
    a = (d[:, None] * base.matrix) * d[None, :]
    try:
        cert = conjugation_from_matrix(a, basis=tuple(tree.vertices), tol=tol)
    except Exception:
        return None
    s = build_shift(tree, weights)
    report = verify_c_symmetry(s, cert, tol=tol)
    if not report.passed:
        return None
    return cert
