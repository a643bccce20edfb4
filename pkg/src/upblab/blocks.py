"""Structure of orthogonal product bases of a qubit x N-dimensional system.

Every such OPB arises from an orthogonal decomposition of the second factor
into blocks X_1 + ... + X_m, one qubit basis pair {v_j, v_j-perp} per block,
and two orthogonal bases {x_ji}, {y_ji} of each block: the members are all
|v_j, x_ji> and all |v_j-perp, y_ji>.  This module generates an OPB from
such a description and recovers the description from an OPB; the block
count and block dimensions are canonical invariants.

Bases here are orthogonal, not orthonormal: everything stays unnormalized
so the entries remain rational, and squared norms are carried implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    InvalidSpecError,
    NotAnOPBError,
    StructureViolationError,
)
from .linalg import ExactMatrix, Vector, as_vector, inner, matrix_rank
from .qubits import LocalState, local_equal_up_to_phase, local_perp, orthogonal_exact


@dataclass(frozen=True)
class BipartitePair:
    """A product vector of a qubit local and a side-2 coordinate vector."""

    qubit: LocalState
    tail: Vector

    def flatten(self) -> Vector:
        a, b = self.qubit.vec2()
        return tuple(a * x for x in self.tail) + tuple(b * x for x in self.tail)


@dataclass(frozen=True)
class BlockSpec:
    """Blocks, qubit bases and per-block basis pairs describing an OPB."""

    side2_dim: int
    qubit_bases: tuple  # m LocalStates, pairwise distinct bases
    block_dims: tuple
    x_bases: tuple  # per block: tuple of side-2 vectors
    y_bases: tuple

    @property
    def m(self) -> int:
        return len(self.qubit_bases)


def _orthogonal_family(vectors) -> bool:
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            if not inner(vectors[i], vectors[j]).is_zero():
                return False
    return True


def validate_block_spec(spec: BlockSpec) -> None:
    """Check every invariant; raises InvalidSpecError naming the violation."""
    m = spec.m
    if m < 1:
        raise InvalidSpecError("need at least one block")
    if len(spec.block_dims) != m or len(spec.x_bases) != m or len(spec.y_bases) != m:
        raise InvalidSpecError("per-block data lengths disagree")
    if sum(spec.block_dims) != spec.side2_dim:
        raise InvalidSpecError("block dimensions do not sum to the space dimension")
    for j, v in enumerate(spec.qubit_bases):
        if not v.convertible():
            raise InvalidSpecError(f"qubit basis {j} has no exact coordinates")
    for a in range(m):
        for b in range(a + 1, m):
            va, vb = spec.qubit_bases[a], spec.qubit_bases[b]
            if local_equal_up_to_phase(va, vb) or local_equal_up_to_phase(
                local_perp(va), vb
            ):
                raise InvalidSpecError(
                    f"qubit bases {a} and {b} are the same unordered basis"
                )
    for j in range(m):
        k = spec.block_dims[j]
        if k < 1:
            raise InvalidSpecError(f"block {j} has dimension < 1")
        for name, basis in (("x", spec.x_bases[j]), ("y", spec.y_bases[j])):
            if len(basis) != k:
                raise InvalidSpecError(f"{name}-basis of block {j} has wrong size")
            if any(len(v) != spec.side2_dim for v in basis):
                raise InvalidSpecError(f"{name}-basis of block {j} has wrong ambient dim")
            if any(all(x.is_zero() for x in v) for v in basis):
                raise InvalidSpecError(f"{name}-basis of block {j} contains zero")
            if not _orthogonal_family(basis):
                raise InvalidSpecError(f"{name}-basis of block {j} is not orthogonal")
        stacked = ExactMatrix.from_rows(list(spec.x_bases[j]) + list(spec.y_bases[j]))
        if matrix_rank(stacked) != k:
            raise InvalidSpecError(f"x- and y-bases of block {j} span different spaces")
    # blocks pairwise orthogonal
    for a in range(m):
        for b in range(a + 1, m):
            for u in spec.x_bases[a]:
                for w in spec.x_bases[b]:
                    if not inner(u, w).is_zero():
                        raise InvalidSpecError(f"blocks {a} and {b} are not orthogonal")


def opb_from_blocks(spec: BlockSpec) -> list:
    """Emit the 2N pairwise-orthogonal members of the described OPB."""
    validate_block_spec(spec)
    out = []
    for j in range(spec.m):
        v = spec.qubit_bases[j]
        vp = local_perp(v)
        for x in spec.x_bases[j]:
            out.append(BipartitePair(qubit=v, tail=as_vector(x)))
        for y in spec.y_bases[j]:
            out.append(BipartitePair(qubit=vp, tail=as_vector(y)))
    _assert_opb(out, spec.side2_dim)
    return out


def _assert_opb(members: Sequence[BipartitePair], side2_dim: int) -> None:
    n = len(members)
    if n != 2 * side2_dim:
        raise NotAnOPBError(f"expected {2 * side2_dim} members, got {n}")
    for i in range(n):
        for j in range(i + 1, n):
            a, b = members[i], members[j]
            if orthogonal_exact(a.qubit, b.qubit):
                continue
            if not inner(a.tail, b.tail).is_zero():
                raise NotAnOPBError(f"members {i} and {j} are not orthogonal")
    coords = ExactMatrix.from_rows([m.flatten() for m in members])
    if matrix_rank(coords) != 2 * side2_dim:
        raise NotAnOPBError("members do not span the space")


def opb_to_blocks(members: Sequence[BipartitePair]) -> BlockSpec:
    """Recover the block structure of a bipartite OPB.

    Groups members by the phase class of their qubit local; classes must
    pair up with their perpendicular class, and paired classes must carry
    equal-dimensional, equal-span side-2 families.  Genuine OPBs always
    decompose; StructureViolationError on anything else.
    """
    members = list(members)
    if not members:
        raise NotAnOPBError("empty input")
    side2_dim = len(members[0].tail)
    _assert_opb(members, side2_dim)

    groups: dict = {}
    for mem in members:
        groups.setdefault(mem.qubit.phase_key(), []).append(mem)
    keys = list(groups)
    used = set()
    qubit_bases = []
    block_dims = []
    x_bases = []
    y_bases = []
    for key in keys:
        if key in used:
            continue
        rep = groups[key][0].qubit
        perp_key = local_perp(rep).phase_key()
        if perp_key == key:
            raise StructureViolationError("a qubit class equals its own perp")
        if perp_key not in groups:
            raise StructureViolationError(
                "a qubit class appears without its perpendicular class"
            )
        used.add(key)
        used.add(perp_key)
        xs = [m.tail for m in groups[key]]
        ys = [m.tail for m in groups[perp_key]]
        if len(xs) != len(ys):
            raise StructureViolationError("paired classes have different sizes")
        stacked = ExactMatrix.from_rows(list(xs) + list(ys))
        if matrix_rank(stacked) != len(xs):
            raise StructureViolationError("paired classes span different blocks")
        qubit_bases.append(rep)
        block_dims.append(len(xs))
        x_bases.append(tuple(xs))
        y_bases.append(tuple(ys))
    spec = BlockSpec(
        side2_dim=side2_dim,
        qubit_bases=tuple(qubit_bases),
        block_dims=tuple(block_dims),
        x_bases=tuple(x_bases),
        y_bases=tuple(y_bases),
    )
    validate_block_spec(spec)
    return spec


def member_keys(members: Sequence[BipartitePair]) -> set:
    """Canonical keys identifying members up to phase and order."""
    out = set()
    for m in members:
        k = next(i for i, x in enumerate(m.tail) if not x.is_zero())
        piv = m.tail[k]
        tail_key = tuple((x / piv).t for x in m.tail)
        out.add((m.qubit.phase_key(), tail_key))
    return out
