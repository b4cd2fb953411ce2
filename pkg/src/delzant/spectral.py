"""Dimension-count engine for the lifted-Floer spectral sequence.

The first page is the Z2-homology of the universal cover, graded so that a
page-r differential moves degree ``d`` to ``d + rN - 1`` for the candidate
minimal Maslov number ``N``.  Everything must cancel by page
``floor((dim L + 1)/N) + 1``; a conservative per-page lower bound on the
surviving dimensions therefore excludes candidates: whatever survives the
bound can never die.  The engine is sound (never excludes a realizable N),
not sharp.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .polytopes import PolytopeFormatError


class ProfileError(ValueError):
    """Raised for homology profiles outside the engine's model."""


@dataclass(frozen=True)
class HomologyProfile:
    """Z2 Betti numbers of a compact universal cover, plus dim L."""

    dims: tuple[tuple[int, int], ...]  # sorted (degree, dimension), dimensions > 0
    l_dim: int
    orientable: bool

    @staticmethod
    def from_dims(dims: Mapping[int, int], l_dim: int, orientable: bool) -> "HomologyProfile":
        cleaned = {int(d): int(v) for d, v in dims.items() if int(v)}
        if not cleaned or cleaned.get(0, 0) < 1:
            raise ProfileError("profile must have dim H_0 >= 1")
        if any(d < 0 or v < 0 for d, v in cleaned.items()):
            raise ProfileError("degrees and dimensions must be non-negative")
        cover_dim = max(cleaned)
        if cover_dim > l_dim:
            raise ProfileError("top homology degree exceeds dim L")
        return HomologyProfile(tuple(sorted(cleaned.items())), l_dim, orientable)

    @property
    def cover_dim(self) -> int:
        return self.dims[-1][0]

    @property
    def total_dim(self) -> int:
        return sum(v for _, v in self.dims)

    def as_dict(self) -> dict[int, int]:
        return dict(self.dims)


@dataclass(frozen=True)
class EngineResult:
    excluded: bool
    witness_degree: int | None


def collapse_page(l_dim: int, n: int) -> int:
    return (l_dim + 1) // n + 1


def _check_model(profile: HomologyProfile) -> None:
    # a contractible cover (tori etc.) means the universal cover is not
    # compact; the counting model assumes sphere-product-like covers
    if profile.cover_dim == 0 and profile.l_dim > 0:
        raise ProfileError(
            "universal cover is contractible (non-compact cover); "
            "the dimension-count model does not apply"
        )


def run_engine(profile: HomologyProfile, n: int) -> EngineResult:
    """Lower-bound propagation for Maslov candidate ``n``.

    Page r sends degree d to d + rn - 1 and receives from d + 1 - rn; the
    lower bound drops by the (constant) upper bounds of those two slots.
    Excluded iff some degree is still positive at the collapse page.
    """
    if n < 2:
        raise ValueError("Maslov candidates start at 2")
    _check_model(profile)
    upper = profile.as_dict()
    lower = dict(upper)
    pages = collapse_page(profile.l_dim, n)
    for r in range(1, pages):
        shift = r * n - 1
        lower = {
            d: max(0, v - upper.get(d + shift, 0) - upper.get(d - shift, 0))
            for d, v in lower.items()
        }
    survivors = sorted(d for d, v in lower.items() if v > 0)
    if survivors:
        return EngineResult(True, survivors[0])
    return EngineResult(False, None)


def admissible_maslov(profile: HomologyProfile, n_max: int) -> set[int]:
    """Candidates in [2, n_max] not excluded; odd ones are out for orientable L."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    _check_model(profile)
    admissible = set()
    for n in range(2, n_max + 1):
        if profile.orientable and n % 2:
            continue
        if not run_engine(profile, n).excluded:
            admissible.add(n)
    return admissible


def binomial_lemma(m: int) -> bool:
    """Central binomial dominance: is C(m, m//2) larger than the tails beyond offset 2?

    Exact integer arithmetic.  The inequality holds for 4 <= m <= 14 and is
    false for every m >= 15: the central coefficient grows like 2^m/sqrt(m)
    while the tails keep a constant fraction of 2^m.  See
    ``binomial_details`` for the witnesses and the companion induction
    bound (false from m = 8 on: 2^7 = 128 > C(8,4) + C(8,5) = 126).
    """
    return binomial_details(m)["holds"]


def binomial_details(m: int) -> dict:
    """Exact evaluation of the dominance inequality and its induction bound."""
    if m < 4:
        raise ValueError("the inequality is asserted for m >= 4")
    from math import comb

    half = m // 2
    central = comb(m, half)
    tails = sum(comb(m, i) for i in range(0, half - 2)) + sum(
        comb(m, i) for i in range(half + 3, m + 1)
    )
    details = {
        "central": central,
        "tails": tails,
        "holds": central > tails,
    }
    if m % 2 == 0:
        details["induction_bound_holds"] = (
            2 ** (m - 1) < comb(m, half) + comb(m, half + 1)
        )
    return details


def brute_force_vanishes(profile: HomologyProfile, n: int) -> bool:
    """Independent oracle: does some differential rank assignment kill everything?

    Searches every per-page, per-degree rank profile subject to the
    dimension constraints (rank into a degree plus rank out of it cannot
    exceed its dimension, and a rank is bounded by source and target), and
    asks whether all dimensions can reach zero by the collapse page.
    """
    if n < 2:
        raise ValueError("Maslov candidates start at 2")
    _check_model(profile)
    degrees = sorted(profile.as_dict())
    start = tuple(profile.as_dict().get(d, 0) for d in degrees)
    pages = collapse_page(profile.l_dim, n)
    index = {d: i for i, d in enumerate(degrees)}

    @lru_cache(maxsize=None)
    def reachable(page: int, dims: tuple[int, ...]) -> bool:
        if not any(dims):
            return True
        if page >= pages:
            return False
        shift = page * n - 1
        chains: list[list[int]] = []
        seen: set[int] = set()
        for d in degrees:
            if d in seen:
                continue
            chain = []
            cur = d
            while cur in index and cur not in seen:
                seen.add(cur)
                chain.append(cur)
                cur += shift
            chains.append(chain)

        per_chain_outcomes: list[list[tuple[int, ...]]] = []
        for chain in chains:
            vals = [dims[index[d]] for d in chain]
            outcomes: list[tuple[int, ...]] = []

            def walk(pos: int, prev_rank: int, acc: tuple[int, ...]):
                if pos == len(vals):
                    outcomes.append(acc)
                    return
                remaining = vals[pos] - prev_rank
                if remaining < 0:
                    return
                if pos == len(vals) - 1:
                    walk(pos + 1, 0, acc + (remaining,))
                    return
                max_rank = min(remaining, vals[pos + 1])
                for rank in range(max_rank + 1):
                    walk(pos + 1, rank, acc + (remaining - rank,))

            walk(0, 0, ())
            per_chain_outcomes.append(sorted(set(outcomes)))

        def combine(ci: int, dims_acc: dict[int, int]) -> bool:
            if ci == len(chains):
                new_dims = tuple(dims_acc[d] for d in degrees)
                return reachable(page + 1, new_dims)
            for outcome in per_chain_outcomes[ci]:
                for d, v in zip(chains[ci], outcome):
                    dims_acc[d] = v
                if combine(ci + 1, dims_acc):
                    return True
            return False

        return combine(0, {})

    return reachable(1, start)


def parse_profile(text: str | bytes) -> HomologyProfile:
    """Parse ``{"dims": {"0": 1, ...}, "L_dim": int, "orientable": bool}``."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolytopeFormatError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict) or not {"dims", "L_dim", "orientable"} <= set(data):
        raise PolytopeFormatError(
            "profile JSON needs keys 'dims', 'L_dim' and 'orientable'"
        )
    dims_raw = data["dims"]
    if not isinstance(dims_raw, dict):
        raise PolytopeFormatError("'dims' must map degrees to dimensions")
    try:
        dims = {int(k): int(v) for k, v in dims_raw.items()}
    except (TypeError, ValueError):
        raise PolytopeFormatError("'dims' entries must be integers") from None
    try:
        return HomologyProfile.from_dims(dims, int(data["L_dim"]), bool(data["orientable"]))
    except ProfileError as exc:
        raise PolytopeFormatError(str(exc)) from None


def profile_to_json(profile: HomologyProfile) -> dict:
    return {
        "dims": {str(d): v for d, v in profile.dims},
        "L_dim": profile.l_dim,
        "orientable": profile.orientable,
    }
