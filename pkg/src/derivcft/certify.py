"""Certificates that the derivative models carry no stress-energy tensor.

A stress-energy tensor would have modes ``L_m`` obeying the Virasoro
relations with central charge ``c >= 0``, where ``c / 2 = ||L_{-2} Omega||^2``
and ``c = 0`` forces the field to vanish.  Everything at level 2 is decided by
the exact Gram matrix there:

* rank 0 (``n >= 2``): ``L_{-2} Omega`` is null, so ``c = 0``.
* rank 1 (``n = 1``): ``L_{-2} Omega`` is proportional to ``a_{-2} Omega``,
  which pins ``c |gamma|^2 = 12`` and identifies ``L_m`` with
  ``gamma^{-1} a_m``; the ``(2, -2)`` relation then fails on
  ``a_{-2} Omega`` by a ``gamma``-independent amount.
* rank >= 2 (``n = 0``): no obstruction from this argument.

Coefficients that depend on ``gamma`` are stored as polynomials in
``t = gamma^{-2}``: ``[c0, c1]`` means ``c0 + c1 * t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from . import __version__
from .algebra import StructureConstants, format_scalar, vacuum_expectation
from .fock import FockVector, apply_word, effective_multiplicity, gram_matrix, inner_product, mobius_apply
from .kernels import residue_pairing
from .linalg import bareiss_rank

SCHEMA = "derivcft.certificate/1"
NULL_LEVEL_TWO = "NullLevelTwo"
UNIQUE_CANDIDATE = "UniqueCandidateContradiction"
NO_OBSTRUCTION = "NoObstruction"
GAMMA_RELATION = "c|γ|^2 = 12"


def virasoro_central_term(m: int) -> Fraction:
    """Coefficient ``k`` with central term ``k * c`` in ``[L_m, L_{-m}]``.

    Obtained as ``1/12`` of the residue of ``z^{1-m} f'''`` for ``f = z^{m+1}``,
    i.e. ``m (m^2 - 1) / 12``.
    """
    return Fraction(residue_pairing(m + 1, 1 - m, 3), 12)


@dataclass(frozen=True)
class VirasoroConstraint:
    """``[L_m, L_mp] = (m - mp) L_{m+mp} + c * central * delta_{m+mp,0}``."""

    m: int
    mp: int

    @property
    def l_coefficient(self) -> int:
        return self.m - self.mp

    @property
    def l_index(self) -> int:
        return self.m + self.mp

    @property
    def central(self) -> Fraction:
        return virasoro_central_term(self.m) if self.m + self.mp == 0 else Fraction(0)


class CertificateMismatch(Exception):
    """A recorded certificate field disagrees with its replay."""

    def __init__(self, field_name: str, recorded: Any, recomputed: Any):
        super().__init__(f"{field_name}: recorded {recorded!r}, recomputed {recomputed!r}")
        self.field_name = field_name


def _fmt_poly(coeffs: Sequence[Fraction]) -> List[str]:
    return [format_scalar(c) for c in coeffs]


def _state_witness(psi: FockVector) -> List[List[Any]]:
    return [[list(s), format_scalar(c)] for s, c in psi.items()]


def _state_from_witness(data) -> FockVector:
    return FockVector({tuple(s): Fraction(c) for s, c in data})


@dataclass
class Certificate:
    n: int
    variant: str
    d2: int
    level2_basis: List[List[int]]
    level2_gram: List[List[str]]
    level2_rank: int
    witness: Dict[str, Any] = field(default_factory=dict)
    inferences: List[Dict[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": __version__,
            "n": self.n,
            "variant": self.variant,
            "d2": self.d2,
            "level2": {"basis": self.level2_basis, "gram": self.level2_gram, "rank": self.level2_rank},
            "witness": self.witness,
            "inferences": self.inferences,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unknown certificate schema {data.get('schema')!r}")
        lv = data["level2"]
        return cls(
            n=data["n"],
            variant=data["variant"],
            d2=data["d2"],
            level2_basis=lv["basis"],
            level2_gram=lv["gram"],
            level2_rank=lv["rank"],
            witness=data.get("witness", {}),
            inferences=data.get("inferences", []),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def _constraint_record(n: int, m: int, psi: FockVector, c_per_t: Fraction) -> Dict[str, Any]:
    """Test ``<psi, [L_m, L_{-m}] psi>`` with ``L_j = gamma^{-1} a_j`` against the Virasoro value."""
    c0 = StructureConstants(n)
    norm = inner_product(psi, psi, n)
    N = psi.level
    # L0 eigenvalue read off from the Mobius action rather than assumed
    l0 = inner_product(psi, mobius_apply(0, psi, n), n)
    bracket = apply_word((m, -m), psi, c0) - apply_word((-m, m), psi, c0)
    actual_t = inner_product(psi, bracket, n)
    central = VirasoroConstraint(m, -m).central
    required = [2 * m * l0, central * c_per_t * norm]
    actual = [Fraction(0), actual_t]
    mismatch = [r - a for r, a in zip(required, actual)]
    return {
        "m": m,
        "mp": -m,
        "witness_state": _state_witness(psi),
        "witness_level": N,
        "witness_norm": format_scalar(norm),
        "required": _fmt_poly(required),
        "actual": _fmt_poly(actual),
        "mismatch": _fmt_poly(mismatch),
        "gamma_independent": mismatch[1] == 0,
        "violated": any(mismatch),
    }


DEFAULT_SWEEP = ((1, (2,)), (3, (2,)), (2, (3,)), (3, (3,)))


def certify(n: int, witness_scale=1, sweep: Sequence[Tuple[int, Sequence[int]]] | None = None) -> Certificate:
    """Decide the level-2 obstruction for degree ``n`` and record exact witnesses.

    ``witness_scale`` rescales the witness ``a_{-2} Omega`` in the ``n = 1``
    branch; ``sweep`` lists extra ``(m, partition)`` pairs whose
    ``[L_m, L_{-m}]`` relation is also tested there.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    g = gram_matrix(n, 2)
    d2 = effective_multiplicity(n, 2)
    base = dict(
        n=n,
        d2=d2,
        level2_basis=[list(s) for s in g.basis],
        level2_gram=[[format_scalar(x) for x in row] for row in g.entries],
        level2_rank=g.rank(),
    )
    if d2 == 0:
        return Certificate(
            variant=NULL_LEVEL_TWO,
            witness={
                "central_coefficient_m2": format_scalar(virasoro_central_term(2)),
                "max_level2_norm": "0",
                "c": "0",
            },
            inferences=[
                {"id": "null", "claim": "every level-2 vector is null", "by": "exact Gram rank 0"},
                {"id": "c_value", "claim": "c = 2 ||L_{-2} Omega||^2 = 0", "by": "null, central_coefficient_m2"},
                {"id": "c_positive", "claim": "c >= 0", "by": "axiom: c/2 normalises a positive two-point function"},
                {"id": "vanish", "claim": "Theta = 0", "by": "axiom: Theta = 0 iff c = 0; c_value, c_positive"},
            ],
            **base,
        )
    if d2 == 1:
        c0 = StructureConstants(n)
        scale = Fraction(witness_scale)
        psi = FockVector.basis((2,)) * scale
        vac = vacuum_expectation((2, -2), c0)
        c_per_t = vac / virasoro_central_term(2)
        two_point = [Fraction(0), Fraction(0)]
        primary = _constraint_record(n, 2, psi, c_per_t)
        sweep_records = []
        for m, part in (DEFAULT_SWEEP if sweep is None else sweep):
            sweep_records.append(_constraint_record(n, m, FockVector.basis(tuple(part)), c_per_t))
        return Certificate(
            variant=UNIQUE_CANDIDATE,
            witness={
                "effective_ray": [2],
                "vacuum_pairing_a2_am2": format_scalar(vac),
                "central_coefficient_m2": format_scalar(virasoro_central_term(2)),
                "c_in_gamma_inv_sq": _fmt_poly([Fraction(0), c_per_t]),
                "relation": GAMMA_RELATION,
                "c_times_gamma_sq": format_scalar(c_per_t),
                "two_point_constant": _fmt_poly(two_point),
                "witness_scale": format_scalar(scale),
                "witness_state": _state_witness(psi),
                "constraint": primary,
                "gap": primary["mismatch"][0],
                "sweep": sweep_records,
            },
            inferences=[
                {"id": "ray", "claim": "L_{-2} Omega = gamma^{-1} a_{-2} Omega modulo null vectors",
                 "by": "exact Gram rank 1 at level 2"},
                {"id": "gamma", "claim": GAMMA_RELATION,
                 "by": "c/2 = ||L_{-2} Omega||^2 = gamma^{-2} <Omega, a_2 a_{-2} Omega>"},
                {"id": "two_point", "claim": "C = ||(a_{-2} - gamma L_{-2}) Omega||^2 = 0",
                 "by": "ray; the difference is null"},
                {"id": "reeh_schlieder", "claim": "Phi - gamma Theta = 0, hence L_m = gamma^{-1} a_m",
                 "by": "axiom: a quasi-primary field with vanishing two-point function is zero"},
                {"id": "contradiction", "claim": "[L_2, L_{-2}] = 4 L_0 + c/2 fails on a_{-2} Omega for every gamma",
                 "by": "constraint mismatch is a nonzero constant in gamma^{-2}"},
            ],
            **base,
        )
    return Certificate(
        variant=NO_OBSTRUCTION,
        witness={"note": "level 2 has at least two independent states; no obstruction from this argument"},
        inferences=[],
        **base,
    )


def _replay_constraint(n: int, rec: Dict[str, Any], psi: FockVector, c_per_t: Fraction) -> Dict[str, Any]:
    # independent route: normal-ordered vacuum expectation values of whole words
    c0 = StructureConstants(n)
    m = rec["m"]
    norm = Fraction(0)
    bracket = Fraction(0)
    for s, a in psi.items():
        for t, b in psi.items():
            ann = tuple(reversed(s))
            cre = tuple(-p for p in t)
            norm += a * b * vacuum_expectation(ann + cre, c0)
            bracket += a * b * (vacuum_expectation(ann + (m, -m) + cre, c0)
                                - vacuum_expectation(ann + (-m, m) + cre, c0))
    N = psi.level
    required = [2 * m * N * norm, virasoro_central_term(m) * c_per_t * norm]
    actual = [Fraction(0), bracket]
    mismatch = [r - a for r, a in zip(required, actual)]
    return {
        "m": m,
        "mp": -m,
        "witness_state": _state_witness(psi),
        "witness_level": N,
        "witness_norm": format_scalar(norm),
        "required": _fmt_poly(required),
        "actual": _fmt_poly(actual),
        "mismatch": _fmt_poly(mismatch),
        "gamma_independent": mismatch[1] == 0,
        "violated": any(mismatch),
    }


def _expect(name: str, recorded, recomputed):
    if recorded != recomputed:
        raise CertificateMismatch(name, recorded, recomputed)


def check_certificate(cert: Certificate | dict) -> None:
    """Replay every recorded quantity; raise :class:`CertificateMismatch` on the first disagreement.

    Gram entries and brackets are recomputed by normal ordering full words,
    not by the state-space route used to produce the certificate.
    """
    if isinstance(cert, dict):
        cert = Certificate.from_dict(cert)
    n = cert.n
    c0 = StructureConstants(n)
    basis = [tuple(s) for s in cert.level2_basis]
    _expect("level2.basis", basis, [(2,), (1, 1)])
    gram = []
    for s in basis:
        row = []
        for t in basis:
            row.append(vacuum_expectation(tuple(reversed(s)) + tuple(-p for p in t), c0))
        gram.append(row)
    _expect("level2.gram", cert.level2_gram, [[format_scalar(x) for x in r] for r in gram])
    rank = bareiss_rank(gram)
    _expect("level2.rank", cert.level2_rank, rank)
    _expect("d2", cert.d2, rank)
    expected_variant = {0: NULL_LEVEL_TWO, 1: UNIQUE_CANDIDATE}.get(rank, NO_OBSTRUCTION)
    _expect("variant", cert.variant, expected_variant)
    w = cert.witness
    if cert.variant == NULL_LEVEL_TWO:
        k2 = virasoro_central_term(2)
        _expect("witness.central_coefficient_m2", w.get("central_coefficient_m2"), format_scalar(k2))
        max_norm = max(max(r) for r in gram)
        _expect("witness.max_level2_norm", w.get("max_level2_norm"), format_scalar(max_norm))
        _expect("witness.c", w.get("c"), format_scalar(2 * max_norm))
        ids = [node.get("id") for node in cert.inferences]
        _expect("inferences", ids, ["null", "c_value", "c_positive", "vanish"])
    elif cert.variant == UNIQUE_CANDIDATE:
        k2 = virasoro_central_term(2)
        vac = vacuum_expectation((2, -2), c0)
        c_per_t = vac / k2
        _expect("witness.effective_ray", w.get("effective_ray"), [2])
        _expect("witness.vacuum_pairing_a2_am2", w.get("vacuum_pairing_a2_am2"), format_scalar(vac))
        _expect("witness.central_coefficient_m2", w.get("central_coefficient_m2"), format_scalar(k2))
        _expect("witness.c_in_gamma_inv_sq", w.get("c_in_gamma_inv_sq"), _fmt_poly([Fraction(0), c_per_t]))
        _expect("witness.c_times_gamma_sq", w.get("c_times_gamma_sq"), format_scalar(c_per_t))
        _expect("witness.relation", w.get("relation"), f"c|γ|^2 = {format_scalar(c_per_t)}")
        _expect("witness.two_point_constant", w.get("two_point_constant"), ["0", "0"])
        scale = Fraction(w.get("witness_scale", "1"))
        psi = FockVector.basis((2,)) * scale
        _expect("witness.witness_state", w.get("witness_state"), _state_witness(psi))
        primary = _replay_constraint(n, w["constraint"], psi, c_per_t)
        _expect("witness.constraint", w.get("constraint"), primary)
        _expect("witness.gap", w.get("gap"), primary["mismatch"][0])
        if not (primary["violated"] and primary["gamma_independent"]):
            raise CertificateMismatch("witness.constraint", "violated for all gamma", primary)
        for i, rec in enumerate(w.get("sweep", [])):
            state = _state_from_witness(rec["witness_state"])
            _expect(f"witness.sweep[{i}]", rec, _replay_constraint(n, rec, state, c_per_t))
    else:
        if rank < 2:
            raise CertificateMismatch("variant", cert.variant, expected_variant)


def verify_certificate(cert: Certificate | dict) -> bool:
    try:
        check_certificate(cert)
    except (CertificateMismatch, KeyError, TypeError, ValueError):
        return False
    return True
