"""Groth16 over BN128: per-circuit trusted setup, proving, verification.

The proving key keeps the constraint system alongside the encrypted
evaluations (the prover needs the matrices to build the quotient
polynomial), and both keys carry a digest of the constraint list so a
key/circuit mismatch fails loudly instead of producing unverifiable
proofs. Setup randomness — the toxic scalars — lives only in locals here
and is never persisted.

Public statement convention: nine field elements in the normative order
[t, th_safe, th_qed, th_sas, th_lip, th_sim, result, commitment, nullifier],
prefixed internally by the constant-1 wire.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from random import SystemRandom
from typing import Optional

from gmpy2 import invert, mpz

from . import bn254 as curve
from .bn254 import R
from .circuit import CircuitLayout, Witness
from .errors import DecodeError, ProverError, SetupError
from .field import FIELD_MODULUS, FieldElement
from .r1cs import Constraint, ConstraintSystem, Stage

_PRIME = FIELD_MODULUS


# ---------------------------------------------------------------------------
# FFT over the scalar field
# ---------------------------------------------------------------------------

def _field_generator() -> int:
    for g in (5, 7, 10, 11, 13):
        if pow(g, (_PRIME - 1) // 2, _PRIME) == _PRIME - 1:
            return g
    raise SetupError("no small quadratic non-residue found")


_GEN = _field_generator()


def _root_of_unity(n: int) -> int:
    if (_PRIME - 1) % n:
        raise SetupError(f"no subgroup of order {n}")
    root = pow(_GEN, (_PRIME - 1) // n, _PRIME)
    assert pow(root, n // 2, _PRIME) == _PRIME - 1
    return root


def _fft(values, root):
    n = len(values)
    a = list(values)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    length = 2
    while length <= n:
        w_step = pow(root, n // length, _PRIME)
        half = length >> 1
        for start in range(0, n, length):
            w = 1
            for k in range(start, start + half):
                u = a[k]
                t = a[k + half] * w % _PRIME
                a[k] = (u + t) % _PRIME
                a[k + half] = (u - t) % _PRIME
                w = w * w_step % _PRIME
        length <<= 1
    return a


def _ifft(values, root):
    n = len(values)
    inv_root = int(invert(mpz(root), mpz(_PRIME)))
    out = _fft(values, inv_root)
    inv_n = int(invert(mpz(n), mpz(_PRIME)))
    return [v * inv_n % _PRIME for v in out]


# ---------------------------------------------------------------------------
# Key material
# ---------------------------------------------------------------------------

def _circuit_digest(cs: ConstraintSystem) -> str:
    h = hashlib.sha256()
    h.update(f"{cs.num_wires}:{cs.num_public}".encode())
    for con in cs.constraints:
        for side in (con.a, con.b, con.c):
            for wire in sorted(side):
                h.update(f"{wire}:{side[wire]};".encode())
        h.update(con.tag.encode() + b"|")
    return h.hexdigest()


@dataclass
class ProvingKey:
    alpha_1: tuple
    beta_1: tuple
    beta_2: tuple
    delta_1: tuple
    delta_2: tuple
    a_query: list      # [u_i(tau)]_1 per wire
    b1_query: list     # [v_i(tau)]_1 per wire
    b2_query: list     # [v_i(tau)]_2 per wire
    l_query: list      # [(beta*u_i + alpha*v_i + w_i)/delta]_1, witness wires
    h_query: list      # [tau^k Z(tau)/delta]_1, k = 0..N-2
    domain_size: int
    constraint_system: ConstraintSystem
    circuit_digest: str


@dataclass
class VerifyingKey:
    alpha_1: tuple
    beta_2: tuple
    gamma_2: tuple
    delta_2: tuple
    ic: list           # [(beta*u_i + alpha*v_i + w_i)/gamma]_1, statement wires
    circuit_digest: str
    _alpha_beta: Optional[tuple] = None

    @property
    def num_public_values(self) -> int:
        return len(self.ic) - 1

    def alpha_beta(self) -> tuple:
        if self._alpha_beta is None:
            self._alpha_beta = curve.pairing(self.alpha_1, self.beta_2)
        return self._alpha_beta


@dataclass(frozen=True)
class Proof:
    a: tuple  # G1 affine
    b: tuple  # G2 affine
    c: tuple  # G1 affine


def setup(cs: ConstraintSystem, rng=None) -> tuple:
    """One-time trusted setup for a finalized constraint system."""
    rng = rng or SystemRandom()
    n_constraints = len(cs.constraints)
    if n_constraints == 0:
        raise SetupError("cannot set up an empty constraint system")
    domain = 1 << (n_constraints - 1).bit_length()
    root = _root_of_unity(domain)

    tau = rng.randrange(1, _PRIME)
    while pow(tau, domain, _PRIME) == 1:
        tau = rng.randrange(1, _PRIME)
    alpha = rng.randrange(1, _PRIME)
    beta = rng.randrange(1, _PRIME)
    gamma = rng.randrange(1, _PRIME)
    delta = rng.randrange(1, _PRIME)

    # Lagrange basis at tau: L_j(tau) = w^j (tau^N - 1) / (N (tau - w^j)).
    z_tau = (pow(tau, domain, _PRIME) - 1) % _PRIME
    scale = z_tau * int(invert(mpz(domain), mpz(_PRIME))) % _PRIME
    omega_pows = [1] * domain
    for j in range(1, domain):
        omega_pows[j] = omega_pows[j - 1] * root % _PRIME
    lagrange = [
        w_j * scale % _PRIME * int(invert(mpz((tau - w_j) % _PRIME), mpz(_PRIME))) % _PRIME
        for w_j in omega_pows
    ]

    m = cs.num_wires
    u_tau = [0] * m
    v_tau = [0] * m
    w_tau = [0] * m
    for j, con in enumerate(cs.constraints):
        l_j = lagrange[j]
        for wire, coeff in con.a.items():
            u_tau[wire] = (u_tau[wire] + coeff * l_j) % _PRIME
        for wire, coeff in con.b.items():
            v_tau[wire] = (v_tau[wire] + coeff * l_j) % _PRIME
        for wire, coeff in con.c.items():
            w_tau[wire] = (w_tau[wire] + coeff * l_j) % _PRIME

    gamma_inv = int(invert(mpz(gamma), mpz(_PRIME)))
    delta_inv = int(invert(mpz(delta), mpz(_PRIME)))

    def combined(i):
        return (beta * u_tau[i] + alpha * v_tau[i] + w_tau[i]) % _PRIME

    g1 = lambda k: curve.g1_to_affine(curve.g1_mult_gen(k))
    g2 = lambda k: curve.g2_to_affine(curve.g2_mult_gen(k))

    a_query = [g1(u_tau[i]) for i in range(m)]
    b1_query = [g1(v_tau[i]) for i in range(m)]
    b2_query = [g2(v_tau[i]) for i in range(m)]
    ic = [g1(combined(i) * gamma_inv % _PRIME) for i in range(cs.num_public)]
    l_query = [g1(combined(i) * delta_inv % _PRIME) for i in range(cs.num_public, m)]
    zd = z_tau * delta_inv % _PRIME
    tau_k = 1
    h_query = []
    for _ in range(domain - 1):
        h_query.append(g1(tau_k * zd % _PRIME))
        tau_k = tau_k * tau % _PRIME

    digest = _circuit_digest(cs)
    pk = ProvingKey(
        alpha_1=g1(alpha),
        beta_1=g1(beta),
        beta_2=g2(beta),
        delta_1=g1(delta),
        delta_2=g2(delta),
        a_query=a_query,
        b1_query=b1_query,
        b2_query=b2_query,
        l_query=l_query,
        h_query=h_query,
        domain_size=domain,
        constraint_system=cs,
        circuit_digest=digest,
    )
    vk = VerifyingKey(
        alpha_1=pk.alpha_1,
        beta_2=pk.beta_2,
        gamma_2=g2(gamma),
        delta_2=pk.delta_2,
        ic=ic,
        circuit_digest=digest,
    )
    return pk, vk


# ---------------------------------------------------------------------------
# Proving
# ---------------------------------------------------------------------------

def prove(pk: ProvingKey, witness: Witness, rng=None) -> Proof:
    """Produce a randomized proof for a satisfying witness.

    Raises ProverError when the witness does not satisfy the key's
    constraint system — a tampered witness must fail here, not emit a
    proof that quietly fails verification.
    """
    rng = rng or SystemRandom()
    cs = pk.constraint_system
    values = witness.values
    if len(values) != cs.num_wires:
        raise ProverError(f"witness has {len(values)} wires, circuit has {cs.num_wires}")

    n = pk.domain_size
    aw = [0] * n
    bw = [0] * n
    cw = [0] * n
    for j, con in enumerate(cs.constraints):
        a = cs.eval_lc(con.a, values)
        b = cs.eval_lc(con.b, values)
        c = cs.eval_lc(con.c, values)
        if a * b % _PRIME != c:
            raise ProverError(f"witness does not satisfy constraint {j} ({con.tag})")
        aw[j], bw[j], cw[j] = a, b, c

    root = _root_of_unity(n)
    a_coeffs = _ifft(aw, root)
    b_coeffs = _ifft(bw, root)
    c_coeffs = _ifft(cw, root)

    # Quotient h = (A*B - C)/Z on a multiplicative coset, where Z is constant.
    shift = _GEN
    z_coset = (pow(shift, n, _PRIME) - 1) % _PRIME
    z_inv = int(invert(mpz(z_coset), mpz(_PRIME)))
    shift_pows = [1] * n
    for k in range(1, n):
        shift_pows[k] = shift_pows[k - 1] * shift % _PRIME
    a_c = _fft([c * s % _PRIME for c, s in zip(a_coeffs, shift_pows)], root)
    b_c = _fft([c * s % _PRIME for c, s in zip(b_coeffs, shift_pows)], root)
    c_c = _fft([c * s % _PRIME for c, s in zip(c_coeffs, shift_pows)], root)
    h_evals = [(x * y - z) % _PRIME * z_inv % _PRIME for x, y, z in zip(a_c, b_c, c_c)]
    h_shifted = _ifft(h_evals, root)
    shift_inv = int(invert(mpz(shift), mpz(_PRIME)))
    inv_pow = 1
    h_coeffs = []
    for coeff in h_shifted:
        h_coeffs.append(coeff * inv_pow % _PRIME)
        inv_pow = inv_pow * shift_inv % _PRIME
    assert h_coeffs[-1] == 0  # degree bound n-2 for a satisfied system

    r_blind = rng.randrange(_PRIME)
    s_blind = rng.randrange(_PRIME)

    a_acc = curve.msm_g1(pk.a_query, values)
    a_acc = curve.g1_add_affine(a_acc, pk.alpha_1)
    a_acc = curve.g1_add(a_acc, curve.g1_scalar_mult(pk.delta_1, r_blind))
    a_affine = curve.g1_to_affine(a_acc)

    b2_acc = curve.msm_g2(pk.b2_query, values)
    b2_acc = curve.g2_add_affine(b2_acc, pk.beta_2)
    b2_acc = curve.g2_add(b2_acc, curve.g2_scalar_mult(pk.delta_2, s_blind))
    b2_affine = curve.g2_to_affine(b2_acc)

    b1_acc = curve.msm_g1(pk.b1_query, values)
    b1_acc = curve.g1_add_affine(b1_acc, pk.beta_1)
    b1_acc = curve.g1_add(b1_acc, curve.g1_scalar_mult(pk.delta_1, s_blind))

    c_acc = curve.msm_g1(pk.l_query, values[cs.num_public:])
    c_acc = curve.g1_add(c_acc, curve.msm_g1(pk.h_query, h_coeffs[: n - 1]))
    c_acc = curve.g1_add(c_acc, curve.g1_scalar_mult(a_affine, s_blind))
    c_acc = curve.g1_add(c_acc, curve.g1_scalar_mult(curve.g1_to_affine(b1_acc), r_blind))
    c_acc = curve.g1_add(
        c_acc, curve.g1_neg(curve.g1_scalar_mult(pk.delta_1, r_blind * s_blind % _PRIME))
    )

    return Proof(a=a_affine, b=b2_affine, c=curve.g1_to_affine(c_acc))


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _check_proof_points(proof: Proof):
    for name, pt in (("a", proof.a), ("c", proof.c)):
        if pt is None or not curve.g1_is_on_curve(pt):
            raise DecodeError(f"proof element {name} is not a valid G1 point")
    if proof.b is None or not curve.g2_is_in_subgroup(proof.b):
        raise DecodeError("proof element b is not a valid G2 point")


def verify(vk: VerifyingKey, public_values, proof: Proof) -> bool:
    """Pairing check for the given statement; True iff the proof is valid.

    Malformed group elements or a wrong statement arity raise DecodeError,
    which is distinct from a clean False.
    """
    if len(public_values) != vk.num_public_values:
        raise DecodeError(
            f"expected {vk.num_public_values} public values, got {len(public_values)}"
        )
    values = []
    for v in public_values:
        v = int(v)
        if not 0 <= v < _PRIME:
            raise DecodeError(f"public value {v} outside the scalar field")
        values.append(v)
    _check_proof_points(proof)

    ic_acc = curve.g1_from_affine(vk.ic[0])
    ic_acc = curve.g1_add(ic_acc, curve.msm_g1(vk.ic[1:], values))
    ic_affine = curve.g1_to_affine(ic_acc)

    def neg_affine(pt):
        return None if pt is None else (pt[0], (-pt[1]) % curve.P)

    lhs = curve.multi_pairing(
        [
            (proof.a, proof.b),
            (neg_affine(ic_affine), vk.gamma_2),
            (neg_affine(proof.c), vk.delta_2),
        ]
    )
    return lhs == vk.alpha_beta()


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _fe_hex(value: int) -> str:
    return "0x" + int(value).to_bytes(32, "big").hex()


def _fe_unhex(text: str, modulus) -> mpz:
    if not isinstance(text, str) or not text.startswith("0x") or len(text) != 66:
        raise DecodeError(f"bad field element encoding {text!r}")
    try:
        value = int(text, 16)
    except ValueError:
        raise DecodeError(f"invalid hex in {text!r}") from None
    if value >= modulus:
        raise DecodeError("encoded value exceeds the field modulus")
    return mpz(value)


def _g1_json(pt) -> Optional[dict]:
    if pt is None:
        return None
    return {"x": _fe_hex(pt[0]), "y": _fe_hex(pt[1])}


def _g1_unjson(data) -> Optional[tuple]:
    if data is None:
        return None
    try:
        pt = (_fe_unhex(data["x"], curve.P), _fe_unhex(data["y"], curve.P))
    except (KeyError, TypeError) as exc:
        raise DecodeError(f"malformed G1 point: {exc}") from None
    if not curve.g1_is_on_curve(pt):
        raise DecodeError("G1 point not on curve")
    return pt


def _g2_json(pt) -> Optional[dict]:
    if pt is None:
        return None
    (x0, x1), (y0, y1) = pt
    return {"x": [_fe_hex(x0), _fe_hex(x1)], "y": [_fe_hex(y0), _fe_hex(y1)]}


def _g2_unjson(data, subgroup_check=True) -> Optional[tuple]:
    if data is None:
        return None
    try:
        pt = (
            (_fe_unhex(data["x"][0], curve.P), _fe_unhex(data["x"][1], curve.P)),
            (_fe_unhex(data["y"][0], curve.P), _fe_unhex(data["y"][1], curve.P)),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise DecodeError(f"malformed G2 point: {exc}") from None
    ok = curve.g2_is_in_subgroup(pt) if subgroup_check else curve.g2_is_on_curve(pt)
    if not ok:
        raise DecodeError("G2 point not on curve or outside the prime-order subgroup")
    return pt


def proof_to_json_dict(proof: Proof) -> dict:
    return {"a": _g1_json(proof.a), "b": _g2_json(proof.b), "c": _g1_json(proof.c)}


def proof_from_json_dict(data: dict) -> Proof:
    if not isinstance(data, dict):
        raise DecodeError("proof must be a JSON object")
    return Proof(
        a=_g1_unjson(data.get("a")),
        b=_g2_unjson(data.get("b")),
        c=_g1_unjson(data.get("c")),
    )


def vk_to_json_dict(vk: VerifyingKey) -> dict:
    return {
        "protocol": "groth16",
        "curve": "bn128",
        "alpha_1": _g1_json(vk.alpha_1),
        "beta_2": _g2_json(vk.beta_2),
        "gamma_2": _g2_json(vk.gamma_2),
        "delta_2": _g2_json(vk.delta_2),
        "ic": [_g1_json(pt) for pt in vk.ic],
        "circuit_digest": vk.circuit_digest,
    }


def vk_from_json_dict(data: dict) -> VerifyingKey:
    try:
        return VerifyingKey(
            alpha_1=_g1_unjson(data["alpha_1"]),
            beta_2=_g2_unjson(data["beta_2"]),
            gamma_2=_g2_unjson(data["gamma_2"]),
            delta_2=_g2_unjson(data["delta_2"]),
            ic=[_g1_unjson(pt) for pt in data["ic"]],
            circuit_digest=str(data.get("circuit_digest", "")),
        )
    except KeyError as exc:
        raise DecodeError(f"verifying key missing field {exc}") from None


def _cs_to_json_dict(cs: ConstraintSystem) -> dict:
    def lc_json(item):
        return {str(w): str(c) for w, c in item.items()}

    layout = cs.layout
    return {
        "num_wires": cs.num_wires,
        "num_public": cs.num_public,
        "constraints": [
            [lc_json(con.a), lc_json(con.b), lc_json(con.c), con.tag] for con in cs.constraints
        ],
        "stages": [[s.name, s.tag, s.nonlinear, list(s.deps)] for s in cs.stages],
        "layout": {
            "range_bits": layout.range_bits,
            "cmp_bits": layout.cmp_bits,
            "eq_safe_inv": layout.eq_safe_inv,
            "eq_safe_out": layout.eq_safe_out,
            "mux_prod": layout.mux_prod,
            "and_wires": layout.and_wires,
            "commit_sboxes": layout.commit_sboxes,
            "null_sboxes": layout.null_sboxes,
        }
        if layout
        else None,
    }


def _cs_from_json_dict(data: dict) -> ConstraintSystem:
    def lc_unjson(item):
        return {int(w): int(c) for w, c in item.items()}

    constraints = [
        Constraint(lc_unjson(a), lc_unjson(b), lc_unjson(c), tag)
        for a, b, c, tag in data["constraints"]
    ]
    stages = [Stage(name, tag, bool(nl), tuple(deps)) for name, tag, nl, deps in data["stages"]]
    layout = None
    if data.get("layout"):
        ld = data["layout"]
        layout = CircuitLayout(
            range_bits={k: list(v) for k, v in ld["range_bits"].items()},
            cmp_bits={k: list(v) for k, v in ld["cmp_bits"].items()},
            eq_safe_inv=ld["eq_safe_inv"],
            eq_safe_out=ld["eq_safe_out"],
            mux_prod=ld["mux_prod"],
            and_wires=list(ld["and_wires"]),
            commit_sboxes=[tuple(t) for t in ld["commit_sboxes"]],
            null_sboxes=[tuple(t) for t in ld["null_sboxes"]],
        )
    return ConstraintSystem(
        num_wires=data["num_wires"],
        num_public=data["num_public"],
        constraints=constraints,
        stages=stages,
        layout=layout,
    )


def pk_to_json_dict(pk: ProvingKey) -> dict:
    return {
        "protocol": "groth16",
        "curve": "bn128",
        "alpha_1": _g1_json(pk.alpha_1),
        "beta_1": _g1_json(pk.beta_1),
        "beta_2": _g2_json(pk.beta_2),
        "delta_1": _g1_json(pk.delta_1),
        "delta_2": _g2_json(pk.delta_2),
        "a_query": [_g1_json(pt) for pt in pk.a_query],
        "b1_query": [_g1_json(pt) for pt in pk.b1_query],
        "b2_query": [_g2_json(pt) for pt in pk.b2_query],
        "l_query": [_g1_json(pt) for pt in pk.l_query],
        "h_query": [_g1_json(pt) for pt in pk.h_query],
        "domain_size": pk.domain_size,
        "constraint_system": _cs_to_json_dict(pk.constraint_system),
        "circuit_digest": pk.circuit_digest,
    }


def pk_from_json_dict(data: dict) -> ProvingKey:
    try:
        cs = _cs_from_json_dict(data["constraint_system"])
        return ProvingKey(
            alpha_1=_g1_unjson(data["alpha_1"]),
            beta_1=_g1_unjson(data["beta_1"]),
            beta_2=_g2_unjson(data["beta_2"]),
            delta_1=_g1_unjson(data["delta_1"]),
            delta_2=_g2_unjson(data["delta_2"]),
            a_query=[_g1_unjson(pt) for pt in data["a_query"]],
            b1_query=[_g1_unjson(pt) for pt in data["b1_query"]],
            # The b2 query is large; on-curve is checked, the full subgroup
            # check is skipped for load speed (proofs made from a doctored
            # key simply fail to verify).
            b2_query=[_g2_unjson(pt, subgroup_check=False) for pt in data["b2_query"]],
            l_query=[_g1_unjson(pt) for pt in data["l_query"]],
            h_query=[_g1_unjson(pt) for pt in data["h_query"]],
            domain_size=int(data["domain_size"]),
            constraint_system=cs,
            circuit_digest=str(data.get("circuit_digest", "")),
        )
    except KeyError as exc:
        raise DecodeError(f"proving key missing field {exc}") from None


def save_json(obj: dict, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh)


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise DecodeError(f"{path}: invalid JSON: {exc}") from None


# ---------------------------------------------------------------------------
# Proof bundles
# ---------------------------------------------------------------------------

RESULT_SLOT = 6  # index of verification_result within the public values


@dataclass
class ProofBundle:
    """Everything a verifier needs for one molecule, JSON-serializable."""

    proof: Proof
    public_values: list  # 9 FieldElements, normative order
    molecule_id: str
    task_id: str

    def __post_init__(self):
        if len(self.public_values) != 9:
            raise DecodeError(f"bundle needs 9 public values, got {len(self.public_values)}")

    @property
    def verification_result(self) -> int:
        return int(self.public_values[RESULT_SLOT])

    @property
    def commitment(self) -> FieldElement:
        return FieldElement(int(self.public_values[RESULT_SLOT + 1]))

    @property
    def nullifier(self) -> FieldElement:
        return FieldElement(int(self.public_values[RESULT_SLOT + 2]))

    def to_json_dict(self) -> dict:
        return {
            "molecule_id": self.molecule_id,
            "task_id": self.task_id,
            "public_values": [FieldElement(int(v)).to_hex() for v in self.public_values],
            "proof": proof_to_json_dict(self.proof),
            "protocol": "groth16",
            "curve": "bn128",
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ProofBundle":
        if not isinstance(data, dict):
            raise DecodeError("bundle must be a JSON object")
        if data.get("protocol", "groth16") != "groth16" or data.get("curve", "bn128") != "bn128":
            raise DecodeError("unsupported protocol or curve in bundle")
        try:
            publics = [FieldElement.from_hex(v) for v in data["public_values"]]
            proof = proof_from_json_dict(data["proof"])
            return cls(
                proof=proof,
                public_values=publics,
                molecule_id=str(data["molecule_id"]),
                task_id=str(data["task_id"]),
            )
        except KeyError as exc:
            raise DecodeError(f"bundle missing field {exc}") from None
