"""Axiom-by-axiom verification suites over a concrete system.

Each suite turns the structural requirements of one axiom into residual
checks against the assembled reference system and reports the worst
residual per check.  All randomness is drawn from one seeded generator so
reports are byte-identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import composition, internal_symmetry, measurement
from .config import RunConfig
from .dynamics import evolve, propagator_const, propagator_td, unitarity_defect
from .linalg import (
    Operator,
    expectation,
    herm_defect,
    ket_projector,
    operator_norm,
    spectral,
    validate_density,
)
from .sampling import random_density, random_hermitian
from .space import check_covariance, pauli_hamiltonian, spin_rotation, translation_unitary
from .system import SystemDescriptor, example_system

__all__ = ["Check", "run_verify"]


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "passed": self.passed,
        }


def _norm(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat, 2))


def _axiom_hilbert(sys: SystemDescriptor, cfg: RunConfig, rng) -> list[Check]:
    tol = cfg.tolerances
    checks = [
        Check("state trace", abs(sys.state.op.trace().real - 1.0), tol.trace),
        Check("state hermiticity", herm_defect(sys.state.op), tol.herm),
        Check(
            "state positivity",
            max(0.0, -float(np.linalg.eigvalsh(sys.state.mat).min())),
            tol.psd,
        ),
    ]
    worst_complete = worst_orth = worst_recon = 0.0
    targets = [sys.hamiltonian] + [random_hermitian(rng, int(d)) for d in rng.integers(2, 17, size=20)]
    for target in targets:
        dec = spectral(target, tol)
        eye = np.eye(target.dim)
        total = sum(p.mat for p in dec.projectors)
        worst_complete = max(worst_complete, _norm(total - eye))
        for i, pi in enumerate(dec.projectors):
            for k, pk in enumerate(dec.projectors):
                delta = pi.mat if i == k else 0.0
                worst_orth = max(worst_orth, _norm(pi.mat @ pk.mat - delta))
        worst_recon = max(worst_recon, _norm(dec.reconstruct().mat - target.mat))
    checks.append(Check("spectral completeness", worst_complete, tol.herm))
    checks.append(Check("spectral orthogonality", worst_orth, tol.herm))
    checks.append(Check("spectral reconstruction", worst_recon, tol.recon))

    worst_lin = 0.0
    worst_range = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 9))
        rho = random_density(rng, dim)
        a = random_hermitian(rng, dim)
        b = random_hermitian(rng, dim)
        alpha, beta = rng.normal(size=2)
        combined = expectation(rho, Operator(alpha * a.mat + beta * b.mat))
        split = alpha * expectation(rho, a) + beta * expectation(rho, b)
        worst_lin = max(worst_lin, abs(combined - split))
        proj = spectral(a).projectors[0]
        val = expectation(rho, proj)
        worst_range = max(worst_range, max(0.0, -val, val - 1.0))
    checks.append(Check("expectation linearity", worst_lin, 1e-12))
    checks.append(Check("projector expectation range", worst_range, tol.psd))
    return checks


def _axiom_measurement(sys: SystemDescriptor, cfg: RunConfig, rng) -> list[Check]:
    tol = cfg.tolerances
    eye = np.eye(sys.povm.dim)
    completeness = _norm(sum(e.mat for e in sys.povm.effects) - eye)
    checks = [Check("povm completeness", completeness, tol.herm)]

    probs = []
    worst_pos = 0.0
    worst_contract = 0.0
    for label in sys.instrument.space.labels:
        out = np.zeros_like(sys.state.mat)
        for k in sys.instrument.kraus(label):
            out = out + k.mat @ sys.state.mat @ k.mat.conj().T
        p = float(np.trace(out).real)
        probs.append(p)
        worst_pos = max(worst_pos, max(0.0, -float(np.linalg.eigvalsh((out + out.conj().T) / 2).min())))
        worst_contract = max(worst_contract, max(0.0, p - 1.0))
    checks.append(Check("instrument completeness", abs(sum(probs) - 1.0), tol.trace))
    checks.append(Check("outcome-map positivity", worst_pos, tol.psd))
    checks.append(Check("trace contractivity", worst_contract, tol.trace))

    projective = all(
        operator_norm(e @ e - e) <= tol.recon for e in sys.povm.effects
    )
    if projective:
        worst_repeat = 0.0
        for label in sys.instrument.space.labels:
            p1, post = measurement.apply(sys.instrument, label, sys.state, tol)
            if post is None or p1 < 0.01:
                continue
            p2, post2 = measurement.apply(sys.instrument, label, post, tol)
            worst_repeat = max(worst_repeat, abs(p2 - 1.0), _norm(post2.mat - post.mat))
        checks.append(Check("projective repeatability", worst_repeat, 1e-10))
    return checks


def _axiom_time(sys: SystemDescriptor, cfg: RunConfig, rng) -> list[Check]:
    tol = cfg.tolerances
    ham = sys.hamiltonian
    prop = propagator_const(ham, 0.7)
    checks = [Check("propagator unitarity (constant H)", unitarity_defect(prop.u), tol.unitary)]

    drive = Operator(np.kron([[0.0, 1.0], [1.0, 0.0]], np.eye(sys.lattice.size)))

    def sample(t: float) -> Operator:
        return Operator(ham.mat + math.sin(t) * drive.mat)

    stepped = propagator_td(sample, 0.0, 1.0, 40)
    checks.append(Check("propagator unitarity (stepped)", unitarity_defect(stepped.u), tol.unitary))

    u_s = propagator_const(ham, 0.3)
    u_t = propagator_const(ham, 0.4)
    u_sum = propagator_const(ham, 0.7)
    checks.append(Check("group law", _norm(u_s.u.mat @ u_t.u.mat - u_sum.u.mat), tol.unitary))

    before = expectation(sys.state, ham)
    after = expectation(evolve(sys.state, prop, tol), ham)
    checks.append(Check("energy conservation", abs(before - after), tol.unitary))

    const_as_td = propagator_td(lambda t: ham, 0.0, 0.7, 7)
    checks.append(Check("stepped matches constant", _norm(const_as_td.u.mat - prop.u.mat), 1e-10))
    return checks


def _axiom_space(sys: SystemDescriptor, cfg: RunConfig, rng) -> list[Check]:
    lat = sys.lattice
    worst_group = 0.0
    shifts = [lat.coords(int(s)) for s in rng.integers(0, lat.size, size=12)]
    for a in shifts:
        for b in shifts:
            ua = translation_unitary(lat, a).mat
            ub = translation_unitary(lat, b).mat
            uab = translation_unitary(lat, tuple(x + y for x, y in zip(a, b))).mat
            worst_group = max(worst_group, float(np.abs(ua @ ub - uab).max()))
    checks = [Check("translation group law", worst_group, 0.0)]

    failures = 0
    for _ in range(100):
        a = lat.coords(int(rng.integers(0, lat.size)))
        region = [int(s) for s in rng.integers(0, lat.size, size=int(rng.integers(0, lat.size)))]
        if not check_covariance(lat, a, region):
            failures += 1
    checks.append(Check("translation covariance", float(failures), 0.0))

    rep = sys.spin
    comm = max(
        _norm(rep.jx.mat @ rep.jy.mat - rep.jy.mat @ rep.jx.mat - 1j * rep.jz.mat),
        _norm(rep.jy.mat @ rep.jz.mat - rep.jz.mat @ rep.jy.mat - 1j * rep.jx.mat),
        _norm(rep.jz.mat @ rep.jx.mat - rep.jx.mat @ rep.jz.mat - 1j * rep.jy.mat),
    )
    checks.append(Check("su(2) commutators", comm, 1e-12))
    casimir = rep.jx.mat @ rep.jx.mat + rep.jy.mat @ rep.jy.mat + rep.jz.mat @ rep.jz.mat
    checks.append(
        Check("su(2) casimir", _norm(casimir - rep.j * (rep.j + 1) * np.eye(rep.dim)), 1e-12)
    )
    full_turn = spin_rotation(rep, (0.0, 0.0, 1.0), 2.0 * math.pi)
    checks.append(Check("double cover", _norm(full_turn.mat + np.eye(rep.dim)), 1e-12))

    free = pauli_hamiltonian(lat, cfg.evolve.mass, (0.0, 0.0, 0.0), cfg.evolve.mu)
    worst_commute = 0.0
    for axis in range(lat.d):
        step = [0] * lat.d
        step[axis] = 1
        lifted = np.kron(np.eye(2), translation_unitary(lat, step).mat)
        worst_commute = max(worst_commute, _norm(free.mat @ lifted - lifted @ free.mat))
    checks.append(Check("kinetic translation invariance", worst_commute, 1e-12))
    return checks


def _axiom_composite(sys: SystemDescriptor, cfg: RunConfig, rng) -> list[Check]:
    worst_trace = worst_mixed = 0.0
    for _ in range(10):
        da, db = (int(x) for x in rng.integers(2, 6, size=2))
        a, b = random_hermitian(rng, da), random_hermitian(rng, db)
        c, d = random_hermitian(rng, da), random_hermitian(rng, db)
        prod = composition.tensor(a, b)
        worst_trace = max(
            worst_trace, abs(prod.trace() - a.trace() * b.trace())
        )
        worst_mixed = max(
            worst_mixed,
            _norm((prod @ composition.tensor(c, d)).mat - composition.tensor(a @ c, b @ d).mat),
        )
    checks = [
        Check("tensor trace multiplicativity", worst_trace, 1e-10),
        Check("tensor mixed product", worst_mixed, 1e-10),
    ]

    worst_recover = 0.0
    for _ in range(5):
        da, db = (int(x) for x in rng.integers(2, 5, size=2))
        rho1, rho2 = random_density(rng, da), random_density(rng, db)
        joint = validate_density(Operator(np.kron(rho1.mat, rho2.mat)))
        space = composition.CompositeSpace((da, db))
        back = composition.partial_trace(joint, space, 0)
        worst_recover = max(worst_recover, _norm(back.mat - rho1.mat))
    checks.append(Check("partial trace recovery", worst_recover, 1e-12))

    marginal = composition.partial_trace(
        sys.state, composition.CompositeSpace((2, sys.lattice.size)), 0, cfg.tolerances
    )
    checks.append(Check("system spin marginal trace", abs(marginal.op.trace().real - 1.0), cfg.tolerances.trace))

    singlet_vec = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)
    singlet = validate_density(ket_projector(singlet_vec))
    part = composition.partial_trace(singlet, composition.CompositeSpace((2, 2)), 1)
    checks.append(Check("singlet marginal", _norm(part.mat - np.eye(2) / 2.0), 1e-12))
    return checks


def _exchange_table() -> list[tuple[int, int]]:
    # Explicit N! sums hold up to N = 6 at desk scale.
    out = []
    for n in range(2, 7):
        d = 2
        while d**n <= composition.SIZE_GUARD:
            out.append((n, d))
            d += 1
    return out


def _axiom_exchange(sys: SystemDescriptor, cfg: RunConfig, rng) -> list[Check]:
    worst_rank = 0
    for n, d in _exchange_table():
        sym_rank = composition.projector_rank(composition.symmetrizer(n, d))
        anti_rank = composition.projector_rank(composition.antisymmetrizer(n, d))
        worst_rank = max(
            worst_rank,
            abs(sym_rank - math.comb(d + n - 1, n)),
            abs(anti_rank - math.comb(d, n)),
        )
    checks = [Check("exchange projector ranks", float(worst_rank), 0.0)]

    worst_alg = worst_twist = 0.0
    for n, d in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)]:
        sym = composition.symmetrizer(n, d)
        anti = composition.antisymmetrizer(n, d)
        worst_alg = max(
            worst_alg,
            _norm((sym @ sym).mat - sym.mat),
            _norm((anti @ anti).mat - anti.mat),
            herm_defect(sym),
            herm_defect(anti),
            _norm((sym @ anti).mat),
        )
        for i in range(n - 1):
            w = composition.exchange_operator(n, d, i, i + 1)
            worst_twist = max(
                worst_twist,
                _norm((w @ sym).mat - sym.mat),
                _norm((w @ anti).mat + anti.mat),
            )
    checks.append(Check("exchange projector algebra", worst_alg, 1e-12))
    checks.append(Check("transposition intertwining", worst_twist, 1e-12))
    return checks


def _axiom_internal(sys: SystemDescriptor, cfg: RunConfig, rng) -> list[Check]:
    dim = 12
    charge = internal_symmetry.charge_from_values([int(q) for q in rng.integers(-2, 3, size=dim)])
    worst_u1 = 0.0
    for _ in range(8):
        t1, t2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
        u1 = internal_symmetry.u1_unitary(charge, t1)
        u2 = internal_symmetry.u1_unitary(charge, t2)
        u12 = internal_symmetry.u1_unitary(charge, t1 + t2)
        worst_u1 = max(
            worst_u1,
            _norm(u1.mat @ u2.mat - u12.mat),
            _norm(internal_symmetry.u1_unitary(charge, t1 + 2.0 * math.pi).mat - u1.mat),
        )
    checks = [Check("u(1) composition and periodicity", worst_u1, 1e-12)]

    dec = internal_symmetry.sectors(charge)
    total = sum(p.mat for _, p in dec.sectors)
    checks.append(Check("sector completeness", _norm(total - np.eye(dim)), 1e-12))

    mismatches = 0
    taus = np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)
    for trial in range(12):
        if trial % 2 == 0:
            blocks = np.zeros((dim, dim), dtype=complex)
            for _, proj in dec.sectors:
                h = random_hermitian(rng, dim)
                blocks += proj.mat @ h.mat @ proj.mat
            candidate = Operator(blocks)
        else:
            candidate = random_hermitian(rng, dim)
        block_diagonal = internal_symmetry.check_superselection(candidate, dec)
        worst_comm = max(
            float(np.linalg.norm(
                candidate.mat @ internal_symmetry.u1_unitary(charge, float(t)).mat
                - internal_symmetry.u1_unitary(charge, float(t)).mat @ candidate.mat, 2))
            for t in taus
        )
        if block_diagonal != (worst_comm <= 1e-9):
            mismatches += 1
    checks.append(Check("superselection equivalence", float(mismatches), 0.0))

    layout = internal_symmetry.SpaceLayout(2, sys.spin, sys.lattice)
    q_int = internal_symmetry.charge_from_values([0, 1])
    bad = 0
    for tau in rng.uniform(0.0, 2.0 * math.pi, size=10):
        u_int = internal_symmetry.u1_unitary(q_int, float(tau))
        if not internal_symmetry.check_commutes_with_space(u_int, layout):
            bad += 1
    checks.append(Check("commutes with translations and rotations", float(bad), 0.0))
    return checks


_AXIOMS = (
    (1, "hilbert-space", _axiom_hilbert),
    (2, "measurements", _axiom_measurement),
    (3, "time", _axiom_time),
    (4, "space", _axiom_space),
    (5, "composite-systems", _axiom_composite),
    (6, "bose-fermi-alternative", _axiom_exchange),
    (7, "internal-symmetries", _axiom_internal),
)


def run_verify(cfg: RunConfig) -> dict:
    """Run every axiom suite against the reference system; JSON-ready report."""
    rng = np.random.default_rng(cfg.seed)
    sys = example_system(cfg)
    axioms = []
    for number, name, suite in _AXIOMS:
        checks = suite(sys, cfg, rng)
        axioms.append(
            {
                "axiom": number,
                "name": name,
                "passed": all(c.passed for c in checks),
                "max_residual": max(c.residual for c in checks),
                "checks": [c.as_dict() for c in checks],
            }
        )
    return {
        "system": sys.name,
        "seed": cfg.seed,
        "passed": all(a["passed"] for a in axioms),
        "axioms": axioms,
    }
