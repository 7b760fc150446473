"""Desk-scale invariant suites behind `mubkit selftest`.

Each suite returns a list of Check records; a suite passes when every check
does.  Randomized sweeps draw from numpy's Generator seeded explicitly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import gauss, mub, quon, su2ops, wigner
from .errors import Inapplicable, MubkitError, NotPrime

STRICT = 1e-12


@dataclass(frozen=True)
class Check:
    tag: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.tag}: {self.detail}"


def _check(tag: str, worst: float, tol: float) -> Check:
    return Check(tag, bool(worst < tol), f"max residual {worst:.2e} (tol {tol:.0e})")


def _norm(x) -> float:
    return float(np.max(np.abs(x)))


R_VALUES = (0.0, 1.0, 0.37)


def quon_suite(rng: np.random.Generator) -> list[Check]:
    out = []
    worst = 0.0
    for k in range(2, 9):
        for ae in (0.0, 0.5, 1.0):
            for be in (0.0, 0.5, 1.0):
                worst = max(worst, quon.verify_quon_relations(quon.QuonParams(k, ae, be)).max())
    out.append(_check("quon-defining-relations", worst, STRICT))

    worst_h = worst_v = worst_c = worst_t = 0.0
    for k in range(2, 9):
        emb = quon.EpsilonEmbedding.for_k(k)
        space = su2ops.AngularSpace(k - 1)
        j = (k - 1) / 2
        worst_c = max(worst_c, _norm(quon.restrict_to_epsilon(quon.pair_casimir(k), emb) - j * (j + 1) * np.eye(k)))
        for a in range(k):
            for r in R_VALUES:
                h, v = quon.build_h_v_pair_space(k, r, a)
                worst_h = max(worst_h, _norm(quon.restrict_to_epsilon(h, emb) - su2ops.h_matrix(space)))
                worst_v = max(worst_v, _norm(quon.restrict_to_epsilon(v, emb) - su2ops.v_ra_matrix(space, r, a)))
                worst_t = max(worst_t, _norm(v.entries - quon.displayed_v_action(k, r, a)))
    out.append(_check("quon-h-restriction", worst_h, STRICT))
    out.append(_check("quon-v-restriction", worst_v, STRICT))
    out.append(_check("quon-v-action-table", worst_t, STRICT))
    out.append(_check("quon-pair-casimir", worst_c, STRICT))
    return out


def su2_suite(rng: np.random.Generator) -> list[Check]:
    out = []
    cyc = spec = 0.0
    min_gap = math.inf
    for d in range(1, 13):
        space = su2ops.AngularSpace.from_dimension(d)
        for a in range(d):
            for r in R_VALUES:
                v = su2ops.v_ra_matrix(space, r, a)
                phase = np.exp(1j * math.pi * space.two_j * (a + r))
                cyc = max(cyc, _norm(np.linalg.matrix_power(v, d) - phase * np.eye(d)))
                basis = mub.eigenbasis(space, r, a)
                spec = max(spec, mub.eigen_residual(basis))
                if d > 1:
                    ph = np.sort(np.angle(np.linalg.eigvals(v)))
                    gaps = np.diff(np.concatenate([ph, [ph[0] + 2 * math.pi]]))
                    min_gap = min(min_gap, float(gaps.min()))
    out.append(_check("cyclicity", cyc, STRICT))
    out.append(_check("eigen-relation", spec, STRICT))
    out.append(Check("nondegenerate-spectrum", min_gap > 1e-8, f"min phase gap {min_gap:.3e}"))

    comm = indep = cas = 0.0
    for two_j in range(0, 12):
        space = su2ops.AngularSpace(two_j)
        ref = None
        for a in range(two_j + 1):
            for r in R_VALUES:
                jp, jm, jz = su2ops.ladder_operators(space, r, a)
                c1, c2, c3 = jz @ jp - jp @ jz, jz @ jm - jm @ jz, jp @ jm - jm @ jp
                comm = max(comm, _norm(c1 - jp), _norm(c2 + jm), _norm(c3 - 2 * jz))
                c = su2ops.casimir(space, r, a)
                j = two_j / 2
                cas = max(cas, _norm(c - j * (j + 1) * np.eye(space.d)))
                if ref is None:
                    ref = (jz, jp @ jm, jm @ jp)
                else:
                    indep = max(indep, _norm(jz - ref[0]), _norm(jp @ jm - ref[1]), _norm(jm @ jp - ref[2]))
    out.append(_check("su2-commutators", comm, STRICT))
    out.append(_check("casimir", cas, STRICT))
    out.append(_check("commutators-parameter-independent", indep, STRICT))

    w = 0.0
    idx = [su2ops.WIndex(x, y) for x in range(1, 4) for y in range(1, 4)]
    for d in range(2, 6):
        space = su2ops.AngularSpace.from_dimension(d)
        for a in range(d):
            for m, n in itertools.product(idx, repeat=2):
                w = max(w, su2ops.w_commutator_residual(space, 0.0, m, n, a))
    out.append(_check("w-infinity", w, 1e-10))

    orders = {d: su2ops.pauli_group_order(su2ops.AngularSpace.from_dimension(d)) for d in range(2, 6)}
    out.append(Check("pauli-group-order", all(o == d ** 3 for d, o in orders.items()), f"orders {orders}"))

    ok = True
    for two_j in range(1, 7):
        for r, t in [(0, 1), (0, 2), (0.5, 1.5), (0, 0.5), (0.37, 1.37)]:
            try:
                su2ops.vr0_vs0_commute(su2ops.AngularSpace(two_j), r, t)
            except MubkitError:
                ok = False
    out.append(Check("v-commutation-criterion", ok, "criterion matches matrix commutators"))
    return out


def mub_suite(rng: np.random.Generator) -> list[Check]:
    out = []
    worst_dev = 0.0
    for d in (2, 3, 5, 7, 11, 13):
        for rep in mub.pairwise_reports(mub.complete_mub_set(d)):
            dev = np.max(np.abs(np.abs(rep.overlaps) - 1 / math.sqrt(d)))
            worst_dev = max(worst_dev, float(dev))
    out.append(_check("complete-mub-sets", worst_dev, 1e-10))

    worst_g = worst_e = 0.0
    for d in (2, 3, 5, 7, 11, 13):
        for a in range(d):
            g, e = mub.hadamard_residuals(mub.hadamard_matrix(d, a), a)
            worst_g, worst_e = max(worst_g, g), max(worst_e, e)
    out.append(_check("hadamard-orthogonality", worst_g, 1e-10))
    out.append(_check("hadamard-eigen", worst_e, 1e-10))

    worst_t = worst_s = 0.0
    for two_j in range(1, 7):
        space = su2ops.AngularSpace(two_j)
        for a, b in itertools.product(range(two_j + 1), repeat=2):
            for r, s in [(0.0, 0.0), (0.0, 1.0), (0.37, 0.2)]:
                t, s_ = mub.trace_relation_check(space, r, a, s, b)
                worst_t, worst_s = max(worst_t, t), max(worst_s, s_)
    out.append(_check("trace-relation", worst_t, 1e-10))
    out.append(_check("overlap-sum-rule", worst_s, 1e-10))

    c9, c15 = mub.unbiased_census(9), mub.unbiased_census(15)
    out.append(Check("census-d9", c9.passed and c9.digit_criterion is True, f"counts {c9.counts}"))
    out.append(Check("census-d15", c15.bound_holds, f"counts {c15.counts}"))

    for d in (4, 6):
        refused = False
        try:
            mub.complete_mub_set(d)
        except NotPrime:
            refused = True
        space = su2ops.AngularSpace.from_dimension(d)
        b0 = mub.eigenbasis(space, 0, 0)
        biased = any(not mub.unbiasedness_check(b0, mub.eigenbasis(space, 0, a)).unbiased for a in range(1, d))
        out.append(Check(f"composite-negative-control-d{d}", refused and biased,
                         f"refused={refused}, biased pair found={biased}"))
    return out


def gauss_suite(rng: np.random.Generator) -> list[Check]:
    out = []
    vanish = [gauss.gauss_sum(2, v, 8) for v in (2, 6, 10, 14)] + [gauss.gauss_sum(4, v, 6) for v in (2, 6, 10)]
    out.append(_check("gauss-vanishing-list", max(abs(x) for x in vanish), STRICT))

    specs = random_gauss_specs(rng, 500)
    out.append(_check("gauss-translation", max(gauss.translation_identity(s, int(rng.integers(-20, 21)))
                                               for s in specs), STRICT))
    out.append(_check("gauss-negation", max(gauss.negation_identity(s) for s in specs), STRICT))

    mism = 0
    for s in specs:
        try:
            pred = gauss.sign_case(s).predicted_sign
        except Inapplicable:
            continue
        # a vanishing sum admits both signs
        numeric = abs(gauss.gauss_sum(s) - pred * gauss.gauss_sum(s.u, -s.v, s.w))
        if pred not in gauss.translation_signs(s) or numeric > 1e-10:
            mism += 1
    out.append(Check("gauss-sign-rule", mism == 0, f"{mism} mismatches against translation signs"))

    worst = 0.0
    for w in (3, 5, 7, 11, 13):
        for u in range(1, 2 * w):
            if u % w == 0:
                continue
            for v in range(2 * w):
                if (u * w + v) % 2:
                    continue
                worst = max(worst, abs(abs(gauss.gauss_sum(u, v, w)) - math.sqrt(w)),
                            abs(gauss.prime_magnitude(u, v, w) - math.sqrt(w)))
    out.append(_check("gauss-prime-magnitude", worst, 1e-10))

    worst = 0.0
    for w in (3, 5, 7, 9, 11):
        for u in range(-4, 5):
            if u == 0:
                continue
            for n in range(-5, 6):
                worst = max(worst, gauss.derived_relation_check(u, n, w))
    out.append(_check("gauss-derived-relation", worst, STRICT))

    worst = max(abs(m - math.sqrt(d)) for d in (3, 5, 7, 11) for _, _, m in gauss.quadratic_phase_grid(d))
    out.append(_check("quadratic-phase-sum-rule", worst, 1e-10))

    worst = 0.0
    for d in range(2, 8):
        space = su2ops.AngularSpace.from_dimension(d)
        for a, b in itertools.permutations(range(d), 2):
            direct = mub.eigenbasis(space, 0, a).vectors.conj().T @ mub.eigenbasis(space, 0, b).vectors
            for al, be in itertools.product(range(d), repeat=2):
                worst = max(worst, abs(direct[al, be] - gauss.overlap_via_gauss(space.two_j, 0, a, b, al, be)))
    out.append(_check("overlap-gauss-equivalence", worst, STRICT))
    return out


def random_gauss_specs(rng: np.random.Generator, n: int) -> list[gauss.GaussSumSpec]:
    specs = []
    while len(specs) < n:
        u = int(rng.integers(-30, 31))
        w = int(rng.integers(-30, 31))
        v = int(rng.integers(-60, 61))
        if u * w == 0 or (u * w + v) % 2:
            continue
        specs.append(gauss.GaussSumSpec(u, v, w))
    return specs


def wigner_suite(rng: np.random.Generator) -> list[Check]:
    out = []
    halves = [Fraction(t, 2) for t in range(0, 5)]
    worst = 0.0
    for j1, j2, j3 in itertools.product(halves, repeat=3):
        if not wigner._triangle(2 * j1, 2 * j2, 2 * j3) or (j1 + j2 + j3).denominator != 1:
            continue
        ms = [[j - i for i in range(int(2 * j) + 1)] for j in (j1, j2, j3)]
        for m1, m2 in itertools.product(ms[0], ms[1]):
            m3 = -m1 - m2
            if abs(m3) > j3:
                continue
            x = wigner.three_jm(j1, j2, j3, m1, m2, m3)
            ph = (-1) ** int(j1 + j2 + j3)
            worst = max(worst,
                        abs(x - wigner.three_jm(j2, j3, j1, m2, m3, m1)),
                        abs(x - ph * wigner.three_jm(j2, j1, j3, m2, m1, m3)),
                        abs(x - ph * wigner.three_jm(j1, j2, j3, -m1, -m2, -m3)))
    out.append(_check("3jm-symmetries", worst, STRICT))

    worst = 0.0
    for two_j in range(0, 6):
        j = Fraction(two_j, 2)
        labels = [(k, p) for k in range(two_j + 1) for p in range(-k, k + 1)]
        mats = {kp: wigner.unit_tensor(j, *kp).matrix for kp in labels}
        for x, y in itertools.product(labels, repeat=2):
            expected = (1 / (2 * x[0] + 1)) if x == y else 0.0
            worst = max(worst, abs(wigner.hilbert_schmidt(mats[x], mats[y]) - expected))
    out.append(_check("unit-tensor-orthogonality", worst, STRICT))

    rec = agree = 0.0
    for two_j in range(1, 7):
        for a in range(two_j + 1):
            for r in (0.0, 1.0):
                b = wigner.b_coefficients(Fraction(two_j, 2), r, a)
                v = su2ops.v_ra_matrix(su2ops.AngularSpace(two_j), r, a)
                rec = max(rec, _norm(wigner.reconstruct_v(b) - v))
                agree = max(agree, b.agreement)
    out.append(_check("enveloping-reconstruction", rec, STRICT))
    out.append(_check("b-coefficient-closed-form", agree, 1e-10))

    worst = max(_norm(wigner.v00_closed_forms(Fraction(t, 2)) - su2ops.v_ra_matrix(su2ops.AngularSpace(t), 0.0, 0))
                for t in (1, 2, 3))
    out.append(_check("v00-closed-forms", worst, STRICT))

    worst = 0.0
    for two_j in range(0, 5):
        j = Fraction(two_j, 2)
        for k in range(two_j + 1):
            for p in range(-k, k + 1):
                worst = max(worst, _norm(wigner.unit_tensor_enveloping(j, k, p) - wigner.unit_tensor(j, k, p).matrix))
    out.append(_check("unit-tensor-enveloping", worst, 1e-10))

    worst = 0.0
    for d in range(1, 10):
        j = Fraction(d - 1, 2)
        for a in range(d):
            for p in range(d):
                got = wigner.rotation_new_scheme(j, 0, a, (2 * math.pi * p / d, 0.0, 0.0))
                worst = max(worst, _norm(got - wigner.z_rotation_law(j, 0, a, p)))
    out.append(_check("z-rotation-law", worst, 1e-10))

    worst = 0.0
    for _ in range(10):
        two_j = int(rng.integers(0, 7))
        a = int(rng.integers(0, two_j + 1))
        r = float(rng.uniform(0, 2))
        euler = (float(rng.uniform(0, 2 * math.pi)), float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))
        j = Fraction(two_j, 2)
        x = wigner.rotation_new_scheme(j, r, a, euler)
        worst = max(worst, _norm(x - wigner.rotation_by_conjugation(j, r, a, euler)),
                    _norm(x.conj().T @ x - np.eye(two_j + 1)))
    out.append(_check("rotation-new-scheme", worst, 1e-10))

    worst = 0.0
    for j1, j2, j3 in [(0.5, 0.5, 1), (1, 1, 1), (1, 0.5, 1.5), (1.5, 1, 0.5), (2, 1, 2)]:
        for a in range(int(2 * min(j1, j2, j3)) + 1):
            t = wigner.coupling_by_transform(j1, j2, j3, 0.37, a)
            worst = max(worst, abs(t[0, 0, 0] - wigner.coupling_new_scheme(j1, j2, j3, 0, 0, 0, 0.37, a)),
                        _norm((np.abs(t) ** 2).sum(axis=(0, 1)) - 1))
    out.append(_check("coupling-new-scheme", worst, 1e-10))
    return out


SUITES: dict[str, Callable[[np.random.Generator], list[Check]]] = {
    "quon": quon_suite,
    "su2": su2_suite,
    "mub": mub_suite,
    "gauss": gauss_suite,
    "wigner": wigner_suite,
}


def run_suites(name: str, seed: int) -> list[Check]:
    names = list(SUITES) if name == "all" else [name]
    rng = np.random.default_rng(seed)
    results = []
    for n in names:
        try:
            results.extend(SUITES[n](rng))
        except Exception as exc:  # a crash inside a suite counts as a failed check
            results.append(Check(f"{n}-suite", False, f"raised {type(exc).__name__}: {exc}"))
    return results
