"""Experiment harnesses: word separation, identity sweeps, exact diagram checks.

Every experiment takes an integer seed and reports enough to replay itself:
the full job echo, the seed, per-trial records and a pass/fail verdict.
Per-trial randomness is drawn from spawned seed-sequence children, so trial
t sees the same stream no matter how many trials run.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from . import serialize
from .diagrams import (
    Pairing,
    Permutation,
    enumerate_pairings,
    normalize_pairing,
    reversed_pair_count,
)
from .graphs import Configuration, GaugeTransform, bouquet, gauge_apply
from .groups import GroupElement, GroupKind, haar_sample
from .spinnet import (
    MixedSignature,
    apply_slot_transpose,
    brauer_operator,
    commutant_dimension,
    compile_orthosymplectic,
    compile_unitary,
    diagonal_slot_matrices,
    eval_spin_network,
    invariance_defect,
    mixed_operator,
    pairing_operators,
    perm_operator,
    permutation_operators,
    span_rank,
)


@dataclass
class ExperimentReport:
    """Replayable record of one experiment run."""

    command: dict
    seed: int
    tol: float
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    verdict: str = "fail"
    wall_time_s: float = 0.0
    schema: str = serialize.SCHEMA

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        return {
            "schema": self.schema,
            "command": self.command,
            "seed": self.seed,
            "tol": self.tol,
            "records": self.records,
            "summary": self.summary,
            "verdict": self.verdict,
            "wall_time_s": self.wall_time_s,
        }


# ---------------------------------------------------------------------------
# words and conjugacy fingerprints


def word_to_loop(word):
    """Words in r letters are exactly the loops of the bouquet graph."""
    if not word:
        raise ValueError("a word must have at least one letter")
    return tuple((int(i), int(s)) for i, s in word)


def word_eval(word, elements):
    """Product of the letters' elements in reversed order, last letter leftmost."""
    if not word:
        raise ValueError("a word must have at least one letter")
    kind = elements[0].kind
    value = np.eye(kind.matrix_dim, dtype=np.complex128)
    for i, s in word:
        if not 0 <= i < len(elements):
            raise ValueError(f"letter index {i} out of range")
        g = elements[i].mat
        value = (g if s > 0 else g.conj().T) @ value
    return GroupElement(kind, value)


def conjugacy_fingerprint(g):
    """Sorted eigenvalue multiset of the natural representation, as [re, im] pairs.

    Equal fingerprints certify conjugacy inside the ambient unitary group
    U(m).  For O/SO/Sp the condition is necessary; conjugacy inside the
    subgroup can be strictly finer in edge cases, which this function flags
    by construction but does not decide.
    """
    eig = np.sort_complex(np.linalg.eigvals(g.mat))
    out = np.empty(2 * eig.size)
    out[0::2] = eig.real
    out[1::2] = eig.imag
    return out


def fingerprint_distance(f1, f2):
    """Largest matched gap between two fingerprints, by optimal assignment."""
    e1 = np.asarray(f1)[0::2] + 1j * np.asarray(f1)[1::2]
    e2 = np.asarray(f2)[0::2] + 1j * np.asarray(f2)[1::2]
    if e1.size != e2.size:
        raise ValueError("fingerprints of different sizes")
    cost = np.abs(e1[:, None] - e2[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def _eig_distance(a, b):
    """Fingerprint distance of two matrices, with a cheap sorted-order fast path."""
    ea = np.sort_complex(np.linalg.eigvals(a))
    eb = np.sort_complex(np.linalg.eigvals(b))
    quick = float(np.abs(ea - eb).max())
    if quick < 1e-12:
        return quick
    cost = np.abs(ea[:, None] - eb[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def word_letters(r):
    return [(i, s) for i in range(r) for s in (1, -1)]


def enumerate_words(r, max_len):
    """Freely reduced words of length 1..max_len, by length then letter order.

    Words containing an adjacent inverse pair evaluate like shorter words
    and are skipped.
    """
    letters = word_letters(r)
    level = [()]
    for _ in range(max_len):
        nxt = []
        for word in level:
            for let in letters:
                if word and word[-1] == (let[0], -let[1]):
                    continue
                nxt.append(word + (let,))
        yield from nxt
        level = nxt


def count_words(r, max_len):
    """Number of freely reduced words of length 1..max_len: sum of 2r (2r-1)^(l-1)."""
    return sum(2 * r * (2 * r - 1) ** (length - 1) for length in range(1, max_len + 1))


def _letter_matrices(elements):
    mats = {}
    for i, g in enumerate(elements):
        mats[(i, 1)] = g.mat
        mats[(i, -1)] = g.mat.conj().T
    return mats


def _scan_conjugate_arm(a_elems, b_elems, max_len, tol):
    """Exhaustive scan: number of words separating the two tuples, and max distance.

    Depth-first with incremental products: appending a letter to a word
    multiplies its value by that letter's matrix on the left.
    """
    r = len(a_elems)
    letters = word_letters(r)
    a_mats = _letter_matrices(a_elems)
    b_mats = _letter_matrices(b_elems)
    m = a_elems[0].kind.matrix_dim
    eye = np.eye(m, dtype=np.complex128)
    stats = {"words": 0, "separations": 0, "max_distance": 0.0, "first_separating": None}

    def rec(last, va, vb, depth):
        for let in letters:
            if last is not None and last == (let[0], -let[1]):
                continue
            va2 = a_mats[let] @ va
            vb2 = b_mats[let] @ vb
            dist = _eig_distance(va2, vb2)
            stats["words"] += 1
            if dist > stats["max_distance"]:
                stats["max_distance"] = dist
            if dist > tol and stats["separations"] == 0:
                stats["first_separating"] = depth + 1
            if dist > tol:
                stats["separations"] += 1
            if depth + 1 < max_len:
                rec(let, va2, vb2, depth + 1)

    rec(None, eye, eye, 0)
    return stats


def _first_separating_word(a_elems, b_elems, max_len, tol):
    """Shortest word whose values have different spectra, scanning by length."""
    r = len(a_elems)
    letters = word_letters(r)
    a_mats = _letter_matrices(a_elems)
    b_mats = _letter_matrices(b_elems)
    m = a_elems[0].kind.matrix_dim
    eye = np.eye(m, dtype=np.complex128)
    level = [((), eye, eye)]
    for _ in range(max_len):
        nxt = []
        for word, va, vb in level:
            for let in letters:
                if word and word[-1] == (let[0], -let[1]):
                    continue
                item = (word + (let,), a_mats[let] @ va, b_mats[let] @ vb)
                if _eig_distance(item[1], item[2]) > tol:
                    return item[0]
                nxt.append(item)
        level = nxt
    return None


def separation_experiment(kind, r, max_len, trials, tol, seed):
    """Probe whether words of loop holonomies separate diagonal conjugacy classes.

    Two arms per trial.  Conjugate arm: the second tuple is the first one
    conjugated diagonally, so no word may separate the spectra; the scan is
    exhaustive over freely reduced words up to max_len.  Independent arm:
    the second tuple is fresh, and the shortest separating word (if any) is
    recorded.  Verdict: pass iff the conjugate arm finds zero separations.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    t0 = time.perf_counter()
    job = {
        "kind": serialize.kind_to_json(kind),
        "r": r,
        "max_len": max_len,
        "trials": trials,
        "tol": tol,
        "seed": seed,
    }
    report = ExperimentReport(command={"verb": "separate", "job": job}, seed=seed, tol=tol)
    children = np.random.SeedSequence(seed).spawn(trials)
    total_separations = 0
    length_histogram = {}
    for t, child in enumerate(children):
        rng = np.random.default_rng(child)
        base = [haar_sample(kind, rng) for _ in range(r)]
        k = haar_sample(kind, rng)
        conjugated = [GroupElement(kind, k.mat @ g.mat @ k.mat.conj().T) for g in base]
        conj_stats = _scan_conjugate_arm(base, conjugated, max_len, tol)
        total_separations += conj_stats["separations"]

        fresh = [haar_sample(kind, rng) for _ in range(r)]
        word = _first_separating_word(base, fresh, max_len, tol)
        length = len(word) if word is not None else None
        key = str(length) if length is not None else "none"
        length_histogram[key] = length_histogram.get(key, 0) + 1
        report.records.append(
            {
                "trial": t,
                "conjugate_arm": {
                    "words_scanned": conj_stats["words"],
                    "separations": conj_stats["separations"],
                    "max_distance": conj_stats["max_distance"],
                },
                "independent_arm": {
                    "shortest_separating_length": length,
                    "word": [list(let) for let in word] if word is not None else None,
                },
            }
        )
    report.summary = {
        "conjugate_separations": total_separations,
        "words_per_trial": count_words(r, max_len),
        "independent_shortest_length_histogram": dict(sorted(length_histogram.items())),
    }
    report.verdict = "pass" if total_separations == 0 else "fail"
    report.wall_time_s = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# identity sweeps: compiled Wilson products against the contraction oracle


def _random_unitary_case(rng, max_edges, max_degree):
    r = int(rng.integers(1, max_edges + 1))
    total = int(rng.integers(1, max_degree + 1))
    counts = [[0, 0] for _ in range(r)]
    for _ in range(total):
        counts[int(rng.integers(0, r))][int(rng.integers(0, 2))] += 1
    signature = MixedSignature(tuple(tuple(c) for c in counts))
    sigma = Permutation(np.asarray(rng.permutation(total)) + 1)
    return signature, sigma


def _random_orthosymplectic_case(rng, max_edges, max_degree):
    r = int(rng.integers(1, max_edges + 1))
    total = int(rng.integers(1, max_degree + 1))
    counts = [0] * r
    for _ in range(total):
        counts[int(rng.integers(0, r))] += 1
    signature = MixedSignature(tuple((c, 0) for c in counts))
    order = np.asarray(rng.permutation(2 * total)) + 1
    tau = Pairing.from_pairs(
        [(int(order[2 * i]), int(order[2 * i + 1])) for i in range(total)], size=2 * total
    )
    return signature, tau


def _sample_configuration(kind, r, rng):
    graph = bouquet(r)
    return Configuration(graph, tuple(haar_sample(kind, rng) for _ in range(r)))


def evaluate_case(kind, signature, diagram, config):
    """Oracle value, compiled product and compiled value for one diagram."""
    m = kind.matrix_dim
    if isinstance(diagram, Permutation):
        if kind.has_form:
            raise ValueError(f"permutation diagrams take kinds U/SU, got {kind}")
        op = mixed_operator(diagram, signature, m)
        product = compile_unitary(diagram, signature)
    elif isinstance(diagram, Pairing):
        op = brauer_operator(diagram, kind, signature.p)
        product = compile_orthosymplectic(diagram, signature, kind)
    else:
        raise TypeError(f"not a diagram: {diagram!r}")
    oracle = eval_spin_network(config, signature, op)
    compiled = product.evaluate(config)
    return op, product, oracle, compiled


def _invariance_record(kind, signature, op, product, config, oracle, job, rng):
    samples = int(job.get("invariance_samples", 20))
    gauge_checks = int(job.get("gauge_checks", 10))
    defect = 0.0
    for _ in range(samples):
        g = haar_sample(kind, rng)
        defect = max(defect, invariance_defect(op, diagonal_slot_matrices(signature, g)))
    gauge_dev = 0.0
    for _ in range(gauge_checks):
        k = haar_sample(kind, rng)
        phi = GaugeTransform((k,))
        moved = gauge_apply(phi, config)
        gauge_dev = max(gauge_dev, abs(eval_spin_network(moved, signature, op) - oracle))
        gauge_dev = max(gauge_dev, abs(product.evaluate(moved) - product.evaluate(config)))
    return {"commutant_defect": defect, "gauge_deviation": gauge_dev}


def run_identity_suite(job):
    """Sweep diagram operators and compare compiled loop products to the oracle.

    The job names a kind, a seed, a tolerance, and either explicit cases
    (signature + diagram) or the number of random trials with size bounds
    max_edges / max_degree.  Verdict: pass iff every deviation satisfies
    |compiled - oracle| <= tol * (1 + |oracle|), and, when invariance checks
    are enabled, every commutant defect and gauge deviation is at most
    invariance_tol.
    """
    t0 = time.perf_counter()
    kind = serialize.kind_from_json(job["kind"])
    seed = int(job.get("seed", 0))
    tol = float(job.get("tol", 1e-9))
    invariance_tol = float(job.get("invariance_tol", 1e-10))
    check_invariance = bool(job.get("check_invariance", False))
    report = ExperimentReport(
        command={"verb": "verify-identities", "job": job}, seed=seed, tol=tol
    )

    cases = job.get("cases")
    trials = len(cases) if cases is not None else int(job.get("trials", 50))
    max_edges = int(job.get("max_edges", 3))
    max_degree = int(job.get("max_degree", 5))
    children = np.random.SeedSequence(seed).spawn(max(trials, 1))

    worst_rel = 0.0
    worst_abs = 0.0
    worst_inv = 0.0
    ok = True
    for t in range(trials):
        rng = np.random.default_rng(children[t])
        if cases is not None:
            case = cases[t]
            signature = serialize.signature_from_json(case["signature"])
            diagram = serialize.diagram_from_json(case["diagram"])
        elif kind.has_form:
            signature, diagram = _random_orthosymplectic_case(rng, max_edges, max_degree)
        else:
            signature, diagram = _random_unitary_case(rng, max_edges, max_degree)
        if cases is not None and "configuration" in case:
            config = serialize.configuration_from_json(case["configuration"])
        else:
            config = _sample_configuration(kind, signature.r, rng)

        op, product, oracle, compiled = evaluate_case(kind, signature, diagram, config)
        dev_abs = abs(compiled - oracle)
        dev_rel = dev_abs / (1.0 + abs(oracle))
        worst_abs = max(worst_abs, dev_abs)
        worst_rel = max(worst_rel, dev_rel)
        if dev_rel > tol:
            ok = False
        record = {
            "trial": t,
            "signature": serialize.signature_to_json(signature),
            "diagram": serialize.diagram_to_json(diagram),
            "oracle": serialize.complex_to_json(oracle),
            "compiled_product": serialize.wilson_product_to_json(product),
            "compiled": serialize.complex_to_json(compiled),
            "deviation_abs": dev_abs,
            "deviation_rel": dev_rel,
        }
        if check_invariance:
            inv = _invariance_record(kind, signature, op, product, config, oracle, job, rng)
            record.update(inv)
            worst_inv = max(worst_inv, inv["commutant_defect"], inv["gauge_deviation"])
            if max(inv["commutant_defect"], inv["gauge_deviation"]) > invariance_tol:
                ok = False
        report.records.append(record)

    report.summary = {
        "trials": trials,
        "max_deviation_abs": worst_abs,
        "max_deviation_rel": worst_rel,
    }
    if check_invariance:
        report.summary["max_invariance_defect"] = worst_inv
        report.summary["invariance_tol"] = invariance_tol
    report.verdict = "pass" if ok else "fail"
    report.wall_time_s = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# exact diagram suite: flip normalization as an integer tensor identity


def run_diagram_suite(job):
    """Check, exactly, that flip normalization rewrites pairings as permutations.

    For every pairing of {1..2p} with p up to max_p, and for each configured
    kind, applying the slot transposes over the computed flips to the integer
    pairing operator must reproduce the integer permutation operator of the
    computed sigma, entry for entry, times the orientation sign: +1 always
    for the symmetric form, and form_sign^w for the skew one, where w counts
    the pairs whose endpoint order reverses under the rewiring.  No
    tolerances are involved anywhere.
    """
    t0 = time.perf_counter()
    max_p = int(job.get("max_p", 4))
    o_ranks = [int(x) for x in job.get("o_ranks", [2, 3])]
    sp_ranks = [int(x) for x in job.get("sp_ranks", [1, 2])]
    kinds = [GroupKind("O", n) for n in o_ranks] + [GroupKind("Sp", n) for n in sp_ranks]
    report = ExperimentReport(
        command={"verb": "verify-diagrams", "job": job}, seed=int(job.get("seed", 0)), tol=0.0
    )
    ok = True
    for p in range(1, max_p + 1):
        checked = 0
        failures = 0
        for tau in enumerate_pairings(p):
            norm = normalize_pairing(tau)
            rewired = tau.conjugate_by_flips(norm.flips)
            if rewired != Pairing.from_pairs(
                [(i, norm.sigma(i) + p) for i in range(1, p + 1)], size=2 * p
            ):
                failures += 1
                ok = False
                continue
            w = reversed_pair_count(tau, norm.flips)
            for kind in kinds:
                target = (kind.form_sign ** w) * perm_operator(norm.sigma, kind.matrix_dim)
                op = brauer_operator(tau, kind, p)
                for i in sorted(norm.flips):
                    op = apply_slot_transpose(op, i, kind)
                if not np.array_equal(op, target):
                    failures += 1
                    ok = False
            checked += 1
        report.records.append(
            {"p": p, "pairings": checked, "kinds": [str(k) for k in kinds], "failures": failures}
        )
    report.summary = {"max_p": max_p, "kinds": [str(k) for k in kinds]}
    report.verdict = "pass" if ok else "fail"
    report.wall_time_s = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# commutant cross-check


def commutant_report(kind, d, samples, seed, rank_tol=1e-8):
    """Compare the diagram-operator span against the sampled commutant dimension.

    The two integers are computed by unrelated routes: the span rank comes
    from the materialized diagram operators, the commutant dimension from
    the nullity of sampled commutation constraints.  Verdict: equality.
    """
    t0 = time.perf_counter()
    job = {
        "kind": serialize.kind_to_json(kind),
        "d": d,
        "samples": samples,
        "seed": seed,
        "rank_tol": rank_tol,
    }
    report = ExperimentReport(
        command={"verb": "commutant", "job": job}, seed=seed, tol=rank_tol
    )
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    m = kind.matrix_dim
    if kind.has_form:
        ops = pairing_operators(d, kind)
        family = f"pairings of {2 * d} points"
    else:
        ops = permutation_operators(d, m)
        family = f"permutations of {d} slots"
    rank = span_rank(ops, rank_tol=rank_tol)
    cdim = commutant_dimension(kind, d, samples, rng, rank_tol=rank_tol)
    report.records.append(
        {
            "kind": str(kind),
            "d": d,
            "operator_family": family,
            "operators": len(ops),
            "span_rank": rank,
            "commutant_dimension": cdim,
        }
    )
    report.summary = {"span_rank": rank, "commutant_dimension": cdim}
    report.verdict = "pass" if rank == cdim else "fail"
    report.wall_time_s = time.perf_counter() - t0
    return report
