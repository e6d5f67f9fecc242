"""Verification suites and their machine-readable reports.

Each suite returns a JSON-ready dictionary: ``suite`` name, ``status`` (pass,
fail, or attention), and a list of per-check ``items`` embedding the
canonical text of every polynomial involved.  Randomized checks draw from an
explicitly seeded generator, so identical options produce byte-identical
reports; ``attention`` is reserved for documented discrepancies (the modulus
exponent of the witness curve).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from . import biforms, brauer, bundles, covers

SUITES = ("normal-forms", "section5", "brauer", "appendix")

DEFAULT_SEED = 7
DEFAULT_WINDOW = 4

#: Sampling floors for the randomized brauer checks.
SYMBOL_SAMPLES = 500
PRODUCT_SAMPLES = 200
DOUBLING_SAMPLES = 100
DESCENT_SAMPLES = 20

ORACLE_PRIMES = (2, 3, 5, 7, 11, 13)
SQUAREFREE_POOL = (-1, 2, -2, 3, -3, 5, -5, 6, -6, 7, 10, -10, 15, 17, -17, 30)


# -- normal forms -------------------------------------------------------------

def _variable_indices(bundle):
    present = set()
    for coeff in bundle.coeffs:
        present |= {int(name[1:]) for name in coeff.variables()}
    return sorted(present)


def normal_form_item(entry, dim=None):
    bundle = bundles.normal_form(entry, dim)
    certificate = bundles.flatness_certificate(bundle)
    strata = []
    indices = _variable_indices(bundle)
    for size in range(len(indices) + 1):
        for zeroset in combinations(indices, size):
            strata.append(
                {
                    "zeroset": list(zeroset),
                    "rank": bundles.gram_rank_on_stratum(bundle, set(zeroset)),
                }
            )
    return {
        "entry": entry,
        "dim": bundle.n,
        "equation": str(bundle.equation()),
        "coefficients": [str(c) for c in bundle.coeffs],
        "discriminant": str(bundles.discriminant(bundle)),
        "discriminant_square_class": str(bundles.discriminant(bundle, square_class=True)),
        "certificate": {
            "kind": certificate.kind,
            "index": certificate.index,
            "value": str(certificate.value),
        },
        "strata": strata,
    }


def run_normal_forms(entry=None, dim=None):
    entries = [entry] if entry is not None else list(range(1, 9))
    items = []
    failures = 0
    for k in entries:
        try:
            items.append(normal_form_item(k, dim))
        except (bundles.NoUnitCoefficientError, ValueError) as exc:
            failures += 1
            items.append({"entry": k, "error": str(exc)})
    return {
        "suite": "normal-forms",
        "status": "fail" if failures else "pass",
        "items": items,
    }


# -- cover maps ---------------------------------------------------------------

def section5_item(entry):
    cover = covers.cover_map(entry)
    monomial, residual = covers.pullback_factorization(cover)
    character = covers.infer_sign_action(cover)
    equivariance = covers.verify_projective_equivariance(cover, character)
    inverse = covers.generic_fiber_inverse(cover)
    return {
        "entry": entry,
        "map": {
            "cover_variables": list(cover.table.names),
            "base": [str(p) for p in cover.base_images],
            "projective": [str(p) for p in cover.proj_images],
        },
        "monomial": str(monomial),
        "residual": str(residual),
        "action": [
            {
                "generator": gen.s_index,
                "letter_signs": list(gen.letter_signs),
                "rescale": gen.rescale,
            }
            for gen in character.generators
        ],
        "equivariance": "pass" if equivariance.passed else "fail",
        "equivariance_failures": list(equivariance.failures),
        "inverse": "pass" if inverse.verified else "fail",
        "inverse_images": [str(p) for p in inverse.images],
    }


def run_section5(entry=None):
    entries = [entry] if entry is not None else list(range(2, 9))
    items = []
    failures = 0
    for k in entries:
        try:
            item = section5_item(k)
        except (covers.CoverMapError, ValueError) as exc:
            failures += 1
            items.append({"entry": k, "error": str(exc)})
            continue
        if item["equivariance"] != "pass" or item["inverse"] != "pass":
            failures += 1
        items.append(item)
    return {
        "suite": "section5",
        "status": "fail" if failures else "pass",
        "items": items,
    }


# -- brauer arithmetic --------------------------------------------------------

def _random_rational(rng, bound=40, max_den=8):
    num = 0
    while num == 0:
        num = rng.randint(-bound, bound)
    return Fraction(num, rng.randint(1, max_den))


def _random_place(rng):
    choice = rng.randint(0, len(ORACLE_PRIMES))
    if choice == 0:
        return brauer.REAL
    return brauer.Place.prime(ORACLE_PRIMES[choice - 1])


def run_brauer(
    seed=DEFAULT_SEED,
    symbol_samples=SYMBOL_SAMPLES,
    product_samples=PRODUCT_SAMPLES,
    doubling_samples=DOUBLING_SAMPLES,
    descent_samples=DESCENT_SAMPLES,
):
    rng = random.Random(seed)
    items = []
    failures = 0

    disagreements = []
    for _ in range(symbol_samples):
        a, b = _random_rational(rng), _random_rational(rng)
        place = _random_place(rng)
        formula = brauer.hilbert_symbol(a, b, place)
        search = brauer.hilbert_symbol_search(a, b, place)
        if formula != search:
            disagreements.append({"a": str(a), "b": str(b), "place": str(place)})
    failures += len(disagreements)
    items.append(
        {
            "check": "hilbert-symbol-vs-search-oracle",
            "samples": symbol_samples,
            "disagreements": disagreements,
        }
    )

    product_failures = []
    for _ in range(product_samples):
        a, b = _random_rational(rng), _random_rational(rng)
        product = 1
        for place in brauer.relevant_places([a, b]):
            product *= brauer.hilbert_symbol(a, b, place)
        if product != 1:
            product_failures.append({"a": str(a), "b": str(b)})
    failures += len(product_failures)
    items.append(
        {
            "check": "global-product-formula",
            "samples": product_samples,
            "failures": product_failures,
        }
    )

    doubling_failures = []
    for _ in range(doubling_samples):
        beta = brauer.QuaternionClass(_random_rational(rng), _random_rational(rng))
        d = rng.choice(SQUAREFREE_POOL)
        if not brauer.res_cor_doubling_check(beta, d):
            doubling_failures.append({"a": str(beta.a), "b": str(beta.b), "d": d})
    failures += len(doubling_failures)
    items.append(
        {
            "check": "restriction-corestriction-doubling",
            "samples": doubling_samples,
            "failures": doubling_failures,
        }
    )

    descent_details = []
    inconsistent = 0
    for _ in range(descent_samples):
        p = rng.choice([1, -1, 2, 3, -3, 5, 7, -7, 10, 11])
        q = rng.choice([1, -1, 2, 3, -3, 5, 7, -7, 10, 11])
        r = rng.choice([1, -1, 2, 3, -3, 5, 7, -7, 10, 11])
        d = rng.choice(SQUAREFREE_POOL)
        report = brauer.verify_quaternion_descent_instance(p, q, r, d)
        if not report.consistent:
            inconsistent += 1
        descent_details.append(
            {
                "p": p,
                "q": q,
                "r": r,
                "d": d,
                "similar": report.similar,
                "scale": report.scale,
                "splits_over_extension": report.splits_over_extension,
                "hypothesis_division_split": report.hypothesis_division_split,
                "consistent": report.consistent,
            }
        )
    failures += inconsistent
    items.append(
        {
            "check": "quaternion-descent-instances",
            "samples": descent_samples,
            "inconsistent": inconsistent,
            "details": descent_details,
        }
    )

    worked = brauer.verify_quaternion_descent_instance(3, 5, 7, 2)
    worked_item = {
        "check": "worked-descent-example",
        "p": 3,
        "q": 5,
        "r": 7,
        "d": 2,
        "isotropy_form": str(worked.isotropy_form),
        "albert_pair_form": str(worked.albert_pair_form),
        "similar": worked.similar,
        "scale": worked.scale,
        "splits_over_extension": worked.splits_over_extension,
        "consistent": worked.consistent,
    }
    if not worked.consistent:
        failures += 1
    items.append(worked_item)

    return {
        "suite": "brauer",
        "status": "fail" if failures else "pass",
        "seed": seed,
        "items": items,
    }


# -- the biform-module computations -------------------------------------------

def _witness_payload(report):
    return {
        "gamma_exponent": report.gamma_exponent,
        "coordinate_order": list(report.coordinate_order),
        "identities_hold": report.identities_hold,
        "x0_nonzero": report.x0_nonzero,
        "residuals": [list(pair) for pair in report.residuals],
        "passed": report.passed,
    }


def run_appendix(window=DEFAULT_WINDOW, gamma_exp="auto"):
    items = []
    failures = 0
    attention = False

    containment = biforms.verify_containment()
    items.append(
        {
            "check": "containment",
            "passed": containment.passed,
            "certificates": [
                {
                    "generator": g,
                    "module": name,
                    "member": cert.member,
                    "coefficients": [str(c) for c in cert.coefficients],
                }
                for g, name, cert in containment.certificates
            ],
        }
    )
    if not containment.passed:
        failures += 1

    freeness = biforms.freeness_certificate()
    items.append(
        {
            "check": "freeness",
            "passed": freeness.passed,
            "determinant": str(freeness.det),
        }
    )
    if not freeness.passed:
        failures += 1

    graded = biforms.verify_graded_intersection(window)
    items.append(
        {
            "check": "graded-equality",
            "passed": graded.passed,
            "window": window,
            "checked": graded.checked,
            "saturated": graded.saturated,
            "mismatches": [
                {"monomial": list(exps)} for exps, _, _ in graded.mismatches
            ],
        }
    )
    if not graded.passed:
        failures += 1

    if gamma_exp == "auto":
        exponent_reports = {
            e: biforms.nonflatness_witness(biforms.witness_curve(e)) for e in (-2, -1)
        }
        passing = [e for e, rep in exponent_reports.items() if rep.passed]
        if passing == [-2]:
            attention = True
            chosen = -2
            note = (
                "identities hold for gamma exponent -2 only; the exponent -1"
                " variant of the modulus fails them and is flagged as a"
                " probable transcription error"
            )
        elif passing == [-1]:
            failures += 1
            chosen = -1
            note = (
                "identities hold for gamma exponent -1 only, contradicting the"
                " hand-derivation oracle; refusing to pass until reconciled"
            )
        elif not passing:
            failures += 1
            chosen = None
            note = "no gamma exponent satisfies the identities"
        else:
            failures += 1
            chosen = None
            note = (
                "both gamma exponents satisfy the identities, contradicting"
                " the hand-derivation oracle"
            )
        items.append(
            {
                "check": "nonflatness",
                "gamma_exp_used": chosen,
                "identities": chosen is not None,
                "x0_nonzero": bool(chosen is not None and exponent_reports[chosen].x0_nonzero),
                "exponents": {
                    str(e): _witness_payload(rep) for e, rep in exponent_reports.items()
                },
                "note": note,
            }
        )
    else:
        exponent = int(gamma_exp)
        report = biforms.nonflatness_witness(biforms.witness_curve(exponent))
        if not report.passed:
            failures += 1
        items.append(
            {
                "check": "nonflatness",
                "gamma_exp_used": exponent,
                "identities": report.identities_hold,
                "x0_nonzero": report.x0_nonzero,
                "exponents": {str(exponent): _witness_payload(report)},
                "note": "fixed gamma exponent requested",
            }
        )

    if failures:
        status = "fail"
    elif attention:
        status = "attention"
    else:
        status = "pass"
    return {
        "suite": "appendix",
        "status": status,
        "window": window,
        "items": items,
    }


# -- orchestration ------------------------------------------------------------

def run_suite(name, seed=DEFAULT_SEED, window=DEFAULT_WINDOW, gamma_exp="auto",
              entry=None, dim=None):
    if name == "normal-forms":
        return run_normal_forms(entry=entry, dim=dim)
    if name == "section5":
        return run_section5(entry=entry)
    if name == "brauer":
        return run_brauer(seed=seed)
    if name == "appendix":
        return run_appendix(window=window, gamma_exp=gamma_exp)
    raise ValueError("unknown suite %r" % name)


def aggregate_status(statuses):
    if any(s == "fail" for s in statuses):
        return "fail"
    if any(s == "attention" for s in statuses):
        return "attention"
    return "pass"


def run_all(seed=DEFAULT_SEED, window=DEFAULT_WINDOW, gamma_exp="auto"):
    suites = [
        run_suite(name, seed=seed, window=window, gamma_exp=gamma_exp)
        for name in SUITES
    ]
    return {
        "status": aggregate_status([s["status"] for s in suites]),
        "seed": seed,
        "options": {"window": window, "gamma_exp": str(gamma_exp)},
        "suites": suites,
    }


#: Published schema for the JSON reports emitted by the command line.
REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "definitions": {
        "status": {"enum": ["pass", "fail", "attention"]},
        "suiteReport": {
            "type": "object",
            "required": ["suite", "status", "items"],
            "properties": {
                "suite": {"enum": list(SUITES)},
                "status": {"$ref": "#/definitions/status"},
                "items": {"type": "array", "items": {"type": "object"}},
                "seed": {"type": "integer"},
                "window": {"type": "integer"},
            },
        },
        "aggregateReport": {
            "type": "object",
            "required": ["status", "seed", "options", "suites"],
            "properties": {
                "status": {"$ref": "#/definitions/status"},
                "seed": {"type": "integer"},
                "options": {"type": "object"},
                "suites": {
                    "type": "array",
                    "items": {"$ref": "#/definitions/suiteReport"},
                },
            },
        },
    },
    "oneOf": [
        {"$ref": "#/definitions/suiteReport"},
        {"$ref": "#/definitions/aggregateReport"},
    ],
}
