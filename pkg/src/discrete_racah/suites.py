"""Named verification suites, as run by the command line and the acceptance tests."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from .algebra import (
    GeneratorTable,
    verify_bispectrality,
    verify_classical_presentation,
    verify_commutation,
    verify_lind,
    verify_rank_one_family,
    verify_shift_covariance,
    verify_sigma,
    verify_spectra,
    SHIFT_COVARIANCE_CASES,
)
from .orthogonality import (
    connection_matrix,
    verify_diagonalization,
    verify_orthogonality_exact,
    verify_specialization,
)
from .polynomials import ParameterSet
from .report import Report

SUITES = (
    "bispectral",
    "classical",
    "commutation",
    "lind",
    "orthogonality",
    "rank-one",
    "shift-covariance",
    "sigma",
    "specialization",
    "spectrum",
)

MODES = ("exact", "float", "both")
FLOAT_TOLERANCE = 1e-9


def applicable(suite: str, params: ParameterSet) -> str | None:
    """None when the suite can run on these parameters, else the reason it cannot."""
    if suite not in SUITES:
        return f"unknown suite {suite!r}"
    if suite == "classical" and params.n != 3:
        return "the classical presentation is stated for n = 3 only"
    if suite == "shift-covariance" and params.n < 4:
        return "shift-covariance needs n >= 4 so that some offset window fits"
    return None


def default_suites(params: ParameterSet) -> list[str]:
    """Everything applicable, except the characteristic-polynomial checks from n = 5 on."""
    out = [s for s in SUITES if applicable(s, params) is None]
    if params.n >= 5:
        out.remove("spectrum")
    return out


def _shift_cases(params: ParameterSet):
    cases = [(j, off) for j, off in SHIFT_COVARIANCE_CASES if off + j + 1 <= params.n - 1]
    if not cases:
        cases = [(1, off) for off in range(1, params.n - 2)]
    return cases


def _orthogonality(params: ParameterSet, mode: str, table) -> Report:
    rep = Report("orthogonality")
    if mode in ("exact", "both"):
        rep.extend(verify_orthogonality_exact(params, FLOAT_TOLERANCE))
        rep.extend(verify_diagonalization(table))
    if mode in ("float", "both"):
        err = connection_matrix(params).gram_error()
        rep.add("connection-orthonormal", [f"tol={FLOAT_TOLERANCE:g}"], err <= FLOAT_TOLERANCE, {"max_error": err})
        rep.data["connection_gram_error"] = err
    return rep


def run_suite(suite: str, params: ParameterSet, mode: str = "exact", table: GeneratorTable | None = None) -> Report:
    reason = applicable(suite, params)
    if reason is not None:
        raise ValueError(reason)
    if table is None:
        table = GeneratorTable(params)
    if suite == "commutation":
        return verify_commutation(table)
    if suite == "lind":
        return verify_lind(table)
    if suite == "rank-one":
        return verify_rank_one_family(table)
    if suite == "classical":
        return verify_classical_presentation(table)
    if suite == "bispectral":
        return verify_bispectrality(table)
    if suite == "sigma":
        return verify_sigma(table)
    if suite == "spectrum":
        return verify_spectra(table)
    if suite == "shift-covariance":
        return verify_shift_covariance(params, _shift_cases(params))
    if suite == "orthogonality":
        return _orthogonality(params, mode, table)
    # specialization runs on the rank-one truncation beta_0, beta_1, beta_2
    return verify_specialization(ParameterSet(3, params.N, params.beta[:3]))


def _run_one(args) -> Report:
    suite, params, mode = args
    return run_suite(suite, params, mode)


def run_suites(params: ParameterSet, suites, mode: str = "exact", threads: int = 1) -> list[Report]:
    """Run the suites in order; with threads > 1 they are spread over worker processes.

    Each suite is exact and self-contained, so the reports do not depend on
    the worker count.
    """
    params.require_generic()
    suites = list(suites)
    for s in suites:
        reason = applicable(s, params)
        if reason is not None:
            raise ValueError(reason)
    if threads > 1 and len(suites) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(suites))) as pool:
            return list(pool.map(_run_one, [(s, params, mode) for s in suites]))
    table = GeneratorTable(params)
    return [run_suite(s, params, mode, table) for s in suites]
