"""Explicit mean-value bounds, their hypotheses, and the exponent algebra.

Every bound is evaluated with ``o(1) = 0`` and implicit constants equal to
one. Only the trivial bound ``Psi^(rho-1)`` is a genuine inequality at finite
``x``; the others are reported as ratios against computed moments. Validity
and nontriviality predicates are evaluated in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import BoundViolation, DomainError
from .moments import MomentResult
from .smooth_core import ExponentParams, exponent_params

BOUND_IDS = ("TRIVIAL", "HARPER_MVT", "SUNIT", "THM1", "THM2", "COR_ENERGY")

TRIVIAL_REL_TOL = 1e-9

#: Default for the unknown absolute constant in Harper's smoothness hypothesis (caller-supplied, no published value).
DEFAULT_HARPER_K = 1.0
#: Default for the unknown O-constant in the S-unit bound (caller-supplied, no published value).
DEFAULT_SUNIT_C = 1.0


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    inputs: dict
    valid: bool
    reasons: tuple[str, ...]
    nontrivial: bool | None
    terms: dict[str, float]
    total: float
    # term name -> (power of Psi, power of x), exact where the inputs are rational
    shapes: dict[str, tuple] = field(default_factory=dict)
    overflow: bool = False
    x_exponent: float | None = None
    empirical: float | None = None
    ratio: float | None = None
    empirical_x_exponent: float | None = None
    empirical_psi_exponent: float | None = None


def _power_term(psi: float, x: float | None, a, b=0, extra_log: float = 0.0) -> float:
    """``Psi^a * x^b * exp(extra_log)``; ``inf`` when it overflows."""
    try:
        v = float(psi) ** float(a) * math.exp(extra_log)
        if b:
            v *= float(x) ** float(b)
        if math.isfinite(v) and v > 0:
            return v
    except OverflowError:
        pass
    # retry in log space: direct evaluation can overflow in an intermediate factor
    lg = float(a) * math.log(psi) + extra_log
    if b:
        lg += float(b) * math.log(x)
    try:
        return math.exp(lg)
    except OverflowError:
        return math.inf


def _log_ratio(v: float, base: float | None) -> float | None:
    if base is None or base <= 1 or not (v > 0) or math.isinf(v):
        return None
    return math.log(v) / math.log(base)


def _make(bound_id, inputs, valid, reasons, nontrivial, terms, shapes):
    total = math.inf if any(math.isinf(t) for t in terms.values()) else math.fsum(terms.values())
    return BoundReport(
        bound_id=bound_id,
        inputs=inputs,
        valid=bool(valid),
        reasons=tuple(reasons),
        nontrivial=nontrivial,
        terms=terms,
        total=total,
        shapes=shapes,
        overflow=math.isinf(total),
        x_exponent=_log_ratio(total, inputs.get("x")),
    )


def _check_psi(Psi) -> None:
    if Psi < 1:
        raise DomainError(f"Psi must be >= 1, got {Psi}")


def trivial_bound(rho, Psi: int, x: int | None = None, y: int | None = None) -> BoundReport:
    """``I_rho <= Psi^(rho-1)`` from Parseval; holds for every ``rho >= 2``."""
    _check_psi(Psi)
    if rho < 2:
        raise DomainError(f"the trivial bound needs rho >= 2, got {rho}")
    inputs = {"x": x, "y": y, "rho": rho, "psi": Psi}
    terms = {"psi^(rho-1)": _power_term(Psi, x, rho - 1)}
    return _make("TRIVIAL", inputs, True, [], None, terms, {"psi^(rho-1)": (rho - 1, 0)})


def harper_mvt_bound(
    rho, Psi: int, x: int, y: int | None = None, harper_K: float = DEFAULT_HARPER_K
) -> BoundReport:
    """``Psi^rho / x`` under ``y >= (ln x)^(K_H (1 + 1/(rho - 2)))``.

    ``K_H`` is an unspecified absolute constant; the validity flag is only as
    good as the caller-supplied ``harper_K``.
    """
    _check_psi(Psi)
    reasons = [f"conditional: Harper's constant is unknown, evaluated with harper_K={harper_K}"]
    valid = False
    if rho <= 2:
        reasons.append("needs rho > 2")
    elif y is None:
        reasons.append("y not supplied")
    else:
        # y >= (ln x)^e  <=>  ln y >= e ln ln x, meaningful once ln x > 1
        e = harper_K * (1 + 1 / (float(rho) - 2))
        valid = x > math.e and y > 1 and math.log(y) >= e * math.log(math.log(x))
        if not valid:
            reasons.append("y below (ln x)^(K_H (1 + 1/(rho-2)))")
    inputs = {"x": x, "y": y, "rho": rho, "psi": Psi, "harper_K": harper_K}
    terms = {"psi^rho/x": _power_term(Psi, x, rho, -1)}
    return _make("HARPER_MVT", inputs, valid, reasons, None, terms, {"psi^rho/x": (rho, -1)})


def sunit_bound(s: int, Psi: int, y: float, C: float = DEFAULT_SUNIT_C) -> BoundReport:
    """``Psi^s + Psi^(s-1) exp(C y / ln y)`` for ``I_{2s}``; ``C`` is caller-supplied."""
    _check_psi(Psi)
    if s < 2 or y < 3 or not C > 0:
        raise DomainError(f"need s >= 2, y >= 3, C > 0; got s={s}, y={y}, C={C}")
    growth = C * y / math.log(y)
    terms = {
        "psi^s": _power_term(Psi, None, s),
        "psi^(s-1)*exp(C y/ln y)": _power_term(Psi, None, s - 1, extra_log=growth),
    }
    dominant = math.log(Psi) >= growth
    reasons = [f"O-constant evaluated with C={C} (caller-supplied, no published value)"]
    reasons.append("first term dominates" if dominant else "second term dominates")
    inputs = {"y": y, "rho": 2 * s, "psi": Psi, "C": C}
    return _make("SUNIT", inputs, True, reasons, None, terms, {"psi^s": (s, 0)})


def _need_rho(params: ExponentParams) -> Fraction:
    if params.rho is None:
        raise DomainError("this bound needs params with rho attached")
    return params.rho


def thm1_nontrivial(K, rho) -> bool:
    K, rho = Fraction(K), Fraction(rho)
    return K > 4 and rho > 4 * (K - 1) / (K - 3)


def thm1_bound(x: int, Psi: int, params: ExponentParams) -> BoundReport:
    """``Psi^rho/x + Psi^rho x^(-beta rho) + Psi x^(3(rho-2)/4)``; valid iff beta*rho > 1/2 and K > 3."""
    _check_psi(Psi)
    rho, beta, K = _need_rho(params), params.beta, params.K
    reasons = []
    if not beta * rho > Fraction(1, 2):
        reasons.append(f"beta*rho = {beta * rho} <= 1/2")
    if not K > 3:
        reasons.append(f"K = {K} <= 3")
    shapes = {
        "psi^rho/x": (rho, Fraction(-1)),
        "psi^rho*x^(-beta rho)": (rho, -beta * rho),
        "psi*x^(3(rho-2)/4)": (Fraction(1), 3 * (rho - 2) / 4),
    }
    terms = {k: _power_term(Psi, x, a, b) for k, (a, b) in shapes.items()}
    inputs = {"x": x, "rho": rho, "psi": Psi, "K": K}
    return _make("THM1", inputs, not reasons, reasons, thm1_nontrivial(K, rho), terms, shapes)


def thm2_bound(x: int, Psi: int, params: ExponentParams) -> BoundReport:
    """``Psi (x^(3(rho-2)/4) + x^((rho-2)(1-eta)))`` for 1/2 < beta*rho < 1, 2 < rho < 2K+4, K > 3."""
    _check_psi(Psi)
    rho, beta, K = _need_rho(params), params.beta, params.K
    reasons = []
    if not Fraction(1, 2) < beta * rho < 1:
        reasons.append(f"beta*rho = {beta * rho} outside (1/2, 1)")
    if not 2 < rho < 2 * K + 4:
        reasons.append(f"rho = {rho} outside (2, 2K+4)")
    if not K > 3:
        reasons.append(f"K = {K} <= 3")
    shapes = {
        "psi*x^(3(rho-2)/4)": (Fraction(1), 3 * (rho - 2) / 4),
        "psi*x^((rho-2)(1-eta))": (Fraction(1), (rho - 2) * (1 - params.eta)),
    }
    terms = {k: _power_term(Psi, x, a, b) for k, (a, b) in shapes.items()}
    nontrivial = K > 4 and params.eta > params.kappa
    inputs = {"x": x, "rho": rho, "psi": Psi, "K": K}
    return _make("THM2", inputs, not reasons, reasons, nontrivial, terms, shapes)


def cor_energy_bound(Psi: int, params: ExponentParams, x: int | None = None) -> BoundReport:
    """``E <= Psi^(3 - zeta)``, valid for K > 12."""
    _check_psi(Psi)
    K, zeta = params.K, params.zeta
    if zeta is None:
        raise DomainError(f"zeta is undefined at K = {K}")
    reasons = [] if K > 12 else [f"K = {K} <= 12"]
    shapes = {"psi^(3-zeta)": (3 - zeta, Fraction(0))}
    terms = {"psi^(3-zeta)": _power_term(Psi, x, 3 - zeta)}
    inputs = {"x": x, "rho": Fraction(4), "psi": Psi, "K": K}
    return _make("COR_ENERGY", inputs, not reasons, reasons, K > 12 and zeta > 0, terms, shapes)


def compare(report: BoundReport, moment: MomentResult) -> BoundReport:
    """Attach a computed moment to a report.

    Raises ``DomainError`` when rho, Psi or x disagree, and
    ``BoundViolation`` if the trivial bound is exceeded beyond 1e-9 relative.
    """
    inp = report.inputs
    if inp.get("rho") is not None and Fraction(inp["rho"]) != Fraction(moment.rho):
        raise DomainError(f"rho mismatch: bound {inp['rho']} vs moment {moment.rho}")
    for key, mval in (("psi", moment.psi), ("x", moment.x)):
        if inp.get(key) is not None and mval is not None and inp[key] != mval:
            raise DomainError(f"{key} mismatch: bound {inp[key]} vs moment {mval}")
    emp = float(moment.value)
    if report.bound_id == "TRIVIAL" and emp > report.total * (1 + TRIVIAL_REL_TOL):
        raise BoundViolation(f"moment {emp} exceeds trivial bound {report.total}")
    ratio = emp / report.total if report.total and not math.isinf(report.total) else None
    if report.bound_id == "TRIVIAL" and isinstance(moment.value, int) and not report.overflow:
        # exact integer moment against an integer bound: keep the ratio exact-rounded
        tb = inp["psi"] ** (Fraction(inp["rho"]) - 1)
        if isinstance(tb, Fraction) and tb.denominator == 1:
            ratio = float(Fraction(moment.value, int(tb)))
    return replace(
        report,
        empirical=emp,
        ratio=ratio,
        empirical_x_exponent=_log_ratio(emp, moment.x or inp.get("x")),
        empirical_psi_exponent=_log_ratio(emp, moment.psi or inp.get("psi")),
    )


@dataclass(frozen=True)
class IdentityCheck:
    ok: bool
    checks: dict[str, tuple]  # name -> (lhs, rhs, holds)

    def failures(self) -> list[str]:
        return [k for k, (_, _, good) in self.checks.items() if not good]


def _run_checks(pairs) -> IdentityCheck:
    checks = {}
    for name, fn in pairs:
        try:
            lhs, rhs = fn()
            checks[name] = (lhs, rhs, lhs == rhs)
        except ZeroDivisionError:
            checks[name] = (None, None, False)
    return IdentityCheck(all(v[2] for v in checks.values()), checks)


def exponent_identities(params: ExponentParams) -> IdentityCheck:
    """Exact identities linking gamma, beta, eta, xi and the Q-balancing equation."""
    rho = _need_rho(params)
    k, g, eta, xi = params.kappa, params.gamma, params.eta, params.xi
    psi_exp = 1 - k  # Psi = x^(1 - kappa) with o(1) = 0
    return _run_checks(
        [
            ("gamma = 2 beta", lambda: (g, 2 * params.beta)),
            ("xi = 1 - 2 eta", lambda: (xi, 1 - 2 * eta)),
            ("xi closed form", lambda: (xi, (2 + 2 * k + k * rho) / (2 + 3 * k * rho))),
            ("1/2 - gamma = 3 kappa/2", lambda: (Fraction(1, 2) - g, 3 * k / 2)),
            ("1/2 + gamma = 1 - 3 kappa/2", lambda: (Fraction(1, 2) + g, 1 - 3 * k / 2)),
            (
                "balance: xi (1 + 3 kappa rho/2) = 1 + kappa + kappa rho/2",
                lambda: (xi * (1 + 3 * k * rho / 2), 1 + k + k * rho / 2),
            ),
            (
                "balanced J1 exponent = J2 exponent",
                lambda: (
                    rho * psi_exp + 1 - g * rho + xi * (g * rho - 2),
                    psi_exp + rho / 2 - 1 + xi * (rho / 2 - 1),
                ),
            ),
            (
                "J2 exponent = (rho-2)(1-eta)",
                lambda: (rho / 2 - 1 + xi * (rho / 2 - 1), (rho - 2) * (1 - eta)),
            ),
        ]
    )


def corollary_consistency_check(params_or_K) -> IdentityCheck:
    """Verify the derivation of the energy exponent from the rho = 4 case, exactly."""
    p = params_or_K if isinstance(params_or_K, ExponentParams) else exponent_params(params_or_K)
    p = p.with_rho(4) if p.rho != 4 else p
    k, eta, zeta = p.kappa, p.eta, p.zeta
    den = 1 + 5 * k - 6 * k**2
    return _run_checks(
        [
            ("eta at rho=4", lambda: (eta, 3 * k / (2 + 12 * k))),
            ("2(1-eta) = (2+9k)/(1+6k)", lambda: (2 * (1 - eta), (2 + 9 * k) / (1 + 6 * k))),
            ("(1+6k)(1-k) = 1+5k-6k^2", lambda: ((1 + 6 * k) * (1 - k), den)),
            (
                "3 - zeta = 1 + (2+9k)/(1+5k-6k^2)",
                lambda: (3 - zeta, 1 + (2 + 9 * k) / den),
            ),
            (
                "Psi^(1) x^(2(1-eta)) = Psi^(3-zeta) with x = Psi^(1/(1-k))",
                lambda: (1 + 2 * (1 - eta) / (1 - k), 3 - zeta),
            ),
        ]
    )


def all_bounds(
    x: int,
    y: int,
    Psi: int,
    params: ExponentParams,
    harper_K: float = DEFAULT_HARPER_K,
    sunit_C: float = DEFAULT_SUNIT_C,
    ids=BOUND_IDS,
) -> list[BoundReport]:
    """Evaluate each requested bound at one ``(x, y, rho)`` point; inapplicable ones are skipped."""
    rho = _need_rho(params)
    out = []
    for bid in ids:
        if bid == "TRIVIAL" and rho >= 2:
            out.append(trivial_bound(rho, Psi, x, y))
        elif bid == "HARPER_MVT":
            out.append(harper_mvt_bound(rho, Psi, x, y, harper_K))
        elif bid == "SUNIT" and rho.denominator == 1 and rho % 2 == 0 and rho >= 4 and y >= 3:
            r = sunit_bound(int(rho) // 2, Psi, y, sunit_C)
            out.append(replace(r, inputs={**r.inputs, "x": x}, x_exponent=_log_ratio(r.total, x)))
        elif bid == "THM1":
            out.append(thm1_bound(x, Psi, params))
        elif bid == "THM2":
            out.append(thm2_bound(x, Psi, params))
        elif bid == "COR_ENERGY" and rho == 4 and params.zeta is not None:
            out.append(cor_energy_bound(Psi, params, x))
    return out
