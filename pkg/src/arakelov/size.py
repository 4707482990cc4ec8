"""Sizes h0/k0 of divisors, Riemann-Roch defects, bounds, scans, eta.

h0(D) = log sum_{f in I} exp(-pi |f|_D^2) is evaluated through the lattice
layer and kept in log space end to end, so quantities like h0(D_{-3}) over Q
(about 1e-550) and the Hermite-limit functional B0(d, x) down to d = -50 stay
meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .divisors import (ArakelovDivisor, canonical_divisor, chi, degree,
                       dual_divisor, pic_point, supports_pic_points,
                       trivial_divisor)
from .errors import ValidationError
from .field import NumberField
from .lattice import DEFAULT_BUDGET, ThetaResult, realize
from .special import gamma_fn


@dataclass
class SizeEvaluation:
    divisor: ArakelovDivisor
    theta: ThetaResult
    degree: float
    chi: float

    @property
    def h0(self) -> float:
        return self.theta.h0

    @property
    def k0(self) -> float:
        return self.theta.k0

    @property
    def log_h0(self) -> float:
        return self.theta.log_h0


@dataclass
class EtaReport:
    field_label: str
    eta: float
    omega_power: float
    algebraic_factor: float
    theta: ThetaResult
    closed_form_value: float | None = None
    abs_error: float | None = None
    codifferent_variant: float | None = None


@dataclass
class ScanResult:
    field_label: str
    d: float
    regulator: float
    xs: list[float]
    h0: list[float]
    log_k0_minus_1: list[float]
    argmax_x: float
    max_h0: float
    step: float
    tol: float
    metadata: dict = dc_field(default_factory=dict)

    def write_csv(self, path) -> None:
        """CSV with header x,h0,log_k0_minus_1 plus a JSON metadata sidecar."""
        import json
        from pathlib import Path
        from . import __version__
        path = Path(path)
        lines = ["x,h0,log_k0_minus_1"]
        for x, h, ell in zip(self.xs, self.h0, self.log_k0_minus_1):
            lines.append(f"{x!r},{h!r},{ell!r}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        sidecar = dict(self.metadata, field=self.field_label, d=self.d,
                       R=self.regulator, tolerance=self.tol,
                       version=__version__)
        path.with_suffix(".json").write_text(
            json.dumps(sidecar, sort_keys=True) + "\n", encoding="utf-8")


def h0(div: ArakelovDivisor, tol: float = 1e-10,
       budget: int = DEFAULT_BUDGET, precision: str = "std") -> SizeEvaluation:
    theta = realize(div, budget).theta_sum(tol, budget, precision)
    return SizeEvaluation(divisor=div, theta=theta,
                          degree=degree(div), chi=chi(div))


def rr_defect(div: ArakelovDivisor, tol: float = 1e-10,
              budget: int = DEFAULT_BUDGET) -> float:
    """h0(D) - h0(kappa - D) - (deg D - (1/2) log|disc|); zero by Riemann-Roch."""
    left = h0(div, tol, budget).h0
    right = h0(dual_divisor(div), tol, budget).h0
    expected = degree(div) - 0.5 * math.log(abs(div.field.discriminant))
    return left - right - expected


def b0(fld: NumberField, d: float, x: float, tol: float = 1e-10,
       budget: int = DEFAULT_BUDGET) -> float:
    """-log((1/2) h0(D_x)) / (2 pi exp(-d)) on the real quadratic family.

    Computed from log h0, so it stays finite when h0 underflows (d down to
    -50 and beyond). Converges to the half-covolume-normalized Hermite
    constant of the x-slice as d -> -infinity.
    """
    if not supports_pic_points(fld) or fld.degree != 2:
        raise ValidationError(
            "B0 is defined on the real quadratic class-number-one family")
    ev = h0(pic_point(fld, d, x), tol, budget)
    log_half_h0 = ev.theta.log_h0 - math.log(2.0)
    return -log_half_h0 / (2.0 * math.pi * math.exp(-d))


def _scan_xs(regulator: float, step: float):
    count = max(int(math.ceil(regulator / step)), 2)
    return [regulator * i / count for i in range(count)]


def pic0_scan(fld: NumberField, d: float = 0.0, step: float = None,
              tol: float = 1e-10, budget: int = DEFAULT_BUDGET,
              ideal=None, metadata_extra=None) -> ScanResult:
    """Sample h0(D_x) over one period x in [0, R) of Pic^(d).

    `ideal` replaces the trivial ideal to sweep a nontrivial class (used for
    descriptor-supplied class representatives; flagged in metadata).
    """
    if fld.degree == 1:
        raise ValidationError(
            "Pic^0 of Q is trivial; scan the degree line instead (cmd scan)")
    if not supports_pic_points(fld) and ideal is None:
        raise ValidationError(
            f"{fld.label}: no Picard parametrization; supply a class "
            "representative ideal")
    reg = fld.regulator()
    if reg is None:
        raise ValidationError(f"{fld.label} has no regulator (imaginary field?)")
    if step is None:
        step = reg / 256.0
    if step <= 0:
        raise ValidationError("step must be positive")
    xs = _scan_xs(reg, step)
    h0s = []
    ells = []
    for x in xs:
        base = pic_point(fld, d, x) if ideal is None else None
        if base is None:
            div = ArakelovDivisor(ideal, (d / 2.0 - x, d / 2.0 + x))
        else:
            div = base
        theta = realize(div, budget).theta_sum(tol, budget)
        h0s.append(theta.h0)
        ells.append(theta.log_k0_minus_1)
    imax = max(range(len(xs)), key=lambda i: h0s[i])
    meta = {"field": fld.label, "d": d, "R": reg, "tol": tol,
            "points": len(xs)}
    if ideal is not None:
        meta["class_sweep"] = True
    if metadata_extra:
        meta.update(metadata_extra)
    return ScanResult(field_label=fld.label, d=d, regulator=reg, xs=xs,
                      h0=h0s, log_k0_minus_1=ells, argmax_x=xs[imax],
                      max_h0=h0s[imax], step=step, tol=tol, metadata=meta)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section_max(f, a: float, b: float, x_tol: float):
    """Golden-section maximization of a unimodal f on [a, b]."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > x_tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    return (0.5 * (a + b), max(f1, f2))


def pic0_argmax(fld: NumberField, tol: float = 1e-10, grid: int = 2048,
                budget: int = DEFAULT_BUDGET, warn=None):
    """Maximize h0 on Pic^0: coarse grid over one period, then golden-section
    refinement from the top grid brackets. Returns (x_star, h0_star) with
    x_star reported in [-R/2, R/2).

    The conjecture this probes assumes the field is Galois over Q or over an
    imaginary quadratic field; outside that hypothesis a warning is issued
    (quadratic fields are always Galois; the check matters for descriptors).
    """
    if fld.degree == 1:
        return 0.0, h0(trivial_divisor(fld), tol, budget).h0
    if fld.degree == 2 and fld.r1 == 0:
        return 0.0, h0(trivial_divisor(fld), tol, budget).h0
    if fld.degree > 2 and warn is not None:
        warn(f"{fld.label}: the maximum-at-origin conjecture assumes a Galois "
             "or CM-over-imaginary-quadratic field; interpret with care")
    scan = pic0_scan(fld, 0.0, step=fld.regulator() / grid, tol=tol,
                     budget=budget)
    xs, hs = scan.xs, scan.h0
    reg = scan.regulator
    count = len(xs)

    def value(x: float) -> float:
        return realize(pic_point(fld, 0.0, x), budget).theta_sum(tol, budget).h0

    order = sorted(range(count), key=lambda i: -hs[i])
    best = (xs[order[0]], hs[order[0]])
    seen = set()
    for idx in order[:5]:
        lo = xs[(idx - 1) % count] if idx > 0 else xs[idx] - scan.step
        hi = xs[(idx + 1) % count] if idx + 1 < count else xs[idx] + scan.step
        if idx in seen:
            continue
        seen.update(((idx - 1) % count, idx, (idx + 1) % count))
        cand = _golden_section_max(value, lo, hi, 1e-8)
        if cand[1] > best[1]:
            best = cand
    x_star = math.fmod(best[0], reg)
    if x_star >= reg / 2.0:
        x_star -= reg
    elif x_star < -reg / 2.0:
        x_star += reg
    return x_star, best[1]


def bound_check(div: ArakelovDivisor, tol: float = 1e-10,
                budget: int = DEFAULT_BUDGET) -> dict:
    """Evaluate both sides of the decay bound (deg <= (1/2)log|disc|) and of
    the slope bound h0(D) <= deg(D) + h0(O_F) (deg >= 0). Violations are
    reported as findings, never raised."""
    fld = div.field
    n = fld.degree
    ev = h0(div, tol, budget)
    d = ev.degree
    half_log_disc = 0.5 * math.log(abs(fld.discriminant))
    report = {"degree": d, "h0": ev.h0, "log_k0_minus_1": ev.theta.log_k0_minus_1,
              "flags": []}
    if d <= half_log_disc:
        decay_exponent = -math.pi * n * math.exp(-2.0 * d / n)
        log_beta = ev.theta.log_k0_minus_1 - decay_exponent
        report["decay_bound"] = {
            "applies": True,
            "log_decay_envelope": decay_exponent,
            "log_beta_implied": log_beta,
            "h0_below_k0_minus_1": bool(
                ev.theta.log_h0 <= ev.theta.log_k0_minus_1 + 1e-12),
        }
        if not report["decay_bound"]["h0_below_k0_minus_1"]:
            report["flags"].append("h0 exceeds k0 - 1")
    else:
        report["decay_bound"] = {"applies": False}
    if d >= 0:
        base = h0(trivial_divisor(fld), tol, budget).h0
        rhs = d + base
        holds = ev.h0 <= rhs + 100 * tol
        report["slope_bound"] = {"applies": True, "rhs": rhs, "holds": bool(holds),
                                 "slack": rhs - ev.h0}
        if not holds:
            report["flags"].append("h0 exceeds deg + h0(O_F)")
    else:
        report["slope_bound"] = {"applies": False}
    return report


def omega_constants() -> tuple[float, float]:
    """(omega, omega_0): pi^(1/4)/Gamma(3/4) and Gamma(1/4)^2/(4 sqrt(2 pi))."""
    omega = math.pi ** 0.25 / gamma_fn(0.75)
    omega0 = gamma_fn(0.25) ** 2 / (4.0 * math.sqrt(2.0 * math.pi))
    return float(omega), float(omega0)


# Closed forms for eta on the worked examples, keyed by (degree, discriminant).
def _eta_closed_forms() -> dict:
    omega, _ = omega_constants()
    s = math.sqrt
    return {
        (1, 1): omega,
        (2, -4): omega ** 2 * (2.0 + s(2.0)) / 4.0,
        (2, -3): omega ** 2 * ((2.0 + s(3.0)) / (4.0 * s(3.0))) ** 0.25,
        (3, 49): omega ** 3 * (7.0 + 3.0 * s(7.0) + 3.0 * s(2.0 * s(7.0))) / 28.0,
        (4, 125): omega ** 4 * (23.0 + s(5.0)) / 20.0 * s((1.0 + s(5.0)) / 10.0),
    }


def eta_invariant(fld: NumberField, tol: float = 1e-10,
                  budget: int = DEFAULT_BUDGET, precision: str = "std",
                  include_codifferent_variant: bool = False) -> EtaReport:
    """eta(F) = k0 of the trivial divisor with the trivial metric.

    The summation set is the ring of integers: that convention reproduces the
    worked closed-form values (the codifferent-sum variant, available under a
    flag, differs from it by the factor sqrt|disc| via Poisson summation).
    """
    theta = realize(trivial_divisor(fld), budget).theta_sum(tol, budget, precision)
    omega, _ = omega_constants()
    omega_power = omega ** fld.degree
    eta = theta.k0
    closed = _eta_closed_forms().get((fld.degree, fld.discriminant))
    report = EtaReport(
        field_label=fld.label,
        eta=eta,
        omega_power=omega_power,
        algebraic_factor=eta / omega_power,
        theta=theta,
        closed_form_value=closed,
        abs_error=abs(eta - closed) if closed is not None else None,
    )
    if include_codifferent_variant:
        dual = realize(canonical_divisor(fld), budget).theta_sum(tol, budget)
        report.codifferent_variant = dual.k0
    return report
