"""Dense-grid verification of every supporting inequality, with reports.

Each registered check sweeps a deterministic grid, evaluates one or more
margins (left side minus right side, so nonnegative means the inequality
holds), and records violations plus the smallest margin seen.  Margins that
land within a per-check threshold of zero are re-evaluated in double-double
arithmetic when the expression allows it, so sign decisions never rest on
float roundoff.  Grids are nested: doubling the resolution keeps every
previously checked point.

The module also assembles per-point stability certificates and writes the
region-figure artifacts.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ddouble import DOUBLE_DOUBLE, FLOAT
from .params import (
    MU_SECTOR_MAX,
    NormParams,
    Region,
    RegionLabel,
    classify,
    linear_boundary_theta,
    local_stability_boundary,
    pi_curve,
    sharp_boundary_theta,
    write_region_csv,
    write_region_json,
)
from .ratmaps import (
    R2_eval,
    R_eval,
    coeffs,
    coeffs_generic,
    gamma_coeff,
    r_eval,
    schwarz_margin,
    chi_iterate,
    _j_tangent_coeffs,
    _j_generic,
)
from .onedmaps import (
    F1_solve_r,
    F_solve_r,
    Q_poly,
    _g1_parts,
    bound_G1,
    bound_L,
    lambda_composite,
    q_poly_generic,
    ramp_slope_ratio,
    s_poly_generic,
    t_chain_generic,
)

__all__ = [
    "LemmaReport",
    "LEMMA_IDS",
    "verify_lemma",
    "verify_all",
    "write_report",
    "Fact",
    "Certificate",
    "certificate",
    "sweep_figures",
]


@dataclass
class LemmaReport:
    """Grid-sweep outcome for one registered inequality."""

    lemma_id: str
    resolution: int
    grid_spec: str
    points_checked: int
    violations: list[dict]
    min_margin: float

    def to_json_dict(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "resolution": self.resolution,
            "grid_spec": self.grid_spec,
            "points": self.points_checked,
            "violations": self.violations,
            "min_margin": self.min_margin,
        }


@dataclass(frozen=True)
class _LemmaSpec:
    lemma_id: str
    dd_capable: bool
    gen: Callable[[int], tuple[str, list[dict]]]
    margins: Callable[[dict, object], list[tuple[str, object]]]
    dd_threshold: float = 1e-6
    min_margin_override: Callable[[], float] | None = None


_REGISTRY: dict[str, _LemmaSpec] = {}


def _register(spec: _LemmaSpec) -> None:
    _REGISTRY[spec.lemma_id] = spec


# ---------------------------------------------------------------------------
# grid builders


def _band_points(resolution: int, region: str) -> list[dict]:
    """Full-resolution product grid over the certified band (or a sub-band)."""
    pts = []
    n = resolution
    for i in range(1, n):
        mu = i / n
        lo = pi_curve(2, mu)
        hi = pi_curve(1, mu)
        if hi <= lo:
            continue
        if region == "S":
            lo = max(lo, pi_curve(3, mu), 0.8)
            hi = min(hi, 1.0 - 1e-6)
            if lo > hi:
                continue
        for j in range(n + 1):
            th = lo + (hi - lo) * j / n
            if region == "Dstar" and th >= 0.8 and pi_curve(3, mu) <= th:
                continue
            pts.append({"mu": mu, "theta": th, "a": -1.0 / mu})
    return pts


def _capped_band_points(n_mu: int, n_th: int, region: str) -> list[dict]:
    """Cell-centered band sample with a fixed (resolution-free) shape."""
    pts = []
    mu_top = MU_SECTOR_MAX if region == "S" else 1.0
    for i in range(n_mu):
        mu = mu_top * (i + 1) / (n_mu + 1)
        lo = pi_curve(2, mu)
        hi = pi_curve(1, mu)
        if region == "S":
            lo = max(lo, pi_curve(3, mu), 0.8)
            hi = min(hi, 1.0 - 1e-6)
        if hi <= lo:
            continue
        for j in range(n_th):
            th = lo + (hi - lo) * (j + 0.5) / n_th
            if region == "Dstar" and th >= 0.8 and pi_curve(3, mu) <= th:
                continue
            pts.append({"mu": mu, "theta": th, "a": -1.0 / mu})
    return pts


def _slope_theta_points(n_a: int = 32, n_th: int = 9) -> list[dict]:
    """Plain (slope, theta) rectangle for the comparison-function checks."""
    pts = []
    for i in range(n_a):
        a = -1.05 - (10.0 - 1.05) * i / (n_a - 1)
        for j in range(n_th):
            th = 0.1 + 0.1 * j
            pts.append({"a": a, "theta": th})
    return pts


def _schwarz_param_points(n_a: int = 32, n_th: int = 9) -> list[dict]:
    pts = []
    for i in range(n_a):
        a = -1.05 - (4.0 - 1.05) * i / (n_a - 1)
        th_lo = linear_boundary_theta(a)
        for j in range(n_th):
            th = th_lo + (1.0 - 1e-6 - th_lo) * j / (n_th - 1)
            pts.append({"a": a, "theta": th})
    return pts


# ---------------------------------------------------------------------------
# margin sets


def _margins_albet(pt: dict, mx) -> list:
    one = mx.num(1.0)
    _, alpha, beta, _ = coeffs_generic(pt["a"], pt["theta"], mx)
    return [
        ("alpha_pos", alpha),
        ("alpha_below_one", one - alpha),
        ("beta_pos", beta),
    ]


def _margins_albeta(pt: dict, mx) -> list:
    one = mx.num(1.0)
    a = mx.num(pt["a"]) * one
    _, alpha, _, _ = coeffs_generic(pt["a"], pt["theta"], mx)
    prod = a * alpha
    return [
        ("slope_product_above_minus_one", one + prod),
        ("slope_product_negative", -prod),
    ]


def _margins_dom(pt: dict, mx) -> list:
    one = mx.num(1.0)
    mu = mx.num(pt["mu"]) * one
    th = mx.num(pt["theta"]) * one
    a = mx.num(pt["a"]) * one
    k = a * (th - one)
    pi1 = (one - mu) / (one + mu * mu)
    pi2 = mx.log((one + mu) / (one + mu * mu)) / mu
    _, _, _, a_star = coeffs_generic(pt["a"], pt["theta"], mx)
    return [
        ("band_width", pi1 - pi2),
        ("slope_delay_low", k - one),
        ("slope_delay_high", 1.5 * one - k),
        ("branch_slope_below_minus_one", -one - a_star),
        ("interval_proper", k - th),
    ]


def _margins_jcal_tangent(pt: dict, mx) -> list:
    one = mx.num(1.0)
    r = mx.num(pt["r"]) * one
    j0, j1 = _j_tangent_coeffs(pt["a"], pt["theta"], mx)
    jv = _j_generic(pt["r"], pt["a"], pt["theta"], mx)
    return [("tangent_dominates", j0 + j1 * r - jv)]


_FD_STEP_J = 0.02


def _margins_jcal_concavity(pt: dict, mx) -> list:
    r = pt["r"]
    a = pt["a"]
    th = pt["theta"]

    def j(rr: float) -> float:
        return float(_j_generic(rr, a, th, FLOAT))

    h = _FD_STEP_J
    second = (
        -j(r - 2.0 * h) + 16.0 * j(r - h) - 30.0 * j(r) + 16.0 * j(r + h) - j(r + 2.0 * h)
    ) / (12.0 * h * h)
    return [("concave", -second)]


def _margins_leform1(pt: dict, mx) -> list:
    np_ = NormParams(a=pt["a"], theta=pt["theta"])
    c = coeffs(np_)
    rz = pt["r"]
    f_val = F_solve_r(rz, np_).value
    return [
        ("response_above_tangent_bound", f_val - bound_L(rz, np_)),
        ("response_above_moebius", f_val - R_eval(rz, c)),
    ]


def _margins_plyus(pt: dict, mx) -> list:
    np_ = NormParams(a=pt["a"], theta=pt["theta"])
    c = coeffs(np_)
    rz = pt["r"]
    f_val = F_solve_r(rz, np_).value
    return [("response_below_moebius", R_eval(rz, c) - f_val)]


def _margins_leform2(pt: dict, mx) -> list:
    np_ = NormParams(a=pt["a"], theta=pt["theta"])
    c = coeffs(np_)
    rz = pt["r"]
    f1_val = F1_solve_r(rz, np_).value
    P = ramp_slope_ratio(rz, np_) / rz
    _, _, B0, B1, B2 = _g1_parts(P, np_)
    den = B0 + rz * (B1 + rz * B2)
    g1_val = bound_G1(rz, np_, P)
    return [
        ("taylor_denominator_pos", den),
        ("ramp_above_taylor", f1_val - g1_val),
        ("ramp_above_moebius", f1_val - R_eval(rz, c)),
    ]


def _margins_lele(pt: dict, mx) -> list:
    a = pt["a"]
    th = pt["theta"]
    _, alpha, beta, a_star = coeffs_generic(a, th, mx)
    q_deep = q_poly_generic(a, a, th, mx, alpha=alpha, beta=beta)
    q_branch = q_poly_generic(a_star, a, th, mx, alpha=alpha, beta=beta)
    return [
        ("certificate_nonpos_deep_end", -q_deep),
        ("certificate_nonpos_branch_end", -q_branch),
    ]


def _margins_leleka(pt: dict, mx) -> list:
    a = pt["a"]
    th = pt["theta"]
    r = pt["r"]
    _, alpha, beta, _ = coeffs_generic(a, th, mx)
    out = [
        ("derivative_pos", s_poly_generic(r, a, th, mx, alpha=alpha, beta=beta)),
        ("certificate_nonpos", -q_poly_generic(r, a, th, mx, alpha=alpha, beta=beta)),
    ]
    if pt.get("first_r"):
        t3, t2, t1_, t0 = t_chain_generic(a, th, mx, alpha=alpha)
        out.extend(
            [
                ("chain_t3_gt_t2", t3 - t2),
                ("chain_t2_gt_t1", t2 - t1_),
                ("chain_t1_gt_t0", t1_ - t0),
            ]
        )
    return out


def _margins_funcrr2(pt: dict, mx) -> list:
    from .ddesim import History, _parabola_refine, integrate

    a = pt["a"]
    th = pt["theta"]
    r = pt["r"]
    np_ = NormParams(a=a, theta=th)
    h = np_.delay
    z = r / (a - r)
    tc = math.log(1.0 - (1.0 + z) / a)

    def w(x):
        return a * x / (1.0 + x)

    tr = integrate(w, History.constant(z), np_, tc + 3.0 * h)
    y = tr.values
    s = tr.step
    i_lo = max(1, int(math.ceil(tc / s - 1e-9)))
    im = i_lo + int(np.argmin(y[i_lo:]))
    if 1 <= im <= len(y) - 2:
        _, x_min = _parabola_refine(y, im, 0.0, s)
    else:
        x_min = float(y[im])
    return [("dip_above_corner_bound", x_min - R2_eval(r, np_))]


def _margins_lele2(pt: dict, mx) -> list:
    one = mx.num(1.0)
    q = mx.num(pt["q"]) * one
    k = mx.num(pt["k"]) * one
    a = float(pt["k"]) / float(pt["q"])
    th = 1.0 + float(pt["q"])
    ell = mx.log1p(q)
    corner = ((-q + ell) / (one - q + ell)) * k * k / (q * q - k * (-q + ell))
    _, _, beta, _ = coeffs_generic(a, th, mx)
    a_dd = mx.num(a) * one
    rv = a_dd * corner / (one + corner)
    return [
        ("corner_above_minus_one", corner + one),
        ("corner_image_in_domain", one - rv * beta),
    ]


def _margins_expo(pt: dict, mx) -> list:
    one = mx.num(1.0)
    x = mx.num(pt["x"]) * one
    ex = mx.exp(x)
    if pt["x"] < 0.0:
        return [
            ("exp_above_linear", ex - one - x),
            ("exp_below_quadratic", one + x + x * x / 2.0 - ex),
        ]
    return [
        ("exp_above_cubic", ex - (one + x + x * x / 2.0 + x * x * x / 6.0)),
    ]


def _margins_r303(pt: dict, mx) -> list:
    one = mx.num(1.0)
    q = mx.num(pt["q"]) * one
    cubic = q - 0.5 * q * q + 0.4 * q * q * q
    return [("log_above_cubic", mx.log1p(q) - cubic)]


def _r303_endpoint_margin() -> float:
    m = _margins_r303({"q": -0.2}, DOUBLE_DOUBLE)
    return float(m[0][1])


def _margins_gss(pt: dict, mx) -> list:
    return [
        ("straightened_map_schwarz_neg", schwarz_margin(pt["x"], pt["a"], pt["theta"], mx))
    ]


# ---------------------------------------------------------------------------
# generators


def _gen_albet(n: int):
    return (
        f"band D product grid: mu=i/{n} (i=1..{n - 1}), theta=lo+(hi-lo)*j/{n} (j=0..{n})",
        _band_points(n, "D"),
    )


def _gen_albeta(n: int):
    pts = []
    for i in range(1, n):
        mu = i / n
        lo = pi_curve(2, mu)
        hi = pi_curve(1, mu)
        if hi <= lo:
            continue
        for j in range(1, n + 1):
            th = lo + (hi - lo) * j / n
            pts.append({"mu": mu, "theta": th, "a": -1.0 / mu})
    return (
        f"band D interior grid: mu=i/{n} (i=1..{n - 1}), theta=lo+(hi-lo)*j/{n} (j=1..{n}; "
        "lower edge excluded where the product degenerates to -1)",
        pts,
    )


def _gen_dom(n: int):
    return (
        f"band D product grid: mu=i/{n} (i=1..{n - 1}), theta=lo+(hi-lo)*j/{n} (j=0..{n})",
        _band_points(n, "D"),
    )


def _gen_jcal_tangent(n: int):
    pts = []
    for base in _slope_theta_points():
        for k in range(1, n + 1):
            r = -0.25 + 5.25 * k / n
            if abs(r) < 1e-12:
                continue  # tangency point, equality by construction
            pts.append({**base, "r": r})
    return (
        f"slope-theta rectangle (32x9) times r=-0.25+5.25*k/{n} (k=1..{n}, r=0 skipped)",
        pts,
    )


def _gen_jcal_concavity(n: int):
    pts = []
    for base in _slope_theta_points():
        for k in range(n + 1):
            r = -0.2 + 5.2 * k / n
            pts.append({**base, "r": r})
    return (
        f"slope-theta rectangle (32x9) times r=-0.2+5.2*k/{n} (k=0..{n}; "
        "0.05 clearance keeps the difference stencil inside the domain)",
        pts,
    )


def _gen_leform1(n: int):
    pts = []
    for base in _capped_band_points(32, 9, "D"):
        np_ = NormParams(a=base["a"], theta=base["theta"])
        a_star = coeffs(np_).a_star
        for k in range(n):
            pts.append({**base, "r": a_star * (1.0 - k / n)})
    return (
        f"cell-centered band sample (32x9) times r=a_star*(1-k/{n}) (k=0..{n - 1})",
        pts,
    )


def _gen_plyus(n: int):
    pts = []
    for base in _capped_band_points(32, 9, "D"):
        np_ = NormParams(a=base["a"], theta=base["theta"])
        beta = coeffs(np_).beta
        for k in range(1, n):
            pts.append({**base, "r": (1.0 / beta) * k / n})
    return (
        f"cell-centered band sample (32x9) times r=(1/beta)*k/{n} (k=1..{n - 1})",
        pts,
    )


def _gen_leform2(n: int):
    pts = []
    for base in _capped_band_points(32, 9, "D"):
        np_ = NormParams(a=base["a"], theta=base["theta"])
        a = base["a"]
        a_star = coeffs(np_).a_star
        for k in range(1, n + 1):
            pts.append({**base, "r": a + (a_star - a) * k / n})
    return (
        f"cell-centered band sample (32x9) times r=a+(a_star-a)*k/{n} (k=1..{n})",
        pts,
    )


def _gen_lele(n: int):
    return (
        f"band D-minus-corner product grid: mu=i/{n} (i=1..{n - 1}), theta rows j=0..{n}",
        _band_points(n, "Dstar"),
    )


def _gen_leleka(n: int):
    pts = []
    for base in _capped_band_points(32, 9, "Dstar"):
        np_ = NormParams(a=base["a"], theta=base["theta"])
        a = base["a"]
        a_star = coeffs(np_).a_star
        for k in range(n + 1):
            pt = {**base, "r": a + (a_star - a) * k / n}
            if k == 0:
                pt["first_r"] = True
            pts.append(pt)
    return (
        f"cell-centered band sample (32x9, corner excluded) times r=a+(a_star-a)*k/{n} (k=0..{n})",
        pts,
    )


def _gen_funcrr2(n: int):
    m = min(n, 128)
    pts = []
    for base in _capped_band_points(8, 5, "S"):
        a = base["a"]
        for k in range(1, m):
            pts.append({**base, "r": a * (1.0 - k / m)})
    return (
        f"cell-centered corner sample (8x5) times r=a*(1-k/{m}) (k=1..{m - 1}; "
        "r-axis capped at 128, simulation-backed)",
        pts,
    )


def _gen_lele2(n: int):
    pts = []
    for i in range(n):
        q = -0.2 + 0.2 * i / n
        for j in range(n + 1):
            k = 1.0 + 0.5 * j / n
            pts.append({"q": q, "k": k})
    return (
        f"box grid: q=-0.2+0.2*i/{n} (i=0..{n - 1}), k=1+0.5*j/{n} (j=0..{n})",
        pts,
    )


def _gen_expo(n: int):
    pts = []
    for i in range(n + 1):
        x = -5.0 + 10.0 * i / n
        if abs(x) < 1e-12:
            continue
        pts.append({"x": x})
    return (f"x=-5+10*i/{n} (i=0..{n}, x=0 skipped)", pts)


def _gen_r303(n: int):
    pts = [{"q": -0.2 + 0.2 * i / n} for i in range(n)]
    return (
        f"q=-0.2+0.2*i/{n} (i=0..{n - 1}); reported min_margin is the q=-0.2 endpoint value",
        pts,
    )


def _gen_gss(n: int):
    pts = []
    for base in _schwarz_param_points():
        for k in range(1, n + 1):
            pts.append({**base, "x": -0.9 + 10.9 * k / n})
    return (
        f"slope-theta rectangle (32x9, theta from the linear threshold up) "
        f"times x=-0.9+10.9*k/{n} (k=1..{n})",
        pts,
    )


def _build_registry() -> None:
    _register(_LemmaSpec("albet", True, _gen_albet, _margins_albet))
    _register(_LemmaSpec("albeta", True, _gen_albeta, _margins_albeta))
    _register(_LemmaSpec("dom", True, _gen_dom, _margins_dom))
    _register(
        _LemmaSpec(
            "jcal_tangent", True, _gen_jcal_tangent, _margins_jcal_tangent, dd_threshold=1e-11
        )
    )
    _register(_LemmaSpec("jcal_concavity", False, _gen_jcal_concavity, _margins_jcal_concavity))
    _register(_LemmaSpec("leform1", False, _gen_leform1, _margins_leform1))
    _register(_LemmaSpec("plyus", False, _gen_plyus, _margins_plyus))
    _register(_LemmaSpec("leform2", False, _gen_leform2, _margins_leform2))
    _register(_LemmaSpec("lele", True, _gen_lele, _margins_lele))
    _register(_LemmaSpec("leleka", True, _gen_leleka, _margins_leleka))
    _register(_LemmaSpec("funcrr2", False, _gen_funcrr2, _margins_funcrr2))
    _register(_LemmaSpec("lele2", True, _gen_lele2, _margins_lele2))
    _register(_LemmaSpec("expo_bounds", True, _gen_expo, _margins_expo))
    _register(
        _LemmaSpec(
            "r303",
            True,
            _gen_r303,
            _margins_r303,
            min_margin_override=_r303_endpoint_margin,
        )
    )
    _register(_LemmaSpec("gsslemma_schwarz", True, _gen_gss, _margins_gss))


_build_registry()

LEMMA_IDS = list(_REGISTRY)


# ---------------------------------------------------------------------------
# evaluation


def _eval_points(lemma_id: str, points: list[dict]) -> tuple[list[dict], float]:
    spec = _REGISTRY[lemma_id]
    violations: list[dict] = []
    min_margin = math.inf
    for pt in points:
        dd_cache = None
        for label, m in spec.margins(pt, FLOAT):
            mf = float(m)
            if spec.dd_capable and abs(mf) < spec.dd_threshold:
                if dd_cache is None:
                    dd_cache = {l: v for l, v in spec.margins(pt, DOUBLE_DOUBLE)}
                mf = float(dd_cache[label])
            if mf < min_margin:
                min_margin = mf
            if mf < 0.0:
                entry = {k: v for k, v in pt.items() if k != "first_r"}
                entry["check"] = label
                entry["margin"] = mf
                violations.append(entry)
    return violations, min_margin


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("DDE_STAB_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def verify_lemma(lemma_id: str, resolution: int = 256, threads: int | None = None) -> LemmaReport:
    """Sweep one registered inequality at the given grid resolution."""
    if lemma_id not in _REGISTRY:
        raise KeyError(f"unknown check id {lemma_id!r}; known: {', '.join(LEMMA_IDS)}")
    if resolution < 4:
        raise ValueError("resolution must be at least 4")
    spec = _REGISTRY[lemma_id]
    grid_spec, points = spec.gen(resolution)
    n_workers = _thread_count(threads)
    if n_workers == 1 or len(points) < 512:
        violations, min_margin = _eval_points(lemma_id, points)
    else:
        chunk = max(64, len(points) // (n_workers * 4) + 1)
        chunks = [points[i : i + chunk] for i in range(0, len(points), chunk)]
        violations = []
        min_margin = math.inf
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for vios, mm in pool.map(_eval_points, [lemma_id] * len(chunks), chunks):
                violations.extend(vios)
                min_margin = min(min_margin, mm)
    if spec.min_margin_override is not None:
        min_margin = spec.min_margin_override()
    return LemmaReport(
        lemma_id=lemma_id,
        resolution=resolution,
        grid_spec=grid_spec,
        points_checked=len(points),
        violations=violations,
        min_margin=min_margin,
    )


def write_report(report: LemmaReport, out_dir) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{report.lemma_id}.json")
    with open(path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def verify_all(
    resolution: int = 256,
    threads: int | None = None,
    out_dir=None,
    progress: Callable[[str], None] | None = None,
) -> list[LemmaReport]:
    """Run every registered check; optionally write one JSON report each."""
    reports = []
    for lemma_id in LEMMA_IDS:
        rep = verify_lemma(lemma_id, resolution=resolution, threads=threads)
        if out_dir is not None:
            write_report(rep, out_dir)
        if progress is not None:
            progress(
                f"{rep.lemma_id}: points={rep.points_checked} "
                f"violations={len(rep.violations)} min_margin={rep.min_margin:.6g}"
            )
        reports.append(rep)
    return reports


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Fact:
    name: str
    value: float
    requirement: str
    ok: bool


@dataclass(frozen=True)
class Certificate:
    """Certification chain at one parameter point.

    chain lists the verified facts backing the region label; failure holds
    the first failing fact when the point is not certified.
    """

    point: tuple[float, float]
    region: RegionLabel
    chain: list[Fact]
    failure: Fact | None

    @property
    def ok(self) -> bool:
        return self.region.certified and all(f.ok for f in self.chain)


def _spot_rs(np_: NormParams, count: int = 7) -> list[float]:
    a_star = coeffs(np_).a_star
    return [a_star * (i + 1) / (count + 1) for i in range(count)]


def certificate(np_: NormParams) -> Certificate:
    """Assemble the fact chain that backs the classification at this point."""
    label = classify(np_)
    point = (np_.a, np_.theta)
    crit_margin = (-np_.theta / np_.a) - math.log(
        (np_.a * np_.a - np_.a) / (np_.a * np_.a + 1.0)
    )
    crit_fact = Fact("sharp_criterion_margin", crit_margin, "> 0", crit_margin > 0.0)
    if label.tag is Region.NOT_CERTIFIED:
        return Certificate(point, label, [], crit_fact if not crit_fact.ok else None)

    chain = [crit_fact]
    if label.tag is Region.LINEAR:
        slope = (1.0 - np_.theta) * np_.a * np_.a / (np_.a - np_.theta)
        chain.append(Fact("straightened_slope", slope, "in (-1, 0)", -1.0 < slope < 0.0))
        xs = [x for x in np.linspace(-0.9, 10.0, 41)]
        worst = min(schwarz_margin(float(x), np_.a, np_.theta) for x in xs)
        chain.append(Fact("straightened_schwarz_margin_min", float(worst), "> 0", worst > 0.0))
        orbit = chi_iterate(0.5, 6, np_)
        ratio = abs(orbit[-1]) / 0.5
        chain.append(Fact("orbit_contraction_sample", ratio, "< 1", ratio < 1.0))
    elif label.tag is Region.CORE:
        c = coeffs(np_)
        prod = np_.a * c.alpha
        chain.append(Fact("slope_product", prod, "in (-1, 0)", -1.0 < prod < 0.0))
        chain.append(Fact("beta_pos", c.beta, "> 0", c.beta > 0.0))
        q_branch = Q_poly(c.a_star, np_)
        chain.append(Fact("certificate_poly_at_branch", q_branch, "<= 0", q_branch <= 0.0))
        worst = math.inf
        for rz in _spot_rs(np_):
            worst = min(worst, F_solve_r(rz, np_).value - R_eval(rz, c))
        chain.append(Fact("response_bound_spot_min", worst, ">= 0", worst >= -1e-9))
    else:  # SECTOR
        c = coeffs(np_)
        gam = gamma_coeff(np_)
        chain.append(Fact("composite_slope", gam, "in (0, 1)", 0.0 < gam < 1.0))
        corner = R2_eval(np_.a, np_)
        chain.append(Fact("corner_above_minus_one", corner, "> -1", corner > -1.0))
        rv = r_eval(corner, np_.a)
        chain.append(Fact("corner_image_in_domain", rv * c.beta, "< 1", rv * c.beta < 1.0))
        worst = 0.0
        for x in (0.25, 1.0, 4.0):
            worst = max(worst, lambda_composite(x, np_, c) / x)
        chain.append(Fact("composite_cycle_contraction", worst, "< 1", worst < 1.0))
    failure = next((f for f in chain if not f.ok), None)
    return Certificate(point, label, chain, failure)


# ---------------------------------------------------------------------------
# figures


def sweep_figures(out_dir, n_c: int = 500, n_mu: int = 199, raster: int = 200) -> dict:
    """Write the region-figure artifacts; returns a name-to-path map.

    fig1: global-vs-local theta thresholds against the slope magnitude.
    fig2_curves: the band boundary curves against mu (CSV and JSON).
    fig2_raster: cell-centered region labels over the (theta, mu) square.
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = {}

    p1 = os.path.join(out_dir, "fig1.csv")
    with open(p1, "w", newline="") as fh:
        fh.write("c,theta_global,theta_local\n")
        for i in range(1, n_c + 1):
            cv = 0.02 * i
            if cv > 1.0:
                tg = max(0.0, sharp_boundary_theta(-cv))
                tl = local_stability_boundary(-cv)
            else:
                tg = 0.0
                tl = 0.0
            fh.write("%.12g,%.12g,%.12g\n" % (cv, tg, tl))
    paths["fig1"] = p1

    mu_values = [i / (n_mu + 1) for i in range(1, n_mu + 1)]
    p2 = os.path.join(out_dir, "fig2_curves.csv")
    write_region_csv(p2, mu_values)
    paths["fig2_curves"] = p2
    p2j = os.path.join(out_dir, "boundaries.json")
    write_region_json(p2j, mu_values)
    paths["boundaries"] = p2j

    p3 = os.path.join(out_dir, "fig2_raster.csv")
    with open(p3, "w", newline="") as fh:
        fh.write("theta,mu,label\n")
        for j in range(raster):
            th = (j + 0.5) / raster
            for i in range(raster):
                mu = (i + 0.5) / raster
                lab = classify(NormParams(a=-1.0 / mu, theta=th)).tag.value
                fh.write("%.12g,%.12g,%s\n" % (th, mu, lab))
    paths["fig2_raster"] = p3
    return paths
