//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use metric_forge::analysis::{
    biorthogonal_system, closed_form_inequalities, positivity, sample_alpha, theta_from_weights,
    weights_from_theta, SpectralWeights, POSITIVITY_MARGIN,
};
use metric_forge::closedform::{
    ansatz_lambda0, assemble_theta, basis_family, combine, incidence_family, symbolic_residual,
    symmetry_check, IncidenceMatrix, MetricParams,
};
use metric_forge::continuum::{
    convergence_sweep, mostafazadeh_lattice_metric, opaque_wall_check, MostafazadehParams,
};
use metric_forge::hamiltonian::{closed_form_spectrum, spectrum, HamiltonianSpec};
use metric_forge::linalg::{exact, rank_of_vectors, ExactScalar, IntPolynomial, Matrix};
use metric_forge::oracle::{solve_metric_space, verify_membership, SymmetricUnknowns};
use metric_forge::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BOUNDARY_MARGIN: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn exact_lambdas() -> Vec<ExactScalar> {
    vec![exact(0, 1), exact(1, 3), exact(-1, 3), exact(2, 3), exact(-2, 3)]
}

fn even_sizes(max: usize) -> impl Iterator<Item = usize> {
    (2..=max).step_by(2)
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in even_sizes(10) {
        for lambda in exact_lambdas() {
            let dim = solve_metric_space(&HamiltonianSpec::exact(n, lambda.clone())?)?.dimension();
            if dim != n {
                bad.push(format!("N={n} λ={lambda}: dim {dim}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        bad.is_empty() && secs < 10.0,
        format!("25 (N, λ) cases, {} mismatches, {secs:.2} s (limit 10 s) {}", bad.len(), bad.join("; ")),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in even_sizes(12) {
        for m in basis_family(n)? {
            checked += 1;
            if !symbolic_residual(&m)?.is_zero_matrix() {
                bad.push(format!("M_{} at N={n}", m.j));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        bad.is_empty() && secs < 30.0,
        format!("{checked} polynomial identities M_j·H − Hᵀ·M_j = 0, {} failures, {secs:.2} s (limit 30 s) {}", bad.len(), bad.join("; ")),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in even_sizes(10) {
        let family = basis_family(n)?;
        let unknowns = SymmetricUnknowns::new(n);
        for lambda in exact_lambdas() {
            let space = solve_metric_space(&HamiltonianSpec::exact(n, lambda.clone())?)?;
            let closed: Vec<Vec<ExactScalar>> = family
                .iter()
                .map(|m| unknowns.vectorize(&m.eval_exact(&lambda)))
                .collect();
            let mut combined = space.vectorized();
            combined.extend(closed.iter().cloned());
            let (r_closed, r_all) = (rank_of_vectors(&closed), rank_of_vectors(&combined));
            if r_closed != n || r_all != n {
                bad.push(format!("N={n} λ={lambda}: closed rank {r_closed}, combined {r_all}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        bad.is_empty() && secs < 30.0,
        format!("25 (N, λ) cases, combined rank = N in all but {}, {secs:.2} s (limit 30 s) {}", bad.len(), bad.join("; ")),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in even_sizes(16) {
        for m in basis_family(n)? {
            checked += 1;
            if m.at_zero() != ansatz_lambda0(n, m.j)? {
                bad.push(format!("M_{} at N={n}", m.j));
            }
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        format!("{checked} matrices M_j(0) vs the 0/1 position rule, N ≤ 16, {} mismatches", bad.len()),
    ))
}

/// Entry polynomial codes: `0` → 1, `m` → 1−λ, `p` → 1+λ, `q` → 1−λ²,
/// `M` → (1−λ)(1−λ²), `P` → (1+λ)(1−λ²).
fn code_poly(code: char) -> IntPolynomial {
    let c = |v: &[i64]| IntPolynomial::from_i64s(v);
    match code {
        '0' => c(&[1]),
        'm' => c(&[1, -1]),
        'p' => c(&[1, 1]),
        'q' => c(&[1, 0, -1]),
        'M' => c(&[1, -1]) * c(&[1, 0, -1]),
        'P' => c(&[1, 1]) * c(&[1, 0, -1]),
        other => panic!("unknown code {other}"),
    }
}

/// Parses a displayed metric, rows separated by `/`, entries by spaces,
/// terms `<j><code>` joined by `+`, into the per-`α_j` coefficient matrices.
fn displayed_basis(n: usize, text: &str) -> Vec<Matrix<IntPolynomial>> {
    use num_traits::Zero;
    let mut out = vec![Matrix::filled(n, n, IntPolynomial::zero()); n];
    for (i, row) in text.split('/').enumerate() {
        for (k, entry) in row.split_whitespace().enumerate() {
            for term in entry.split('+') {
                let mut chars = term.chars();
                let j = chars.next().unwrap().to_digit(10).unwrap() as usize;
                let code = chars.next().unwrap_or('0');
                out[j - 1][(i, k)] = out[j - 1][(i, k)].clone() + code_poly(code);
            }
        }
    }
    out
}

fn incidence_display(rows: &str) -> Vec<((usize, usize), u32)> {
    let mut out = Vec::new();
    for (i, row) in rows.split('/').enumerate() {
        for (k, tok) in row.split_whitespace().enumerate() {
            if tok != "." {
                out.push(((i + 1, k + 1), tok.parse().unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn entries(s: &IncidenceMatrix) -> Vec<((usize, usize), u32)> {
    s.entries().collect()
}

fn criterion_5() -> Result<Outcome> {
    let mut bad = Vec::new();

    let theta4 = "1m 2m 3 4 / 2m 1m+3m 4+2q 3 / 3 4+2q 1p+3p 2p / 4 3 2p 1p";
    let theta6 = "1m 2m 3m 4 5 6 / 2m 1m+3m 2m+4m 3q+5 4+6 5 / 3m 2m+4m 1m+3M+5m 2q+4q+6 3q+5 4 / \
                  4 3q+5 2q+4q+6 1p+3P+5p 2p+4p 3p / 5 4+6 3q+5 2p+4p 1p+3p 2p / 6 5 4 3p 2p 1p";
    for (n, text) in [(4, theta4), (6, theta6)] {
        let family = basis_family(n)?;
        for (m, want) in family.iter().zip(displayed_basis(n, text)) {
            if m.matrix != want {
                bad.push(format!("Θ^({n}) coefficient of α_{}", m.j));
            }
        }
    }
    // Entry (2,3) of Θ^(4) read as α_4 + α_2(1−λ²).
    let family4 = basis_family(4)?;
    let lambda = 0.37;
    let alpha = [0.3, -1.1, 0.7, 2.0];
    let theta = combine(&family4, lambda, &MetricParams::new(alpha.to_vec()))?;
    if (theta[(1, 2)] - (alpha[3] + alpha[1] * (1.0 - lambda * lambda))).abs() > 1e-14 {
        bad.push("Θ^(4)(2,3)".into());
    }

    let s4 = [
        "1 . . . / . 1 . . / . . 1 . / . . . 1",
        ". 1 . . / 1 . 2 . / . 2 . 1 / . . 1 .",
        ". . 0 . / . 1 . 0 / 0 . 1 . / . 0 . .",
        ". . . 0 / . . 0 . / . 0 . . / 0 . . .",
    ];
    let s6 = [
        "1 . . . . . / . 1 . . . . / . . 1 . . . / . . . 1 . . / . . . . 1 . / . . . . . 1",
        ". 1 . . . . / 1 . 1 . . . / . 1 . 2 . . / . . 2 . 1 . / . . . 1 . 1 / . . . . 1 .",
        ". . 1 . . . / . 1 . 2 . . / 1 . 3 . 2 . / . 2 . 3 . 1 / . . 2 . 1 . / . . . 1 . .",
        ". . . 0 . . / . . 1 . 0 . / . 1 . 2 . 0 / 0 . 2 . 1 . / . 0 . 1 . . / . . 0 . . .",
        ". . . . 0 . / . . . 0 . 0 / . . 1 . 0 . / . 0 . 1 . . / 0 . 0 . . . / . 0 . . . .",
        ". . . . . 0 / . . . . 0 . / . . . 0 . . / . . 0 . . . / . 0 . . . . / 0 . . . . .",
    ];
    for (n, shown) in [(4, &s4[..]), (6, &s6[..])] {
        for (s, d) in incidence_family(n)?.iter().zip(shown) {
            if entries(s) != incidence_display(d) {
                bad.push(format!("S_{}^({n})", s.j()));
            }
        }
    }
    let central = [
        "1 . / . 1",
        s4[1],
        s6[2],
        ". . . 1 . . . . / . . 1 . 2 . . . / . 1 . 3 . 2 . . / 1 . 3 . 4 . 2 . / \
         . 2 . 4 . 3 . 1 / . . 2 . 3 . 1 . / . . . 2 . 1 . . / . . . . 1 . . .",
    ];
    for (k, shown) in (1..=4).zip(central) {
        let s = &incidence_family(2 * k)?[k - 1];
        if entries(s) != incidence_display(shown) {
            bad.push(format!("central S_{k}^({})", 2 * k));
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        format!(
            "Θ^(4), Θ^(6), S_j^(4), S_j^(6), central K = 1..4: {} mismatches {}",
            bad.len(),
            bad.join("; ")
        ),
    ))
}

fn criterion_6() -> Result<Outcome> {
    let grid: Vec<f64> = (0..201).map(|i| -0.99 + 1.98 * i as f64 / 200.0).collect();
    let mut worst = 0.0f64;
    for n in [2, 4] {
        for &lambda in &grid {
            let closed = closed_form_spectrum(n, lambda)?;
            let numeric = spectrum(n, lambda)?;
            for (c, z) in closed.iter().zip(&numeric.eigenvalues) {
                worst = worst.max((c - z.re).abs()).max(z.im.abs());
            }
        }
    }
    let mut complex_inside = Vec::new();
    for n in [2, 4, 6, 8] {
        for &lambda in &grid {
            if !spectrum(n, lambda)?.all_real {
                complex_inside.push(format!("N={n} λ={lambda}"));
            }
        }
    }
    let outside = spectrum(4, 1.2)?;
    let pair = outside.eigenvalues.iter().filter(|z| z.im.abs() > 1e-6).count();
    let pass = worst <= 1e-10 && complex_inside.is_empty() && pair >= 2;
    Ok(Outcome::new(
        pass,
        format!(
            "closed vs numeric max deviation {worst:.2e} (limit 1e-10); complex points on (−1,1): {}; \
             N=4 λ=1.2 complex eigenvalues: {pair} (max |Im| {:.3})",
            complex_inside.len(),
            outside.max_imag
        ),
    ))
}

struct Agreement {
    samples: usize,
    closed_disagree: usize,
    near_boundary: usize,
    weight_disagree: usize,
}

fn agreement(n: usize, count: usize, seed: u64, lambda_of: impl Fn(&mut ChaCha8Rng) -> f64) -> Result<Agreement> {
    let family = basis_family(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Agreement {
        samples: count,
        closed_disagree: 0,
        near_boundary: 0,
        weight_disagree: 0,
    };
    let mut cached = None;
    for _ in 0..count {
        let lambda = lambda_of(&mut rng);
        let params = MetricParams::new(sample_alpha(&mut rng, n));
        let theta = combine(&family, lambda, &params)?;
        let report = positivity(&theta)?;
        let values = closed_form_inequalities(n, lambda, &params)?;
        let cf_margin = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let cf = values.iter().all(|&v| v > 0.0);
        if cf_margin <= BOUNDARY_MARGIN || report.min_eigenvalue.abs() <= BOUNDARY_MARGIN {
            out.near_boundary += 1;
        } else if cf != report.positive {
            out.closed_disagree += 1;
        }
        let system = match &cached {
            Some((l, s)) if *l == lambda => s,
            _ => {
                cached = Some((lambda, biorthogonal_system(&HamiltonianSpec::float(n, lambda)?)?));
                &cached.as_ref().unwrap().1
            }
        };
        let weights = weights_from_theta(system, &theta)?;
        if weights.all_positive(POSITIVITY_MARGIN) != report.positive {
            out.weight_disagree += 1;
        }
    }
    Ok(out)
}

fn criterion_7() -> Result<Outcome> {
    let two = agreement(2, 10_000, 2024, |rng| rng.gen_range(-0.99..0.99))?;
    let four = agreement(4, 10_000, 4048, |_| 0.0)?;
    let pass = [&two, &four]
        .iter()
        .all(|a| a.closed_disagree == 0 && a.weight_disagree == 0);
    let line = |name: &str, a: &Agreement| {
        format!(
            "{name}: {} samples, {} closed-form disagreements ({} within 1e-8 of the boundary), {} spectral-weight disagreements",
            a.samples, a.closed_disagree, a.near_boundary, a.weight_disagree
        )
    };
    Ok(Outcome::new(pass, format!("{}; {}", line("N=2", &two), line("N=4 λ=0", &four))))
}

fn criterion_8() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut worst_roundtrip = 0.0f64;
    for n in even_sizes(8) {
        for _ in 0..50 {
            let lambda = rng.gen_range(-0.9..0.9);
            let alpha: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let theta = assemble_theta(n, lambda, &MetricParams::new(alpha))?;
            let system = biorthogonal_system(&HamiltonianSpec::float(n, lambda)?)?;
            let weights = weights_from_theta(&system, &theta)?;
            let back = theta_from_weights(&system, &weights)?;
            worst_roundtrip = worst_roundtrip.max(theta.sub(&back)?.max_abs());
        }
    }

    // Two-level check against the explicit matrix written with the
    // unnormalized left vectors (1 − cos φ, ∓ sin φ).
    let mut worst_explicit = 0.0f64;
    for _ in 0..200 {
        let phi: f64 = rng.gen_range(0.2..std::f64::consts::PI - 0.2);
        let (c, s) = (phi.cos(), phi.sin());
        let system = biorthogonal_system(&HamiltonianSpec::float(2, c)?)?;
        let t_minus = rng.gen_range(-2.0..2.0);
        let t_plus = rng.gen_range(-2.0..2.0);
        // Energies ascend: index 0 is E = 2 − sin φ (ψ_−), index 1 is E = 2 + sin φ (ψ_+).
        let theta = theta_from_weights(&system, &SpectralWeights::new(vec![t_minus, t_plus]))?;
        let kappa_minus = system.left_vectors[0][0] / (1.0 - c);
        let kappa_plus = system.left_vectors[1][0] / (1.0 - c);
        worst_explicit = worst_explicit
            .max((system.left_vectors[0][1] - kappa_minus * s).abs())
            .max((system.left_vectors[1][1] + kappa_plus * s).abs());
        let (tp, tm) = (t_plus * kappa_plus * kappa_plus, t_minus * kappa_minus * kappa_minus);
        let want = [
            [(1.0 - c).powi(2) * (tp + tm), (1.0 - c) * s * (-tp + tm)],
            [(1.0 - c) * s * (-tp + tm), s * s * (tp + tm)],
        ];
        for i in 0..2 {
            for k in 0..2 {
                worst_explicit = worst_explicit.max((theta[(i, k)] - want[i][k]).abs());
            }
        }
    }
    Ok(Outcome::new(
        worst_roundtrip <= 1e-9 && worst_explicit <= 1e-12,
        format!(
            "α → Θ → t → Θ′ max error {worst_roundtrip:.2e} over 200 samples N ≤ 8 (limit 1e-9); \
             N=2 explicit matrix max deviation {worst_explicit:.2e} over 200 φ (limit 1e-12)"
        ),
    ))
}

fn criterion_9() -> Result<Outcome> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in even_sizes(12) {
        for m in basis_family(n)? {
            checked += 1;
            if !symmetry_check(&m) {
                bad.push(format!("M_{} at N={n}", m.j));
            }
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        format!("{checked} matrices, M_j(λ)(i,k) = M_j(−λ)(N+1−k, N+1−i): {} violations", bad.len()),
    ))
}

fn criterion_10() -> Result<Outcome> {
    let sizes = [40, 80, 160, 320];
    let mut slopes = Vec::new();
    let mut out_of_band = Vec::new();
    for lambda in [0.3, 0.5, 0.7] {
        for state in 0..3 {
            let sweep = convergence_sweep(lambda, &sizes, state)?;
            let slope = sweep.slope.unwrap_or(f64::NAN);
            slopes.push(format!("λ={lambda}/s{state}:{slope:.3}"));
            if !(1.7..=2.3).contains(&slope) {
                out_of_band.push(format!("λ={lambda} state {state} slope {slope:.3}"));
            }
        }
    }
    let wall = opaque_wall_check(0.5, &[20, 40, 80, 160, 320])?;

    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut not_positive = 0;
    let mut not_intertwining = 0;
    for _ in 0..1000 {
        let n = 2 * rng.gen_range(1..=8);
        let params = MostafazadehParams {
            f_m: rng.gen_range(-5.0..5.0),
            k_m: rng.gen_range(-5.0..5.0),
        };
        let metric = mostafazadeh_lattice_metric(n, params)?;
        if !metric.report.positive {
            not_positive += 1;
        }
        let (ok, _) = verify_membership(&metric.theta, &HamiltonianSpec::float(n, 0.0)?, 0.0)?;
        if !ok {
            not_intertwining += 1;
        }
    }

    let pass = out_of_band.is_empty()
        && wall.decreasing_within_tolerance
        && not_positive == 0
        && not_intertwining == 0;
    Ok(Outcome::new(
        pass,
        format!(
            "matching-residual slopes over N ∈ {{40,80,160,320}} [{}], outside [1.7, 2.3]: {}; \
             central amplitude at λ=0.5 {:?} decreasing (10% tol): {}; \
             Mostafazadeh metric: {not_positive}/1000 not positive, {not_intertwining}/1000 not exactly intertwining",
            slopes.join(" "),
            if out_of_band.is_empty() { "none".to_string() } else { out_of_band.join(", ") },
            wall.amplitudes.iter().map(|a| format!("{a:.4}")).collect::<Vec<_>>(),
            wall.decreasing_within_tolerance
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("solution-space dimension", criterion_1),
        ("closed-form correctness", criterion_2),
        ("span equivalence", criterion_3),
        ("λ=0 reduction", criterion_4),
        ("printed-matrix reproduction", criterion_5),
        ("spectra", criterion_6),
        ("positivity", criterion_7),
        ("spectral representation roundtrip", criterion_8),
        ("reflection symmetry", criterion_9),
        ("continuum limit", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
