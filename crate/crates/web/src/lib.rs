//! Browser bindings: each export takes plain numbers or strings and returns JSON.

use metric_forge::analysis::{closed_form_inequalities, has_closed_form, positivity};
use metric_forge::closedform::{basis_family, combine, incidence_family, MetricParams};
use metric_forge::hamiltonian::reality_scan;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_DEMO_SIZE: usize = 64;

fn check_size(n: usize) -> Result<(), String> {
    if n > MAX_DEMO_SIZE {
        return Err(format!("N = {n} is too large for the demo (limit {MAX_DEMO_SIZE})"));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SweepPoint {
    lambda: f64,
    re: Vec<f64>,
    im: Vec<f64>,
    all_real: bool,
}

pub fn spectrum_sweep_json(n: usize, start: f64, stop: f64, count: usize) -> Result<String, String> {
    check_size(n)?;
    if count < 2 || count > 2000 || !(start < stop) {
        return Err("need start < stop and 2 ≤ count ≤ 2000".into());
    }
    let step = (stop - start) / (count - 1) as f64;
    let grid: Vec<f64> = (0..count).map(|i| if i + 1 == count { stop } else { start + step * i as f64 }).collect();
    let rows = reality_scan(n, &grid).map_err(|e| e.to_string())?;
    let points: Vec<SweepPoint> = rows
        .into_iter()
        .map(|r| SweepPoint {
            lambda: r.lambda,
            re: r.eigenvalues.iter().map(|z| z.re).collect(),
            im: r.eigenvalues.iter().map(|z| z.im).collect(),
            all_real: r.all_real,
        })
        .collect();
    to_json(&points)
}

#[derive(Serialize)]
struct MetricView {
    n: usize,
    lambda: f64,
    theta: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
    min_eigenvalue: f64,
    positive: bool,
    near_boundary: bool,
    closed_form: Option<Vec<f64>>,
}

pub fn metric_json(n: usize, lambda: f64, alpha: &[f64]) -> Result<String, String> {
    check_size(n)?;
    if alpha.len() != n {
        return Err(format!("α has {} components but N = {n}", alpha.len()));
    }
    let family = basis_family(n).map_err(|e| e.to_string())?;
    let params = MetricParams::new(alpha.to_vec());
    let theta = combine(&family, lambda, &params).map_err(|e| e.to_string())?;
    let report = positivity(&theta).map_err(|e| e.to_string())?;
    let closed_form = if has_closed_form(n, lambda) {
        Some(closed_form_inequalities(n, lambda, &params).map_err(|e| e.to_string())?)
    } else {
        None
    };
    to_json(&MetricView {
        n,
        lambda,
        theta: theta.to_rows(),
        min_eigenvalue: report.min_eigenvalue,
        positive: report.positive,
        near_boundary: report.near_boundary,
        eigenvalues: report.eigenvalues,
        closed_form,
    })
}

#[derive(Serialize)]
struct IncidenceView {
    j: usize,
    degrees: Vec<Vec<Option<u32>>>,
    polynomials: Vec<Vec<String>>,
}

pub fn incidence_json(n: usize) -> Result<String, String> {
    check_size(n)?;
    let incidence = incidence_family(n).map_err(|e| e.to_string())?;
    let family = basis_family(n).map_err(|e| e.to_string())?;
    let views: Vec<IncidenceView> = incidence
        .iter()
        .zip(&family)
        .map(|(s, m)| IncidenceView {
            j: s.j(),
            degrees: (1..=n).map(|i| (1..=n).map(|k| s.degree(i, k)).collect()).collect(),
            polynomials: m
                .matrix
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|p| p.to_string()).collect())
                .collect(),
        })
        .collect();
    to_json(&views)
}

/// Eigenvalue flows of H^(N)(λ) over `count` couplings in `[start, stop]`.
#[wasm_bindgen]
pub fn spectrum_sweep(n: usize, start: f64, stop: f64, count: usize) -> Result<String, JsError> {
    spectrum_sweep_json(n, start, stop, count).map_err(|e| JsError::new(&e))
}

/// Θ = Σ α_j M_j(λ) with its eigenvalues and positivity verdict.
#[wasm_bindgen]
pub fn metric(n: usize, lambda: f64, alpha: &[f64]) -> Result<String, JsError> {
    metric_json(n, lambda, alpha).map_err(|e| JsError::new(&e))
}

/// Incidence matrices S_j and polynomial entries of M_j for every j.
#[wasm_bindgen]
pub fn incidence(n: usize) -> Result<String, JsError> {
    incidence_json(n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_shape() {
        let v: serde_json::Value = serde_json::from_str(&spectrum_sweep_json(4, -1.5, 1.5, 7).unwrap()).unwrap();
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 7);
        assert_eq!(pts[3]["lambda"], 0.0);
        assert_eq!(pts[3]["all_real"], true);
        assert_eq!(pts[0]["all_real"], false);
        assert_eq!(pts[3]["re"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn sweep_rejects_bad_grid() {
        assert!(spectrum_sweep_json(4, 1.0, 0.0, 5).is_err());
        assert!(spectrum_sweep_json(4, 0.0, 1.0, 1).is_err());
        assert!(spectrum_sweep_json(3, 0.0, 1.0, 5).is_err());
    }

    #[test]
    fn two_level_metric() {
        let v: serde_json::Value = serde_json::from_str(&metric_json(2, 0.6, &[1.0, 0.5]).unwrap()).unwrap();
        assert_eq!(v["positive"], true);
        let theta = &v["theta"];
        assert!((theta[0][0].as_f64().unwrap() - 0.4).abs() < 1e-15);
        assert!((theta[1][1].as_f64().unwrap() - 1.6).abs() < 1e-15);
        assert_eq!(theta[0][1], 0.5);
        assert!(metric_json(2, 0.6, &[1.0]).is_err());
    }

    #[test]
    fn incidence_central_element() {
        let v: serde_json::Value = serde_json::from_str(&incidence_json(4).unwrap()).unwrap();
        assert_eq!(v[1]["degrees"][1][2], 2);
        assert_eq!(v[1]["degrees"][0][0], serde_json::Value::Null);
        assert_eq!(v[3]["polynomials"][0][3], "1");
    }
}
