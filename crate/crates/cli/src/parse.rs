use anyhow::Result;
use metric_forge::linalg::{format_exact, parse_exact, to_f64, ExactScalar};

use crate::output::usage;

/// A coupling as typed: exact when written as an integer or `p/q`.
#[derive(Debug, Clone)]
pub enum LambdaArg {
    Exact(ExactScalar),
    Float(f64),
}

impl LambdaArg {
    pub fn parse(text: &str) -> Result<Self> {
        if let Ok(x) = parse_exact(text) {
            return Ok(Self::Exact(x));
        }
        match text.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Self::Float(x)),
            _ => Err(usage(format!("invalid coupling '{text}': expected p/q, an integer or a decimal"))),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Self::Exact(x) => to_f64(x),
            Self::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&ExactScalar> {
        match self {
            Self::Exact(x) => Some(x),
            Self::Float(_) => None,
        }
    }

    pub fn require_exact(&self) -> Result<&ExactScalar> {
        self.exact()
            .ok_or_else(|| usage("this command needs an exact coupling written as p/q or an integer"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Self::Exact(x) => serde_json::Value::String(format_exact(x)),
            Self::Float(x) => serde_json::json!(x),
        }
    }
}

/// `start:stop:count`, inclusive endpoints. A single point needs `start == stop`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || usage(format!("invalid grid '{text}': expected start:stop:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    match count {
        0 => Err(usage("grid count must be at least 1")),
        1 if start == stop => Ok(vec![start]),
        1 => Err(usage("a one-point grid needs start == stop")),
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            Ok((0..count)
                .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                .collect())
        }
    }
}

pub fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| usage(format!("invalid {what} '{}' in '{text}'", s.trim())))
        })
        .collect()
}

/// Comma-separated reals; each may be a decimal or `p/q`.
pub fn parse_alpha(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| LambdaArg::parse(s).map(|v| v.value()).map_err(|_| usage(format!("invalid α component '{}'", s.trim()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = parse_grid("-0.99:0.99:199").unwrap();
        assert_eq!(g.len(), 199);
        assert_eq!(g[0], -0.99);
        assert_eq!(g[198], 0.99);
        assert_eq!(parse_grid("0:0:1").unwrap(), vec![0.0]);
    }

    #[test]
    fn bad_grids() {
        for g in ["0:1", "0:1:0", "a:1:2", "0:1:1", "0:1:-3"] {
            assert!(parse_grid(g).is_err(), "{g}");
        }
    }

    #[test]
    fn couplings() {
        assert!(matches!(LambdaArg::parse("1/2").unwrap(), LambdaArg::Exact(_)));
        assert!(matches!(LambdaArg::parse("0").unwrap(), LambdaArg::Exact(_)));
        assert!(matches!(LambdaArg::parse("-0.25").unwrap(), LambdaArg::Float(_)));
        assert!(LambdaArg::parse("x").is_err());
        assert_eq!(LambdaArg::parse("-3/4").unwrap().value(), -0.75);
    }

    #[test]
    fn alpha_lists() {
        assert_eq!(parse_alpha("1, 0.5,-1/4").unwrap(), vec![1.0, 0.5, -0.25]);
        assert!(parse_alpha("1,,2").is_err());
        assert_eq!(parse_list::<usize>("20,40", "size").unwrap(), vec![20, 40]);
    }
}
