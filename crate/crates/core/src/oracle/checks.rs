use serde::Serialize;

use super::constants::BOUND_SLACK;
use super::statics::{StaticMoments, StaticSpectrum};

/// One inequality evaluated on concrete numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub pass: bool,
}

impl BoundCheck {
    /// `measured ≤ threshold + slack`.
    pub fn upper(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        BoundCheck {
            name: name.into(),
            measured,
            threshold,
            relation: "<=",
            pass: measured <= threshold + BOUND_SLACK,
        }
    }

    /// `measured ≥ threshold − slack`.
    pub fn lower(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        BoundCheck {
            name: name.into(),
            measured,
            threshold,
            relation: ">=",
            pass: measured >= threshold - BOUND_SLACK,
        }
    }
}

/// Structured result of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<BoundCheck>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn new(checks: Vec<BoundCheck>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        VerificationReport { checks, all_pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Inequalities on the static spectrum of a normalized two-population model:
/// singular value and gap ranges, the sign pattern of `ū₁`, `ū₂`, the size of
/// the `ū₂` levels and the position of the mixture mean of `ū₁`.
pub fn static_property_checks(m: &StaticMoments, s: &StaticSpectrum) -> Vec<BoundCheck> {
    let n = m.half_individuals();
    let k = m.features as f64;
    let n1 = m.n1 as f64;
    let n2 = m.n2 as f64;
    let w1 = n1 / (2.0 * n);
    let w2 = n2 / (2.0 * n);
    let top = (2.0 * n * k).sqrt();
    let mut out = vec![
        BoundCheck::lower("gap_x_lower", s.gap_x, 0.8 * s.c0 * top),
        BoundCheck::upper("gap_x_upper", s.gap_x, top),
        BoundCheck::lower("s1_lower", s.s1, (k * n / 4.0).sqrt()),
        BoundCheck::upper("s1_upper", s.s1, top),
        BoundCheck::lower("s1_plus_s2_lower", s.s1 + s.s2, (n * k / 2.0).sqrt()),
        BoundCheck::upper("s1_plus_s2_upper", s.s1 + s.s2, top),
    ];
    if m.b > 0.0 {
        out.push(BoundCheck::lower("u1_same_sign", s.x1 * s.y1, 0.0));
        out.push(BoundCheck::upper("u2_opposite_sign", s.x2 * s.y2, 0.0));
        let ratio = s.x2.abs() / s.y2.abs();
        out.push(BoundCheck::upper("u2_ratio_upper", ratio, 2.0 * n2 / n1));
        out.push(BoundCheck::lower("u2_ratio_lower", ratio, n2 / (2.0 * n1)));
    }
    let c_max = ((1.0 / w1).sqrt() + (1.0 / w2).sqrt()).powi(2);
    let c_xmin = w2 / (4.0 * w1 * w1 + w1 * w2);
    let c_ymin = w1 / (4.0 * w2 * w2 + w1 * w2);
    out.push(BoundCheck::upper(
        "u2_separation_upper",
        (s.x2 - s.y2).powi(2),
        c_max / (2.0 * n),
    ));
    out.push(BoundCheck::lower(
        "x2_lower",
        s.x2 * s.x2,
        c_xmin / (2.0 * n),
    ));
    out.push(BoundCheck::lower(
        "y2_lower",
        s.y2 * s.y2,
        c_ymin / (2.0 * n),
    ));

    let mean = (n1 * s.x1 + n2 * s.y1) / (n1 + n2);
    let spread = (s.y1 - s.x1).abs();
    let shrink = 1.0 - m.mean_divergence().sqrt();
    out.push(BoundCheck::lower(
        "mixture_mean_gap_x",
        (mean - s.x1).abs(),
        n2 * shrink * spread / (2.0 * n),
    ));
    out.push(BoundCheck::lower(
        "mixture_mean_gap_y",
        (s.y1 - mean).abs(),
        n1 * shrink * spread / (2.0 * n),
    ));
    out
}
