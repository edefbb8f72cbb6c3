use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::NumericError;
use crate::diagram::{Color, Diagram, RuleReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub epsilon: f64,
    pub z: Vec<Complex64>,
    pub w: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSequenceSample {
    pub samples: Vec<Sample>,
}

/// Estimated α in q ≈ ε^α, with the RMS residual of the log-log fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderExponent {
    pub value: f64,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub diagram: Diagram,
    pub rules: RuleReport,
    pub exponents: BTreeMap<String, OrderExponent>,
}

/// One sample per line: `{"epsilon":..,"z":[[re,im],..],"w":[..]}`.
pub fn load_samples(text: &str) -> Result<SingularSequenceSample, NumericError> {
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let s: Sample =
            serde_json::from_str(line).map_err(|e| NumericError::BadSample { index: i + 1, msg: e.to_string() })?;
        samples.push(s);
    }
    Ok(SingularSequenceSample { samples })
}

/// Least-squares slope of ln|q| against ln ε. A quantity that is exactly
/// zero somewhere gets +∞ (it is never of maximal order).
pub fn estimate_order(eps: &[f64], mags: &[f64]) -> OrderExponent {
    if mags.contains(&0.0) {
        return OrderExponent { value: f64::INFINITY, confidence: 0.0 };
    }
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = mags.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    OrderExponent { value: slope, confidence: (rss / n).sqrt() }
}

fn maximal(name: &str, a: OrderExponent, tol: f64) -> Result<bool, NumericError> {
    let off = (a.value + 2.0).abs();
    if off <= tol {
        Ok(true)
    } else if off <= 2.0 * tol {
        Err(NumericError::Ambiguous { quantity: name.to_string(), alpha: a.value })
    } else {
        Ok(false)
    }
}

/// Read a diagram off a sampled sequence: circles where z_k (w_k) has
/// order ε^-2, strokes where Z_jk (W_jk) does.
pub fn probe(s: &SingularSequenceSample, tol: f64) -> Result<ProbeOutcome, NumericError> {
    let samples = &s.samples;
    if samples.len() < 4 {
        return Err(NumericError::TooFewSamples { need: 4, got: samples.len() });
    }
    let eps: Vec<f64> = samples.iter().map(|x| x.epsilon).collect();
    if eps.iter().any(|e| e.is_nan() || *e <= 0.0) || eps.windows(2).any(|p| p[1] >= p[0]) {
        return Err(NumericError::NotDecreasing);
    }
    let range = eps[0] / eps[eps.len() - 1];
    if range < 2.0 {
        return Err(NumericError::NarrowRange(range));
    }
    let n = samples[0].z.len();
    if !(2..=crate::diagram::MAX_N).contains(&n) {
        return Err(NumericError::Dimension(format!("{n} vertices")));
    }
    // magnitudes per quantity across samples
    let mut mags: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (i, smp) in samples.iter().enumerate() {
        if smp.z.len() != n || smp.w.len() != n {
            return Err(NumericError::BadSample { index: i + 1, msg: "vertex count changes".into() });
        }
        let (mut zmax, mut wmax) = (0.0f64, 0.0f64);
        for k in 0..n {
            mags.entry(format!("z{}", k + 1)).or_default().push(smp.z[k].norm());
            mags.entry(format!("w{}", k + 1)).or_default().push(smp.w[k].norm());
            for j in 0..k {
                let (dz, dw) = (smp.z[k] - smp.z[j], smp.w[k] - smp.w[j]);
                if dz.norm() == 0.0 || dw.norm() == 0.0 {
                    return Err(NumericError::BadSample {
                        index: i + 1,
                        msg: format!("vertices {} and {} coincide", j + 1, k + 1),
                    });
                }
                let (big_z, big_w) = (1.0 / dw.norm(), 1.0 / dz.norm());
                zmax = zmax.max(big_z);
                wmax = wmax.max(big_w);
                mags.entry(format!("Z{}{}", j + 1, k + 1)).or_default().push(big_z);
                mags.entry(format!("W{}{}", j + 1, k + 1)).or_default().push(big_w);
            }
        }
        let e2 = smp.epsilon * smp.epsilon;
        for (label, m) in [("Z", zmax), ("W", wmax)] {
            let ratio = m * e2;
            if !(0.5..=2.0).contains(&ratio) {
                return Err(NumericError::BadSample {
                    index: i + 1,
                    msg: format!("max |{label}| is {ratio:.3} ε^-2, not normalized"),
                });
            }
        }
    }
    let exponents: BTreeMap<String, OrderExponent> =
        mags.into_iter().map(|(k, m)| (k.clone(), estimate_order(&eps, &m))).collect();
    let mut d = Diagram::empty(n).expect("size checked");
    for k in 1..=n {
        if maximal(&format!("z{k}"), exponents[&format!("z{k}")], tol)? {
            d.add_circle(Color::Z, k).expect("in range");
        }
        if maximal(&format!("w{k}"), exponents[&format!("w{k}")], tol)? {
            d.add_circle(Color::W, k).expect("in range");
        }
        for j in 1..k {
            if maximal(&format!("Z{j}{k}"), exponents[&format!("Z{j}{k}")], tol)? {
                d.add_stroke(Color::Z, j, k).expect("in range");
            }
            if maximal(&format!("W{j}{k}"), exponents[&format!("W{j}{k}")], tol)? {
                d.add_stroke(Color::W, j, k).expect("in range");
            }
        }
    }
    let rules = d.validate();
    Ok(ProbeOutcome { diagram: d, rules, exponents })
}

// Positions for one color: vertices in the same component of the other
// color's strokes share a center and differ by ε² offsets; the center is of
// order ε^-2 when the component is circled in this color.
fn positions(d: &Diagram, c: Color, eps: f64, phase: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d.n()];
    for (idx, comp) in d.components(c.other()).into_iter().enumerate() {
        let i = idx as f64;
        let members = crate::diagram::members(comp);
        let circled = members.iter().any(|&v| d.circled(c, v));
        let center = if circled {
            Complex64::from_polar(1.3 + 0.25 * i, 0.9 * i + 0.4 + phase) / (eps * eps)
        } else {
            Complex64::from_polar(0.8 + 0.35 * i, 2.1 * i + 0.2 + phase)
        };
        for (rank, &v) in members.iter().enumerate() {
            out[v - 1] = center + Complex64::from_polar(eps * eps * rank as f64, 0.5 + phase);
        }
    }
    out
}

/// Order-faithful synthetic sequence realizing `d` at ε = 2^-k.
pub fn synthetic_sequence(d: &Diagram, ks: std::ops::RangeInclusive<u32>) -> SingularSequenceSample {
    let samples = ks
        .map(|k| {
            let eps = 0.5f64.powi(k as i32);
            Sample { epsilon: eps, z: positions(d, Color::Z, eps, 0.0), w: positions(d, Color::W, eps, 1.1) }
        })
        .collect();
    SingularSequenceSample { samples }
}
