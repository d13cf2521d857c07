//! Entropy-normalized anonymity of the set of photographer pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anonymity at or above this level is considered preserved.
pub const PRESERVED_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnonymityReport {
    pub n_photographers: u32,
    pub total_pairs_n: u64,
    pub n_susp: u64,
    pub anonymity_a: f64,
    pub preserved: bool,
}

/// Number of unordered photographer pairs, `n (n - 1) / 2`.
pub fn total_pairs(n: u32) -> u64 {
    let n = u64::from(n);
    n * n.saturating_sub(1) / 2
}

/// Anonymity when every suspect pair is equally likely: `ln(n_susp) / ln(N)`.
pub fn anonymity(n: u32, n_susp: u64) -> Result<AnonymityReport> {
    if n < 3 {
        return Err(Error::DegenerateAnonymity { n });
    }
    let total = total_pairs(n);
    if n_susp < 1 || n_susp > total {
        return Err(Error::SuspectCountOutOfRange { n_susp, total });
    }
    let a = if n_susp == total {
        1.0
    } else {
        (n_susp as f64).ln() / (total as f64).ln()
    };
    Ok(AnonymityReport {
        n_photographers: n,
        total_pairs_n: total,
        n_susp,
        anonymity_a: a,
        preserved: a >= PRESERVED_THRESHOLD,
    })
}

/// Shannon entropy (nats) of a probability distribution. Zero entries are
/// skipped.
pub fn shannon_entropy(probabilities: &[f64]) -> Result<f64> {
    let sum: f64 = probabilities.iter().sum();
    if probabilities.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution);
    }
    Ok(-probabilities
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>())
}

/// General form `H(X) / H_max` for an arbitrary suspicion distribution over
/// the pairs of `n` photographers. `probabilities` lists the non-zero mass
/// only; pairs left out have probability zero.
pub fn anonymity_from_distribution(n: u32, probabilities: &[f64]) -> Result<f64> {
    if n < 3 {
        return Err(Error::DegenerateAnonymity { n });
    }
    let total = total_pairs(n);
    if probabilities.is_empty() || probabilities.len() as u64 > total {
        return Err(Error::SuspectCountOutOfRange {
            n_susp: probabilities.len() as u64,
            total,
        });
    }
    Ok(shannon_entropy(probabilities)? / (total as f64).ln())
}
