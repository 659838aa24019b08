//! Synthetic annotator over latent rewards, for ground-truth evaluation of
//! the solver and the baseline selectors.
//!
//! Each instance draws hidden per-response rewards, then judges every pair:
//! with probability `1 - noise` the observed direction follows the pairwise
//! preference law, otherwise it is flipped. Flipped judgments keep a
//! confident weight, which is exactly what plants genuine cycles.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{build_graph, JudgmentRecord, PreferenceGraph, ResponseId};
use crate::select::TrainingPair;

/// Probability that the response with reward `r_i` beats the one with
/// reward `r_j`: `exp(r_i) / (exp(r_i) + exp(r_j))`, computed by shifting
/// both exponents down by their max so nothing overflows.
pub fn bt_probability(r_i: f64, r_j: f64) -> Result<f64> {
    for (field, value) in [("r_i", r_i), ("r_j", r_j)] {
        if !value.is_finite() {
            return Err(Error::validation(field, format!("{value} is not finite")));
        }
    }
    let shift = r_i.max(r_j);
    let a = (r_i - shift).exp();
    let b = (r_j - shift).exp();
    Ok(a / (a + b))
}

/// Draws one preference for the first response from the pairwise law.
pub fn sample_preference<R: Rng>(rng: &mut R, r_i: f64, r_j: f64) -> Result<bool> {
    let p = bt_probability(r_i, r_j)?;
    Ok(rng.gen::<f64>() < p)
}

/// A sampled preference graph together with the hidden rewards behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthInstance {
    pub rewards: Vec<f64>,
    pub graph: PreferenceGraph,
    pub seed: u64,
}

impl GroundTruthInstance {
    pub fn prompt_key(&self) -> &str {
        self.graph.prompt_key()
    }
}

/// Generates one complete-tournament instance, deterministic per seed.
///
/// Rewards are uniform on `[0, reward_spread]`. Every unordered pair is
/// judged once: the observed direction follows the true preference with
/// probability `1 - noise`, and its weight is the pairwise probability of
/// the observed direction folded above 0.5 (`max(p, 1 - p)`).
pub fn gen_instance(
    n: usize,
    reward_spread: f64,
    noise: f64,
    seed: u64,
) -> Result<GroundTruthInstance> {
    if n < 2 {
        return Err(Error::validation(
            "nodes",
            format!("{n} responses; at least 2 required"),
        ));
    }
    if !(reward_spread.is_finite() && reward_spread > 0.0) {
        return Err(Error::validation(
            "reward_spread",
            format!("{reward_spread} is not a positive finite value"),
        ));
    }
    if !(noise.is_finite() && (0.0..0.5).contains(&noise)) {
        return Err(Error::validation(
            "noise",
            format!("{noise} outside [0, 0.5)"),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rewards: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * reward_spread).collect();

    let mut judgments = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            let p = bt_probability(rewards[i as usize], rewards[j as usize])?;
            let (mut src, mut dst) = if p >= 0.5 { (i, j) } else { (j, i) };
            if rng.gen::<f64>() < noise {
                std::mem::swap(&mut src, &mut dst);
            }
            let p_observed = if src == i { p } else { 1.0 - p };
            judgments.push(JudgmentRecord::new(
                src,
                dst,
                p_observed.max(1.0 - p_observed),
                None,
            ));
        }
    }

    let prompt_key = format!("synth-{seed:016x}");
    let responses: Vec<String> = (0..n).map(|k| format!("response-{k}")).collect();
    let outcome = build_graph(&prompt_key, &prompt_key, &responses, &judgments, 0.5)?;
    Ok(GroundTruthInstance {
        rewards,
        graph: outcome.graph,
        seed,
    })
}

/// Fraction of pairs whose chosen response has strictly higher hidden
/// reward than the rejected one; `None` for an empty pair list.
pub fn agreement_with_truth(
    pairs: &[TrainingPair],
    instance: &GroundTruthInstance,
) -> Result<Option<f64>> {
    if pairs.is_empty() {
        return Ok(None);
    }
    let index_of: HashMap<&str, usize> = instance
        .graph
        .response_texts()
        .iter()
        .enumerate()
        .map(|(i, text)| (text.as_str(), i))
        .collect();
    let mut agreeing = 0usize;
    for pair in pairs {
        let chosen = *index_of.get(pair.chosen.as_str()).ok_or_else(|| {
            Error::validation(
                "pairs",
                format!("chosen response {:?} not in instance", pair.chosen),
            )
        })?;
        let rejected = *index_of.get(pair.rejected.as_str()).ok_or_else(|| {
            Error::validation(
                "pairs",
                format!("rejected response {:?} not in instance", pair.rejected),
            )
        })?;
        if instance.rewards[chosen] > instance.rewards[rejected] {
            agreeing += 1;
        }
    }
    Ok(Some(agreeing as f64 / pairs.len() as f64))
}

/// The reward of one response, for tests and reports.
pub fn reward_of(instance: &GroundTruthInstance, id: ResponseId) -> f64 {
    instance.rewards[id.index()]
}
