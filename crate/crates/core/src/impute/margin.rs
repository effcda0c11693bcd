//! Linear soft-margin classifier trained by stochastic subgradient descent
//! on the L2-regularized hinge loss.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginConfig {
    pub lambda: f64,
    pub epochs: usize,
    /// Initial step size; decays as eta0 / (1 + eta0 * lambda * t).
    pub eta0: f64,
}

impl Default for MarginConfig {
    fn default() -> Self {
        MarginConfig { lambda: 1e-4, epochs: 50, eta0: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub constant: Option<usize>,
}

impl MarginModel {
    /// Binary labels in {0, 1}; rows should already be standardized.
    /// Returns the averaged iterate.
    pub fn fit(x: &[Vec<f64>], y: &[usize], config: &MarginConfig, seed: u64) -> MarginModel {
        let d = x.first().map_or(0, Vec::len);
        let has = |c: usize| y.contains(&c);
        if !(has(0) && has(1)) {
            log::warn!("training data has a single class; margin model degenerates to a constant");
            return MarginModel { weights: vec![0.0; d], bias: 0.0, constant: Some(usize::from(has(1))) };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..x.len()).collect();
        let (mut w, mut b) = (vec![0.0; d], 0.0);
        let (mut w_avg, mut b_avg) = (vec![0.0; d], 0.0);
        let mut t = 0u64;
        for _ in 0..config.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let eta = config.eta0 / (1.0 + config.eta0 * config.lambda * t as f64);
                let s = if y[i] == 1 { 1.0 } else { -1.0 };
                let score: f64 = w.iter().zip(&x[i]).map(|(a, v)| a * v).sum::<f64>() + b;
                let violated = s * score < 1.0;
                for (wk, xk) in w.iter_mut().zip(&x[i]) {
                    *wk -= eta * config.lambda * *wk;
                    if violated {
                        *wk += eta * s * xk;
                    }
                }
                if violated {
                    b += eta * s;
                }
                let k = 1.0 / t as f64;
                for (a, wk) in w_avg.iter_mut().zip(&w) {
                    *a += (wk - *a) * k;
                }
                b_avg += (b - b_avg) * k;
            }
        }
        MarginModel { weights: w_avg, bias: b_avg, constant: None }
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        self.weights.iter().zip(row).map(|(a, v)| a * v).sum::<f64>() + self.bias
    }

    /// Class 1 iff the linear score is positive.
    pub fn predict(&self, row: &[f64]) -> usize {
        self.constant.unwrap_or_else(|| usize::from(self.score(row) > 0.0))
    }
}
