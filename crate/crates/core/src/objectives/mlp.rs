//! Fully-connected tanh network whose weights are the optimization
//! variables: a desk-scale stand-in for a real training loss.
//!
//! The loss is mean squared error over a set of examples,
//! `L = (1/2B) sum_b |net(x_b) - y_b|^2`, with gradients by
//! backpropagation. Exact queries use the full dataset; stochastic draws use
//! minibatches sampled without replacement and reshuffled every epoch, so
//! the gradient noise comes from genuine subsampling.

use super::{Objective, StochasticObjective, SyntheticDataset};
use crate::error::{Error, Result};
use crate::num::Real;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Number of parameters (weights plus biases) of a dense network with the
/// given layer sizes `[in, h1, ..., out]`.
pub fn mlp_param_count(layer_sizes: &[usize]) -> usize {
    layer_sizes
        .windows(2)
        .map(|w| w[0] * w[1] + w[1])
        .sum()
}

/// MSE objective of a dense tanh network over a [`SyntheticDataset`].
///
/// Parameter layout per layer: weights row-major `(out x in)`, then biases.
#[derive(Debug, Clone)]
pub struct MlpObjective<F> {
    layer_sizes: Vec<usize>,
    dataset: SyntheticDataset<F>,
    batch_size: usize,
    rng: ChaCha8Rng,
    order: Vec<usize>,
    cursor: usize,
}

impl<F: Real> MlpObjective<F>
where
    StandardNormal: Distribution<F>,
{
    pub fn new(
        layer_sizes: Vec<usize>,
        dataset: SyntheticDataset<F>,
        batch_size: usize,
        seed: u64,
    ) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::invalid("layer_sizes", "need at least input and output sizes"));
        }
        if layer_sizes.iter().any(|&s| s == 0) {
            return Err(Error::invalid("layer_sizes", "zero-width layer"));
        }
        if layer_sizes[0] != dataset.n_features() {
            return Err(Error::shape("mlp input layer", dataset.n_features(), layer_sizes[0]));
        }
        if *layer_sizes.last().unwrap() != dataset.n_targets() {
            return Err(Error::shape(
                "mlp output layer",
                dataset.n_targets(),
                *layer_sizes.last().unwrap(),
            ));
        }
        if batch_size == 0 || batch_size > dataset.len() {
            return Err(Error::invalid(
                "batch_size",
                format!("{batch_size} not in 1..={}", dataset.len()),
            ));
        }
        let mut mlp = MlpObjective {
            layer_sizes,
            dataset,
            batch_size,
            rng: ChaCha8Rng::seed_from_u64(seed),
            order: Vec::new(),
            cursor: 0,
        };
        mlp.reshuffle();
        Ok(mlp)
    }

    /// Initial parameter vector: weights `N(0, 1/fan_in)`, biases zero.
    pub fn init_params(&self, seed: u64) -> Vec<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Vec::with_capacity(mlp_param_count(&self.layer_sizes));
        for w in self.layer_sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let scale = F::from((fan_in as f64).sqrt().recip()).unwrap();
            for _ in 0..fan_out * fan_in {
                let xi: F = StandardNormal.sample(&mut rng);
                params.push(xi * scale);
            }
            params.extend(std::iter::repeat(F::zero()).take(fan_out));
        }
        params
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn dataset(&self) -> &SyntheticDataset<F> {
        &self.dataset
    }

    /// Steps per epoch at the configured batch size (final partial batch
    /// counts as one step).
    pub fn batches_per_epoch(&self) -> usize {
        self.dataset.len().div_ceil(self.batch_size)
    }

    fn reshuffle(&mut self) {
        self.order = (0..self.dataset.len()).collect();
        self.order.shuffle(&mut self.rng);
        self.cursor = 0;
    }

    fn next_batch(&mut self) -> Vec<usize> {
        if self.cursor >= self.order.len() {
            self.reshuffle();
        }
        let end = (self.cursor + self.batch_size).min(self.order.len());
        let batch = self.order[self.cursor..end].to_vec();
        self.cursor = end;
        batch
    }

    /// Loss and gradient over the given example indices.
    fn loss_and_grad(&self, params: &[F], batch: &[usize]) -> (F, Vec<F>) {
        let (loss, grad) = self.eval(params, batch, true);
        (loss, grad.unwrap())
    }

    fn loss_only(&self, params: &[F], batch: &[usize]) -> F {
        self.eval(params, batch, false).0
    }

    /// Forward pass for all examples in `batch`; backward pass when
    /// `with_grad`. Gradients are accumulated per example and divided by the
    /// batch size at the end, matching the loss normalization.
    fn eval(&self, params: &[F], batch: &[usize], with_grad: bool) -> (F, Option<Vec<F>>) {
        assert_eq!(params.len(), mlp_param_count(&self.layer_sizes), "parameter vector length");
        let n_layers = self.layer_sizes.len() - 1;
        let half = F::from(0.5).unwrap();
        let batch_norm = F::from(batch.len()).unwrap();

        let mut loss = F::zero();
        let mut grad = if with_grad {
            Some(vec![F::zero(); params.len()])
        } else {
            None
        };

        // Per-layer parameter offsets into the flat vector.
        let mut offsets = Vec::with_capacity(n_layers);
        let mut off = 0;
        for w in self.layer_sizes.windows(2) {
            offsets.push(off);
            off += w[0] * w[1] + w[1];
        }

        let mut activations: Vec<Vec<F>> = Vec::with_capacity(n_layers + 1);
        for &example in batch {
            activations.clear();
            activations.push(self.dataset.input_row(example).to_vec());
            for l in 0..n_layers {
                let (n_in, n_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
                let w = &params[offsets[l]..offsets[l] + n_out * n_in];
                let b = &params[offsets[l] + n_out * n_in..offsets[l] + n_out * n_in + n_out];
                let input = activations.last().unwrap();
                let mut out = Vec::with_capacity(n_out);
                for j in 0..n_out {
                    let mut acc = b[j];
                    for (i, xi) in input.iter().enumerate() {
                        acc += w[j * n_in + i] * *xi;
                    }
                    // hidden layers tanh, output layer linear
                    out.push(if l + 1 < n_layers { acc.tanh() } else { acc });
                }
                activations.push(out);
            }

            let target = self.dataset.target_row(example);
            let output = activations.last().unwrap();
            let mut delta: Vec<F> = output
                .iter()
                .zip(target)
                .map(|(&p, &y)| p - y)
                .collect();
            loss += half * crate::num::l2_norm_sq(&delta) / batch_norm;

            let Some(grad) = grad.as_mut() else { continue };
            // Backward: delta holds dL/d(pre-activation) of the current layer.
            for l in (0..n_layers).rev() {
                let (n_in, n_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
                let input = &activations[l];
                let w_off = offsets[l];
                let b_off = w_off + n_out * n_in;
                for j in 0..n_out {
                    let d = delta[j] / batch_norm;
                    for (i, xi) in input.iter().enumerate() {
                        grad[w_off + j * n_in + i] += d * *xi;
                    }
                    grad[b_off + j] += d;
                }
                if l > 0 {
                    let w = &params[w_off..w_off + n_out * n_in];
                    let mut next = vec![F::zero(); n_in];
                    for (i, ni) in next.iter_mut().enumerate() {
                        let mut acc = F::zero();
                        for (j, dj) in delta.iter().enumerate() {
                            acc += w[j * n_in + i] * *dj;
                        }
                        // tanh'(z) = 1 - tanh(z)^2, with tanh(z) the stored activation
                        let a = input[i];
                        *ni = acc * (F::one() - a * a);
                    }
                    delta = next;
                }
            }
        }
        (loss, grad)
    }
}

/// Full-batch (exact) view: `value` and `gradient` evaluate over the whole
/// dataset.
impl<F: Real> Objective<F> for MlpObjective<F>
where
    StandardNormal: Distribution<F>,
{
    fn dimension(&self) -> usize {
        mlp_param_count(&self.layer_sizes)
    }

    fn value(&self, params: &[F]) -> F {
        let all: Vec<usize> = (0..self.dataset.len()).collect();
        self.loss_only(params, &all)
    }

    fn gradient(&self, params: &[F]) -> Vec<F> {
        let all: Vec<usize> = (0..self.dataset.len()).collect();
        self.loss_and_grad(params, &all).1
    }
}

impl<F: Real> StochasticObjective<F> for MlpObjective<F>
where
    StandardNormal: Distribution<F>,
{
    fn dimension(&self) -> usize {
        mlp_param_count(&self.layer_sizes)
    }

    fn exact_value(&self, params: &[F]) -> F {
        self.value(params)
    }

    fn exact_gradient(&self, params: &[F]) -> Vec<F> {
        self.gradient(params)
    }

    fn sample(&mut self, params: &[F]) -> (F, Vec<F>) {
        let batch = self.next_batch();
        self.loss_and_grad(params, &batch)
    }

    fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.reshuffle();
    }
}
