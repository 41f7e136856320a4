use num_complex::Complex64;

use crate::error::{Result, WalkError};

/// Amplitudes over the basis |a, v⟩, stored vertex-major: index `v * degree + a`.
///
/// The vector is the unabsorbed branch of the walk, so its squared norm may drop below one.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    degree: usize,
    amplitudes: Vec<Complex64>,
}

impl WalkState {
    pub fn zeros(degree: usize, vertex_count: usize) -> Self {
        Self { degree, amplitudes: vec![Complex64::new(0.0, 0.0); degree * vertex_count] }
    }

    /// The basis state |label, vertex⟩.
    pub fn basis(degree: usize, vertex_count: usize, label: usize, vertex: usize) -> Self {
        let mut state = Self::zeros(degree, vertex_count);
        state.amplitudes[vertex * degree + label] = Complex64::new(1.0, 0.0);
        state
    }

    pub fn from_amplitudes(degree: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if degree == 0 || !amplitudes.len().is_multiple_of(degree) {
            return Err(WalkError::Config(format!(
                "{} amplitudes do not split into blocks of degree {degree}",
                amplitudes.len()
            )));
        }
        Ok(Self { degree, amplitudes })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertex_count(&self) -> usize {
        self.amplitudes.len() / self.degree
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, label: usize, vertex: usize) -> Complex64 {
        self.amplitudes[vertex * self.degree + label]
    }

    pub fn set_amplitude(&mut self, label: usize, vertex: usize, value: Complex64) {
        self.amplitudes[vertex * self.degree + label] = value;
    }

    /// Label amplitudes at one vertex.
    pub fn vertex_block(&self, vertex: usize) -> &[Complex64] {
        &self.amplitudes[vertex * self.degree..(vertex + 1) * self.degree]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Probability of finding the walker at `vertex`.
    pub fn vertex_probability(&self, vertex: usize) -> f64 {
        self.vertex_block(vertex).iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&mut self, factor: f64) {
        for z in &mut self.amplitudes {
            *z *= factor;
        }
    }
}
