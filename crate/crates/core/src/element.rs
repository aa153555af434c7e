//! The concrete model and its matrix levels.
//!
//! A `Model` is a finite-dimensional C*-algebra V = (+)_j M_{d_j}(C) together
//! with a tolerance policy. An `Element` is a value of the rectangular level
//! M_{m,n}(V), stored as one dense complex matrix per block: the (a, b) entry
//! of the level occupies the (a*d_j .. (a+1)*d_j) x (b*d_j .. (b+1)*d_j)
//! sub-block of block j.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, TolerancePolicy};
use num_complex::Complex64;

/// Signature of the model algebra plus the tolerances every comparison uses.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    block_dims: Vec<usize>,
    tol: TolerancePolicy,
}

impl Model {
    pub fn new(block_dims: Vec<usize>, tol: TolerancePolicy) -> Result<Model> {
        if block_dims.is_empty() || block_dims.contains(&0) {
            return Err(Error::ShapeError(
                "block dimensions must be a nonempty list of positive integers".into(),
            ));
        }
        tol.validate()?;
        Ok(Model { block_dims, tol })
    }

    pub fn with_default_tol(block_dims: Vec<usize>) -> Result<Model> {
        Model::new(block_dims, TolerancePolicy::default())
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn block_count(&self) -> usize {
        self.block_dims.len()
    }

    pub fn tol(&self) -> &TolerancePolicy {
        &self.tol
    }

    /// The order unit e^n: identity in every block of M_n(V).
    pub fn unit(&self, n: usize) -> Element {
        let blocks = self
            .block_dims
            .iter()
            .map(|&d| CMat::identity(n * d))
            .collect();
        Element {
            model: self.clone(),
            m: n,
            n,
            blocks,
        }
    }

    pub fn zero(&self, m: usize, n: usize) -> Element {
        let blocks = self
            .block_dims
            .iter()
            .map(|&d| CMat::zeros(m * d, n * d))
            .collect();
        Element {
            model: self.clone(),
            m,
            n,
            blocks,
        }
    }
}

/// A value of M_{m,n}(V): one dense complex matrix per model block.
#[derive(Debug, Clone)]
pub struct Element {
    model: Model,
    m: usize,
    n: usize,
    blocks: Vec<CMat>,
}

impl Element {
    pub fn new(model: Model, m: usize, n: usize, blocks: Vec<CMat>) -> Result<Element> {
        if m == 0 || n == 0 {
            return Err(Error::ShapeError("element shape must be positive".into()));
        }
        if blocks.len() != model.block_count() {
            return Err(Error::ShapeError(format!(
                "expected {} blocks, got {}",
                model.block_count(),
                blocks.len()
            )));
        }
        for (j, (b, &d)) in blocks.iter().zip(model.block_dims()).enumerate() {
            if b.shape() != (m * d, n * d) {
                return Err(Error::ShapeError(format!(
                    "block {} has shape {:?}, expected {:?}",
                    j,
                    b.shape(),
                    (m * d, n * d)
                )));
            }
        }
        Ok(Element {
            model,
            m,
            n,
            blocks,
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn tol(&self) -> &TolerancePolicy {
        self.model.tol()
    }

    /// Amplification shape (m, n) in V-index units.
    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &CMat {
        &self.blocks[j]
    }

    pub fn same_model(&self, other: &Element) -> bool {
        self.model == other.model
    }

    fn zip_blocks(&self, other: &Element, f: impl Fn(&CMat, &CMat) -> CMat) -> Result<Element> {
        if !self.same_model(other) {
            return Err(Error::ModelMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeError(format!(
                "element shapes differ: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Element {
            model: self.model.clone(),
            m: self.m,
            n: self.n,
            blocks,
        })
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.zip_blocks(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.zip_blocks(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, k: Complex64) -> Element {
        self.map_blocks(|b| b.scale(k))
    }

    pub fn scale_re(&self, k: f64) -> Element {
        self.map_blocks(|b| b.scale_re(k))
    }

    pub fn neg(&self) -> Element {
        self.scale_re(-1.0)
    }

    pub fn adjoint(&self) -> Element {
        Element {
            model: self.model.clone(),
            m: self.n,
            n: self.m,
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// Blockwise product M_{m,n}(V) x M_{n,k}(V) -> M_{m,k}(V).
    pub fn mul(&self, other: &Element) -> Result<Element> {
        if !self.same_model(other) {
            return Err(Error::ModelMismatch);
        }
        if self.n != other.m {
            return Err(Error::ShapeError(format!(
                "inner dimensions differ: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.mul(b))
            .collect();
        Ok(Element {
            model: self.model.clone(),
            m: self.m,
            n: other.n,
            blocks,
        })
    }

    pub fn map_blocks(&self, f: impl Fn(&CMat) -> CMat) -> Element {
        Element {
            model: self.model.clone(),
            m: self.m,
            n: self.n,
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    /// Blockwise relative equality at the model's eps_eq.
    pub fn approx_eq(&self, other: &Element) -> Result<bool> {
        if !self.same_model(other) {
            return Err(Error::ModelMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeError("shape mismatch in comparison".into()));
        }
        let tol = self.tol();
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            if !linalg::mat_eq(a, b, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Worst blockwise relative defect against `other`.
    pub fn eq_defect(&self, other: &Element) -> Result<f64> {
        if !self.same_model(other) {
            return Err(Error::ModelMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeError("shape mismatch in comparison".into()));
        }
        let mut worst = 0.0f64;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            worst = worst.max(linalg::mat_defect(a, b));
        }
        Ok(worst)
    }

    pub fn is_zero(&self) -> bool {
        let tol = self.tol();
        self.blocks.iter().all(|b| b.fro_norm() <= tol.eps_eq)
    }

    pub fn fro_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let f = b.fro_norm();
                f * f
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Max over blocks of the largest singular value. In this model it equals
    /// the order-unit matrix norm; `matrix::order_unit_norm` recomputes the
    /// same quantity by bisection over PSD suspensions.
    pub fn spectral_norm(&self) -> f64 {
        let tol = *self.tol();
        self.blocks
            .iter()
            .map(|b| linalg::op_norm(b, &tol))
            .fold(0.0, f64::max)
    }

    /// Worst blockwise Hermitian defect relative to max(1, block norm).
    pub fn selfadjoint_defect(&self) -> f64 {
        if self.m != self.n {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .map(|b| b.hermitian_defect() / b.fro_norm().max(1.0))
            .fold(0.0, f64::max)
    }

    /// Blockwise PSD membership at the model's eps_psd.
    pub fn is_positive(&self) -> bool {
        let tol = self.tol();
        self.m == self.n && self.blocks.iter().all(|b| linalg::is_psd(b, tol))
    }

    /// Smallest eigenvalue across blocks of a self-adjoint element.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let tol = self.tol();
        let mut min = f64::INFINITY;
        for b in &self.blocks {
            let eig = linalg::herm_eig(&b.hermitize(), tol)?;
            if let Some(&l) = eig.values.first() {
                min = min.min(l);
            }
        }
        Ok(min)
    }
}

/// A square element whose blocks are Hermitian within eps_eq. Construction
/// re-symmetrizes the blocks, so the wrapped element is exactly self-adjoint.
#[derive(Debug, Clone)]
pub struct SelfAdjoint {
    element: Element,
}

impl SelfAdjoint {
    pub fn new(element: Element) -> Result<SelfAdjoint> {
        let (m, n) = element.shape();
        if m != n {
            return Err(Error::ShapeError(format!(
                "self-adjoint elements must be square, got {:?}",
                element.shape()
            )));
        }
        let defect = element.selfadjoint_defect();
        if defect > element.tol().eps_eq {
            return Err(Error::NotSelfAdjoint { defect });
        }
        Ok(SelfAdjoint {
            element: element.map_blocks(|b| b.hermitize()),
        })
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn into_element(self) -> Element {
        self.element
    }

    pub fn model(&self) -> &Model {
        self.element.model()
    }

    pub fn tol(&self) -> &TolerancePolicy {
        self.element.tol()
    }

    /// Amplification level n of M_n(V).
    pub fn level(&self) -> usize {
        self.element.shape().0
    }

    pub fn unit(model: &Model, n: usize) -> SelfAdjoint {
        SelfAdjoint {
            element: model.unit(n),
        }
    }

    pub fn zero(model: &Model, n: usize) -> SelfAdjoint {
        SelfAdjoint {
            element: model.zero(n, n),
        }
    }

    pub fn add(&self, other: &SelfAdjoint) -> Result<SelfAdjoint> {
        Ok(SelfAdjoint {
            element: self.element.add(&other.element)?,
        })
    }

    pub fn sub(&self, other: &SelfAdjoint) -> Result<SelfAdjoint> {
        Ok(SelfAdjoint {
            element: self.element.sub(&other.element)?,
        })
    }

    pub fn scale_re(&self, k: f64) -> SelfAdjoint {
        SelfAdjoint {
            element: self.element.scale_re(k),
        }
    }

    pub fn approx_eq(&self, other: &SelfAdjoint) -> Result<bool> {
        self.element.approx_eq(&other.element)
    }

    pub fn eq_defect(&self, other: &SelfAdjoint) -> Result<f64> {
        self.element.eq_defect(&other.element)
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.element.is_positive()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.element.spectral_norm()
    }
}
