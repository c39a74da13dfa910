use std::sync::{Arc, OnceLock};

use crate::core::{op_norm_upper_bound, LinOp, Point, ScaledIdentity, SharedLinOp, SharedSmooth};
use crate::error::{Error, Result};
use crate::prox::{Conjugate, Extended, Outer, SharedProx, ZeroFn};
use crate::scalar::Scalar;

/// min F₀(x) + E(x) + G(Kx − c).
///
/// Without K the outer function acts on the primal space directly, which is the form PP, FB and
/// DRS work with.
#[derive(Clone)]
pub struct CompositeProblem<T: Scalar> {
    pub f0: SharedProx<T>,
    pub e: Option<SharedSmooth<T>>,
    pub g: Outer<T>,
    pub k: Option<SharedLinOp<T>>,
    pub b_shift: Option<Point<T>>,
    primal_dim: usize,
    dual_dim: usize,
    k_norm: Arc<OnceLock<T>>,
}

impl<T: Scalar> CompositeProblem<T> {
    pub fn new(primal_dim: usize, f0: SharedProx<T>, g: Outer<T>) -> Result<Self> {
        if primal_dim == 0 {
            return Err(Error::EmptyPoint);
        }
        let p = Self {
            f0,
            e: None,
            g,
            k: None,
            b_shift: None,
            primal_dim,
            dual_dim: primal_dim,
            k_norm: Arc::new(OnceLock::new()),
        };
        p.validate()?;
        Ok(p)
    }

    /// Problem with only a prox-simple part G on the primal space.
    pub fn prox_only(primal_dim: usize, g: SharedProx<T>) -> Result<Self> {
        Self::new(primal_dim, Arc::new(ZeroFn), Outer::Primal(g))
    }

    pub fn with_smooth(mut self, e: SharedSmooth<T>) -> Result<Self> {
        self.e = Some(e);
        self.validate()?;
        Ok(self)
    }

    pub fn with_operator(mut self, k: SharedLinOp<T>) -> Result<Self> {
        self.dual_dim = k.out_dim();
        self.k = Some(k);
        self.k_norm = Arc::new(OnceLock::new());
        self.validate()?;
        Ok(self)
    }

    pub fn with_shift(mut self, c: Point<T>) -> Result<Self> {
        self.b_shift = Some(c);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let mismatch = |expected, got| Err(Error::DimensionMismatch { expected, got });
        if let Some(d) = self.f0.dim() {
            if d != self.primal_dim {
                return mismatch(self.primal_dim, d);
            }
        }
        if let Some(e) = &self.e {
            if e.dim() != self.primal_dim {
                return mismatch(self.primal_dim, e.dim());
            }
        }
        if let Some(k) = &self.k {
            if k.in_dim() != self.primal_dim {
                return mismatch(self.primal_dim, k.in_dim());
            }
        }
        if let Some(d) = self.g.dim() {
            if d != self.dual_dim {
                return mismatch(self.dual_dim, d);
            }
        }
        if let Some(c) = &self.b_shift {
            c.check_dim(self.dual_dim)?;
        }
        Ok(())
    }

    pub fn primal_dim(&self) -> usize {
        self.primal_dim
    }

    pub fn dual_dim(&self) -> usize {
        self.dual_dim
    }

    pub fn apply_k(&self, x: &Point<T>) -> Point<T> {
        match &self.k {
            Some(k) => k.apply(x),
            None => x.clone(),
        }
    }

    pub fn apply_k_adjoint(&self, y: &Point<T>) -> Point<T> {
        match &self.k {
            Some(k) => k.adjoint(y),
            None => y.clone(),
        }
    }

    /// Upper bound on ‖K‖ (1 without K), computed once.
    pub fn k_norm(&self) -> T {
        *self.k_norm.get_or_init(|| match &self.k {
            Some(k) => op_norm_upper_bound(&**k),
            None => T::one(),
        })
    }

    /// Lipschitz factor of ∇E: 0 without E, `None` when E does not declare it.
    pub fn smooth_lipschitz(&self) -> Option<T> {
        match &self.e {
            Some(e) => e.lipschitz(),
            None => Some(T::zero()),
        }
    }

    pub fn grad_e(&self, x: &Point<T>) -> Point<T> {
        match &self.e {
            Some(e) => e.grad(x),
            None => Point::zeros(x.dim()),
        }
    }

    /// F₀(x) + E(x).
    pub fn f_value(&self, x: &Point<T>) -> Extended<T> {
        let e = self.e.as_ref().map_or(T::zero(), |e| e.value(x));
        self.f0.value(x) + e
    }

    /// Kx − c.
    pub fn outer_arg(&self, x: &Point<T>) -> Point<T> {
        let kx = self.apply_k(x);
        match &self.b_shift {
            Some(c) => &kx - c,
            None => kx,
        }
    }

    /// J(x) = F₀(x) + E(x) + G(Kx − c); `None` when G is only known through G* and has no
    /// closed-form conjugate.
    pub fn primal_value(&self, x: &Point<T>) -> Option<Extended<T>> {
        Some(self.f_value(x) + self.g.primal_value(&self.outer_arg(x))?)
    }

    /// Conjugate of v ↦ G(v − c), i.e. G*(y) + ⟨c, y⟩.
    pub fn outer_conjugate_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        let lin = self.b_shift.as_ref().map_or(T::zero(), |c| c.dot(y));
        Some(self.g.dual_value(y)? + lin)
    }

    /// prox of σ times the conjugate of v ↦ G(v − c).
    pub fn prox_outer_conjugate(&self, sigma: T, y: &Point<T>) -> Point<T> {
        match &self.b_shift {
            Some(c) => self.g.prox_dual(sigma, &y.axpy(-sigma, c)),
            None => self.g.prox_dual(sigma, y),
        }
    }

    /// prox of τ times v ↦ G(v − c).
    pub fn prox_outer(&self, tau: T, v: &Point<T>) -> Point<T> {
        match &self.b_shift {
            Some(c) => &self.g.prox_primal(tau, &(v - c)) + c,
            None => self.g.prox_primal(tau, v),
        }
    }

    /// (F₀ + E)*(w), available when one of the two parts vanishes and the other has a closed-form
    /// conjugate.
    pub fn f_conjugate_value(&self, w: &Point<T>) -> Option<Extended<T>> {
        match &self.e {
            None => self.f0.conjugate_value(w),
            Some(e) if self.f0.is_zero() => e.conjugate_value(w).map(Extended::Finite),
            Some(_) => None,
        }
    }

    /// Dual objective −(F₀ + E)*(−K*y) − G*(y) − ⟨c, y⟩, when the conjugates are known.
    pub fn dual_value(&self, y: &Point<T>) -> Option<Extended<T>> {
        let a = self.f_conjugate_value(&-&self.apply_k_adjoint(y))?;
        let b = self.outer_conjugate_value(y)?;
        Some(a + b)
    }

    /// The ADMM form min F(x) + G(z) s.t. Kx − z = c.
    pub fn to_admm(&self) -> Result<AdmmProblem<T>> {
        if self.e.is_some() {
            return Err(Error::Shape("ADMM needs E absent; fold the smooth part into F".into()));
        }
        let g: SharedProx<T> = match &self.g {
            Outer::Primal(g) => g.clone(),
            Outer::Conjugate(gs) => Arc::new(Conjugate::new(gs.clone())?),
        };
        let a: SharedLinOp<T> = match &self.k {
            Some(k) => k.clone(),
            None => Arc::new(ScaledIdentity::identity(self.primal_dim)),
        };
        let b: SharedLinOp<T> = Arc::new(ScaledIdentity { n: self.dual_dim, s: -T::one() });
        let c = self.b_shift.clone().unwrap_or_else(|| Point::zeros(self.dual_dim));
        AdmmProblem::new(self.f0.clone(), g, a, b, c)
    }
}

/// min F(x) + G(z) s.t. Ax + Bz = c.
#[derive(Clone)]
pub struct AdmmProblem<T: Scalar> {
    pub f: SharedProx<T>,
    pub g: SharedProx<T>,
    pub a: SharedLinOp<T>,
    pub b: SharedLinOp<T>,
    pub c: Point<T>,
}

impl<T: Scalar> AdmmProblem<T> {
    pub fn new(f: SharedProx<T>, g: SharedProx<T>, a: SharedLinOp<T>, b: SharedLinOp<T>, c: Point<T>) -> Result<Self> {
        let m = c.dim();
        for (op, name) in [(&a, "A"), (&b, "B")] {
            if op.out_dim() != m {
                return Err(Error::Shape(format!("{name} maps into dimension {}, c has {m}", op.out_dim())));
            }
        }
        if let Some(d) = f.dim() {
            if d != a.in_dim() {
                return Err(Error::DimensionMismatch { expected: a.in_dim(), got: d });
            }
        }
        if let Some(d) = g.dim() {
            if d != b.in_dim() {
                return Err(Error::DimensionMismatch { expected: b.in_dim(), got: d });
            }
        }
        Ok(Self { f, g, a, b, c })
    }

    pub fn x_dim(&self) -> usize {
        self.a.in_dim()
    }

    pub fn z_dim(&self) -> usize {
        self.b.in_dim()
    }

    /// Ax + Bz − c.
    pub fn constraint_residual(&self, x: &Point<T>, z: &Point<T>) -> Point<T> {
        &(&self.a.apply(x) + &self.b.apply(z)) - &self.c
    }

    pub fn objective(&self, x: &Point<T>, z: &Point<T>) -> Extended<T> {
        self.f.value(x) + self.g.value(z)
    }
}
