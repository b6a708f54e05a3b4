//! Tensor data of one inhomogeneous quantum group and its validator.
//!
//! Layouts (0-based, row-major):
//!
//! | symbol | layout | meaning |
//! |---|---|---|
//! | `r` | `[n][l][k][m]` | `f^n_m(Λ^l_k)` |
//! | `z` | `[n][k][q]` | `η̃^n(S(Λ^k_q))` |
//! | `z_tilde` | `[n][k][m]` | `f̃^n_m(S(p^k))` |
//! | `t` | `[n][m]` | `η̃^n(S(p^m))` |
//!
//! As operators, `R` acts on `V⊗V` with `⟨n,l|R|k,m⟩ = r[n][l][k][m]`,
//! `Z` maps `V → V⊗V` with `⟨n,k|Z|q⟩ = z[n][k][q]`, and `T ∈ V⊗V` has
//! components `t[n][m]`. `Q = λ·I`, so `R̃ = R + λ·I⊗I`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::report::{CheckEntry, CheckReport};
use crate::scalar::Scalar;
use crate::tensor::{contract, Matrix, Tensor};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("`{field}` has shape {got:?}, expected {want:?}")]
    Shape { field: &'static str, got: Vec<usize>, want: Vec<usize> },
    #[error("lambda = -1 is excluded (the translation sector needs lambda != -1)")]
    LambdaMinusOne,
    #[error("R is singular as an operator on V⊗V")]
    SingularR,
    #[error("graded signs must be +1 or -1")]
    BadSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QGroupInstance<S> {
    name: String,
    n: usize,
    r: Tensor<S>,
    z: Tensor<S>,
    z_tilde: Tensor<S>,
    z_tilde_supplied: bool,
    t: Tensor<S>,
    lambda: S,
    tolerance: f64,
}

fn check_shape<S: Scalar>(field: &'static str, t: &Tensor<S>, want: &[usize]) -> Result<(), InstanceError> {
    if t.shape() != want {
        return Err(InstanceError::Shape { field, got: t.shape().to_vec(), want: want.to_vec() });
    }
    Ok(())
}

impl<S: Scalar> QGroupInstance<S> {
    /// Builds and sanity-checks an instance. `z_tilde` is derived as `-RZ`
    /// when absent.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        r: Tensor<S>,
        z: Tensor<S>,
        t: Tensor<S>,
        lambda: S,
        z_tilde: Option<Tensor<S>>,
    ) -> Result<Self, InstanceError> {
        if n == 0 {
            return Err(InstanceError::ZeroDimension);
        }
        check_shape("r", &r, &[n; 4])?;
        check_shape("z", &z, &[n; 3])?;
        check_shape("t", &t, &[n; 2])?;
        if let Some(zt) = &z_tilde {
            check_shape("z_tilde", zt, &[n; 3])?;
        }
        if lambda.add(&S::one()).is_zero() {
            return Err(InstanceError::LambdaMinusOne);
        }
        if r.to_matrix().ok().and_then(|m| m.inverse()).is_none() {
            return Err(InstanceError::SingularR);
        }
        let supplied = z_tilde.is_some();
        let z_tilde = match z_tilde {
            Some(zt) => zt,
            None => derive_ztilde(&r, &z),
        };
        Ok(QGroupInstance {
            name: name.into(),
            n,
            r,
            z,
            z_tilde,
            z_tilde_supplied: supplied,
            t,
            lambda,
            tolerance: 1e-9,
        })
    }

    /// `R` = flip, everything else zero.
    pub fn classical(n: usize) -> Result<Self, InstanceError> {
        Self::new(
            format!("classical:{n}"),
            n,
            Tensor::flip(n),
            Tensor::zeros(&[n; 3]),
            Tensor::zeros(&[n; 2]),
            S::zero(),
            None,
        )
    }

    /// `r[n][l][k][m] = δ^n_m δ^l_k s(n) s(l)` with `Z = T = 0`, `λ = 0`.
    pub fn graded(signs: &[i64]) -> Result<Self, InstanceError> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(InstanceError::BadSign);
        }
        let n = signs.len();
        let r = Tensor::from_fn(&[n; 4], |i| {
            if i[0] == i[3] && i[1] == i[2] {
                S::from_i64(signs[i[0]] * signs[i[1]])
            } else {
                S::zero()
            }
        });
        let tag: String = signs.iter().map(|s| if *s > 0 { '+' } else { '-' }).collect();
        Self::new(
            format!("graded:{n}:{tag}"),
            n,
            r,
            Tensor::zeros(&[n; 3]),
            Tensor::zeros(&[n; 2]),
            S::zero(),
            None,
        )
    }

    /// The `N = 1` family with scalar data.
    pub fn scalar1(lambda: S, r: S, z: S, t: S) -> Result<Self, InstanceError> {
        let name = format!("scalar1:{lambda}:{r}:{z}:{t}");
        Self::new(
            name,
            1,
            Tensor::from_vec(&[1; 4], alloc::vec![r]).expect("shape"),
            Tensor::from_vec(&[1; 3], alloc::vec![z]).expect("shape"),
            Tensor::from_vec(&[1; 2], alloc::vec![t]).expect("shape"),
            lambda,
            None,
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    /// Replaces one entry of `R`; fails if `R` becomes singular.
    pub fn with_r_entry(mut self, idx: [usize; 4], v: S) -> Result<Self, InstanceError> {
        self.r.set(&idx, v);
        if self.r.to_matrix().ok().and_then(|m| m.inverse()).is_none() {
            return Err(InstanceError::SingularR);
        }
        if !self.z_tilde_supplied {
            self.z_tilde = derive_ztilde(&self.r, &self.z);
        }
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> &Tensor<S> {
        &self.r
    }
    pub fn z(&self) -> &Tensor<S> {
        &self.z
    }
    pub fn z_tilde(&self) -> &Tensor<S> {
        &self.z_tilde
    }
    pub fn z_tilde_supplied(&self) -> bool {
        self.z_tilde_supplied
    }
    pub fn t(&self) -> &Tensor<S> {
        &self.t
    }
    pub fn lambda(&self) -> &S {
        &self.lambda
    }
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `R̃ = R + λ·I⊗I`.
    pub fn r_tilde(&self) -> Tensor<S> {
        let lam = self.lambda.clone();
        let mut out = self.r.clone();
        for n in 0..self.n {
            for l in 0..self.n {
                let v = out.get(&[n, l, n, l]).add(&lam);
                out.set(&[n, l, n, l], v);
            }
        }
        out
    }

    fn mat(&self, t: &Tensor<S>, rows: usize, cols: usize) -> Matrix<S> {
        Matrix::from_fn(rows, cols, |i, j| t.data()[i * cols + j].clone())
    }

    pub(crate) fn r_matrix(&self) -> Matrix<S> {
        let d = self.n * self.n;
        self.mat(&self.r, d, d)
    }

    fn close(&self, m: &Matrix<S>) -> (bool, f64) {
        (m.data().iter().all(|x| x.is_negligible(self.tolerance)), m.max_abs())
    }

    fn entry(&self, id: &str, m: &Matrix<S>) -> CheckEntry {
        let (ok, res) = self.close(m);
        let e = CheckEntry::new(id, ok, res);
        match (ok, m.argmax_abs()) {
            (false, Some((i, j, _))) => e.with_counterexample(Some(format!("component ({i}, {j})"))),
            _ => e,
        }
    }

    /// Braid residual of `R` on `V⊗V⊗V`.
    pub fn check_yang_baxter(&self) -> CheckEntry {
        let r = self.r_matrix();
        let id = Matrix::identity(self.n);
        let r12 = r.kron(&id);
        let r23 = id.kron(&r);
        let lhs = r12.mul(&r23).mul(&r12);
        let rhs = r23.mul(&r12).mul(&r23);
        self.entry("yang_baxter", &lhs.sub(&rhs))
    }

    /// `R̃ − (1+λ)R⁻¹`.
    pub fn check_rtilde(&self) -> CheckEntry {
        let d = self.n * self.n;
        let rt = self.mat(&self.r_tilde(), d, d);
        match self.r_matrix().inverse() {
            Some(inv) => {
                let want = inv.scale(&S::one().add(&self.lambda));
                self.entry("rtilde_inverse", &rt.sub(&want))
            }
            None => CheckEntry::new("rtilde_inverse", false, f64::INFINITY).with_note("R is singular"),
        }
    }

    pub fn check_translation_conditions(&self) -> CheckReport {
        let n = self.n;
        let d = n * n;
        let mut rep = CheckReport::new();
        let id = Matrix::identity(n);
        let r = self.r_matrix();
        let rt = self.mat(&self.r_tilde(), d, d);
        let z = self.mat(&self.z, d, n);
        let zt = self.mat(&self.z_tilde, d, n);
        let t = self.mat(&self.t, d, 1);

        if self.lambda.is_zero() {
            rep.push(CheckEntry::skipped(
                "translation_t",
                "lambda = 0: the T condition for this branch is not checked",
            ));
        } else {
            rep.push(self.entry("translation_t", &t.add(&rt.mul(&t))));
        }

        // maps V⊗V → V⊗V⊗V
        let z_i = z.kron(&id);
        let i_z = id.kron(&z);
        let rt_i = rt.kron(&id);
        let i_r = id.kron(&r);
        let lhs = z_i.mul(&r).add(&rt_i.mul(&i_z).mul(&r));
        let rhs = i_r.mul(&z_i).add(&i_r.mul(&rt_i).mul(&i_z));
        rep.push(self.entry("translation_z", &lhs.sub(&rhs)));

        let zt_i = zt.kron(&id);
        let i_zt = id.kron(&zt);
        let i_r_minus = i_r.sub(&Matrix::identity(n * d));
        let res = i_r_minus
            .mul(&zt_i.mul(&t).sub(&i_zt.mul(&t)))
            .sub(&z_i.mul(&t))
            .sub(&rt_i.mul(&i_z).mul(&t));
        rep.push(self.entry("translation_zt", &res).reconstructed());
        rep
    }

    /// Supplied `Z̃` against `−RZ`.
    pub fn check_ztilde_consistency(&self) -> CheckEntry {
        let derived = derive_ztilde(&self.r, &self.z);
        let n = self.n;
        let diff = self.mat(&self.z_tilde.sub(&derived), n * n, n);
        let e = self.entry("ztilde_consistency", &diff);
        if self.z_tilde_supplied {
            e
        } else {
            e.with_note("derived")
        }
    }

    pub fn validate(&self) -> CheckReport {
        let mut rep = CheckReport::new();
        let lam_ok = !self.lambda.add(&S::one()).is_zero();
        rep.push(CheckEntry::new("lambda_not_minus_one", lam_ok, 0.0));
        rep.push(self.check_yang_baxter());
        rep.push(self.check_rtilde());
        rep.extend(self.check_translation_conditions());
        rep.push(self.check_ztilde_consistency());
        rep
    }
}

/// `Z̃ = −RZ`: `z̃[n][k][q] = −Σ_{a,b} r[n][k][a][b] z[a][b][q]`.
pub fn derive_ztilde<S: Scalar>(r: &Tensor<S>, z: &Tensor<S>) -> Tensor<S> {
    contract(r, z, &[(2, 0), (3, 1)]).expect("shapes checked").map(|x| x.neg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use crate::report::Status;

    type I = QGroupInstance<Exact>;

    fn q(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    #[test]
    fn classical_has_zero_ztilde() {
        let c = I::classical(2).unwrap();
        assert!(c.z_tilde().data().iter().all(|x| x.is_zero()));
        assert!(c.validate().all_passed());
    }

    #[test]
    fn graded_layout() {
        let g = I::graded(&[1, -1]).unwrap();
        assert_eq!(*g.r().get(&[1, 0, 0, 1]), q(-1, 1));
        assert_eq!(*g.r().get(&[1, 1, 1, 1]), q(1, 1));
        assert_eq!(*g.r().get(&[0, 1, 0, 1]), q(0, 1));
        assert!(g.validate().all_passed());
    }

    #[test]
    fn ztilde_of_flip_swaps_upper_indices() {
        let z = Tensor::from_fn(&[2; 3], |i| Exact::from_i64((i[0] * 4 + i[1] * 2 + i[2]) as i64 + 1));
        let zt = derive_ztilde(&Tensor::flip(2), &z);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    assert_eq!(*zt.get(&[a, b, c]), z.get(&[b, a, c]).neg());
                }
            }
        }
    }

    #[test]
    fn ztilde_scalar() {
        let s = I::scalar1(q(1, 1), q(-2, 1), q(5, 1), q(1, 1)).unwrap();
        assert_eq!(*s.z_tilde().get(&[0, 0, 0]), q(10, 1));
    }

    #[test]
    fn yang_baxter_detects_perturbation() {
        let c = I::classical(2).unwrap();
        assert_eq!(c.check_yang_baxter().status, Status::Pass);
        let bad = c.with_r_entry([0, 1, 0, 1], q(1, 1)).unwrap();
        let e = bad.check_yang_baxter();
        assert_eq!(e.status, Status::Fail);
        assert!(e.residual > 0.0);
        let id = I::new("id", 2, Tensor::identity(2, 2), Tensor::zeros(&[2; 3]), Tensor::zeros(&[2; 2]), q(0, 1), None)
            .unwrap();
        assert_eq!(id.check_yang_baxter().status, Status::Pass);
    }

    #[test]
    fn rtilde_scalar_cases() {
        let good = I::scalar1(q(1, 1), q(-2, 1), q(0, 1), q(1, 1)).unwrap();
        assert_eq!(*good.r_tilde().get(&[0; 4]), q(-1, 1));
        assert_eq!(good.check_rtilde().status, Status::Pass);
        let bad = I::scalar1(q(1, 1), q(3, 1), q(0, 1), q(1, 1)).unwrap();
        assert_eq!(bad.check_rtilde().status, Status::Fail);
    }

    #[test]
    fn scalar_translation_residuals_vanish() {
        let s = I::scalar1(q(1, 1), q(-2, 1), q(7, 3), q(1, 1)).unwrap();
        let rep = s.validate();
        assert!(rep.all_passed(), "{rep:?}");
        assert!(rep.get("translation_zt").unwrap().reconstruction);
        // r̃ ≠ −1 breaks the T condition
        let off = I::scalar1(q(1, 1), q(1, 1), q(0, 1), q(1, 1)).unwrap();
        assert_eq!(off.check_translation_conditions().get("translation_t").unwrap().status, Status::Fail);
    }

    #[test]
    fn rejects_bad_data() {
        assert_eq!(I::scalar1(q(-1, 1), q(1, 1), q(0, 1), q(0, 1)).unwrap_err(), InstanceError::LambdaMinusOne);
        assert_eq!(I::scalar1(q(0, 1), q(0, 1), q(0, 1), q(0, 1)).unwrap_err(), InstanceError::SingularR);
        let err = I::new("x", 2, Tensor::flip(3), Tensor::zeros(&[2; 3]), Tensor::zeros(&[2; 2]), q(0, 1), None);
        assert!(matches!(err, Err(InstanceError::Shape { field: "r", .. })));
    }

    #[test]
    fn rtilde_minus_r_is_lambda_identity() {
        let s = I::scalar1(q(1, 2), q(-3, 2), q(1, 1), q(2, 1)).unwrap();
        let diff = s.r_tilde().sub(s.r());
        assert_eq!(diff, Tensor::identity(1, 2).scale(&q(1, 2)));
    }
}
